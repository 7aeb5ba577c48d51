#ifndef GARI_TIMING_HPP
#define GARI_TIMING_HPP

#include <algorithm>
#include <cstdint>
#include <vector>

#include "gari/gari_model.hpp"
#include "gari/placement.hpp"

namespace gari {

struct PipelineDepths {
    std::size_t serial = 8;
    std::size_t uv = 10;
};

/// Routing-cycle overheads as fractions of the messages handled per tile.
/// Defaults follow the measured bands: 15% into the U,V unit, 20% for the
/// U,V feedback crossbar, 10% back to the serial unit.
struct RoutingOverheads {
    double d_to_uv = 0.15;
    double uv_to_uv = 0.20;
    double uv_to_d = 0.10;
};

/// U-phase and V-phase chains against their paired serial phase budgets.
/// The chain for U (route in, process, route out both legs) must fit inside
/// the D_Z serial phase; symmetrically for V inside D_X.
struct PhaseBudget {
    double u_chain_cycles = 0;
    double v_chain_cycles = 0;
    std::size_t u_budget_cycles = 0; // = serial D_Z phase
    std::size_t v_budget_cycles = 0; // = serial D_X phase
    bool overlap_ok = false;
};

struct TimingReport {
    std::size_t cycles_load = 0;
    std::size_t cycles_dx = 0;
    std::size_t cycles_dz = 0;
    double cycles_route_down = 0; // serial -> U,V leg, per step
    double cycles_uv = 0;         // U,V processing incl. pipeline fill
    double cycles_route_up = 0;   // U,V -> serial + U,V feedback legs
    std::size_t cycles_fill = 0;
    std::size_t stall_cycles = 0; // stale-hazard penalty per iteration
    double clock_period_ns = 0;
    bool overlap_ok = false;
    PhaseBudget budget;

    /// Total cycles for i iterations; holds the closed form
    /// fill + (dx + dz) * i whenever overlap_ok.
    double total_cycles(double i) const {
        return static_cast<double>(cycles_fill) +
               (static_cast<double>(cycles_dx + cycles_dz + stall_cycles)) * i;
    }
};

inline PhaseBudget compute_phase_budget(const TileMap& tm, std::size_t cycles_dx,
                                        std::size_t cycles_dz, const PipelineDepths& depths,
                                        const RoutingOverheads& oh) {
    auto mx = [](const std::vector<std::size_t>& v) {
        return v.empty() ? std::size_t{0} : *std::max_element(v.begin(), v.end());
    };
    double mu = static_cast<double>(mx(tm.uv_load_u));
    double mv = static_cast<double>(mx(tm.uv_load_v));
    PhaseBudget b;
    b.u_chain_cycles = mu * (1.0 + oh.d_to_uv) + static_cast<double>(depths.uv) +
                       mu * oh.uv_to_uv + mu * oh.uv_to_d;
    b.v_chain_cycles = mv * (1.0 + oh.d_to_uv) + static_cast<double>(depths.uv) +
                       mv * oh.uv_to_uv + mv * oh.uv_to_d;
    b.u_budget_cycles = cycles_dz;
    b.v_budget_cycles = cycles_dx;
    b.overlap_ok = b.u_chain_cycles <= static_cast<double>(b.u_budget_cycles) &&
                   b.v_chain_cycles <= static_cast<double>(b.v_budget_cycles);
    return b;
}

/// Closed-form cycle model. Serial phases cost one cycle per check; the U,V
/// chain is hidden under the paired serial phase when the budget holds.
/// Optional check orderings contribute stall cycles for stale hazards
/// (pipeline_depth - separation per violating pair).
inline TimingReport cycle_model(const GariModel& g, const TileMap& tm,
                                const PipelineDepths& depths = {},
                                const RoutingOverheads& oh = {},
                                const CheckOrdering* dx_order = nullptr,
                                const CheckOrdering* dz_order = nullptr) {
    TimingReport r;
    r.cycles_dx = g.dx.n_rows();
    r.cycles_dz = g.dz.n_rows();
    r.cycles_fill = depths.uv;
    if (!tm.serial_load_dx.empty() || !tm.serial_load_dz.empty()) {
        auto [ldx, ldz] = load_cycles(tm);
        r.cycles_load = ldx + ldz;
    }
    auto stalls = [&](const CheckOrdering* ord) -> std::size_t {
        if (!ord || ord->min_separation > depths.serial) return 0;
        return depths.serial - ord->min_separation;
    };
    r.stall_cycles = stalls(dx_order) + stalls(dz_order);
    r.budget = compute_phase_budget(tm, r.cycles_dx, r.cycles_dz, depths, oh);
    r.overlap_ok = r.budget.overlap_ok;
    auto mx = [](const std::vector<std::size_t>& v) {
        return v.empty() ? std::size_t{0} : *std::max_element(v.begin(), v.end());
    };
    double m = static_cast<double>(std::max(mx(tm.uv_load_u), mx(tm.uv_load_v)));
    r.cycles_route_down = m * oh.d_to_uv;
    r.cycles_uv = m + static_cast<double>(depths.uv);
    r.cycles_route_up = m * (oh.uv_to_uv + oh.uv_to_d);
    return r;
}

inline double latency_ns(const TimingReport& report, double clock_period_ns, double iterations) {
    if (!(clock_period_ns > 0)) throw invalid_input("latency_ns: clock period must be > 0");
    return report.total_cycles(iterations) * clock_period_ns;
}

inline PhaseBudget verify_overlap(const GariModel& g, const TileMap& tm,
                                  const TimingReport& report,
                                  const PipelineDepths& depths = {},
                                  const RoutingOverheads& oh = {}) {
    (void)g;
    return compute_phase_budget(tm, report.cycles_dx, report.cycles_dz, depths, oh);
}

} // namespace gari

#endif
