#ifndef GARI_DECODER_HPP
#define GARI_DECODER_HPP

#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "gari/fixed_point.hpp"
#include "gari/gari_model.hpp"

namespace gari {

enum class SerialMatrix { DX, DZ };
enum class ParallelMatrix { U, V };
enum class Basis { X, Z };

/// Check processing orders for the serial unit plus the fixed alternation of
/// phases: step 1 runs D_X alone, primed steps pair D_Z with U, later plain
/// steps pair D_X with V.
struct Schedule {
    std::vector<std::uint32_t> dx_order;
    std::vector<std::uint32_t> dz_order;

    static Schedule canonical(const GariModel& g) {
        Schedule s;
        s.dx_order.resize(g.dx.n_rows());
        s.dz_order.resize(g.dz.n_rows());
        std::iota(s.dx_order.begin(), s.dx_order.end(), 0u);
        std::iota(s.dz_order.begin(), s.dz_order.end(), 0u);
        return s;
    }

    struct Phase {
        SerialMatrix serial;
        bool has_parallel;
        ParallelMatrix parallel;
    };

    /// Phase of half-step t (0-based): even t runs D_X (with V from t >= 2),
    /// odd t runs D_Z with U.
    static Phase phase(std::size_t t) {
        if (t % 2 == 0)
            return {SerialMatrix::DX, t >= 2, ParallelMatrix::V};
        return {SerialMatrix::DZ, true, ParallelMatrix::U};
    }
};

struct DecoderState {
    std::vector<double> posterior;  // per GARI variable, bits_vn domain
    std::vector<double> cn_dx;      // per dx edge, CSR order
    std::vector<double> cn_dz;      // per dz edge
    std::vector<double> m_u_to_ey;  // U -> e_Y, consumed by the next V pass
    std::vector<double> m_v_to_ey;  // V -> e_Y
    std::vector<double> m_u_to_ebz; // U -> ebar_Z feedback
    std::vector<double> m_v_to_ebx; // V -> ebar_X feedback
    std::vector<double> m_u_to_ez;  // U -> e_Z (scoring only)
    std::vector<double> m_v_to_ex;  // V -> e_X (scoring only)
    std::size_t step = 0;           // completed half-steps
    std::size_t dx_passes = 0;
    std::size_t dz_passes = 0;
    bool converged = false;

    static DecoderState init(const GariModel& g) {
        DecoderState s;
        s.posterior.assign(g.groups.total(), 0.0);
        s.cn_dx.assign(g.dx.n_entries(), 0.0);
        s.cn_dz.assign(g.dz.n_entries(), 0.0);
        s.m_u_to_ey.assign(g.groups.n_ey, 0.0);
        s.m_v_to_ey.assign(g.groups.n_ey, 0.0);
        s.m_u_to_ebz.assign(g.groups.n_ebz, 0.0);
        s.m_v_to_ebx.assign(g.groups.n_ebx, 0.0);
        s.m_u_to_ez.assign(g.groups.n_ez, 0.0);
        s.m_v_to_ex.assign(g.groups.n_ex, 0.0);
        return s;
    }

    std::vector<std::uint8_t> hard_decisions() const {
        std::vector<std::uint8_t> h(posterior.size());
        for (std::size_t i = 0; i < posterior.size(); ++i)
            h[i] = posterior[i] < 0.0 ? 1 : 0; // tie decodes to 0
        return h;
    }
};

/// Normalized min-sum check-node update. Masked slots are treated as held at
/// the positive maximum: excluded from the min and from the sign product, and
/// they produce no output (0 is written to their slot).
inline std::vector<double> check_update_minsum(std::span<const double> inputs,
                                               int syndrome_bit,
                                               std::span<const std::uint8_t> mask,
                                               const FixedPointSpec& spec) {
    if (inputs.size() != mask.size())
        throw invalid_input("check_update_minsum: input/mask length mismatch");
    std::size_t active = 0;
    double min1 = 0, min2 = 0;
    std::size_t argmin = 0;
    int sign_all = syndrome_bit ? -1 : 1;
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (!mask[i]) continue;
        double mag = std::abs(inputs[i]);
        if (active == 0 || mag < min1) {
            min2 = active == 0 ? mag : min1;
            min1 = mag;
            argmin = i;
        } else if (active == 1 || mag < min2) {
            min2 = mag;
        }
        if (inputs[i] < 0.0) sign_all = -sign_all; // sign(0) counts as +1
        ++active;
    }
    if (active < 2) throw degenerate_check("check_update_minsum: fewer than 2 active slots");

    std::vector<double> out(inputs.size(), 0.0);
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (!mask[i]) continue;
        double others_min = (i == argmin) ? min2 : min1;
        int s = sign_all;
        if (inputs[i] < 0.0) s = -s;
        out[i] = spec.clamp_cn(static_cast<double>(s) * spec.normalize(others_min));
    }
    return out;
}

/// One layered pass over dx or dz in schedule order. The first pass for a
/// matrix seeds its variable posteriors from the calibration LLRs.
inline void process_serial_layer(DecoderState& state, const GariModel& g,
                                 SerialMatrix which, const Syndrome& syn,
                                 const Schedule& schedule, const FixedPointSpec& spec) {
    const bool is_dx = which == SerialMatrix::DX;
    const SparseBitMatrix& m = is_dx ? g.dx : g.dz;
    const std::vector<std::uint32_t>& order = is_dx ? schedule.dx_order : schedule.dz_order;
    const std::vector<std::uint8_t>& sbits = is_dx ? syn.s_x : syn.s_z;
    std::vector<double>& cn = is_dx ? state.cn_dx : state.cn_dz;
    std::size_t voff = is_dx ? g.groups.off_ebz() : g.groups.off_ebx();
    std::size_t npass = is_dx ? state.dx_passes : state.dz_passes;
    if (sbits.size() != m.n_rows())
        throw invalid_input("process_serial_layer: syndrome length mismatch");

    if (npass == 0) {
        std::size_t n = is_dx ? g.groups.n_ebz : g.groups.n_ebx;
        for (std::size_t i = 0; i < n; ++i)
            state.posterior[voff + i] = spec.input_llr(g.llr0[voff + i]);
    }

    std::vector<double> in, out;
    std::vector<std::uint8_t> mask;
    for (auto c : order) {
        auto vars = m.row(c);
        if (vars.empty()) continue;
        std::size_t e0 = m.row_begin(c);
        in.resize(vars.size());
        mask.assign(vars.size(), 1);
        for (std::size_t k = 0; k < vars.size(); ++k)
            in[k] = spec.clamp_cn(state.posterior[voff + vars[k]] - cn[e0 + k]);
        out = check_update_minsum(in, sbits[c], mask, spec);
        for (std::size_t k = 0; k < vars.size(); ++k) {
            state.posterior[voff + vars[k]] = spec.clamp_vn(in[k] + out[k]);
            cn[e0 + k] = out[k];
        }
    }
    if (is_dx) ++state.dx_passes; else ++state.dz_passes;
}

/// One fully parallel pass over the U (or V) block rows. Each check reads a
/// fixed e_Z/e_X prior, the e_Y priors combined with the opposite matrix's
/// stored messages, and the extrinsic ebar value from the serial unit; its
/// outputs are stored for the opposite matrix and fed back into the ebar
/// posterior.
inline void process_uv(DecoderState& state, const GariModel& g, ParallelMatrix which,
                       const FixedPointSpec& spec) {
    const bool is_u = which == ParallelMatrix::U;
    if (is_u ? state.dx_passes == 0 : state.dz_passes == 0)
        throw scheduling_violation("process_uv: serial pass has not produced inputs yet");
    const SparseBitMatrix& m = is_u ? g.u : g.v;
    const std::vector<double>& opp_to_ey = is_u ? state.m_v_to_ey : state.m_u_to_ey;
    std::vector<double>& my_to_ey = is_u ? state.m_u_to_ey : state.m_v_to_ey;
    std::vector<double>& my_to_ebar = is_u ? state.m_u_to_ebz : state.m_v_to_ebx;
    std::vector<double>& my_to_prior = is_u ? state.m_u_to_ez : state.m_v_to_ex;
    std::size_t prior_off = is_u ? g.groups.off_ez() : g.groups.off_ex();
    std::size_t ebar_off = is_u ? g.groups.off_ebz() : g.groups.off_ebx();
    std::size_t ey_off = g.groups.off_ey();

    std::vector<double> in, out;
    std::vector<std::uint8_t> mask;
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        auto ys = m.row(r);
        in.resize(ys.size() + 2);
        mask.assign(ys.size() + 2, 1);
        // slot 0: prior variable, fixed at its initial LLR
        in[0] = spec.clamp_cn(spec.input_llr(g.llr0[prior_off + r]));
        // slots 1..n: e_Y variables, prior plus opposite-matrix message
        for (std::size_t k = 0; k < ys.size(); ++k)
            in[1 + k] = spec.clamp_cn(spec.input_llr(g.llr0[ey_off + ys[k]]) + opp_to_ey[ys[k]]);
        // last slot: ebar extrinsic from the serial unit
        double ext = spec.clamp_cn(state.posterior[ebar_off + r] - my_to_ebar[r]);
        in[ys.size() + 1] = ext;

        out = check_update_minsum(in, 0, mask, spec);

        my_to_prior[r] = out[0];
        for (std::size_t k = 0; k < ys.size(); ++k) my_to_ey[ys[k]] = out[1 + k];
        my_to_ebar[r] = out[ys.size() + 1];
        state.posterior[ebar_off + r] = spec.clamp_vn(ext + out[ys.size() + 1]);
    }
}

/// Parity check over the selected basis: dz * hard(ebar_X) == s_z for the
/// Z basis, dx * hard(ebar_Z) == s_x for the X basis.
inline bool parity_check(const DecoderState& state, const GariModel& g, Basis basis,
                         const Syndrome& syn) {
    const bool z = basis == Basis::Z;
    const SparseBitMatrix& m = z ? g.dz : g.dx;
    const std::vector<std::uint8_t>& sbits = z ? syn.s_z : syn.s_x;
    std::size_t voff = z ? g.groups.off_ebx() : g.groups.off_ebz();
    for (std::size_t r = 0; r < m.n_rows(); ++r) {
        std::uint8_t parity = 0;
        for (auto c : m.row(r))
            if (state.posterior[voff + c] < 0.0) parity ^= 1;
        if (parity != sbits[r]) return false;
    }
    return true;
}

struct StepTrace {
    std::size_t step;       // 1-based half-step
    std::string serial;     // "DX" or "DZ"
    std::string parallel;   // "", "U" or "V"
    bool parity_checked;
    bool converged;
};

struct DecodeResult {
    std::vector<std::uint8_t> hard; // all GARI variables
    GroupSizes groups;
    std::size_t iterations = 0;     // completed (D_X, D_Z) pairs (ceil)
    bool converged = false;
    std::vector<StepTrace> trace;
};

/// Runs the full interleaved schedule: D_X, (D_Z | U), (D_X | V), ... with
/// convergence checking after the serial step of the selected basis.
inline DecodeResult decode(const GariModel& g, const Syndrome& syn,
                           const FixedPointSpec& spec, std::size_t max_iters,
                           Basis basis = Basis::Z,
                           const Schedule* schedule_in = nullptr) {
    if (max_iters < 1) throw invalid_input("decode: max_iters must be >= 1");
    spec.validate();
    if (syn.s_x.size() != g.dx.n_rows() || syn.s_z.size() != g.dz.n_rows())
        throw invalid_input("decode: syndrome dimensions mismatch");
    Schedule canonical;
    const Schedule& schedule = schedule_in ? *schedule_in : (canonical = Schedule::canonical(g));

    DecoderState state = DecoderState::init(g);
    DecodeResult res;
    res.groups = g.groups;

    for (std::size_t iter = 1; iter <= max_iters && !state.converged; ++iter) {
        for (int half = 0; half < 2 && !state.converged; ++half) {
            auto phase = Schedule::phase(state.step);
            process_serial_layer(state, g, phase.serial, syn, schedule, spec);
            if (phase.has_parallel) process_uv(state, g, phase.parallel, spec);
            ++state.step;

            bool check_now = (basis == Basis::Z) == (phase.serial == SerialMatrix::DZ);
            bool ok = false;
            if (check_now) {
                ok = parity_check(state, g, basis, syn);
                if (ok) state.converged = true;
            }
            res.trace.push_back({state.step,
                                 phase.serial == SerialMatrix::DX ? "DX" : "DZ",
                                 phase.has_parallel
                                     ? (phase.parallel == ParallelMatrix::U ? "U" : "V")
                                     : "",
                                 check_now, ok});
        }
    }

    // Posteriors of the physical groups, for scoring.
    const auto& gs = g.groups;
    for (std::size_t r = 0; r < gs.n_ez; ++r)
        state.posterior[gs.off_ez() + r] =
            spec.input_llr(g.llr0[gs.off_ez() + r]) + state.m_u_to_ez[r];
    for (std::size_t r = 0; r < gs.n_ex; ++r)
        state.posterior[gs.off_ex() + r] =
            spec.input_llr(g.llr0[gs.off_ex() + r]) + state.m_v_to_ex[r];
    for (std::size_t j = 0; j < gs.n_ey; ++j)
        state.posterior[gs.off_ey() + j] = spec.input_llr(g.llr0[gs.off_ey() + j]) +
                                           state.m_u_to_ey[j] + state.m_v_to_ey[j];

    res.hard = state.hard_decisions();
    res.converged = state.converged;
    res.iterations = std::max(state.dx_passes, state.dz_passes);
    return res;
}

} // namespace gari

#endif
