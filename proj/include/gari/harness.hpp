#ifndef GARI_HARNESS_HPP
#define GARI_HARNESS_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "gari/decoder.hpp"
#include "gari/gari_model.hpp"
#include "gari/placement.hpp"
#include "gari/rng.hpp"
#include "gari/timing.hpp"

namespace gari {

struct ExperimentConfig {
    FixedPointSpec spec;
    std::size_t shots = 1;
    std::uint64_t seed = 0;
    double physical_error_scale = 1.0;
    std::size_t max_iters = 64;
    std::size_t ensemble_size = 1;
    Basis basis = Basis::Z;
    std::size_t rounds = 12;       // reporting metadata only
    double clock_period_ns = 3.647;

    void validate() const {
        if (shots < 1) throw invalid_input("ExperimentConfig: shots must be >= 1");
        if (ensemble_size < 1) throw invalid_input("ExperimentConfig: ensemble_size must be >= 1");
        spec.validate();
    }
};

struct SampledShot {
    std::vector<std::uint8_t> error; // over (e_Z, e_X, e_Y)
    Syndrome syndrome;
};

/// Samples each mechanism independently with its (scaled) prior and applies
/// the original detector matrix: s_X = dx e_Z + dxp e_Y, s_Z = dz e_X + dzp e_Y.
inline SampledShot sample_errors(const DetectorErrorModel& dem, double scale,
                                 SplitMix64& rng) {
    std::size_t nz = dem.dx.n_cols(), nx = dem.dz.n_cols(), ny = dem.dxp.n_cols();
    SampledShot shot;
    shot.error.assign(nz + nx + ny, 0);
    shot.syndrome.s_x.assign(dem.dx.n_rows(), 0);
    shot.syndrome.s_z.assign(dem.dz.n_rows(), 0);
    auto fire = [&](double p) {
        double q = p * scale;
        if (q > 1.0) throw invalid_input("sample_errors: scaled prior > 1");
        return rng.bernoulli(q) ? 1 : 0;
    };
    for (std::size_t c = 0; c < nz; ++c)
        if ((shot.error[c] = fire(dem.priors_z[c])))
            for (auto r : dem.dx.col(c)) shot.syndrome.s_x[r] ^= 1;
    for (std::size_t c = 0; c < nx; ++c)
        if ((shot.error[nz + c] = fire(dem.priors_x[c])))
            for (auto r : dem.dz.col(c)) shot.syndrome.s_z[r] ^= 1;
    for (std::size_t c = 0; c < ny; ++c)
        if ((shot.error[nz + nx + c] = fire(dem.priors_y[c]))) {
            for (auto r : dem.dxp.col(c)) shot.syndrome.s_x[r] ^= 1;
            for (auto r : dem.dzp.col(c)) shot.syndrome.s_z[r] ^= 1;
        }
    return shot;
}

struct MemberStats {
    std::size_t converged = 0;
    std::size_t wins = 0;
    double mean_iterations = 0; // over this member's converged shots
};

struct BenchReport {
    std::size_t shots = 0;
    std::size_t converged_shots = 0;
    std::size_t logical_errors = 0; // flip observed or no member converged
    double converged_fraction = 0;
    double logical_error_rate = 0;
    std::map<std::size_t, std::size_t> iteration_histogram; // winner iterations
    double mean_iterations = 0;
    double mean_latency_ns = 0;
    std::vector<MemberStats> members;
    std::string rng_name = SplitMix64::name();
};

/// Default architecture mapping for a model: heuristic serial placement and
/// uniform U,V tiles sized from the capacity and the largest check degree.
inline TileMap default_tile_map(const GariModel& g, std::size_t uv_capacity = 500) {
    TileMap tm = map_serial_variables(g);
    tm.uv_capacity = uv_capacity;
    std::size_t max_deg = 2;
    for (std::size_t r = 0; r < g.u.n_rows(); ++r)
        max_deg = std::max(max_deg, g.u.row_degree(r) + 2);
    for (std::size_t r = 0; r < g.v.n_rows(); ++r)
        max_deg = std::max(max_deg, g.v.row_degree(r) + 2);
    std::size_t n_checks = std::max(g.u.n_rows(), g.v.n_rows());
    std::size_t n_tiles = (n_checks + uv_capacity - 1) / uv_capacity;
    if (n_tiles == 0) n_tiles = 1;
    map_uv_checks(g, std::vector<std::size_t>(n_tiles, max_deg), tm);
    return tm;
}

/// Serial check order for ensemble member m: member 0 keeps the canonical
/// order, higher members get a seeded Fisher-Yates permutation.
inline Schedule member_schedule(const GariModel& g, std::uint64_t seed, std::size_t member) {
    Schedule s = Schedule::canonical(g);
    if (member == 0) return s;
    auto shuffle = [&](std::vector<std::uint32_t>& v, std::uint64_t salt) {
        SplitMix64 rng(seed, 0x07de7200u ^ salt, member);
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.next_below(i)]);
    };
    shuffle(s.dx_order, 1);
    shuffle(s.dz_order, 2);
    return s;
}

inline BenchReport run_shots(const DetectorErrorModel& dem, const ExperimentConfig& cfg) {
    cfg.validate();
    GariModel g = derive_uv(dem);
    std::vector<Schedule> schedules;
    for (std::size_t m = 0; m < cfg.ensemble_size; ++m)
        schedules.push_back(member_schedule(g, cfg.seed, m));

    BenchReport rep;
    rep.shots = cfg.shots;
    rep.members.resize(cfg.ensemble_size);
    std::vector<double> member_iter_sum(cfg.ensemble_size, 0);
    double iter_sum = 0;
    std::size_t nz = g.groups.n_ez, nx = g.groups.n_ex, ny = g.groups.n_ey;

    for (std::size_t shot = 0; shot < cfg.shots; ++shot) {
        SplitMix64 rng(cfg.seed, shot, 0);
        SampledShot s = sample_errors(dem, cfg.physical_error_scale, rng);

        std::size_t winner = SIZE_MAX, winner_iters = SIZE_MAX;
        DecodeResult winner_res;
        for (std::size_t m = 0; m < cfg.ensemble_size; ++m) {
            DecodeResult r = decode(g, s.syndrome, cfg.spec, cfg.max_iters, cfg.basis,
                                    &schedules[m]);
            if (r.converged) {
                ++rep.members[m].converged;
                member_iter_sum[m] += static_cast<double>(r.iterations);
                if (r.iterations < winner_iters) {
                    winner = m;
                    winner_iters = r.iterations;
                    winner_res = std::move(r);
                }
            }
        }

        if (winner == SIZE_MAX) {
            ++rep.logical_errors; // non-convergence counted as failure
            continue;
        }
        ++rep.members[winner].wins;
        ++rep.converged_shots;
        ++rep.iteration_histogram[winner_iters];
        iter_sum += static_cast<double>(winner_iters);

        PhysicalError rec = recover_physical_error(g, winner_res.hard);
        if (dem.observables.n_cols() != 0) {
            std::vector<std::uint8_t> diff(nz + nx + ny);
            for (std::size_t i = 0; i < diff.size(); ++i)
                diff[i] = rec.bits[i] ^ s.error[i];
            auto flips = dem.observables.mul_vec(diff);
            if (std::any_of(flips.begin(), flips.end(), [](std::uint8_t b) { return b; }))
                ++rep.logical_errors;
        }
    }

    rep.converged_fraction = static_cast<double>(rep.converged_shots) /
                             static_cast<double>(rep.shots);
    rep.logical_error_rate = static_cast<double>(rep.logical_errors) /
                             static_cast<double>(rep.shots);
    if (rep.converged_shots)
        rep.mean_iterations = iter_sum / static_cast<double>(rep.converged_shots);
    for (std::size_t m = 0; m < cfg.ensemble_size; ++m)
        if (rep.members[m].converged)
            rep.members[m].mean_iterations =
                member_iter_sum[m] / static_cast<double>(rep.members[m].converged);

    TileMap tm = default_tile_map(g);
    TimingReport tr = cycle_model(g, tm);
    rep.mean_latency_ns = latency_ns(tr, cfg.clock_period_ns, rep.mean_iterations);
    return rep;
}

} // namespace gari

#endif
