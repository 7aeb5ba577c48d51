#ifndef GARI_PLACEMENT_HPP
#define GARI_PLACEMENT_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "gari/decoder.hpp"
#include "gari/gari_model.hpp"

namespace gari {

/// Variable-to-tile and check-to-tile assignments. Serial variables are the
/// dx/dz variables (ebar_Z then ebar_X), indexed 0..cols(dx)+cols(dz)-1.
struct TileMap {
    std::size_t n_serial_tiles = 0;
    std::vector<std::uint32_t> serial_assignment; // serial variable -> tile
    std::size_t n_uv_tiles = 0;
    std::size_t uv_capacity = 500; // checks per tile per matrix side
    std::vector<std::uint32_t> uv_assignment_u;   // U check -> tile
    std::vector<std::uint32_t> uv_assignment_v;   // V check -> tile
    std::vector<std::size_t> serial_load_dx;      // per tile, dx-side variables
    std::vector<std::size_t> serial_load_dz;
    std::vector<std::size_t> uv_load_u;           // per tile, U checks
    std::vector<std::size_t> uv_load_v;
};

struct CheckOrdering {
    std::vector<std::uint32_t> permutation;
    std::size_t min_separation = 0;
    bool accepted = false; // min_separation > pipeline depth
};

namespace detail {

// Conflict adjacency: for each serial variable, the checks it participates
// in (dx checks and dz checks in one id space).
struct SerialConflicts {
    std::size_t n_vars;
    std::size_t n_checks;
    std::vector<std::vector<std::uint32_t>> var_checks;
    std::vector<std::size_t> degree; // number of distinct conflicting variables

    explicit SerialConflicts(const GariModel& g) {
        std::size_t nz = g.dx.n_cols(), nx = g.dz.n_cols();
        n_vars = nz + nx;
        n_checks = g.dx.n_rows() + g.dz.n_rows();
        var_checks.resize(n_vars);
        for (std::size_t c = 0; c < nz; ++c)
            for (auto r : g.dx.col(c)) var_checks[c].push_back(r);
        for (std::size_t c = 0; c < nx; ++c)
            for (auto r : g.dz.col(c))
                var_checks[nz + c].push_back(static_cast<std::uint32_t>(r + g.dx.n_rows()));

        std::vector<std::vector<std::uint32_t>> check_vars(n_checks);
        for (std::size_t v = 0; v < n_vars; ++v)
            for (auto c : var_checks[v]) check_vars[c].push_back(static_cast<std::uint32_t>(v));
        degree.assign(n_vars, 0);
        std::vector<std::uint32_t> seen(n_vars, UINT32_MAX);
        for (std::uint32_t v = 0; v < n_vars; ++v) {
            std::size_t d = 0;
            for (auto c : var_checks[v])
                for (auto w : check_vars[c])
                    if (w != v && seen[w] != v) { seen[w] = v; ++d; }
            degree[v] = d;
        }
    }
};

} // namespace detail

/// Greedy conflict-free assignment of serial variables to tiles: variables in
/// descending conflict-degree order, each placed on the feasible tile with
/// the smallest load, opening a new tile when none fits.
inline TileMap map_serial_variables(const GariModel& g, std::size_t target_tiles = 0) {
    detail::SerialConflicts cf(g);
    std::vector<std::uint32_t> order(cf.n_vars);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (cf.degree[a] != cf.degree[b]) return cf.degree[a] > cf.degree[b];
        return a < b;
    });

    TileMap tm;
    tm.serial_assignment.assign(cf.n_vars, 0);
    std::vector<std::vector<std::uint8_t>> tile_checks; // tile -> check occupancy
    std::vector<std::size_t> tile_load;
    auto open_tile = [&] {
        tile_checks.emplace_back(cf.n_checks, 0);
        tile_load.push_back(0);
    };
    for (std::size_t t = 0; t < target_tiles; ++t) open_tile();

    for (auto v : order) {
        std::size_t best = SIZE_MAX;
        for (std::size_t t = 0; t < tile_checks.size(); ++t) {
            bool ok = true;
            for (auto c : cf.var_checks[v])
                if (tile_checks[t][c]) { ok = false; break; }
            if (ok && (best == SIZE_MAX || tile_load[t] < tile_load[best])) best = t;
        }
        if (best == SIZE_MAX) {
            best = tile_checks.size();
            open_tile();
        }
        tm.serial_assignment[v] = static_cast<std::uint32_t>(best);
        for (auto c : cf.var_checks[v]) tile_checks[best][c] = 1;
        ++tile_load[best];
    }
    tm.n_serial_tiles = tile_checks.size();
    tm.serial_load_dx.assign(tm.n_serial_tiles, 0);
    tm.serial_load_dz.assign(tm.n_serial_tiles, 0);
    std::size_t nz = g.dx.n_cols();
    for (std::size_t v = 0; v < cf.n_vars; ++v) {
        if (v < nz) ++tm.serial_load_dx[tm.serial_assignment[v]];
        else ++tm.serial_load_dz[tm.serial_assignment[v]];
    }
    return tm;
}

/// Greedy largest-checks-to-largest-tiles mapping of the U and V checks.
/// tile_degrees lists each tile's maximum supported check degree; a check of
/// degree d goes to the least-loaded feasible tile (tie: lowest index).
inline void map_uv_checks(const GariModel& g, const std::vector<std::size_t>& tile_degrees,
                          TileMap& tm) {
    if (tile_degrees.empty()) throw invalid_input("map_uv_checks: no tiles");
    tm.n_uv_tiles = tile_degrees.size();

    auto assign_side = [&](const SparseBitMatrix& m, std::vector<std::uint32_t>& assignment,
                           std::vector<std::size_t>& load) {
        assignment.assign(m.n_rows(), 0);
        load.assign(tile_degrees.size(), 0);
        std::vector<std::uint32_t> order(m.n_rows());
        std::iota(order.begin(), order.end(), 0u);
        // check degree = prior var + ebar var + e_Y row weight
        auto deg = [&](std::uint32_t r) { return m.row_degree(r) + 2; };
        std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            if (deg(a) != deg(b)) return deg(a) > deg(b);
            return a < b;
        });
        for (auto r : order) {
            std::size_t best = SIZE_MAX;
            for (std::size_t t = 0; t < tile_degrees.size(); ++t) {
                if (tile_degrees[t] < deg(r) || load[t] >= tm.uv_capacity) continue;
                if (best == SIZE_MAX || load[t] < load[best]) best = t;
            }
            if (best == SIZE_MAX)
                throw infeasible_mapping("map_uv_checks: no tile fits check degree/capacity");
            assignment[r] = static_cast<std::uint32_t>(best);
            ++load[best];
        }
    };
    assign_side(g.u, tm.uv_assignment_u, tm.uv_load_u);
    assign_side(g.v, tm.uv_assignment_v, tm.uv_load_v);
}

/// Greedy serial ordering that maximizes the minimum index distance between
/// checks sharing a variable: repeatedly schedule the check whose variables
/// were least recently touched (tie: lowest check index).
inline CheckOrdering order_checks(const GariModel& g, SerialMatrix which,
                                  std::size_t pipeline_depth) {
    if (pipeline_depth < 1) throw invalid_input("order_checks: pipeline_depth must be >= 1");
    const SparseBitMatrix& m = which == SerialMatrix::DX ? g.dx : g.dz;
    std::size_t n = m.n_rows();
    CheckOrdering ord;
    ord.permutation.reserve(n);
    std::vector<std::ptrdiff_t> last(m.n_cols(), -static_cast<std::ptrdiff_t>(n) * 4);
    std::vector<std::uint8_t> used(n, 0);
    for (std::size_t t = 0; t < n; ++t) {
        std::size_t best = SIZE_MAX;
        std::ptrdiff_t best_gap = -1;
        for (std::size_t c = 0; c < n; ++c) {
            if (used[c]) continue;
            std::ptrdiff_t gap = static_cast<std::ptrdiff_t>(n) * 8;
            for (auto v : m.row(c)) {
                std::ptrdiff_t d = static_cast<std::ptrdiff_t>(t) - last[v];
                if (d < gap) gap = d;
            }
            if (gap > best_gap) { best_gap = gap; best = c; }
        }
        used[best] = 1;
        ord.permutation.push_back(static_cast<std::uint32_t>(best));
        for (auto v : m.row(best)) last[v] = static_cast<std::ptrdiff_t>(t);
    }
    // independent recount of the achieved separation
    ord.min_separation = n;
    std::vector<std::ptrdiff_t> pos_last(m.n_cols(), -1);
    for (std::size_t t = 0; t < n; ++t) {
        for (auto v : m.row(ord.permutation[t])) {
            if (pos_last[v] >= 0) {
                std::size_t d = t - static_cast<std::size_t>(pos_last[v]);
                if (d < ord.min_separation) ord.min_separation = d;
            }
            pos_last[v] = static_cast<std::ptrdiff_t>(t);
        }
    }
    ord.accepted = ord.min_separation > pipeline_depth;
    return ord;
}

/// As order_checks, but a separation not exceeding the pipeline depth is an
/// error; callers that can insert stalls should use order_checks directly.
inline CheckOrdering order_checks_strict(const GariModel& g, SerialMatrix which,
                                         std::size_t pipeline_depth) {
    CheckOrdering ord = order_checks(g, which, pipeline_depth);
    if (!ord.accepted)
        throw stale_hazard("order_checks: min separation " +
                           std::to_string(ord.min_separation) + " does not exceed pipeline depth");
    return ord;
}

/// Per-pass load cycles: the largest per-tile variable count of each matrix.
inline std::pair<std::size_t, std::size_t> load_cycles(const TileMap& tm) {
    if (tm.serial_load_dx.empty() && tm.serial_load_dz.empty())
        throw invalid_input("load_cycles: serial assignment missing");
    auto mx = [](const std::vector<std::size_t>& v) {
        return v.empty() ? std::size_t{0} : *std::max_element(v.begin(), v.end());
    };
    return {mx(tm.serial_load_dx), mx(tm.serial_load_dz)};
}

} // namespace gari

#endif
