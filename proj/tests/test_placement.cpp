#include <catch_amalgamated.hpp>

#include <set>

#include "gari/placement.hpp"
#include "support/toy_models.hpp"

using namespace gari;

namespace {

// Exhaustive minimum tile count for conflict-free serial placement.
std::size_t min_tiles_brute(const detail::SerialConflicts& cf) {
    for (std::size_t k = 1;; ++k) {
        std::vector<std::uint32_t> assign(cf.n_vars, 0);
        // count in base k over all assignments (tiny n only)
        while (true) {
            std::vector<std::set<std::uint32_t>> tiles(k);
            bool ok = true;
            for (std::size_t v = 0; v < cf.n_vars && ok; ++v)
                for (auto c : cf.var_checks[v]) {
                    if (tiles[assign[v]].count(c)) { ok = false; break; }
                    tiles[assign[v]].insert(c);
                }
            if (ok) return k;
            std::size_t i = 0;
            for (; i < cf.n_vars; ++i) {
                if (++assign[i] < k) break;
                assign[i] = 0;
            }
            if (i == cf.n_vars) break;
        }
    }
}

// Exhaustive best min-separation over all check orderings (tiny n only).
std::size_t best_separation_brute(const SparseBitMatrix& m) {
    std::size_t n = m.n_rows();
    std::vector<std::uint32_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0u);
    std::size_t best = 0;
    do {
        std::size_t sep = n;
        std::vector<std::ptrdiff_t> last(m.n_cols(), -1);
        for (std::size_t t = 0; t < n; ++t) {
            for (auto v : m.row(perm[t])) {
                if (last[v] >= 0) sep = std::min(sep, t - static_cast<std::size_t>(last[v]));
                last[v] = static_cast<std::ptrdiff_t>(t);
            }
        }
        best = std::max(best, sep);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

} // namespace

TEST_CASE("serial placement is conflict free (property)") {
    SplitMix64 rng(41);
    for (int trial = 0; trial < 25; ++trial) {
        auto dem = gari_test::random_dem(rng, 4, 7, 4, 7, 5);
        auto g = derive_uv(dem);
        auto tm = map_serial_variables(g);
        detail::SerialConflicts cf(g);
        REQUIRE(tm.serial_assignment.size() == cf.n_vars);
        // no two variables on one tile share a check
        std::vector<std::set<std::uint32_t>> tile_checks(tm.n_serial_tiles);
        for (std::size_t v = 0; v < cf.n_vars; ++v)
            for (auto c : cf.var_checks[v]) {
                REQUIRE_FALSE(tile_checks[tm.serial_assignment[v]].count(c));
                tile_checks[tm.serial_assignment[v]].insert(c);
            }
        // load bookkeeping is consistent
        std::size_t sum = 0;
        for (std::size_t t = 0; t < tm.n_serial_tiles; ++t)
            sum += tm.serial_load_dx[t] + tm.serial_load_dz[t];
        REQUIRE(sum == cf.n_vars);
    }
}

TEST_CASE("serial placement tile count is close to the exhaustive optimum") {
    SplitMix64 rng(42);
    for (int trial = 0; trial < 8; ++trial) {
        auto dem = gari_test::random_dem(rng, 3, 5, 3, 5, 3);
        auto g = derive_uv(dem);
        detail::SerialConflicts cf(g);
        if (cf.n_vars > 10) continue;
        auto tm = map_serial_variables(g);
        std::size_t opt = min_tiles_brute(cf);
        REQUIRE(tm.n_serial_tiles >= opt);
        REQUIRE(tm.n_serial_tiles <= opt + 1); // greedy slack
    }
}

TEST_CASE("map_serial_variables honors pre-opened target tiles") {
    auto dem = gari_test::toy_rep3();
    auto g = derive_uv(dem);
    auto tm = map_serial_variables(g, 10);
    REQUIRE(tm.n_serial_tiles >= 10);
}

TEST_CASE("map_uv_checks respects degree and capacity") {
    SplitMix64 rng(43);
    for (int trial = 0; trial < 25; ++trial) {
        auto dem = gari_test::random_dem(rng);
        auto g = derive_uv(dem);
        TileMap tm;
        tm.uv_capacity = 3;
        std::size_t max_deg = 2;
        for (std::size_t r = 0; r < g.u.n_rows(); ++r)
            max_deg = std::max(max_deg, g.u.row_degree(r) + 2);
        for (std::size_t r = 0; r < g.v.n_rows(); ++r)
            max_deg = std::max(max_deg, g.v.row_degree(r) + 2);
        std::size_t n_tiles = (std::max(g.u.n_rows(), g.v.n_rows()) + 2) / 3 + 1;
        std::vector<std::size_t> degs(n_tiles, max_deg);
        map_uv_checks(g, degs, tm);

        std::vector<std::size_t> count_u(n_tiles, 0), count_v(n_tiles, 0);
        for (std::size_t r = 0; r < g.u.n_rows(); ++r) {
            auto t = tm.uv_assignment_u[r];
            REQUIRE(degs[t] >= g.u.row_degree(r) + 2);
            ++count_u[t];
        }
        for (std::size_t r = 0; r < g.v.n_rows(); ++r) ++count_v[tm.uv_assignment_v[r]];
        for (std::size_t t = 0; t < n_tiles; ++t) {
            REQUIRE(count_u[t] <= tm.uv_capacity);
            REQUIRE(count_u[t] == tm.uv_load_u[t]);
            REQUIRE(count_v[t] == tm.uv_load_v[t]);
        }
    }
}

TEST_CASE("map_uv_checks failure modes") {
    auto dem = gari_test::toy_rep3();
    auto g = derive_uv(dem);
    TileMap tm;
    CHECK_THROWS_AS(map_uv_checks(g, {}, tm), invalid_input);
    // all tiles too small for any check (min degree is 3)
    CHECK_THROWS_AS(map_uv_checks(g, {2, 2}, tm), infeasible_mapping);
    // capacity too small for the check count
    TileMap tiny;
    tiny.uv_capacity = 1;
    CHECK_THROWS_AS(map_uv_checks(g, {100}, tiny), infeasible_mapping);
}

TEST_CASE("order_checks separation matches an independent recount and is near optimal") {
    SplitMix64 rng(44);
    for (int trial = 0; trial < 10; ++trial) {
        auto dem = gari_test::random_dem(rng, 4, 8, 4, 8, 4);
        auto g = derive_uv(dem);
        if (g.dx.n_rows() > 7) continue;
        auto ord = order_checks(g, SerialMatrix::DX, 1);
        // permutation covers all checks exactly once
        std::set<std::uint32_t> seen(ord.permutation.begin(), ord.permutation.end());
        REQUIRE(seen.size() == g.dx.n_rows());

        std::size_t opt = best_separation_brute(g.dx);
        REQUIRE(ord.min_separation >= 1);
        REQUIRE(ord.min_separation <= opt);
        REQUIRE(2 * ord.min_separation + 1 >= opt); // greedy stays in range of optimum
    }
}

TEST_CASE("order_checks accepted flag and strict variant") {
    auto dem = gari_test::toy_rep3();
    auto g = derive_uv(dem);
    auto ord = order_checks(g, SerialMatrix::DX, 1);
    REQUIRE(ord.accepted == (ord.min_separation > 1));
    // a huge pipeline depth cannot be satisfied by 2 checks
    auto deep = order_checks(g, SerialMatrix::DX, 100);
    REQUIRE_FALSE(deep.accepted);
    CHECK_THROWS_AS(order_checks_strict(g, SerialMatrix::DX, 100), stale_hazard);
    CHECK_THROWS_AS(order_checks(g, SerialMatrix::DX, 0), invalid_input);
}

TEST_CASE("ordering and placement are deterministic") {
    SplitMix64 rng(45);
    auto dem = gari_test::random_dem(rng);
    auto g = derive_uv(dem);
    auto a = map_serial_variables(g);
    auto b = map_serial_variables(g);
    REQUIRE(a.serial_assignment == b.serial_assignment);
    auto oa = order_checks(g, SerialMatrix::DZ, 2);
    auto ob = order_checks(g, SerialMatrix::DZ, 2);
    REQUIRE(oa.permutation == ob.permutation);
}

TEST_CASE("load_cycles picks the busiest tile per pass") {
    TileMap tm;
    tm.serial_load_dx = {345, 100, 7};
    tm.serial_load_dz = {12, 286};
    auto [ldx, ldz] = load_cycles(tm);
    REQUIRE(ldx == 345);
    REQUIRE(ldz == 286);
    REQUIRE(ldx + ldz == 631);
    TileMap empty;
    CHECK_THROWS_AS(load_cycles(empty), invalid_input);
}
