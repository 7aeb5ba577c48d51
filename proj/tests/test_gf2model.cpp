#include <catch_amalgamated.hpp>

#include "gari/gari_model.hpp"
#include "gari/harness.hpp"
#include "support/dense_gf2.hpp"
#include "support/toy_models.hpp"

using namespace gari;
using gari_test::DenseGF2;

TEST_CASE("merge_duplicate_columns") {
    SECTION("distinct columns unchanged") {
        SparseBitMatrix m(2, 2, {{0, 0}, {1, 1}});
        auto [out, p] = merge_duplicate_columns(m, {0.1, 0.2});
        REQUIRE(out == m);
        REQUIRE(p == std::vector<double>{0.1, 0.2});
    }
    SECTION("two identical columns combine priors") {
        SparseBitMatrix m(2, 2, {{0, 0}, {0, 1}});
        auto [out, p] = merge_duplicate_columns(m, {0.1, 0.2});
        REQUIRE(out.n_cols() == 1);
        REQUIRE(p.size() == 1);
        REQUIRE_THAT(p[0], Catch::Matchers::WithinAbs(0.26, 1e-15));
    }
    SECTION("three p=0.5 columns stay at 0.5") {
        SparseBitMatrix m(1, 3, {{0, 0}, {0, 1}, {0, 2}});
        auto [out, p] = merge_duplicate_columns(m, {0.5, 0.5, 0.5});
        REQUIRE(out.n_cols() == 1);
        REQUIRE_THAT(p[0], Catch::Matchers::WithinAbs(0.5, 1e-15));
    }
    SECTION("column order is first occurrence") {
        // cols: a b a c -> a b c
        SparseBitMatrix m(2, 4, {{0, 0}, {0, 2}, {1, 1}, {1, 3}, {0, 3}});
        auto [out, p] = merge_duplicate_columns(m, {0.1, 0.1, 0.1, 0.1});
        REQUIRE(out.n_cols() == 3);
        REQUIRE(out.col(0)[0] == 0);
        REQUIRE(out.col(1)[0] == 1);
        REQUIRE(out.col(2).size() == 2);
    }
    SECTION("idempotent") {
        SplitMix64 rng(5);
        auto m = gari_test::random_distinct_cols(rng, 3, 4);
        // duplicate a column to force a merge
        std::vector<Entry> e = m.entries();
        for (auto r : m.col(1)) e.emplace_back(r, 4);
        SparseBitMatrix with_dup(3, 5, e);
        auto [m1, p1] = merge_duplicate_columns(with_dup, {0.1, 0.2, 0.3, 0.4, 0.25});
        auto [m2, p2] = merge_duplicate_columns(m1, p1);
        REQUIRE(m1 == m2);
        REQUIRE(p1 == p2);
    }
    SECTION("invalid prior rejected") {
        SparseBitMatrix m(1, 1, {{0, 0}});
        CHECK_THROWS_AS(merge_duplicate_columns(m, {1.5}), invalid_input);
    }
}

TEST_CASE("derive_uv identity case") {
    SplitMix64 rng(7);
    DetectorErrorModel dem;
    dem.dx = gari_test::random_distinct_cols(rng, 4, 5);
    dem.dz = gari_test::random_distinct_cols(rng, 4, 5);
    dem.dxp = dem.dx;
    dem.dzp = dem.dz;
    dem.priors_z.assign(5, 0.1);
    dem.priors_x.assign(5, 0.1);
    dem.priors_y.assign(5, 0.05);
    auto g = derive_uv(dem);
    REQUIRE(g.u == SparseBitMatrix::identity(5));
    REQUIRE(g.v == SparseBitMatrix::identity(5));
    g.validate();
}

TEST_CASE("derive_uv recovers a random sampling map") {
    SplitMix64 rng(8);
    for (int trial = 0; trial < 25; ++trial) {
        DetectorErrorModel dem;
        dem.dx = gari_test::random_distinct_cols(rng, 4, 6);
        dem.dz = gari_test::random_distinct_cols(rng, 4, 6);
        std::vector<std::uint32_t> map_u, map_v;
        std::vector<Entry> pxe, pze;
        for (std::uint32_t j = 0; j < 5; ++j) {
            map_u.push_back(static_cast<std::uint32_t>(rng.next_below(6)));
            map_v.push_back(static_cast<std::uint32_t>(rng.next_below(6)));
            for (auto r : dem.dx.col(map_u.back())) pxe.emplace_back(r, j);
            for (auto r : dem.dz.col(map_v.back())) pze.emplace_back(r, j);
        }
        dem.dxp = SparseBitMatrix(4, 5, pxe);
        dem.dzp = SparseBitMatrix(4, 5, pze);
        dem.priors_z.assign(6, 0.1);
        dem.priors_x.assign(6, 0.1);
        dem.priors_y.assign(5, 0.05);

        auto g = derive_uv(dem);
        // brute-force column matching, independent of the hash-based path
        for (std::uint32_t j = 0; j < 5; ++j) {
            auto dxp_col = DenseGF2::from_sparse(dem.dxp).column(j);
            std::uint32_t found = UINT32_MAX;
            for (std::uint32_t c = 0; c < 6; ++c)
                if (DenseGF2::from_sparse(dem.dx).column(c) == dxp_col) found = c;
            REQUIRE(g.u_row[j] == found);
            REQUIRE(g.u_row[j] == map_u[j]);
            REQUIRE(g.v_row[j] == map_v[j]);
        }
        // dxp = dx * u, dzp = dz * v exactly
        REQUIRE(g.dx.multiply(g.u) == dem.dxp);
        REQUIRE(g.dz.multiply(g.v) == dem.dzp);
    }
}

TEST_CASE("derive_uv rejects an unmatched primed column") {
    DetectorErrorModel dem;
    dem.dx = SparseBitMatrix(2, 2, {{0, 0}, {1, 1}});
    dem.dz = SparseBitMatrix(2, 2, {{0, 0}, {1, 1}});
    dem.dxp = SparseBitMatrix(2, 1, {{0, 0}, {1, 0}}); // column (1,1) not in dx
    dem.dzp = SparseBitMatrix(2, 1, {{0, 0}});
    dem.priors_z = {0.1, 0.1};
    dem.priors_x = {0.1, 0.1};
    dem.priors_y = {0.1};
    CHECK_THROWS_AS(derive_uv(dem), model_inconsistency);
}

TEST_CASE("prior to llr convention") {
    REQUIRE_THAT(prior_to_llr(0.1, 31.0), Catch::Matchers::WithinAbs(std::log(9.0), 1e-12));
    REQUIRE(prior_to_llr(0.0, 31.0) == 31.0);  // ceiling for deterministic priors
    REQUIRE(prior_to_llr(1.0, 31.0) == -31.0);
    REQUIRE(prior_to_llr(0.5, 31.0) == 0.0);
}

TEST_CASE("assemble_augmented block layout") {
    auto dem = gari_test::toy_rep3();
    auto g = derive_uv(dem);
    auto aug = assemble_augmented(g);
    const auto& gs = g.groups;
    REQUIRE(aug.n_rows() == g.dx.n_rows() + g.dz.n_rows() + gs.n_ez + gs.n_ex);
    REQUIRE(aug.n_cols() == gs.total());

    auto dense = DenseGF2::from_sparse(aug);
    std::size_t r_u = g.dx.n_rows() + g.dz.n_rows();
    std::size_t r_v = r_u + gs.n_ez;
    // identity blocks at the expected offsets
    for (std::size_t i = 0; i < gs.n_ez; ++i) {
        REQUIRE(dense.m[r_u + i][gs.off_ez() + i] == 1);
        REQUIRE(dense.m[r_u + i][gs.off_ebz() + i] == 1);
    }
    for (std::size_t i = 0; i < gs.n_ex; ++i) {
        REQUIRE(dense.m[r_v + i][gs.off_ex() + i] == 1);
        REQUIRE(dense.m[r_v + i][gs.off_ebx() + i] == 1);
    }
    // upper-left zero blocks
    for (std::size_t r = 0; r < g.dx.n_rows() + g.dz.n_rows(); ++r)
        for (std::size_t c = 0; c < gs.off_ebz(); ++c) REQUIRE(dense.m[r][c] == 0);
}

TEST_CASE("augmented matrix reproduces the original syndrome (change of variables)") {
    SplitMix64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        auto dem = gari_test::random_dem(rng);
        auto g = derive_uv(dem);
        auto aug = assemble_augmented(g);
        const auto& gs = g.groups;

        SplitMix64 shot_rng(rng.next_u64());
        auto shot = sample_errors(dem, 1.0, shot_rng);

        // build the augmented vector with ebar = e xor (U/V) e_Y
        std::vector<std::uint8_t> full(gs.total(), 0);
        for (std::size_t i = 0; i < gs.n_ez + gs.n_ex + gs.n_ey; ++i) full[i] = shot.error[i];
        for (std::size_t i = 0; i < gs.n_ez; ++i) full[gs.off_ebz() + i] = shot.error[i];
        for (std::size_t i = 0; i < gs.n_ex; ++i)
            full[gs.off_ebx() + i] = shot.error[gs.n_ez + i];
        for (std::size_t j = 0; j < gs.n_ey; ++j)
            if (shot.error[gs.off_ey() + j]) {
                full[gs.off_ebz() + g.u_row[j]] ^= 1;
                full[gs.off_ebx() + g.v_row[j]] ^= 1;
            }

        auto rhs = DenseGF2::from_sparse(aug).mul(full);
        for (std::size_t r = 0; r < g.dx.n_rows(); ++r) REQUIRE(rhs[r] == shot.syndrome.s_x[r]);
        for (std::size_t r = 0; r < g.dz.n_rows(); ++r)
            REQUIRE(rhs[g.dx.n_rows() + r] == shot.syndrome.s_z[r]);
        for (std::size_t r = g.dx.n_rows() + g.dz.n_rows(); r < aug.n_rows(); ++r)
            REQUIRE(rhs[r] == 0);
    }
}

TEST_CASE("recover_physical_error") {
    auto dem = gari_test::toy_rep3();
    auto g = derive_uv(dem);
    const auto& gs = g.groups;

    SECTION("all zero is consistent") {
        std::vector<std::uint8_t> hard(gs.total(), 0);
        auto rec = recover_physical_error(g, hard);
        REQUIRE(rec.consistent);
        for (auto b : rec.bits) REQUIRE(b == 0);
    }
    SECTION("single Y with matching ebar bits") {
        std::vector<std::uint8_t> hard(gs.total(), 0);
        hard[gs.off_ey() + 1] = 1;
        hard[gs.off_ebz() + g.u_row[1]] = 1;
        hard[gs.off_ebx() + g.v_row[1]] = 1;
        auto rec = recover_physical_error(g, hard);
        REQUIRE(rec.consistent);
        REQUIRE(rec.bits[gs.off_ey() + 1] == 1);
    }
    SECTION("violated change of variables is flagged") {
        std::vector<std::uint8_t> hard(gs.total(), 0);
        hard[gs.off_ebz()] = 1; // ebar_Z set without matching e_Z/e_Y
        auto rec = recover_physical_error(g, hard);
        REQUIRE_FALSE(rec.consistent);
    }
    SECTION("length mismatch rejected") {
        std::vector<std::uint8_t> hard(gs.total() - 1, 0);
        CHECK_THROWS_AS(recover_physical_error(g, hard), invalid_input);
    }
}
