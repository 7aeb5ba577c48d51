#include <catch_amalgamated.hpp>

#include "gari/decoder.hpp"
#include "gari/rng.hpp"

using namespace gari;

static FixedPointSpec alpha1_spec() {
    FixedPointSpec s;
    s.alpha = 1.0;
    return s;
}

TEST_CASE("check_update_minsum hand examples") {
    auto spec = alpha1_spec();
    std::vector<double> in = {4, -2, 6};
    std::vector<std::uint8_t> mask = {1, 1, 1};

    SECTION("zero syndrome") {
        auto out = check_update_minsum(in, 0, mask, spec);
        REQUIRE(out == std::vector<double>{-2, 4, -2});
    }
    SECTION("syndrome flips all signs") {
        auto out = check_update_minsum(in, 1, mask, spec);
        REQUIRE(out == std::vector<double>{2, -4, 2});
    }
    SECTION("masked slot is inert") {
        std::vector<double> in4 = {4, -2, 6, 123};
        std::vector<std::uint8_t> mask4 = {1, 1, 1, 0};
        auto out = check_update_minsum(in4, 0, mask4, spec);
        REQUIRE(out[0] == -2);
        REQUIRE(out[1] == 4);
        REQUIRE(out[2] == -2);
        REQUIRE(out[3] == 0);
    }
}

TEST_CASE("check_update_minsum alpha and saturation") {
    FixedPointSpec spec; // alpha 3/4, cn width 8
    std::vector<double> in = {120, -120, 126};
    std::vector<std::uint8_t> mask = {1, 1, 1};
    auto out = check_update_minsum(in, 0, mask, spec);
    REQUIRE(out[0] == -90.0); // 0.75 * 120
    for (auto v : out) REQUIRE(std::abs(v) <= spec.sat_cn());
}

TEST_CASE("sign(0) counts as positive and magnitude 0 wins the min") {
    auto spec = alpha1_spec();
    std::vector<double> in = {0, -5, 7};
    std::vector<std::uint8_t> mask = {1, 1, 1};
    auto out = check_update_minsum(in, 0, mask, spec);
    REQUIRE(out[0] == -5);
    REQUIRE(out[1] == 0.0);
    REQUIRE(out[2] == 0.0); // |0| is the min for the others
    REQUIRE(std::signbit(out[1]) == false);
}

TEST_CASE("degenerate checks rejected") {
    auto spec = alpha1_spec();
    std::vector<double> in = {4, -2};
    std::vector<std::uint8_t> mask = {1, 0};
    CHECK_THROWS_AS(check_update_minsum(in, 0, mask, spec), degenerate_check);
}

TEST_CASE("outputs always within the check-node width (property)") {
    FixedPointSpec spec;
    SplitMix64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 2 + rng.next_below(8);
        std::vector<double> in(n);
        std::vector<std::uint8_t> mask(n, 1);
        for (auto& v : in)
            v = static_cast<double>(static_cast<std::int64_t>(rng.next_below(2001)) - 1000);
        auto out = check_update_minsum(in, static_cast<int>(rng.next_below(2)), mask, spec);
        for (auto v : out) REQUIRE(std::abs(v) <= spec.sat_cn());
    }
}
