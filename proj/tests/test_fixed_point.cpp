#include <catch_amalgamated.hpp>

#include "gari/fixed_point.hpp"

using namespace gari;

TEST_CASE("quantize") {
    REQUIRE(quantize(0.0, 6) == 0.0);
    REQUIRE(quantize(1000.0, 6) == 31.0);
    REQUIRE(quantize(-1000.0, 6) == -31.0);
    REQUIRE(quantize(-2.5, 8) == -3.0); // round half away from zero
    REQUIRE(quantize(2.5, 8) == 3.0);
    REQUIRE(quantize(2.4, 8) == 2.0);
    CHECK_THROWS_AS(quantize(1.0, 1), invalid_input);
}

TEST_CASE("saturation bounds are symmetric") {
    FixedPointSpec spec;
    REQUIRE(spec.sat_llr() == 31.0);
    REQUIRE(spec.sat_cn() == 127.0);
    REQUIRE(spec.sat_vn() == 511.0);
    REQUIRE(spec.clamp_cn(-200.0) == -127.0);
    REQUIRE(spec.clamp_vn(1000.0) == 511.0);
}

TEST_CASE("real-valued mode bypasses the grid") {
    FixedPointSpec spec;
    spec.mode = NumericMode::real_valued;
    REQUIRE(spec.input_llr(2.1972) == 2.1972);
    REQUIRE(spec.clamp_cn(1e6) == 1e6);
    REQUIRE(spec.normalize(2.0) == 1.5);
}

TEST_CASE("quantized normalization rounds back to the grid") {
    FixedPointSpec spec; // alpha = 3/4
    REQUIRE(spec.normalize(4.0) == 3.0);
    REQUIRE(spec.normalize(2.0) == 2.0); // 1.5 rounds away from zero
    REQUIRE(spec.normalize(0.0) == 0.0);
}

TEST_CASE("spec validation") {
    FixedPointSpec bad;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), invalid_input);
    bad = FixedPointSpec{};
    bad.bits_llr = 1;
    CHECK_THROWS_AS(bad.validate(), invalid_input);
}
