#ifndef GARI_FIXED_POINT_HPP
#define GARI_FIXED_POINT_HPP

#include <cmath>
#include <cstdint>

#include "gari/errors.hpp"

namespace gari {

enum class NumericMode { quantized, real_valued };

/// Bit widths and normalization factor for the quantized datapath.
/// Saturation is symmetric: +/-(2^(w-1)-1), the most negative code unused.
struct FixedPointSpec {
    int bits_llr = 6;
    int bits_cn = 8;
    int bits_vn = 10;
    double alpha = 0.75;
    NumericMode mode = NumericMode::quantized;

    void validate() const {
        if (bits_llr < 2 || bits_cn < 2 || bits_vn < 2)
            throw invalid_input("FixedPointSpec: widths must be >= 2");
        if (!(alpha > 0.0 && alpha <= 1.0))
            throw invalid_input("FixedPointSpec: alpha must be in (0,1]");
    }

    static double saturation(int width) {
        return static_cast<double>((std::int64_t{1} << (width - 1)) - 1);
    }
    double sat_llr() const { return saturation(bits_llr); }
    double sat_cn() const { return saturation(bits_cn); }
    double sat_vn() const { return saturation(bits_vn); }

    bool quantized() const { return mode == NumericMode::quantized; }

    // Clamp points of the datapath; identity in real-valued reference mode.
    double clamp_cn(double x) const { return quantized() ? clamp(x, sat_cn()) : x; }
    double clamp_vn(double x) const { return quantized() ? clamp(x, sat_vn()) : x; }

    /// Input LLR as seen by the decoder: quantized to bits_llr or passed
    /// through untouched in reference mode.
    double input_llr(double x) const {
        return quantized() ? clamp(round_half_away(x), sat_llr()) : x;
    }

    /// Normalization after the min: exact in reference mode, rounded
    /// half-away-from-zero back to the integer grid in quantized mode.
    double normalize(double mag) const {
        double m = alpha * mag;
        return quantized() ? round_half_away(m) : m;
    }

    static double clamp(double x, double bound) {
        if (x > bound) return bound;
        if (x < -bound) return -bound;
        return x;
    }

    static double round_half_away(double x) {
        return x < 0 ? -std::floor(-x + 0.5) : std::floor(x + 0.5);
    }
};

/// Round-half-away-from-zero to the unit integer grid, saturated to the
/// symmetric bound of the given width.
inline double quantize(double x, int width) {
    if (width < 2) throw invalid_input("quantize: width must be >= 2");
    return FixedPointSpec::clamp(FixedPointSpec::round_half_away(x),
                                 FixedPointSpec::saturation(width));
}

} // namespace gari

#endif
