#ifndef GARI_GARI_MODEL_HPP
#define GARI_GARI_MODEL_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "gari/dem.hpp"
#include "gari/sparse_bit_matrix.hpp"

namespace gari {

/// Sizes of the five variable groups, in augmented-matrix column order:
/// e_Z, e_X, e_Y, ebar_Z, ebar_X.
struct GroupSizes {
    std::size_t n_ez = 0;
    std::size_t n_ex = 0;
    std::size_t n_ey = 0;
    std::size_t n_ebz = 0; // = cols(dx)
    std::size_t n_ebx = 0; // = cols(dz)

    std::size_t total() const { return n_ez + n_ex + n_ey + n_ebz + n_ebx; }
    std::size_t off_ez() const { return 0; }
    std::size_t off_ex() const { return n_ez; }
    std::size_t off_ey() const { return n_ez + n_ex; }
    std::size_t off_ebz() const { return n_ez + n_ex + n_ey; }
    std::size_t off_ebx() const { return n_ez + n_ex + n_ey + n_ebz; }
};

struct GariModel {
    SparseBitMatrix dx;
    SparseBitMatrix dz;
    SparseBitMatrix u; // |e_Z| rows x |e_Y| cols, unit columns
    SparseBitMatrix v; // |e_X| rows x |e_Y| cols, unit columns
    GroupSizes groups;
    std::vector<double> llr0; // per variable, pre-quantization

    // u/v unit-column maps: Y column j touches exactly row u_row[j] / v_row[j].
    std::vector<std::uint32_t> u_row;
    std::vector<std::uint32_t> v_row;

    void validate() const {
        if (groups.n_ez != dx.n_cols() || groups.n_ex != dz.n_cols() ||
            groups.n_ebz != dx.n_cols() || groups.n_ebx != dz.n_cols())
            throw model_inconsistency("GariModel: group sizes inconsistent with dx/dz");
        if (u.n_rows() != groups.n_ez || v.n_rows() != groups.n_ex ||
            u.n_cols() != groups.n_ey || v.n_cols() != groups.n_ey)
            throw model_inconsistency("GariModel: u/v shape mismatch");
        if (llr0.size() != groups.total())
            throw model_inconsistency("GariModel: llr0 length mismatch");
        for (std::size_t j = 0; j < groups.n_ey; ++j)
            if (u.col_degree(j) != 1 || v.col_degree(j) != 1)
                throw model_inconsistency("GariModel: u/v column is not a unit vector");
    }
};

struct GariOptions {
    /// LLR magnitude used for deterministic priors (p = 0 or 1); default is
    /// the 6-bit fixed-point saturation value.
    double llr_ceiling = 31.0;
};

inline double prior_to_llr(double p, double ceiling) {
    if (p <= 0.0) return ceiling;
    if (p >= 1.0) return -ceiling;
    double l = std::log((1.0 - p) / p);
    if (l > ceiling) l = ceiling;
    if (l < -ceiling) l = -ceiling;
    return l;
}

/// Derives the selection matrices U, V by matching each Y column against the
/// unique dx/dz column it repeats, and fills initial LLRs for all five
/// variable groups (ebar LLRs copy the corresponding e_Z/e_X priors).
inline GariModel derive_uv(const DetectorErrorModel& dem, const GariOptions& opt = {}) {
    dem.validate();
    GariModel g;
    g.dx = dem.dx;
    g.dz = dem.dz;
    g.groups.n_ez = dem.dx.n_cols();
    g.groups.n_ex = dem.dz.n_cols();
    g.groups.n_ey = dem.dxp.n_cols();
    g.groups.n_ebz = dem.dx.n_cols();
    g.groups.n_ebx = dem.dz.n_cols();

    auto match = [](const SparseBitMatrix& base, const SparseBitMatrix& primed,
                    const char* what) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> index;
        for (std::uint32_t c = 0; c < base.n_cols(); ++c)
            index.emplace(base.column_key(c), c);
        std::vector<std::uint32_t> rows(primed.n_cols());
        for (std::uint32_t j = 0; j < primed.n_cols(); ++j) {
            auto it = index.find(primed.column_key(j));
            if (it == index.end())
                throw model_inconsistency(std::string("derive_uv: unmatched column in ") + what);
            rows[j] = it->second;
        }
        return rows;
    };
    g.u_row = match(dem.dx, dem.dxp, "dxp");
    g.v_row = match(dem.dz, dem.dzp, "dzp");

    std::vector<Entry> ue, ve;
    ue.reserve(g.groups.n_ey);
    ve.reserve(g.groups.n_ey);
    for (std::uint32_t j = 0; j < g.groups.n_ey; ++j) {
        ue.emplace_back(g.u_row[j], j);
        ve.emplace_back(g.v_row[j], j);
    }
    g.u = SparseBitMatrix(g.groups.n_ez, g.groups.n_ey, std::move(ue));
    g.v = SparseBitMatrix(g.groups.n_ex, g.groups.n_ey, std::move(ve));

    g.llr0.reserve(g.groups.total());
    for (auto p : dem.priors_z) g.llr0.push_back(prior_to_llr(p, opt.llr_ceiling));
    for (auto p : dem.priors_x) g.llr0.push_back(prior_to_llr(p, opt.llr_ceiling));
    for (auto p : dem.priors_y) g.llr0.push_back(prior_to_llr(p, opt.llr_ceiling));
    for (auto p : dem.priors_z) g.llr0.push_back(prior_to_llr(p, opt.llr_ceiling));
    for (auto p : dem.priors_x) g.llr0.push_back(prior_to_llr(p, opt.llr_ceiling));
    return g;
}

/// Assembles the full augmented matrix
///   ( 0 0 0 D_X 0 / 0 0 0 0 D_Z / I 0 U I 0 / 0 I V 0 I )
/// with syndrome rows (s_X, s_Z, 0, 0).
inline SparseBitMatrix assemble_augmented(const GariModel& g) {
    g.validate();
    const auto& gs = g.groups;
    std::size_t rows = g.dx.n_rows() + g.dz.n_rows() + gs.n_ez + gs.n_ex;
    std::vector<Entry> e;
    e.reserve(g.dx.n_entries() + g.dz.n_entries() + 2 * gs.n_ey + 2 * (gs.n_ez + gs.n_ex));
    auto put = [&e](const SparseBitMatrix& m, std::size_t ro, std::size_t co) {
        for (const auto& [r, c] : m.entries())
            e.emplace_back(static_cast<std::uint32_t>(r + ro), static_cast<std::uint32_t>(c + co));
    };
    std::size_t r_dz = g.dx.n_rows();
    std::size_t r_u = r_dz + g.dz.n_rows();
    std::size_t r_v = r_u + gs.n_ez;
    put(g.dx, 0, gs.off_ebz());
    put(g.dz, r_dz, gs.off_ebx());
    put(SparseBitMatrix::identity(gs.n_ez), r_u, gs.off_ez());
    put(g.u, r_u, gs.off_ey());
    put(SparseBitMatrix::identity(gs.n_ebz), r_u, gs.off_ebz());
    put(SparseBitMatrix::identity(gs.n_ex), r_v, gs.off_ex());
    put(g.v, r_v, gs.off_ey());
    put(SparseBitMatrix::identity(gs.n_ebx), r_v, gs.off_ebx());
    return {rows, gs.total(), std::move(e)};
}

struct PhysicalError {
    std::vector<std::uint8_t> bits; // (e_Z, e_X, e_Y) slice
    bool consistent = true;         // ebar groups matched e xor U/V e_Y
};

/// Slices the (e_Z, e_X, e_Y) part out of a hard decision over all GARI
/// variables and checks the change-of-variables identities.
/// The converged solution lives in the augmented variables; the physical
/// mechanisms follow from the inverse change of variables
/// e_Z = ebar_Z xor U e_Y, e_X = ebar_X xor V e_Y. The decoder's own
/// e_Z/e_X decisions are only tethered by their priors and may lag the
/// augmented side, so they feed the consistency diagnostic, not the output.
inline PhysicalError recover_physical_error(const GariModel& g,
                                            std::span<const std::uint8_t> hard) {
    const auto& gs = g.groups;
    if (hard.size() != gs.total()) throw invalid_input("recover: hard length mismatch");
    PhysicalError out;
    out.bits.assign(gs.off_ebz(), 0);
    for (std::size_t j = 0; j < gs.n_ey; ++j)
        out.bits[gs.off_ey() + j] = hard[gs.off_ey() + j];
    for (std::size_t i = 0; i < gs.n_ez; ++i) out.bits[gs.off_ez() + i] = hard[gs.off_ebz() + i];
    for (std::size_t i = 0; i < gs.n_ex; ++i) out.bits[gs.off_ex() + i] = hard[gs.off_ebx() + i];
    for (std::size_t j = 0; j < gs.n_ey; ++j) {
        if (hard[gs.off_ey() + j]) {
            out.bits[gs.off_ez() + g.u_row[j]] ^= 1;
            out.bits[gs.off_ex() + g.v_row[j]] ^= 1;
        }
    }
    for (std::size_t i = 0; i < gs.off_ebz(); ++i)
        if (out.bits[i] != hard[i]) { out.consistent = false; break; }
    return out;
}

} // namespace gari

#endif
