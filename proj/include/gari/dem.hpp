#ifndef GARI_DEM_HPP
#define GARI_DEM_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "gari/sparse_bit_matrix.hpp"

namespace gari {

/// Detector error model: error mechanisms (columns) against detectors (rows)
/// over GF(2), one prior per mechanism. dx/dz carry the Z/X mechanisms, the
/// primed matrices carry Y mechanisms whose columns repeat columns of dx/dz.
/// The observables matrix spans all mechanisms (e_Z, e_X, e_Y column order)
/// and is used for scoring only.
struct DetectorErrorModel {
    SparseBitMatrix dx;  // X-detectors x Z-mechanisms
    SparseBitMatrix dz;  // Z-detectors x X-mechanisms
    SparseBitMatrix dxp; // X-detectors x Y-mechanisms
    SparseBitMatrix dzp; // Z-detectors x Y-mechanisms
    SparseBitMatrix observables;
    std::vector<double> priors_z;
    std::vector<double> priors_x;
    std::vector<double> priors_y;

    std::size_t n_mechanisms() const {
        return dx.n_cols() + dz.n_cols() + dxp.n_cols();
    }

    void validate() const {
        if (priors_z.size() != dx.n_cols() || priors_x.size() != dz.n_cols() ||
            priors_y.size() != dxp.n_cols())
            throw invalid_input("DEM: prior length mismatch");
        if (dxp.n_cols() != dzp.n_cols())
            throw invalid_input("DEM: dxp and dzp column counts differ");
        if (dxp.n_rows() != dx.n_rows() || dzp.n_rows() != dz.n_rows())
            throw invalid_input("DEM: primed matrix row count mismatch");
        for (auto p : priors_z) check_prior(p);
        for (auto p : priors_x) check_prior(p);
        for (auto p : priors_y) check_prior(p);
        if (dx.has_duplicate_columns() || dz.has_duplicate_columns())
            throw model_inconsistency("DEM: dx/dz must have distinct columns (merge first)");
        if (observables.n_cols() != 0 && observables.n_cols() != n_mechanisms())
            throw invalid_input("DEM: observables column count mismatch");
    }

    static void check_prior(double p) {
        if (!(p >= 0.0 && p <= 1.0)) throw invalid_input("prior outside [0,1]");
    }
};

struct Syndrome {
    std::vector<std::uint8_t> s_x;
    std::vector<std::uint8_t> s_z;
};

/// Merges identical columns, combining priors with p1(1-p2)+p2(1-p1)
/// left-associatively over each duplicate group. Output columns keep
/// first-occurrence order.
inline std::pair<SparseBitMatrix, std::vector<double>>
merge_duplicate_columns(const SparseBitMatrix& m, const std::vector<double>& priors) {
    if (priors.size() != m.n_cols()) throw invalid_input("merge: prior length mismatch");
    for (auto p : priors) DetectorErrorModel::check_prior(p);

    std::map<std::vector<std::uint32_t>, std::uint32_t> seen; // column key -> output col
    std::vector<Entry> entries;
    std::vector<double> merged;
    for (std::uint32_t c = 0; c < m.n_cols(); ++c) {
        auto key = m.column_key(c);
        auto it = seen.find(key);
        if (it == seen.end()) {
            std::uint32_t out_c = static_cast<std::uint32_t>(merged.size());
            seen.emplace(std::move(key), out_c);
            for (auto r : m.col(c)) entries.emplace_back(r, out_c);
            merged.push_back(priors[c]);
        } else {
            double& p = merged[it->second];
            p = p * (1.0 - priors[c]) + priors[c] * (1.0 - p);
        }
    }
    return {SparseBitMatrix(m.n_rows(), merged.size(), std::move(entries)), std::move(merged)};
}

} // namespace gari

#endif
