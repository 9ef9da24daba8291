#pragma once

// PCA on the standardized feature matrix: covariance, a cyclic Jacobi
// eigensolver, projection, loading-based feature ranking and the
// decision-tree validation grid over (top-m features, k components).

#include <cstdint>
#include <optional>
#include <vector>

#include "ids/dataset.hpp"
#include "ids/matrix.hpp"

namespace ids::pca {

// Covariance with divisor n-1 around the column means. Requires n >= 2.
Matrix covariance_matrix(const Matrix& x);

struct EigenDecomposition {
    std::vector<double> values;  // descending
    Matrix vectors;              // column j pairs with values[j]
};

// Cyclic Jacobi for symmetric input (checked within 1e-10). Columns of
// the result are orthonormal; each eigenvector's largest-magnitude
// entry is made positive so output is deterministic under sign flips.
EigenDecomposition sym_eigen(const Matrix& s);

struct PcaModel {
    std::vector<double> mean;
    std::vector<double> eigenvalues;  // descending, clamped at 0 within -1e-10
    Matrix eigenvectors;              // d x d, column-orthonormal
    std::vector<data::FeatureId> fitted_column_ids;

    std::size_t dim() const { return mean.size(); }
};

PcaModel fit_pca(const Matrix& x, const std::vector<data::FeatureId>& column_ids);

// (x - mean) * V[:, 0..k). Throws on column mismatch or k outside [1, d].
Matrix transform(const PcaModel& model, const Matrix& x,
                 const std::vector<data::FeatureId>& column_ids, std::size_t k);

enum class Weighting : std::uint8_t { eigenvalue_weighted, max_abs };
const char* to_string(Weighting w);
Weighting parse_weighting(const std::string& text);

struct RankedFeature {
    data::FeatureId id;
    double score;
};

struct FeatureRanking {
    std::vector<RankedFeature> entries;  // score desc, then feature number asc
    Weighting weighting;
    std::size_t top_components;

    std::vector<data::FeatureId> top(std::size_t m) const;
};

// eigenvalue_weighted: score_i = sum_{j<top} lambda_j * |V_ij|
// max_abs:             score_i = max_{j<top} |V_ij|
FeatureRanking rank_features(const PcaModel& model, Weighting weighting,
                             std::size_t top_components);

struct SelectionGrid {
    std::vector<std::size_t> m_values;
    std::vector<std::size_t> k_values;
    // accuracy[mi][ki]; cells exist only where k <= m
    std::vector<std::vector<std::optional<double>>> accuracy;
    std::uint64_t seed = 0;
    double holdout_ratio = 0.3;
};

// For each (m, k <= m): select the top-m ranked features, fit PCA on
// them, project to k, train the default decision tree on a stratified
// 70% split and score the 30% holdout. Cell RNG derives from
// (seed, m, k) so the grid is schedule-invariant.
SelectionGrid validate_selection(const data::EncodedDataset& standardized_train,
                                 const FeatureRanking& ranking,
                                 const std::vector<std::size_t>& m_range,
                                 const std::vector<std::size_t>& k_range,
                                 std::uint64_t seed);

}  // namespace ids::pca
