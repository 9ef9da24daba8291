#include "ids/pca.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ids/classifiers.hpp"
#include "ids/error.hpp"
#include "ids/kernels.hpp"
#include "ids/rng.hpp"

namespace ids::pca {

Matrix covariance_matrix(const Matrix& x) {
    const std::size_t n = x.rows(), d = x.cols();
    if (n < 2) throw ComputeError("covariance_matrix: need at least 2 rows");
    std::vector<double> mean(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) kern::axpy(1.0, x.row(r), mean.data(), d);
    kern::scale(1.0 / static_cast<double>(n), mean.data(), d);

    // column-major centered copy so each covariance entry is one long dot
    Matrix centered_t(d, n);
    for (std::size_t r = 0; r < n; ++r) {
        const double* row = x.row(r);
        for (std::size_t c = 0; c < d; ++c) centered_t(c, r) = row[c] - mean[c];
    }
    Matrix cov(d, d);
    const double divisor = static_cast<double>(n - 1);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i; j < d; ++j) {
            const double v = kern::dot(centered_t.row(i), centered_t.row(j), n) / divisor;
            cov(i, j) = v;
            cov(j, i) = v;
        }
    return cov;
}

namespace {

double max_abs_offdiag(const Matrix& m) {
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (i != j) worst = std::max(worst, std::abs(m(i, j)));
    return worst;
}

double offdiag_frobenius(const Matrix& m) {
    double acc = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) acc += 2.0 * m(i, j) * m(i, j);
    return std::sqrt(acc);
}

double frobenius(const Matrix& m) {
    double acc = 0.0;
    const double* p = m.data();
    for (std::size_t i = 0, total = m.rows() * m.cols(); i < total; ++i) acc += p[i] * p[i];
    return std::sqrt(acc);
}

}  // namespace

EigenDecomposition sym_eigen(const Matrix& s) {
    const std::size_t d = s.rows();
    if (s.cols() != d) throw ComputeError("sym_eigen: matrix is not square");
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = i + 1; j < d; ++j)
            if (std::abs(s(i, j) - s(j, i)) > 1e-10)
                throw ComputeError("sym_eigen: input is not symmetric");

    Matrix a = s;
    Matrix v(d, d);
    for (std::size_t i = 0; i < d; ++i) v(i, i) = 1.0;

    const double stop = 1e-12 * std::max(1.0, frobenius(s));
    constexpr std::size_t kMaxSweeps = 100;
    bool converged = d < 2;
    for (std::size_t sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        if (offdiag_frobenius(a) <= stop) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double app = a(p, p), aqq = a(q, q);
                const double tau = (aqq - app) / (2.0 * apq);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = t * c;
                for (std::size_t k = 0; k < d; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < d; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }
    if (!converged && offdiag_frobenius(a) > stop)
        throw ComputeError("sym_eigen: no convergence after 100 sweeps, off-diagonal residual " +
                           std::to_string(max_abs_offdiag(a)));

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });

    EigenDecomposition out;
    out.values.resize(d);
    out.vectors = Matrix(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        const std::size_t src = order[j];
        out.values[j] = a(src, src);
        // sign convention: largest-magnitude entry positive
        double best = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            if (std::abs(v(i, src)) > std::abs(best)) best = v(i, src);
        const double flip = best < 0.0 ? -1.0 : 1.0;
        for (std::size_t i = 0; i < d; ++i) out.vectors(i, j) = flip * v(i, src);
    }
    return out;
}

PcaModel fit_pca(const Matrix& x, const std::vector<data::FeatureId>& column_ids) {
    const std::size_t n = x.rows(), d = x.cols();
    if (n < 2) throw ComputeError("fit_pca: need at least 2 rows");
    PcaModel model;
    model.fitted_column_ids = column_ids;
    model.mean.assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) kern::axpy(1.0, x.row(r), model.mean.data(), d);
    kern::scale(1.0 / static_cast<double>(n), model.mean.data(), d);

    EigenDecomposition eig = sym_eigen(covariance_matrix(x));
    for (double& lambda : eig.values)
        if (lambda < 0.0 && lambda >= -1e-10) lambda = 0.0;
    model.eigenvalues = std::move(eig.values);
    model.eigenvectors = std::move(eig.vectors);
    return model;
}

Matrix transform(const PcaModel& model, const Matrix& x,
                 const std::vector<data::FeatureId>& column_ids, std::size_t k) {
    const std::size_t d = model.dim();
    if (column_ids != model.fitted_column_ids)
        throw ConfigError("transform: columns do not match the fitted columns");
    if (x.cols() != d) throw ConfigError("transform: dimension mismatch");
    if (k < 1 || k > d)
        throw ConfigError("transform: k = " + std::to_string(k) + " outside [1, " +
                          std::to_string(d) + "]");
    Matrix out(x.rows(), k);
    std::vector<double> centered(d);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const double* row = x.row(r);
        for (std::size_t c = 0; c < d; ++c) centered[c] = row[c] - model.mean[c];
        double* dst = out.row(r);
        for (std::size_t j = 0; j < k; ++j) {
            double acc = 0.0;
            for (std::size_t c = 0; c < d; ++c) acc += centered[c] * model.eigenvectors(c, j);
            dst[j] = acc;
        }
    }
    return out;
}

const char* to_string(Weighting w) {
    return w == Weighting::eigenvalue_weighted ? "eigenvalue_weighted" : "max_abs";
}

Weighting parse_weighting(const std::string& text) {
    if (text == "eigenvalue_weighted") return Weighting::eigenvalue_weighted;
    if (text == "max_abs") return Weighting::max_abs;
    throw ConfigError("unknown weighting '" + text + "'");
}

std::vector<data::FeatureId> FeatureRanking::top(std::size_t m) const {
    std::vector<data::FeatureId> out;
    out.reserve(std::min(m, entries.size()));
    for (std::size_t i = 0; i < entries.size() && i < m; ++i) out.push_back(entries[i].id);
    return out;
}

FeatureRanking rank_features(const PcaModel& model, Weighting weighting,
                             std::size_t top_components) {
    const std::size_t d = model.dim();
    if (top_components > d)
        throw ConfigError("rank_features: top_components exceeds dimension");
    FeatureRanking ranking;
    ranking.weighting = weighting;
    ranking.top_components = top_components;
    ranking.entries.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        double score = 0.0;
        for (std::size_t j = 0; j < top_components; ++j) {
            const double loading = std::abs(model.eigenvectors(i, j));
            if (weighting == Weighting::eigenvalue_weighted)
                score += model.eigenvalues[j] * loading;
            else
                score = std::max(score, loading);
        }
        const data::FeatureId id = model.fitted_column_ids.empty()
                                       ? data::FeatureId{static_cast<std::uint16_t>(i + 1)}
                                       : model.fitted_column_ids[i];
        ranking.entries.push_back({id, score});
    }
    std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                     [](const RankedFeature& a, const RankedFeature& b) {
                         if (a.score != b.score) return a.score > b.score;
                         return a.id.number < b.id.number;
                     });
    return ranking;
}

SelectionGrid validate_selection(const data::EncodedDataset& standardized_train,
                                 const FeatureRanking& ranking,
                                 const std::vector<std::size_t>& m_range,
                                 const std::vector<std::size_t>& k_range,
                                 std::uint64_t seed) {
    const std::size_t d = standardized_train.dim();
    SelectionGrid grid;
    grid.seed = seed;
    grid.m_values = m_range;
    grid.k_values = k_range;
    grid.accuracy.assign(m_range.size(),
                         std::vector<std::optional<double>>(k_range.size()));
    for (std::size_t mi = 0; mi < m_range.size(); ++mi) {
        const std::size_t m = m_range[mi];
        if (m < 2 || m > d)
            throw ConfigError("validate_selection: m = " + std::to_string(m) +
                              " outside [2, " + std::to_string(d) + "]");
        std::vector<data::FeatureId> selected = ranking.top(m);
        const auto subset = apply_feature_policy(
            standardized_train, data::FeaturePolicy::explicit_list(std::move(selected)));
        const PcaModel model = fit_pca(subset.matrix, subset.column_ids);
        for (std::size_t ki = 0; ki < k_range.size(); ++ki) {
            const std::size_t k = k_range[ki];
            if (k > m) continue;  // cells exist only for k <= m
            const std::uint64_t cell_seed = seed_mix(seed_mix(seed, m), k);
            auto [fit_part, holdout] = data::stratified_split(subset, 0.7, cell_seed);
            const Matrix fit_x = transform(model, fit_part.matrix, fit_part.column_ids, k);
            const Matrix holdout_x = transform(model, holdout.matrix, holdout.column_ids, k);
            clf::ClassifierSpec spec;
            spec.kind = clf::Kind::decision_tree;
            spec.seed = cell_seed;
            const clf::TrainedModel tree = clf::fit_model(spec, fit_x, fit_part.labels);
            const auto predicted = tree.predict_labels(holdout_x);
            std::size_t hits = 0;
            for (std::size_t i = 0; i < predicted.size(); ++i)
                if (predicted[i] == holdout.labels[i]) ++hits;
            grid.accuracy[mi][ki] =
                static_cast<double>(hits) / static_cast<double>(predicted.size());
        }
    }
    return grid;
}

}  // namespace ids::pca
