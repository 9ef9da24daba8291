#include <algorithm>
#include <cmath>

#include "ids/kernels.hpp"
#include "model_impl.hpp"

// Lazy k-nearest-neighbour classifier; fitting just captures the
// training set.

namespace ids::clf {

namespace {

class KnnImpl final : public ModelImpl {
public:
    Matrix train;
    std::vector<std::uint8_t> labels;
    std::size_t k = 5;

    void predict_scores(const Matrix& x, std::vector<double>& out) const override {
        const std::size_t n = train.rows(), d = train.cols();
        const std::size_t kk = std::min(k, n);
        out.resize(x.rows());
        // (distance, train row); ties on distance resolve to the lower row
        std::vector<std::pair<double, std::uint32_t>> nearest(kk);
        for (std::size_t r = 0; r < x.rows(); ++r) {
            const double* q = x.row(r);
            std::size_t filled = 0;
            for (std::size_t t = 0; t < n; ++t) {
                const double dist = kern::squared_distance(q, train.row(t), d);
                const std::pair<double, std::uint32_t> cand{dist, static_cast<std::uint32_t>(t)};
                if (filled < kk) {
                    nearest[filled++] = cand;
                    if (filled == kk)
                        std::sort(nearest.begin(), nearest.end());
                    continue;
                }
                if (cand < nearest[kk - 1]) {
                    std::size_t pos = kk - 1;
                    while (pos > 0 && cand < nearest[pos - 1]) {
                        nearest[pos] = nearest[pos - 1];
                        --pos;
                    }
                    nearest[pos] = cand;
                }
            }
            if (filled < kk) std::sort(nearest.begin(), nearest.begin() + filled);
            std::size_t votes = 0;
            for (std::size_t i = 0; i < filled; ++i) votes += labels[nearest[i].second];
            double score = static_cast<double>(votes) / static_cast<double>(filled);
            // an exact split vote (even k) falls back to the single
            // nearest neighbour so the label matches the 0.5 threshold
            if (2 * votes == filled) score = labels[nearest[0].second] ? 1.0 : 0.0;
            out[r] = score;
        }
    }

    json params() const override {
        return json{{"train", std::vector<double>(train.data(),
                                                  train.data() + train.rows() * train.cols())},
                    {"rows", train.rows()},
                    {"cols", train.cols()},
                    {"labels", labels},
                    {"k", k}};
    }
};

}  // namespace

ImplPtr fit_knn(const FitInputs& in) {
    auto impl = std::make_shared<KnnImpl>();
    impl->train = in.x;
    impl->labels = in.labels;
    impl->k = static_cast<std::size_t>(hyper_value(in.spec, "k"));
    return impl;
}

ImplPtr knn_from_json(const json& params) {
    auto impl = std::make_shared<KnnImpl>();
    const auto rows = params.at("rows").get<std::size_t>();
    const auto cols = params.at("cols").get<std::size_t>();
    impl->train = Matrix(rows, cols);
    const auto flat = params.at("train").get<std::vector<double>>();
    std::copy(flat.begin(), flat.end(), impl->train.data());
    impl->labels = params.at("labels").get<std::vector<std::uint8_t>>();
    impl->k = params.at("k").get<std::size_t>();
    return impl;
}

}  // namespace ids::clf
