#include <algorithm>
#include <cmath>

#include "ids/tree.hpp"
#include "model_impl.hpp"

// AdaBoost, RUSBoost and LogitBoost over the presorted stump context.

namespace ids::clf {

namespace {

json stumps_to_json(const std::vector<Stump>& stumps) {
    json arr = json::array();
    for (const Stump& s : stumps)
        arr.push_back(json::array({s.feature, s.threshold, s.left_value, s.right_value}));
    return arr;
}

std::vector<Stump> stumps_from_json(const json& j) {
    std::vector<Stump> stumps;
    stumps.reserve(j.size());
    for (const auto& e : j) {
        Stump s;
        s.feature = e.at(0).get<std::int32_t>();
        s.threshold = e.at(1).get<double>();
        s.left_value = e.at(2).get<double>();
        s.right_value = e.at(3).get<double>();
        stumps.push_back(s);
    }
    return stumps;
}

// stump leaf fractions mapped to a {-1,+1} vote
inline double stump_vote(const Stump& s, const double* row) {
    return s.predict_row(row) > 0.5 ? 1.0 : -1.0;
}

class BoostImpl final : public ModelImpl {
public:
    std::vector<Stump> stumps;
    std::vector<double> alphas;

    void predict_scores(const Matrix& x, std::vector<double>& out) const override {
        out.resize(x.rows());
        double alpha_total = 0.0;
        for (const double a : alphas) alpha_total += a;
        for (std::size_t r = 0; r < x.rows(); ++r) {
            const double* row = x.row(r);
            double acc = 0.0;
            for (std::size_t t = 0; t < stumps.size(); ++t)
                acc += alphas[t] * stump_vote(stumps[t], row);
            out[r] = alpha_total > 0.0 ? acc / alpha_total : 0.0;
        }
    }

    json params() const override {
        return json{{"stumps", stumps_to_json(stumps)}, {"alphas", alphas}};
    }
};

class LogitBoostImpl final : public ModelImpl {
public:
    std::vector<Stump> stumps;

    void predict_scores(const Matrix& x, std::vector<double>& out) const override {
        out.resize(x.rows());
        for (std::size_t r = 0; r < x.rows(); ++r) {
            const double* row = x.row(r);
            double f = 0.0;
            for (const Stump& s : stumps) f += 0.5 * s.predict_row(row);
            out[r] = 1.0 / (1.0 + std::exp(-2.0 * f));
        }
    }

    json params() const override { return json{{"stumps", stumps_to_json(stumps)}}; }
};

struct AdaRound {
    double alpha;
    double weighted_error;
    bool stop;
};

// alpha from the full-distribution weighted error, with the usual
// floor so a perfect stump stays finite
AdaRound adaboost_alpha(double weighted_error) {
    AdaRound round{0.0, weighted_error, false};
    if (weighted_error >= 0.5) {
        round.stop = true;
        return round;
    }
    const double floored = std::max(weighted_error, 1e-10);
    round.alpha = 0.5 * std::log((1.0 - floored) / floored);
    if (weighted_error <= 0.0) round.stop = true;  // keep the stump, then stop
    return round;
}

}  // namespace

ImplPtr fit_adaboost(const FitInputs& in) {
    const auto rounds = static_cast<std::size_t>(hyper_value(in.spec, "rounds"));
    const std::size_t n = in.x.rows();
    StumpContext context(in.x);
    auto impl = std::make_shared<BoostImpl>();

    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    for (std::size_t t = 0; t < rounds; ++t) {
        const Stump stump = context.fit_gini(in.labels, weights);
        double weighted_error = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double vote = stump_vote(stump, in.x.row(r));
            const double y = in.labels[r] ? 1.0 : -1.0;
            if (vote * y < 0.0) weighted_error += weights[r];
        }
        const AdaRound round = adaboost_alpha(weighted_error);
        if (round.stop && round.alpha == 0.0) break;  // error >= 0.5: discard
        impl->stumps.push_back(stump);
        impl->alphas.push_back(round.alpha);
        if (round.stop) break;  // perfect stump
        double z = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double vote = stump_vote(stump, in.x.row(r));
            const double y = in.labels[r] ? 1.0 : -1.0;
            weights[r] *= std::exp(-round.alpha * y * vote);
            z += weights[r];
        }
        for (double& w : weights) w /= z;
    }
    if (impl->stumps.empty()) {
        // no usable weak learner; fall back to the majority-class stump
        Stump constant;
        std::size_t pos = 0;
        for (const auto l : in.labels) pos += l;
        constant.left_value = constant.right_value = 2 * pos >= n ? 1.0 : 0.0;
        impl->stumps.push_back(constant);
        impl->alphas.push_back(1.0);
    }
    return impl;
}

ImplPtr fit_rusboost(const FitInputs& in) {
    const auto rounds = static_cast<std::size_t>(hyper_value(in.spec, "rounds"));
    const std::size_t n = in.x.rows();
    StumpContext context(in.x);
    auto impl = std::make_shared<BoostImpl>();

    std::vector<std::uint32_t> class_rows[2];
    for (std::size_t r = 0; r < n; ++r)
        class_rows[in.labels[r]].push_back(static_cast<std::uint32_t>(r));
    const int minority = class_rows[1].size() < class_rows[0].size() ? 1 : 0;
    const auto& minority_rows = class_rows[minority];
    const auto& majority_rows = class_rows[1 - minority];

    std::vector<double> weights(n, 1.0 / static_cast<double>(n));
    std::vector<double> stump_weights(n);
    std::vector<double> majority_weights(majority_rows.size());
    for (std::size_t t = 0; t < rounds; ++t) {
        // balanced view: the whole minority class plus a weighted draw
        // of the majority class down to the minority count
        std::fill(stump_weights.begin(), stump_weights.end(), 0.0);
        double minority_total = 0.0;
        for (const auto r : minority_rows) minority_total += weights[r];
        if (minority_total <= 0.0) break;
        for (const auto r : minority_rows) stump_weights[r] = 0.5 * weights[r] / minority_total;
        for (std::size_t i = 0; i < majority_rows.size(); ++i)
            majority_weights[i] = weights[majority_rows[i]];
        const auto draws =
            weighted_resample(majority_rows.size(), majority_weights, minority_rows.size(),
                              seed_mix(in.spec.seed, t));
        const double per_draw = 0.5 / static_cast<double>(draws.size());
        for (const auto d : draws) stump_weights[majority_rows[d]] += per_draw;

        const Stump stump = context.fit_gini(in.labels, stump_weights);
        double weighted_error = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double vote = stump_vote(stump, in.x.row(r));
            const double y = in.labels[r] ? 1.0 : -1.0;
            if (vote * y < 0.0) weighted_error += weights[r];
        }
        const AdaRound round = adaboost_alpha(weighted_error);
        if (round.stop && round.alpha == 0.0) break;
        impl->stumps.push_back(stump);
        impl->alphas.push_back(round.alpha);
        if (round.stop) break;
        double z = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double vote = stump_vote(stump, in.x.row(r));
            const double y = in.labels[r] ? 1.0 : -1.0;
            weights[r] *= std::exp(-round.alpha * y * vote);
            z += weights[r];
        }
        for (double& w : weights) w /= z;
    }
    if (impl->stumps.empty()) {
        Stump constant;
        std::size_t pos = 0;
        for (const auto l : in.labels) pos += l;
        constant.left_value = constant.right_value = 2 * pos >= n ? 1.0 : 0.0;
        impl->stumps.push_back(constant);
        impl->alphas.push_back(1.0);
    }
    return impl;
}

ImplPtr fit_logitboost(const FitInputs& in) {
    const auto rounds = static_cast<std::size_t>(hyper_value(in.spec, "rounds"));
    const std::size_t n = in.x.rows();
    StumpContext context(in.x);
    auto impl = std::make_shared<LogitBoostImpl>();

    std::vector<double> f(n, 0.0);        // additive model value per row
    std::vector<double> z(n), w(n);
    for (std::size_t t = 0; t < rounds; ++t) {
        for (std::size_t r = 0; r < n; ++r) {
            const double p = 1.0 / (1.0 + std::exp(-2.0 * f[r]));
            const double y = in.labels[r] ? 1.0 : 0.0;
            w[r] = std::max(p * (1.0 - p), 1e-10);
            z[r] = std::clamp((y - p) / w[r], -4.0, 4.0);
        }
        const Stump stump = context.fit_sse(z, w);
        impl->stumps.push_back(stump);
        for (std::size_t r = 0; r < n; ++r) f[r] += 0.5 * stump.predict_row(in.x.row(r));
        if (stump.feature < 0) break;  // constant fit, nothing left to learn
    }
    return impl;
}

ImplPtr boost_from_json(const json& params) {
    auto impl = std::make_shared<BoostImpl>();
    impl->stumps = stumps_from_json(params.at("stumps"));
    impl->alphas = params.at("alphas").get<std::vector<double>>();
    return impl;
}

ImplPtr logitboost_from_json(const json& params) {
    auto impl = std::make_shared<LogitBoostImpl>();
    impl->stumps = stumps_from_json(params.at("stumps"));
    return impl;
}

}  // namespace ids::clf
