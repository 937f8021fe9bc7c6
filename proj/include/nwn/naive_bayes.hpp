#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "nwn/dataset.hpp"
#include "nwn/error.hpp"
#include "nwn/sparse.hpp"

namespace nwn {

/// Multinomial naive Bayes with additive smoothing. Feature values act as
/// (possibly fractional) pseudo-counts.
struct NbModel {
    std::vector<double> log_prior;              // per class
    std::vector<std::vector<double>> log_like;  // [class][feature]
    double alpha = 1.0;

    friend bool operator==(const NbModel&, const NbModel&) = default;
};

inline NbModel train_mnb(const Dataset& data, double alpha = 1.0) {
    if (!(alpha > 0.0)) throw ConfigError("naive Bayes alpha must be positive");
    data.validate_for_training();
    for (const auto& v : data.x)
        for (const auto& e : v.entries)
            if (e.weight < 0.0) throw DataError("negative feature value for naive Bayes");

    const std::size_t k = data.n_features;
    const std::size_t n_classes = data.n_classes;
    std::vector<std::vector<double>> mass(n_classes, std::vector<double>(k, 0.0));
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto& row = mass[static_cast<std::size_t>(data.y[i])];
        for (const auto& e : data.x[i].entries) row[e.index] += e.weight;
    }

    NbModel m;
    m.alpha = alpha;
    const auto counts = data.class_counts();
    const double n = static_cast<double>(data.size());
    for (std::size_t c = 0; c < n_classes; ++c) {
        // An absent class gets -inf prior and can never win.
        m.log_prior.push_back(std::log(static_cast<double>(counts[c]) / n));
        double total = alpha * static_cast<double>(k);
        for (double v : mass[c]) total += v;
        std::vector<double> ll(k);
        for (std::size_t f = 0; f < k; ++f) ll[f] = std::log((alpha + mass[c][f]) / total);
        m.log_like.push_back(std::move(ll));
    }
    return m;
}

/// log P(c) + sum_f x_f log P(f | c), per class.
inline std::vector<double> mnb_joint_log_likelihood(const NbModel& model, const SparseVector& x) {
    std::vector<double> out(model.log_prior.size());
    for (std::size_t c = 0; c < out.size(); ++c) {
        double s = model.log_prior[c];
        for (const auto& e : x.entries) s += e.weight * model.log_like[c][e.index];
        out[c] = s;
    }
    return out;
}

/// Relative gap below which two joint log likelihoods count as tied; exact
/// ties rarely survive floating-point summation order.
inline constexpr double kMnbTieTolerance = 1e-12;

/// Argmax of the joint log likelihood; ties go to the lowest class index.
inline int predict_mnb(const NbModel& model, const SparseVector& x) {
    const auto jll = mnb_joint_log_likelihood(model, x);
    std::size_t best = 0;
    for (std::size_t c = 1; c < jll.size(); ++c)
        if (jll[c] - jll[best] > kMnbTieTolerance * std::max(1.0, std::abs(jll[best]))) best = c;
    return static_cast<int>(best);
}

}  // namespace nwn
