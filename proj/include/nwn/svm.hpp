#pragma once

// L2-regularized hinge-loss (L1-loss) linear SVM trained by dual coordinate
// descent. The bias is an extra feature of constant value 1, so it is
// regularized along with the weights.
//
//   min_a  1/2 a^T Q a - e^T a,   0 <= a_i <= C,   Q_ij = y_i y_j x_i.x_j
//
// with x_i augmented by the constant feature and w = sum_i a_i y_i x_i.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <span>
#include <vector>

#include "nwn/dataset.hpp"
#include "nwn/error.hpp"
#include "nwn/sparse.hpp"

namespace nwn {

struct SvmParams {
    double c = 1.0;
    double tol = 1e-4;
    std::size_t max_iter = 1000;
    std::uint64_t seed = 42;

    void validate() const {
        if (!(c > 0.0)) throw ConfigError("SVM c must be positive");
        if (!(tol > 0.0)) throw ConfigError("SVM tol must be positive");
        if (max_iter < 1) throw ConfigError("SVM max_iter must be at least 1");
    }
};

/// Class 1 maps to +1 and class 0 to -1.
struct LinearModel {
    std::vector<double> w;
    double b = 0.0;

    friend bool operator==(const LinearModel&, const LinearModel&) = default;
};

struct LinearPrediction {
    int label;
    double decision;
};

/// Optional instrumentation for a training run.
struct SvmTrace {
    /// Called after every coordinate step with the dual objective value.
    std::function<void(double)> on_update;
    std::size_t passes = 0;
    double final_violation = 0.0;
    double dual_objective = 0.0;
    std::vector<double> alpha;
};

inline int svm_sign(int class_index) noexcept { return class_index == 1 ? 1 : -1; }

inline LinearModel train_lsvm(const Dataset& data, const SvmParams& params, SvmTrace* trace = nullptr) {
    params.validate();
    if (data.n_classes != 2) throw TrainingError("linear SVM supports exactly two classes");
    data.validate_for_training();

    const std::size_t n = data.size();
    const double c = params.c;
    std::vector<double> q_diag(n);
    for (std::size_t i = 0; i < n; ++i) q_diag[i] = data.x[i].squared_norm() + 1.0;

    LinearModel m{std::vector<double>(data.n_features, 0.0), 0.0};
    std::vector<double> alpha(n, 0.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(params.seed);

    double dual = 0.0;
    double violation = 0.0;
    std::size_t pass = 0;
    while (pass < params.max_iter) {
        ++pass;
        std::shuffle(order.begin(), order.end(), rng);
        violation = 0.0;
        for (std::size_t i : order) {
            const auto& xi = data.x[i];
            const double yi = svm_sign(data.y[i]);
            const double g = yi * (xi.dot(m.w) + m.b) - 1.0;
            double pg = g;
            if (alpha[i] == 0.0)
                pg = std::min(g, 0.0);
            else if (alpha[i] == c)
                pg = std::max(g, 0.0);
            violation = std::max(violation, std::abs(pg));
            if (pg == 0.0) continue;

            const double old = alpha[i];
            alpha[i] = std::clamp(old - g / q_diag[i], 0.0, c);
            const double delta = alpha[i] - old;
            if (delta == 0.0) continue;
            const double step = delta * yi;
            for (const auto& e : xi.entries) m.w[e.index] += step * e.weight;
            m.b += step;
            if (trace) {
                dual += delta * g + 0.5 * delta * delta * q_diag[i];
                if (trace->on_update) trace->on_update(dual);
            }
        }
        if (violation < params.tol) break;
    }
    for (double v : m.w)
        if (!std::isfinite(v)) throw TrainingError("SVM produced a non-finite weight");
    if (trace) {
        trace->passes = pass;
        trace->final_violation = violation;
        trace->dual_objective = dual;
        trace->alpha = alpha;
    }
    return m;
}

/// Decision value w.x + b; exactly 0 counts as the positive class.
inline LinearPrediction predict_linear(const LinearModel& model, const SparseVector& x) {
    const double d = x.dot(model.w) + model.b;
    return {d >= 0.0 ? 1 : 0, d};
}

/// 1/2 (|w|^2 + b^2) + C * sum of hinge losses.
inline double svm_primal_objective(const LinearModel& model, const Dataset& data, double c) {
    double reg = model.b * model.b;
    for (double v : model.w) reg += v * v;
    double loss = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double margin = svm_sign(data.y[i]) * (data.x[i].dot(model.w) + model.b);
        loss += std::max(0.0, 1.0 - margin);
    }
    return 0.5 * reg + c * loss;
}

}  // namespace nwn
