#pragma once

// Uniform front end over the three classifiers.

#include <string>
#include <string_view>
#include <variant>

#include "nwn/dataset.hpp"
#include "nwn/forest.hpp"
#include "nwn/naive_bayes.hpp"
#include "nwn/svm.hpp"

namespace nwn {

enum class ModelKind { lsvm, mnb, merf };

inline std::string_view to_string(ModelKind k) {
    switch (k) {
        case ModelKind::lsvm: return "lsvm";
        case ModelKind::mnb: return "mnb";
        case ModelKind::merf: return "merf";
    }
    return "?";
}

inline ModelKind parse_model_kind(std::string_view s) {
    if (s == "lsvm") return ModelKind::lsvm;
    if (s == "mnb") return ModelKind::mnb;
    if (s == "merf") return ModelKind::merf;
    throw ConfigError("unknown model kind '" + std::string(s) + "'");
}

struct ClassifierParams {
    SvmParams svm;
    double nb_alpha = 1.0;
    ForestParams forest;
};

using TrainedModel = std::variant<LinearModel, NbModel, ForestModel>;

inline ModelKind kind_of(const TrainedModel& m) {
    return static_cast<ModelKind>(m.index());
}

inline TrainedModel train_model(ModelKind kind, const Dataset& data, const ClassifierParams& params) {
    switch (kind) {
        case ModelKind::lsvm: return train_lsvm(data, params.svm);
        case ModelKind::mnb: return train_mnb(data, params.nb_alpha);
        case ModelKind::merf: return train_forest(data, params.forest);
    }
    throw ConfigError("unknown model kind");
}

struct Prediction {
    int label;
    /// Signed score, positive favouring class 1: w.x + b for the SVM, the
    /// log-posterior difference for naive Bayes, and the vote margin over
    /// the tree count for the forest.
    double decision;
};

inline Prediction predict(const TrainedModel& model, const SparseVector& x) {
    struct Visitor {
        const SparseVector& x;
        Prediction operator()(const LinearModel& m) const {
            const auto p = predict_linear(m, x);
            return {p.label, p.decision};
        }
        Prediction operator()(const NbModel& m) const {
            const auto jll = mnb_joint_log_likelihood(m, x);
            return {predict_mnb(m, x), jll.size() >= 2 ? jll[1] - jll[0] : 0.0};
        }
        Prediction operator()(const ForestModel& m) const {
            const auto votes = forest_votes(m, x);
            const double margin = votes.size() >= 2 ? static_cast<double>(votes[1]) - static_cast<double>(votes[0]) : 0.0;
            return {predict_forest(m, x), margin / static_cast<double>(m.trees.size())};
        }
    };
    return std::visit(Visitor{x}, model);
}

}  // namespace nwn
