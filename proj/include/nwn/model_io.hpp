#pragma once

// Versioned JSON persistence for a trained pipeline: preprocessing options,
// vocabulary with document frequencies, label alphabet, and the classifier.
// IDF weights are recomputed from df and n_docs on load.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nwn/classify.hpp"
#include "nwn/error.hpp"
#include "nwn/preprocess.hpp"
#include "nwn/vectorize.hpp"

namespace nwn {

inline constexpr int kModelFormatVersion = 1;

using json = nlohmann::json;

/// Everything needed to classify raw text.
struct ModelBundle {
    Representation representation = Representation::tfidf_nwn;
    PreprocessOptions preprocess;
    /// Replaces the built-in stopword list when set.
    std::optional<std::vector<std::string>> stopwords;
    bool l2_normalize = false;
    std::vector<std::string> labels;
    FeatureSpace features;
    TrainedModel model;

    StopwordSet stopword_set() const {
        if (!stopwords) return StopwordSet::builtin();
        StopwordSet s;
        for (const auto& w : *stopwords) s.insert(w);
        return s;
    }

    SparseVector vectorize(std::string_view text, const StopwordSet& stop) const {
        return features.transform(preprocess_document(text, preprocess, stop), representation, l2_normalize);
    }
};

/// {terms, df, n_docs}
inline json feature_space_to_json(const FeatureSpace& fs) {
    return json{{"terms", fs.vocabulary.terms()}, {"df", fs.idf.df}, {"n_docs", fs.idf.n_docs}};
}

inline FeatureSpace feature_space_from_json(const json& j) {
    FeatureSpace fs;
    fs.vocabulary = Vocabulary(j.at("terms").get<std::vector<std::string>>());
    auto df = j.at("df").get<std::vector<std::uint64_t>>();
    if (df.size() != fs.vocabulary.size()) throw ParseError("df length does not match vocabulary");
    fs.idf = IdfTable::from_counts(j.at("n_docs").get<std::uint64_t>(), std::move(df));
    return fs;
}

namespace detail {

inline json model_payload(const TrainedModel& model) {
    struct Visitor {
        json operator()(const LinearModel& m) const { return {{"w", m.w}, {"b", m.b}}; }
        json operator()(const NbModel& m) const {
            return {{"log_prior", m.log_prior}, {"log_like", m.log_like}, {"alpha", m.alpha}};
        }
        json operator()(const ForestModel& m) const {
            json trees = json::array();
            for (const auto& t : m.trees) {
                json feature = json::array(), threshold = json::array(), left = json::array(),
                     right = json::array(), label = json::array();
                for (const auto& n : t.nodes) {
                    feature.push_back(n.feature);
                    threshold.push_back(n.threshold);
                    left.push_back(n.left);
                    right.push_back(n.right);
                    label.push_back(n.label);
                }
                trees.push_back({{"feature", feature}, {"threshold", threshold}, {"left", left},
                                 {"right", right}, {"label", label}});
            }
            return {{"n_classes", m.n_classes}, {"seed", m.seed}, {"trees", trees}};
        }
    };
    return std::visit(Visitor{}, model);
}

inline TrainedModel model_from_payload(ModelKind kind, const json& p) {
    switch (kind) {
        case ModelKind::lsvm:
            return LinearModel{p.at("w").get<std::vector<double>>(), p.at("b").get<double>()};
        case ModelKind::mnb:
            return NbModel{p.at("log_prior").get<std::vector<double>>(),
                           p.at("log_like").get<std::vector<std::vector<double>>>(), p.at("alpha").get<double>()};
        case ModelKind::merf: {
            ForestModel m;
            m.n_classes = p.at("n_classes").get<std::size_t>();
            m.seed = p.at("seed").get<std::uint64_t>();
            for (const auto& t : p.at("trees")) {
                const auto& feature = t.at("feature");
                const std::size_t n = feature.size();
                if (t.at("threshold").size() != n || t.at("left").size() != n || t.at("right").size() != n ||
                    t.at("label").size() != n || n == 0)
                    throw ParseError("inconsistent tree arrays");
                DecisionTree tree;
                for (std::size_t i = 0; i < n; ++i) {
                    TreeNode node{feature[i].get<std::int32_t>(), t.at("threshold")[i].get<double>(),
                                  t.at("left")[i].get<std::uint32_t>(), t.at("right")[i].get<std::uint32_t>(),
                                  t.at("label")[i].get<std::int32_t>()};
                    if (!node.is_leaf() && (node.left >= n || node.right >= n))
                        throw ParseError("tree child index out of range");
                    tree.nodes.push_back(node);
                }
                m.trees.push_back(std::move(tree));
            }
            return m;
        }
    }
    throw ParseError("unknown model kind");
}

/// Model shape must agree with the vocabulary size and label alphabet.
inline void check_shape(const TrainedModel& model, std::size_t dim, std::size_t n_labels) {
    struct Visitor {
        std::size_t dim, n_labels;
        bool operator()(const LinearModel& m) const { return m.w.size() == dim && n_labels == 2; }
        bool operator()(const NbModel& m) const {
            if (m.log_prior.size() != n_labels || m.log_like.size() != n_labels) return false;
            return std::all_of(m.log_like.begin(), m.log_like.end(), [&](const auto& r) { return r.size() == dim; });
        }
        bool operator()(const ForestModel& m) const {
            if (m.n_classes != n_labels || m.trees.empty()) return false;
            for (const auto& t : m.trees)
                for (const auto& n : t.nodes)
                    if (n.feature >= static_cast<std::int64_t>(dim) || n.label < 0 ||
                        static_cast<std::size_t>(n.label) >= n_labels)
                        return false;
            return true;
        }
    };
    if (!std::visit(Visitor{dim, n_labels}, model))
        throw ParseError("model payload does not match vocabulary or labels");
}

}  // namespace detail

inline json bundle_to_json(const ModelBundle& b) {
    json pre{{"apply_nwn", b.preprocess.apply_nwn},
             {"remove_stopwords", b.preprocess.remove_stopwords},
             {"keep_single_chars", b.preprocess.keep_single_chars},
             {"stopwords", b.stopwords ? json(*b.stopwords) : json(nullptr)}};
    return json{{"format_version", kModelFormatVersion},
                {"representation", std::string(to_string(b.representation))},
                {"preprocess_options", pre},
                {"l2_normalize", b.l2_normalize},
                {"labels", b.labels},
                {"vocabulary", b.features.vocabulary.terms()},
                {"idf", {{"df", b.features.idf.df}, {"n_docs", b.features.idf.n_docs}}},
                {"model_kind", std::string(to_string(kind_of(b.model)))},
                {"model_payload", detail::model_payload(b.model)}};
}

inline ModelBundle bundle_from_json(const json& j) {
    try {
        const int version = j.at("format_version").get<int>();
        if (version != kModelFormatVersion)
            throw VersionError("unsupported model format version " + std::to_string(version) + " (expected " +
                               std::to_string(kModelFormatVersion) + ")");
        ModelBundle b;
        b.representation = parse_representation(j.at("representation").get<std::string>());
        const auto& pre = j.at("preprocess_options");
        b.preprocess.apply_nwn = pre.at("apply_nwn").get<bool>();
        b.preprocess.remove_stopwords = pre.at("remove_stopwords").get<bool>();
        b.preprocess.keep_single_chars = pre.at("keep_single_chars").get<bool>();
        if (pre.contains("stopwords") && !pre.at("stopwords").is_null())
            b.stopwords = pre.at("stopwords").get<std::vector<std::string>>();
        b.l2_normalize = j.value("l2_normalize", false);
        b.labels = j.at("labels").get<std::vector<std::string>>();
        b.features = feature_space_from_json(json{{"terms", j.at("vocabulary")},
                                                  {"df", j.at("idf").at("df")},
                                                  {"n_docs", j.at("idf").at("n_docs")}});
        b.model = detail::model_from_payload(parse_model_kind(j.at("model_kind").get<std::string>()),
                                             j.at("model_payload"));
        detail::check_shape(b.model, b.features.dimension(), b.labels.size());
        return b;
    } catch (const json::exception& e) {
        throw ParseError(std::string("malformed model file: ") + e.what());
    } catch (const ConfigError& e) {
        throw ParseError(std::string("malformed model file: ") + e.what());
    } catch (const FitError& e) {
        throw ParseError(std::string("malformed model file: ") + e.what());
    }
}

inline void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << bundle_to_json(bundle).dump() << '\n';
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

inline ModelBundle load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    json j;
    try {
        j = json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("model file is not valid JSON: ") + e.what());
    }
    return bundle_from_json(j);
}

}  // namespace nwn
