#pragma once

// Experiment harness: holdout evaluation, stratified k-fold CV, feature-size
// sweeps and one-axis comparisons. Vocabulary, IDF and model are always fit
// on the training portion only.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nwn/classify.hpp"
#include "nwn/corpus.hpp"
#include "nwn/error.hpp"
#include "nwn/parallel.hpp"
#include "nwn/preprocess.hpp"
#include "nwn/vectorize.hpp"

namespace nwn {

enum class DataFormat { tsv, csv, prefix, imdb_dir };

inline std::string_view to_string(DataFormat f) {
    switch (f) {
        case DataFormat::tsv: return "tsv";
        case DataFormat::csv: return "csv";
        case DataFormat::prefix: return "prefix";
        case DataFormat::imdb_dir: return "imdb-dir";
    }
    return "?";
}

inline DataFormat parse_data_format(std::string_view s) {
    if (s == "tsv") return DataFormat::tsv;
    if (s == "csv") return DataFormat::csv;
    if (s == "prefix") return DataFormat::prefix;
    if (s == "imdb-dir" || s == "imdb_dir") return DataFormat::imdb_dir;
    throw ConfigError("unknown data format '" + std::string(s) + "'");
}

struct DatasetSpec {
    std::string path;
    DataFormat format = DataFormat::tsv;
    std::string label_column = "v1";
    std::string text_column = "v2";
    std::size_t per_label_limit = 0;  // prefix format only; 0 keeps all lines
};

/// imdb-dir accepts either a root holding pos/ and neg/ or the full layout
/// with train/{pos,neg} and test/{pos,neg}; both halves are pooled.
inline Corpus load_dataset(const DatasetSpec& spec) {
    namespace fs = std::filesystem;
    switch (spec.format) {
        case DataFormat::tsv: return load_tsv(spec.path);
        case DataFormat::csv: return load_csv(spec.path, spec.label_column, spec.text_column);
        case DataFormat::prefix: return load_prefix_labeled(spec.path, spec.per_label_limit);
        case DataFormat::imdb_dir: {
            const fs::path root(spec.path);
            if (fs::is_directory(root / "train") && fs::is_directory(root / "test"))
                return load_dir_tree(root, {{"train/neg", "neg"}, {"train/pos", "pos"},
                                            {"test/neg", "neg"}, {"test/pos", "pos"}});
            return load_dir_tree(root, {{"neg", "neg"}, {"pos", "pos"}});
        }
    }
    throw ConfigError("unknown data format");
}

struct ExperimentConfig {
    DatasetSpec dataset;
    Representation representation = Representation::tfidf_nwn;
    ModelKind model = ModelKind::lsvm;
    std::size_t k_features = 8000;
    double split_ratio = 0.8;
    std::uint64_t seed = 42;
    /// apply_nwn is derived from the representation.
    PreprocessOptions preprocess;
    std::optional<std::vector<std::string>> stopwords;
    bool l2_normalize = false;
    ClassifierParams params;

    PreprocessOptions effective_preprocess() const {
        PreprocessOptions p = preprocess;
        p.apply_nwn = uses_nwn(representation);
        return p;
    }

    StopwordSet stopword_set() const {
        if (!stopwords) return StopwordSet::builtin();
        StopwordSet s;
        for (const auto& w : *stopwords) s.insert(w);
        return s;
    }

    void validate() const {
        if (k_features < 1) throw ConfigError("feature count must be at least 1");
        if (!(split_ratio > 0.0 && split_ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");
        params.svm.validate();
        params.forest.validate();
        if (!(params.nb_alpha > 0.0)) throw ConfigError("naive Bayes alpha must be positive");
    }
};

inline nlohmann::json config_to_json(const ExperimentConfig& c) {
    return {{"data", c.dataset.path},
            {"format", std::string(to_string(c.dataset.format))},
            {"repr", std::string(to_string(c.representation))},
            {"model", std::string(to_string(c.model))},
            {"features", c.k_features},
            {"split", c.split_ratio},
            {"seed", c.seed},
            {"stopwords", c.preprocess.remove_stopwords},
            {"keep_single_chars", c.preprocess.keep_single_chars},
            {"custom_stopwords", c.stopwords.has_value()},
            {"l2_normalize", c.l2_normalize},
            {"svm", {{"c", c.params.svm.c}, {"tol", c.params.svm.tol}, {"max_iter", c.params.svm.max_iter}}},
            {"mnb", {{"alpha", c.params.nb_alpha}}},
            {"merf",
             {{"trees", c.params.forest.n_trees},
              {"max_depth", c.params.forest.max_depth},
              {"min_split", c.params.forest.min_split},
              {"features_per_split", c.params.forest.features_per_split}}}};
}

struct EvalReport {
    double accuracy = 0.0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    // Class index 1 is the positive class.
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double seconds = 0.0;
    std::uint64_t split_fingerprint = 0;
    std::size_t n_features = 0;  // fitted vocabulary size (may be below the request)
    ExperimentConfig config;
};

struct CvReport {
    std::vector<double> fold_accuracies;
    double mean = 0.0;
    double stddev = 0.0;  // sample standard deviation over folds
    std::vector<EvalReport> folds;
};

struct SweepReport {
    struct Row {
        std::size_t k_features;
        double accuracy;
    };
    std::vector<Row> rows;
    std::vector<EvalReport> runs;
};

/// Fraction of positions where the two lists agree.
inline double accuracy(std::span<const int> predictions, std::span<const int> truth) {
    if (predictions.size() != truth.size()) throw MetricError("prediction and truth lengths differ");
    if (predictions.empty()) throw MetricError("accuracy of an empty prediction list");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predictions[i] == truth[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

/// FNV-1a over the train indices, a separator, then the test indices.
inline std::uint64_t split_fingerprint(std::span<const std::size_t> train, std::span<const std::size_t> test) {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
        for (int b = 0; b < 8; ++b) {
            h ^= (v >> (8 * b)) & 0xFF;
            h *= 1099511628211ull;
        }
    };
    for (auto i : train) mix(i);
    mix(~std::uint64_t{0});
    for (auto i : test) mix(i);
    return h;
}

/// Preprocesses every document of the corpus (in parallel).
inline std::vector<TokenList> tokenize_corpus(const Corpus& corpus, const PreprocessOptions& options,
                                              const StopwordSet& stopwords) {
    std::vector<TokenList> out(corpus.size());
    parallel_for(corpus.size(), [&](std::size_t i) { out[i] = preprocess_document(corpus[i].text, options, stopwords); });
    return out;
}

/// Fits features and model on `train` token lists; the result is everything
/// needed to score new token lists.
struct FittedPipeline {
    FeatureSpace features;
    TrainedModel model;
};

inline std::vector<TokenList> gather(const std::vector<TokenList>& tokens, std::span<const std::size_t> idx) {
    std::vector<TokenList> out;
    out.reserve(idx.size());
    for (auto i : idx) out.push_back(tokens[i]);
    return out;
}

inline Dataset make_dataset(const FeatureSpace& fs, const std::vector<TokenList>& tokens,
                            std::span<const std::size_t> idx, const std::vector<int>& classes,
                            Representation repr, bool normalize, std::size_t n_classes) {
    Dataset d;
    d.n_features = fs.dimension();
    d.n_classes = n_classes;
    d.x.resize(idx.size());
    d.y.resize(idx.size());
    parallel_for(idx.size(), [&](std::size_t j) {
        d.x[j] = fs.transform(tokens[idx[j]], repr, normalize);
        d.y[j] = classes[idx[j]];
    });
    return d;
}

inline FittedPipeline fit_pipeline(const ExperimentConfig& config, const std::vector<TokenList>& tokens,
                                   const std::vector<int>& classes, std::span<const std::size_t> train,
                                   std::size_t n_classes) {
    FittedPipeline p;
    const auto train_tokens = gather(tokens, train);
    p.features = FeatureSpace::fit(train_tokens, config.k_features);
    const auto data = make_dataset(p.features, tokens, train, classes, config.representation, config.l2_normalize,
                                   n_classes);
    p.model = train_model(config.model, data, config.params);
    return p;
}

/// One train/test evaluation over pre-tokenized documents.
inline EvalReport evaluate_partition(const ExperimentConfig& config, const Corpus& corpus,
                                     const std::vector<TokenList>& tokens, std::span<const std::size_t> train,
                                     std::span<const std::size_t> test) {
    const auto start = std::chrono::steady_clock::now();
    if (test.empty()) throw MetricError("empty test partition");
    const auto classes = corpus.class_indices();
    const auto fitted = fit_pipeline(config, tokens, classes, train, corpus.labels().size());

    EvalReport r;
    r.config = config;
    r.n_train = train.size();
    r.n_test = test.size();
    r.n_features = fitted.features.dimension();
    r.split_fingerprint = split_fingerprint(train, test);
    std::vector<int> predicted(test.size());
    std::vector<int> truth(test.size());
    parallel_for(test.size(), [&](std::size_t j) {
        const auto x = fitted.features.transform(tokens[test[j]], config.representation, config.l2_normalize);
        predicted[j] = predict(fitted.model, x).label;
        truth[j] = classes[test[j]];
    });
    for (std::size_t j = 0; j < test.size(); ++j) {
        const bool pos = predicted[j] == 1;
        const bool actual = truth[j] == 1;
        if (pos && actual) ++r.tp;
        else if (pos) ++r.fp;
        else if (actual) ++r.fn;
        else ++r.tn;
    }
    r.accuracy = accuracy(predicted, truth);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline EvalReport run_holdout(const ExperimentConfig& config, const Corpus& corpus) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    const auto split = stratified_split_indices(corpus, {config.split_ratio, config.seed});
    const auto tokens = tokenize_corpus(corpus, config.effective_preprocess(), config.stopword_set());
    auto r = evaluate_partition(config, corpus, tokens, split.train, split.test);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline EvalReport run_holdout(const ExperimentConfig& config) {
    return run_holdout(config, load_dataset(config.dataset));
}

/// Vocabulary, IDF and model are refit on each fold's training part.
inline CvReport run_cv(const ExperimentConfig& config, const Corpus& corpus, std::size_t k) {
    config.validate();
    const auto plan = stratified_kfold(corpus, k, config.seed);
    const auto tokens = tokenize_corpus(corpus, config.effective_preprocess(), config.stopword_set());
    CvReport cv;
    for (std::size_t f = 0; f < k; ++f) {
        const auto train = plan.train_indices(f);
        const auto test = plan.test_indices(f);
        cv.folds.push_back(evaluate_partition(config, corpus, tokens, train, test));
        cv.fold_accuracies.push_back(cv.folds.back().accuracy);
    }
    double sum = 0.0;
    for (double a : cv.fold_accuracies) sum += a;
    cv.mean = sum / static_cast<double>(k);
    double ss = 0.0;
    for (double a : cv.fold_accuracies) ss += (a - cv.mean) * (a - cv.mean);
    cv.stddev = std::sqrt(ss / static_cast<double>(k - 1));
    return cv;
}

inline CvReport run_cv(const ExperimentConfig& config, std::size_t k) {
    return run_cv(config, load_dataset(config.dataset), k);
}

/// One holdout run per feature size over a single shared split.
inline SweepReport run_feature_sweep(const ExperimentConfig& config, const Corpus& corpus,
                                     std::span<const std::size_t> sizes) {
    if (sizes.empty()) throw ConfigError("feature sweep needs at least one size");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] < 1) throw ConfigError("feature sizes must be at least 1");
        if (i > 0 && sizes[i] <= sizes[i - 1]) throw ConfigError("feature sizes must be strictly increasing");
    }
    config.validate();
    const auto split = stratified_split_indices(corpus, {config.split_ratio, config.seed});
    const auto tokens = tokenize_corpus(corpus, config.effective_preprocess(), config.stopword_set());
    SweepReport s;
    for (auto k : sizes) {
        ExperimentConfig c = config;
        c.k_features = k;
        s.runs.push_back(evaluate_partition(c, corpus, tokens, split.train, split.test));
        s.rows.push_back({k, s.runs.back().accuracy});
    }
    return s;
}

enum class CompareAxis { model, representation };

inline CompareAxis parse_compare_axis(std::string_view s) {
    if (s == "model") return CompareAxis::model;
    if (s == "representation" || s == "repr") return CompareAxis::representation;
    throw ConfigError("unknown comparison axis '" + std::string(s) + "'");
}

/// One holdout per variant with every other setting and the split fixed.
inline std::vector<EvalReport> compare(const ExperimentConfig& config, const Corpus& corpus, CompareAxis axis,
                                       std::span<const std::string> variants) {
    if (variants.empty()) throw ConfigError("comparison needs at least one variant");
    std::vector<ExperimentConfig> configs;
    for (const auto& v : variants) {
        ExperimentConfig c = config;
        if (axis == CompareAxis::model)
            c.model = parse_model_kind(v);
        else
            c.representation = parse_representation(v);
        c.validate();
        configs.push_back(c);
    }
    const auto split = stratified_split_indices(corpus, {config.split_ratio, config.seed});
    std::vector<EvalReport> out;
    std::optional<std::vector<TokenList>> tokens;
    std::optional<bool> tokens_nwn;
    for (const auto& c : configs) {
        const bool nwn = uses_nwn(c.representation);
        if (!tokens || *tokens_nwn != nwn) {
            tokens = tokenize_corpus(corpus, c.effective_preprocess(), c.stopword_set());
            tokens_nwn = nwn;
        }
        out.push_back(evaluate_partition(c, corpus, *tokens, split.train, split.test));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Report emission

inline nlohmann::json report_to_json(const EvalReport& r) {
    return {{"accuracy", r.accuracy},
            {"n_train", r.n_train},
            {"n_test", r.n_test},
            {"n_features", r.n_features},
            {"confusion", {{"tp", r.tp}, {"fp", r.fp}, {"tn", r.tn}, {"fn", r.fn}}},
            {"seconds", r.seconds},
            {"split_fingerprint", r.split_fingerprint},
            {"config", config_to_json(r.config)}};
}

inline nlohmann::json report_to_json(const CvReport& cv) {
    nlohmann::json folds = nlohmann::json::array();
    for (const auto& f : cv.folds) folds.push_back(report_to_json(f));
    return {{"fold_accuracies", cv.fold_accuracies}, {"mean", cv.mean}, {"stddev", cv.stddev}, {"folds", folds}};
}

inline nlohmann::json report_to_json(const SweepReport& s) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : s.rows) rows.push_back({{"features", row.k_features}, {"accuracy", row.accuracy}});
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : s.runs) runs.push_back(report_to_json(r));
    return {{"rows", rows}, {"runs", runs}};
}

inline constexpr std::string_view kCsvReportHeader =
    "data,format,repr,model,features,n_features,split,seed,fold,accuracy,n_train,n_test,tp,fp,tn,fn,seconds";

/// One flat CSV row; `fold` is -1 outside cross-validation.
inline std::string report_csv_row(const EvalReport& r, long fold = -1) {
    auto quote = [](const std::string& s) {
        if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
        std::string q = "\"";
        for (char ch : s) {
            if (ch == '"') q += '"';
            q += ch;
        }
        return q + '"';
    };
    std::ostringstream o;
    o.precision(17);
    const auto& c = r.config;
    o << quote(c.dataset.path) << ',' << to_string(c.dataset.format) << ',' << to_string(c.representation) << ','
      << to_string(c.model) << ',' << c.k_features << ',' << r.n_features << ',' << c.split_ratio << ',' << c.seed
      << ',' << fold << ',' << r.accuracy << ',' << r.n_train << ',' << r.n_test << ',' << r.tp << ',' << r.fp << ','
      << r.tn << ',' << r.fn << ',' << r.seconds;
    return o.str();
}

}  // namespace nwn
