#pragma once

// Command-line front end. Settings resolve as: flag > --config JSON > default.
// Exit codes: 0 success, 1 usage/configuration error, 2 data or runtime error.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nwn/eval.hpp"
#include "nwn/model_io.hpp"

namespace nwn::cli {

class UsageError : public Error {
    using Error::Error;
};

/// Flag values merged from the config file and the command line, keyed by
/// flag name without dashes.
class Settings {
public:
    void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
    bool has(const std::string& key) const { return values_.contains(key); }

    std::string str(const std::string& key, const std::string& fallback) const {
        auto it = values_.find(key);
        return it == values_.end() ? fallback : it->second;
    }

    std::string required(const std::string& key) const {
        auto it = values_.find(key);
        if (it == values_.end() || it->second.empty()) throw UsageError("--" + key + " is required");
        return it->second;
    }

    template <typename T>
    T number(const std::string& key, T fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        std::istringstream in(it->second);
        T v{};
        if constexpr (std::is_unsigned_v<T>) {
            if (it->second.find('-') != std::string::npos) throw UsageError("--" + key + " must be non-negative");
        }
        if (!(in >> v) || !(in >> std::ws).eof()) throw UsageError("--" + key + ": invalid number '" + it->second + "'");
        return v;
    }

    bool on_off(const std::string& key, bool fallback) const {
        auto it = values_.find(key);
        if (it == values_.end()) return fallback;
        const auto& v = it->second;
        if (v == "on" || v == "true" || v == "1") return true;
        if (v == "off" || v == "false" || v == "0") return false;
        throw UsageError("--" + key + " expects on or off, got '" + v + "'");
    }

private:
    std::map<std::string, std::string> values_;
};

namespace detail {

/// Command-specific meaning of --model: a path for predict, a kind elsewhere.
struct Command {
    CLI::App* app = nullptr;
    std::map<std::string, std::string> values;
    std::map<std::string, CLI::Option*> options;
};

inline void add_flag(Command& cmd, const std::string& name, const std::string& help) {
    cmd.options[name] = cmd.app->add_option("--" + name, cmd.values[name], help);
}

inline void add_experiment_flags(Command& cmd) {
    add_flag(cmd, "data", "dataset path (file or directory)");
    add_flag(cmd, "format", "tsv | csv | prefix | imdb-dir");
    add_flag(cmd, "label-col", "CSV label column name (default v1)");
    add_flag(cmd, "text-col", "CSV text column name (default v2)");
    add_flag(cmd, "per-label-limit", "prefix format: keep the first N lines of each label (0 = all)");
    add_flag(cmd, "repr", "binary | tfidf | tfidf-nwn");
    add_flag(cmd, "features", "vocabulary size K");
    add_flag(cmd, "split", "train fraction of the holdout split");
    add_flag(cmd, "seed", "random seed (default 42)");
    add_flag(cmd, "stopwords", "on | off");
    add_flag(cmd, "stopword-file", "replace the built-in stopword list (one word per line)");
    add_flag(cmd, "keep-single-chars", "on | off");
    add_flag(cmd, "l2-normalize", "on | off");
    add_flag(cmd, "c", "SVM regularization weight");
    add_flag(cmd, "tol", "SVM stopping tolerance");
    add_flag(cmd, "max-iter", "SVM pass cap");
    add_flag(cmd, "alpha", "naive Bayes smoothing");
    add_flag(cmd, "trees", "forest size");
    add_flag(cmd, "max-depth", "forest depth cap");
    add_flag(cmd, "min-split", "forest minimum node size to split");
    add_flag(cmd, "features-per-split", "forest features sampled per node (0 = ceil(sqrt(K)))");
    add_flag(cmd, "output", "report path (.csv for CSV, otherwise JSON); default stdout");
    add_flag(cmd, "config", "JSON file whose keys mirror flag names");
}

inline Settings resolve(const Command& cmd) {
    Settings s;
    if (auto it = cmd.options.find("config"); it != cmd.options.end() && it->second->count() > 0) {
        const std::string path = cmd.values.at("config");
        std::ifstream in(path);
        if (!in) throw UsageError("cannot open config file '" + path + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw UsageError("config file '" + path + "' is not valid JSON: " + e.what());
        }
        if (!j.is_object()) throw UsageError("config file must hold a JSON object");
        for (const auto& [key, value] : j.items()) {
            if (key == "config" || !cmd.options.contains(key))
                throw UsageError("unknown config key '" + key + "'");
            s.set(key, value.is_string() ? value.get<std::string>() : value.dump());
        }
    }
    for (const auto& [name, opt] : cmd.options)
        if (name != "config" && opt->count() > 0) s.set(name, cmd.values.at(name));
    return s;
}

inline ExperimentConfig experiment_config(const Settings& s) {
    ExperimentConfig c;
    c.dataset.path = s.str("data", "");
    c.dataset.format = parse_data_format(s.str("format", "tsv"));
    c.dataset.label_column = s.str("label-col", "v1");
    c.dataset.text_column = s.str("text-col", "v2");
    c.dataset.per_label_limit = s.number<std::size_t>("per-label-limit", 0);
    c.representation = parse_representation(s.str("repr", "tfidf-nwn"));
    c.model = parse_model_kind(s.str("model", "lsvm"));
    c.k_features = s.number<std::size_t>("features", 8000);
    c.split_ratio = s.number<double>("split", 0.8);
    c.seed = s.number<std::uint64_t>("seed", 42);
    c.preprocess.remove_stopwords = s.on_off("stopwords", true);
    c.preprocess.keep_single_chars = s.on_off("keep-single-chars", false);
    c.l2_normalize = s.on_off("l2-normalize", false);
    if (s.has("stopword-file")) {
        const auto set = StopwordSet::from_file(s.str("stopword-file", ""));
        c.stopwords = std::vector<std::string>(set.words().begin(), set.words().end());
        std::sort(c.stopwords->begin(), c.stopwords->end());
    }
    c.params.svm.c = s.number<double>("c", 1.0);
    c.params.svm.tol = s.number<double>("tol", 1e-4);
    c.params.svm.max_iter = s.number<std::size_t>("max-iter", 1000);
    c.params.svm.seed = c.seed;
    c.params.nb_alpha = s.number<double>("alpha", 1.0);
    c.params.forest.n_trees = s.number<std::size_t>("trees", 100);
    c.params.forest.max_depth = s.number<std::size_t>("max-depth", 40);
    c.params.forest.min_split = s.number<std::size_t>("min-split", 2);
    c.params.forest.features_per_split = s.number<std::size_t>("features-per-split", 0);
    c.params.forest.seed = c.seed;
    c.validate();
    return c;
}

inline void emit(const Settings& s, std::ostream& out, const std::string& json_text,
                 const std::vector<std::string>& csv_rows) {
    const std::string path = s.str("output", "");
    const bool csv = path.size() >= 4 && path.ends_with(".csv");
    std::ostringstream body;
    if (csv) {
        body << kCsvReportHeader << '\n';
        for (const auto& row : csv_rows) body << row << '\n';
    } else {
        body << json_text << '\n';
    }
    if (path.empty()) {
        out << body.str();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write '" + path + "'");
    f << body.str();
}

inline void log_run(std::ostream& err, std::string_view what, const EvalReport& r) {
    err << '[' << what << "] " << to_string(r.config.representation) << '/' << to_string(r.config.model)
        << " K=" << r.config.k_features << " acc=" << r.accuracy << " n_test=" << r.n_test << " (" << r.seconds
        << "s)\n";
}

/// "2000:8000:1000" -> 2000, 3000, ..., 8000; a single number is one size.
inline std::vector<std::size_t> parse_sweep(const std::string& spec) {
    std::vector<std::size_t> parts;
    std::istringstream in(spec);
    std::string tok;
    while (std::getline(in, tok, ':')) {
        try {
            std::size_t used = 0;
            if (tok.empty() || tok[0] == '-') throw std::invalid_argument(tok);
            parts.push_back(std::stoull(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw UsageError("invalid --sweep '" + spec + "', expected FROM:TO:STEP");
        }
    }
    if (parts.size() == 1) return {parts[0]};
    if (parts.size() != 3 || parts[2] == 0 || parts[0] == 0 || parts[1] < parts[0])
        throw UsageError("invalid --sweep '" + spec + "', expected FROM:TO:STEP");
    std::vector<std::size_t> sizes;
    for (std::size_t k = parts[0]; k <= parts[1]; k += parts[2]) sizes.push_back(k);
    return sizes;
}

inline std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (std::getline(in, tok, ','))
        if (!tok.empty()) out.push_back(tok);
    return out;
}

inline int cmd_train(const Settings& s, std::ostream& err) {
    const auto config = experiment_config(s);
    const auto save = s.required("save");
    if (config.dataset.path.empty()) throw UsageError("--data is required");
    const Corpus corpus = load_dataset(config.dataset);
    const auto tokens = tokenize_corpus(corpus, config.effective_preprocess(), config.stopword_set());
    std::vector<std::size_t> all(corpus.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    const auto fitted = fit_pipeline(config, tokens, corpus.class_indices(), all, corpus.labels().size());

    ModelBundle b;
    b.representation = config.representation;
    b.preprocess = config.effective_preprocess();
    b.stopwords = config.stopwords;
    b.l2_normalize = config.l2_normalize;
    b.labels = corpus.labels();
    b.features = fitted.features;
    b.model = fitted.model;
    save_model(b, save);
    err << "[train] " << to_string(config.model) << " on " << corpus.size() << " documents, "
        << fitted.features.dimension() << " features -> " << save << '\n';
    return 0;
}

inline int cmd_predict(const Settings& s, std::istream& in, std::ostream& out) {
    const auto bundle = load_model(s.required("model"));
    const auto stop = bundle.stopword_set();
    std::ifstream file;
    std::istream* src = &in;
    if (s.has("input")) {
        file.open(s.str("input", ""), std::ios::binary);
        if (!file) throw IoError("cannot open '" + s.str("input", "") + "'");
        src = &file;
    }
    std::ofstream file_out;
    std::ostream* dst = &out;
    if (s.has("output")) {
        file_out.open(s.str("output", ""), std::ios::binary);
        if (!file_out) throw IoError("cannot write '" + s.str("output", "") + "'");
        dst = &file_out;
    }
    dst->precision(10);
    std::string line;
    while (std::getline(*src, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto p = predict(bundle.model, bundle.vectorize(sanitize_utf8(line), stop));
        *dst << bundle.labels.at(static_cast<std::size_t>(p.label)) << '\t' << p.decision << '\n';
    }
    return 0;
}

inline Corpus load_for(const ExperimentConfig& config) {
    if (config.dataset.path.empty()) throw UsageError("--data is required");
    return load_dataset(config.dataset);
}

inline int cmd_eval(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto config = experiment_config(s);
    const auto corpus = load_for(config);
    const auto r = run_holdout(config, corpus);
    log_run(err, "eval", r);
    emit(s, out, report_to_json(r).dump(2), {report_csv_row(r)});
    return 0;
}

inline int cmd_cv(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto config = experiment_config(s);
    const auto k = s.number<std::size_t>("folds", 10);
    if (k < 2) throw UsageError("--folds must be at least 2");
    const auto corpus = load_for(config);
    const auto cv = run_cv(config, corpus, k);
    std::vector<std::string> rows;
    for (std::size_t f = 0; f < cv.folds.size(); ++f) {
        log_run(err, "cv fold " + std::to_string(f), cv.folds[f]);
        rows.push_back(report_csv_row(cv.folds[f], static_cast<long>(f)));
    }
    err << "[cv] mean=" << cv.mean << " stddev=" << cv.stddev << '\n';
    emit(s, out, report_to_json(cv).dump(2), rows);
    return 0;
}

inline int cmd_sweep(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto sizes = parse_sweep(s.str("sweep", "2000:8000:1000"));
    auto settings = s;
    if (!settings.has("features")) settings.set("features", std::to_string(sizes.front()));
    const auto config = experiment_config(settings);
    const auto corpus = load_for(config);
    const auto sweep = run_feature_sweep(config, corpus, sizes);
    std::vector<std::string> rows;
    for (const auto& r : sweep.runs) {
        log_run(err, "sweep", r);
        rows.push_back(report_csv_row(r));
    }
    emit(s, out, report_to_json(sweep).dump(2), rows);
    return 0;
}

inline int cmd_compare(const Settings& s, std::ostream& out, std::ostream& err) {
    const auto config = experiment_config(s);
    const auto axis = parse_compare_axis(s.str("axis", "model"));
    auto variants = split_list(s.str("variants", ""));
    if (variants.empty())
        variants = axis == CompareAxis::model ? std::vector<std::string>{"lsvm", "mnb", "merf"}
                                              : std::vector<std::string>{"binary", "tfidf", "tfidf-nwn"};
    const auto corpus = load_for(config);
    const auto reports = compare(config, corpus, axis, variants);
    nlohmann::json arr = nlohmann::json::array();
    std::vector<std::string> rows;
    for (const auto& r : reports) {
        log_run(err, "compare", r);
        arr.push_back(report_to_json(r));
        rows.push_back(report_csv_row(r));
    }
    emit(s, out, nlohmann::json{{"axis", s.str("axis", "model")}, {"runs", arr}}.dump(2), rows);
    return 0;
}

}  // namespace detail

inline int run_cli(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Text sentiment classification with TF-IDF and next-word negation", "nwn"};
    app.require_subcommand(1);

    std::map<std::string, detail::Command> commands;
    auto make = [&](const std::string& name, const std::string& help) -> detail::Command& {
        auto& cmd = commands[name];
        cmd.app = app.add_subcommand(name, help);
        return cmd;
    };

    {
        auto& c = make("train", "train on a whole dataset and save a model bundle");
        detail::add_experiment_flags(c);
        detail::add_flag(c, "model", "lsvm | mnb | merf");
        detail::add_flag(c, "save", "model bundle output path");
    }
    {
        auto& c = make("predict", "classify one document per input line");
        detail::add_flag(c, "model", "model bundle path");
        detail::add_flag(c, "input", "input file (default stdin)");
        detail::add_flag(c, "output", "output file (default stdout)");
        detail::add_flag(c, "config", "JSON file whose keys mirror flag names");
    }
    {
        auto& c = make("eval", "holdout evaluation");
        detail::add_experiment_flags(c);
        detail::add_flag(c, "model", "lsvm | mnb | merf");
    }
    {
        auto& c = make("cv", "stratified k-fold cross-validation");
        detail::add_experiment_flags(c);
        detail::add_flag(c, "model", "lsvm | mnb | merf");
        detail::add_flag(c, "folds", "fold count (default 10)");
    }
    {
        auto& c = make("sweep", "holdout accuracy across feature sizes");
        detail::add_experiment_flags(c);
        detail::add_flag(c, "model", "lsvm | mnb | merf");
        detail::add_flag(c, "sweep", "FROM:TO:STEP (default 2000:8000:1000)");
    }
    {
        auto& c = make("compare", "compare models or representations on one split");
        detail::add_experiment_flags(c);
        detail::add_flag(c, "model", "lsvm | mnb | merf");
        detail::add_flag(c, "axis", "model | representation");
        detail::add_flag(c, "variants", "comma-separated variants (default: all for the axis)");
    }

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::Success& e) {
        out << app.help(e.get_name().empty() ? "" : e.get_name());
        for (auto& [name, cmd] : commands)
            if (cmd.app->parsed()) out << cmd.app->help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        for (auto& [name, cmd] : commands) {
            if (!cmd.app->parsed()) continue;
            const auto settings = detail::resolve(cmd);
            if (name == "train") return detail::cmd_train(settings, err);
            if (name == "predict") return detail::cmd_predict(settings, in, out);
            if (name == "eval") return detail::cmd_eval(settings, out, err);
            if (name == "cv") return detail::cmd_cv(settings, out, err);
            if (name == "sweep") return detail::cmd_sweep(settings, out, err);
            if (name == "compare") return detail::cmd_compare(settings, out, err);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}

}  // namespace nwn::cli
