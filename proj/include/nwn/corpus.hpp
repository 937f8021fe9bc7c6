#pragma once

// Labeled text corpora: loaders for the supported on-disk layouts and
// deterministic stratified holdout / k-fold partitioning.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "nwn/error.hpp"
#include "nwn/utf8.hpp"

namespace nwn {

struct Document {
    std::string text;
    std::string label;

    friend bool operator==(const Document&, const Document&) = default;
};

/// Ordered labeled collection. The label alphabet is sorted ascending and
/// a document's class index is the position of its label in the alphabet.
class Corpus {
public:
    Corpus() = default;

    /// Alphabet is derived from the documents.
    explicit Corpus(std::vector<Document> docs) : docs_(std::move(docs)) {
        for (const auto& d : docs_) labels_.push_back(d.label);
        std::sort(labels_.begin(), labels_.end());
        labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
        validate();
    }

    /// Explicit alphabet, which may contain labels with no documents (used
    /// for subsets so class indices stay aligned with the parent corpus).
    Corpus(std::vector<Document> docs, std::vector<std::string> labels)
        : docs_(std::move(docs)), labels_(std::move(labels)) {
        std::sort(labels_.begin(), labels_.end());
        labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
        validate();
    }

    const std::vector<Document>& docs() const noexcept { return docs_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return docs_.size(); }
    bool empty() const noexcept { return docs_.empty(); }
    const Document& operator[](std::size_t i) const { return docs_[i]; }

    std::size_t class_of(std::size_t doc) const { return label_index(docs_[doc].label); }

    std::size_t label_index(std::string_view label) const {
        auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
        if (it == labels_.end() || *it != label)
            throw DataError("label '" + std::string(label) + "' not in corpus alphabet");
        return static_cast<std::size_t>(it - labels_.begin());
    }

    /// Class index of every document, in load order.
    std::vector<int> class_indices() const {
        std::vector<int> y(docs_.size());
        for (std::size_t i = 0; i < docs_.size(); ++i) y[i] = static_cast<int>(class_of(i));
        return y;
    }

    /// Documents at `indices`, in the given order, sharing this alphabet.
    Corpus subset(std::span<const std::size_t> indices) const {
        std::vector<Document> out;
        out.reserve(indices.size());
        for (auto i : indices) out.push_back(docs_.at(i));
        return Corpus(std::move(out), labels_);
    }

    friend bool operator==(const Corpus&, const Corpus&) = default;

private:
    void validate() const {
        for (const auto& l : labels_)
            if (l.empty()) throw DataError("empty label in alphabet");
        for (const auto& d : docs_)
            if (!std::binary_search(labels_.begin(), labels_.end(), d.label))
                throw DataError("document label '" + d.label + "' not in alphabet");
    }

    std::vector<Document> docs_;
    std::vector<std::string> labels_;
};

namespace detail {

inline std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    return in;
}

inline void strip_cr(std::string& line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// TSV: label<TAB>text<LF>

inline Corpus parse_tsv(std::istream& in) {
    std::vector<Document> docs;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        detail::strip_cr(line);
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) throw ParseError("missing tab separator", lineno);
        if (tab == 0) throw ParseError("empty label", lineno);
        std::string text = line.substr(tab + 1);
        std::replace(text.begin(), text.end(), '\t', ' ');
        docs.push_back({sanitize_utf8(text), sanitize_utf8(line.substr(0, tab))});
    }
    return Corpus(std::move(docs));
}

inline Corpus load_tsv(const std::filesystem::path& path) {
    auto in = detail::open_input(path);
    return parse_tsv(in);
}

/// Rejects labels or texts holding tab/CR/LF, which TSV cannot carry.
inline void write_tsv(const Corpus& corpus, std::ostream& out) {
    auto bad = [](std::string_view s) { return s.find_first_of("\t\r\n") != std::string_view::npos; };
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& d = corpus[i];
        if (bad(d.label) || bad(d.text))
            throw DataError("document " + std::to_string(i) + " contains a tab or newline");
    }
    for (const auto& d : corpus.docs()) out << d.label << '\t' << d.text << '\n';
}

inline void write_tsv(const Corpus& corpus, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    write_tsv(corpus, out);
}

// ---------------------------------------------------------------------------
// CSV (RFC 4180, header row required)

/// Splits RFC 4180 records. Quoted fields may hold commas, doubled quotes and
/// line breaks. Returns false at end of input.
class CsvReader {
public:
    explicit CsvReader(std::istream& in) : in_(in) {}

    bool next(std::vector<std::string>& fields) {
        fields.clear();
        int c = in_.get();
        if (c == EOF) return false;
        ++row_;
        std::string field;
        bool quoted = false;
        bool after_quote = false;
        for (;; c = in_.get()) {
            if (quoted) {
                if (c == EOF) throw ParseError("unterminated quoted field", row_);
                if (c == '"') {
                    if (in_.peek() == '"') {
                        in_.get();
                        field.push_back('"');
                    } else {
                        quoted = false;
                        after_quote = true;
                    }
                } else {
                    field.push_back(static_cast<char>(c));
                }
                continue;
            }
            if (c == ',') {
                fields.push_back(std::move(field));
                field.clear();
                after_quote = false;
                continue;
            }
            if (c == '\n' || c == EOF) break;
            if (c == '\r') {
                if (in_.peek() == '\n') in_.get();
                break;
            }
            if (after_quote) throw ParseError("characters after closing quote", row_);
            if (c == '"') {
                if (!field.empty()) throw ParseError("quote inside unquoted field", row_);
                quoted = true;
                continue;
            }
            field.push_back(static_cast<char>(c));
        }
        fields.push_back(std::move(field));
        return true;
    }

    /// 1-based record number of the record last returned (header is 1).
    std::size_t row() const noexcept { return row_; }

private:
    std::istream& in_;
    std::size_t row_ = 0;
};

inline Corpus parse_csv(std::istream& in, std::string_view label_column, std::string_view text_column) {
    CsvReader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields)) throw ConfigError("CSV input has no header row");
    auto column = [&](std::string_view name) {
        auto it = std::find(fields.begin(), fields.end(), name);
        if (it == fields.end()) throw ConfigError("CSV column '" + std::string(name) + "' not found in header");
        return static_cast<std::size_t>(it - fields.begin());
    };
    // A UTF-8 BOM would otherwise glue itself to the first column name.
    if (!fields.empty() && fields[0].starts_with("\xEF\xBB\xBF")) fields[0].erase(0, 3);
    const std::size_t label_at = column(label_column);
    const std::size_t text_at = column(text_column);
    const std::size_t needed = std::max(label_at, text_at) + 1;

    std::vector<Document> docs;
    while (reader.next(fields)) {
        if (fields.size() == 1 && fields[0].empty()) continue;
        if (fields.size() < needed) throw ParseError("too few fields", reader.row());
        if (fields[label_at].empty()) throw ParseError("empty label", reader.row());
        docs.push_back({sanitize_utf8(fields[text_at]), sanitize_utf8(fields[label_at])});
    }
    return Corpus(std::move(docs));
}

inline Corpus load_csv(const std::filesystem::path& path, std::string_view label_column,
                       std::string_view text_column) {
    auto in = detail::open_input(path);
    return parse_csv(in, label_column, text_column);
}

// ---------------------------------------------------------------------------
// Prefix-labeled: __label__<L><SPACE><text>

/// `per_label_limit` > 0 keeps only the first that many lines of each label
/// (in file order); 0 keeps everything.
inline Corpus parse_prefix_labeled(std::istream& in, std::size_t per_label_limit = 0) {
    static constexpr std::string_view kPrefix = "__label__";
    std::vector<Document> docs;
    std::map<std::string, std::size_t> taken;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        detail::strip_cr(line);
        if (line.empty()) continue;
        if (!line.starts_with(kPrefix)) throw ParseError("missing __label__ prefix", lineno);
        const auto space = line.find(' ', kPrefix.size());
        if (space == std::string::npos) throw ParseError("missing space after label", lineno);
        std::string label = sanitize_utf8(line.substr(kPrefix.size(), space - kPrefix.size()));
        if (label.empty()) throw ParseError("empty label", lineno);
        if (per_label_limit > 0 && taken[label]++ >= per_label_limit) continue;
        std::string text = line.substr(space + 1);
        std::replace(text.begin(), text.end(), '\t', ' ');
        docs.push_back({sanitize_utf8(text), std::move(label)});
    }
    return Corpus(std::move(docs));
}

inline Corpus load_prefix_labeled(const std::filesystem::path& path, std::size_t per_label_limit = 0) {
    auto in = detail::open_input(path);
    return parse_prefix_labeled(in, per_label_limit);
}

// ---------------------------------------------------------------------------
// Directory tree: one file per document under label subdirectories

/// `subdir_to_label` maps a path relative to `root` (e.g. "pos" or
/// "train/pos") to a label. Documents are ordered by label, then by path
/// relative to root.
inline Corpus load_dir_tree(const std::filesystem::path& root,
                            const std::vector<std::pair<std::string, std::string>>& subdir_to_label) {
    namespace fs = std::filesystem;
    struct Entry {
        std::string label;
        std::string rel;
        fs::path path;
    };
    std::vector<Entry> entries;
    for (const auto& [subdir, label] : subdir_to_label) {
        const fs::path dir = root / subdir;
        if (!fs::is_directory(dir)) throw IoError("missing directory '" + dir.string() + "'");
        for (const auto& e : fs::directory_iterator(dir)) {
            if (!e.is_regular_file()) continue;
            entries.push_back({label, (fs::path(subdir) / e.path().filename()).generic_string(), e.path()});
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        return std::tie(a.label, a.rel) < std::tie(b.label, b.rel);
    });
    std::vector<Document> docs;
    docs.reserve(entries.size());
    for (const auto& e : entries) {
        auto in = detail::open_input(e.path);
        std::ostringstream buf;
        buf << in.rdbuf();
        docs.push_back({sanitize_utf8(buf.str()), e.label});
    }
    return Corpus(std::move(docs));
}

// ---------------------------------------------------------------------------
// Partitioning

struct SplitSpec {
    double ratio = 0.8;
    std::uint64_t seed = 42;
};

/// Document indices of a holdout split, each list ascending.
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

namespace detail {

/// Per-class document indices in load order, indexed by class.
inline std::vector<std::vector<std::size_t>> by_class(const Corpus& corpus) {
    std::vector<std::vector<std::size_t>> groups(corpus.labels().size());
    for (std::size_t i = 0; i < corpus.size(); ++i) groups[corpus.class_of(i)].push_back(i);
    return groups;
}

}  // namespace detail

/// Per class, round(ratio * class size) documents (clamped so both sides keep
/// at least one) go to train after a seeded shuffle within the class.
inline SplitIndices stratified_split_indices(const Corpus& corpus, const SplitSpec& spec) {
    if (!(spec.ratio > 0.0 && spec.ratio < 1.0)) throw SplitError("split ratio must lie in (0, 1)");
    if (corpus.empty()) throw SplitError("cannot split an empty corpus");
    auto groups = detail::by_class(corpus);
    std::mt19937_64 rng(spec.seed);
    SplitIndices out;
    for (std::size_t c = 0; c < groups.size(); ++c) {
        auto& g = groups[c];
        if (g.empty()) continue;
        if (g.size() < 2)
            throw SplitError("class '" + corpus.labels()[c] + "' has fewer than 2 documents");
        std::shuffle(g.begin(), g.end(), rng);
        auto n_train = static_cast<std::size_t>(std::llround(spec.ratio * static_cast<double>(g.size())));
        n_train = std::clamp<std::size_t>(n_train, 1, g.size() - 1);
        out.train.insert(out.train.end(), g.begin(), g.begin() + static_cast<std::ptrdiff_t>(n_train));
        out.test.insert(out.test.end(), g.begin() + static_cast<std::ptrdiff_t>(n_train), g.end());
    }
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

inline std::pair<Corpus, Corpus> stratified_split(const Corpus& corpus, const SplitSpec& spec) {
    const auto idx = stratified_split_indices(corpus, spec);
    return {corpus.subset(idx.train), corpus.subset(idx.test)};
}

struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;  // per document, in [0, k)

    std::vector<std::size_t> test_indices(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (assignments[i] == fold) out.push_back(i);
        return out;
    }

    std::vector<std::size_t> train_indices(std::size_t fold) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignments.size(); ++i)
            if (assignments[i] != fold) out.push_back(i);
        return out;
    }

    friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Each class is shuffled and dealt round-robin over the folds. The starting
/// fold of each class continues where the previous class stopped, so total
/// fold sizes also differ by at most one.
inline FoldPlan stratified_kfold(const Corpus& corpus, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw SplitError("fold count must be at least 2");
    if (corpus.empty()) throw SplitError("cannot fold an empty corpus");
    auto groups = detail::by_class(corpus);
    std::mt19937_64 rng(seed);
    FoldPlan plan{k, std::vector<std::size_t>(corpus.size(), 0)};
    std::size_t offset = 0;
    for (std::size_t c = 0; c < groups.size(); ++c) {
        auto& g = groups[c];
        if (g.empty()) continue;
        if (g.size() < k)
            throw SplitError("class '" + corpus.labels()[c] + "' has fewer documents than folds");
        std::shuffle(g.begin(), g.end(), rng);
        for (std::size_t j = 0; j < g.size(); ++j) plan.assignments[g[j]] = (offset + j) % k;
        offset = (offset + g.size()) % k;
    }
    return plan;
}

}  // namespace nwn
