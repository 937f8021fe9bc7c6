#pragma once

// Top-K vocabulary, document frequencies, and binary / TF-IDF document
// vectors. All statistics come from the training token lists only; test
// documents are transformed against the frozen tables.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nwn/error.hpp"
#include "nwn/preprocess.hpp"
#include "nwn/sparse.hpp"

namespace nwn {

enum class Representation { binary, tfidf, tfidf_nwn };

inline std::string_view to_string(Representation r) {
    switch (r) {
        case Representation::binary: return "binary";
        case Representation::tfidf: return "tfidf";
        case Representation::tfidf_nwn: return "tfidf-nwn";
    }
    return "?";
}

/// Accepts "tfidf-nwn" and "tfidf_nwn".
inline Representation parse_representation(std::string_view s) {
    if (s == "binary") return Representation::binary;
    if (s == "tfidf") return Representation::tfidf;
    if (s == "tfidf-nwn" || s == "tfidf_nwn") return Representation::tfidf_nwn;
    throw ConfigError("unknown representation '" + std::string(s) + "'");
}

inline bool uses_nwn(Representation r) noexcept { return r == Representation::tfidf_nwn; }

class Vocabulary {
public:
    Vocabulary() = default;

    explicit Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
        index_.reserve(terms_.size());
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second)
                throw VocabularyError("duplicate vocabulary term '" + terms_[i] + "'");
    }

    const std::vector<std::string>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }

    /// Position of `term`, or -1 when out of vocabulary.
    std::int64_t index_of(const std::string& term) const {
        auto it = index_.find(term);
        return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
    }

    friend bool operator==(const Vocabulary& a, const Vocabulary& b) { return a.terms_ == b.terms_; }

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

/// Document frequencies over the training set and idf = ln(1 + N / df).
struct IdfTable {
    std::uint64_t n_docs = 0;
    std::vector<std::uint64_t> df;
    std::vector<double> idf;

    static IdfTable from_counts(std::uint64_t n_docs, std::vector<std::uint64_t> df) {
        IdfTable t{n_docs, std::move(df), {}};
        t.idf.reserve(t.df.size());
        for (std::size_t i = 0; i < t.df.size(); ++i) {
            if (t.df[i] == 0 || t.df[i] > n_docs)
                throw FitError("document frequency out of range for term " + std::to_string(i));
            t.idf.push_back(std::log(1.0 + static_cast<double>(n_docs) / static_cast<double>(t.df[i])));
        }
        return t;
    }

    friend bool operator==(const IdfTable&, const IdfTable&) = default;
};

/// The `k` most frequent terms by total occurrence count, ties broken by
/// ascending term.
inline Vocabulary build_vocabulary(std::span<const TokenList> token_lists, std::size_t k) {
    if (k == 0) throw VocabularyError("vocabulary size must be at least 1");
    if (token_lists.empty()) throw VocabularyError("cannot build a vocabulary from an empty training set");
    std::unordered_map<std::string, std::uint64_t> counts;
    for (const auto& tl : token_lists)
        for (const auto& t : tl) ++counts[t];
    if (counts.empty()) throw VocabularyError("training documents contain no tokens");

    std::vector<std::pair<const std::string*, std::uint64_t>> ranked;
    ranked.reserve(counts.size());
    for (const auto& [term, n] : counts) ranked.emplace_back(&term, n);
    auto by_rank = [](const auto& a, const auto& b) {
        return a.second != b.second ? a.second > b.second : *a.first < *b.first;
    };
    const std::size_t keep = std::min(k, ranked.size());
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(), by_rank);

    std::vector<std::string> terms;
    terms.reserve(keep);
    for (std::size_t i = 0; i < keep; ++i) terms.push_back(*ranked[i].first);
    return Vocabulary(std::move(terms));
}

inline IdfTable fit_idf(std::span<const TokenList> token_lists, const Vocabulary& vocab) {
    std::vector<std::uint64_t> df(vocab.size(), 0);
    std::vector<std::uint32_t> seen;
    for (const auto& tl : token_lists) {
        seen.clear();
        for (const auto& t : tl) {
            const auto i = vocab.index_of(t);
            if (i >= 0) seen.push_back(static_cast<std::uint32_t>(i));
        }
        std::sort(seen.begin(), seen.end());
        seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
        for (auto i : seen) ++df[i];
    }
    for (std::size_t i = 0; i < df.size(); ++i)
        if (df[i] == 0) throw FitError("vocabulary term '" + vocab.terms()[i] + "' occurs in no training document");
    return IdfTable::from_counts(token_lists.size(), std::move(df));
}

namespace detail {

/// (index, occurrences) for in-vocabulary tokens, sorted by index.
inline std::vector<std::pair<std::uint32_t, std::uint32_t>> term_counts(const TokenList& tokens,
                                                                        const Vocabulary& vocab) {
    std::vector<std::uint32_t> hits;
    hits.reserve(tokens.size());
    for (const auto& t : tokens) {
        const auto i = vocab.index_of(t);
        if (i >= 0) hits.push_back(static_cast<std::uint32_t>(i));
    }
    std::sort(hits.begin(), hits.end());
    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    for (auto i : hits) {
        if (!out.empty() && out.back().first == i)
            ++out.back().second;
        else
            out.emplace_back(i, 1);
    }
    return out;
}

}  // namespace detail

inline SparseVector vectorize_binary(const TokenList& tokens, const Vocabulary& vocab) {
    SparseVector v;
    for (const auto& [i, n] : detail::term_counts(tokens, vocab)) v.entries.push_back({i, 1.0});
    return v;
}

/// weight(t) = count(t) / |tokens| * idf[t]. The denominator counts every
/// token, in or out of vocabulary.
inline SparseVector vectorize_tfidf(const TokenList& tokens, const Vocabulary& vocab, const IdfTable& idf) {
    SparseVector v;
    if (tokens.empty()) return v;
    const double len = static_cast<double>(tokens.size());
    for (const auto& [i, n] : detail::term_counts(tokens, vocab))
        v.entries.push_back({i, static_cast<double>(n) / len * idf.idf[i]});
    return v;
}

/// Fitted vocabulary plus IDF; turns token lists into feature vectors for a
/// given representation.
struct FeatureSpace {
    Vocabulary vocabulary;
    IdfTable idf;

    static FeatureSpace fit(std::span<const TokenList> train, std::size_t k) {
        FeatureSpace fs{build_vocabulary(train, k), {}};
        fs.idf = fit_idf(train, fs.vocabulary);
        return fs;
    }

    std::size_t dimension() const noexcept { return vocabulary.size(); }

    SparseVector transform(const TokenList& tokens, Representation repr, bool normalize = false) const {
        SparseVector v = repr == Representation::binary ? vectorize_binary(tokens, vocabulary)
                                                        : vectorize_tfidf(tokens, vocabulary, idf);
        if (normalize) l2_normalize(v);
        return v;
    }

    friend bool operator==(const FeatureSpace&, const FeatureSpace&) = default;
};

}  // namespace nwn
