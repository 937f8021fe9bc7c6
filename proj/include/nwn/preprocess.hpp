#pragma once

// Text -> token pipeline: normalize, next-word negation, stopword removal.
// Every function here is pure and safe to call concurrently.

#include <string>
#include <string_view>
#include <vector>

#include "nwn/stopwords.hpp"

namespace nwn {

/// Ordered tokens of one document. Tokens are non-empty and match
/// [a-z0-9_]+; a leading "not_" marks a negated token.
using TokenList = std::vector<std::string>;

inline constexpr std::string_view kNegationPrefix = "not_";

struct PreprocessOptions {
    bool remove_stopwords = true;
    bool keep_single_chars = false;
    bool apply_nwn = true;

    friend bool operator==(const PreprocessOptions&, const PreprocessOptions&) = default;
};

/// Lowercases, deletes apostrophes (ASCII ' and U+2019), turns any other
/// character outside [A-Za-z0-9] into a separator and splits. Non-ASCII
/// bytes are separators.
inline TokenList normalize(std::string_view text, bool keep_single_chars) {
    TokenList out;
    std::string cur;
    auto flush = [&] {
        if (cur.size() > 1 || (keep_single_chars && !cur.empty())) out.push_back(cur);
        cur.clear();
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (c == '\'') continue;
        if (c == 0xE2 && text.substr(i, 3) == "\xE2\x80\x99") {
            i += 2;
            continue;
        }
        if (c >= 'A' && c <= 'Z') {
            cur.push_back(static_cast<char>(c - 'A' + 'a'));
        } else if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            cur.push_back(static_cast<char>(c));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

/// Next-word negation. A cue token is dropped and arms a pending flag; the
/// next non-cue token is emitted as "not_<token>" and clears it. A flag
/// still armed at end of input is discarded.
inline TokenList apply_nwn(const TokenList& tokens) {
    TokenList out;
    out.reserve(tokens.size());
    bool pending = false;
    for (const auto& t : tokens) {
        if (is_negation_cue(t)) {
            pending = true;
            continue;
        }
        if (pending) {
            out.push_back(std::string(kNegationPrefix) + t);
            pending = false;
        } else {
            out.push_back(t);
        }
    }
    return out;
}

/// Negated tokens are never removed.
inline TokenList remove_stopwords(const TokenList& tokens, const StopwordSet& stopwords) {
    TokenList out;
    out.reserve(tokens.size());
    for (const auto& t : tokens)
        if (t.starts_with(kNegationPrefix) || !stopwords.contains(t)) out.push_back(t);
    return out;
}

inline TokenList remove_stopwords(const TokenList& tokens) {
    static const StopwordSet builtin = StopwordSet::builtin();
    return remove_stopwords(tokens, builtin);
}

/// normalize -> apply_nwn (if enabled) -> remove_stopwords (if enabled).
inline TokenList preprocess_document(std::string_view text, const PreprocessOptions& options,
                                     const StopwordSet& stopwords) {
    TokenList tokens = normalize(text, options.keep_single_chars);
    if (options.apply_nwn) tokens = apply_nwn(tokens);
    if (options.remove_stopwords) tokens = remove_stopwords(tokens, stopwords);
    return tokens;
}

inline TokenList preprocess_document(std::string_view text, const PreprocessOptions& options) {
    static const StopwordSet builtin = StopwordSet::builtin();
    return preprocess_document(text, options, builtin);
}

}  // namespace nwn
