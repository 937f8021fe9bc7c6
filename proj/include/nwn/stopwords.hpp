#pragma once

#include <array>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <unordered_set>

#include "nwn/error.hpp"

namespace nwn {

/// Tokens that trigger next-word negation, as they appear after
/// normalization (apostrophes deleted: "won't" -> "wont").
inline constexpr std::array<std::string_view, 29> kNegationCues = {
    "not", "no", "never", "none", "nobody", "nothing", "nowhere", "neither", "nor", "cannot",
    "dont", "doesnt", "didnt", "wont", "wouldnt", "couldnt", "shouldnt", "isnt", "arent",
    "wasnt", "werent", "hasnt", "havent", "hadnt", "cant", "aint", "neednt", "mustnt", "shant",
};

inline bool is_negation_cue(std::string_view token) noexcept {
    for (auto cue : kNegationCues)
        if (cue == token) return true;
    return false;
}

/// Built-in English stopword list, post-normalization spelling. Mirrors
/// resources/stopwords.txt and never contains a negation cue.
inline constexpr std::array<std::string_view, 174> kBuiltinStopwords = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "youre", "youve",
    "youll", "youd", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself",
    "she", "shes", "her", "hers", "herself", "it", "its", "itself", "they", "them", "their",
    "theirs", "themselves", "what", "which", "who", "whom", "this", "that", "thatll", "these",
    "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has", "had",
    "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
    "because", "as", "until", "while", "of", "at", "by", "for", "with", "about", "against",
    "between", "into", "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "in", "out", "on", "off", "over", "under", "again", "further", "then",
    "once", "here", "there", "when", "where", "why", "how", "all", "any", "both", "each",
    "few", "more", "most", "other", "some", "such", "only", "own", "same", "so", "than", "too",
    "very", "s", "t", "can", "will", "just", "should", "shouldve", "now", "d", "ll", "m", "o",
    "re", "ve", "y", "ma", "mightnt", "also", "could", "would", "might", "must", "shall",
    "may", "us", "ever", "every", "yet", "however", "although", "though", "within", "without",
    "upon", "via", "whose", "whether", "either", "etc", "im", "ive", "id", "hes", "theyre",
    "theyve", "weve", "wed", "thats", "theres", "whats", "lets", "heres",
};

class StopwordSet {
public:
    StopwordSet() = default;

    static StopwordSet builtin() {
        StopwordSet s;
        for (auto w : kBuiltinStopwords) s.insert(std::string(w));
        return s;
    }

    /// One word per line; blank lines and lines starting with '#' are
    /// skipped. Words are lowercased and negation cues are discarded.
    static StopwordSet from_file(const std::filesystem::path& path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open stopword file '" + path.string() + "'");
        StopwordSet s;
        std::string line;
        while (std::getline(in, line)) {
            const auto b = line.find_first_not_of(" \t\r");
            if (b == std::string::npos || line[b] == '#') continue;
            const auto e = line.find_last_not_of(" \t\r");
            std::string w = line.substr(b, e - b + 1);
            for (auto& ch : w)
                if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
            s.insert(std::move(w));
        }
        return s;
    }

    void insert(std::string word) {
        if (!is_negation_cue(word)) words_.insert(std::move(word));
    }

    bool contains(const std::string& word) const { return words_.contains(word); }
    std::size_t size() const noexcept { return words_.size(); }
    const std::unordered_set<std::string>& words() const noexcept { return words_; }

private:
    std::unordered_set<std::string> words_;
};

}  // namespace nwn
