#pragma once

#include <string>
#include <string_view>

namespace nwn {

/// Returns a copy of `in` where every invalid UTF-8 sequence is replaced by
/// U+FFFD. Overlong encodings, surrogates and code points above U+10FFFF are
/// treated as invalid; each maximal invalid subpart yields one replacement.
inline std::string sanitize_utf8(std::string_view in) {
    static constexpr std::string_view kReplacement = "\xEF\xBF\xBD";
    std::string out;
    out.reserve(in.size());
    const auto* s = reinterpret_cast<const unsigned char*>(in.data());
    const std::size_t n = in.size();
    std::size_t i = 0;
    while (i < n) {
        const unsigned char c = s[i];
        if (c < 0x80) {
            out.push_back(static_cast<char>(c));
            ++i;
            continue;
        }
        std::size_t len = 0;
        unsigned char lo = 0x80, hi = 0xBF;
        if (c >= 0xC2 && c <= 0xDF) {
            len = 2;
        } else if (c >= 0xE0 && c <= 0xEF) {
            len = 3;
            if (c == 0xE0) lo = 0xA0;
            if (c == 0xED) hi = 0x9F;
        } else if (c >= 0xF0 && c <= 0xF4) {
            len = 4;
            if (c == 0xF0) lo = 0x90;
            if (c == 0xF4) hi = 0x8F;
        }
        if (len == 0) {
            out.append(kReplacement);
            ++i;
            continue;
        }
        std::size_t j = 1;
        for (; j < len && i + j < n; ++j) {
            const unsigned char cc = s[i + j];
            const unsigned char l = (j == 1) ? lo : 0x80;
            const unsigned char h = (j == 1) ? hi : 0xBF;
            if (cc < l || cc > h) break;
        }
        if (j == len) {
            out.append(in.substr(i, len));
        } else {
            out.append(kReplacement);
        }
        i += j;
    }
    return out;
}

}  // namespace nwn
