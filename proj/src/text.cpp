#include "notestd/text.hpp"

#include <algorithm>
#include <cctype>

namespace notestd::text {

bool is_valid_utf8(std::string_view bytes) {
    std::size_t i = 0;
    const std::size_t n = bytes.size();
    while (i < n) {
        unsigned char c = static_cast<unsigned char>(bytes[i]);
        std::size_t len;
        unsigned cp_min;
        if (c < 0x80) {
            i += 1;
            continue;
        } else if ((c & 0xE0) == 0xC0) {
            len = 2;
            cp_min = 0x80;
        } else if ((c & 0xF0) == 0xE0) {
            len = 3;
            cp_min = 0x800;
        } else if ((c & 0xF8) == 0xF0) {
            len = 4;
            cp_min = 0x10000;
        } else {
            return false;
        }
        if (i + len > n) return false;
        unsigned cp = c & (0xFF >> (len + 1));
        for (std::size_t k = 1; k < len; ++k) {
            unsigned char cc = static_cast<unsigned char>(bytes[i + k]);
            if ((cc & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (cp < cp_min) return false;            // overlong
        if (cp > 0x10FFFF) return false;
        if (cp >= 0xD800 && cp <= 0xDFFF) return false; // surrogate
        i += len;
    }
    return true;
}

std::size_t count_scalars(std::string_view utf8) {
    std::size_t count = 0;
    for (char ch : utf8) {
        if ((static_cast<unsigned char>(ch) & 0xC0) != 0x80) ++count;
    }
    return count;
}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_word_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::vector<std::string> tokenize_alnum(std::string_view s) {
    std::vector<std::string> tokens;
    std::size_t i = 0;
    while (i < s.size()) {
        if (!is_word_char(s[i])) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < s.size() && is_word_char(s[j])) ++j;
        tokens.emplace_back(s.substr(i, j - i));
        i = j;
    }
    return tokens;
}

std::vector<std::string> tokenize_alnum_lower(std::string_view s) {
    std::vector<std::string> tokens = tokenize_alnum(s);
    for (auto& t : tokens) t = to_lower(t);
    return tokens;
}

bool on_word_boundary(std::string_view s, std::size_t pos, std::size_t len) {
    if (pos > 0 && is_word_char(s[pos - 1])) return false;
    std::size_t end = pos + len;
    if (end < s.size() && is_word_char(s[end])) return false;
    return true;
}

std::string token_window(std::string_view s, std::size_t begin, std::size_t end, std::size_t radius) {
    // Walk backwards over up to `radius` tokens.
    std::size_t lo = begin;
    std::size_t seen = 0;
    std::size_t i = begin;
    while (i > 0 && seen < radius) {
        --i;
        if (is_word_char(s[i])) {
            while (i > 0 && is_word_char(s[i - 1])) --i;
            ++seen;
            lo = i;
        }
    }
    std::size_t hi = end;
    seen = 0;
    i = end;
    while (i < s.size() && seen < radius) {
        if (is_word_char(s[i])) {
            while (i < s.size() && is_word_char(s[i])) ++i;
            ++seen;
            hi = i;
        } else {
            ++i;
        }
    }
    return std::string(s.substr(lo, hi - lo));
}

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_lines(std::string_view s) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == '\n') {
            std::string_view line = s.substr(start, i - start);
            if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
            lines.emplace_back(line);
            start = i + 1;
        }
    }
    if (!s.empty() && s.back() == '\n') lines.pop_back();
    return lines;
}

bool is_all_caps(std::string_view token) {
    bool has_alpha = false;
    for (char c : token) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            has_alpha = true;
            if (std::islower(static_cast<unsigned char>(c))) return false;
        }
    }
    return has_alpha;
}

std::size_t edit_distance_bounded(std::string_view a, std::string_view b, std::size_t bound) {
    const std::size_t la = a.size();
    const std::size_t lb = b.size();
    const std::size_t over = bound + 1;
    if (la > lb + bound || lb > la + bound) return over;
    std::vector<std::size_t> prev(lb + 1), cur(lb + 1);
    for (std::size_t j = 0; j <= lb; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= la; ++i) {
        cur[0] = i;
        std::size_t row_min = cur[0];
        for (std::size_t j = 1; j <= lb; ++j) {
            std::size_t cost = (a[i - 1] == b[j - 1]) ? 0 : 1;
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost});
            row_min = std::min(row_min, cur[j]);
        }
        if (row_min > bound) return over;
        std::swap(prev, cur);
    }
    return std::min(prev[lb], over);
}

} // namespace notestd::text
