#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "necklace/errors.hpp"

namespace necklace {

// Finite word over the digit alphabet {1..n}; the empty word is the
// identity address.
struct Word {
    std::vector<int> digits;

    Word() = default;
    explicit Word(std::vector<int> d) : digits(std::move(d)) {}
    Word(std::initializer_list<int> d) : digits(d) {}

    std::size_t level() const { return digits.size(); }
    bool empty() const { return digits.empty(); }
    int operator[](std::size_t i) const { return digits[i]; }

    Word appended(int digit) const {
        Word w(*this);
        w.digits.push_back(digit);
        return w;
    }
    Word prefix(std::size_t len) const {
        return Word(std::vector<int>(digits.begin(), digits.begin() + len));
    }
    Word concat(const Word& o) const {
        Word w(*this);
        w.digits.insert(w.digits.end(), o.digits.begin(), o.digits.end());
        return w;
    }

    auto operator<=>(const Word&) const = default;

    std::string str() const {
        if (digits.empty()) return "-";
        std::string s;
        for (std::size_t i = 0; i < digits.size(); ++i) {
            if (i) s += ',';
            s += std::to_string(digits[i]);
        }
        return s;
    }

    // "1,13" -> word; "-" or "" -> empty word.
    static Word parse(const std::string& text, int n_digits) {
        Word w;
        if (text.empty() || text == "-") return w;
        std::size_t pos = 0;
        while (pos < text.size()) {
            std::size_t next = text.find(',', pos);
            if (next == std::string::npos) next = text.size();
            std::string tok = text.substr(pos, next - pos);
            if (tok.empty()) throw InputError("empty digit in word '" + text + "'");
            int d = 0;
            try {
                d = std::stoi(tok);
            } catch (...) {
                throw InputError("bad digit '" + tok + "' in word '" + text + "'");
            }
            if (d < 1 || d > n_digits)
                throw InputError("digit " + tok + " out of range 1.." + std::to_string(n_digits));
            w.digits.push_back(d);
            pos = next + 1;
        }
        return w;
    }
};

inline std::size_t common_prefix_len(const Word& a, const Word& b) {
    std::size_t m = std::min(a.level(), b.level());
    std::size_t i = 0;
    while (i < m && a[i] == b[i]) ++i;
    return i;
}

}  // namespace necklace
