#include "skewdyn/word.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "skewdyn/errors.hpp"

namespace skewdyn {

namespace {

// Smallest p dividing the length such that the cycle is a repetition of its
// first p letters.
size_t primitive_period(const std::vector<Letter>& cycle) {
    size_t m = cycle.size();
    for (size_t p = 1; p < m; ++p) {
        if (m % p != 0) continue;
        bool ok = true;
        for (size_t i = p; i < m && ok; ++i) ok = (cycle[i] == cycle[i % p]);
        if (ok) return p;
    }
    return m;
}

}  // namespace

Word::Word(std::vector<Letter> prefix, std::vector<Letter> cycle)
    : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
    if (cycle_.empty()) throw ConfigError("Word: empty cycle");
    for (Letter v : prefix_)
        if (v == 0) throw ConfigError("Word: letters are 1-based");
    for (Letter v : cycle_)
        if (v == 0) throw ConfigError("Word: letters are 1-based");

    size_t p = primitive_period(cycle_);
    cycle_.resize(p);
    // Absorb: if the prefix ends with the cycle's last letter, dropping it and
    // rotating the cycle right spells the same word with a shorter prefix.
    while (!prefix_.empty() && prefix_.back() == cycle_.back()) {
        prefix_.pop_back();
        std::rotate(cycle_.rbegin(), cycle_.rbegin() + 1, cycle_.rend());
    }
}

Word Word::parse(const std::string& text) {
    auto bar = text.find('|');
    if (bar == std::string::npos) throw ConfigError("Word::parse: missing '|' in \"" + text + "\"");
    auto read = [](const std::string& s) {
        std::vector<Letter> out;
        std::istringstream is(s);
        long v;
        while (is >> v) {
            if (v < 1 || v > 255) throw ConfigError("Word::parse: letter out of range");
            out.push_back(static_cast<Letter>(v));
        }
        return out;
    };
    return Word(read(text.substr(0, bar)), read(text.substr(bar + 1)));
}

std::string Word::to_text() const {
    std::string s;
    for (Letter v : prefix_) s += std::to_string(static_cast<int>(v)) + " ";
    s += "|";
    for (Letter v : cycle_) s += " " + std::to_string(static_cast<int>(v));
    return s;
}

Word shift(const Word& w) {
    if (!w.prefix().empty()) {
        std::vector<Letter> p(w.prefix().begin() + 1, w.prefix().end());
        return Word(std::move(p), w.cycle());
    }
    std::vector<Letter> c = w.cycle();
    std::rotate(c.begin(), c.begin() + 1, c.end());
    return Word({}, std::move(c));
}

Word prepend(std::span<const Letter> letters, const Word& w) {
    std::vector<Letter> p(letters.begin(), letters.end());
    p.insert(p.end(), w.prefix().begin(), w.prefix().end());
    return Word(std::move(p), w.cycle());
}

Word prepend(Letter v, const Word& w) { return prepend(std::span<const Letter>(&v, 1), w); }

double word_distance(const Word& w1, const Word& w2) {
    if (w1 == w2) return 0.0;
    size_t m1 = w1.cycle().size(), m2 = w2.cycle().size();
    size_t bound = w1.prefix().size() + w2.prefix().size() + std::lcm(m1, m2);
    for (size_t i = 0; i < bound; ++i)
        if (w1.at(i) != w2.at(i)) return std::ldexp(1.0, -static_cast<int>(i + 1));
    // Unreachable for canonical forms: agreement to the bound means equality.
    return 0.0;
}

Cylinder::Cylinder(std::vector<Letter> ls) : letters(std::move(ls)) {
    if (letters.empty()) throw ConfigError("Cylinder: empty letter list");
    for (Letter v : letters)
        if (v == 0) throw ConfigError("Cylinder: letters are 1-based");
}

}  // namespace skewdyn
