#pragma once

#include <span>
#include <string>
#include <vector>

#include "skewdyn/rational_map.hpp"  // Letter

namespace skewdyn {

// An eventually periodic one-sided word: prefix . cycle . cycle . ...
// Letters are 1-based symbols. Canonical form: the cycle is primitive (not a
// power of a shorter cycle) and the prefix cannot be shortened by absorbing
// its last letter into a rotation of the cycle. Canonical forms are unique,
// so operator== decides word equality exactly.
class Word {
public:
    Word(std::vector<Letter> prefix, std::vector<Letter> cycle);

    static Word pure_cycle(std::vector<Letter> cycle) { return Word({}, std::move(cycle)); }

    // "p1 p2 | c1 c2" (1-based letters; empty prefix prints as "| c1 c2").
    static Word parse(const std::string& text);
    std::string to_text() const;

    const std::vector<Letter>& prefix() const { return prefix_; }
    const std::vector<Letter>& cycle() const { return cycle_; }

    // 0-based position in the infinite word.
    Letter at(size_t i) const {
        return i < prefix_.size() ? prefix_[i] : cycle_[(i - prefix_.size()) % cycle_.size()];
    }

    bool operator==(const Word&) const = default;

private:
    std::vector<Letter> prefix_, cycle_;
};

Word shift(const Word& w);
Word prepend(std::span<const Letter> letters, const Word& w);
Word prepend(Letter v, const Word& w);

// 2^{-n} with n the 1-based first disagreement position; 0 for equal words.
// Decidable exactly: agreement up to |p1| + |p2| + lcm(|c1|, |c2|) letters
// forces equality.
double word_distance(const Word& w1, const Word& w2);

struct Cylinder {
    std::vector<Letter> letters;  // anchored at position 1, nonempty
    explicit Cylinder(std::vector<Letter> ls);
    size_t length() const { return letters.size(); }
};

// True iff the first length(c) letters of w match c. Works for any type with
// a Word-style at(i); preimage-tree walkers pass light path views.
template <class WordLike>
bool in_cylinder(const WordLike& w, const Cylinder& c) {
    for (size_t i = 0; i < c.letters.size(); ++i)
        if (w.at(i) != c.letters[i]) return false;
    return true;
}

}  // namespace skewdyn
