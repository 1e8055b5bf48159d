#pragma once

#include <precurse/errors.hpp>

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace precurse::words {

// A free-group alphabet: a fixed rank plus printable generator names.
// Words remember only the alphabet id; two alphabets with the same id
// are treated as the same alphabet.
struct Alphabet {
    std::uint32_t id = 0;
    std::uint32_t rank = 0;
    std::vector<std::string> names; // size == rank

    Alphabet() = default;
    Alphabet(std::uint32_t id_, std::vector<std::string> names_)
        : id(id_), rank(static_cast<std::uint32_t>(names_.size())), names(std::move(names_)) {
        for (const auto& n : names) {
            if (n.empty() || n == "1" || n.find('^') != std::string::npos ||
                n.find_first_of(" \t\r\n") != std::string::npos)
                throw domain_error("invalid generator name '" + n + "'");
        }
    }
    // Unnamed alphabet of a given rank; generators print as g1..gN.
    Alphabet(std::uint32_t id_, std::uint32_t rank_) : id(id_), rank(rank_) {
        names.reserve(rank_);
        for (std::uint32_t i = 0; i < rank_; ++i) names.push_back("g" + std::to_string(i + 1));
    }

    const std::string& name_of(std::uint32_t index) const {
        if (index >= rank) throw domain_error("generator index out of range");
        return names[index];
    }
    // Returns rank if the name is unknown.
    std::uint32_t index_of(std::string_view name) const {
        for (std::uint32_t i = 0; i < rank; ++i)
            if (names[i] == name) return i;
        return rank;
    }
};

// Built-in alphabets used by all shipped fixtures.  The first factor has
// rank 11 (s1..s8 plus the counter letters x, 0x, 1x), the second rank 3.
inline const Alphabet& x_alphabet() {
    static const Alphabet a(0, {"s1", "s2", "s3", "s4", "s5", "s6", "s7", "s8", "x", "0x", "1x"});
    return a;
}
inline const Alphabet& y_alphabet() {
    static const Alphabet a(1, {"y", "0y", "1y"});
    return a;
}
// Rank-2 alphabet for unipotent 2x2 matrix images.
inline const Alphabet& f2_alphabet() {
    static const Alphabet a(2, {"a", "b"});
    return a;
}

struct Generator {
    std::uint32_t alphabet_id = 0;
    std::uint32_t index = 0;
    int sign = +1; // +1 or -1

    friend bool operator==(const Generator&, const Generator&) = default;
};

// Letters are stored as signed offsets: +(index+1) for a generator,
// -(index+1) for its inverse.  Zero never appears.
using Letter = std::int32_t;

inline Letter to_letter(const Generator& g) {
    auto v = static_cast<Letter>(g.index + 1);
    return g.sign >= 0 ? v : -v;
}

// Freely reduced word over one alphabet.  The stored letter sequence is
// canonical: no adjacent pair cancels, so equality and hashing work on
// the raw sequence.
class ReducedWord {
public:
    ReducedWord() = default;
    explicit ReducedWord(std::uint32_t alphabet_id) : alphabet_id_(alphabet_id) {}

    static ReducedWord identity(std::uint32_t alphabet_id) { return ReducedWord(alphabet_id); }

    // Reduces an arbitrary letter sequence with a single stack pass.
    static ReducedWord reduce(std::uint32_t alphabet_id, std::span<const Letter> letters) {
        ReducedWord w(alphabet_id);
        w.letters_.reserve(letters.size());
        for (Letter l : letters) w.push(l);
        return w;
    }

    static ReducedWord reduce(std::span<const Generator> gens) {
        if (gens.empty()) throw domain_error("cannot infer alphabet from an empty generator list");
        ReducedWord w(gens.front().alphabet_id);
        for (const Generator& g : gens) {
            if (g.alphabet_id != w.alphabet_id_)
                throw alphabet_mismatch("letters from different alphabets in one word");
            w.push(to_letter(g));
        }
        return w;
    }

    std::uint32_t alphabet_id() const { return alphabet_id_; }
    bool empty() const { return letters_.empty(); }
    std::size_t size() const { return letters_.size(); }
    std::span<const Letter> letters() const { return letters_; }
    Letter letter(std::size_t i) const { return letters_[i]; }

    Generator generator_at(std::size_t i) const {
        Letter l = letters_[i];
        return Generator{alphabet_id_, static_cast<std::uint32_t>((l > 0 ? l : -l) - 1),
                         l > 0 ? +1 : -1};
    }

    // Appends one letter with cancellation; keeps the word reduced.
    void push(Letter l) {
        if (!letters_.empty() && letters_.back() == -l)
            letters_.pop_back();
        else
            letters_.push_back(l);
    }

    friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
        return a.alphabet_id_ == b.alphabet_id_ && a.letters_ == b.letters_;
    }
    friend bool operator<(const ReducedWord& a, const ReducedWord& b) {
        if (a.alphabet_id_ != b.alphabet_id_) return a.alphabet_id_ < b.alphabet_id_;
        return a.letters_ < b.letters_;
    }

private:
    std::uint32_t alphabet_id_ = 0;
    std::vector<Letter> letters_;
};

inline ReducedWord multiply(const ReducedWord& a, const ReducedWord& b) {
    if (a.alphabet_id() != b.alphabet_id())
        throw alphabet_mismatch("multiplying words over different alphabets");
    ReducedWord r = a;
    for (Letter l : b.letters()) r.push(l);
    return r;
}

inline ReducedWord invert(const ReducedWord& w) {
    ReducedWord r(w.alphabet_id());
    auto ls = w.letters();
    for (std::size_t i = ls.size(); i-- > 0;) r.push(-ls[i]);
    return r;
}

inline std::size_t hash_value(const ReducedWord& w) {
    // FNV-1a over the letters; words are canonical so this is a value hash.
    std::uint64_t h = 14695981039346656037ull ^ w.alphabet_id();
    for (Letter l : w.letters()) {
        h ^= static_cast<std::uint32_t>(l);
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

// Element of the direct product F_j x F_k: the factors commute, so a
// pair of reduced words is a canonical form.
struct PairElement {
    ReducedWord x;
    ReducedWord y;

    PairElement() = default;
    PairElement(ReducedWord x_, ReducedWord y_) : x(std::move(x_)), y(std::move(y_)) {}

    static PairElement identity(std::uint32_t x_alphabet_id, std::uint32_t y_alphabet_id) {
        return PairElement(ReducedWord::identity(x_alphabet_id),
                           ReducedWord::identity(y_alphabet_id));
    }

    bool is_identity() const { return x.empty() && y.empty(); }
    std::size_t total_length() const { return x.size() + y.size(); }

    friend bool operator==(const PairElement& a, const PairElement& b) {
        return a.x == b.x && a.y == b.y;
    }
    friend bool operator<(const PairElement& a, const PairElement& b) {
        if (!(a.x == b.x)) return a.x < b.x;
        return a.y < b.y;
    }
};

inline PairElement pair_mul(const PairElement& a, const PairElement& b) {
    return PairElement(multiply(a.x, b.x), multiply(a.y, b.y));
}

inline PairElement pair_inv(const PairElement& p) {
    return PairElement(invert(p.x), invert(p.y));
}

struct PairHash {
    std::size_t operator()(const PairElement& p) const {
        std::uint64_t h = hash_value(p.x);
        h ^= hash_value(p.y) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h);
    }
};

struct WordHash {
    std::size_t operator()(const ReducedWord& w) const { return hash_value(w); }
};

// ---------------------------------------------------------------------------
// Text syntax: whitespace-separated generator names with an optional ^-1
// suffix, e.g. "s2^-1 1x^-1 0y s2".  The bare token "1" is the identity.

inline ReducedWord parse_word(const Alphabet& alphabet, std::string_view text) {
    ReducedWord w(alphabet.id);
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        if (tok == "1") continue;
        int sign = +1;
        std::string_view name = tok;
        if (tok.size() > 3 && tok.ends_with("^-1")) {
            sign = -1;
            name = std::string_view(tok).substr(0, tok.size() - 3);
        }
        std::uint32_t idx = alphabet.index_of(name);
        if (idx == alphabet.rank)
            throw parse_error("unknown generator '" + std::string(name) + "'");
        w.push(sign > 0 ? static_cast<Letter>(idx + 1) : -static_cast<Letter>(idx + 1));
    }
    return w;
}

inline std::string format_word(const Alphabet& alphabet, const ReducedWord& w) {
    if (w.alphabet_id() != alphabet.id)
        throw alphabet_mismatch("formatting a word with the wrong alphabet");
    if (w.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) out += ' ';
        Generator g = w.generator_at(i);
        out += alphabet.name_of(g.index);
        if (g.sign < 0) out += "^-1";
    }
    return out;
}

// Parses a product-group element: tokens are routed to the factor whose
// alphabet knows the name, and multiplied factor-wise in reading order.
// Generator names of the two alphabets must not overlap.
inline PairElement parse_pair(const Alphabet& ax, const Alphabet& ay, std::string_view text) {
    ReducedWord x(ax.id), y(ay.id);
    std::istringstream in{std::string(text)};
    std::string tok;
    while (in >> tok) {
        if (tok == "1") continue;
        int sign = +1;
        std::string_view name = tok;
        if (tok.size() > 3 && tok.ends_with("^-1")) {
            sign = -1;
            name = std::string_view(tok).substr(0, tok.size() - 3);
        }
        std::uint32_t ix = ax.index_of(name);
        std::uint32_t iy = ay.index_of(name);
        if (ix < ax.rank && iy < ay.rank)
            throw parse_error("ambiguous generator name '" + std::string(name) + "'");
        if (ix < ax.rank)
            x.push(sign > 0 ? static_cast<Letter>(ix + 1) : -static_cast<Letter>(ix + 1));
        else if (iy < ay.rank)
            y.push(sign > 0 ? static_cast<Letter>(iy + 1) : -static_cast<Letter>(iy + 1));
        else
            throw parse_error("unknown generator '" + std::string(name) + "'");
    }
    return PairElement(std::move(x), std::move(y));
}

inline std::string format_pair(const Alphabet& ax, const Alphabet& ay, const PairElement& p) {
    if (p.is_identity()) return "1";
    std::string out;
    if (!p.x.empty()) out += format_word(ax, p.x);
    if (!p.y.empty()) {
        if (!out.empty()) out += ' ';
        out += format_word(ay, p.y);
    }
    return out;
}

} // namespace precurse::words
