#include <precurse/words.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace precurse;
using namespace precurse::words;

namespace {

ReducedWord rw(const Alphabet& a, const std::string& text) { return parse_word(a, text); }

// Random reduced word of length <= max_len over the given alphabet.
ReducedWord random_word(std::mt19937_64& rng, const Alphabet& a, std::size_t max_len) {
    std::uniform_int_distribution<std::size_t> len_dist(0, max_len);
    std::uniform_int_distribution<int> gen_dist(1, static_cast<int>(a.rank));
    std::bernoulli_distribution coin;
    ReducedWord w(a.id);
    std::size_t target = len_dist(rng);
    while (w.size() < target) {
        Letter l = static_cast<Letter>(gen_dist(rng));
        if (coin(rng)) l = -l;
        w.push(l);
    }
    return w;
}

} // namespace

TEST_CASE("reduction cancels adjacent inverse pairs", "[words]") {
    const auto& X = x_alphabet();
    CHECK(rw(X, "x x^-1").empty());
    CHECK(rw(X, "x 0x 0x^-1 x") == rw(X, "x x"));
    CHECK(rw(X, "s2^-1 1x^-1 1x s2").empty());

    // idempotence: re-reducing a reduced word is a fixed point
    std::mt19937_64 rng(7);
    for (int i = 0; i < 200; ++i) {
        ReducedWord w = random_word(rng, X, 30);
        auto ls = w.letters();
        CHECK(ReducedWord::reduce(X.id, ls) == w);
    }
}

TEST_CASE("reduce rejects mixed alphabets", "[words]") {
    std::vector<Generator> gens{Generator{0, 0, +1}, Generator{1, 0, +1}};
    CHECK_THROWS_AS(ReducedWord::reduce(gens), alphabet_mismatch);
}

TEST_CASE("multiplication laws", "[words]") {
    const auto& X = x_alphabet();
    std::mt19937_64 rng(11);

    SECTION("identity and inverse") {
        for (int i = 0; i < 500; ++i) {
            ReducedWord w = random_word(rng, X, 20);
            CHECK(multiply(ReducedWord::identity(X.id), w) == w);
            CHECK(multiply(w, ReducedWord::identity(X.id)) == w);
            CHECK(multiply(w, invert(w)).empty());
            CHECK(invert(invert(w)) == w);
        }
    }
    SECTION("boundary cancellation") {
        CHECK(multiply(rw(X, "x 1x"), rw(X, "1x^-1 x")) == rw(X, "x x"));
    }
    SECTION("inversion reverses") { CHECK(invert(rw(X, "x 0x")) == rw(X, "0x^-1 x^-1")); }
    SECTION("alphabet mismatch") {
        CHECK_THROWS_AS(multiply(ReducedWord::identity(0), ReducedWord::identity(1)),
                        alphabet_mismatch);
    }
}

TEST_CASE("associativity and length parity on random triples", "[words]") {
    const auto& X = x_alphabet();
    std::mt19937_64 rng(13);
    for (int i = 0; i < 10000; ++i) {
        ReducedWord a = random_word(rng, X, 20);
        ReducedWord b = random_word(rng, X, 20);
        ReducedWord c = random_word(rng, X, 20);
        REQUIRE(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)));
        REQUIRE((multiply(a, b).size() & 1) == ((a.size() + b.size()) & 1));
        std::size_t ab = multiply(a, b).size();
        REQUIRE(ab <= a.size() + b.size());
        REQUIRE(ab + std::min(a.size(), b.size()) >= std::max(a.size(), b.size()));
    }
}

TEST_CASE("pair elements form a monoid with commuting factors", "[words]") {
    const auto& X = x_alphabet();
    const auto& Y = y_alphabet();
    PairElement id = PairElement::identity(X.id, Y.id);

    PairElement xy(rw(X, "x"), rw(Y, "y"));
    CHECK(pair_mul(xy, pair_inv(xy)) == id);

    PairElement px(rw(X, "x"), ReducedWord::identity(Y.id));
    PairElement py(ReducedWord::identity(X.id), rw(Y, "y"));
    CHECK(pair_mul(px, py) == pair_mul(py, px));
    CHECK(pair_mul(px, py) == xy);

    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        PairElement p(random_word(rng, X, 10), random_word(rng, Y, 10));
        CHECK(pair_mul(p, id) == p);
        CHECK(pair_mul(id, p) == p);
        CHECK(pair_mul(p, pair_inv(p)).is_identity());
    }
}

TEST_CASE("the unique length-7 accepting label sequence multiplies to 1", "[words]") {
    const auto& X = x_alphabet();
    const auto& Y = y_alphabet();
    // Labels along s1 -> s1 -> s2 -> s4 -> s4 -> s5 -> s6 -> s8.
    std::vector<std::string> labels{"x y", "", "1y x^-1", "1y^-1 1x", "y^-1", "", "1x^-1"};
    PairElement acc = PairElement::identity(X.id, Y.id);
    for (const auto& l : labels) acc = pair_mul(acc, parse_pair(X, Y, l));
    CHECK(acc.is_identity());
}

TEST_CASE("word text syntax round-trips", "[words]") {
    const auto& X = x_alphabet();
    const auto& Y = y_alphabet();
    std::mt19937_64 rng(19);
    for (int i = 0; i < 300; ++i) {
        ReducedWord w = random_word(rng, X, 15);
        CHECK(parse_word(X, format_word(X, w)) == w);
        PairElement p(random_word(rng, X, 8), random_word(rng, Y, 8));
        CHECK(parse_pair(X, Y, format_pair(X, Y, p)) == p);
    }
    CHECK(format_word(X, ReducedWord::identity(X.id)) == "1");
    CHECK(parse_word(X, "  ").empty());
    CHECK(parse_word(X, "1").empty());
    CHECK_THROWS_AS(parse_word(X, "bogus"), parse_error);
    CHECK_THROWS_AS(parse_pair(X, Y, "zz"), parse_error);

    // names shared between the factors cannot be routed
    Alphabet clash(9, {"x"});
    CHECK_THROWS_AS(parse_pair(X, clash, "x"), parse_error);
}

TEST_CASE("generator name validation", "[words]") {
    CHECK_THROWS_AS(Alphabet(5, {"ok", "1"}), precurse::domain_error);
    CHECK_THROWS_AS(Alphabet(5, {"a^b"}), precurse::domain_error);
    CHECK_THROWS_AS(Alphabet(5, {""}), precurse::domain_error);
    Alphabet unnamed(6, 4);
    CHECK(unnamed.names.size() == 4);
    CHECK(unnamed.name_of(2) == "g3");
}
