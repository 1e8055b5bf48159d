#pragma once

#include <precurse/errors.hpp>
#include <precurse/words.hpp>

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

namespace precurse::ring {

using words::PairElement;
using words::PairHash;

// Finitely supported map PairElement -> coefficient over Z, or over
// Z/m when a modulus is set.  Stored coefficients are never zero; in
// modular mode they live in [0, m).
class RingElement {
public:
    using Terms = std::unordered_map<PairElement, mpz_class, PairHash>;

    RingElement() = default;
    explicit RingElement(std::optional<unsigned long> modulus) : modulus_(modulus) {
        if (modulus_ && *modulus_ < 2) throw domain_error("modulus must be >= 2");
    }

    static RingElement zero(std::optional<unsigned long> modulus = {}) {
        return RingElement(modulus);
    }
    // Multiplicative identity: coefficient 1 on the identity pair.
    static RingElement one(std::uint32_t x_alphabet_id, std::uint32_t y_alphabet_id,
                           std::optional<unsigned long> modulus = {}) {
        RingElement r(modulus);
        r.add_term(PairElement::identity(x_alphabet_id, y_alphabet_id), 1);
        return r;
    }

    const std::optional<unsigned long>& modulus() const { return modulus_; }
    const Terms& terms() const { return terms_; }
    std::size_t support_size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }

    mpz_class coeff(const PairElement& g) const {
        auto it = terms_.find(g);
        return it == terms_.end() ? mpz_class(0) : it->second;
    }

    void add_term(const PairElement& g, const mpz_class& c) {
        mpz_class v = reduce_coeff(c);
        if (v == 0) return;
        auto [it, inserted] = terms_.emplace(g, v);
        if (!inserted) {
            it->second += v;
            it->second = reduce_coeff(it->second);
            if (it->second == 0) terms_.erase(it);
        }
    }

    friend bool operator==(const RingElement& a, const RingElement& b) {
        return a.modulus_ == b.modulus_ && a.terms_ == b.terms_;
    }

private:
    mpz_class reduce_coeff(const mpz_class& c) const {
        if (!modulus_) return c;
        mpz_class m(static_cast<unsigned long>(*modulus_));
        mpz_class r = c % m;
        if (r < 0) r += m;
        return r;
    }

    std::optional<unsigned long> modulus_;
    Terms terms_;
};

inline RingElement ring_add(const RingElement& a, const RingElement& b) {
    if (a.modulus() != b.modulus()) throw domain_error("modulus mismatch in ring_add");
    RingElement r = a;
    for (const auto& [g, c] : b.terms()) r.add_term(g, c);
    return r;
}

// Distributive convolution.  Support of the product is capped by
// max_support; crossing it raises budget_error so callers can fall back
// to the pruned search.
inline RingElement ring_mul(const RingElement& a, const RingElement& b,
                            std::size_t max_support = default_budget().max_support) {
    if (a.modulus() != b.modulus()) throw domain_error("modulus mismatch in ring_mul");
    RingElement r(a.modulus());
    for (const auto& [ga, ca] : a.terms()) {
        for (const auto& [gb, cb] : b.terms()) {
            r.add_term(words::pair_mul(ga, gb), ca * cb);
            if (r.support_size() > max_support)
                throw budget_error("ring_mul support exceeded " + std::to_string(max_support) +
                                   " terms");
        }
    }
    return r;
}

// [1] u^n by iterated convolution; exact (or a residue in modular mode).
inline mpz_class coeff_at_identity_pow(const RingElement& u, unsigned n,
                                       std::uint32_t x_alphabet_id, std::uint32_t y_alphabet_id,
                                       std::size_t max_support = default_budget().max_support) {
    RingElement acc = RingElement::one(x_alphabet_id, y_alphabet_id, u.modulus());
    for (unsigned i = 0; i < n; ++i) acc = ring_mul(acc, u, max_support);
    return acc.coeff(PairElement::identity(x_alphabet_id, y_alphabet_id));
}

using WeightedGenerator = std::pair<PairElement, mpz_class>;

namespace detail {

struct StateKey {
    PairElement elem;
    std::uint32_t remaining;
    friend bool operator==(const StateKey&, const StateKey&) = default;
};

struct StateKeyHash {
    std::size_t operator()(const StateKey& k) const {
        return PairHash{}(k.elem) * 0x100000001b3ull + k.remaining;
    }
};

} // namespace detail

// Sum over all length-n generator sequences whose product equals the
// target of the product of the step weights.  Depth-first search over
// reduced partial products, memoized on (partial product, steps left).
//
// Pruning: one step can change the x-part length by at most the largest
// x-letter count among the generators (same for y), so a state whose
// length differs from the target's by more than that rate times the
// remaining steps is dead.
class PrunedCounter {
public:
    PrunedCounter(std::vector<WeightedGenerator> gens, PairElement target,
                  std::optional<unsigned long> modulus = {},
                  std::size_t max_states = default_budget().max_states)
        : gens_(std::move(gens)), target_(std::move(target)), modulus_(modulus),
          max_states_(max_states) {
        for (const auto& [g, w] : gens_) {
            if (g.x.size() > rate_x_) rate_x_ = g.x.size();
            if (g.y.size() > rate_y_) rate_y_ = g.y.size();
        }
        if (modulus_ && *modulus_ < 2) throw domain_error("modulus must be >= 2");
    }

    mpz_class count(unsigned n) {
        PairElement start = words::PairElement::identity(target_.x.alphabet_id(),
                                                         target_.y.alphabet_id());
        return walk(start, n);
    }

    std::size_t memo_size() const { return memo_.size(); }

private:
    static std::size_t dist(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

    bool dead(const PairElement& p, unsigned remaining) const {
        return dist(p.x.size(), target_.x.size()) > rate_x_ * remaining ||
               dist(p.y.size(), target_.y.size()) > rate_y_ * remaining;
    }

    mpz_class walk(const PairElement& p, unsigned remaining) {
        if (remaining == 0) return p == target_ ? 1 : 0;
        if (dead(p, remaining)) return 0;
        detail::StateKey key{p, remaining};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        mpz_class total = 0;
        for (const auto& [g, w] : gens_) {
            if (w == 0) continue;
            total += w * walk(words::pair_mul(p, g), remaining - 1);
        }
        if (modulus_) {
            total %= static_cast<unsigned long>(*modulus_);
            if (total < 0) total += static_cast<unsigned long>(*modulus_);
        }
        if (memo_.size() >= max_states_)
            throw budget_error("pruned search exceeded " + std::to_string(max_states_) +
                               " memo states");
        memo_.emplace(std::move(key), total);
        return total;
    }

    std::vector<WeightedGenerator> gens_;
    PairElement target_;
    std::optional<unsigned long> modulus_;
    std::size_t max_states_;
    std::size_t rate_x_ = 0, rate_y_ = 0;
    std::unordered_map<detail::StateKey, mpz_class, detail::StateKeyHash> memo_;
};

inline mpz_class pruned_identity_count(std::span<const WeightedGenerator> gens, unsigned n,
                                       std::optional<PairElement> target = {},
                                       std::optional<unsigned long> modulus = {},
                                       std::size_t max_states = default_budget().max_states) {
    if (gens.empty()) throw domain_error("empty generating set");
    PairElement tgt = target ? *target
                             : PairElement::identity(gens.front().first.x.alphabet_id(),
                                                     gens.front().first.y.alphabet_id());
    PrunedCounter counter(std::vector<WeightedGenerator>(gens.begin(), gens.end()),
                          std::move(tgt), modulus, max_states);
    return counter.count(n);
}

} // namespace precurse::ring
