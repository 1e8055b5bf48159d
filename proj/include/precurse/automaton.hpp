#pragma once

#include <precurse/errors.hpp>
#include <precurse/words.hpp>

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace precurse::automaton {

using words::Alphabet;
using words::PairElement;
using words::ReducedWord;

// Digraph with product-group edge labels.  Unlabeled edges carry the
// identity label.
struct LabeledAutomaton {
    Alphabet ax, ay;
    std::vector<std::string> vertices;
    struct Edge {
        int src = -1, dst = -1;
        PairElement label;
    };
    std::vector<Edge> edges;
    int source = -1, sink = -1;

    int vertex_index(std::string_view name) const {
        for (std::size_t i = 0; i < vertices.size(); ++i)
            if (vertices[i] == name) return static_cast<int>(i);
        return -1;
    }
    int add_vertex(const std::string& name) {
        if (vertex_index(name) >= 0) throw parse_error("duplicate vertex '" + name + "'");
        vertices.push_back(name);
        return static_cast<int>(vertices.size()) - 1;
    }
    void add_edge(std::string_view src, std::string_view dst, PairElement label) {
        int s = vertex_index(src), d = vertex_index(dst);
        if (s < 0 || d < 0) throw parse_error("edge references an undeclared vertex");
        edges.push_back(Edge{s, d, std::move(label)});
    }
};

// ---------------------------------------------------------------------------
// Text format, one directive per line:
//   vertex s1
//   edge s1 s1 : x y        (label tokens routed by generator name)
//   edge s5 s6 :            (identity label)
//   source s1
//   sink s8
// Blank lines and lines starting with '#' are ignored.

inline LabeledAutomaton parse_automaton(std::string_view text, const Alphabet& ax,
                                        const Alphabet& ay) {
    LabeledAutomaton a;
    a.ax = ax;
    a.ay = ay;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto fail = [&](const std::string& msg) {
            throw parse_error("automaton line " + std::to_string(lineno) + ": " + msg);
        };
        std::size_t start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        std::istringstream ls(line);
        std::string directive;
        ls >> directive;
        if (directive == "vertex") {
            std::string name;
            if (!(ls >> name)) fail("vertex needs a name");
            a.add_vertex(name);
        } else if (directive == "edge") {
            std::string src, dst, colon;
            if (!(ls >> src >> dst >> colon) || colon != ":")
                fail("expected 'edge SRC DST : [label]'");
            std::string rest;
            std::getline(ls, rest);
            a.add_edge(src, dst, words::parse_pair(ax, ay, rest));
        } else if (directive == "source" || directive == "sink") {
            std::string name;
            if (!(ls >> name)) fail(directive + " needs a vertex name");
            int v = a.vertex_index(name);
            if (v < 0) fail("undeclared vertex '" + name + "'");
            (directive == "source" ? a.source : a.sink) = v;
        } else {
            fail("unknown directive '" + directive + "'");
        }
    }
    if (a.source < 0 || a.sink < 0) throw parse_error("automaton needs a source and a sink");
    return a;
}

inline std::string format_automaton(const LabeledAutomaton& a) {
    std::string out;
    for (const auto& v : a.vertices) out += "vertex " + v + "\n";
    for (const auto& e : a.edges) {
        out += "edge " + a.vertices[e.src] + " " + a.vertices[e.dst] + " :";
        if (!e.label.is_identity()) out += " " + words::format_pair(a.ax, a.ay, e.label);
        out += "\n";
    }
    out += "source " + a.vertices[a.source] + "\n";
    out += "sink " + a.vertices[a.sink] + "\n";
    return out;
}

// Order-independent structural fingerprint: sorted vertex names plus the
// sorted formatted edge list plus source/sink, FNV-hashed.
inline std::string structural_digest(const LabeledAutomaton& a) {
    std::vector<std::string> parts;
    for (const auto& v : a.vertices) parts.push_back("v " + v);
    for (const auto& e : a.edges)
        parts.push_back("e " + a.vertices[e.src] + ">" + a.vertices[e.dst] + ":" +
                        words::format_pair(a.ax, a.ay, e.label));
    std::sort(parts.begin(), parts.end());
    parts.push_back("src " + a.vertices[a.source]);
    parts.push_back("snk " + a.vertices[a.sink]);
    std::uint64_t h = 14695981039346656037ull;
    for (const auto& p : parts)
        for (char c : p) {
            h ^= static_cast<unsigned char>(c);
            h *= 1099511628211ull;
        }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

// ---------------------------------------------------------------------------
// Built-in fixture: the 8-vertex machine whose two label products act as
// a binary counter pair.  Edges are listed in the same order as the
// shipped 19-element witness set, one element per edge.

inline const char* counter_automaton_text() {
    return "# two-stack binary counter machine\n"
           "vertex s1\n"
           "vertex s2\n"
           "vertex s3\n"
           "vertex s4\n"
           "vertex s5\n"
           "vertex s6\n"
           "vertex s7\n"
           "vertex s8\n"
           "edge s1 s1 : x y\n"
           "edge s1 s2 :\n"
           "edge s2 s2 : 1x^-1 0y\n"
           "edge s2 s3 : 0x^-1 1y\n"
           "edge s3 s3 : 1x^-1 1y\n"
           "edge s3 s3 : 0x^-1 0y\n"
           "edge s3 s4 : x^-1\n"
           "edge s2 s4 : 1y x^-1\n"
           "edge s4 s4 : 1y^-1 1x\n"
           "edge s4 s4 : 0y^-1 0x\n"
           "edge s4 s5 : y^-1\n"
           "edge s5 s2 :\n"
           "edge s5 s6 :\n"
           "edge s6 s6 : 1x^-1\n"
           "edge s6 s6 : 0x^-1\n"
           "edge s6 s8 : 1x^-1\n"
           "edge s7 s8 :\n"
           "edge s8 s7 : 1x^-1\n"
           "edge s8 s7 : 0x^-1\n"
           "source s1\n"
           "sink s8\n";
}

inline const LabeledAutomaton& counter_automaton() {
    static const LabeledAutomaton a =
        parse_automaton(counter_automaton_text(), words::x_alphabet(), words::y_alphabet());
    return a;
}

// ---------------------------------------------------------------------------
// Accepting paths: source -> sink, both running label products trivial.

struct PathCertificate {
    std::vector<int> edge_indices;
    // Running products after each traversed edge.
    std::vector<PairElement> running;
    std::size_t length() const { return edge_indices.size(); }
};

namespace detail {

struct PathKey {
    int vertex;
    std::uint32_t remaining;
    ReducedWord wx, wy;
    friend bool operator==(const PathKey&, const PathKey&) = default;
};

struct PathKeyHash {
    std::size_t operator()(const PathKey& k) const {
        std::uint64_t h = words::hash_value(k.wx);
        h = h * 0x100000001b3ull ^ words::hash_value(k.wy);
        h = h * 0x100000001b3ull ^ static_cast<std::uint64_t>(k.vertex);
        return h * 0x100000001b3ull ^ k.remaining;
    }
};

// Single-stack liveness analysis for one label component.  The other
// component is ignored, which only adds behaviors, so every state this
// analysis rejects really is dead.
//
// The automaton acts on the component word as a stack: appending a
// letter pops the top when they cancel and pushes otherwise.  Labels
// with several letters are split into micro-transitions.  A saturation
// fixpoint computes can_pop[p][c] = the set of nodes reachable at the
// moment a letter c lying on top of the stack at node p gets popped:
//   - a transition p --l--> q pops c = l^{-1} directly at q;
//   - otherwise l is pushed above c, so c pops only after l does:
//     can_pop[p][c] >= union of can_pop[r][c] over r in can_pop[q][l].
// A stack c_1..c_k at node v is viable iff popping c_k, then c_{k-1},
// and so on can chain down with nonempty node sets, ending somewhere
// that still reaches the sink.
class StackLiveness {
public:
    using Mask = std::uint64_t; // micro-node bitset; analysis disabled beyond 64 nodes

    StackLiveness(const LabeledAutomaton& a, bool x_component) {
        struct Micro {
            int src, dst;
            words::Letter letter; // 0 = neutral
        };
        std::vector<Micro> trans;
        int nodes = static_cast<int>(a.vertices.size());
        for (const auto& e : a.edges) {
            const ReducedWord& w = x_component ? e.label.x : e.label.y;
            if (w.empty()) {
                trans.push_back({e.src, e.dst, 0});
                continue;
            }
            int prev = e.src;
            for (std::size_t i = 0; i < w.size(); ++i) {
                int next = (i + 1 == w.size()) ? e.dst : nodes++;
                trans.push_back({prev, next, w.letter(i)});
                prev = next;
            }
        }
        if (nodes > 64) return; // fall back to the cruder length bound
        enabled_ = true;
        nodes_ = nodes;
        rank_ = x_component ? a.ax.rank : a.ay.rank;
        can_pop_.assign(static_cast<std::size_t>(nodes_) * 2 * rank_, 0);

        // node-reachability (stack ignored) for the final hand-off check
        std::vector<Mask> reach_sink(nodes_, 0);
        {
            bool grew = true;
            for (int v = 0; v < nodes_; ++v)
                if (v == a.sink) reach_sink[v] = 1;
            while (grew) {
                grew = false;
                for (const auto& t : trans)
                    if (reach_sink[t.dst] && !reach_sink[t.src]) {
                        reach_sink[t.src] = 1;
                        grew = true;
                    }
            }
            sink_reach_ = 0;
            for (int v = 0; v < nodes_; ++v)
                if (reach_sink[v]) sink_reach_ |= Mask{1} << v;
        }

        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& t : trans) {
                if (t.letter == 0) {
                    // neutral: popping anything at src can proceed via dst
                    for (std::uint32_t c = 0; c < 2 * rank_; ++c)
                        grew |= merge(pop_mask(t.src, c), pop_mask(t.dst, c));
                    continue;
                }
                grew |= merge(pop_mask(t.src, letter_slot(-t.letter)), Mask{1} << t.dst);
                Mask after_push = pop_mask(t.dst, letter_slot(t.letter));
                for (std::uint32_t c = 0; c < 2 * rank_; ++c) {
                    if (c == letter_slot(-t.letter)) continue;
                    Mask acc = 0;
                    Mask m = after_push;
                    while (m) {
                        int r = std::countr_zero(m);
                        m &= m - 1;
                        acc |= pop_mask(r, c);
                    }
                    grew |= merge(pop_mask(t.src, c), acc);
                }
            }
        }
    }

    bool enabled() const { return enabled_; }

    // True if the stack can possibly empty out and still reach the sink.
    bool viable(int vertex, const ReducedWord& stack) const {
        Mask s = Mask{1} << vertex;
        auto ls = stack.letters();
        for (std::size_t i = ls.size(); i-- > 0;) {
            Mask next = 0;
            Mask m = s;
            std::uint32_t slot = letter_slot(ls[i]);
            while (m) {
                int p = std::countr_zero(m);
                m &= m - 1;
                next |= pop_mask_const(p, slot);
            }
            if (!next) return false;
            s = next;
        }
        return (s & sink_reach_) != 0;
    }

private:
    std::uint32_t letter_slot(words::Letter l) const {
        auto idx = static_cast<std::uint32_t>((l > 0 ? l : -l) - 1);
        return idx * 2 + (l < 0 ? 1u : 0u);
    }
    Mask& pop_mask(int node, std::uint32_t slot) {
        return can_pop_[static_cast<std::size_t>(node) * 2 * rank_ + slot];
    }
    Mask pop_mask_const(int node, std::uint32_t slot) const {
        return can_pop_[static_cast<std::size_t>(node) * 2 * rank_ + slot];
    }
    static bool merge(Mask& into, Mask add) {
        Mask before = into;
        into |= add;
        return into != before;
    }

    bool enabled_ = false;
    int nodes_ = 0;
    std::uint32_t rank_ = 0;
    Mask sink_reach_ = 0;
    std::vector<Mask> can_pop_;
};

} // namespace detail

// Counts (or enumerates) accepting paths of an exact length.  The memo
// table is shared between queries, so sweeping n = 0..N reuses work.
//
// Pruning: a label can cancel at most rate_x letters of the x-product
// per step (max label component length over edges), so a product longer
// than rate * remaining can never flatten out; vertices further from the
// sink than the remaining step count are equally dead.
class FlatPathCounter {
public:
    explicit FlatPathCounter(const LabeledAutomaton& a,
                             std::size_t max_states = default_budget().max_states)
        : a_(&a), max_states_(max_states), live_x_(a, true), live_y_(a, false) {
        out_.resize(a.vertices.size());
        for (std::size_t i = 0; i < a.edges.size(); ++i) {
            out_[a.edges[i].src].push_back(static_cast<int>(i));
            rate_x_ = std::max(rate_x_, a.edges[i].label.x.size());
            rate_y_ = std::max(rate_y_, a.edges[i].label.y.size());
        }
        compute_sink_distances();
    }

    mpz_class count(unsigned n) {
        PairElement id = PairElement::identity(a_->ax.id, a_->ay.id);
        return walk(a_->source, id, n);
    }

    // Invokes the callback for every accepting path of length n, in edge
    // index order; stops early if the callback returns false.
    void enumerate(unsigned n, const std::function<bool(const PathCertificate&)>& cb) const {
        PathCertificate cert;
        PairElement id = PairElement::identity(a_->ax.id, a_->ay.id);
        enumerate_rec(a_->source, id, n, cert, cb);
    }

    std::vector<PathCertificate> collect(unsigned n, std::size_t max_paths = 1000) const {
        std::vector<PathCertificate> out;
        enumerate(n, [&](const PathCertificate& c) {
            out.push_back(c);
            return out.size() < max_paths;
        });
        return out;
    }

    std::size_t memo_size() const { return memo_.size(); }

private:
    void compute_sink_distances() {
        dist_to_sink_.assign(a_->vertices.size(), std::numeric_limits<unsigned>::max());
        dist_to_sink_[a_->sink] = 0;
        std::queue<int> q;
        q.push(a_->sink);
        // BFS on reversed edges; labels ignored, so this is a sound lower
        // bound on the steps still needed.
        std::vector<std::vector<int>> in(a_->vertices.size());
        for (const auto& e : a_->edges) in[e.dst].push_back(e.src);
        while (!q.empty()) {
            int v = q.front();
            q.pop();
            for (int u : in[v])
                if (dist_to_sink_[u] == std::numeric_limits<unsigned>::max()) {
                    dist_to_sink_[u] = dist_to_sink_[v] + 1;
                    q.push(u);
                }
        }
    }

    bool dead(int v, const PairElement& p, unsigned remaining) const {
        if (dist_to_sink_[v] > remaining) return true;
        if (p.x.size() > rate_x_ * remaining || p.y.size() > rate_y_ * remaining) return true;
        if (live_x_.enabled() && !live_x_.viable(v, p.x)) return true;
        if (live_y_.enabled() && !live_y_.viable(v, p.y)) return true;
        return false;
    }

    mpz_class walk(int v, const PairElement& p, unsigned remaining) {
        if (remaining == 0) return (v == a_->sink && p.is_identity()) ? 1 : 0;
        if (dead(v, p, remaining)) return 0;
        detail::PathKey key{v, remaining, p.x, p.y};
        if (auto it = memo_.find(key); it != memo_.end()) return it->second;

        mpz_class total = 0;
        for (int ei : out_[v]) {
            const auto& e = a_->edges[ei];
            total += walk(e.dst, words::pair_mul(p, e.label), remaining - 1);
        }
        if (memo_.size() >= max_states_)
            throw budget_error("path counter exceeded " + std::to_string(max_states_) +
                               " memo states");
        memo_.emplace(std::move(key), total);
        return total;
    }

    bool enumerate_rec(int v, const PairElement& p, unsigned remaining, PathCertificate& cert,
                       const std::function<bool(const PathCertificate&)>& cb) const {
        if (remaining == 0) {
            if (v == a_->sink && p.is_identity()) return cb(cert);
            return true;
        }
        if (dead(v, p, remaining)) return true;
        for (int ei : out_[v]) {
            const auto& e = a_->edges[ei];
            PairElement next = words::pair_mul(p, e.label);
            cert.edge_indices.push_back(ei);
            cert.running.push_back(next);
            bool keep_going = enumerate_rec(e.dst, next, remaining - 1, cert, cb);
            cert.edge_indices.pop_back();
            cert.running.pop_back();
            if (!keep_going) return false;
        }
        return true;
    }

    const LabeledAutomaton* a_;
    std::size_t max_states_;
    detail::StackLiveness live_x_, live_y_;
    std::vector<std::vector<int>> out_;
    std::vector<unsigned> dist_to_sink_;
    std::size_t rate_x_ = 0, rate_y_ = 0;
    std::unordered_map<detail::PathKey, mpz_class, detail::PathKeyHash> memo_;
};

inline mpz_class count_flat_paths(const LabeledAutomaton& a, unsigned n,
                                  std::size_t max_states = default_budget().max_states) {
    FlatPathCounter counter(a, max_states);
    return counter.count(n);
}

// ---------------------------------------------------------------------------
// Closed form for the accepting lengths of the counter machine.
//
// An accepting path is determined by the loop count k >= 1 and the digit
// position j marking the hand-off to the sink; its length is
//   L(k, j) = j + 6k + 2 * sum_{i=1..k} floor(log2 i).
// Digit positions count from the most significant digit (j = 1 is the
// leading 1), the convention forced by the depth-first ground truth at
// k = 2: the unique k = 2 path has length L(2,1) = 15.

inline std::int64_t floor_log2(std::int64_t k) {
    if (k < 1) throw domain_error("floor_log2 needs k >= 1");
    std::int64_t t = 0;
    while ((k >> (t + 1)) > 0) ++t;
    return t;
}

// sum_{i=1..k} floor(log2 i), evaluated in closed form.
inline std::int64_t floor_log2_sum(std::int64_t k) {
    if (k < 1) throw domain_error("floor_log2_sum needs k >= 1");
    std::int64_t t = floor_log2(k);
    // sum over full dyadic blocks [2^j, 2^{j+1}) for j < t, plus the tail.
    std::int64_t full = (t - 2) * (std::int64_t{1} << t) + 2;
    return full + t * (k - (std::int64_t{1} << t) + 1);
}

inline std::int64_t digit_count(std::int64_t k) { return floor_log2(k) + 1; }

inline std::int64_t length_formula(std::int64_t k, std::int64_t j) {
    if (k < 1) throw domain_error("length_formula needs k >= 1");
    if (j < 1 || j > digit_count(k))
        throw domain_error("digit position out of range for k = " + std::to_string(k));
    return j + 6 * k + 2 * floor_log2_sum(k);
}

// j-th digit of k, most significant first (1-indexed).
inline bool digit_is_one(std::int64_t k, std::int64_t j) {
    std::int64_t t = digit_count(k);
    return ((k >> (t - j)) & 1) != 0;
}

// Decides whether n is an accepting length by inverting L: the windows
// [L(k,1), L(k,digits)] are disjoint and increasing, so binary-search
// the unique candidate k.
inline bool b_closed_form(std::int64_t n) {
    if (n < length_formula(1, 1)) return false;
    std::int64_t lo = 1, hi = 1;
    while (length_formula(hi, 1) <= n) {
        if (hi > (std::int64_t{1} << 40)) throw domain_error("length out of supported range");
        hi *= 2;
    }
    while (lo < hi) { // invariant: L(lo,1) <= n < L(hi,1)
        std::int64_t mid = lo + (hi - lo + 1) / 2;
        if (length_formula(mid, 1) <= n)
            lo = mid;
        else
            hi = mid - 1;
    }
    std::int64_t k = lo;
    std::int64_t j = n - 6 * k - 2 * floor_log2_sum(k);
    if (j < 1 || j > digit_count(k)) return false;
    return digit_is_one(k, j);
}

// The window of the accepting-length sequence spanned by loop count k;
// by construction it spells k in binary, most significant digit first.
inline std::string digit_window(std::int64_t k) {
    if (k < 1) throw domain_error("digit_window needs k >= 1");
    std::string out;
    for (std::int64_t j = 1; j <= digit_count(k); ++j)
        out += b_closed_form(length_formula(k, j)) ? '1' : '0';
    return out;
}

// b_1..b_N as bits, via the closed form.
inline std::vector<std::uint8_t> accepting_length_prefix(std::size_t n_max) {
    std::vector<std::uint8_t> bits(n_max + 1, 0); // 1-indexed; bits[0] unused
    for (std::int64_t k = 1; static_cast<std::size_t>(length_formula(k, 1)) <= n_max; ++k) {
        for (std::int64_t j = 1; j <= digit_count(k); ++j) {
            auto pos = static_cast<std::size_t>(length_formula(k, j));
            if (pos <= n_max && digit_is_one(k, j)) bits[pos] = 1;
        }
    }
    bits.erase(bits.begin());
    return bits;
}

} // namespace precurse::automaton
