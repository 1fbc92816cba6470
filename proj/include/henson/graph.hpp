#pragma once

// Finite simple graphs over opaque integer vertex identifiers, with dense
// bit-row adjacency. All searches walk vertices in ascending identifier order,
// so every witness returned here is the lexicographically least one.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace henson {

using Vertex = std::int64_t;
/// Sorted, duplicate-free list of vertices.
using VertexSet = std::vector<Vertex>;
/// Ordered list of pairwise-distinct vertices.
using Tuple = std::vector<Vertex>;

class HensonError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (bad input, overlapping sets, ...).
class PreconditionError : public HensonError {
public:
    using HensonError::HensonError;
};

inline auto make_set(std::vector<Vertex> vs) -> VertexSet
{
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

inline auto set_union(const VertexSet& a, const VertexSet& b) -> VertexSet
{
    VertexSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline auto set_intersection(const VertexSet& a, const VertexSet& b) -> VertexSet
{
    VertexSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline auto set_difference(const VertexSet& a, const VertexSet& b) -> VertexSet
{
    VertexSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

inline auto contains(const VertexSet& s, Vertex v) -> bool
{
    return std::binary_search(s.begin(), s.end(), v);
}

/// Upper bound on graph size. Overridden by the HENSON_MAX_VERTICES environment variable.
inline auto max_vertices() -> std::size_t
{
    // Read on every call so the bound can be changed at run time.
    if (const char* env = std::getenv("HENSON_MAX_VERTICES")) {
        char* end = nullptr;
        auto v = std::strtoull(env, &end, 10);
        if (end != env && v > 0)
            return static_cast<std::size_t>(v);
    }
    return 4096;
}

namespace detail {

class Bitset {
public:
    Bitset() = default;
    explicit Bitset(std::size_t words) : words_(words, 0) {}

    void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
    [[nodiscard]] auto test(std::size_t i) const -> bool { return (words_[i >> 6] >> (i & 63)) & 1U; }

    [[nodiscard]] auto count() const -> std::size_t
    {
        std::size_t c = 0;
        for (auto w : words_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    [[nodiscard]] auto any() const -> bool
    {
        return std::any_of(words_.begin(), words_.end(), [](auto w) { return w != 0; });
    }

    /// Index of the lowest set bit, or npos.
    [[nodiscard]] auto first() const -> std::size_t
    {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k])
                return k * 64 + static_cast<std::size_t>(std::countr_zero(words_[k]));
        return npos;
    }

    void and_with(const std::uint64_t* row)
    {
        for (std::size_t k = 0; k < words_.size(); ++k)
            words_[k] &= row[k];
    }

    void and_not(const std::uint64_t* row)
    {
        for (std::size_t k = 0; k < words_.size(); ++k)
            words_[k] &= ~row[k];
    }

    [[nodiscard]] auto intersects(const std::uint64_t* row) const -> bool
    {
        for (std::size_t k = 0; k < words_.size(); ++k)
            if (words_[k] & row[k])
                return true;
        return false;
    }

    [[nodiscard]] auto data() const -> const std::uint64_t* { return words_.data(); }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<std::uint64_t> words_;
};

} // namespace detail

/// Finite simple graph: irreflexive, symmetric adjacency stored once per unordered pair.
class Graph {
public:
    Graph() = default;

    explicit Graph(const VertexSet& vertices)
    {
        reserve(vertices.size());
        for (auto v : vertices)
            add_vertex(v);
    }

    /// Adds v if absent. Identifiers above the current maximum are appended cheaply.
    void add_vertex(Vertex v)
    {
        if (!ids_.empty() && v <= ids_.back()) {
            auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
            if (it != ids_.end() && *it == v)
                return;
            auto edges = edge_list();
            auto ids = ids_;
            ids.insert(std::lower_bound(ids.begin(), ids.end(), v), v);
            rebuild(ids, edges);
            return;
        }
        if (ids_.size() + 1 > max_vertices())
            throw PreconditionError("graph exceeds the vertex bound of " + std::to_string(max_vertices()));
        if (ids_.size() + 1 > words_ * 64)
            relayout(std::max<std::size_t>(1, words_ * 2));
        ids_.push_back(v);
        bits_.resize(ids_.size() * words_, 0);
    }

    void reserve(std::size_t n)
    {
        auto words = std::max<std::size_t>(1, (n + 63) / 64);
        if (words > words_)
            relayout(words);
        ids_.reserve(n);
        bits_.reserve(n * words_);
    }

    void add_edge(Vertex u, Vertex v)
    {
        if (u == v)
            throw PreconditionError("self-loop on vertex " + std::to_string(u));
        auto i = require(u);
        auto j = require(v);
        set_bit(i, j);
        set_bit(j, i);
    }

    void remove_edge(Vertex u, Vertex v)
    {
        auto i = require(u);
        auto j = require(v);
        clear_bit(i, j);
        clear_bit(j, i);
    }

    [[nodiscard]] auto has_vertex(Vertex v) const -> bool { return index_of(v).has_value(); }

    [[nodiscard]] auto adjacent(Vertex u, Vertex v) const -> bool
    {
        auto i = index_of(u);
        auto j = index_of(v);
        return i && j && test_bit(*i, *j);
    }

    [[nodiscard]] auto vertices() const -> const VertexSet& { return ids_; }
    [[nodiscard]] auto size() const -> std::size_t { return ids_.size(); }
    [[nodiscard]] auto empty() const -> bool { return ids_.empty(); }

    [[nodiscard]] auto max_vertex() const -> std::optional<Vertex>
    {
        if (ids_.empty())
            return std::nullopt;
        return ids_.back();
    }

    [[nodiscard]] auto index_of(Vertex v) const -> std::optional<std::size_t>
    {
        auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
        if (it == ids_.end() || *it != v)
            return std::nullopt;
        return static_cast<std::size_t>(it - ids_.begin());
    }

    [[nodiscard]] auto vertex_at(std::size_t i) const -> Vertex { return ids_[i]; }

    /// Edges as (u, v) with u < v, in ascending order.
    [[nodiscard]] auto edge_list() const -> std::vector<std::pair<Vertex, Vertex>>
    {
        std::vector<std::pair<Vertex, Vertex>> out;
        for (std::size_t i = 0; i < ids_.size(); ++i)
            for (std::size_t j = i + 1; j < ids_.size(); ++j)
                if (test_bit(i, j))
                    out.emplace_back(ids_[i], ids_[j]);
        return out;
    }

    [[nodiscard]] auto edge_count() const -> std::size_t
    {
        std::size_t c = 0;
        for (auto w : bits_)
            c += static_cast<std::size_t>(std::popcount(w));
        return c / 2;
    }

    [[nodiscard]] auto neighbours(Vertex v) const -> VertexSet
    {
        VertexSet out;
        auto i = require(v);
        for (std::size_t j = 0; j < ids_.size(); ++j)
            if (test_bit(i, j))
                out.push_back(ids_[j]);
        return out;
    }

    [[nodiscard]] auto induced(const VertexSet& keep) const -> Graph
    {
        Graph h;
        h.reserve(keep.size());
        std::vector<std::size_t> idx;
        for (auto v : keep) {
            idx.push_back(require(v));
            h.add_vertex(v);
        }
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = a + 1; b < idx.size(); ++b)
                if (test_bit(idx[a], idx[b])) {
                    h.set_bit(a, b);
                    h.set_bit(b, a);
                }
        return h;
    }

    [[nodiscard]] auto words() const -> std::size_t { return words_; }
    [[nodiscard]] auto row(std::size_t i) const -> const std::uint64_t* { return bits_.data() + i * words_; }

    [[nodiscard]] auto bits_of(const VertexSet& s) const -> detail::Bitset
    {
        detail::Bitset out(words_);
        for (auto v : s)
            if (auto i = index_of(v))
                out.set(*i);
        return out;
    }

    friend auto operator==(const Graph& a, const Graph& b) -> bool
    {
        return a.ids_ == b.ids_ && a.edge_list() == b.edge_list();
    }

private:
    [[nodiscard]] auto require(Vertex v) const -> std::size_t
    {
        auto i = index_of(v);
        if (!i)
            throw PreconditionError("unknown vertex " + std::to_string(v));
        return *i;
    }

    void set_bit(std::size_t i, std::size_t j) { bits_[i * words_ + (j >> 6)] |= std::uint64_t{1} << (j & 63); }
    void clear_bit(std::size_t i, std::size_t j) { bits_[i * words_ + (j >> 6)] &= ~(std::uint64_t{1} << (j & 63)); }
    [[nodiscard]] auto test_bit(std::size_t i, std::size_t j) const -> bool
    {
        return (bits_[i * words_ + (j >> 6)] >> (j & 63)) & 1U;
    }

    void relayout(std::size_t words)
    {
        std::vector<std::uint64_t> bits(ids_.size() * words, 0);
        for (std::size_t i = 0; i < ids_.size(); ++i)
            std::copy_n(bits_.begin() + static_cast<std::ptrdiff_t>(i * words_), words_,
                bits.begin() + static_cast<std::ptrdiff_t>(i * words));
        bits_ = std::move(bits);
        words_ = words;
    }

    void rebuild(const VertexSet& ids, const std::vector<std::pair<Vertex, Vertex>>& edges)
    {
        if (ids.size() > max_vertices())
            throw PreconditionError("graph exceeds the vertex bound of " + std::to_string(max_vertices()));
        ids_ = ids;
        words_ = std::max<std::size_t>(1, (ids.size() + 63) / 64);
        bits_.assign(ids.size() * words_, 0);
        for (auto [u, v] : edges) {
            auto i = *index_of(u);
            auto j = *index_of(v);
            set_bit(i, j);
            set_bit(j, i);
        }
    }

    VertexSet ids_;
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

/// A graph with the parameter set C and any named subsets and tuples.
struct PointedGraph {
    Graph graph;
    VertexSet base;
    std::map<std::string, VertexSet> sets;
    std::map<std::string, Tuple> tuples;

    void validate() const
    {
        auto check = [&](Vertex v, const std::string& where) {
            if (!graph.has_vertex(v))
                throw PreconditionError(where + " mentions unknown vertex " + std::to_string(v));
        };
        for (auto v : base)
            check(v, "base");
        for (const auto& [name, s] : sets)
            for (auto v : s)
                check(v, "set " + name);
        for (const auto& [name, t] : tuples) {
            for (auto v : t)
                check(v, "tuple " + name);
            if (make_set(t).size() != t.size())
                throw PreconditionError("tuple " + name + " repeats a vertex");
        }
    }
};

struct CliqueWitness {
    VertexSet members;
    friend auto operator==(const CliqueWitness&, const CliqueWitness&) -> bool = default;
};

namespace detail {

// Greedy sequential colouring of cand; the colour count bounds the clique number.
inline auto colour_bound(const Graph& g, const Bitset& cand, std::size_t limit) -> std::size_t
{
    Bitset uncoloured = cand;
    std::size_t colours = 0;
    while (uncoloured.any()) {
        if (++colours >= limit)
            return colours;
        Bitset q = uncoloured;
        for (auto v = q.first(); v != Bitset::npos; v = q.first()) {
            q.reset(v);
            uncoloured.reset(v);
            q.and_not(g.row(v));
        }
    }
    return colours;
}

inline auto extend_clique(const Graph& g, std::vector<std::size_t>& chosen, Bitset cand, std::size_t m) -> bool
{
    if (chosen.size() == m)
        return true;
    auto need = m - chosen.size();
    if (cand.count() < need)
        return false;
    if (need > 2 && colour_bound(g, cand, need) < need)
        return false;
    for (auto v = cand.first(); v != Bitset::npos; v = cand.first()) {
        cand.reset(v);
        Bitset next = cand;
        next.and_with(g.row(v));
        chosen.push_back(v);
        if (extend_clique(g, chosen, std::move(next), m))
            return true;
        chosen.pop_back();
        if (cand.count() < need)
            return false;
    }
    return false;
}

} // namespace detail

/// Lexicographically least m-clique among the given candidate vertices.
inline auto find_clique_within(const Graph& g, const VertexSet& candidates, std::size_t m)
    -> std::optional<CliqueWitness>
{
    if (m == 0)
        return CliqueWitness{};
    std::vector<std::size_t> chosen;
    if (!detail::extend_clique(g, chosen, g.bits_of(candidates), m))
        return std::nullopt;
    CliqueWitness w;
    for (auto i : chosen)
        w.members.push_back(g.vertex_at(i));
    return w;
}

inline auto find_clique(const Graph& g, std::size_t m) -> std::optional<CliqueWitness>
{
    if (m == 0)
        throw PreconditionError("clique size must be positive");
    return find_clique_within(g, g.vertices(), m);
}

inline auto is_kn_free(const Graph& g, int n) -> bool
{
    if (n < 1)
        throw PreconditionError("n must be positive");
    return !find_clique(g, static_cast<std::size_t>(n)).has_value();
}

/// Equality pattern, edge pattern, and relation to each base vertex all agree.
inline auto qf_type_equal_over(const Graph& g, std::span<const Vertex> t1, std::span<const Vertex> t2,
    const VertexSet& base) -> bool
{
    if (t1.size() != t2.size())
        throw PreconditionError("tuples of different lengths");
    for (auto v : t1)
        if (!g.has_vertex(v))
            throw PreconditionError("unknown vertex " + std::to_string(v));
    for (auto v : t2)
        if (!g.has_vertex(v))
            throw PreconditionError("unknown vertex " + std::to_string(v));
    for (std::size_t i = 0; i < t1.size(); ++i) {
        for (std::size_t j = 0; j < t1.size(); ++j) {
            if ((t1[i] == t1[j]) != (t2[i] == t2[j]))
                return false;
            if (g.adjacent(t1[i], t1[j]) != g.adjacent(t2[i], t2[j]))
                return false;
        }
        for (auto c : base) {
            if ((t1[i] == c) != (t2[i] == c))
                return false;
            if (g.adjacent(t1[i], c) != g.adjacent(t2[i], c))
                return false;
        }
    }
    return true;
}

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline auto unit_draw(std::mt19937_64& rng) -> double
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Vertices 0..size-1; each pair (ascending) is proposed with probability
/// `density` and kept only if it does not complete a K_n.
inline auto random_kn_free(int n, std::size_t size, double density, std::uint64_t seed) -> Graph
{
    if (n < 2)
        throw PreconditionError("n must be at least 2");
    std::mt19937_64 rng(seed);
    Graph g;
    g.reserve(size);
    for (std::size_t v = 0; v < size; ++v)
        g.add_vertex(static_cast<Vertex>(v));
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = i + 1; j < size; ++j) {
            if (unit_draw(rng) >= density)
                continue;
            auto u = static_cast<Vertex>(i);
            auto w = static_cast<Vertex>(j);
            auto common = set_intersection(g.neighbours(u), g.neighbours(w));
            if (find_clique_within(g, common, static_cast<std::size_t>(n - 2)))
                continue;
            g.add_edge(u, w);
        }
    return g;
}

} // namespace henson
