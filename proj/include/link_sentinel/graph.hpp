#pragma once

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "link_sentinel/exact.hpp"

namespace link_sentinel {

// Vertices are 1-based, so vertex v lives at row/column v - 1 of every matrix.
using Vertex = std::size_t;

struct Edge {
    Vertex tail = 0;
    Vertex head = 0;

    bool is_self_loop() const noexcept { return tail == head; }

    friend auto operator<=>(const Edge&, const Edge&) = default;
};

std::ostream& operator<<(std::ostream& os, const Edge& e);

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Directed graph on vertices 1..n without parallel arcs. Edges are kept in
// lexicographic (tail, head) order, which is the canonical edge ordering used
// for relation-matrix columns.
class Digraph {
public:
    Digraph() = default;
    explicit Digraph(std::size_t n);
    Digraph(std::size_t n, std::vector<Edge> edges);

    std::size_t vertex_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    bool contains(const Edge& e) const;
    bool has_self_loops() const;

    // Position of e in the canonical edge list; throws GraphError if absent.
    std::size_t edge_index(const Edge& e) const;

    // Returns a new digraph with e added; throws if e is already present.
    Digraph with_edge(const Edge& e) const;

    void check_vertex(Vertex v) const;

    friend bool operator==(const Digraph&, const Digraph&) = default;

private:
    std::size_t n_ = 0;
    std::vector<Edge> edges_;
};

// Shortest-walk length, or infinity when no walk exists.
class Distance {
public:
    constexpr Distance() = default;
    constexpr explicit Distance(std::size_t hops) : hops_(hops) {}

    static constexpr Distance infinity() { return Distance(); }

    constexpr bool is_finite() const noexcept { return hops_ != kInfinite; }

    std::size_t value() const {
        if (!is_finite()) {
            throw std::logic_error("distance is infinite");
        }
        return hops_;
    }

    friend constexpr bool operator==(const Distance&, const Distance&) = default;
    friend constexpr auto operator<=>(const Distance&, const Distance&) = default;

private:
    static constexpr std::size_t kInfinite = std::numeric_limits<std::size_t>::max();
    std::size_t hops_ = kInfinite;
};

std::ostream& operator<<(std::ostream& os, const Distance& d);

// A walk as an ordered edge sequence. The trivial walk of length zero has no
// edges and start == end.
struct Walk {
    Vertex start = 0;
    Vertex end = 0;
    std::vector<Edge> edges;

    std::size_t length() const noexcept { return edges.size(); }
    bool contains(const Edge& e) const;

    friend auto operator<=>(const Walk&, const Walk&) = default;
};

IntMatrix adjacency(const Digraph& g);
std::size_t in_degree(const Digraph& g, Vertex v);
IntMatrix laplacian(const Digraph& g);

// -L(g), the in-weighting that drives the consensus dynamics.
IntMatrix negative_laplacian(const Digraph& g);

Distance distance(const Digraph& g, Vertex from, Vertex to);

// All distances into `to`, indexed by source vertex - 1 (one reverse BFS).
std::vector<Distance> distances_to(const Digraph& g, Vertex to);

// Number of length-k walks from tau to nu, i.e. [A^k] at (nu, tau).
Integer walk_count(const Digraph& g, Vertex tau, Vertex nu, std::size_t k);

inline constexpr std::size_t kMaxEnumeratedWalkLength = 12;

// Every walk of length k from tau to nu. Throws GraphError if k exceeds
// kMaxEnumeratedWalkLength.
std::vector<Walk> enumerate_walks(const Digraph& g, Vertex tau, Vertex nu, std::size_t k);

// Walks from the set that traverse e.
std::vector<Walk> walks_through(const std::vector<Walk>& walks, const Edge& e);

// Sum over walks of the product of [W](head, tail) along each walk.
Integer walk_weight_sum(const std::vector<Walk>& walks, const IntMatrix& w);

Digraph remove_edge(const Digraph& g, const Edge& e);

// g with a self-loop added on every vertex that lacks one.
Digraph with_self_loops(const Digraph& g);

// Edge-list text format: `n <count>` followed by `<tail> <head>` lines.
Digraph parse_edge_list(std::istream& in);
Digraph parse_edge_list(const std::string& text);
Digraph load_edge_list(const std::string& path);
void write_edge_list(std::ostream& out, const Digraph& g);

}  // namespace link_sentinel
