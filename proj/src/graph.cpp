#include "link_sentinel/graph.hpp"

#include <algorithm>
#include <deque>
#include <ostream>
#include <sstream>

namespace link_sentinel {

std::ostream& operator<<(std::ostream& os, const Edge& e) {
    return os << '(' << e.tail << ',' << e.head << ')';
}

std::ostream& operator<<(std::ostream& os, const Distance& d) {
    if (d.is_finite()) {
        return os << d.value();
    }
    return os << "inf";
}

Digraph::Digraph(std::size_t n) : n_(n) {}

Digraph::Digraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    for (const Edge& e : edges_) {
        if (e.tail < 1 || e.tail > n_ || e.head < 1 || e.head > n_) {
            std::ostringstream msg;
            msg << "edge " << e << " has an endpoint outside 1.." << n_;
            throw GraphError(msg.str());
        }
    }
    std::sort(edges_.begin(), edges_.end());
    auto dup = std::adjacent_find(edges_.begin(), edges_.end());
    if (dup != edges_.end()) {
        std::ostringstream msg;
        msg << "duplicate edge " << *dup;
        throw GraphError(msg.str());
    }
}

bool Digraph::contains(const Edge& e) const {
    return std::binary_search(edges_.begin(), edges_.end(), e);
}

bool Digraph::has_self_loops() const {
    return std::any_of(edges_.begin(), edges_.end(), [](const Edge& e) { return e.is_self_loop(); });
}

std::size_t Digraph::edge_index(const Edge& e) const {
    auto it = std::lower_bound(edges_.begin(), edges_.end(), e);
    if (it == edges_.end() || *it != e) {
        std::ostringstream msg;
        msg << "edge " << e << " is not in the digraph";
        throw GraphError(msg.str());
    }
    return static_cast<std::size_t>(it - edges_.begin());
}

Digraph Digraph::with_edge(const Edge& e) const {
    std::vector<Edge> edges = edges_;
    edges.push_back(e);
    return Digraph(n_, std::move(edges));
}

void Digraph::check_vertex(Vertex v) const {
    if (v < 1 || v > n_) {
        throw GraphError("vertex " + std::to_string(v) + " is outside 1.." + std::to_string(n_));
    }
}

bool Walk::contains(const Edge& e) const {
    return std::find(edges.begin(), edges.end(), e) != edges.end();
}

IntMatrix adjacency(const Digraph& g) {
    IntMatrix a(g.vertex_count());
    for (const Edge& e : g.edges()) {
        a(e.head - 1, e.tail - 1) = 1;
    }
    return a;
}

std::size_t in_degree(const Digraph& g, Vertex v) {
    g.check_vertex(v);
    return static_cast<std::size_t>(std::count_if(g.edges().begin(), g.edges().end(), [v](const Edge& e) {
        return e.head == v && e.tail != v;
    }));
}

IntMatrix laplacian(const Digraph& g) {
    IntMatrix l(g.vertex_count());
    for (const Edge& e : g.edges()) {
        // A self-loop is not in the in-cut of its vertex and contributes
        // +1 on the diagonal through A only.
        l(e.head - 1, e.tail - 1) -= 1;
        if (!e.is_self_loop()) {
            l(e.head - 1, e.head - 1) += 1;
        }
    }
    return l;
}

IntMatrix negative_laplacian(const Digraph& g) {
    IntMatrix l = laplacian(g);
    for (std::size_t i = 0; i < l.size(); ++i) {
        for (std::size_t j = 0; j < l.size(); ++j) {
            l(i, j) = -l(i, j);
        }
    }
    return l;
}

std::vector<Distance> distances_to(const Digraph& g, Vertex to) {
    g.check_vertex(to);
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<Vertex>> predecessors(n + 1);
    for (const Edge& e : g.edges()) {
        predecessors[e.head].push_back(e.tail);
    }
    std::vector<Distance> dist(n, Distance::infinity());
    dist[to - 1] = Distance(0);
    std::deque<Vertex> frontier{to};
    while (!frontier.empty()) {
        Vertex v = frontier.front();
        frontier.pop_front();
        const std::size_t next = dist[v - 1].value() + 1;
        for (Vertex u : predecessors[v]) {
            if (!dist[u - 1].is_finite()) {
                dist[u - 1] = Distance(next);
                frontier.push_back(u);
            }
        }
    }
    return dist;
}

Distance distance(const Digraph& g, Vertex from, Vertex to) {
    g.check_vertex(from);
    return distances_to(g, to)[from - 1];
}

Integer walk_count(const Digraph& g, Vertex tau, Vertex nu, std::size_t k) {
    g.check_vertex(tau);
    g.check_vertex(nu);
    return matrix_power(adjacency(g), k)(nu - 1, tau - 1);
}

namespace {

void extend_walks(const std::vector<std::vector<Vertex>>& successors, Vertex at, Vertex target,
                  std::size_t remaining, Walk& current, std::vector<Walk>& out) {
    if (remaining == 0) {
        if (at == target) {
            out.push_back(current);
        }
        return;
    }
    for (Vertex next : successors[at]) {
        current.edges.push_back(Edge{at, next});
        extend_walks(successors, next, target, remaining - 1, current, out);
        current.edges.pop_back();
    }
}

}  // namespace

std::vector<Walk> enumerate_walks(const Digraph& g, Vertex tau, Vertex nu, std::size_t k) {
    g.check_vertex(tau);
    g.check_vertex(nu);
    if (k > kMaxEnumeratedWalkLength) {
        throw GraphError("walk enumeration is capped at length " + std::to_string(kMaxEnumeratedWalkLength));
    }
    std::vector<std::vector<Vertex>> successors(g.vertex_count() + 1);
    for (const Edge& e : g.edges()) {
        successors[e.tail].push_back(e.head);
    }
    std::vector<Walk> out;
    Walk current{tau, nu, {}};
    extend_walks(successors, tau, nu, k, current, out);
    return out;
}

std::vector<Walk> walks_through(const std::vector<Walk>& walks, const Edge& e) {
    std::vector<Walk> out;
    std::copy_if(walks.begin(), walks.end(), std::back_inserter(out), [&e](const Walk& w) { return w.contains(e); });
    return out;
}

Integer walk_weight_sum(const std::vector<Walk>& walks, const IntMatrix& w) {
    Integer total = 0;
    for (const Walk& walk : walks) {
        Integer product = 1;
        for (const Edge& e : walk.edges) {
            product *= w(e.head - 1, e.tail - 1);
        }
        total += product;
    }
    return total;
}

Digraph remove_edge(const Digraph& g, const Edge& e) {
    const std::size_t index = g.edge_index(e);
    std::vector<Edge> edges = g.edges();
    edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(index));
    return Digraph(g.vertex_count(), std::move(edges));
}

Digraph with_self_loops(const Digraph& g) {
    std::vector<Edge> edges = g.edges();
    for (Vertex v = 1; v <= g.vertex_count(); ++v) {
        if (!g.contains(Edge{v, v})) {
            edges.push_back(Edge{v, v});
        }
    }
    return Digraph(g.vertex_count(), std::move(edges));
}

}  // namespace link_sentinel
