#include "link_sentinel/placement.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace link_sentinel {

const char* to_string(SensorPurpose purpose) {
    return purpose == SensorPurpose::detection ? "detection" : "isolation";
}

bool SensorSet::contains(Vertex v) const {
    return std::binary_search(vertices.begin(), vertices.end(), v);
}

SensorSet SensorSet::of(std::vector<Vertex> vertices, SensorPurpose purpose) {
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return SensorSet{std::move(vertices), purpose};
}

std::size_t default_order_cap(const Digraph& g) {
    return g.vertex_count() > 1 ? g.vertex_count() - 1 : 1;
}

namespace {

std::size_t order_from_distances(const std::vector<Distance>& to_p, const Edge& e, std::size_t z) {
    const Distance tail = to_p[e.tail - 1];
    const Distance head = to_p[e.head - 1];
    if (!tail.is_finite() || !head.is_finite()) {
        return 0;
    }
    const std::size_t k = tail.value();
    if (k >= 1 && k <= z && head.value() + 1 == k) {
        return k;
    }
    return 0;
}

void check_sensors(std::size_t n, const SensorSet& m) {
    for (Vertex v : m.vertices) {
        if (v < 1 || v > n) {
            throw GraphError("sensor vertex " + std::to_string(v) + " is outside 1.." + std::to_string(n));
        }
    }
}

}  // namespace

std::size_t relation_order(const Digraph& g, Vertex p, const Edge& e, std::size_t z) {
    if (!g.contains(e)) {
        std::ostringstream msg;
        msg << "edge " << e << " is not in the digraph";
        throw GraphError(msg.str());
    }
    return order_from_distances(distances_to(g, p), e, z);
}

RelationMatrix::RelationMatrix(const Digraph& g, std::size_t z)
    : rows_(g.vertex_count()), cols_(g.edge_count()), z_(z), data_(rows_ * cols_, 0) {
    for (Vertex p = 1; p <= rows_; ++p) {
        const std::vector<Distance> to_p = distances_to(g, p);
        for (std::size_t j = 0; j < cols_; ++j) {
            data_[(p - 1) * cols_ + j] = order_from_distances(to_p, g.edges()[j], z);
        }
    }
}

std::vector<std::vector<std::size_t>> RelationMatrix::to_rows() const {
    std::vector<std::vector<std::size_t>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        out[i].assign(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                      data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
    }
    return out;
}

IndicatorSet RelationMatrix::indicator_set(const SensorSet& m, std::size_t edge_col) const {
    check_sensors(rows_, m);
    IndicatorSet out;
    for (Vertex p : m.vertices) {
        out.emplace(at(p, edge_col), p);
    }
    return out;
}

std::size_t RelationMatrix::coverage_deficit(const SensorSet& m) const {
    check_sensors(rows_, m);
    std::size_t blind = 0;
    for (std::size_t j = 0; j < cols_; ++j) {
        const bool seen = std::any_of(m.vertices.begin(), m.vertices.end(), [&](Vertex p) { return at(p, j) != 0; });
        blind += seen ? 0 : 1;
    }
    return blind;
}

std::size_t RelationMatrix::resolution_deficit(const SensorSet& m) const {
    check_sensors(rows_, m);
    // Indicator sets over the same sensors are equal iff their order columns are.
    std::map<std::vector<std::size_t>, std::size_t> multiplicity;
    for (std::size_t j = 0; j < cols_; ++j) {
        std::vector<std::size_t> signature;
        signature.reserve(m.size());
        for (Vertex p : m.vertices) {
            signature.push_back(at(p, j));
        }
        ++multiplicity[signature];
    }
    std::size_t colliding = 0;
    for (const auto& [signature, count] : multiplicity) {
        colliding += count > 1 ? count : 0;
    }
    return colliding;
}

RelationMatrix relation_matrix(const Digraph& g, std::size_t z) {
    return RelationMatrix(g, z);
}

IndicatorSet indicator_set(const Digraph& g, const SensorSet& m, const Edge& e, std::size_t z) {
    const std::size_t col = g.edge_index(e);
    return RelationMatrix(g, z).indicator_set(m, col);
}

std::size_t coverage_deficit(const Digraph& g, const SensorSet& m, std::size_t z) {
    return RelationMatrix(g, z).coverage_deficit(m);
}

std::size_t resolution_deficit(const Digraph& g, const SensorSet& m, std::size_t z) {
    return RelationMatrix(g, z).resolution_deficit(m);
}

namespace {

using Deficit = std::function<std::size_t(const SensorSet&)>;

// Adds to `m` the vertex minimizing the deficit of m ∪ {v}; lowest index
// wins ties. Minimizing f(M ∪ {v}) - f(M) and f(M ∪ {v}) pick the same vertex.
std::size_t greedy_step(SensorSet& m, std::size_t n, const Deficit& deficit) {
    std::optional<Vertex> best;
    std::size_t best_value = 0;
    for (Vertex v = 1; v <= n; ++v) {
        if (m.contains(v)) {
            continue;
        }
        SensorSet candidate = m;
        candidate.vertices.insert(std::upper_bound(candidate.vertices.begin(), candidate.vertices.end(), v), v);
        const std::size_t value = deficit(candidate);
        if (!best || value < best_value) {
            best = v;
            best_value = value;
        }
    }
    m.vertices.insert(std::upper_bound(m.vertices.begin(), m.vertices.end(), *best), *best);
    return best_value;
}

void cover_remaining(const RelationMatrix& relations, std::size_t n, SensorSet& m,
                     std::vector<std::size_t>& trace) {
    const Deficit coverage = [&](const SensorSet& s) { return relations.coverage_deficit(s); };
    std::size_t value = coverage(m);
    while (value != 0) {
        value = greedy_step(m, n, coverage);
        trace.push_back(value);
    }
}

}  // namespace

PlacementResult greedy_detection_placement(const Digraph& g, std::size_t z) {
    if (z < 1) {
        throw GraphError("derivative order cap z must be at least 1");
    }
    const RelationMatrix relations(g, z);
    PlacementResult result;
    result.z = z;
    SensorSet m{{}, SensorPurpose::detection};
    result.deficit_trace.push_back(relations.coverage_deficit(m));
    cover_remaining(relations, g.vertex_count(), m, result.deficit_trace);
    result.sensors = std::move(m);
    return result;
}

PlacementResult greedy_isolation_placement(const Digraph& g, std::size_t z) {
    if (z < 1) {
        throw GraphError("derivative order cap z must be at least 1");
    }
    const std::size_t n = g.vertex_count();
    const RelationMatrix relations(g, z);
    const Deficit resolution = [&](const SensorSet& s) { return relations.resolution_deficit(s); };
    PlacementResult result;
    result.z = z;
    SensorSet m{{}, SensorPurpose::isolation};
    std::size_t value = resolution(m);
    result.deficit_trace.push_back(value);
    while (value != 0 && m.size() != n) {
        value = greedy_step(m, n, resolution);
        result.deficit_trace.push_back(value);
    }
    if (value != 0) {
        return result;
    }
    cover_remaining(relations, n, m, result.deficit_trace);
    result.sensors = std::move(m);
    return result;
}

}  // namespace link_sentinel
