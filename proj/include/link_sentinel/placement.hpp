#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "link_sentinel/graph.hpp"

namespace link_sentinel {

enum class SensorPurpose { detection, isolation };

const char* to_string(SensorPurpose purpose);

struct SensorSet {
    std::vector<Vertex> vertices;  // sorted, unique
    SensorPurpose purpose = SensorPurpose::detection;

    std::size_t size() const noexcept { return vertices.size(); }
    bool contains(Vertex v) const;

    static SensorSet of(std::vector<Vertex> vertices, SensorPurpose purpose = SensorPurpose::detection);
};

// (relation order, sensor) pairs; order 0 means the sensor cannot see the
// edge within the first z derivatives.
using IndicatorSet = std::set<std::pair<std::size_t, Vertex>>;

// Default highest derivative order: one less than the vertex count.
std::size_t default_order_cap(const Digraph& g);

// k when d(tail, p) = k and d(head, p) = k - 1 with 1 <= k <= z, else 0.
std::size_t relation_order(const Digraph& g, Vertex p, const Edge& e, std::size_t z);

// Vertex-by-edge table of relation orders; columns follow g.edges().
class RelationMatrix {
public:
    RelationMatrix(const Digraph& g, std::size_t z);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t z() const noexcept { return z_; }

    // Order between vertex p (1-based) and edge column j (0-based).
    std::size_t at(Vertex p, std::size_t edge_col) const { return data_[(p - 1) * cols_ + edge_col]; }

    std::vector<std::vector<std::size_t>> to_rows() const;

    IndicatorSet indicator_set(const SensorSet& m, std::size_t edge_col) const;
    std::size_t coverage_deficit(const SensorSet& m) const;
    std::size_t resolution_deficit(const SensorSet& m) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t z_ = 0;
    std::vector<std::size_t> data_;
};

RelationMatrix relation_matrix(const Digraph& g, std::size_t z);
IndicatorSet indicator_set(const Digraph& g, const SensorSet& m, const Edge& e, std::size_t z);

// Number of edges every sensor in m is blind to.
std::size_t coverage_deficit(const Digraph& g, const SensorSet& m, std::size_t z);

// Number of edges whose indicator set coincides with another edge's.
std::size_t resolution_deficit(const Digraph& g, const SensorSet& m, std::size_t z);

struct PlacementResult {
    // nullopt when no isolating sensor set exists.
    std::optional<SensorSet> sensors;
    // Deficit before the first pick and after every pick.
    std::vector<std::size_t> deficit_trace;
    std::size_t z = 0;

    bool solved() const noexcept { return sensors.has_value(); }
};

// Greedy coverage: add the vertex with the largest deficit reduction until
// every edge is covered. Ties go to the lowest vertex index.
PlacementResult greedy_detection_placement(const Digraph& g, std::size_t z);

// Greedy resolution until every edge has a unique indicator set. Returns an
// unsolved result when even the full vertex set cannot separate all edges.
// A resolving set that leaves an edge uncovered is completed with coverage
// picks; those appear at the end of deficit_trace as coverage deficits.
PlacementResult greedy_isolation_placement(const Digraph& g, std::size_t z);

}  // namespace link_sentinel
