#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "link_sentinel/dynamics.hpp"
#include "link_sentinel/fdi.hpp"
#include "link_sentinel/graph.hpp"
#include "link_sentinel/placement.hpp"

namespace link_sentinel {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class AutoSensors { detection, isolation };

// Explicit vertex list, or a request to run one of the greedy placements.
using SensorSpec = std::variant<std::vector<Vertex>, AutoSensors>;

struct ScenarioConfig {
    // Where the graph came from: a path (resolved against the config file's
    // directory) or empty when given inline.
    std::string graph_source;
    Digraph graph;
    RealVector x0;
    // Set when x0 was drawn from a seed rather than listed.
    std::optional<std::uint64_t> x0_seed;
    std::optional<Edge> failed_edge;
    std::optional<double> t_f;
    double t_end = 10.0;
    double dt = 1e-2;
    std::size_t z = 1;
    SensorSpec sensors = AutoSensors::isolation;
    EstimatorOptions estimator;

    Scenario scenario() const;

    // Every field with defaults filled in.
    nlohmann::json to_json() const;
};

// `base_dir` resolves a relative graph path.
ScenarioConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
ScenarioConfig load_config(const std::string& path);

// n distinct integers drawn from [1, 4n] with a seeded Mersenne twister.
std::vector<Integer> random_distinct_integers(std::size_t n, std::uint64_t seed);

// Resolves the sensor spec; returns nullopt when isolation is requested but
// no isolating set exists.
std::optional<SensorSet> resolve_sensors(const ScenarioConfig& config);

nlohmann::json edge_to_json(const Edge& e);

}  // namespace link_sentinel
