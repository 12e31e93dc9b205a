#include "link_sentinel/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>

namespace link_sentinel {

using nlohmann::json;

namespace {

Edge parse_edge(const json& value, const char* what) {
    if (!value.is_array() || value.size() != 2 || !value[0].is_number_unsigned() || !value[1].is_number_unsigned()) {
        throw ConfigError(std::string(what) + " must be a [tail, head] pair of vertex indices");
    }
    return Edge{value[0].get<Vertex>(), value[1].get<Vertex>()};
}

Digraph parse_inline_graph(const json& value) {
    if (!value.contains("n") || !value["n"].is_number_unsigned()) {
        throw ConfigError("inline graph needs a non-negative integer `n`");
    }
    std::vector<Edge> edges;
    for (const json& e : value.value("edges", json::array())) {
        edges.push_back(parse_edge(e, "graph edge"));
    }
    try {
        return Digraph(value["n"].get<std::size_t>(), std::move(edges));
    } catch (const GraphError& err) {
        throw ConfigError(err.what());
    }
}

double positive_number(const json& doc, const char* key, double fallback) {
    if (!doc.contains(key)) {
        return fallback;
    }
    if (!doc[key].is_number() || !(doc[key].get<double>() > 0.0)) {
        throw ConfigError(std::string("`") + key + "` must be a positive number");
    }
    return doc[key].get<double>();
}

}  // namespace

std::vector<Integer> random_distinct_integers(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<long long> pool(4 * n);
    for (std::size_t i = 0; i < pool.size(); ++i) {
        pool[i] = static_cast<long long>(i) + 1;
    }
    // Partial Fisher-Yates with an explicit draw so results do not depend on
    // the standard library's shuffle implementation.
    std::vector<Integer> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t span = pool.size() - i;
        const std::size_t j = i + static_cast<std::size_t>(rng() % span);
        std::swap(pool[i], pool[j]);
        out.emplace_back(pool[i]);
    }
    return out;
}

ScenarioConfig parse_config(const json& doc, const std::string& base_dir) {
    if (!doc.is_object()) {
        throw ConfigError("config must be a JSON object");
    }
    ScenarioConfig cfg;

    if (!doc.contains("graph")) {
        throw ConfigError("config needs a `graph` (edge-list path or inline object)");
    }
    const json& graph = doc["graph"];
    if (graph.is_string()) {
        std::filesystem::path path(graph.get<std::string>());
        if (path.is_relative()) {
            path = std::filesystem::path(base_dir) / path;
        }
        cfg.graph_source = graph.get<std::string>();
        try {
            cfg.graph = load_edge_list(path.string());
        } catch (const GraphError& err) {
            throw ConfigError(err.what());
        }
    } else if (graph.is_object()) {
        cfg.graph = parse_inline_graph(graph);
    } else {
        throw ConfigError("`graph` must be a path or an object");
    }
    if (cfg.graph.has_self_loops()) {
        throw ConfigError("consensus networks may not contain self-loops");
    }
    const std::size_t n = cfg.graph.vertex_count();

    const json x0 = doc.value("x0", json{{"seed", 1}});
    if (x0.is_array()) {
        if (x0.size() != n) {
            throw ConfigError("`x0` has " + std::to_string(x0.size()) + " entries, graph has " + std::to_string(n) +
                              " vertices");
        }
        cfg.x0.resize(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            if (!x0[i].is_number()) {
                throw ConfigError("`x0` entries must be numbers");
            }
            cfg.x0[static_cast<Eigen::Index>(i)] = x0[i].get<double>();
        }
    } else if (x0.is_object() && x0.contains("seed") && x0["seed"].is_number_unsigned()) {
        cfg.x0_seed = x0["seed"].get<std::uint64_t>();
        const auto draws = random_distinct_integers(n, *cfg.x0_seed);
        cfg.x0.resize(static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            cfg.x0[static_cast<Eigen::Index>(i)] = static_cast<double>(draws[i]);
        }
    } else {
        throw ConfigError("`x0` must be a list of numbers or {\"seed\": <unsigned>}");
    }

    if (doc.contains("failed_edge") && !doc["failed_edge"].is_null()) {
        const Edge e = parse_edge(doc["failed_edge"], "`failed_edge`");
        if (!cfg.graph.contains(e)) {
            throw ConfigError("`failed_edge` [" + std::to_string(e.tail) + "," + std::to_string(e.head) +
                              "] is not an edge of the graph");
        }
        cfg.failed_edge = e;
        if (!doc.contains("t_f") || doc["t_f"].is_null()) {
            throw ConfigError("`t_f` is required when `failed_edge` is set");
        }
    }
    if (doc.contains("t_f") && !doc["t_f"].is_null()) {
        cfg.t_f = positive_number(doc, "t_f", 0.0);
    }
    std::optional<LinkFailure> failure;
    if (cfg.failed_edge) {
        failure = LinkFailure{*cfg.failed_edge, *cfg.t_f};
    }
    cfg.t_end = positive_number(doc, "t_end", cfg.t_f ? 2.0 * *cfg.t_f : Scenario::default_horizon(failure));
    cfg.dt = positive_number(doc, "dt", 1e-2);
    if (cfg.failed_edge && !(*cfg.t_f < cfg.t_end)) {
        throw ConfigError("`t_f` must be smaller than `t_end`");
    }

    if (doc.contains("z")) {
        if (!doc["z"].is_number_unsigned() || doc["z"].get<std::size_t>() < 1) {
            throw ConfigError("`z` must be a positive integer");
        }
        cfg.z = doc["z"].get<std::size_t>();
    } else {
        cfg.z = default_order_cap(cfg.graph);
    }

    const json sensors = doc.value("sensors", json("auto-isolation"));
    if (sensors.is_string()) {
        const std::string mode = sensors.get<std::string>();
        if (mode == "auto-detection") {
            cfg.sensors = AutoSensors::detection;
        } else if (mode == "auto-isolation") {
            cfg.sensors = AutoSensors::isolation;
        } else {
            throw ConfigError("`sensors` must be a vertex list, \"auto-detection\" or \"auto-isolation\"");
        }
    } else if (sensors.is_array()) {
        std::vector<Vertex> list;
        for (const json& v : sensors) {
            if (!v.is_number_unsigned() || v.get<Vertex>() < 1 || v.get<Vertex>() > n) {
                throw ConfigError("sensor entries must be vertex indices in 1.." + std::to_string(n));
            }
            list.push_back(v.get<Vertex>());
        }
        cfg.sensors = std::move(list);
    } else {
        throw ConfigError("`sensors` must be a vertex list or an auto mode string");
    }

    if (doc.contains("thresholds")) {
        const json& th = doc["thresholds"];
        cfg.estimator.abs_floor = positive_number(th, "abs_floor", cfg.estimator.abs_floor);
        cfg.estimator.rel = positive_number(th, "rel", cfg.estimator.rel);
        cfg.estimator.roundoff_guard = positive_number(th, "roundoff_guard", cfg.estimator.roundoff_guard);
        cfg.estimator.truncation_guard = positive_number(th, "truncation_guard", cfg.estimator.truncation_guard);
        if (th.contains("stride")) {
            cfg.estimator.stride = static_cast<std::size_t>(positive_number(th, "stride", 1.0));
        }
        if (th.contains("extra_points")) {
            cfg.estimator.extra_points = static_cast<std::size_t>(positive_number(th, "extra_points", 3.0));
        }
    }
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config `" + path + "`");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config is not valid JSON: ") + err.what());
    }
    return parse_config(doc, std::filesystem::path(path).parent_path().string());
}

Scenario ScenarioConfig::scenario() const {
    Scenario s;
    s.graph = graph;
    s.x0 = x0;
    if (failed_edge) {
        s.failure = LinkFailure{*failed_edge, *t_f};
    }
    s.t_end = t_end;
    s.dt = dt;
    return s;
}

json edge_to_json(const Edge& e) {
    return json::array({e.tail, e.head});
}

json ScenarioConfig::to_json() const {
    json doc;
    if (graph_source.empty()) {
        json edges = json::array();
        for (const Edge& e : graph.edges()) {
            edges.push_back(edge_to_json(e));
        }
        doc["graph"] = {{"n", graph.vertex_count()}, {"edges", edges}};
    } else {
        doc["graph"] = graph_source;
    }
    doc["x0"] = std::vector<double>(x0.data(), x0.data() + x0.size());
    if (x0_seed) {
        doc["x0_seed"] = *x0_seed;
    }
    doc["failed_edge"] = failed_edge ? edge_to_json(*failed_edge) : json(nullptr);
    doc["t_f"] = t_f ? json(*t_f) : json(nullptr);
    doc["t_end"] = t_end;
    doc["dt"] = dt;
    doc["z"] = z;
    if (const auto* list = std::get_if<std::vector<Vertex>>(&sensors)) {
        doc["sensors"] = *list;
    } else {
        doc["sensors"] = std::get<AutoSensors>(sensors) == AutoSensors::detection ? "auto-detection" : "auto-isolation";
    }
    doc["thresholds"] = {{"abs_floor", estimator.abs_floor},
                         {"rel", estimator.rel},
                         {"roundoff_guard", estimator.roundoff_guard},
                         {"truncation_guard", estimator.truncation_guard},
                         {"stride", estimator.stride},
                         {"extra_points", estimator.extra_points}};
    return doc;
}

std::optional<SensorSet> resolve_sensors(const ScenarioConfig& config) {
    if (const auto* list = std::get_if<std::vector<Vertex>>(&config.sensors)) {
        return SensorSet::of(*list, SensorPurpose::isolation);
    }
    if (std::get<AutoSensors>(config.sensors) == AutoSensors::detection) {
        return greedy_detection_placement(config.graph, config.z).sensors;
    }
    return greedy_isolation_placement(config.graph, config.z).sensors;
}

}  // namespace link_sentinel
