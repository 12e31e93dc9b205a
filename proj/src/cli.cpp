#include "link_sentinel/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "link_sentinel/config.hpp"
#include "link_sentinel/dynamics.hpp"
#include "link_sentinel/fdi.hpp"
#include "link_sentinel/graph.hpp"
#include "link_sentinel/jumps.hpp"
#include "link_sentinel/placement.hpp"

namespace link_sentinel::cli {

using nlohmann::json;

namespace {

struct Options {
    std::string graph_path;
    std::string config_path;
    std::string trace_path;
    std::string mode = "detection";
    std::optional<std::size_t> z;
    std::string out_path;
    std::optional<unsigned long long> seed;
    std::size_t max_n = 64;
};

// Writes to --out when given, otherwise to the command's stdout.
class Sink {
public:
    Sink(const std::string& path, std::ostream& fallback) : fallback_(fallback) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) {
                throw ConfigError("cannot open `" + path + "` for writing");
            }
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : fallback_; }

private:
    std::ofstream file_;
    std::ostream& fallback_;
};

std::size_t resolve_z(const Digraph& g, const std::optional<std::size_t>& z) {
    if (z) {
        if (*z < 1) {
            throw ConfigError("--z must be at least 1");
        }
        return *z;
    }
    return default_order_cap(g);
}

std::string to_decimal(const Rational& r) {
    std::ostringstream s;
    s << r;
    return s.str();
}

int cmd_place(const Options& opt, std::ostream& out, std::ostream& err) {
    const Digraph g = load_edge_list(opt.graph_path);
    const std::size_t z = resolve_z(g, opt.z);
    const bool isolation = opt.mode == "isolation";
    const PlacementResult result = isolation ? greedy_isolation_placement(g, z) : greedy_detection_placement(g, z);

    json doc;
    doc["mode"] = opt.mode;
    doc["sensors"] = result.sensors ? json(result.sensors->vertices) : json(nullptr);
    doc["z"] = z;
    doc["deficit_trace"] = result.deficit_trace;
    doc["relation_matrix"] = relation_matrix(g, z).to_rows();
    Sink sink(opt.out_path, out);
    sink.stream() << doc.dump(2) << '\n';
    if (!result.solved()) {
        err << "no isolating sensor set exists: some edges share an indicator set even with every vertex observed\n";
        return kNoIsolatingSet;
    }
    return kOk;
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
    const ScenarioConfig cfg = load_config(opt.config_path);
    Trace trace;
    try {
        trace = simulate(cfg.scenario());
    } catch (const FailureAdmissibilityError& e) {
        err << "error: " << e.what() << '\n';
        return kInadmissibleFailure;
    }
    Sink sink(opt.out_path, out);
    write_trace_csv(sink.stream(), trace);
    return kOk;
}

unsigned long long verification_seed(const Options& opt) {
    if (opt.seed) {
        return *opt.seed;
    }
    if (const char* env = std::getenv(kSeedEnvVar); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long value = std::strtoull(env, &end, 10);
        if (end == nullptr || *end != '\0') {
            throw ConfigError(std::string(kSeedEnvVar) + " must be an unsigned integer");
        }
        return value;
    }
    return kDefaultVerifySeed;
}

int cmd_verify(const Options& opt, std::ostream& out, std::ostream& err) {
    const Digraph g = load_edge_list(opt.graph_path);
    if (g.vertex_count() > opt.max_n) {
        err << "error: graph has " << g.vertex_count() << " vertices, above the --max-n guardrail of " << opt.max_n
            << '\n';
        return kInvalidInput;
    }
    const std::size_t z = resolve_z(g, opt.z);
    const unsigned long long seed = verification_seed(opt);
    const std::vector<Integer> x0 = random_distinct_integers(g.vertex_count(), seed);
    const std::vector<TheoremCheck> checks = verify_all(g, x0, z);

    std::size_t vacuous = 0;
    json failures = json::array();
    for (const TheoremCheck& c : checks) {
        vacuous += c.vacuous ? 1 : 0;
        if (!c.passed) {
            failures.push_back({{"edge", edge_to_json(c.edge)},
                                {"observer", c.observer},
                                {"order", c.order.value()},
                                {"failing_k", *c.failing_order},
                                {"expected", to_decimal(c.expected)},
                                {"actual", to_decimal(c.actual)}});
        }
    }
    json x0_json = json::array();
    for (const Integer& v : x0) {
        x0_json.push_back(v.convert_to<long long>());
    }
    json doc;
    doc["vertices"] = g.vertex_count();
    doc["edges"] = g.edge_count();
    doc["z"] = z;
    doc["seed"] = seed;
    doc["x0"] = x0_json;
    doc["pairs"] = checks.size();
    doc["checked"] = checks.size() - vacuous;
    doc["vacuous"] = vacuous;
    doc["failures"] = failures;
    doc["passed"] = failures.empty();
    Sink sink(opt.out_path, out);
    sink.stream() << doc.dump(2) << '\n';
    if (!failures.empty()) {
        err << "jump prediction check failed on " << failures.size() << " (edge, observer) pairs\n";
        return kTheoremViolation;
    }
    return kOk;
}

json verdict_to_json(const IsolationVerdict& v) {
    switch (v.kind) {
        case VerdictKind::edge: return edge_to_json(*v.edge);
        case VerdictKind::ambiguous: return "ambiguous";
        case VerdictKind::none: break;
    }
    return nullptr;
}

int cmd_analyze(const Options& opt, std::ostream& out, std::ostream& err) {
    const ScenarioConfig cfg = load_config(opt.config_path);
    std::ifstream trace_in(opt.trace_path);
    if (!trace_in) {
        throw ConfigError("cannot open trace `" + opt.trace_path + "`");
    }
    const Trace trace = read_trace_csv(trace_in);
    if (trace.agent_count() != cfg.graph.vertex_count()) {
        throw ConfigError("trace has " + std::to_string(trace.agent_count()) + " agents, config graph has " +
                          std::to_string(cfg.graph.vertex_count()));
    }
    const std::optional<SensorSet> sensors = resolve_sensors(cfg);
    if (!sensors) {
        err << "no isolating sensor set exists for this graph; list sensors explicitly\n";
        return kNoIsolatingSet;
    }
    const FdiReport report = analyze(cfg.graph, *sensors, trace, cfg.t_f, cfg.z, cfg.estimator);

    json evidence = json::array();
    for (const JumpObservation& o : report.evidence) {
        evidence.push_back({{"sensor", o.sensor},
                            {"order", o.order},
                            {"jump", o.jump},
                            {"left", o.left_estimate},
                            {"right", o.right_estimate},
                            {"threshold", o.threshold},
                            {"significant", o.significant}});
    }
    json doc;
    doc["detected"] = report.detected;
    doc["edge"] = verdict_to_json(report.verdict);
    doc["t_star"] = report.t_star ? json(*report.t_star) : json(nullptr);
    doc["sensors"] = sensors->vertices;
    doc["z"] = cfg.z;
    doc["evidence"] = evidence;
    doc["config"] = cfg.to_json();
    Sink sink(opt.out_path, out);
    sink.stream() << doc.dump(2) << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Link-failure detection and isolation for consensus networks", "link_sentinel"};
    app.require_subcommand(1);
    Options opt;

    auto* place = app.add_subcommand("place", "Greedy sensor placement (JSON to stdout)");
    place->add_option("--graph", opt.graph_path, "Edge-list file")->required();
    place->add_option("--mode", opt.mode, "detection | isolation")
        ->check(CLI::IsMember({"detection", "isolation"}));
    place->add_option("--z", opt.z, "Highest derivative order (default n-1)");
    place->add_option("--out", opt.out_path, "Write JSON here instead of stdout");

    auto* sim = app.add_subcommand("simulate", "Simulate a scenario config to a trace CSV");
    sim->add_option("--config", opt.config_path, "Scenario JSON")->required();
    sim->add_option("--out", opt.out_path, "Write CSV here instead of stdout");

    auto* verify = app.add_subcommand("verify", "Exhaustive exact check of the jump predictions");
    verify->add_option("--graph", opt.graph_path, "Edge-list file")->required();
    verify->add_option("--z", opt.z, "Highest derivative order checked (default n-1)");
    verify->add_option("--seed", opt.seed, std::string("RNG seed for x0 (else $") + kSeedEnvVar + ")");
    verify->add_option("--max-n", opt.max_n, "Vertex-count guardrail");
    verify->add_option("--out", opt.out_path, "Write JSON here instead of stdout");

    auto* an = app.add_subcommand("analyze", "Detect and isolate a link failure in a trace");
    an->add_option("--config", opt.config_path, "Scenario JSON")->required();
    an->add_option("--trace", opt.trace_path, "Trace CSV")->required();
    an->add_option("--out", opt.out_path, "Write JSON here instead of stdout");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalidInput;
    }

    try {
        if (place->parsed()) {
            return cmd_place(opt, out, err);
        }
        if (sim->parsed()) {
            return cmd_simulate(opt, out, err);
        }
        if (verify->parsed()) {
            return cmd_verify(opt, out, err);
        }
        return cmd_analyze(opt, out, err);
    } catch (const std::exception& e) {
        // Parse errors, bad configs and dimension mismatches.
        err << "error: " << e.what() << '\n';
        return kInvalidInput;
    }
}

}  // namespace link_sentinel::cli
