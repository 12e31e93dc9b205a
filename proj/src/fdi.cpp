#include "link_sentinel/fdi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace link_sentinel {

namespace {

std::size_t stencil_span(std::size_t z, const EstimatorOptions& options) {
    // Nodes per side for the widened highest-order stencil, minus the center.
    return (z + options.extra_points) * options.stride;
}

void check_options(std::size_t z, const EstimatorOptions& options) {
    if (z < 1) {
        throw MonitorError("derivative order cap z must be at least 1");
    }
    if (options.stride < 1 || options.extra_points < 1) {
        throw MonitorError("estimator stride and extra_points must be positive");
    }
}

struct OneSided {
    double estimate = 0.0;
    double weight_mass = 0.0;  // sum of |w_i|
    double state_mass = 0.0;   // max |x_i| over the stencil
    double truncation = 0.0;   // |estimate - estimate from one more node|
};

// direction = -1 for samples at and before `center`, +1 for at and after.
OneSided one_sided(const Trace& trace, std::size_t center, int direction, std::size_t sensor_row,
                   std::size_t order, const EstimatorOptions& options) {
    const std::size_t width = order + options.extra_points;
    std::vector<double> nodes(width + 1);
    std::vector<double> values(width + 1);
    for (std::size_t m = 0; m <= width; ++m) {
        const std::size_t offset = m * options.stride;
        const std::size_t index = direction < 0 ? center - offset : center + offset;
        nodes[m] = trace.times[index];
        values[m] = trace.states[index][static_cast<Eigen::Index>(sensor_row)];
    }
    const double t = trace.times[center];
    const auto weights = finite_difference_weights(t, std::span<const double>(nodes.data(), width), order);
    const auto wider = finite_difference_weights(t, nodes, order);
    OneSided out;
    double widened = 0.0;
    for (std::size_t m = 0; m <= width; ++m) {
        if (m < width) {
            out.estimate += weights[order][m] * values[m];
            out.weight_mass += std::abs(weights[order][m]);
        }
        widened += wider[order][m] * values[m];
        out.state_mass = std::max(out.state_mass, std::abs(values[m]));
    }
    out.truncation = std::abs(widened - out.estimate);
    return out;
}

std::vector<JumpObservation> jumps_at_index(const Trace& trace, std::size_t center, Vertex sensor, std::size_t z,
                                            const EstimatorOptions& options) {
    std::vector<JumpObservation> out;
    out.reserve(z);
    for (std::size_t k = 1; k <= z; ++k) {
        const OneSided left = one_sided(trace, center, -1, sensor - 1, k, options);
        const OneSided right = one_sided(trace, center, +1, sensor - 1, k, options);
        JumpObservation obs;
        obs.sensor = sensor;
        obs.order = k;
        obs.left_estimate = left.estimate;
        obs.right_estimate = right.estimate;
        obs.jump = right.estimate - left.estimate;
        const double scale = std::max(std::abs(left.estimate), std::abs(right.estimate));
        const double roundoff = options.roundoff_guard * std::numeric_limits<double>::epsilon() *
                                std::max(left.state_mass, right.state_mass) *
                                (left.weight_mass + right.weight_mass);
        const double truncation = options.truncation_guard * (left.truncation + right.truncation);
        obs.threshold = std::max({options.abs_floor, options.rel * scale, roundoff, truncation});
        obs.significant = std::abs(obs.jump) > obs.threshold;
        out.push_back(obs);
    }
    return out;
}

void check_sensor(const Trace& trace, Vertex sensor) {
    if (sensor < 1 || sensor > trace.agent_count()) {
        throw MonitorError("no trace for sensor " + std::to_string(sensor) + " (trace has " +
                           std::to_string(trace.agent_count()) + " agents)");
    }
}

std::size_t center_index(const Trace& trace, double t_star, std::size_t z, const EstimatorOptions& options) {
    const auto index = trace.find_sample(t_star);
    if (!index) {
        std::ostringstream msg;
        msg << "t*=" << t_star << " is not a sample instant of the trace";
        throw MonitorError(msg.str());
    }
    const std::size_t reach = stencil_span(z, options);
    if (*index < reach || *index + reach >= trace.sample_count()) {
        std::ostringstream msg;
        msg << "not enough samples around t*=" << t_star << " for order-" << z << " one-sided stencils";
        throw MonitorError(msg.str());
    }
    return *index;
}

std::size_t lowest_significant_order(std::span<const JumpObservation> evidence, Vertex sensor) {
    std::size_t lowest = 0;
    for (const JumpObservation& obs : evidence) {
        if (obs.sensor == sensor && obs.significant && (lowest == 0 || obs.order < lowest)) {
            lowest = obs.order;
        }
    }
    return lowest;
}

std::vector<JumpObservation> gather(const Trace& trace, const SensorSet& sensors, std::size_t center, std::size_t z,
                                    const EstimatorOptions& options) {
    std::vector<JumpObservation> evidence;
    for (Vertex p : sensors.vertices) {
        auto obs = jumps_at_index(trace, center, p, z, options);
        evidence.insert(evidence.end(), obs.begin(), obs.end());
    }
    return evidence;
}

}  // namespace

std::vector<JumpObservation> estimate_jumps(const Trace& trace, Vertex sensor, double t_star, std::size_t z,
                                            const EstimatorOptions& options) {
    check_options(z, options);
    check_sensor(trace, sensor);
    return jumps_at_index(trace, center_index(trace, t_star, z, options), sensor, z, options);
}

bool can_estimate_at(const Trace& trace, double t_star, std::size_t z, const EstimatorOptions& options) {
    check_options(z, options);
    const auto index = trace.find_sample(t_star);
    const std::size_t reach = stencil_span(z, options);
    return index && *index >= reach && *index + reach < trace.sample_count();
}

std::optional<double> scan_for_jump(const Trace& trace, const SensorSet& sensors, std::size_t z,
                                    const EstimatorOptions& options) {
    check_options(z, options);
    for (Vertex p : sensors.vertices) {
        check_sensor(trace, p);
    }
    const std::size_t reach = stencil_span(z, options);
    std::optional<std::size_t> best;
    double best_score = 1.0;
    for (std::size_t i = reach; i + reach < trace.sample_count(); ++i) {
        const auto evidence = gather(trace, sensors, i, z, options);
        // Score each sensor by its lowest significant order only: near (but
        // not at) a kink, higher-order stencils straddle it and blow up.
        double score = 0.0;
        for (Vertex p : sensors.vertices) {
            const std::size_t lowest = lowest_significant_order(evidence, p);
            if (lowest == 0) {
                continue;
            }
            for (const JumpObservation& obs : evidence) {
                if (obs.sensor == p && obs.order == lowest) {
                    score = std::max(score, std::abs(obs.jump) / obs.threshold);
                }
            }
        }
        if (score > best_score) {
            best_score = score;
            best = i;
        }
    }
    if (!best) {
        return std::nullopt;
    }
    return trace.times[*best];
}

bool detect(const Digraph& g, const SensorSet& m_d, const Trace& trace, double t_star, std::size_t z,
            const EstimatorOptions& options) {
    if (trace.agent_count() != g.vertex_count()) {
        throw MonitorError("trace dimension does not match the digraph");
    }
    for (Vertex p : m_d.vertices) {
        const auto evidence = estimate_jumps(trace, p, t_star, z, options);
        if (std::any_of(evidence.begin(), evidence.end(), [](const JumpObservation& o) { return o.significant; })) {
            return true;
        }
    }
    return false;
}

IndicatorSet observed_signature(std::span<const JumpObservation> evidence, const SensorSet& sensors) {
    IndicatorSet signature;
    for (Vertex p : sensors.vertices) {
        signature.emplace(lowest_significant_order(evidence, p), p);
    }
    return signature;
}

IsolationVerdict match_signature(const RelationMatrix& relations, const Digraph& g, const IndicatorSet& observed,
                                 const SensorSet& sensors) {
    const bool quiet = std::all_of(observed.begin(), observed.end(), [](const auto& pair) { return pair.first == 0; });
    if (quiet) {
        return {VerdictKind::none, std::nullopt};
    }
    std::optional<Edge> match;
    for (std::size_t j = 0; j < relations.cols(); ++j) {
        if (relations.indicator_set(sensors, j) == observed) {
            if (match) {
                return {VerdictKind::ambiguous, std::nullopt};
            }
            match = g.edges()[j];
        }
    }
    if (!match) {
        return {VerdictKind::ambiguous, std::nullopt};
    }
    return {VerdictKind::edge, match};
}

IsolationVerdict isolate(const Digraph& g, const SensorSet& m_i, const Trace& trace, double t_star, std::size_t z,
                         const EstimatorOptions& options) {
    if (trace.agent_count() != g.vertex_count()) {
        throw MonitorError("trace dimension does not match the digraph");
    }
    std::vector<JumpObservation> evidence;
    for (Vertex p : m_i.vertices) {
        auto obs = estimate_jumps(trace, p, t_star, z, options);
        evidence.insert(evidence.end(), obs.begin(), obs.end());
    }
    return match_signature(RelationMatrix(g, z), g, observed_signature(evidence, m_i), m_i);
}

FdiReport analyze(const Digraph& g, const SensorSet& sensors, const Trace& trace, std::optional<double> t_star,
                  std::size_t z, const EstimatorOptions& options) {
    if (trace.agent_count() != g.vertex_count()) {
        throw MonitorError("trace has " + std::to_string(trace.agent_count()) + " agents but the digraph has " +
                           std::to_string(g.vertex_count()) + " vertices");
    }
    for (Vertex p : sensors.vertices) {
        check_sensor(trace, p);
    }
    FdiReport report;
    if (t_star && can_estimate_at(trace, *t_star, z, options)) {
        report.t_star = t_star;
    } else {
        report.t_star = scan_for_jump(trace, sensors, z, options);
    }
    if (!report.t_star) {
        return report;
    }
    const std::size_t center = center_index(trace, *report.t_star, z, options);
    report.evidence = gather(trace, sensors, center, z, options);
    report.detected = std::any_of(report.evidence.begin(), report.evidence.end(),
                                  [](const JumpObservation& o) { return o.significant; });
    if (report.detected) {
        report.verdict = match_signature(RelationMatrix(g, z), g, observed_signature(report.evidence, sensors), sensors);
    }
    return report;
}

}  // namespace link_sentinel
