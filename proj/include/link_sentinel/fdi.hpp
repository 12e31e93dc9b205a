#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "link_sentinel/dynamics.hpp"
#include "link_sentinel/graph.hpp"
#include "link_sentinel/placement.hpp"

namespace link_sentinel {

class MonitorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Finite-difference weights (Fornberg) for derivatives 0..max_order at
// `center` from samples at `nodes`; result[k][i] multiplies f(nodes[i]).
std::vector<std::vector<double>> finite_difference_weights(double center, std::span<const double> nodes,
                                                           std::size_t max_order);

struct EstimatorOptions {
    // Sample stride between stencil points; h = stride * dt.
    std::size_t stride = 1;
    // Points per side beyond the derivative order (k + extra_points total).
    std::size_t extra_points = 3;
    double abs_floor = 1e-6;
    double rel = 1e-3;
    // Multiplier on the worst-case rounding error of each stencil.
    double roundoff_guard = 256.0;
    // Multiplier on the truncation error, estimated per side by comparing
    // against a stencil one node wider.
    double truncation_guard = 4.0;
};

struct JumpObservation {
    Vertex sensor = 0;
    std::size_t order = 0;
    double left_estimate = 0.0;
    double right_estimate = 0.0;
    double jump = 0.0;
    double threshold = 0.0;
    bool significant = false;
};

// One-sided estimates of derivatives 1..z of x_sensor on each side of t_star,
// which must be a sample instant of the trace. Throws MonitorError when the
// stencils do not fit.
std::vector<JumpObservation> estimate_jumps(const Trace& trace, Vertex sensor, double t_star, std::size_t z,
                                            const EstimatorOptions& options = {});

// True when t_star is a sample with room for order-z stencils on both sides.
bool can_estimate_at(const Trace& trace, double t_star, std::size_t z, const EstimatorOptions& options = {});

// Evaluates the jump statistic (largest |jump| / threshold over sensors and
// orders) at every interior sample and returns the argmax if it is
// significant.
std::optional<double> scan_for_jump(const Trace& trace, const SensorSet& sensors, std::size_t z,
                                    const EstimatorOptions& options = {});

bool detect(const Digraph& g, const SensorSet& m_d, const Trace& trace, double t_star, std::size_t z,
            const EstimatorOptions& options = {});

enum class VerdictKind { none, edge, ambiguous };

struct IsolationVerdict {
    VerdictKind kind = VerdictKind::none;
    std::optional<Edge> edge;
};

// Signature of the lowest significant order per sensor (0 when quiet),
// matched against the indicator sets of every edge.
IsolationVerdict isolate(const Digraph& g, const SensorSet& m_i, const Trace& trace, double t_star, std::size_t z,
                         const EstimatorOptions& options = {});

IndicatorSet observed_signature(std::span<const JumpObservation> evidence, const SensorSet& sensors);
IsolationVerdict match_signature(const RelationMatrix& relations, const Digraph& g, const IndicatorSet& observed,
                                 const SensorSet& sensors);

struct FdiReport {
    bool detected = false;
    IsolationVerdict verdict;
    std::optional<double> t_star;
    std::vector<JumpObservation> evidence;
};

// Full monitor pass. Uses the given t_star when the trace supports stencils
// there, otherwise scans the trace for the most significant jump.
FdiReport analyze(const Digraph& g, const SensorSet& sensors, const Trace& trace, std::optional<double> t_star,
                  std::size_t z, const EstimatorOptions& options = {});

}  // namespace link_sentinel
