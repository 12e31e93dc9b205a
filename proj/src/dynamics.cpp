#include "link_sentinel/dynamics.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace link_sentinel {

RealMatrix to_real(const IntMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.size());
    RealMatrix out(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            out(i, j) = static_cast<double>(m(static_cast<std::size_t>(i), static_cast<std::size_t>(j)));
        }
    }
    return out;
}

void validate_consensus_network(const Digraph& g) {
    for (const Edge& e : g.edges()) {
        if (e.is_self_loop()) {
            std::ostringstream msg;
            msg << "self-loop " << e << " is not allowed in a consensus network";
            throw SimulationError(msg.str());
        }
    }
}

RealVector propagate(const RealMatrix& l, const RealVector& x, double t) {
    if (l.rows() != l.cols() || l.rows() != x.size()) {
        throw SimulationError("propagate: dimension mismatch between Laplacian and state");
    }
    if (t < 0.0) {
        throw SimulationError("propagate: negative duration");
    }
    if (t == 0.0) {
        return x;
    }
    const RealMatrix generator = -l * t;
    return generator.exp() * x;
}

std::optional<std::size_t> Trace::find_sample(double t) const {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (std::abs(times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) {
            return i;
        }
    }
    return std::nullopt;
}

namespace {

// Samples one segment [start, stop] under a fixed generator, stepping with a
// cached e^{-L dt}. Grid points are start + i*dt; `stop` is always sampled.
void sample_segment(const RealMatrix& l, double start, double stop, double dt, RealVector x, Trace& trace,
                    bool include_start) {
    const RealMatrix step = (-l * dt).exp();
    const double snap = 1e-9 * dt;
    if (include_start) {
        trace.times.push_back(start);
        trace.states.push_back(x);
    }
    double t = start;
    for (std::size_t i = 1;; ++i) {
        const double next = start + static_cast<double>(i) * dt;
        if (next > stop - snap) {
            break;
        }
        x = step * x;
        t = next;
        trace.times.push_back(t);
        trace.states.push_back(x);
    }
    if (stop - t > snap) {
        x = propagate(l, x, stop - t);
        trace.times.push_back(stop);
        trace.states.push_back(x);
    } else if (t != stop && !trace.times.empty()) {
        trace.times.back() = stop;
    }
}

}  // namespace

Trace simulate(const Scenario& s) {
    const Digraph& g = s.graph;
    validate_consensus_network(g);
    const std::size_t n = g.vertex_count();
    if (static_cast<std::size_t>(s.x0.size()) != n) {
        throw SimulationError("initial state has " + std::to_string(s.x0.size()) + " entries, expected " +
                              std::to_string(n));
    }
    if (!(s.dt > 0.0)) {
        throw SimulationError("dt must be positive");
    }
    if (!(s.t_end > 0.0)) {
        throw SimulationError("t_end must be positive");
    }

    Trace trace;
    const RealMatrix l1 = to_real(laplacian(g));
    if (!s.failure) {
        sample_segment(l1, 0.0, s.t_end, s.dt, s.x0, trace, true);
        return trace;
    }

    const LinkFailure& failure = *s.failure;
    if (!g.contains(failure.edge)) {
        std::ostringstream msg;
        msg << "failed edge " << failure.edge << " is not in the network";
        throw SimulationError(msg.str());
    }
    if (!(failure.time > 0.0) || !(failure.time < s.t_end)) {
        throw SimulationError("failure time must lie strictly inside (0, t_end)");
    }

    // Pre-failure samples lie on the global grid; snap t_f onto it if close.
    double t_f = failure.time;
    const double nearest = std::round(t_f / s.dt) * s.dt;
    if (std::abs(nearest - t_f) <= 1e-9 * s.dt) {
        t_f = nearest;
    }
    sample_segment(l1, 0.0, t_f, s.dt, s.x0, trace, true);

    const RealVector& at_failure = trace.states.back();
    const double gap = at_failure[static_cast<Eigen::Index>(failure.edge.head - 1)] -
                       at_failure[static_cast<Eigen::Index>(failure.edge.tail - 1)];
    if (std::abs(gap) <= kAdmissibilityTolerance) {
        std::ostringstream msg;
        msg << "edge " << failure.edge << " fails at t=" << t_f
            << " while its head and tail states coincide; the failure is unobservable";
        throw FailureAdmissibilityError(msg.str());
    }

    const RealMatrix l2 = to_real(laplacian(remove_edge(g, failure.edge)));
    sample_segment(l2, t_f, s.t_end, s.dt, at_failure, trace, false);
    trace.failure_time = t_f;
    return trace;
}

double analytic_derivative(const Digraph& g, const RealVector& x, Vertex p, std::size_t k) {
    g.check_vertex(p);
    if (static_cast<std::size_t>(x.size()) != g.vertex_count()) {
        throw SimulationError("analytic_derivative: state dimension mismatch");
    }
    const RealMatrix generator = -to_real(laplacian(g));
    RealVector y = x;
    for (std::size_t i = 0; i < k; ++i) {
        y = generator * y;
    }
    return y[static_cast<Eigen::Index>(p - 1)];
}

}  // namespace link_sentinel
