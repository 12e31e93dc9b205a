#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "link_sentinel/graph.hpp"

namespace link_sentinel {

using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

RealMatrix to_real(const IntMatrix& m);

class SimulationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Raised when a configured link fails while its endpoints already agree, so
// the failure would leave no trace in any derivative.
class FailureAdmissibilityError : public SimulationError {
public:
    using SimulationError::SimulationError;
};

// Throws SimulationError for self-loops, which the agreement protocol does
// not admit.
void validate_consensus_network(const Digraph& g);

// e^{-L t} x.
RealVector propagate(const RealMatrix& l, const RealVector& x, double t);

struct LinkFailure {
    Edge edge;
    double time = 0.0;
};

struct Scenario {
    Digraph graph;
    RealVector x0;
    std::optional<LinkFailure> failure;
    double t_end = 0.0;
    double dt = 1e-2;

    // Horizon default when none is given: twice the failure time.
    static double default_horizon(const std::optional<LinkFailure>& failure) {
        return failure ? 2.0 * failure->time : 10.0;
    }
};

struct Trace {
    std::vector<double> times;
    std::vector<RealVector> states;
    std::optional<double> failure_time;

    std::size_t agent_count() const { return states.empty() ? 0 : static_cast<std::size_t>(states.front().size()); }
    std::size_t sample_count() const noexcept { return times.size(); }

    // Index of the sample at exactly t (within a tiny relative tolerance), if any.
    std::optional<std::size_t> find_sample(double t) const;
};

inline constexpr double kAdmissibilityTolerance = 1e-12;

// Samples x(t) on {0, dt, 2dt, ..., t_end}. A configured failure switches the
// generator from -L(G1) to -L(G2) at t_f; t_f is a sample of its own (snapped
// onto the grid when it falls within 1e-9 dt of a grid point).
Trace simulate(const Scenario& s);

// k-th right derivative of x_p when the state is x under topology g:
// sigma(p)^T (-L(g))^k x.
double analytic_derivative(const Digraph& g, const RealVector& x, Vertex p, std::size_t k);

// CSV with header `t,x1,...,xn` and 17 significant digits.
void write_trace_csv(std::ostream& out, const Trace& trace);
Trace read_trace_csv(std::istream& in);

}  // namespace link_sentinel
