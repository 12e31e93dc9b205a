#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "link_sentinel/dynamics.hpp"
#include "link_sentinel/exact.hpp"
#include "link_sentinel/graph.hpp"

namespace link_sentinel {

enum class JumpVisibility {
    observable,   // finite order, nonzero magnitude
    silent,       // finite order but the predicted magnitude is zero
    at_tail,      // observer is the tail of the edge (distance 0)
    unreachable,  // tail cannot reach the observer
};

const char* to_string(JumpVisibility v);

// First derivative order at which an observer sees a failed edge, and the
// size of the jump there.
struct JumpPrediction {
    Edge edge;
    Vertex observer = 0;
    Distance order;
    // c_{order-1}(G1; head, observer); zero unless order >= 1.
    Integer walk_factor = 0;
    // walk_factor * (x_tail - x_head)
    Rational magnitude = 0;
    JumpVisibility visibility = JumpVisibility::unreachable;

    bool observable() const noexcept { return visibility == JumpVisibility::observable; }
};

// Difference of the k-th right derivatives at the observer between the healthy
// graph and the graph with e removed, from exact powers of the two negative
// Laplacians. Instantiated for Integer and Rational.
template <class Scalar>
Scalar nabla_direct(const Digraph& g1, const Edge& e, Vertex p, std::size_t k, std::span<const Scalar> x0);

// nabla_direct for every k in 0..max_k, sharing the repeated products.
template <class Scalar>
std::vector<Scalar> nabla_sequence(const Digraph& g1, const Edge& e, Vertex p, std::size_t max_k,
                                   std::span<const Scalar> x0);

JumpPrediction predict_jump(const Digraph& g1, const Edge& e, Vertex p, std::span<const Rational> x0);
JumpPrediction predict_jump(const Digraph& g1, const Edge& e, Vertex p, std::span<const Integer> x0);
JumpPrediction predict_jump(const Digraph& g1, const Edge& e, Vertex p, const RealVector& x0);

struct TheoremCheck {
    Edge edge;
    Vertex observer = 0;
    Distance order;
    bool passed = true;
    bool vacuous = false;               // order infinite (or beyond the cap)
    std::optional<std::size_t> failing_order;
    Rational expected = 0;
    Rational actual = 0;
};

// Checks that nabla_direct vanishes below the predicted order and equals the
// predicted magnitude at it. Orders above `order_cap` are not examined.
TheoremCheck verify_theorem(const Digraph& g1, const Edge& e, Vertex p, std::span<const Integer> x0,
                            std::optional<std::size_t> order_cap = std::nullopt);

// verify_theorem over every (edge, observer) pair.
std::vector<TheoremCheck> verify_all(const Digraph& g1, std::span<const Integer> x0,
                                     std::optional<std::size_t> order_cap = std::nullopt);

std::vector<Rational> to_rational(const RealVector& x);

}  // namespace link_sentinel
