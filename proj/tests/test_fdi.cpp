#include "doctest.h"

#include <cmath>
#include <random>

#include "link_sentinel/fdi.hpp"
#include "link_sentinel/jumps.hpp"
#include "test_support.hpp"

using namespace link_sentinel;
using link_sentinel::testing::cycle5;
using link_sentinel::testing::ramp_state;

namespace {

Trace cycle_trace(std::optional<Edge> failed, double t_f = 5.0, double t_end = 10.0) {
    Scenario s;
    s.graph = cycle5();
    s.x0 = ramp_state(5);
    s.t_end = t_end;
    s.dt = 1e-2;
    if (failed) {
        s.failure = LinkFailure{*failed, t_f};
    }
    return simulate(s);
}

const JumpObservation& at_order(const std::vector<JumpObservation>& obs, std::size_t k) {
    REQUIRE(k >= 1);
    REQUIRE(k <= obs.size());
    return obs[k - 1];
}

}  // namespace

TEST_CASE("Fornberg weights reproduce textbook stencils") {
    const std::vector<double> central = {-1.0, 0.0, 1.0};
    const auto w = finite_difference_weights(0.0, central, 2);
    CHECK(w[0][1] == doctest::Approx(1.0));
    CHECK(w[1][0] == doctest::Approx(-0.5));
    CHECK(w[1][2] == doctest::Approx(0.5));
    CHECK(w[2][0] == doctest::Approx(1.0));
    CHECK(w[2][1] == doctest::Approx(-2.0));
    CHECK(w[2][2] == doctest::Approx(1.0));

    const std::vector<double> forward = {0.0, 0.5, 1.0};
    const auto f = finite_difference_weights(0.0, forward, 1);
    CHECK(f[1][0] == doctest::Approx(-3.0));
    CHECK(f[1][1] == doctest::Approx(4.0));
    CHECK(f[1][2] == doctest::Approx(-1.0));
}

TEST_CASE("Fornberg weights differentiate polynomials exactly on uneven nodes") {
    const std::vector<double> nodes = {0.3, 0.25, 0.2, 0.12, 0.05, -0.04};
    const double c = 0.3;
    // p(t) = sum a_j t^j of degree 5.
    const std::vector<double> a = {0.7, -1.2, 0.4, 2.0, -0.6, 0.9};
    auto deriv = [&](double t, std::size_t k) {
        double total = 0.0;
        for (std::size_t j = k; j < a.size(); ++j) {
            double falling = 1.0;
            for (std::size_t i = 0; i < k; ++i) {
                falling *= static_cast<double>(j - i);
            }
            total += a[j] * falling * std::pow(t, static_cast<double>(j - k));
        }
        return total;
    };
    const auto w = finite_difference_weights(c, nodes, 4);
    for (std::size_t k = 0; k <= 4; ++k) {
        double estimate = 0.0;
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            estimate += w[k][i] * deriv(nodes[i], 0);
        }
        CHECK(estimate == doctest::Approx(deriv(c, k)).epsilon(1e-8));
    }
}

TEST_CASE("Fornberg weights reject too few nodes") {
    const std::vector<double> nodes = {0.0, 1.0};
    CHECK_THROWS_AS(finite_difference_weights(0.0, nodes, 2), MonitorError);
}

TEST_CASE("one-sided estimates match analytic derivatives on a smooth trace") {
    const Trace trace = cycle_trace(std::nullopt);
    // Errors are measured against the largest k-th derivative on the trace.
    std::vector<double> scale(5, 0.0);
    for (const RealVector& x : trace.states) {
        for (Vertex p = 1; p <= 5; ++p) {
            for (std::size_t k = 1; k <= 4; ++k) {
                scale[k] = std::max(scale[k], std::abs(analytic_derivative(cycle5(), x, p, k)));
            }
        }
    }
    const std::vector<double> tolerance = {0.0, 1e-6, 1e-5, 1e-3, 1e-3};
    for (std::size_t i = 7; i + 7 < trace.sample_count(); i += 3) {
        const RealVector& x = trace.states[i];
        for (Vertex p = 1; p <= 5; ++p) {
            const auto obs = estimate_jumps(trace, p, trace.times[i], 4);
            for (std::size_t k = 1; k <= 4; ++k) {
                const double truth = analytic_derivative(cycle5(), x, p, k);
                const double tol = tolerance[k] * scale[k];
                CHECK(std::abs(at_order(obs, k).left_estimate - truth) < tol);
                CHECK(std::abs(at_order(obs, k).right_estimate - truth) < tol);
            }
        }
    }
}

TEST_CASE("a healthy trace is quiet at every interior instant") {
    const Trace trace = cycle_trace(std::nullopt);
    const SensorSet everyone = SensorSet::of({1, 2, 3, 4, 5});
    for (std::size_t i = 0; i < trace.sample_count(); i += 7) {
        const double t = trace.times[i];
        if (!can_estimate_at(trace, t, 4)) {
            continue;
        }
        for (Vertex p = 1; p <= 5; ++p) {
            for (const JumpObservation& o : estimate_jumps(trace, p, t, 4)) {
                CHECK_FALSE(o.significant);
            }
        }
    }
    CHECK_FALSE(scan_for_jump(trace, everyone, 4).has_value());
}

TEST_CASE("jumps after removing edge 1->2 at t = 5") {
    const Trace trace = cycle_trace(Edge{1, 2});
    const RealVector& x = trace.states[*trace.find_sample(5.0)];
    const double gap = x[0] - x[1];

    const auto at2 = estimate_jumps(trace, 2, 5.0, 4);
    CHECK(at_order(at2, 1).significant);
    // right - left, so the sign is opposite to tail - head.
    CHECK(at_order(at2, 1).jump == doctest::Approx(-gap).epsilon(1e-3));

    const auto at3 = estimate_jumps(trace, 3, 5.0, 4);
    CHECK_FALSE(at_order(at3, 1).significant);
    CHECK(at_order(at3, 2).significant);
    const JumpPrediction pred = predict_jump(cycle5(), Edge{1, 2}, 3, x);
    CHECK(at_order(at3, 2).jump == doctest::Approx(-pred.magnitude.convert_to<double>()).epsilon(1e-2));
}

TEST_CASE("lowest significant order follows the distance from the tail") {
    const Digraph g = cycle5();
    for (const Edge& e : g.edges()) {
        const Trace trace = cycle_trace(e);
        const RealVector& x = trace.states[*trace.find_sample(5.0)];
        for (Vertex p = 1; p <= 5; ++p) {
            const auto obs = estimate_jumps(trace, p, 5.0, 4);
            const JumpPrediction pred = predict_jump(cycle5(), e, p, x);
            const std::size_t d = pred.order.value();
            for (std::size_t k = 1; k < d; ++k) {
                CHECK_FALSE(at_order(obs, k).significant);
            }
            if (d >= 1 && at_order(obs, d).significant) {
                const double want = -pred.magnitude.convert_to<double>();
                CHECK(at_order(obs, d).jump == doctest::Approx(want).epsilon(2e-2));
            }
        }
    }
}

TEST_CASE("detect and isolate on the 5-cycle") {
    const SensorSet m = SensorSet::of({1, 2}, SensorPurpose::isolation);
    const Digraph g = cycle5();
    for (const Edge& e : g.edges()) {
        const Trace trace = cycle_trace(e);
        CHECK(detect(cycle5(), m, trace, 5.0, 4));
        const IsolationVerdict v = isolate(cycle5(), m, trace, 5.0, 4);
        REQUIRE(v.kind == VerdictKind::edge);
        CHECK(*v.edge == e);
    }
    const Trace healthy = cycle_trace(std::nullopt);
    CHECK_FALSE(detect(cycle5(), m, healthy, 5.0, 4));
    CHECK(isolate(cycle5(), m, healthy, 5.0, 4).kind == VerdictKind::none);
}

TEST_CASE("analyze finds the failure instant by scanning") {
    const SensorSet m = SensorSet::of({2, 3});
    const Digraph g = cycle5();
    for (const Edge& e : g.edges()) {
        const Trace trace = cycle_trace(e);
        const FdiReport report = analyze(cycle5(), m, trace, std::nullopt, 4);
        REQUIRE(report.t_star.has_value());
        CHECK(*report.t_star == doctest::Approx(5.0).epsilon(1e-12));
        CHECK(report.detected);
        REQUIRE(report.verdict.kind == VerdictKind::edge);
        CHECK(*report.verdict.edge == e);
        CHECK(report.evidence.size() == 8);
    }
    const FdiReport healthy = analyze(cycle5(), m, cycle_trace(std::nullopt), std::nullopt, 4);
    CHECK_FALSE(healthy.detected);
    CHECK_FALSE(healthy.t_star.has_value());
    CHECK(healthy.verdict.kind == VerdictKind::none);
}

TEST_CASE("an off-grid failure instant is still isolated") {
    const Trace trace = cycle_trace(Edge{3, 4}, 4.237, 8.0);
    const FdiReport report = analyze(cycle5(), SensorSet::of({1, 2}), trace, 4.237, 4);
    CHECK(report.detected);
    REQUIRE(report.verdict.kind == VerdictKind::edge);
    CHECK(*report.verdict.edge == Edge{3, 4});
}

TEST_CASE("a trace that ends before the failure is quiet") {
    const Trace trace = cycle_trace(Edge{1, 2});
    Trace truncated;
    for (std::size_t i = 0; i < trace.sample_count() && trace.times[i] < 4.0; ++i) {
        truncated.times.push_back(trace.times[i]);
        truncated.states.push_back(trace.states[i]);
    }
    const FdiReport report = analyze(cycle5(), SensorSet::of({1, 2}), truncated, 5.0, 4);
    CHECK_FALSE(report.detected);
    CHECK(report.verdict.kind == VerdictKind::none);
}

TEST_CASE("signature matching") {
    const RelationMatrix r(cycle5(), 4);
    const SensorSet m = SensorSet::of({2, 3});
    CHECK(match_signature(r, cycle5(), {{0, 2}, {0, 3}}, m).kind == VerdictKind::none);
    const IsolationVerdict hit = match_signature(r, cycle5(), {{1, 2}, {2, 3}}, m);
    REQUIRE(hit.kind == VerdictKind::edge);
    CHECK(*hit.edge == Edge{1, 2});
    CHECK(match_signature(r, cycle5(), {{1, 2}, {1, 3}}, m).kind == VerdictKind::ambiguous);

    // Every edge collides on the in-star, so any signature is ambiguous.
    const RelationMatrix star(testing::star5(), 4);
    CHECK(match_signature(star, testing::star5(), {{1, 5}}, SensorSet::of({5})).kind == VerdictKind::ambiguous);

    std::vector<JumpObservation> evidence(2);
    evidence[0] = {2, 1, 0.0, 0.0, 0.5, 0.1, true};
    evidence[1] = {3, 2, 0.0, 0.0, 0.5, 0.1, true};
    CHECK(observed_signature(evidence, m) == IndicatorSet{{1, 2}, {2, 3}});
}

TEST_CASE("monitor error paths") {
    const Trace trace = cycle_trace(Edge{1, 2});
    CHECK_THROWS_AS(estimate_jumps(trace, 2, 5.005, 4), MonitorError);
    CHECK_THROWS_AS(estimate_jumps(trace, 2, 0.02, 4), MonitorError);
    CHECK_THROWS_AS(estimate_jumps(trace, 6, 5.0, 4), MonitorError);
    CHECK_THROWS_AS(estimate_jumps(trace, 2, 5.0, 0), MonitorError);
    CHECK_FALSE(can_estimate_at(trace, 9.99, 4));
    CHECK(can_estimate_at(trace, 5.0, 4));
    CHECK_THROWS_AS(analyze(Digraph(4, {{1, 2}}), SensorSet::of({1}), trace, 5.0, 3), MonitorError);
}

TEST_CASE("a wider stride still isolates") {
    EstimatorOptions options;
    options.stride = 2;
    const Trace trace = cycle_trace(Edge{4, 5});
    const IsolationVerdict v = isolate(cycle5(), SensorSet::of({1, 2}), trace, 5.0, 4, options);
    REQUIRE(v.kind == VerdictKind::edge);
    CHECK(*v.edge == Edge{4, 5});
}
