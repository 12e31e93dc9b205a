#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "link_sentinel/config.hpp"
#include "link_sentinel/dynamics.hpp"
#include "link_sentinel/fdi.hpp"
#include "link_sentinel/graph.hpp"
#include "link_sentinel/jumps.hpp"
#include "link_sentinel/placement.hpp"
#include "test_support.hpp"

using namespace link_sentinel;
using link_sentinel::testing::cycle5;
using link_sentinel::testing::random_digraph;
using link_sentinel::testing::random_distinct_state;
using link_sentinel::testing::star5;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

struct Criterion {
    int id;
    std::string title;
    double budget_seconds;  // 0 = no runtime bound
    std::function<Outcome()> body;
};

std::string join(const std::vector<Vertex>& v) {
    std::ostringstream s;
    s << '{';
    for (std::size_t i = 0; i < v.size(); ++i) {
        s << (i ? "," : "") << v[i];
    }
    s << '}';
    return s.str();
}

Outcome theorem_exactness() {
    std::mt19937_64 rng(1001);
    std::size_t finite = 0;
    std::size_t failed = 0;
    std::size_t zero_checks = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 8)(rng);
        const Digraph g = random_digraph(rng, n, 0.3);
        const auto x0 = random_distinct_state(rng, n);
        for (const TheoremCheck& c : verify_all(g, std::span<const Integer>(x0))) {
            if (c.vacuous) {
                continue;
            }
            ++finite;
            zero_checks += c.order.value();
            failed += c.passed ? 0 : 1;
        }
    }
    std::ostringstream d;
    d << finite << " finite-distance pairs, " << zero_checks << " vanishing orders checked, " << failed
      << " mismatches";
    return {failed == 0 && finite > 0, d.str()};
}

Outcome walk_weight_oracle() {
    std::mt19937_64 rng(2002);
    std::size_t entries = 0;
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 6)(rng);
        const Digraph looped = with_self_loops(random_digraph(rng, n, 0.3));
        const IntMatrix w = negative_laplacian(looped);
        IntMatrix power = IntMatrix::identity(n);
        for (std::size_t k = 0; k <= 5; ++k) {
            for (Vertex s = 1; s <= n; ++s) {
                for (Vertex p = 1; p <= n; ++p) {
                    const Rational phi(walk_weight_sum(enumerate_walks(looped, s, p, k), w));
                    mismatches += phi == Rational(power(p - 1, s - 1)) ? 0 : 1;
                    ++entries;
                }
            }
            power = w * power;
        }
    }
    std::ostringstream d;
    d << entries << " (p, s, k) entries, " << mismatches << " mismatches";
    return {mismatches == 0, d.str()};
}

Outcome cycle_relation_matrix() {
    const std::vector<std::vector<std::size_t>> expected = {
        {0, 4, 3, 2, 1}, {1, 0, 4, 3, 2}, {2, 1, 0, 4, 3}, {3, 2, 1, 0, 4}, {4, 3, 2, 1, 0},
    };
    const auto rows = relation_matrix(cycle5(), 4).to_rows();
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
            wrong += rows[i][j] == expected[i][j] ? 0 : 1;
        }
    }
    return {wrong == 0, std::to_string(25 - wrong) + "/25 entries equal"};
}

Outcome star_results() {
    const PlacementResult detection = greedy_detection_placement(star5(), 4);
    const PlacementResult isolation = greedy_isolation_placement(star5(), 4);
    const std::size_t f_i = resolution_deficit(star5(), SensorSet::of({1, 2, 3, 4, 5}), 4);
    const bool ok = detection.solved() && detection.sensors->vertices == std::vector<Vertex>{5} &&
                    !isolation.solved() && f_i == 4;
    std::ostringstream d;
    d << "detection " << (detection.solved() ? join(detection.sensors->vertices) : "EMPTY") << ", isolation "
      << (isolation.solved() ? join(isolation.sensors->vertices) : "EMPTY") << ", f_I(V) = " << f_i;
    return {ok, d.str()};
}

Outcome cycle_placement() {
    std::size_t good = 0;
    for (Vertex a = 1; a <= 5; ++a) {
        for (Vertex b = a + 1; b <= 5; ++b) {
            const SensorSet m = SensorSet::of({a, b});
            good += coverage_deficit(cycle5(), m, 4) == 0 && resolution_deficit(cycle5(), m, 4) == 0 ? 1 : 0;
        }
    }
    const PlacementResult isolation = greedy_isolation_placement(cycle5(), 4);
    const bool sized = isolation.solved() && isolation.sensors->size() == 2;
    std::ostringstream d;
    d << good << "/10 pairs cover and resolve, greedy isolation "
      << (isolation.solved() ? join(isolation.sensors->vertices) : "EMPTY");
    return {good == 10 && sized, d.str()};
}

Outcome figure_reproduction() {
    Scenario s;
    s.graph = cycle5();
    s.x0 = testing::ramp_state(5);
    s.failure = LinkFailure{{1, 2}, 5.0};
    s.t_end = 10.0;
    s.dt = 1e-2;
    const Trace trace = simulate(s);
    const RealVector& x = trace.states[*trace.find_sample(5.0)];
    const double gap = x[0] - x[1];

    // Jumps are right minus left limits, so a removed inflow shows up with
    // the sign of head minus tail.
    const auto at2 = estimate_jumps(trace, 2, 5.0, 4);
    const double err2 = std::abs(at2[0].jump + gap) / std::abs(gap);

    const auto at3 = estimate_jumps(trace, 3, 5.0, 4);
    const double predicted = predict_jump(cycle5(), Edge{1, 2}, 3, x).magnitude.convert_to<double>();
    const double err3 = std::abs(at3[1].jump + predicted) / std::abs(predicted);

    const bool ok = err2 <= 1e-3 && !at3[0].significant && at3[1].significant && err3 <= 1e-2;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "nu2 k=1 jump %.6g vs %.6g (rel err %.1e); nu3 k=1 %s; nu3 k=2 %s, jump %.6g vs %.6g (rel err %.1e)",
                  at2[0].jump, -gap, err2, at3[0].significant ? "significant" : "insignificant",
                  at3[1].significant ? "significant" : "insignificant", at3[1].jump, -predicted, err3);
    return {ok, buf};
}

Outcome closed_loop_sweep() {
    const Digraph g = cycle5();
    const auto sensors = greedy_isolation_placement(g, 4).sensors;
    if (!sensors) {
        return {false, "no isolating sensor set"};
    }
    std::size_t correct = 0;
    std::size_t total = 0;
    std::ostringstream d;
    d << "sensors " << join(sensors->vertices) << ";";
    for (const Edge& e : g.edges()) {
        Scenario s;
        s.graph = g;
        s.x0 = testing::ramp_state(5);
        s.failure = LinkFailure{e, 5.0};
        s.t_end = 10.0;
        const FdiReport report = analyze(g, *sensors, simulate(s), 5.0, 4);
        const bool detected = report.detected;
        const bool isolated = report.verdict.kind == VerdictKind::edge && *report.verdict.edge == e;
        correct += (detected ? 1 : 0) + (isolated ? 1 : 0);
        total += 2;
        d << ' ' << e.tail << "->" << e.head << (isolated ? " ok" : " MISS");
    }
    Scenario healthy;
    healthy.graph = g;
    healthy.x0 = testing::ramp_state(5);
    healthy.t_end = 10.0;
    const FdiReport quiet = analyze(g, *sensors, simulate(healthy), std::nullopt, 4);
    const bool healthy_ok = !quiet.detected && quiet.verdict.kind == VerdictKind::none;
    d << "; healthy " << (healthy_ok ? "quiet" : "FALSE ALARM") << "; " << correct << "/" << total
      << " detection+isolation verdicts correct";
    return {correct == total && healthy_ok, d.str()};
}

Outcome diminishing_returns() {
    std::mt19937_64 rng(8008);
    std::size_t violations_d = 0;
    std::size_t violations_i = 0;
    std::string first_i;
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(3, 7)(rng);
        const Digraph g = random_digraph(rng, n, 0.3);
        const std::size_t z = default_order_cap(g);
        std::vector<Vertex> perm;
        for (Vertex v = 1; v <= n; ++v) {
            perm.push_back(v);
        }
        std::shuffle(perm.begin(), perm.end(), rng);
        const std::size_t b = std::uniform_int_distribution<std::size_t>(1, n - 1)(rng);
        const std::size_t a = std::uniform_int_distribution<std::size_t>(0, b - 1)(rng);
        const std::vector<Vertex> small(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(a));
        const std::vector<Vertex> large(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(b));
        const Vertex v = perm[b];
        auto plus = [v](std::vector<Vertex> s) {
            s.push_back(v);
            return SensorSet::of(std::move(s));
        };
        auto gain = [&](auto f, const std::vector<Vertex>& base) {
            return static_cast<long>(f(g, SensorSet::of(base), z)) - static_cast<long>(f(g, plus(base), z));
        };
        auto fd = [](const Digraph& h, const SensorSet& m, std::size_t k) { return coverage_deficit(h, m, k); };
        auto fi = [](const Digraph& h, const SensorSet& m, std::size_t k) { return resolution_deficit(h, m, k); };
        violations_d += gain(fd, small) < gain(fd, large) ? 1 : 0;
        if (gain(fi, small) < gain(fi, large)) {
            if (violations_i++ == 0) {
                std::ostringstream s;
                s << " (first: trial " << trial << ", n=" << n << ", gain " << gain(fi, small) << " at "
                  << join(small) << " < " << gain(fi, large) << " at " << join(large) << ", v=" << v << ")";
                first_i = s.str();
            }
        }
    }
    std::ostringstream d;
    d << "f_D violations " << violations_d << "/100, f_I violations " << violations_i << "/100" << first_i;
    return {violations_d == 0 && violations_i == 0, d.str()};
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "jump prediction exact on 200 random digraphs", 30.0, theorem_exactness},
        {2, "walk-weight sums equal matrix powers", 60.0, walk_weight_oracle},
        {3, "5-cycle relation matrix", 0.0, cycle_relation_matrix},
        {4, "in-star placement", 0.0, star_results},
        {5, "5-cycle placement", 0.0, cycle_placement},
        {6, "5-cycle jumps after losing 1->2 at t=5", 5.0, figure_reproduction},
        {7, "closed-loop isolation sweep", 0.0, closed_loop_sweep},
        {8, "diminishing returns of f_D and f_I", 0.0, diminishing_returns},
    };
    int failures = 0;
    for (const Criterion& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = c.body();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = c.budget_seconds == 0.0 || seconds < c.budget_seconds;
        const bool passed = outcome.passed && in_time;
        failures += passed ? 0 : 1;
        char timing[64];
        if (c.budget_seconds > 0.0) {
            std::snprintf(timing, sizeof timing, "%.2f s, budget %.0f s", seconds, c.budget_seconds);
        } else {
            std::snprintf(timing, sizeof timing, "%.2f s", seconds);
        }
        std::cout << (passed ? "PASS" : "FAIL") << "  criterion " << c.id << ": " << c.title << " -- "
                  << outcome.detail << " [" << timing << "]\n";
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
              << " criteria passed\n";
    return failures == 0 ? 0 : 1;
}
