#include "link_sentinel/jumps.hpp"

#include <algorithm>
#include <sstream>

namespace link_sentinel {

const char* to_string(JumpVisibility v) {
    switch (v) {
        case JumpVisibility::observable: return "observable";
        case JumpVisibility::silent: return "silent";
        case JumpVisibility::at_tail: return "at_tail";
        case JumpVisibility::unreachable: return "unreachable";
    }
    return "unknown";
}

namespace {

// Row-compressed copy of an integer matrix; consensus generators are sparse.
class SparseRows {
public:
    explicit SparseRows(const IntMatrix& m) : rows_(m.size()) {
        for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::size_t j = 0; j < m.size(); ++j) {
                if (m(i, j) != 0) {
                    rows_[i].push_back({j, m(i, j)});
                }
            }
        }
    }

    template <class Scalar>
    std::vector<Scalar> apply(const std::vector<Scalar>& x) const {
        std::vector<Scalar> y(rows_.size(), Scalar(0));
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            for (const auto& [col, value] : rows_[i]) {
                y[i] += Scalar(value) * x[col];
            }
        }
        return y;
    }

private:
    struct Entry {
        std::size_t col;
        Integer value;
    };
    std::vector<std::vector<Entry>> rows_;
};

void require_edge(const Digraph& g, const Edge& e) {
    if (!g.contains(e)) {
        std::ostringstream msg;
        msg << "edge " << e << " is not in the healthy digraph";
        throw GraphError(msg.str());
    }
}

template <class Scalar>
void require_state(const Digraph& g, std::span<const Scalar> x0) {
    if (x0.size() != g.vertex_count()) {
        throw GraphError("initial state has " + std::to_string(x0.size()) + " entries, expected " +
                         std::to_string(g.vertex_count()));
    }
}

// Rows (-L)^k x for k = 0..max_k, observed at every vertex.
template <class Scalar>
std::vector<std::vector<Scalar>> derivative_rows(const SparseRows& generator, std::span<const Scalar> x0,
                                                 std::size_t max_k) {
    std::vector<std::vector<Scalar>> out;
    out.reserve(max_k + 1);
    out.emplace_back(x0.begin(), x0.end());
    for (std::size_t k = 1; k <= max_k; ++k) {
        out.push_back(generator.apply(out.back()));
    }
    return out;
}

// Number of length-k walks from `from` to every vertex, for k = 0..max_k.
std::vector<std::vector<Integer>> walk_counts_from(const Digraph& g, Vertex from, std::size_t max_k) {
    const SparseRows a(adjacency(g));
    std::vector<Integer> start(g.vertex_count(), Integer(0));
    start[from - 1] = 1;
    return derivative_rows<Integer>(a, start, max_k);
}

JumpPrediction predict_from_counts(const Digraph& g1, const Edge& e, Vertex p, const Rational& tail_minus_head) {
    JumpPrediction pred;
    pred.edge = e;
    pred.observer = p;
    pred.order = distance(g1, e.tail, p);
    if (!pred.order.is_finite()) {
        pred.visibility = JumpVisibility::unreachable;
        return pred;
    }
    const std::size_t k = pred.order.value();
    if (k == 0) {
        pred.visibility = JumpVisibility::at_tail;
        return pred;
    }
    pred.walk_factor = walk_counts_from(g1, e.head, k - 1)[k - 1][p - 1];
    pred.magnitude = Rational(pred.walk_factor) * tail_minus_head;
    pred.visibility = pred.magnitude != 0 ? JumpVisibility::observable : JumpVisibility::silent;
    return pred;
}

}  // namespace

template <class Scalar>
std::vector<Scalar> nabla_sequence(const Digraph& g1, const Edge& e, Vertex p, std::size_t max_k,
                                   std::span<const Scalar> x0) {
    require_edge(g1, e);
    g1.check_vertex(p);
    require_state(g1, x0);
    const SparseRows healthy(negative_laplacian(g1));
    const SparseRows faulty(negative_laplacian(remove_edge(g1, e)));
    std::vector<Scalar> y1(x0.begin(), x0.end());
    std::vector<Scalar> y2 = y1;
    std::vector<Scalar> out;
    out.reserve(max_k + 1);
    for (std::size_t k = 0;; ++k) {
        out.push_back(y1[p - 1] - y2[p - 1]);
        if (k == max_k) {
            break;
        }
        y1 = healthy.apply(y1);
        y2 = faulty.apply(y2);
    }
    return out;
}

template <class Scalar>
Scalar nabla_direct(const Digraph& g1, const Edge& e, Vertex p, std::size_t k, std::span<const Scalar> x0) {
    return nabla_sequence<Scalar>(g1, e, p, k, x0).back();
}

template std::vector<Integer> nabla_sequence<Integer>(const Digraph&, const Edge&, Vertex, std::size_t,
                                                      std::span<const Integer>);
template std::vector<Rational> nabla_sequence<Rational>(const Digraph&, const Edge&, Vertex, std::size_t,
                                                        std::span<const Rational>);
template Integer nabla_direct<Integer>(const Digraph&, const Edge&, Vertex, std::size_t, std::span<const Integer>);
template Rational nabla_direct<Rational>(const Digraph&, const Edge&, Vertex, std::size_t,
                                         std::span<const Rational>);

JumpPrediction predict_jump(const Digraph& g1, const Edge& e, Vertex p, std::span<const Rational> x0) {
    require_edge(g1, e);
    g1.check_vertex(p);
    require_state(g1, x0);
    return predict_from_counts(g1, e, p, x0[e.tail - 1] - x0[e.head - 1]);
}

JumpPrediction predict_jump(const Digraph& g1, const Edge& e, Vertex p, std::span<const Integer> x0) {
    require_edge(g1, e);
    g1.check_vertex(p);
    require_state(g1, x0);
    return predict_from_counts(g1, e, p, Rational(x0[e.tail - 1] - x0[e.head - 1]));
}

JumpPrediction predict_jump(const Digraph& g1, const Edge& e, Vertex p, const RealVector& x0) {
    const std::vector<Rational> exact = to_rational(x0);
    return predict_jump(g1, e, p, std::span<const Rational>(exact));
}

std::vector<Rational> to_rational(const RealVector& x) {
    std::vector<Rational> out;
    out.reserve(static_cast<std::size_t>(x.size()));
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        out.emplace_back(x[i]);  // doubles are dyadic rationals; conversion is exact
    }
    return out;
}

namespace {

TheoremCheck check_pair(const Digraph& g1, const Edge& e, Vertex p, std::span<const Integer> x0,
                        const std::vector<std::vector<Integer>>& healthy_rows,
                        const std::vector<std::vector<Integer>>& faulty_rows, std::optional<std::size_t> order_cap) {
    TheoremCheck check;
    check.edge = e;
    check.observer = p;
    const JumpPrediction pred = predict_jump(g1, e, p, x0);
    check.order = pred.order;
    if (!pred.order.is_finite() || (order_cap && pred.order.value() > *order_cap)) {
        check.vacuous = true;
        return check;
    }
    const std::size_t order = pred.order.value();
    for (std::size_t k = 0; k <= order; ++k) {
        const Integer nabla = healthy_rows[k][p - 1] - faulty_rows[k][p - 1];
        // At the tail itself (order 0) the prediction carries magnitude zero:
        // both systems start from the same state.
        const Rational expected = k < order ? Rational(0) : pred.magnitude;
        if (Rational(nabla) != expected || k == order) {
            check.expected = expected;
            check.actual = Rational(nabla);
        }
        if (Rational(nabla) != expected) {
            check.passed = false;
            check.failing_order = k;
            return check;
        }
    }
    return check;
}

}  // namespace

TheoremCheck verify_theorem(const Digraph& g1, const Edge& e, Vertex p, std::span<const Integer> x0,
                            std::optional<std::size_t> order_cap) {
    require_edge(g1, e);
    g1.check_vertex(p);
    require_state(g1, x0);
    const Distance order = distance(g1, e.tail, p);
    const std::size_t max_k = order.is_finite() ? order.value() : 0;
    const auto healthy = derivative_rows<Integer>(SparseRows(negative_laplacian(g1)), x0, max_k);
    const auto faulty = derivative_rows<Integer>(SparseRows(negative_laplacian(remove_edge(g1, e))), x0, max_k);
    return check_pair(g1, e, p, x0, healthy, faulty, order_cap);
}

std::vector<TheoremCheck> verify_all(const Digraph& g1, std::span<const Integer> x0,
                                     std::optional<std::size_t> order_cap) {
    require_state(g1, x0);
    const std::size_t n = g1.vertex_count();
    // Distances never exceed n - 1, so that many products cover every order.
    const std::size_t max_k = n == 0 ? 0 : n - 1;
    const auto healthy = derivative_rows<Integer>(SparseRows(negative_laplacian(g1)), x0, max_k);
    std::vector<TheoremCheck> out;
    out.reserve(g1.edge_count() * n);
    for (const Edge& e : g1.edges()) {
        const auto faulty = derivative_rows<Integer>(SparseRows(negative_laplacian(remove_edge(g1, e))), x0, max_k);
        for (Vertex p = 1; p <= n; ++p) {
            out.push_back(check_pair(g1, e, p, x0, healthy, faulty, order_cap));
        }
    }
    return out;
}

}  // namespace link_sentinel
