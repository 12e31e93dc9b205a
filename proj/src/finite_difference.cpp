#include <algorithm>
#include <string>

#include "link_sentinel/fdi.hpp"

namespace link_sentinel {

// Fornberg, "Generation of finite difference formulas on arbitrarily spaced
// grids", Math. Comp. 51 (1988).
std::vector<std::vector<double>> finite_difference_weights(double center, std::span<const double> nodes,
                                                           std::size_t max_order) {
    const std::size_t count = nodes.size();
    if (count == 0) {
        throw MonitorError("finite-difference stencil needs at least one node");
    }
    if (count <= max_order) {
        throw MonitorError("a derivative of order " + std::to_string(max_order) + " needs more than " +
                           std::to_string(count) + " nodes");
    }
    // c[i][k]: weight of node i for derivative k.
    std::vector<std::vector<double>> c(count, std::vector<double>(max_order + 1, 0.0));
    double c1 = 1.0;
    double c4 = nodes[0] - center;
    c[0][0] = 1.0;
    for (std::size_t i = 1; i < count; ++i) {
        const std::size_t top = std::min(i, max_order);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = nodes[i] - center;
        for (std::size_t j = 0; j < i; ++j) {
            const double c3 = nodes[i] - nodes[j];
            if (c3 == 0.0) {
                throw MonitorError("finite-difference stencil has repeated nodes");
            }
            c2 *= c3;
            if (j == i - 1) {
                for (std::size_t k = top; k >= 1; --k) {
                    c[i][k] = c1 * (static_cast<double>(k) * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (std::size_t k = top; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - static_cast<double>(k) * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<std::vector<double>> by_order(max_order + 1, std::vector<double>(count, 0.0));
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t k = 0; k <= max_order; ++k) {
            by_order[k][i] = c[i][k];
        }
    }
    return by_order;
}

}  // namespace link_sentinel
