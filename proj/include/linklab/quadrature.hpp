#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace linklab {

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> node;
    std::vector<double> weight;
};

/// Returns the n-point rule, computed once and cached. n >= 1.
const GaussRule& gauss_rule(int n);

/// Nodes/weights of a composite rule: `panels` equal panels on [a, b],
/// `order`-point Gauss-Legendre on each.
struct CompositeRule {
    std::vector<double> node;
    std::vector<double> weight;
};

CompositeRule composite_rule(double a, double b, int panels, int order);

/// Composite rule on [0, 1] split at the given breakpoints (sorted, including
/// 0 and 1), with `panels` x `order` points per subinterval. Used for
/// piecewise-smooth integrands such as polyline loops.
CompositeRule composite_rule_broken(const std::vector<double>& breaks, int panels, int order);

double integrate(const std::function<double(double)>& f, double a, double b, int panels, int order);

/// Runs fn(i) for i in [0, n). Plain loop when workers <= 1. Results must be
/// written to disjoint slots by index so the outcome is order-independent.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace linklab
