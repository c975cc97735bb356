#include "linklab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace linklab {

// Legendre roots by Newton iteration started from the Chebyshev estimate.
static GaussRule make_rule(int n) {
    GaussRule r;
    r.node.resize(n);
    r.weight.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) * x * p1 - j * p2) / (j + 1);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.node[i] = -x;
        r.node[n - 1 - i] = x;
        r.weight[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        r.weight[n - 1 - i] = r.weight[i];
    }
    return r;
}

const GaussRule& gauss_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_rule: order must be >= 1");
    static std::map<int, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_rule(n)).first;
    return it->second;
}

CompositeRule composite_rule(double a, double b, int panels, int order) {
    if (panels < 1) throw std::invalid_argument("composite_rule: panels must be >= 1");
    const GaussRule& g = gauss_rule(order);
    CompositeRule r;
    r.node.reserve(panels * order);
    r.weight.reserve(panels * order);
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        for (int j = 0; j < order; ++j) {
            r.node.push_back(lo + 0.5 * h * (g.node[j] + 1.0));
            r.weight.push_back(0.5 * h * g.weight[j]);
        }
    }
    return r;
}

CompositeRule composite_rule_broken(const std::vector<double>& breaks, int panels, int order) {
    if (breaks.size() < 2) throw std::invalid_argument("composite_rule_broken: need >= 2 breakpoints");
    CompositeRule r;
    for (std::size_t s = 0; s + 1 < breaks.size(); ++s) {
        CompositeRule part = composite_rule(breaks[s], breaks[s + 1], panels, order);
        r.node.insert(r.node.end(), part.node.begin(), part.node.end());
        r.weight.insert(r.weight.end(), part.weight.begin(), part.weight.end());
    }
    return r;
}

double integrate(const std::function<double(double)>& f, double a, double b, int panels, int order) {
    CompositeRule r = composite_rule(a, b, panels, order);
    double acc = 0.0;
    for (std::size_t i = 0; i < r.node.size(); ++i) acc += r.weight[i] * f(r.node[i]);
    return acc;
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::size_t nw = std::min<std::size_t>(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (std::size_t w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += nw) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace linklab
