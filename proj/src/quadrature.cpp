#include "dce/quadrature.hpp"

#include "dce/errors.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fmt/format.h>

namespace dce {

namespace {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Newton iteration on P_n from the Chebyshev-like initial guess.
std::unique_ptr<Rule> build_rule(int n) {
    auto rule = std::make_unique<Rule>();
    rule->nodes.resize(static_cast<std::size_t>(n));
    rule->weights.resize(static_cast<std::size_t>(n));
    const double pi = 3.14159265358979323846;
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        const auto lo = static_cast<std::size_t>(i);
        const auto hi = static_cast<std::size_t>(n - 1 - i);
        rule->nodes[lo] = 0.5 * (1.0 - x);
        rule->nodes[hi] = 0.5 * (1.0 + x);
        rule->weights[lo] = 0.5 * w;
        rule->weights[hi] = 0.5 * w;
    }
    return rule;
}

}  // namespace

QuadratureRule gauss_legendre_unit(int order) {
    if (order < 1) throw ValidationError("quadrature order must be positive");
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<Rule>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = build_rule(order);
    return {slot->nodes, slot->weights};
}

double integrate_unit(const std::function<double(double)>& f, const QuadratureControls& controls) {
    auto apply = [&](int order) {
        const auto rule = gauss_legendre_unit(order);
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) sum += rule.weights[i] * f(rule.nodes[i]);
        return sum;
    };
    double previous = apply(controls.start_order);
    double residual = 0.0;
    for (int order = 2 * controls.start_order; order <= controls.max_order; order *= 2) {
        const double current = apply(order);
        residual = std::abs(current - previous);
        if (residual <= controls.tolerance * std::max(1.0, std::abs(current))) return current;
        previous = current;
    }
    if (residual > controls.failure_residual) {
        throw NumericalError(fmt::format("quadrature did not converge (residual {:.3e})", residual));
    }
    return previous;
}

}  // namespace dce
