#pragma once

#include <functional>
#include <span>

namespace dce {

struct QuadratureRule {
    std::span<const double> nodes;    // on [0, 1]
    std::span<const double> weights;
};

/// Gauss–Legendre rule of the given order mapped to [0, 1]. Rules are built
/// once and cached; the returned spans stay valid for the program lifetime.
[[nodiscard]] QuadratureRule gauss_legendre_unit(int order);

struct QuadratureControls {
    int start_order{16};
    int max_order{2048};
    double tolerance{1e-12};        // successive-estimate agreement for acceptance
    double failure_residual{1e-10};  // above this at max_order -> NumericalError
};

/// Integral over [0, 1] with order doubling until successive estimates agree.
[[nodiscard]] double integrate_unit(const std::function<double(double)>& f,
                                    const QuadratureControls& controls = {});

}  // namespace dce
