#include "dce/coupling.hpp"

#include "dce/errors.hpp"
#include "dce/quadrature.hpp"

#include <cmath>

#include <fmt/format.h>

namespace dce {

namespace {

constexpr double kConstraintTol = 1e-12;
const double kSqrt2 = std::sqrt(2.0);

double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

void require_neumann(const ModeIndex& m) {
    validate(m);
    if (boundary_of(m.kind) != Boundary::Neumann) {
        throw ValidationError(fmt::format("{} is not a Neumann-type mode", to_string(m)));
    }
}

void require_boundary(Boundary bc, const ModeIndex& m) {
    validate(m);
    if (boundary_of(m.kind) != bc) {
        throw ValidationError(fmt::format("{} does not belong to the {} problem", to_string(m), to_string(bc)));
    }
}

}  // namespace

GaugeProfile::GaugeProfile(std::vector<double> coefficients, std::string name)
    : coeffs_(std::move(coefficients)), name_(std::move(name)) {
    const double v0 = value(0.0);
    const double v1 = value(1.0);
    const double d0 = first(0.0);
    const double d1 = first(1.0);
    if (std::abs(v0) > kConstraintTol || std::abs(v1) > kConstraintTol || std::abs(d0) > kConstraintTol ||
        std::abs(d1 + 1.0) > kConstraintTol) {
        throw ValidationError(fmt::format(
            "gauge profile '{}' violates v(0)=v(1)=v'(0)=0, v'(1)=-1 (got {}, {}, {}, {})", name_, v0, v1, d0, d1));
    }
}

double GaugeProfile::value(double z) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
    return acc;
}

double GaugeProfile::first(double z) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 1;) acc = acc * z + static_cast<double>(i) * coeffs_[i];
    return acc;
}

double GaugeProfile::second(double z) const {
    double acc = 0.0;
    for (std::size_t i = coeffs_.size(); i-- > 2;) acc = acc * z + static_cast<double>(i * (i - 1)) * coeffs_[i];
    return acc;
}

GaugeProfile default_gauge() { return GaugeProfile({0.0, 0.0, 0.5, 0.0, -0.5}, "default"); }

GaugeProfile alt_gauge() { return GaugeProfile({0.0, 0.0, 1.0, -1.0}, "alt"); }

double x_norm_factor(Boundary bc, int n, XNormalization norm) {
    return (bc == Boundary::Neumann && n == 0 && norm == XNormalization::Orthonormal) ? 1.0 / kSqrt2 : 1.0;
}

double x_basis(Boundary bc, int n, double z, XNormalization norm) {
    const double c = kSqrt2 * x_norm_factor(bc, n, norm);
    return bc == Boundary::Neumann ? c * std::cos(n * kPi * z) : c * std::sin(n * kPi * z);
}

double x_basis_derivative(Boundary bc, int n, double z, XNormalization norm) {
    const double c = kSqrt2 * x_norm_factor(bc, n, norm) * n * kPi;
    return bc == Boundary::Neumann ? -c * std::sin(n * kPi * z) : c * std::cos(n * kPi * z);
}

double g_neumann(const ModeIndex& j, const ModeIndex& k) {
    if (!j.same_transverse(k)) return 0.0;
    if (j.nx == k.nx) return -1.0;
    const double jx2 = static_cast<double>(j.nx) * j.nx;
    const double kx2 = static_cast<double>(k.nx) * k.nx;
    return parity(j.nx + k.nx) * 2.0 * jx2 / (kx2 - jx2);
}

double g_dirichlet(const ModeIndex& k, const ModeIndex& j) {
    if (!j.same_transverse(k) || j.nx == k.nx) return 0.0;
    const double jx = j.nx;
    const double kx = k.nx;
    return parity(j.nx + k.nx) * 2.0 * kx * jx / (jx * jx - kx * kx);
}

double g_coefficient(Boundary bc, const ModeIndex& j, const ModeIndex& k, XNormalization norm) {
    require_boundary(bc, j);
    require_boundary(bc, k);
    if (bc == Boundary::Dirichlet) return g_dirichlet(j, k);
    return x_norm_factor(bc, j.nx, norm) * x_norm_factor(bc, k.nx, norm) * g_neumann(j, k);
}

double g_defining_integral(Boundary bc, const ModeIndex& j, const ModeIndex& k, XNormalization norm) {
    require_boundary(bc, j);
    require_boundary(bc, k);
    if (!j.same_transverse(k)) return 0.0;
    return integrate_unit([&](double z) {
        const double dpsi_dL = -0.5 * x_basis(bc, j.nx, z, norm) - z * x_basis_derivative(bc, j.nx, z, norm);
        return dpsi_dL * x_basis(bc, k.nx, z, norm);
    });
}

double r_coeff(const ModeIndex& j, const ModeIndex& k, const GaugeProfile& v, XNormalization norm) {
    require_neumann(j);
    require_neumann(k);
    if (!j.same_transverse(k)) return 0.0;
    constexpr auto bc = Boundary::Neumann;
    return integrate_unit(
        [&](double z) { return v.value(z) * x_basis(bc, j.nx, z, norm) * x_basis(bc, k.nx, z, norm); });
}

double eta_coeff(const ModeIndex& j, const ModeIndex& k, const GaugeProfile& v, const CavityGeometry& geom,
                 XNormalization norm) {
    require_neumann(j);
    require_neumann(k);
    if (!j.same_transverse(k)) return 0.0;
    constexpr auto bc = Boundary::Neumann;
    const double wj = mode_frequency(j, geom) * geom.Lx0;
    return integrate_unit([&](double z) {
        const double pj = x_basis(bc, j.nx, z, norm);
        const double pk = x_basis(bc, k.nx, z, norm);
        const double dpj = x_basis_derivative(bc, j.nx, z, norm);
        return (v.second(z) - wj * wj * v.value(z)) * pj * pk + 2.0 * v.first(z) * dpj * pk;
    });
}

double identity_boundary_term(const ModeIndex& j, const ModeIndex& k, const GaugeProfile& v,
                              XNormalization norm) {
    constexpr auto bc = Boundary::Neumann;
    auto bracket = [&](double z) {
        const double pj = x_basis(bc, j.nx, z, norm);
        const double pk = x_basis(bc, k.nx, z, norm);
        const double dpj = x_basis_derivative(bc, j.nx, z, norm);
        const double dpk = x_basis_derivative(bc, k.nx, z, norm);
        return v.first(z) * pj * pk + v.value(z) * (pk * dpj - dpk * pj);
    };
    return bracket(1.0) - bracket(0.0);
}

IdentityResiduals identity_residuals(const ModeIndex& j, const ModeIndex& k, const GaugeProfile& v,
                                     const CavityGeometry& geom, XNormalization norm, double threshold) {
    require_neumann(j);
    require_neumann(k);
    if (!j.same_transverse(k)) {
        throw ValidationError("identity residuals need matched transverse indices");
    }
    constexpr auto bc = Boundary::Neumann;

    const double div_quad = integrate_unit([&](double z) {
        const double pk = x_basis(bc, k.nx, z, norm);
        const double dpk = x_basis_derivative(bc, k.nx, z, norm);
        return 2.0 * pk * dpk * v.first(z) + pk * pk * v.second(z);
    });
    auto edge = [&](double z) {
        const double pk = x_basis(bc, k.nx, z, norm);
        return pk * pk * v.first(z);
    };
    const double div_boundary = edge(1.0) - edge(0.0);

    const double wk = mode_frequency(k, geom) * geom.Lx0;
    const double lhs = wk * wk * r_coeff(j, k, v, norm) + eta_coeff(j, k, v, geom, norm);
    const double rhs = identity_boundary_term(j, k, v, norm);

    IdentityResiduals res{std::abs(div_quad - div_boundary), std::abs(lhs - rhs)};
    if (res.divergence > threshold || res.boundary > threshold) {
        throw NumericalError(fmt::format("identity violation for j={}, k={}, gauge {}: residuals {:.3e}, {:.3e}",
                                         to_string(j), to_string(k), v.name(), res.divergence, res.boundary));
    }
    return res;
}

CouplingMatrixSet build_coupling_tables(const std::vector<ModeIndex>& basis, const CavityGeometry& geom,
                                        const GaugeProfile& v, XNormalization norm) {
    if (basis.empty()) throw ValidationError("coupling tables need a non-empty basis");
    CouplingMatrixSet set;
    set.basis = basis;
    set.bc = boundary_of(basis.front().kind);
    const auto n = static_cast<Eigen::Index>(basis.size());
    set.g = Eigen::MatrixXd::Zero(n, n);
    set.r = Eigen::MatrixXd::Zero(n, n);
    set.eta = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            const auto& j = basis[static_cast<std::size_t>(a)];
            const auto& k = basis[static_cast<std::size_t>(b)];
            set.g(a, b) = g_coefficient(set.bc, j, k, norm);
            if (set.bc == Boundary::Neumann) {
                set.r(a, b) = b >= a ? r_coeff(j, k, v, norm) : set.r(b, a);
                set.eta(a, b) = eta_coeff(j, k, v, geom, norm);
            }
        }
    }
    return set;
}

}  // namespace dce
