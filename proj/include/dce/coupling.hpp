/*
 * coupling.hpp - intermode coefficients of the instantaneous-basis expansion
 *
 * All x-integrals are taken on the unit interval z = x / Lx0 with the
 * x-basis psi_n(z) = sqrt(2) cos(n pi z) (Neumann) or sqrt(2) sin(n pi z)
 * (Dirichlet); transverse factors reduce to Kronecker deltas.
 *
 *   g_jk   = int [-psi_j/2 - z psi_j'] psi_k                 (= Lx int dphi_j/dLx phi_k)
 *   r_jk   = int v psi_j psi_k
 *   eta_jk = int [(v'' - (w_j Lx0)^2 v) psi_j psi_k + 2 v' psi_j' psi_k]
 *
 * The gauge profile v(z) fixes the Neumann expansion through
 * g(x, t) = Lx_dot Lx v(x / Lx); physical results must not depend on it.
 */

#pragma once

#include "dce/spectrum.hpp"

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace dce {

class GaugeProfile {
public:
    /// Polynomial v(z) = sum_i c_i z^i. Throws ValidationError unless
    /// v(0) = v(1) = v'(0) = 0 and v'(1) = -1 to 1e-12.
    explicit GaugeProfile(std::vector<double> coefficients, std::string name = "custom");

    [[nodiscard]] double value(double z) const;
    [[nodiscard]] double first(double z) const;
    [[nodiscard]] double second(double z) const;

    [[nodiscard]] const std::vector<double>& coefficients() const { return coeffs_; }
    [[nodiscard]] const std::string& name() const { return name_; }

private:
    std::vector<double> coeffs_;
    std::string name_;
};

/// v(z) = (z^2 - z^4) / 2
[[nodiscard]] GaugeProfile default_gauge();
/// v(z) = z^2 - z^3
[[nodiscard]] GaugeProfile alt_gauge();

/// Normalization of the zero x-index Neumann function. Uniform keeps
/// sqrt(2/L) for every index, which is what the closed forms for g assume;
/// Orthonormal uses sqrt(1/L) for n = 0.
enum class XNormalization { Uniform, Orthonormal };

/// psi_n(z) and its z-derivative.
[[nodiscard]] double x_basis(Boundary bc, int n, double z, XNormalization norm = XNormalization::Uniform);
[[nodiscard]] double x_basis_derivative(Boundary bc, int n, double z,
                                        XNormalization norm = XNormalization::Uniform);
/// psi_n(1)^2 / 2 relative weight; 1 except for the orthonormal zero mode.
[[nodiscard]] double x_norm_factor(Boundary bc, int n, XNormalization norm);

/// Neumann g_jk (first index is the differentiated mode).
[[nodiscard]] double g_neumann(const ModeIndex& j, const ModeIndex& k);
/// Dirichlet g_kj; antisymmetric, zero on the diagonal.
[[nodiscard]] double g_dirichlet(const ModeIndex& k, const ModeIndex& j);

/// g_jk in the "first index differentiated" convention for either boundary,
/// closed form with the normalization applied.
[[nodiscard]] double g_coefficient(Boundary bc, const ModeIndex& j, const ModeIndex& k,
                                   XNormalization norm = XNormalization::Uniform);
/// Same quantity by quadrature of the defining integral.
[[nodiscard]] double g_defining_integral(Boundary bc, const ModeIndex& j, const ModeIndex& k,
                                         XNormalization norm = XNormalization::Uniform);

[[nodiscard]] double r_coeff(const ModeIndex& j, const ModeIndex& k, const GaugeProfile& v,
                             XNormalization norm = XNormalization::Uniform);
/// Dimensionless eta_jk with the Lx^2 prefactor evaluated at Lx0.
[[nodiscard]] double eta_coeff(const ModeIndex& j, const ModeIndex& k, const GaugeProfile& v,
                               const CavityGeometry& geom, XNormalization norm = XNormalization::Uniform);

/// [v' psi_j psi_k + v (psi_k psi_j' - psi_k' psi_j)] between z = 0 and 1.
[[nodiscard]] double identity_boundary_term(const ModeIndex& j, const ModeIndex& k, const GaugeProfile& v,
                                            XNormalization norm = XNormalization::Uniform);

struct IdentityResiduals {
    double divergence{0.0};  // |int (psi_k^2 v')' - boundary|
    double boundary{0.0};    // |(w_k Lx0)^2 r_jk + eta_jk - boundary|
};

inline constexpr double kIdentityThreshold = 1e-8;

/// Both residuals; throws NumericalError ("identity violation") above threshold.
[[nodiscard]] IdentityResiduals identity_residuals(const ModeIndex& j, const ModeIndex& k,
                                                   const GaugeProfile& v, const CavityGeometry& geom,
                                                   XNormalization norm = XNormalization::Uniform,
                                                   double threshold = kIdentityThreshold);

/// Coefficient tables over a basis, indexed (j, k) in basis order.
struct CouplingMatrixSet {
    std::vector<ModeIndex> basis;
    Boundary bc{Boundary::Neumann};
    Eigen::MatrixXd g;    // g(j, k) = g_jk
    Eigen::MatrixXd r;    // Neumann only, zero for Dirichlet
    Eigen::MatrixXd eta;  // Neumann only, zero for Dirichlet
};

[[nodiscard]] CouplingMatrixSet build_coupling_tables(const std::vector<ModeIndex>& basis,
                                                      const CavityGeometry& geom, const GaugeProfile& v,
                                                      XNormalization norm = XNormalization::Uniform);

}  // namespace dce
