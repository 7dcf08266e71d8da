/*
 * msa.hpp - multiple-scale analysis of the resonant mode equations
 *
 * With tau = epsilon t and Q_k ~ A_k(tau) e^{i w_k t} + B_k(tau) e^{-i w_k t},
 * removing secular terms yields the linear slow-time system dv/dtau = M v on
 * the stacked vector v = (A_1, B_1, A_2, B_2, ...). Photon numbers follow
 * from N_k = sum_n 2 w_k |A_k^(n)|^2 with vacuum data B_k^(n)(0) = delta_kn / sqrt(2 w_n).
 *
 * Two assemblies are provided:
 *   Printed          closed-form resonance coefficients (Neumann) and their
 *                    Dirichlet analog; reproduces the published examples.
 *   FromCoefficients projection of the reduced mode equations using the
 *                    quadrature tables g, r, eta for a given gauge profile.
 * They coincide unless a coupled pair has odd jx + kx (see README).
 */

#pragma once

#include "dce/coupling.hpp"
#include "dce/spectrum.hpp"

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace dce {

using Complex = std::complex<double>;

enum class SecularConvention { Printed, FromCoefficients };

struct SecularOptions {
    SecularConvention convention{SecularConvention::Printed};
    double tol_res{kDefaultResonanceTol};
    // FromCoefficients only
    GaugeProfile gauge{default_gauge()};
    XNormalization normalization{XNormalization::Uniform};
};

struct SecularSystem {
    std::vector<ModeIndex> modes;
    std::vector<double> omegas;
    Boundary bc{Boundary::Neumann};
    double Omega{0.0};
    Eigen::MatrixXcd M;  // 2n x 2n, rows/cols (A_0, B_0, A_1, B_1, ...)

    [[nodiscard]] std::size_t size() const { return modes.size(); }
};

[[nodiscard]] SecularSystem secular_matrix(const std::vector<ModeIndex>& component, const CavityGeometry& geom,
                                           Boundary bc, const SecularOptions& options = {});
[[nodiscard]] SecularSystem secular_matrix(const ResonanceGraph& component, const CavityGeometry& geom,
                                           Boundary bc, const SecularOptions& options = {});

struct GrowthRates {
    std::vector<Complex> eigenvalues;  // sorted by descending real part
    double lambda_max{0.0};
    /// Block closed form for one- and two-mode systems.
    std::optional<std::vector<Complex>> closed_form;
};

[[nodiscard]] GrowthRates growth_rates(const SecularSystem& sys);

/// Four eigenvalues (+-a +- sqrt(a^2 + 4bc)) / (4 w_k) of the two-mode matrix
/// (1/2w_k)[[0,a,b,0],[a,0,0,b],[c,0,0,0],[0,c,0,0]].
[[nodiscard]] std::vector<Complex> two_mode_eigenvalues(double a, double b, double c, double omega_k);

/// lambda_N = (w^2 + w_p^2) / 2w or lambda_D = (w^2 - w_p^2) / 2w with
/// w_p^2 = w^2 - (kx pi / Lx0)^2. Requires Omega = 2w.
[[nodiscard]] double uncoupled_rate(const ModeIndex& mode, const CavityGeometry& geom, Boundary bc,
                                    double tol_res = kDefaultResonanceTol);

struct SlowAmplitudes {
    std::vector<Complex> A;
    std::vector<Complex> B;
    double tau{0.0};
};

/// A = 0, B_k = delta_kn / sqrt(2 w_n).
[[nodiscard]] SlowAmplitudes vacuum_amplitudes(const SecularSystem& sys, std::size_t excitation);

[[nodiscard]] SlowAmplitudes evolve_secular(const SecularSystem& sys, const SlowAmplitudes& initial, double tau);

enum class ExpmMethod { Automatic, Eigen, Pade };

inline constexpr double kEigenConditionLimit = 1e8;

/// exp(M), by eigendecomposition when the eigenvector matrix is well
/// conditioned (Automatic), or by scaling and squaring with a [8/8] Pade
/// approximant.
[[nodiscard]] Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& M, ExpmMethod method = ExpmMethod::Automatic);

/// N_k(tau) for every component mode, summed over component excitations.
[[nodiscard]] std::vector<double> msa_photon_numbers(const SecularSystem& sys, double tau);

}  // namespace dce
