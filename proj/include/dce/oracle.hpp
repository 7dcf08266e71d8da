/*
 * oracle.hpp - direct integration of the truncated mode equations
 *
 * Laboratory-time integration of
 *   Neumann:   Qdd_k + w_k(t)^2 Q_k = -2 lam sum g_jk Qd_j - lamd sum g_jk Q_j
 *                 - 2 lamd Lx^2 sum r_jk Qdd_j - sum Qd_j (r_jk lamdd Lx^2 - lam eta_jk)
 *                 - lam Lx^2 sum r_jk d/dt Qdd_j
 *   Dirichlet: Qdd_k + w_k(t)^2 Q_k = 2 lam sum g_kj Qd_j + lamd sum g_kj Q_j
 * with lam = Lx_dot / Lx. On the right-hand side Qdd_j and its derivative are
 * replaced by their zeroth-order values -w_j^2 Q_j and -w_j^2 Qd_j, which keeps
 * the system explicit and exact to O(epsilon).
 *
 * Each excitation label n is an independent initial-value problem started
 * from Q_k = delta_kn / sqrt(2 w_n), Qd_k = -i sqrt(w_n / 2) delta_kn.
 */

#pragma once

#include "dce/coupling.hpp"
#include "dce/msa.hpp"
#include "dce/spectrum.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace dce {

struct OracleControls {
    double rel_tol{1e-10};
    double abs_tol{1e-13};
    double initial_step{1e-3};
    std::size_t max_steps_per_sample{5'000'000};
    bool parallel{true};
    /// Excitation labels to integrate (positions in the basis); empty = all.
    std::vector<std::size_t> excitations;
};

class TruncatedSystem {
public:
    TruncatedSystem(std::vector<ModeIndex> basis, const CavityGeometry& geom, const GaugeProfile& gauge,
                    XNormalization norm);

    [[nodiscard]] const std::vector<ModeIndex>& basis() const { return basis_; }
    [[nodiscard]] const CavityGeometry& geometry() const { return geom_; }
    [[nodiscard]] Boundary bc() const { return bc_; }
    [[nodiscard]] const std::vector<double>& omegas() const { return omegas_; }
    [[nodiscard]] const CouplingMatrixSet& tables() const { return tables_; }
    [[nodiscard]] std::size_t size() const { return basis_.size(); }

    /// Second derivatives for real columns of Q and Qd (one column per real IVP).
    void acceleration(double t, const Eigen::Ref<const Eigen::MatrixXd>& Q, const Eigen::Ref<const Eigen::MatrixXd>& Qd,
                      Eigen::Ref<Eigen::MatrixXd> Qdd) const;

    /// Coefficient matrices of Q and Qd in the acceleration at time t, with
    /// the static -w_k(t)^2 term folded into the Q matrix.
    [[nodiscard]] std::pair<Eigen::MatrixXd, Eigen::MatrixXd> linear_coefficients(double t) const;

private:
    std::vector<ModeIndex> basis_;
    CavityGeometry geom_;
    Boundary bc_;
    std::vector<double> omegas_;
    Eigen::VectorXd axial_;      // (nx pi)^2, divided by Lx(t)^2 at run time
    Eigen::VectorXd transverse_; // w^2 - axial / Lx0^2
    CouplingMatrixSet tables_;
    Eigen::MatrixXd gt_;   // (k, j) -> g_jk for Neumann, g_kj for Dirichlet
    Eigen::MatrixXd rw_;   // (k, j) -> r_jk w_j^2
    Eigen::MatrixXd r_;    // (k, j) -> r_jk
    Eigen::MatrixXd eta_;  // (k, j) -> eta_jk
};

[[nodiscard]] TruncatedSystem assemble_reduced_ode(const std::vector<ModeIndex>& basis, const CavityGeometry& geom,
                                                   const GaugeProfile& gauge = default_gauge(),
                                                   XNormalization norm = XNormalization::Uniform);

/// Modes sharing the component's transverse indices with x-index up to
/// factor * (largest component x-index), at least `min_x`, plus the component.
[[nodiscard]] std::vector<ModeIndex> oracle_basis(const std::vector<ModeIndex>& component, double factor = 4.0,
                                                  int min_x = 4);

struct ModeState {
    std::vector<Complex> Q;
    std::vector<Complex> Qdot;
};

[[nodiscard]] ModeState vacuum_state(const TruncatedSystem& sys, std::size_t excitation);

struct Trajectory {
    std::vector<double> times;
    std::vector<ModeState> states;
};

/// Integrate from t = 0 and record the state at each sample time (ascending, >= 0).
[[nodiscard]] Trajectory integrate(const TruncatedSystem& sys, const ModeState& initial,
                                   std::span<const double> sample_times, const OracleControls& controls = {});

/// One trajectory per excitation label from vacuum data, run concurrently.
[[nodiscard]] std::vector<Trajectory> integrate_excitations(const TruncatedSystem& sys,
                                                            std::span<const double> sample_times,
                                                            const OracleControls& controls = {});

/// Sample grid of whole drive periods up to t_final (rounded down to a period).
[[nodiscard]] std::vector<double> drive_period_grid(const CavityGeometry& geom, double t_final,
                                                    std::size_t periods_per_sample = 1);

struct BogoliubovState {
    std::vector<std::size_t> excitations;  // basis positions n
    std::vector<std::vector<Complex>> A;   // [n][k]
    std::vector<std::vector<Complex>> B;   // [n][k]
    double t_final{0.0};
};

/// A = (Qd + i w Q) e^{-i w t} / 2iw, B = (i w Q - Qd) e^{i w t} / 2iw.
[[nodiscard]] std::pair<Complex, Complex> bogoliubov_pair(Complex Q, Complex Qdot, double omega, double t);

[[nodiscard]] BogoliubovState extract_bogoliubov(const TruncatedSystem& sys, const std::vector<std::size_t>& excitations,
                                                 const std::vector<ModeState>& states, double t);

/// sum_n 2 w_k |A_k^(n)|^2
[[nodiscard]] double photon_number(const BogoliubovState& bog, const TruncatedSystem& sys, std::size_t k);

/// sum_k 2 w_k (|B_k^(n)|^2 - |A_k^(n)|^2) for excitation slot `slot`; 1 for a unitary evolution.
[[nodiscard]] double bogoliubov_norm(const BogoliubovState& bog, const TruncatedSystem& sys, std::size_t slot);

struct PhotonSeries {
    std::vector<double> times;
    std::vector<std::vector<double>> photons;  // [sample][k]
};

[[nodiscard]] PhotonSeries photon_series(const TruncatedSystem& sys, std::span<const double> sample_times,
                                         const OracleControls& controls = {});

/// CSV with t and Re/Im of Q and Qd per mode, one row per sample.
void write_trajectory_csv(std::ostream& os, const TruncatedSystem& sys, const Trajectory& traj);

}  // namespace dce
