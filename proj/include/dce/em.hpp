/*
 * em.hpp - electromagnetic modes of the cavity
 *
 * TE modes reduce to the Dirichlet scalar problem along x and TM modes to the
 * Neumann one; every rate reported here comes from the scalar engine on the
 * same index triple. Only feasibility() works in SI units.
 */

#pragma once

#include "dce/msa.hpp"
#include "dce/spectrum.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace dce {

inline constexpr double kSpeedOfLight = 2.998e8;  // m/s

struct PolarizationVector {
    double alpha{0.0};
    double beta{0.0};
};

/// Unit transverse polarization with alpha ny/Ly + beta nz/Lz = 0; alpha >= 0,
/// beta > 0 when alpha = 0.
[[nodiscard]] PolarizationVector polarization(const ModeIndex& mode, const CavityGeometry& geom);

struct EmPrediction {
    ModeIndex mode;
    Boundary scalar_kind{Boundary::Neumann};
    std::vector<ModeIndex> component;
    double rate{0.0};            // lambda_max per unit slow time
    double photon_exponent{0.0}; // 2 lambda_max, coefficient of epsilon t in log N
    std::function<double(double)> photon_curve;  // epsilon t -> <N> of this mode
};

/// Requires Omega = 2 omega(mode); throws ValidationError otherwise.
[[nodiscard]] EmPrediction em_prediction(const ModeIndex& mode, const CavityGeometry& geom,
                                         double tol_res = kDefaultResonanceTol);

/// TE and TM modes parametrically resonant with the drive.
[[nodiscard]] std::vector<ModeIndex> resonant_em_modes(const CavityGeometry& geom,
                                                       double tol_res = kDefaultResonanceTol);

struct FeasibilityInput {
    double L{0.1};           // reference length in meters; the geometry is in units of L
    double delta_max{1e-2};  // largest relative deformation the wall material sustains
    double v_sound{5e3};     // m/s
    double duration{1.0};    // s
    double epsilon{1e-9};    // requested drive amplitude
};

void validate(const FeasibilityInput& input);

struct FeasibilityReport {
    ModeIndex mode;
    double omega_rad_s{0.0};  // drive frequency 2 omega
    double omega_hz{0.0};
    double epsilon_max{0.0};
    double epsilon{0.0};
    double epsilon_t{0.0};  // epsilon times duration in units of L / c
    bool epsilon_exceeds_max{false};
    std::optional<PolarizationVector> polarization;
    std::optional<double> te_photons;  // absent when the triple has no TE mode
    std::optional<double> tm_photons;
};

/// Drive tuned to 2 omega of `mode` (kind ignored, both polarizations reported).
[[nodiscard]] FeasibilityReport feasibility(const FeasibilityInput& input, const ModeIndex& mode,
                                            const CavityGeometry& geom);

}  // namespace dce
