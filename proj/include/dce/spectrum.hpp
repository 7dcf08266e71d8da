/*
 * spectrum.hpp - rectangular cavity with one oscillating wall
 *
 * The wall at x = Lx moves as Lx(t) = Lx0 (1 + epsilon sin(Omega t)); the
 * other five walls are static. Units are c = 1 throughout, so frequencies
 * carry units of inverse length.
 *
 *   omega_n = pi sqrt((nx/Lx0)^2 + (ny/Ly)^2 + (nz/Lz)^2)
 *
 * Two modes k, j are resonantly coupled by the drive when they share the
 * transverse indices (ny, nz) and |omega_k +- omega_j| = Omega. A mode with
 * 2 omega_k = Omega is parametrically resonant with itself.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dce {

inline constexpr double kPi = 3.14159265358979323846;

/// Default relative band for resonance matching, |w_k +- w_j - Omega| <= tol * Omega.
inline constexpr double kDefaultResonanceTol = 1e-9;

struct CavityGeometry {
    double Lx0{1.0};
    double Ly{1.0};
    double Lz{1.0};
    double epsilon{0.0};
    double Omega{0.0};

    /// Lx(t) for the sinusoidal trajectory.
    [[nodiscard]] double Lx(double t) const;
    [[nodiscard]] double Lx_dot(double t) const;

    [[nodiscard]] static CavityGeometry cubic(double L, double epsilon = 0.0, double Omega = 0.0) {
        return {L, L, L, epsilon, Omega};
    }
};

/// Throws ValidationError unless all lengths are positive and 0 <= epsilon < 0.1.
void validate_dimensions(const CavityGeometry& geom);
/// validate_dimensions plus Omega > 0.
void validate_driven(const CavityGeometry& geom);

enum class FieldKind { DirichletScalar, NeumannScalar, TE, TM };

/// Scalar boundary problem along x that a field kind reduces to: TE and the
/// Dirichlet scalar are sine-type in x, TM and the Neumann scalar cosine-type.
enum class Boundary { Dirichlet, Neumann };

[[nodiscard]] Boundary boundary_of(FieldKind kind);
[[nodiscard]] std::string_view to_string(FieldKind kind);
[[nodiscard]] std::string_view to_string(Boundary bc);
/// Accepts dirichlet|neumann|te|tm (case-insensitive); throws ValidationError otherwise.
[[nodiscard]] FieldKind parse_field_kind(std::string_view text);

struct ModeIndex {
    int nx{0};
    int ny{0};
    int nz{0};
    FieldKind kind{FieldKind::NeumannScalar};

    [[nodiscard]] bool same_transverse(const ModeIndex& other) const {
        return ny == other.ny && nz == other.nz;
    }
    friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

[[nodiscard]] std::string to_string(const ModeIndex& mode);

/// Index validity rules per kind (see ModeIndex docs in the README).
[[nodiscard]] bool is_valid(const ModeIndex& mode);
void validate(const ModeIndex& mode);

/// Unperturbed angular frequency, evaluated at Lx = Lx0.
[[nodiscard]] double mode_frequency(const ModeIndex& mode, const CavityGeometry& geom);

/// Frequency with the instantaneous wall position Lx.
[[nodiscard]] double mode_frequency_at(const ModeIndex& mode, const CavityGeometry& geom, double Lx);

/// (nx pi / Lx0)^2, the part of omega^2 that depends on the moving wall.
[[nodiscard]] double axial_wavenumber_sq(const ModeIndex& mode, const CavityGeometry& geom);

/// All valid modes of a kind with omega <= cutoff, sorted by omega then (nx, ny, nz).
[[nodiscard]] std::vector<ModeIndex> enumerate_modes(FieldKind kind, const CavityGeometry& geom,
                                                     double omega_cutoff);

enum class ResonanceType { Sum, Difference };

struct ResonanceEdge {
    std::size_t a{0};
    std::size_t b{0};
    ResonanceType type{ResonanceType::Sum};
};

/// Modes coupled by the drive. Nodes are sorted by frequency; `parametric`
/// flags nodes with 2 omega = Omega.
struct ResonanceGraph {
    std::vector<ModeIndex> nodes;
    std::vector<ResonanceEdge> edges;
    std::vector<bool> parametric;

    /// Connected components as lists of node positions.
    [[nodiscard]] std::vector<std::vector<std::size_t>> components() const;
    [[nodiscard]] std::optional<std::size_t> find(const ModeIndex& mode) const;
    [[nodiscard]] bool is_singleton() const { return nodes.size() == 1; }
};

/// Classify the resonance between two modes, if any.
[[nodiscard]] std::optional<ResonanceType> resonance_between(const ModeIndex& k, const ModeIndex& j,
                                                             const CavityGeometry& geom, double tol);
[[nodiscard]] bool is_parametric(const ModeIndex& mode, const CavityGeometry& geom, double tol);

/// Connected component of the coupling graph containing `mode`. Chains are
/// followed through partners with omega <= omega_cutoff (default 16 Omega).
[[nodiscard]] ResonanceGraph resonance_partners(const ModeIndex& mode, const CavityGeometry& geom,
                                                double tol_res = kDefaultResonanceTol,
                                                std::optional<double> omega_cutoff = std::nullopt);

/// Coupling graph over an explicit mode set.
[[nodiscard]] ResonanceGraph build_resonance_graph(const std::vector<ModeIndex>& modes,
                                                   const CavityGeometry& geom,
                                                   double tol_res = kDefaultResonanceTol);

}  // namespace dce
