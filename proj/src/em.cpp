#include "dce/em.hpp"

#include "dce/errors.hpp"

#include <cmath>
#include <memory>

#include <fmt/format.h>

namespace dce {

namespace {

void require_em(const ModeIndex& mode) {
    if (mode.kind != FieldKind::TE && mode.kind != FieldKind::TM)
        throw ValidationError(fmt::format("{} is not an electromagnetic mode", to_string(mode)));
}

}  // namespace

PolarizationVector polarization(const ModeIndex& mode, const CavityGeometry& geom) {
    require_em(mode);
    validate_dimensions(geom);
    if (mode.ny == 0 && mode.nz == 0) throw ValidationError("ny and nz cannot be simultaneously zero");
    validate(mode);
    double a = mode.nz / geom.Lz;
    double b = -mode.ny / geom.Ly;
    const double norm = std::hypot(a, b);
    a /= norm;
    b /= norm;
    if (a < 0.0 || (a == 0.0 && b < 0.0)) {
        a = -a;
        b = -b;
    }
    return {a + 0.0, b + 0.0};
}

EmPrediction em_prediction(const ModeIndex& mode, const CavityGeometry& geom, double tol_res) {
    require_em(mode);
    validate(mode);
    validate_driven(geom);
    if (!is_parametric(mode, geom, tol_res))
        throw ValidationError(fmt::format("drive Omega={} is not resonant with {} (2 omega={})", geom.Omega,
                                          to_string(mode), 2.0 * mode_frequency(mode, geom)));
    EmPrediction out;
    out.mode = mode;
    out.scalar_kind = boundary_of(mode.kind);
    const ResonanceGraph graph = resonance_partners(mode, geom, tol_res);
    out.component = graph.nodes;
    if (graph.is_singleton()) {
        const double lam = uncoupled_rate(mode, geom, out.scalar_kind, tol_res);
        out.rate = lam;
        out.photon_curve = [lam](double et) { return std::pow(std::sinh(lam * et), 2); };
    } else {
        SecularOptions opt;
        opt.tol_res = tol_res;
        auto sys = std::make_shared<SecularSystem>(secular_matrix(graph, geom, out.scalar_kind, opt));
        out.rate = growth_rates(*sys).lambda_max;
        const std::size_t slot = *graph.find(mode);
        out.photon_curve = [sys, slot](double et) { return msa_photon_numbers(*sys, et)[slot]; };
    }
    out.photon_exponent = 2.0 * out.rate;
    return out;
}

std::vector<ModeIndex> resonant_em_modes(const CavityGeometry& geom, double tol_res) {
    validate_driven(geom);
    std::vector<ModeIndex> out;
    const double cutoff = 0.5 * geom.Omega * (1.0 + 2.0 * tol_res);
    for (FieldKind kind : {FieldKind::TE, FieldKind::TM})
        for (const auto& m : enumerate_modes(kind, geom, cutoff))
            if (is_parametric(m, geom, tol_res)) out.push_back(m);
    return out;
}

void validate(const FeasibilityInput& in) {
    const auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ValidationError(fmt::format("{} must be positive", name));
    };
    positive(in.L, "L");
    positive(in.delta_max, "delta_max");
    positive(in.v_sound, "v_sound");
    positive(in.duration, "duration");
    if (in.delta_max > 0.1) throw ValidationError("delta_max must not exceed 0.1");
    if (!(in.epsilon >= 0.0) || in.epsilon >= 0.1) throw ValidationError("epsilon must lie in [0, 0.1)");
}

FeasibilityReport feasibility(const FeasibilityInput& input, const ModeIndex& mode, const CavityGeometry& geom) {
    validate(input);
    validate_dimensions(geom);
    FeasibilityReport rep;
    rep.mode = mode;
    const ModeIndex te{mode.nx, mode.ny, mode.nz, FieldKind::TE};
    const ModeIndex tm{mode.nx, mode.ny, mode.nz, FieldKind::TM};
    if (!is_valid(tm)) throw ValidationError(fmt::format("{} is not an electromagnetic mode", to_string(mode)));

    const double omega = mode_frequency(tm, geom);  // units of 1/L
    CavityGeometry driven = geom;
    driven.Omega = 2.0 * omega;
    driven.epsilon = input.epsilon;

    rep.omega_rad_s = driven.Omega * kSpeedOfLight / input.L;
    rep.omega_hz = rep.omega_rad_s / (2.0 * kPi);
    const double Lx = geom.Lx0 * input.L;
    rep.epsilon_max = input.delta_max * input.v_sound / (rep.omega_rad_s * Lx);
    rep.epsilon = input.epsilon;
    rep.epsilon_exceeds_max = input.epsilon > rep.epsilon_max;
    rep.epsilon_t = input.epsilon * input.duration * kSpeedOfLight / input.L;
    rep.polarization = polarization(tm, geom);

    rep.tm_photons = em_prediction(tm, driven).photon_curve(rep.epsilon_t);
    if (is_valid(te)) rep.te_photons = em_prediction(te, driven).photon_curve(rep.epsilon_t);
    return rep;
}

}  // namespace dce
