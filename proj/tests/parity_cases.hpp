// Random two-mode Neumann resonances with w_j = 3 w_k, driven at 2 w_k.

#pragma once

#include "dce/msa.hpp"
#include "dce/spectrum.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace parity {

struct Case {
    dce::ModeIndex k;
    dce::ModeIndex j;
    dce::CavityGeometry geom;
};

// Lx = 1 and Ly = p/q rational; Lz is solved from (jx^2 - 9 kx^2) = 8 (ny^2/Ly^2 + nz^2/Lz^2).
inline std::vector<Case> make_cases(unsigned seed, int count) {
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> kx_d(0, 4);
    std::uniform_int_distribution<int> step_d(1, 8);
    std::uniform_int_distribution<int> ny_d(0, 3);
    std::uniform_int_distribution<int> nz_d(1, 3);
    std::uniform_int_distribution<int> pq_d(1, 9);
    std::vector<Case> out;
    while (static_cast<int>(out.size()) < count) {
        const int kx = kx_d(rng);
        const int jx = 3 * kx + step_d(rng);
        const int ny = ny_d(rng);
        const int nz = nz_d(rng);
        const double Ly = static_cast<double>(pq_d(rng)) / pq_d(rng);
        const double rem = (jx * jx - 9.0 * kx * kx) / 8.0 - ny * ny / (Ly * Ly);
        if (rem <= 1e-3) continue;
        dce::CavityGeometry g{1.0, Ly, nz / std::sqrt(rem), 1e-3, 0.0};
        const dce::ModeIndex k{kx, ny, nz, dce::FieldKind::NeumannScalar};
        const dce::ModeIndex j{jx, ny, nz, dce::FieldKind::NeumannScalar};
        g.Omega = 2.0 * dce::mode_frequency(k, g);
        out.push_back({k, j, g});
    }
    return out;
}

struct Outcome {
    bool odd;
    bool enhanced;
    double coupled;
    double uncoupled;
};

inline Outcome evaluate(const Case& c) {
    const double coupled =
        dce::growth_rates(dce::secular_matrix({c.k, c.j}, c.geom, dce::Boundary::Neumann)).lambda_max;
    const double alone = dce::uncoupled_rate(c.k, c.geom, dce::Boundary::Neumann);
    return {((c.k.nx + c.j.nx) % 2) == 1, coupled > alone * (1.0 + 1e-9), coupled, alone};
}

}  // namespace parity
