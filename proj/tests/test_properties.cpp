#include "dce/coupling.hpp"
#include "dce/msa.hpp"
#include "dce/spectrum.hpp"
#include "oracles.hpp"
#include "parity_cases.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>

using namespace dce;

TEST(Property, ParityRuleForEnhancement) {
    int odd = 0;
    int even = 0;
    for (const auto& c : parity::make_cases(2024, 200)) {
        ASSERT_NEAR(mode_frequency(c.j, c.geom), 3.0 * mode_frequency(c.k, c.geom), 1e-10);
        const auto r = parity::evaluate(c);
        EXPECT_EQ(r.enhanced, r.odd) << to_string(c.k) << " + " << to_string(c.j) << " coupled=" << r.coupled
                                     << " alone=" << r.uncoupled;
        (r.odd ? odd : even)++;
    }
    EXPECT_GT(odd, 20);
    EXPECT_GT(even, 20);
}

TEST(Property, ProjectionAgreesWithPrintedForEvenParity) {
    for (const auto& c : parity::make_cases(99, 60)) {
        if ((c.k.nx + c.j.nx) % 2) continue;
        SecularOptions opt;
        opt.convention = SecularConvention::FromCoefficients;
        const auto a = secular_matrix({c.k, c.j}, c.geom, Boundary::Neumann);
        const auto b = secular_matrix({c.k, c.j}, c.geom, Boundary::Neumann, opt);
        EXPECT_LT((a.M - b.M).cwiseAbs().maxCoeff(), 1e-8 * (1.0 + a.M.cwiseAbs().maxCoeff()));
    }
}

TEST(Property, ProjectionIsGaugeIndependent) {
    for (const auto& c : parity::make_cases(5, 30)) {
        SecularOptions a;
        a.convention = SecularConvention::FromCoefficients;
        SecularOptions b = a;
        b.gauge = alt_gauge();
        const auto Ma = secular_matrix({c.k, c.j}, c.geom, Boundary::Neumann, a).M;
        const auto Mb = secular_matrix({c.k, c.j}, c.geom, Boundary::Neumann, b).M;
        EXPECT_LT((Ma - Mb).cwiseAbs().maxCoeff(), 1e-8);
    }
}

TEST(Property, ResonanceIsSymmetric) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> n(0, 6);
    const auto base = parity::make_cases(17, 10);
    for (const auto& c : base)
        for (int trial = 0; trial < 50; ++trial) {
            const ModeIndex a{n(rng), c.k.ny, c.k.nz, FieldKind::NeumannScalar};
            const ModeIndex b{n(rng), c.k.ny, c.k.nz, FieldKind::NeumannScalar};
            EXPECT_EQ(resonance_between(a, b, c.geom, 1e-9), resonance_between(b, a, c.geom, 1e-9));
        }
}

TEST(Property, DirichletCouplingAntisymmetric) {
    for (int k = 1; k <= 30; ++k)
        for (int j = 1; j <= 30; ++j) {
            const ModeIndex a{k, 2, 1, FieldKind::DirichletScalar};
            const ModeIndex b{j, 2, 1, FieldKind::DirichletScalar};
            EXPECT_NEAR(g_dirichlet(a, b) + g_dirichlet(b, a), 0.0, 1e-14);
            EXPECT_NEAR(g_dirichlet(a, b), oracle::g_dirichlet_first(k, j), 1e-11);
        }
}

TEST(Property, IdentitiesOnRandomBoxes) {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> len(0.3, 3.0);
    std::uniform_int_distribution<int> n(0, 14);
    for (int trial = 0; trial < 60; ++trial) {
        const CavityGeometry g{len(rng), len(rng), len(rng), 0.0, 0.0};
        const int ny = n(rng) % 4;
        const int nz = 1 + n(rng) % 3;
        const ModeIndex a{n(rng), ny, nz, FieldKind::NeumannScalar};
        const ModeIndex b{n(rng), ny, nz, FieldKind::NeumannScalar};
        for (const auto& v : {default_gauge(), alt_gauge()}) {
            const auto res = identity_residuals(a, b, v, g);
            EXPECT_LT(res.divergence, 1e-8);
            EXPECT_LT(res.boundary, 1e-8);
        }
    }
}

TEST(Property, TwoModeClosedFormMatchesEigenSolver) {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-20.0, 20.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double a = u(rng);
        const double b = u(rng);
        const double c = u(rng);
        const double w = 0.5 + std::abs(u(rng));
        Eigen::Matrix4d M;
        M << 0, a, b, 0, a, 0, 0, b, c, 0, 0, 0, 0, c, 0, 0;
        M /= 2.0 * w;
        const Eigen::VectorXcd ev = M.eigenvalues();
        for (const auto& z : two_mode_eigenvalues(a, b, c, w)) {
            double best = 1e300;
            for (Eigen::Index i = 0; i < ev.size(); ++i) best = std::min(best, std::abs(ev(i) - z));
            EXPECT_LT(best, 1e-8 * (1.0 + std::abs(z)));
        }
    }
}

TEST(Property, RateRatioFormula) {
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> len(0.4, 2.5);
    std::uniform_int_distribution<int> n(1, 5);
    for (int trial = 0; trial < 100; ++trial) {
        CavityGeometry g{len(rng), len(rng), len(rng), 1e-3, 0.0};
        const ModeIndex m{n(rng), n(rng), n(rng) - 1, FieldKind::TE};
        g.Omega = 2.0 * mode_frequency(m, g);
        const double wk2 = std::pow(mode_frequency(m, g), 2);
        const double wp2 = wk2 - axial_wavenumber_sq(m, g);
        const double ratio = uncoupled_rate(m, g, Boundary::Neumann) / uncoupled_rate(m, g, Boundary::Dirichlet);
        EXPECT_NEAR(ratio, (wk2 + wp2) / (wk2 - wp2), 1e-10 * ratio);
        EXPECT_GT(ratio, 1.0);
    }
}

TEST(Property, SecularFlowComposes) {
    for (const auto& c : parity::make_cases(61, 10)) {
        const auto sys = secular_matrix({c.k, c.j}, c.geom, Boundary::Neumann);
        const auto v0 = vacuum_amplitudes(sys, 1);
        const auto mid = evolve_secular(sys, v0, 0.4);
        const auto direct = evolve_secular(sys, v0, 1.1);
        const auto chained = evolve_secular(sys, mid, 1.1);
        for (std::size_t i = 0; i < 2; ++i) {
            EXPECT_LT(std::abs(direct.A[i] - chained.A[i]), 1e-10 * (1.0 + std::abs(direct.A[i])));
            EXPECT_LT(std::abs(direct.B[i] - chained.B[i]), 1e-10 * (1.0 + std::abs(direct.B[i])));
        }
    }
}
