#include "dce/coupling.hpp"
#include "dce/errors.hpp"
#include "dce/quadrature.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace dce;

namespace {

ModeIndex nm(int nx) { return {nx, 1, 1, FieldKind::NeumannScalar}; }
ModeIndex dm(int nx) { return {nx, 1, 1, FieldKind::DirichletScalar}; }

const std::vector<double> kDefaultV{0.0, 0.0, 0.5, 0.0, -0.5};
const std::vector<double> kAltV{0.0, 0.0, 1.0, -1.0};

}  // namespace

TEST(Quadrature, ExactForPolynomials) {
    const auto rule = gauss_legendre_unit(8);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 15);
    EXPECT_NEAR(s, 1.0 / 16.0, 1e-15);
}

TEST(Quadrature, AdaptiveOscillatory) {
    EXPECT_NEAR(integrate_unit([](double z) { return std::cos(40.0 * z) * z * z; }),
                oracle::moments(2, 40.0).first, 1e-13);
}

TEST(Quadrature, NonConvergenceIsNumericalError) {
    EXPECT_THROW((void)integrate_unit([](double z) { return 1.0 / std::sqrt(z); }), NumericalError);
}

TEST(Gauge, ProfilesSatisfyConstraints) {
    for (const auto& v : {default_gauge(), alt_gauge()}) {
        EXPECT_NEAR(v.value(0.0), 0.0, 1e-12);
        EXPECT_NEAR(v.value(1.0), 0.0, 1e-12);
        EXPECT_NEAR(v.first(0.0), 0.0, 1e-12);
        EXPECT_NEAR(v.first(1.0), -1.0, 1e-12);
    }
    EXPECT_NEAR(default_gauge().value(0.5), 0.5 * (0.25 - 0.0625), 1e-15);
    EXPECT_NEAR(alt_gauge().second(0.25), 2.0 - 1.5, 1e-15);
}

TEST(Gauge, RejectsBadProfiles) {
    EXPECT_THROW(GaugeProfile({0.0, 0.0, 1.0}), ValidationError);          // v(1) != 0
    EXPECT_THROW(GaugeProfile({0.0, 1.0, -1.0}), ValidationError);         // v'(0) != 0
    EXPECT_THROW(GaugeProfile({0.0, 0.0, 0.0}), ValidationError);          // v'(1) != -1
    EXPECT_NO_THROW(GaugeProfile({0.0, 0.0, 3.0, -5.0, 2.0}));            // v'(1) = 6 - 15 + 8
}

TEST(Coupling, NeumannClosedFormEntries) {
    EXPECT_NEAR(g_neumann(nm(3), nm(3)), -1.0, 1e-15);
    EXPECT_NEAR(g_neumann(nm(0), nm(0)), -1.0, 1e-15);
    EXPECT_NEAR(g_neumann(nm(0), nm(2)), 0.0, 1e-15);
    EXPECT_NEAR(g_neumann(nm(2), nm(1)), -2.0 * 4.0 / (1.0 - 4.0), 1e-15);
    EXPECT_NEAR(g_neumann(nm(1), nm(4)), -2.0 / 15.0, 1e-15);
    EXPECT_DOUBLE_EQ(g_neumann(nm(1), {4, 1, 2, FieldKind::NeumannScalar}), 0.0);
}

TEST(Coupling, DirichletAntisymmetric) {
    for (int k = 1; k <= 8; ++k)
        for (int j = 1; j <= 8; ++j) EXPECT_NEAR(g_dirichlet(dm(k), dm(j)), -g_dirichlet(dm(j), dm(k)), 1e-15);
    EXPECT_DOUBLE_EQ(g_dirichlet(dm(4), dm(4)), 0.0);
    EXPECT_NEAR(g_dirichlet(dm(1), dm(2)), -2.0 * 2.0 / 3.0, 1e-15);
}

TEST(Coupling, ClosedFormMatchesExactIntegrals) {
    for (int j = 0; j <= 8; ++j)
        for (int k = 0; k <= 8; ++k) {
            EXPECT_NEAR(g_coefficient(Boundary::Neumann, nm(j), nm(k)), oracle::g_neumann(j, k), 1e-12)
                << j << "," << k;
            EXPECT_NEAR(g_coefficient(Boundary::Neumann, nm(j), nm(k), XNormalization::Orthonormal),
                        oracle::g_neumann(j, k, true), 1e-12);
            if (j >= 1 && k >= 1)
                EXPECT_NEAR(g_coefficient(Boundary::Dirichlet, dm(j), dm(k)), oracle::g_dirichlet_first(j, k), 1e-12)
                    << j << "," << k;
        }
}

TEST(Coupling, QuadratureMatchesClosedForm) {
    for (int j = 0; j <= 8; ++j)
        for (int k = 0; k <= 8; ++k) {
            EXPECT_NEAR(g_defining_integral(Boundary::Neumann, nm(j), nm(k)),
                        g_coefficient(Boundary::Neumann, nm(j), nm(k)), 1e-8);
            if (j >= 1 && k >= 1)
                EXPECT_NEAR(g_defining_integral(Boundary::Dirichlet, dm(j), dm(k)),
                            g_coefficient(Boundary::Dirichlet, dm(j), dm(k)), 1e-8);
        }
}

TEST(Coupling, RAndEtaMatchExactIntegrals) {
    const auto cube = CavityGeometry::cubic(1.0);
    for (const auto& [v, coeffs] : {std::pair{default_gauge(), kDefaultV}, std::pair{alt_gauge(), kAltV}})
        for (int j = 0; j <= 6; ++j)
            for (int k = 0; k <= 6; ++k) {
                EXPECT_NEAR(r_coeff(nm(j), nm(k), v), oracle::r_neumann(j, k, coeffs), 1e-12);
                const double w2 = std::pow(mode_frequency(nm(j), cube), 2);
                EXPECT_NEAR(eta_coeff(nm(j), nm(k), v, cube), oracle::eta_neumann(j, k, coeffs, w2), 1e-10);
                EXPECT_NEAR(r_coeff(nm(j), nm(k), v, XNormalization::Orthonormal),
                            oracle::r_neumann(j, k, coeffs, true), 1e-12);
            }
}

TEST(Coupling, RZeroIndexValues) {
    const ModeIndex m{0, 1, 0, FieldKind::NeumannScalar};
    EXPECT_NEAR(r_coeff(m, m, default_gauge(), XNormalization::Orthonormal), 1.0 / 15.0, 1e-13);
    EXPECT_NEAR(r_coeff(m, m, default_gauge()), 2.0 / 15.0, 1e-13);
    const ModeIndex m1{1, 1, 0, FieldKind::NeumannScalar};
    const double pi2 = kPi * kPi;
    EXPECT_NEAR(r_coeff(m1, m1, default_gauge()), 1.0 / 15.0 - 1.0 / (4.0 * pi2) + 3.0 / (4.0 * pi2 * pi2), 1e-13);
}

TEST(Coupling, MismatchedTransverseIsZero) {
    const ModeIndex a{1, 1, 1, FieldKind::NeumannScalar};
    const ModeIndex b{2, 1, 2, FieldKind::NeumannScalar};
    EXPECT_DOUBLE_EQ(r_coeff(a, b, default_gauge()), 0.0);
    EXPECT_DOUBLE_EQ(eta_coeff(a, b, default_gauge(), CavityGeometry::cubic(1.0)), 0.0);
}

TEST(Coupling, IdentitiesHold) {
    const CavityGeometry g{1.0, 0.7, 1.9, 0.0, 0.0};
    for (const auto& v : {default_gauge(), alt_gauge()})
        for (auto norm : {XNormalization::Uniform, XNormalization::Orthonormal})
            for (int j = 0; j <= 8; ++j)
                for (int k = 0; k <= 8; ++k) {
                    const auto res = identity_residuals(nm(j), nm(k), v, g, norm);
                    EXPECT_LT(res.divergence, 1e-8);
                    EXPECT_LT(res.boundary, 1e-8);
                }
}

TEST(Coupling, BoundaryTermValue) {
    for (const auto& v : {default_gauge(), alt_gauge()})
        for (int j = 0; j <= 5; ++j)
            for (int k = 0; k <= 5; ++k)
                EXPECT_NEAR(identity_boundary_term(nm(j), nm(k), v), -2.0 * (((j + k) % 2) ? -1.0 : 1.0), 1e-14);
}

TEST(Coupling, IdentityRequiresMatchedTransverse) {
    EXPECT_THROW((void)identity_residuals(nm(1), {1, 2, 1, FieldKind::NeumannScalar}, default_gauge(),
                                          CavityGeometry::cubic(1.0)),
                 ValidationError);
}

TEST(Coupling, TablesOverBasis) {
    const auto cube = CavityGeometry::cubic(1.0);
    const std::vector<ModeIndex> basis{nm(0), nm(1), nm(2), {1, 2, 1, FieldKind::NeumannScalar}};
    const auto t = build_coupling_tables(basis, cube, default_gauge());
    EXPECT_EQ(t.bc, Boundary::Neumann);
    EXPECT_DOUBLE_EQ(t.g(0, 3), 0.0);
    EXPECT_DOUBLE_EQ(t.r(3, 1), 0.0);
    EXPECT_NEAR(t.g(2, 1), g_neumann(nm(2), nm(1)), 1e-15);
    EXPECT_NEAR(t.eta(1, 2), eta_coeff(nm(1), nm(2), default_gauge(), cube), 1e-15);

    const std::vector<ModeIndex> dbasis{dm(1), dm(2), dm(3)};
    const auto d = build_coupling_tables(dbasis, cube, default_gauge());
    EXPECT_EQ(d.bc, Boundary::Dirichlet);
    EXPECT_LT((d.g + d.g.transpose()).norm(), 1e-14);
    EXPECT_DOUBLE_EQ(d.r.norm(), 0.0);
}
