#include "dce/errors.hpp"
#include "dce/spectrum.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace dce;

TEST(Spectrum, FrequencyOfCubicModes) {
    const auto cube = CavityGeometry::cubic(1.0);
    EXPECT_NEAR(mode_frequency({1, 1, 1, FieldKind::TM}, cube), kPi * std::sqrt(3.0), 1e-14);
    EXPECT_NEAR(mode_frequency({0, 1, 0, FieldKind::TM}, cube), kPi, 1e-15);
    EXPECT_NEAR(mode_frequency({1, 1, 0, FieldKind::TE}, cube), kPi * std::sqrt(2.0), 1e-14);
}

TEST(Spectrum, FrequencyScalesWithBox) {
    const CavityGeometry g{2.0, 0.5, 3.0, 0.0, 0.0};
    const ModeIndex m{3, 1, 2, FieldKind::NeumannScalar};
    const double expect = kPi * std::sqrt(9.0 / 4.0 + 1.0 / 0.25 + 4.0 / 9.0);
    EXPECT_NEAR(mode_frequency(m, g), expect, 1e-13);
    EXPECT_NEAR(mode_frequency_at(m, g, 2.2), kPi * std::sqrt(9.0 / 4.84 + 4.0 + 4.0 / 9.0), 1e-13);
    EXPECT_NEAR(axial_wavenumber_sq(m, g), 9.0 * kPi * kPi / 4.0, 1e-13);
}

TEST(Spectrum, WallTrajectory) {
    const CavityGeometry g{1.5, 1.0, 1.0, 0.01, 3.0};
    for (double t : {0.0, 0.3, 1.7}) {
        EXPECT_NEAR(g.Lx(t), 1.5 * (1.0 + 0.01 * std::sin(3.0 * t)), 1e-15);
        EXPECT_NEAR(g.Lx_dot(t), 1.5 * 0.01 * 3.0 * std::cos(3.0 * t), 1e-15);
    }
}

TEST(Spectrum, IndexValidityRules) {
    EXPECT_FALSE(is_valid({0, 1, 1, FieldKind::DirichletScalar}));
    EXPECT_TRUE(is_valid({1, 1, 1, FieldKind::DirichletScalar}));
    EXPECT_FALSE(is_valid({1, 0, 1, FieldKind::DirichletScalar}));
    EXPECT_FALSE(is_valid({0, 0, 0, FieldKind::NeumannScalar}));
    EXPECT_TRUE(is_valid({1, 0, 0, FieldKind::NeumannScalar}));
    EXPECT_FALSE(is_valid({0, 1, 0, FieldKind::TE}));
    EXPECT_FALSE(is_valid({1, 0, 0, FieldKind::TE}));
    EXPECT_TRUE(is_valid({1, 1, 0, FieldKind::TE}));
    EXPECT_TRUE(is_valid({0, 1, 0, FieldKind::TM}));
    EXPECT_FALSE(is_valid({3, 0, 0, FieldKind::TM}));
    EXPECT_FALSE(is_valid({-1, 1, 1, FieldKind::TM}));
    EXPECT_THROW((void)mode_frequency({1, 0, 0, FieldKind::TM}, CavityGeometry::cubic(1.0)), ValidationError);
}

TEST(Spectrum, KindMapping) {
    EXPECT_EQ(boundary_of(FieldKind::TE), Boundary::Dirichlet);
    EXPECT_EQ(boundary_of(FieldKind::DirichletScalar), Boundary::Dirichlet);
    EXPECT_EQ(boundary_of(FieldKind::TM), Boundary::Neumann);
    EXPECT_EQ(boundary_of(FieldKind::NeumannScalar), Boundary::Neumann);
    EXPECT_EQ(parse_field_kind("TM"), FieldKind::TM);
    EXPECT_EQ(parse_field_kind("Dirichlet"), FieldKind::DirichletScalar);
    EXPECT_THROW((void)parse_field_kind("tx"), ValidationError);
}

TEST(Spectrum, GeometryValidation) {
    EXPECT_THROW(validate_dimensions({-1.0, 1.0, 1.0, 0.0, 0.0}), ValidationError);
    EXPECT_THROW(validate_dimensions({1.0, 0.0, 1.0, 0.0, 0.0}), ValidationError);
    EXPECT_THROW(validate_dimensions({1.0, 1.0, 1.0, 0.1, 0.0}), ValidationError);
    EXPECT_THROW(validate_dimensions({1.0, 1.0, 1.0, -1e-3, 0.0}), ValidationError);
    EXPECT_NO_THROW(validate_dimensions({1.0, 1.0, 1.0, 0.099, 0.0}));
    EXPECT_THROW(validate_driven({1.0, 1.0, 1.0, 0.01, 0.0}), ValidationError);
}

TEST(Spectrum, CubicTmListing) {
    const auto modes = enumerate_modes(FieldKind::TM, CavityGeometry::cubic(1.0), 2.0 * kPi);
    ASSERT_GE(modes.size(), 5u);
    EXPECT_EQ(modes[0], (ModeIndex{0, 0, 1, FieldKind::TM}));
    EXPECT_EQ(modes[1], (ModeIndex{0, 1, 0, FieldKind::TM}));
    EXPECT_EQ(modes[2], (ModeIndex{0, 1, 1, FieldKind::TM}));
    EXPECT_EQ(modes[4], (ModeIndex{1, 1, 0, FieldKind::TM}));
}

TEST(Spectrum, EmptyBelowLowestMode) {
    EXPECT_TRUE(enumerate_modes(FieldKind::TM, CavityGeometry::cubic(1.0), 3.0).empty());
    EXPECT_TRUE(enumerate_modes(FieldKind::DirichletScalar, CavityGeometry::cubic(1.0), 0.0).empty());
}

TEST(Spectrum, EnumerationMatchesBruteForce) {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> len(0.3, 2.5);
    for (int trial = 0; trial < 40; ++trial) {
        const CavityGeometry g{len(rng), len(rng), len(rng), 0.0, 0.0};
        const double cutoff = 4.0 * kPi * std::uniform_real_distribution<double>(0.5, 1.5)(rng);
        for (FieldKind kind : {FieldKind::DirichletScalar, FieldKind::NeumannScalar, FieldKind::TE, FieldKind::TM}) {
            const auto got = enumerate_modes(kind, g, cutoff);
            const auto ref = oracle::brute_modes(kind, g.Lx0, g.Ly, g.Lz, cutoff);
            ASSERT_EQ(got.size(), ref.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                EXPECT_NEAR(mode_frequency(got[i], g), std::get<0>(ref[i]), 1e-12);
                if (i > 0) {
                    const double a = mode_frequency(got[i - 1], g);
                    const double b = mode_frequency(got[i], g);
                    EXPECT_LE(a, b);
                }
            }
        }
    }
}

TEST(Spectrum, CubicResonanceComponent) {
    auto g = CavityGeometry::cubic(1.0, 1e-3);
    const ModeIndex m{1, 1, 1, FieldKind::TM};
    g.Omega = 2.0 * mode_frequency(m, g);
    const auto graph = resonance_partners(m, g);
    ASSERT_EQ(graph.nodes.size(), 2u);
    EXPECT_EQ(graph.nodes[0], m);
    EXPECT_EQ(graph.nodes[1], (ModeIndex{5, 1, 1, FieldKind::TM}));
    EXPECT_TRUE(graph.parametric[0]);
    EXPECT_FALSE(graph.parametric[1]);
    ASSERT_EQ(graph.edges.size(), 1u);
    EXPECT_EQ(graph.edges[0].type, ResonanceType::Difference);
    EXPECT_EQ(graph.components().size(), 1u);
}

TEST(Spectrum, FundamentalIsSingleton) {
    auto g = CavityGeometry::cubic(1.0, 1e-3);
    const ModeIndex m{0, 1, 0, FieldKind::TM};
    g.Omega = 2.0 * mode_frequency(m, g);
    EXPECT_TRUE(resonance_partners(m, g).is_singleton());
    EXPECT_TRUE(is_parametric(m, g, kDefaultResonanceTol));
}

TEST(Spectrum, ResonanceClassification) {
    auto g = CavityGeometry::cubic(1.0, 1e-3);
    const ModeIndex a{1, 1, 1, FieldKind::NeumannScalar};
    const ModeIndex b{5, 1, 1, FieldKind::NeumannScalar};
    g.Omega = 2.0 * mode_frequency(a, g);
    EXPECT_EQ(resonance_between(a, b, g, 1e-9), ResonanceType::Difference);
    EXPECT_EQ(resonance_between(b, a, g, 1e-9), ResonanceType::Difference);
    EXPECT_FALSE(resonance_between(a, a, g, 1e-9).has_value());  // self-coupling is the parametric flag
    EXPECT_TRUE(is_parametric(a, g, 1e-9));
    EXPECT_FALSE(resonance_between(a, {5, 1, 2, FieldKind::NeumannScalar}, g, 1e-9).has_value());
    // tolerance band is relative to Omega
    g.Omega *= 1.0 + 1e-7;
    EXPECT_FALSE(resonance_between(a, b, g, 1e-9).has_value());
    EXPECT_TRUE(resonance_between(a, b, g, 1e-6).has_value());
}

TEST(Spectrum, SumResonancePair) {
    // w(1,1,0) + w(3,1,0) in a box with Lx = 1, Ly = 1 drives Omega by construction
    auto g = CavityGeometry::cubic(1.0, 1e-3);
    const ModeIndex a{1, 1, 0, FieldKind::TM};
    const ModeIndex b{3, 1, 0, FieldKind::TM};
    g.Omega = mode_frequency(a, g) + mode_frequency(b, g);
    const auto graph = resonance_partners(a, g);
    ASSERT_TRUE(graph.find(b).has_value());
    bool sum = false;
    for (const auto& e : graph.edges) sum = sum || e.type == ResonanceType::Sum;
    EXPECT_TRUE(sum);
}

TEST(Spectrum, NoTransverseMatchedModeAtFiveTimesFundamental) {
    // the partner chain of (1,1,1) stops at (5,1,1): nothing with (ny, nz) = (1, 1) sits at 5 w
    const auto cube = CavityGeometry::cubic(1.0);
    const double w = mode_frequency({1, 1, 1, FieldKind::TM}, cube);
    for (int nx = 0; nx < 40; ++nx)
        EXPECT_GT(std::abs(mode_frequency({nx, 1, 1, FieldKind::TM}, cube) - 5.0 * w), 1e-3);
    // other transverse indices do reach 5 w
    EXPECT_NEAR(mode_frequency({5, 5, 5, FieldKind::TM}, cube), 5.0 * w, 1e-12);
    EXPECT_NEAR(mode_frequency({7, 5, 1, FieldKind::TM}, cube), 5.0 * w, 1e-12);
}

TEST(Spectrum, GraphOverExplicitModes) {
    auto g = CavityGeometry::cubic(1.0, 1e-3);
    g.Omega = 2.0 * kPi * std::sqrt(3.0);
    const auto graph = build_resonance_graph({{5, 1, 1, FieldKind::TM}, {1, 1, 1, FieldKind::TM},
                                              {0, 1, 0, FieldKind::TM}, {1, 1, 1, FieldKind::TM}},
                                             g);
    ASSERT_EQ(graph.nodes.size(), 3u);
    EXPECT_EQ(graph.nodes.front(), (ModeIndex{0, 1, 0, FieldKind::TM}));
    EXPECT_EQ(graph.components().size(), 2u);
}
