#include "dce/msa.hpp"

#include "dce/errors.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <fmt/format.h>

namespace dce {

namespace {

struct Resonances {
    bool sum{false};       // w_k + w_j = Omega (includes the parametric j = k case)
    bool k_above{false};   // w_k - w_j = Omega
    bool j_above{false};   // w_j - w_k = Omega
};

Resonances classify(double wk, double wj, double Omega, double tol) {
    const double band = tol * Omega;
    return {std::abs(wk + wj - Omega) <= band, std::abs(wk - wj - Omega) <= band,
            std::abs(wj - wk - Omega) <= band};
}

// Adds coefficient c to dA_k/dtau from X_j and the mirrored B_k <- X'_j entry.
void add_pair(Eigen::MatrixXcd& M, std::size_t k, std::size_t j, bool from_b, double c) {
    const auto ak = static_cast<Eigen::Index>(2 * k);
    const auto aj = static_cast<Eigen::Index>(2 * j);
    if (from_b) {
        M(ak, aj + 1) += c;
        M(ak + 1, aj) += c;
    } else {
        M(ak, aj) += c;
        M(ak + 1, aj + 1) += c;
    }
}

void fill_printed_neumann(SecularSystem& sys, const CavityGeometry& geom, double tol) {
    const double W = sys.Omega;
    for (std::size_t k = 0; k < sys.size(); ++k) {
        const auto& mk = sys.modes[k];
        const double wk = sys.omegas[k];
        if (std::abs(2.0 * wk - W) <= tol * W) {
            const double kappa = axial_wavenumber_sq(mk, geom);
            add_pair(sys.M, k, k, true, -(kappa - 2.0 * wk * wk) / (2.0 * wk));
        }
        for (std::size_t j = 0; j < sys.size(); ++j) {
            const auto& mj = sys.modes[j];
            if (j == k || !mk.same_transverse(mj)) continue;
            const double wj = sys.omegas[j];
            const double g = g_neumann(mj, mk);
            const double scale = W / (2.0 * wk);
            const Resonances res = classify(wk, wj, W, tol);
            if (res.sum) add_pair(sys.M, k, j, true, scale * (-(-wj + W / 2.0) * g + wj));
            if (res.k_above) add_pair(sys.M, k, j, false, scale * (-(wj + W / 2.0) * g - wj));
            if (res.j_above) add_pair(sys.M, k, j, false, scale * (-(wj - W / 2.0) * g - wj));
        }
    }
}

// Generic projection of eps [S_kj sin(Wt) Q_j + C_kj cos(Wt) Qdot_j] onto e^{+-i w_k t}.
void fill_from_sources(SecularSystem& sys, const Eigen::MatrixXd& S, const Eigen::MatrixXd& C, double tol) {
    const double W = sys.Omega;
    for (std::size_t k = 0; k < sys.size(); ++k) {
        const double wk = sys.omegas[k];
        for (std::size_t j = 0; j < sys.size(); ++j) {
            const double wj = sys.omegas[j];
            const double s = S(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
            const double c = C(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j));
            if (s == 0.0 && c == 0.0) continue;
            const Resonances res = classify(wk, wj, W, tol);
            if (res.sum) add_pair(sys.M, k, j, true, -(s + wj * c) / (4.0 * wk));
            if (res.k_above) add_pair(sys.M, k, j, false, (-s + wj * c) / (4.0 * wk));
            if (res.j_above) add_pair(sys.M, k, j, false, (s + wj * c) / (4.0 * wk));
        }
    }
}

void fill_dirichlet(SecularSystem& sys, const CavityGeometry& geom, double tol) {
    const auto n = static_cast<Eigen::Index>(sys.size());
    const double W = sys.Omega;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto& mk = sys.modes[static_cast<std::size_t>(k)];
        for (Eigen::Index j = 0; j < n; ++j) {
            const double g = g_dirichlet(mk, sys.modes[static_cast<std::size_t>(j)]);
            S(k, j) = -W * W * g;
            C(k, j) = 2.0 * W * g;
        }
        S(k, k) += 2.0 * axial_wavenumber_sq(mk, geom);
    }
    fill_from_sources(sys, S, C, tol);
}

void fill_neumann_from_coefficients(SecularSystem& sys, const CavityGeometry& geom, const SecularOptions& opt) {
    const auto tables = build_coupling_tables(sys.modes, geom, opt.gauge, opt.normalization);
    const auto n = static_cast<Eigen::Index>(sys.size());
    const double W = sys.Omega;
    const double L2 = geom.Lx0 * geom.Lx0;
    Eigen::MatrixXd S = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double wj = sys.omegas[static_cast<std::size_t>(j)];
            const double g = tables.g(j, k);
            const double r = tables.r(j, k);
            const double eta = tables.eta(j, k);
            S(k, j) = W * W * g - 2.0 * L2 * W * W * r * wj * wj;
            C(k, j) = -2.0 * W * g + L2 * W * r * wj * wj + L2 * W * W * W * r + W * eta;
        }
        S(k, k) += 2.0 * axial_wavenumber_sq(sys.modes[static_cast<std::size_t>(k)], geom);
    }
    fill_from_sources(sys, S, C, opt.tol_res);
}

}  // namespace

SecularSystem secular_matrix(const std::vector<ModeIndex>& component, const CavityGeometry& geom, Boundary bc,
                             const SecularOptions& options) {
    if (component.empty()) throw ValidationError("secular system needs at least one mode");
    validate_driven(geom);
    SecularSystem sys;
    sys.modes = component;
    sys.bc = bc;
    sys.Omega = geom.Omega;
    for (const auto& m : component) {
        validate(m);
        if (boundary_of(m.kind) != bc) {
            throw ValidationError(fmt::format("{} does not belong to the {} problem", to_string(m), to_string(bc)));
        }
        sys.omegas.push_back(mode_frequency(m, geom));
    }
    const auto dim = static_cast<Eigen::Index>(2 * component.size());
    sys.M = Eigen::MatrixXcd::Zero(dim, dim);

    if (bc == Boundary::Dirichlet) {
        fill_dirichlet(sys, geom, options.tol_res);
    } else if (options.convention == SecularConvention::Printed) {
        fill_printed_neumann(sys, geom, options.tol_res);
    } else {
        fill_neumann_from_coefficients(sys, geom, options);
    }
    return sys;
}

SecularSystem secular_matrix(const ResonanceGraph& component, const CavityGeometry& geom, Boundary bc,
                             const SecularOptions& options) {
    return secular_matrix(component.nodes, geom, bc, options);
}

std::vector<Complex> two_mode_eigenvalues(double a, double b, double c, double omega_k) {
    const Complex root = std::sqrt(Complex(a * a + 4.0 * b * c, 0.0));
    const double d = 4.0 * omega_k;
    return {(a + root) / d, (a - root) / d, (-a + root) / d, (-a - root) / d};
}

namespace {

bool by_real_desc(const Complex& x, const Complex& y) {
    if (x.real() != y.real()) return x.real() > y.real();
    return x.imag() > y.imag();
}

// M commutes with sigma_x acting inside every (A_k, B_k) block when each 2x2
// block has the form [[x, y], [y, x]]; then the spectrum splits into the two
// n x n problems with entries x + sigma y, sigma = +-1.
std::optional<std::vector<Complex>> block_closed_form(const SecularSystem& sys) {
    const std::size_t n = sys.size();
    if (n > 2) return std::nullopt;
    const double scale = std::max(1.0, sys.M.cwiseAbs().maxCoeff());
    auto block = [&](std::size_t p, std::size_t q, double sigma) -> std::optional<Complex> {
        const auto r = static_cast<Eigen::Index>(2 * p);
        const auto c = static_cast<Eigen::Index>(2 * q);
        const Complex x = sys.M(r, c);
        const Complex y = sys.M(r, c + 1);
        if (std::abs(sys.M(r + 1, c + 1) - x) > 1e-14 * scale || std::abs(sys.M(r + 1, c) - y) > 1e-14 * scale) {
            return std::nullopt;
        }
        return x + sigma * y;
    };
    std::vector<Complex> out;
    for (const double sigma : {1.0, -1.0}) {
        if (n == 1) {
            auto p = block(0, 0, sigma);
            if (!p) return std::nullopt;
            out.push_back(*p);
            continue;
        }
        auto P = block(0, 0, sigma);
        auto Q = block(0, 1, sigma);
        auto R = block(1, 0, sigma);
        auto S = block(1, 1, sigma);
        if (!P || !Q || !R || !S) return std::nullopt;
        const Complex mean = 0.5 * (*P + *S);
        const Complex half = 0.5 * (*P - *S);
        const Complex root = std::sqrt(half * half + *Q * *R);
        out.push_back(mean + root);
        out.push_back(mean - root);
    }
    std::sort(out.begin(), out.end(), by_real_desc);
    return out;
}

}  // namespace

GrowthRates growth_rates(const SecularSystem& sys) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(sys.M, /*computeEigenvectors=*/false);
    if (solver.info() != Eigen::Success) throw NumericalError("eigensolver did not converge");
    GrowthRates out;
    const auto& ev = solver.eigenvalues();
    out.eigenvalues.assign(ev.data(), ev.data() + ev.size());
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), by_real_desc);
    out.lambda_max = out.eigenvalues.front().real();
    out.closed_form = block_closed_form(sys);
    return out;
}

double uncoupled_rate(const ModeIndex& mode, const CavityGeometry& geom, Boundary bc, double tol_res) {
    validate_driven(geom);
    if (bc == Boundary::Dirichlet && mode.nx == 0) {
        throw ValidationError(fmt::format("no Dirichlet mode with nx = 0 ({})", to_string(mode)));
    }
    ModeIndex as_scalar = mode;
    as_scalar.kind = bc == Boundary::Dirichlet ? FieldKind::TE : FieldKind::NeumannScalar;
    if (!is_valid(as_scalar)) as_scalar.kind = bc == Boundary::Dirichlet ? FieldKind::DirichletScalar : FieldKind::TM;
    validate(as_scalar);
    const double w = mode_frequency(as_scalar, geom);
    if (std::abs(2.0 * w - geom.Omega) > tol_res * geom.Omega) {
        throw ValidationError(fmt::format("drive Omega={} is not 2 omega={} for {}", geom.Omega, 2.0 * w,
                                          to_string(mode)));
    }
    const double kappa = axial_wavenumber_sq(mode, geom);
    const double wp2 = w * w - kappa;
    return bc == Boundary::Neumann ? (w * w + wp2) / (2.0 * w) : (w * w - wp2) / (2.0 * w);
}

SlowAmplitudes vacuum_amplitudes(const SecularSystem& sys, std::size_t excitation) {
    if (excitation >= sys.size()) throw ValidationError("excitation label outside the component");
    SlowAmplitudes s;
    s.A.assign(sys.size(), Complex{});
    s.B.assign(sys.size(), Complex{});
    s.B[excitation] = 1.0 / std::sqrt(2.0 * sys.omegas[excitation]);
    return s;
}

namespace {

Eigen::MatrixXcd expm_pade(const Eigen::MatrixXcd& M) {
    constexpr int q = 8;
    const double norm = M.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const Eigen::MatrixXcd X = M / std::ldexp(1.0, squarings);

    const auto n = M.rows();
    Eigen::MatrixXcd num = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd den = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(n, n);
    double c = 1.0;
    for (int k = 1; k <= q; ++k) {
        c *= static_cast<double>(q - k + 1) / static_cast<double>(k * (2 * q - k + 1));
        power = power * X;
        num += c * power;
        den += ((k % 2 == 0) ? c : -c) * power;
    }
    Eigen::MatrixXcd E = den.partialPivLu().solve(num);
    for (int s = 0; s < squarings; ++s) E = E * E;
    return E;
}

std::optional<Eigen::MatrixXcd> expm_eigen(const Eigen::MatrixXcd& M, bool require_conditioning) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(M);
    if (solver.info() != Eigen::Success) return std::nullopt;
    const Eigen::MatrixXcd& V = solver.eigenvectors();
    const auto sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(V).singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    if (require_conditioning && !(cond < kEigenConditionLimit)) return std::nullopt;
    const Eigen::VectorXcd expd = solver.eigenvalues().array().exp();
    return Eigen::MatrixXcd(V * expd.asDiagonal() * V.inverse());
}

}  // namespace

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& M, ExpmMethod method) {
    if (M.rows() != M.cols()) throw ValidationError("matrix exponential needs a square matrix");
    if (M.rows() == 0) return M;
    switch (method) {
        case ExpmMethod::Pade:
            return expm_pade(M);
        case ExpmMethod::Eigen: {
            auto E = expm_eigen(M, false);
            if (!E) throw NumericalError("eigensolver did not converge");
            return *E;
        }
        case ExpmMethod::Automatic:
            if (auto E = expm_eigen(M, true)) return *E;
            return expm_pade(M);
    }
    return expm_pade(M);
}

SlowAmplitudes evolve_secular(const SecularSystem& sys, const SlowAmplitudes& initial, double tau) {
    if (tau < 0.0) throw ValidationError("slow time tau must be non-negative");
    if (initial.A.size() != sys.size() || initial.B.size() != sys.size()) {
        throw ValidationError("initial amplitudes do not match the secular system");
    }
    const auto n = static_cast<Eigen::Index>(sys.size());
    Eigen::VectorXcd v(2 * n);
    for (Eigen::Index k = 0; k < n; ++k) {
        v(2 * k) = initial.A[static_cast<std::size_t>(k)];
        v(2 * k + 1) = initial.B[static_cast<std::size_t>(k)];
    }
    const Eigen::VectorXcd out = matrix_exponential(sys.M * (tau - initial.tau)) * v;
    SlowAmplitudes s;
    s.tau = tau;
    for (Eigen::Index k = 0; k < n; ++k) {
        s.A.push_back(out(2 * k));
        s.B.push_back(out(2 * k + 1));
    }
    return s;
}

std::vector<double> msa_photon_numbers(const SecularSystem& sys, double tau) {
    if (tau < 0.0) throw ValidationError("slow time tau must be non-negative");
    const Eigen::MatrixXcd E = matrix_exponential(sys.M * tau);
    std::vector<double> photons(sys.size(), 0.0);
    for (std::size_t n = 0; n < sys.size(); ++n) {
        const double b0 = 1.0 / std::sqrt(2.0 * sys.omegas[n]);
        for (std::size_t k = 0; k < sys.size(); ++k) {
            const Complex a = E(static_cast<Eigen::Index>(2 * k), static_cast<Eigen::Index>(2 * n + 1)) * b0;
            photons[k] += 2.0 * sys.omegas[k] * std::norm(a);
        }
    }
    return photons;
}

}  // namespace dce
