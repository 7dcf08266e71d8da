#include "dce/oracle.hpp"

#include "dce/errors.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <ostream>

#include <boost/numeric/odeint.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

namespace dce {

namespace odeint = boost::numeric::odeint;

namespace {

using State = std::vector<double>;

// Wall trajectory and the derivatives of lam = Lx_dot / Lx.
struct WallKinematics {
    double L, lam, lam_dot, lam_ddot;
};

WallKinematics kinematics(const CavityGeometry& g, double t) {
    const double s = std::sin(g.Omega * t);
    const double c = std::cos(g.Omega * t);
    const double W = g.Omega;
    const double L = g.Lx0 * (1.0 + g.epsilon * s);
    const double L1 = g.Lx0 * g.epsilon * W * c;
    const double L2 = -g.Lx0 * g.epsilon * W * W * s;
    const double L3 = -g.Lx0 * g.epsilon * W * W * W * c;
    const double lam = L1 / L;
    const double lam_dot = L2 / L - lam * lam;
    const double lam_ddot = L3 / L - L2 * L1 / (L * L) - 2.0 * lam * lam_dot;
    return {L, lam, lam_dot, lam_ddot};
}

}  // namespace

TruncatedSystem::TruncatedSystem(std::vector<ModeIndex> basis, const CavityGeometry& geom, const GaugeProfile& gauge,
                                 XNormalization norm)
    : basis_(std::move(basis)), geom_(geom) {
    if (basis_.empty()) throw ValidationError("oracle basis is empty");
    validate_driven(geom_);
    const FieldKind kind = basis_.front().kind;
    for (const auto& m : basis_) {
        validate(m);
        if (m.kind != kind) throw ValidationError("oracle basis mixes field kinds");
    }
    bc_ = boundary_of(kind);
    const auto n = static_cast<Eigen::Index>(basis_.size());
    omegas_.reserve(basis_.size());
    axial_.resize(n);
    transverse_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& m = basis_[static_cast<std::size_t>(i)];
        const double w = mode_frequency(m, geom_);
        omegas_.push_back(w);
        axial_(i) = std::pow(m.nx * kPi, 2);
        transverse_(i) = w * w - axial_(i) / (geom_.Lx0 * geom_.Lx0);
    }
    tables_ = build_coupling_tables(basis_, geom_, gauge, norm);
    if (bc_ == Boundary::Neumann) {
        gt_ = tables_.g.transpose();
        r_ = tables_.r.transpose();
        eta_ = tables_.eta.transpose();
        rw_ = r_;
        for (Eigen::Index j = 0; j < n; ++j) rw_.col(j) *= omegas_[static_cast<std::size_t>(j)] *
                                                          omegas_[static_cast<std::size_t>(j)];
    } else {
        gt_ = tables_.g;
        r_ = Eigen::MatrixXd::Zero(n, n);
        eta_ = r_;
        rw_ = r_;
    }
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> TruncatedSystem::linear_coefficients(double t) const {
    const auto k = kinematics(geom_, t);
    const double L2 = k.L * k.L;
    Eigen::MatrixXd C;
    Eigen::MatrixXd D;
    if (bc_ == Boundary::Neumann) {
        const double stretch = L2 / (geom_.Lx0 * geom_.Lx0);
        C = k.lam_dot * (-gt_ + 2.0 * L2 * rw_);
        D = k.lam * (-2.0 * gt_ + stretch * eta_ + L2 * rw_) - k.lam_ddot * L2 * r_;
    } else {
        C = k.lam_dot * gt_;
        D = 2.0 * k.lam * gt_;
    }
    C.diagonal() -= (axial_.array() / L2 + transverse_.array()).matrix();
    return {std::move(C), std::move(D)};
}

void TruncatedSystem::acceleration(double t, const Eigen::Ref<const Eigen::MatrixXd>& Q,
                                   const Eigen::Ref<const Eigen::MatrixXd>& Qd, Eigen::Ref<Eigen::MatrixXd> Qdd) const {
    const auto k = kinematics(geom_, t);
    const double L2 = k.L * k.L;
    const Eigen::ArrayXd w2 = axial_.array() / L2 + transverse_.array();
    Qdd.noalias() = -(Q.array().colwise() * w2).matrix();
    if (bc_ == Boundary::Neumann) {
        const double stretch = L2 / (geom_.Lx0 * geom_.Lx0);
        Qdd.noalias() += (-k.lam_dot) * (gt_ * Q);
        Qdd.noalias() += (2.0 * k.lam_dot * L2) * (rw_ * Q);
        Qdd.noalias() += (-2.0 * k.lam) * (gt_ * Qd);
        Qdd.noalias() += (k.lam * stretch) * (eta_ * Qd);
        Qdd.noalias() += (k.lam * L2) * (rw_ * Qd);
        Qdd.noalias() += (-k.lam_ddot * L2) * (r_ * Qd);
    } else {
        Qdd.noalias() += k.lam_dot * (gt_ * Q);
        Qdd.noalias() += (2.0 * k.lam) * (gt_ * Qd);
    }
}

TruncatedSystem assemble_reduced_ode(const std::vector<ModeIndex>& basis, const CavityGeometry& geom,
                                     const GaugeProfile& gauge, XNormalization norm) {
    return TruncatedSystem(basis, geom, gauge, norm);
}

std::vector<ModeIndex> oracle_basis(const std::vector<ModeIndex>& component, double factor, int min_x) {
    if (component.empty()) throw ValidationError("oracle basis needs at least one mode");
    if (!(factor >= 1.0)) throw ValidationError("basis factor must be >= 1");
    const ModeIndex& first = component.front();
    int max_x = 0;
    for (const auto& m : component) {
        validate(m);
        if (m.kind != first.kind) throw ValidationError("component mixes field kinds");
        if (!m.same_transverse(first)) throw ValidationError("component mixes transverse indices");
        max_x = std::max(max_x, m.nx);
    }
    const int top = std::max(min_x, static_cast<int>(std::ceil(factor * max_x)));
    std::vector<ModeIndex> basis;
    for (int nx = 0; nx <= top; ++nx) {
        ModeIndex m{nx, first.ny, first.nz, first.kind};
        if (is_valid(m)) basis.push_back(m);
    }
    return basis;
}

ModeState vacuum_state(const TruncatedSystem& sys, std::size_t excitation) {
    if (excitation >= sys.size()) throw ValidationError("excitation label out of range");
    ModeState s{std::vector<Complex>(sys.size()), std::vector<Complex>(sys.size())};
    const double w = sys.omegas()[excitation];
    s.Q[excitation] = 1.0 / std::sqrt(2.0 * w);
    s.Qdot[excitation] = Complex(0.0, -std::sqrt(w / 2.0));
    return s;
}

Trajectory integrate(const TruncatedSystem& sys, const ModeState& initial, std::span<const double> sample_times,
                     const OracleControls& controls) {
    const std::size_t n = sys.size();
    if (initial.Q.size() != n || initial.Qdot.size() != n) throw ValidationError("initial state size mismatch");
    if (!(controls.rel_tol > 0.0) || !(controls.abs_tol > 0.0)) throw ValidationError("tolerances must be positive");
    if (!std::is_sorted(sample_times.begin(), sample_times.end()) ||
        (!sample_times.empty() && sample_times.front() < 0.0))
        throw ValidationError("sample times must be ascending and non-negative");

    const auto N = static_cast<Eigen::Index>(n);
    State x(4 * n);
    for (std::size_t k = 0; k < n; ++k) {
        x[k] = initial.Q[k].real();
        x[n + k] = initial.Q[k].imag();
        x[2 * n + k] = initial.Qdot[k].real();
        x[3 * n + k] = initial.Qdot[k].imag();
    }

    auto rhs = [&sys, n, N](const State& s, State& ds, double t) {
        Eigen::Map<const Eigen::MatrixXd> Q(s.data(), N, 2);
        Eigen::Map<const Eigen::MatrixXd> Qd(s.data() + 2 * n, N, 2);
        Eigen::Map<Eigen::MatrixXd> dQ(ds.data(), N, 2);
        Eigen::Map<Eigen::MatrixXd> dQd(ds.data() + 2 * n, N, 2);
        dQ = Qd;
        sys.acceleration(t, Q, Qd, dQd);
    };

    std::vector<double> times;
    times.reserve(sample_times.size() + 1);
    const bool prepend = sample_times.empty() || sample_times.front() > 0.0;
    if (prepend) times.push_back(0.0);
    times.insert(times.end(), sample_times.begin(), sample_times.end());

    Trajectory traj;
    traj.times.assign(sample_times.begin(), sample_times.end());
    traj.states.reserve(sample_times.size());
    bool skip_first = prepend;
    auto observer = [&](const State& s, double) {
        if (skip_first) {
            skip_first = false;
            return;
        }
        ModeState m{std::vector<Complex>(n), std::vector<Complex>(n)};
        for (std::size_t k = 0; k < n; ++k) {
            m.Q[k] = {s[k], s[n + k]};
            m.Qdot[k] = {s[2 * n + k], s[3 * n + k]};
        }
        traj.states.push_back(std::move(m));
    };

    if (times.size() < 2) {
        observer(x, 0.0);
        return traj;
    }
    auto stepper = odeint::make_controlled(controls.abs_tol, controls.rel_tol,
                                           odeint::runge_kutta_fehlberg78<State>());
    try {
        odeint::integrate_times(stepper, rhs, x, times.begin(), times.end(), controls.initial_step, observer,
                                odeint::max_step_checker(static_cast<int>(controls.max_steps_per_sample)));
    } catch (const odeint::odeint_error& e) {
        throw NumericalError(fmt::format("ODE integration failed: {}", e.what()));
    }
    for (const auto& st : traj.states)
        for (std::size_t k = 0; k < n; ++k)
            if (!std::isfinite(st.Q[k].real()) || !std::isfinite(st.Q[k].imag()))
                throw NumericalError("ODE integration produced a non-finite state");
    return traj;
}

std::vector<Trajectory> integrate_excitations(const TruncatedSystem& sys, std::span<const double> sample_times,
                                              const OracleControls& controls) {
    std::vector<std::size_t> labels = controls.excitations;
    if (labels.empty())
        for (std::size_t i = 0; i < sys.size(); ++i) labels.push_back(i);
    std::vector<Trajectory> out;
    out.reserve(labels.size());
    if (!controls.parallel) {
        for (std::size_t n : labels) out.push_back(integrate(sys, vacuum_state(sys, n), sample_times, controls));
        return out;
    }
    std::vector<std::future<Trajectory>> jobs;
    jobs.reserve(labels.size());
    for (std::size_t n : labels) {
        ModeState init = vacuum_state(sys, n);
        jobs.push_back(std::async(std::launch::async, [&sys, sample_times, &controls, init = std::move(init)] {
            return integrate(sys, init, sample_times, controls);
        }));
    }
    for (auto& j : jobs) out.push_back(j.get());
    return out;
}

std::vector<double> drive_period_grid(const CavityGeometry& geom, double t_final, std::size_t periods_per_sample) {
    validate_driven(geom);
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) throw ValidationError("t_final must be finite and >= 0");
    if (periods_per_sample == 0) throw ValidationError("periods per sample must be positive");
    const double T = 2.0 * kPi / geom.Omega;
    const auto count = static_cast<std::size_t>(std::floor(t_final / T + 1e-9));
    std::vector<double> grid;
    for (std::size_t i = periods_per_sample; i <= count; i += periods_per_sample)
        grid.push_back(static_cast<double>(i) * T);
    return grid;
}

std::pair<Complex, Complex> bogoliubov_pair(Complex Q, Complex Qdot, double omega, double t) {
    const Complex I(0.0, 1.0);
    const Complex denom = 2.0 * I * omega;
    const Complex A = (Qdot + I * omega * Q) * std::exp(-I * omega * t) / denom;
    const Complex B = (I * omega * Q - Qdot) * std::exp(I * omega * t) / denom;
    return {A, B};
}

BogoliubovState extract_bogoliubov(const TruncatedSystem& sys, const std::vector<std::size_t>& excitations,
                                   const std::vector<ModeState>& states, double t) {
    if (excitations.size() != states.size()) throw ValidationError("one state per excitation is required");
    BogoliubovState bog;
    bog.excitations = excitations;
    bog.t_final = t;
    for (const auto& s : states) {
        std::vector<Complex> A(sys.size());
        std::vector<Complex> B(sys.size());
        for (std::size_t k = 0; k < sys.size(); ++k)
            std::tie(A[k], B[k]) = bogoliubov_pair(s.Q[k], s.Qdot[k], sys.omegas()[k], t);
        bog.A.push_back(std::move(A));
        bog.B.push_back(std::move(B));
    }
    return bog;
}

double photon_number(const BogoliubovState& bog, const TruncatedSystem& sys, std::size_t k) {
    if (k >= sys.size()) throw ValidationError("mode index out of range");
    double total = 0.0;
    for (const auto& A : bog.A) total += std::norm(A[k]);
    return 2.0 * sys.omegas()[k] * total;
}

double bogoliubov_norm(const BogoliubovState& bog, const TruncatedSystem& sys, std::size_t slot) {
    if (slot >= bog.A.size()) throw ValidationError("excitation slot out of range");
    double total = 0.0;
    for (std::size_t k = 0; k < sys.size(); ++k)
        total += 2.0 * sys.omegas()[k] * (std::norm(bog.B[slot][k]) - std::norm(bog.A[slot][k]));
    return total;
}

PhotonSeries photon_series(const TruncatedSystem& sys, std::span<const double> sample_times,
                           const OracleControls& controls) {
    std::vector<std::size_t> labels = controls.excitations;
    if (labels.empty())
        for (std::size_t i = 0; i < sys.size(); ++i) labels.push_back(i);
    OracleControls c = controls;
    c.excitations = labels;
    const auto trajs = integrate_excitations(sys, sample_times, c);
    PhotonSeries out;
    out.times.assign(sample_times.begin(), sample_times.end());
    for (std::size_t s = 0; s < sample_times.size(); ++s) {
        std::vector<ModeState> states;
        states.reserve(trajs.size());
        for (const auto& tr : trajs) states.push_back(tr.states[s]);
        const auto bog = extract_bogoliubov(sys, labels, states, sample_times[s]);
        std::vector<double> row(sys.size());
        for (std::size_t k = 0; k < sys.size(); ++k) row[k] = photon_number(bog, sys, k);
        out.photons.push_back(std::move(row));
    }
    return out;
}

void write_trajectory_csv(std::ostream& os, const TruncatedSystem& sys, const Trajectory& traj) {
    os << "t[L]";
    for (const auto& m : sys.basis()) {
        const auto tag = fmt::format("_{}_{}_{}", m.nx, m.ny, m.nz);
        fmt::print(os, ",Re_Q{0},Im_Q{0},Re_Qdot{0},Im_Qdot{0}", tag);
    }
    os << '\n';
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        fmt::print(os, "{:.17g}", traj.times[s]);
        const auto& st = traj.states[s];
        for (std::size_t k = 0; k < sys.size(); ++k)
            fmt::print(os, ",{:.17g},{:.17g},{:.17g},{:.17g}", st.Q[k].real(), st.Q[k].imag(), st.Qdot[k].real(),
                       st.Qdot[k].imag());
        os << '\n';
    }
}

}  // namespace dce
