#include "dce/spectrum.hpp"

#include "dce/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <numeric>
#include <tuple>

#include <fmt/format.h>

namespace dce {

double CavityGeometry::Lx(double t) const { return Lx0 * (1.0 + epsilon * std::sin(Omega * t)); }

double CavityGeometry::Lx_dot(double t) const { return Lx0 * epsilon * Omega * std::cos(Omega * t); }

void validate_dimensions(const CavityGeometry& geom) {
    if (!(geom.Lx0 > 0.0) || !(geom.Ly > 0.0) || !(geom.Lz > 0.0)) {
        throw ValidationError(fmt::format("cavity dimensions must be positive (Lx0={}, Ly={}, Lz={})",
                                          geom.Lx0, geom.Ly, geom.Lz));
    }
    if (!(geom.epsilon >= 0.0) || !(geom.epsilon < 0.1)) {
        throw ValidationError(fmt::format("epsilon must satisfy 0 <= epsilon < 0.1, got {}", geom.epsilon));
    }
}

void validate_driven(const CavityGeometry& geom) {
    validate_dimensions(geom);
    if (!(geom.Omega > 0.0) || !std::isfinite(geom.Omega)) {
        throw ValidationError(fmt::format("drive frequency Omega must be positive, got {}", geom.Omega));
    }
}

Boundary boundary_of(FieldKind kind) {
    switch (kind) {
        case FieldKind::DirichletScalar:
        case FieldKind::TE:
            return Boundary::Dirichlet;
        case FieldKind::NeumannScalar:
        case FieldKind::TM:
            return Boundary::Neumann;
    }
    return Boundary::Neumann;
}

std::string_view to_string(FieldKind kind) {
    switch (kind) {
        case FieldKind::DirichletScalar: return "dirichlet";
        case FieldKind::NeumannScalar: return "neumann";
        case FieldKind::TE: return "te";
        case FieldKind::TM: return "tm";
    }
    return "?";
}

std::string_view to_string(Boundary bc) { return bc == Boundary::Dirichlet ? "dirichlet" : "neumann"; }

FieldKind parse_field_kind(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "dirichlet" || lower == "dirichletscalar") return FieldKind::DirichletScalar;
    if (lower == "neumann" || lower == "neumannscalar") return FieldKind::NeumannScalar;
    if (lower == "te") return FieldKind::TE;
    if (lower == "tm") return FieldKind::TM;
    throw ValidationError(fmt::format("unknown field kind '{}' (expected dirichlet|neumann|te|tm)", text));
}

std::string to_string(const ModeIndex& mode) {
    return fmt::format("{}({},{},{})", to_string(mode.kind), mode.nx, mode.ny, mode.nz);
}

bool is_valid(const ModeIndex& m) {
    if (m.nx < 0 || m.ny < 0 || m.nz < 0) return false;
    const bool transverse_nonzero = m.ny != 0 || m.nz != 0;
    switch (m.kind) {
        case FieldKind::DirichletScalar: return m.nx >= 1 && m.ny >= 1 && m.nz >= 1;
        case FieldKind::NeumannScalar: return m.nx != 0 || transverse_nonzero;
        case FieldKind::TE: return m.nx >= 1 && transverse_nonzero;
        case FieldKind::TM: return transverse_nonzero;
    }
    return false;
}

void validate(const ModeIndex& mode) {
    if (!is_valid(mode)) {
        throw ValidationError(fmt::format("invalid index combination {}", to_string(mode)));
    }
}

namespace {

double transverse_sq(const ModeIndex& m, const CavityGeometry& g) {
    const double ay = m.ny / g.Ly;
    const double az = m.nz / g.Lz;
    return ay * ay + az * az;
}

}  // namespace

double mode_frequency_at(const ModeIndex& mode, const CavityGeometry& geom, double Lx) {
    const double ax = mode.nx / Lx;
    return kPi * std::sqrt(ax * ax + transverse_sq(mode, geom));
}

double mode_frequency(const ModeIndex& mode, const CavityGeometry& geom) {
    validate(mode);
    validate_dimensions(geom);
    return mode_frequency_at(mode, geom, geom.Lx0);
}

double axial_wavenumber_sq(const ModeIndex& mode, const CavityGeometry& geom) {
    const double k = mode.nx * kPi / geom.Lx0;
    return k * k;
}

std::vector<ModeIndex> enumerate_modes(FieldKind kind, const CavityGeometry& geom, double omega_cutoff) {
    validate_dimensions(geom);
    std::vector<std::pair<double, ModeIndex>> found;
    if (!(omega_cutoff > 0.0)) return {};
    const double q = omega_cutoff / kPi;
    const int max_x = static_cast<int>(std::floor(q * geom.Lx0)) + 1;
    const int max_y = static_cast<int>(std::floor(q * geom.Ly)) + 1;
    const int max_z = static_cast<int>(std::floor(q * geom.Lz)) + 1;
    for (int nx = 0; nx <= max_x; ++nx) {
        for (int ny = 0; ny <= max_y; ++ny) {
            for (int nz = 0; nz <= max_z; ++nz) {
                const ModeIndex m{nx, ny, nz, kind};
                if (!is_valid(m)) continue;
                const double w = mode_frequency_at(m, geom, geom.Lx0);
                if (w <= omega_cutoff) found.emplace_back(w, m);
            }
        }
    }
    std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return std::tie(a.second.nx, a.second.ny, a.second.nz) < std::tie(b.second.nx, b.second.ny, b.second.nz);
    });
    std::vector<ModeIndex> out;
    out.reserve(found.size());
    for (const auto& [w, m] : found) out.push_back(m);
    return out;
}

bool is_parametric(const ModeIndex& mode, const CavityGeometry& geom, double tol) {
    const double w = mode_frequency_at(mode, geom, geom.Lx0);
    return std::abs(2.0 * w - geom.Omega) <= tol * geom.Omega;
}

std::optional<ResonanceType> resonance_between(const ModeIndex& k, const ModeIndex& j,
                                               const CavityGeometry& geom, double tol) {
    if (k == j || !k.same_transverse(j)) return std::nullopt;
    const double wk = mode_frequency_at(k, geom, geom.Lx0);
    const double wj = mode_frequency_at(j, geom, geom.Lx0);
    const double band = tol * geom.Omega;
    if (std::abs(wk + wj - geom.Omega) <= band) return ResonanceType::Sum;
    if (std::abs(std::abs(wk - wj) - geom.Omega) <= band) return ResonanceType::Difference;
    return std::nullopt;
}

std::vector<std::vector<std::size_t>> ResonanceGraph::components() const {
    std::vector<std::size_t> parent(nodes.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto root = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    for (const auto& e : edges) parent[root(e.a)] = root(e.b);

    std::vector<std::vector<std::size_t>> out;
    std::vector<std::ptrdiff_t> slot(nodes.size(), -1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::size_t r = root(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<std::ptrdiff_t>(out.size());
            out.emplace_back();
        }
        out[static_cast<std::size_t>(slot[r])].push_back(i);
    }
    return out;
}

std::optional<std::size_t> ResonanceGraph::find(const ModeIndex& mode) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] == mode) return i;
    }
    return std::nullopt;
}

ResonanceGraph build_resonance_graph(const std::vector<ModeIndex>& modes, const CavityGeometry& geom,
                                     double tol_res) {
    validate_driven(geom);
    ResonanceGraph g;
    g.nodes = modes;
    std::stable_sort(g.nodes.begin(), g.nodes.end(), [&](const ModeIndex& a, const ModeIndex& b) {
        const double wa = mode_frequency_at(a, geom, geom.Lx0);
        const double wb = mode_frequency_at(b, geom, geom.Lx0);
        if (wa != wb) return wa < wb;
        return std::tie(a.nx, a.ny, a.nz) < std::tie(b.nx, b.ny, b.nz);
    });
    g.nodes.erase(std::unique(g.nodes.begin(), g.nodes.end()), g.nodes.end());
    for (const auto& m : g.nodes) g.parametric.push_back(is_parametric(m, geom, tol_res));
    for (std::size_t a = 0; a < g.nodes.size(); ++a) {
        for (std::size_t b = a + 1; b < g.nodes.size(); ++b) {
            if (auto type = resonance_between(g.nodes[a], g.nodes[b], geom, tol_res)) {
                g.edges.push_back({a, b, *type});
            }
        }
    }
    return g;
}

namespace {

// Mode sharing (ny, nz) with `like` whose frequency matches `target`, if any.
std::optional<ModeIndex> mode_at_frequency(const ModeIndex& like, double target, const CavityGeometry& geom,
                                           double band) {
    if (!(target > 0.0)) return std::nullopt;
    const double q = target / kPi;
    const double ax_sq = q * q - transverse_sq(like, geom);
    if (ax_sq < -1e-12 * q * q) return std::nullopt;
    const int guess = static_cast<int>(std::lround(geom.Lx0 * std::sqrt(std::max(ax_sq, 0.0))));
    for (int nx = std::max(0, guess - 1); nx <= guess + 1; ++nx) {
        ModeIndex m = like;
        m.nx = nx;
        if (!is_valid(m)) continue;
        if (std::abs(mode_frequency_at(m, geom, geom.Lx0) - target) <= band) return m;
    }
    return std::nullopt;
}

}  // namespace

ResonanceGraph resonance_partners(const ModeIndex& mode, const CavityGeometry& geom, double tol_res,
                                  std::optional<double> omega_cutoff) {
    validate(mode);
    validate_driven(geom);
    const double cutoff = omega_cutoff.value_or(16.0 * geom.Omega);
    const double band = tol_res * geom.Omega;

    std::vector<ModeIndex> seen{mode};
    std::deque<ModeIndex> queue{mode};
    while (!queue.empty()) {
        const ModeIndex u = queue.front();
        queue.pop_front();
        const double w = mode_frequency_at(u, geom, geom.Lx0);
        for (const double target : {w + geom.Omega, w - geom.Omega, geom.Omega - w}) {
            if (target > cutoff) continue;
            auto partner = mode_at_frequency(u, target, geom, band);
            if (!partner || *partner == u) continue;
            if (std::find(seen.begin(), seen.end(), *partner) != seen.end()) continue;
            seen.push_back(*partner);
            queue.push_back(*partner);
        }
    }
    return build_resonance_graph(seen, geom, tol_res);
}

}  // namespace dce
