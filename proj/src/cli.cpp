#include "dce/cli.hpp"

#include "dce/errors.hpp"
#include "dce/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <regex>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace dce::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || !std::isfinite(v))
        throw ValidationError(fmt::format("{}: '{}' is not a finite number", key, text));
    return v;
}

long long parse_int(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    long long v = 0;
    try {
        v = std::stoll(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw ValidationError(fmt::format("{}: '{}' is not an integer", key, text));
    return v;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

const std::regex& drive_pattern() {
    static const std::regex re(
        R"(^\s*2\s*\*\s*omega\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*(?:,\s*([A-Za-z]+)\s*)?\)\s*$)");
    return re;
}

std::optional<ModeIndex> drive_mode(const std::string& drive, FieldKind default_kind) {
    std::smatch m;
    if (!std::regex_match(drive, m, drive_pattern())) return std::nullopt;
    ModeIndex mode{std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]), default_kind};
    if (m[4].matched) mode.kind = parse_field_kind(m[4].str());
    return mode;
}

std::string mode_label(const ModeIndex& m) {
    return fmt::format("{}_{}_{}_{}", to_string(m.kind), m.nx, m.ny, m.nz);
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

GaugeProfile gauge_of(const RunConfig& cfg) {
    if (cfg.gauge == "default") return default_gauge();
    if (cfg.gauge == "alt") return alt_gauge();
    throw ValidationError(fmt::format("unknown gauge '{}' (default|alt)", cfg.gauge));
}

SecularOptions secular_options(const RunConfig& cfg) {
    SecularOptions opt;
    opt.convention = cfg.convention;
    opt.gauge = gauge_of(cfg);
    opt.normalization = cfg.normalization;
    return opt;
}

ModeIndex target_mode(const RunConfig& cfg) {
    if (cfg.mode) return *cfg.mode;
    if (auto m = drive_mode(cfg.drive, cfg.kind)) return *m;
    throw ValidationError("no target mode: set 'mode' or use a symbolic drive");
}

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::string& origin) {
    KeyValues out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError(fmt::format("{}:{}: expected key = value", origin, number));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError(fmt::format("{}:{}: empty key or value", origin, number));
        out[key] = value;
    }
    return out;
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(fmt::format("cannot open config file '{}'", path));
    return parse_key_values(in, path);
}

OutputFormat parse_format(const std::string& text) {
    const std::string t = lower(text);
    if (t == "csv") return OutputFormat::Csv;
    if (t == "json") return OutputFormat::Json;
    throw ValidationError(fmt::format("unknown format '{}' (csv|json)", text));
}

ModeIndex parse_mode(const std::string& text, FieldKind default_kind) {
    static const std::regex re(R"(^\s*\(?\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*(?:,\s*([A-Za-z]+)\s*)?\)?\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, re)) throw ValidationError(fmt::format("mode: cannot parse '{}'", text));
    ModeIndex mode{std::stoi(m[1]), std::stoi(m[2]), std::stoi(m[3]), default_kind};
    if (m[4].matched) mode.kind = parse_field_kind(m[4].str());
    validate(mode);
    return mode;
}

double resolve_drive(const std::string& drive, const CavityGeometry& geom, FieldKind default_kind) {
    if (auto mode = drive_mode(drive, default_kind)) {
        validate(*mode);
        return 2.0 * mode_frequency(*mode, geom);
    }
    const double W = parse_double("drive", trim(drive));
    if (!(W > 0.0)) throw ValidationError("drive: Omega must be positive");
    return W;
}

RunConfig make_run_config(const KeyValues& values) {
    static const std::set<std::string> known{
        "Lx0", "Ly", "Lz", "epsilon", "drive", "kind", "mode", "cutoff", "t_final", "sample_periods", "tol",
        "basis", "max_steps", "gauge", "convention", "normalization", "L", "delta_max", "v_sound", "duration"};
    for (const auto& [k, v] : values)
        if (!known.contains(k)) throw ValidationError(fmt::format("unknown config key '{}'", k));
    const auto get = [&](const std::string& k) -> std::optional<std::string> {
        if (auto it = values.find(k); it != values.end()) return it->second;
        return std::nullopt;
    };

    RunConfig cfg;
    if (auto v = get("Lx0")) cfg.geom.Lx0 = parse_double("Lx0", *v);
    if (auto v = get("Ly")) cfg.geom.Ly = parse_double("Ly", *v);
    if (auto v = get("Lz")) cfg.geom.Lz = parse_double("Lz", *v);
    if (auto v = get("epsilon")) cfg.geom.epsilon = parse_double("epsilon", *v);
    validate_dimensions(cfg.geom);
    if (auto v = get("kind")) cfg.kind = parse_field_kind(*v);
    if (auto v = get("mode")) cfg.mode = parse_mode(*v, cfg.kind);
    if (auto v = get("drive")) {
        cfg.drive = *v;
        cfg.geom.Omega = resolve_drive(cfg.drive, cfg.geom, cfg.kind);
    }
    if (auto v = get("cutoff")) {
        cfg.cutoff = parse_double("cutoff", *v);
        if (cfg.cutoff < 0.0) throw ValidationError("cutoff must be >= 0");
    }
    if (auto v = get("t_final")) {
        cfg.t_final = parse_double("t_final", *v);
        if (*cfg.t_final < 0.0) throw ValidationError("t_final must be >= 0");
    }
    if (auto v = get("sample_periods")) {
        const auto n = parse_int("sample_periods", *v);
        if (n < 1) throw ValidationError("sample_periods must be >= 1");
        cfg.sample_periods = static_cast<std::size_t>(n);
    }
    if (auto v = get("tol")) {
        cfg.tol = parse_double("tol", *v);
        if (!(cfg.tol > 0.0) || cfg.tol >= 1.0) throw ValidationError("tol must lie in (0, 1)");
    }
    if (auto v = get("basis")) {
        const auto n = parse_int("basis", *v);
        if (n < 1 || n > 10000) throw ValidationError("basis must lie in [1, 10000]");
        cfg.basis = static_cast<int>(n);
    }
    if (auto v = get("max_steps")) {
        const auto n = parse_int("max_steps", *v);
        if (n < 1) throw ValidationError("max_steps must be >= 1");
        cfg.max_steps = static_cast<std::size_t>(n);
    }
    if (auto v = get("gauge")) cfg.gauge = lower(*v);
    (void)gauge_of(cfg);
    if (auto v = get("convention")) {
        const auto c = lower(*v);
        if (c == "printed") cfg.convention = SecularConvention::Printed;
        else if (c == "coefficients") cfg.convention = SecularConvention::FromCoefficients;
        else throw ValidationError(fmt::format("unknown convention '{}' (printed|coefficients)", *v));
    }
    if (auto v = get("normalization")) {
        const auto c = lower(*v);
        if (c == "uniform") cfg.normalization = XNormalization::Uniform;
        else if (c == "orthonormal") cfg.normalization = XNormalization::Orthonormal;
        else throw ValidationError(fmt::format("unknown normalization '{}' (uniform|orthonormal)", *v));
    }
    if (auto v = get("L")) cfg.feasibility.L = parse_double("L", *v);
    if (auto v = get("delta_max")) cfg.feasibility.delta_max = parse_double("delta_max", *v);
    if (auto v = get("v_sound")) cfg.feasibility.v_sound = parse_double("v_sound", *v);
    if (auto v = get("duration")) cfg.feasibility.duration = parse_double("duration", *v);
    cfg.feasibility.epsilon = cfg.geom.epsilon;
    return cfg;
}

void write_csv(std::ostream& os, const Table& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) os << (i ? "," : "") << csv_escape(table.header[i]);
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            std::visit(
                [&os](const auto& v) {
                    using T = std::decay_t<decltype(v)>;
                    if constexpr (std::is_same_v<T, std::string>) os << csv_escape(v);
                    else if constexpr (std::is_same_v<T, double>) fmt::print(os, "{:.17g}", v);
                    else os << v;
                },
                row[i]);
        }
        os << '\n';
    }
}

nlohmann::json to_json(const Table& table) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        nlohmann::json obj = nlohmann::json::object();
        for (std::size_t i = 0; i < row.size() && i < table.header.size(); ++i)
            std::visit([&](const auto& v) { obj[table.header[i]] = v; }, row[i]);
        rows.push_back(std::move(obj));
    }
    return {{"columns", table.header}, {"rows", rows}};
}

Table cmd_spectrum(const RunConfig& cfg) {
    Table t{{"kind", "nx", "ny", "nz", "omega[1/L]"}, {}};
    for (const auto& m : enumerate_modes(cfg.kind, cfg.geom, cfg.cutoff))
        t.rows.push_back({std::string(to_string(m.kind)), static_cast<long long>(m.nx), static_cast<long long>(m.ny),
                          static_cast<long long>(m.nz), mode_frequency(m, cfg.geom)});
    return t;
}

Table cmd_growth(const RunConfig& cfg) {
    validate_driven(cfg.geom);
    const Boundary bc = boundary_of(cfg.kind);
    const auto opt = secular_options(cfg);
    Table t{{"component", "kind", "modes", "lambda_max[1/L]", "photon_exponent[1/L]", "eigenvalues[1/L]"}, {}};
    std::set<std::vector<std::tuple<int, int, int>>> seen;
    const double W = cfg.geom.Omega;
    long long id = 0;
    for (const auto& seed : enumerate_modes(cfg.kind, cfg.geom, W * (1.0 + opt.tol_res))) {
        const ResonanceGraph graph = resonance_partners(seed, cfg.geom, opt.tol_res);
        const bool grows = std::any_of(graph.parametric.begin(), graph.parametric.end(), [](bool p) { return p; }) ||
                           std::any_of(graph.edges.begin(), graph.edges.end(),
                                       [](const ResonanceEdge& e) { return e.type == ResonanceType::Sum; });
        if (!grows) continue;
        std::vector<std::tuple<int, int, int>> key;
        for (const auto& m : graph.nodes) key.emplace_back(m.nx, m.ny, m.nz);
        if (!seen.insert(key).second) continue;

        const auto sys = secular_matrix(graph, cfg.geom, bc, opt);
        const auto rates = growth_rates(sys);
        std::string modes;
        for (const auto& m : graph.nodes) modes += (modes.empty() ? "" : " ") + fmt::format("({},{},{})", m.nx, m.ny, m.nz);
        std::string eig;
        for (const auto& z : rates.eigenvalues)
            eig += (eig.empty() ? "" : " ") + fmt::format("{:.17g}{:+.17g}i", z.real(), z.imag());
        t.rows.push_back({id++, std::string(to_string(cfg.kind)), modes, rates.lambda_max, 2.0 * rates.lambda_max, eig});
    }
    return t;
}

Table cmd_evolve(const RunConfig& cfg) {
    validate_driven(cfg.geom);
    const ModeIndex mode = target_mode(cfg);
    validate(mode);
    double t_final = 0.0;
    if (cfg.t_final) t_final = *cfg.t_final;
    else if (cfg.geom.epsilon > 0.0) t_final = 2.0 / cfg.geom.epsilon;
    else throw ValidationError("t_final is required when epsilon = 0");

    const auto opt = secular_options(cfg);
    const ResonanceGraph graph = resonance_partners(mode, cfg.geom, opt.tol_res);
    std::vector<ModeIndex> basis;
    if (cfg.basis) {
        int max_x = 0;
        for (const auto& m : graph.nodes) max_x = std::max(max_x, m.nx);
        if (*cfg.basis < max_x)
            throw ValidationError(fmt::format("basis {} is smaller than the component's x-index {}", *cfg.basis, max_x));
        basis = oracle_basis(graph.nodes, 1.0, *cfg.basis);
    } else {
        basis = oracle_basis(graph.nodes);
    }
    const auto sys = assemble_reduced_ode(basis, cfg.geom, opt.gauge, cfg.normalization);
    OracleControls controls;
    controls.rel_tol = cfg.tol;
    controls.abs_tol = cfg.tol * 1e-3;
    controls.max_steps_per_sample = cfg.max_steps;
    const auto grid = drive_period_grid(cfg.geom, t_final, cfg.sample_periods);
    const PhotonSeries series = photon_series(sys, grid, controls);

    const auto secular = secular_matrix(graph, cfg.geom, boundary_of(mode.kind), opt);

    Table t;
    t.header = {"t[L]", "eps_t[L]"};
    for (const auto& m : basis) t.header.push_back(fmt::format("N_oracle_{}[-]", mode_label(m)));
    for (const auto& m : graph.nodes) t.header.push_back(fmt::format("N_msa_{}[-]", mode_label(m)));
    for (std::size_t s = 0; s < grid.size(); ++s) {
        std::vector<Cell> row{grid[s], cfg.geom.epsilon * grid[s]};
        for (double n : series.photons[s]) row.emplace_back(n);
        for (double n : msa_photon_numbers(secular, cfg.geom.epsilon * grid[s])) row.emplace_back(n);
        t.rows.push_back(std::move(row));
    }
    return t;
}

nlohmann::json cmd_feasibility(const RunConfig& cfg) {
    ModeIndex mode{0, 1, 0, FieldKind::TM};
    if (cfg.mode) mode = *cfg.mode;
    else if (auto m = drive_mode(cfg.drive, cfg.kind)) mode = *m;
    const auto rep = feasibility(cfg.feasibility, mode, cfg.geom);
    nlohmann::json j;
    j["mode"] = {{"nx", rep.mode.nx}, {"ny", rep.mode.ny}, {"nz", rep.mode.nz}};
    j["omega_rad_s"] = rep.omega_rad_s;
    j["omega_hz"] = rep.omega_hz;
    j["epsilon_max"] = rep.epsilon_max;
    j["epsilon"] = rep.epsilon;
    j["epsilon_t_over_L"] = rep.epsilon_t;
    j["epsilon_exceeds_max"] = rep.epsilon_exceeds_max;
    j["L_m"] = cfg.feasibility.L;
    j["duration_s"] = cfg.feasibility.duration;
    if (rep.polarization) j["polarization"] = {{"alpha", rep.polarization->alpha}, {"beta", rep.polarization->beta}};
    else j["polarization"] = nullptr;
    j["photons_at_duration"] = {
        {"TE", rep.te_photons ? nlohmann::json(*rep.te_photons) : nlohmann::json(nullptr)},
        {"TM", rep.tm_photons ? nlohmann::json(*rep.tm_photons) : nlohmann::json(nullptr)}};
    return j;
}

}  // namespace dce::cli
