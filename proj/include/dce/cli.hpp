/*
 * cli.hpp - configuration and commands behind the dce executable
 *
 * Config files are flat "key = value" text ('#' starts a comment). Command
 * line overrides are applied on top before validation.
 */

#pragma once

#include "dce/coupling.hpp"
#include "dce/em.hpp"
#include "dce/msa.hpp"
#include "dce/spectrum.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace dce::cli {

using KeyValues = std::map<std::string, std::string>;

/// Parses key = value lines; throws ValidationError on malformed lines.
[[nodiscard]] KeyValues parse_key_values(std::istream& in, const std::string& origin = "<config>");
[[nodiscard]] KeyValues read_config_file(const std::string& path);

enum class OutputFormat { Csv, Json };
[[nodiscard]] OutputFormat parse_format(const std::string& text);

struct RunConfig {
    CavityGeometry geom;
    std::string drive;  // "2*omega(nx,ny,nz[,kind])" or a number
    FieldKind kind{FieldKind::TM};
    std::optional<ModeIndex> mode;
    double cutoff{0.0};
    std::optional<double> t_final;
    std::size_t sample_periods{1};
    double tol{1e-10};
    std::optional<int> basis;  // largest x-index of the oracle basis
    std::size_t max_steps{5'000'000};  // ODE steps allowed between samples
    std::string gauge{"default"};
    SecularConvention convention{SecularConvention::Printed};
    XNormalization normalization{XNormalization::Uniform};
    FeasibilityInput feasibility;
};

/// Resolves the drive against the geometry; throws ValidationError if unparseable.
[[nodiscard]] double resolve_drive(const std::string& drive, const CavityGeometry& geom, FieldKind default_kind);
[[nodiscard]] ModeIndex parse_mode(const std::string& text, FieldKind default_kind);

/// Builds and validates a configuration; unknown keys are rejected.
[[nodiscard]] RunConfig make_run_config(const KeyValues& values);

using Cell = std::variant<std::string, double, long long>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

void write_csv(std::ostream& os, const Table& table);
[[nodiscard]] nlohmann::json to_json(const Table& table);

[[nodiscard]] Table cmd_spectrum(const RunConfig& cfg);
[[nodiscard]] Table cmd_growth(const RunConfig& cfg);
[[nodiscard]] Table cmd_evolve(const RunConfig& cfg);
[[nodiscard]] nlohmann::json cmd_feasibility(const RunConfig& cfg);

}  // namespace dce::cli
