// dce - resonant photon creation in a cavity with one oscillating wall.

#include "dce/cli.hpp"
#include "dce/errors.hpp"

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

namespace {

enum class Command { Spectrum, Growth, Evolve, Feasibility };

int run(Command command, const std::string& config_path, const std::vector<std::string>& overrides,
        const std::string& out_path, const std::string& format_text, double tol, int basis) {
    using namespace dce::cli;
    KeyValues values;
    if (!config_path.empty()) values = read_config_file(config_path);
    for (const auto& item : overrides) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) throw dce::ValidationError("--set expects key=value, got '" + item + "'");
        values[item.substr(0, eq)] = item.substr(eq + 1);
    }
    if (tol > 0.0) values["tol"] = std::to_string(tol);
    if (basis > 0) values["basis"] = std::to_string(basis);

    const OutputFormat format = format_text.empty()
                                    ? (command == Command::Feasibility ? OutputFormat::Json : OutputFormat::Csv)
                                    : parse_format(format_text);
    const RunConfig cfg = make_run_config(values);

    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw dce::ValidationError("cannot open output file '" + out_path + "'");
    }
    std::ostream& os = out_path.empty() ? std::cout : file;

    if (command == Command::Feasibility) {
        const auto report = cmd_feasibility(cfg);
        if (format == OutputFormat::Json) {
            os << report.dump(2) << '\n';
        } else {
            Table t;
            for (const auto& [k, v] : report.items()) {
                t.header.push_back(k);
            }
            t.rows.emplace_back();
            for (const auto& [k, v] : report.items()) t.rows.back().emplace_back(v.dump());
            write_csv(os, t);
        }
        return 0;
    }
    Table table;
    switch (command) {
        case Command::Spectrum: table = cmd_spectrum(cfg); break;
        case Command::Growth: table = cmd_growth(cfg); break;
        case Command::Evolve: table = cmd_evolve(cfg); break;
        case Command::Feasibility: break;
    }
    if (format == OutputFormat::Json) os << to_json(table).dump(2) << '\n';
    else write_csv(os, table);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Resonant photon creation in a rectangular cavity with an oscillating wall"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::string out_path;
    std::string format;
    std::vector<std::string> overrides;
    double tol = 0.0;
    int basis = 0;
    app.add_option("--config", config_path, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_path, "output file (default stdout)");
    app.add_option("--format", format, "csv or json");
    app.add_option("--tol", tol, "ODE relative tolerance")->check(CLI::PositiveNumber);
    app.add_option("--basis", basis, "largest x-index of the ODE basis")->check(CLI::PositiveNumber);
    app.add_option("--set", overrides, "override a config key (key=value), repeatable");

    Command command = Command::Spectrum;
    app.add_subcommand("spectrum", "list modes below a cutoff")->callback([&] { command = Command::Spectrum; });
    app.add_subcommand("growth", "resonance components and MSA growth rates")->callback([&] {
        command = Command::Growth;
    });
    app.add_subcommand("evolve", "photon numbers from direct integration with MSA overlay")->callback([&] {
        command = Command::Evolve;
    });
    app.add_subcommand("feasibility", "experimental estimate in SI units")->callback([&] {
        command = Command::Feasibility;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return run(command, config_path, overrides, out_path, format, tol, basis);
    } catch (const dce::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const dce::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}
