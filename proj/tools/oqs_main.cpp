// oqs_main.cpp — Command-line front end: run scenarios, sweep parameters,
// verify the built-in acceptance suite.
//
// Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "oqs/acceptance.hpp"
#include "oqs/scenario.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw oqs::IoError("cannot open scenario file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (in.bad()) throw oqs::IoError("failed reading scenario file '" + path + "'");
    return buffer.str();
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> values;
    if (csv.empty()) return values;
    std::stringstream stream(csv);
    std::string token;
    while (std::getline(stream, token, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
            values.push_back(v);
        } catch (const std::exception&) {
            throw oqs::ValidationError("cannot parse sweep value '" + token + "'");
        }
    }
    return values;
}

void print_warnings(const oqs::RunSummary& summary) {
    for (const auto& warning : summary.warnings) std::cerr << "warning: " << warning << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"projector-approach toolkit for open quantum systems"};
    app.set_version_flag("--version", std::string("oqs ") + kVersion);
    app.require_subcommand(0, 1);

    std::string scenario_path;
    std::string out_dir = ".";
    std::string param_path;
    std::string values_csv;

    CLI::App* run_cmd = app.add_subcommand("run", "run a scenario: full vs reduced comparison");
    run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run_cmd->add_option("--out-dir", out_dir, "output directory (default .)");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "run a scenario once per parameter value");
    sweep_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
    sweep_cmd->add_option("--param", param_path, "parameter path, e.g. params.g_re")->required();
    sweep_cmd->add_option("--values", values_csv, "comma-separated values")->required();
    sweep_cmd->add_option("--out-dir", out_dir, "output directory (default .)");

    CLI::App* verify_cmd =
        app.add_subcommand("verify", "execute the built-in acceptance suite");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) {
            oqs::Scenario scenario = oqs::parse_scenario(read_file(scenario_path));
            oqs::RunResult result = oqs::run_scenario(scenario);
            print_warnings(result.summary);
            oqs::write_run_outputs(result, out_dir);
            std::cout << "wrote " << out_dir << "/" << scenario.name << "_trajectory.csv and "
                      << scenario.name << "_summary.json in " << result.summary.wall_seconds
                      << " s\n";
        } else if (sweep_cmd->parsed()) {
            oqs::Scenario scenario = oqs::parse_scenario(read_file(scenario_path));
            const std::vector<double> values = parse_values(values_csv);
            const std::string csv = oqs::sweep_scenario(scenario, param_path, values);
            oqs::write_sweep_output(scenario, csv, out_dir);
            std::cout << "wrote " << out_dir << "/" << scenario.name << "_sweep.csv ("
                      << values.size() << " rows)\n";
        } else if (verify_cmd->parsed()) {
            const auto results = oqs::run_acceptance();
            const int failures = oqs::report_acceptance(results, std::cout);
            return failures == 0 ? 0 : 2;
        } else {
            std::cout << app.help();
        }
    } catch (const oqs::ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 1;
    } catch (const oqs::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const oqs::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
