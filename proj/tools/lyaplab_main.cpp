// Experiment runner: parses a config file, executes one named experiment and
// writes a plot-ready CSV (or structured text) artifact.
//
//   lyaplab <subcommand> --config experiment.cfg [--set key=value ...]
//
// Exit codes: 0 ok, 1 config error, 2 runtime error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lyaplab/errors.hpp"
#include "lyaplab/experiment.hpp"

namespace {

int run(const std::string& subcommand, const std::string& config_path,
        const std::vector<std::string>& overrides, const std::string& output_override) {
    using namespace lyaplab;

    Config cfg = config_path.empty() ? Config::parse_string("")
                                     : Config::parse_file(config_path);
    for (const auto& kv : overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw ConfigError("--set expects key=value, got: " + kv);
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }

    const auto t0 = std::chrono::steady_clock::now();
    std::string artifact;
    if (subcommand == "lyapunov")
        artifact = run_lyapunov(cfg);
    else if (subcommand == "orbit")
        artifact = run_orbit(cfg);
    else if (subcommand == "projective")
        artifact = run_projective(cfg);
    else if (subcommand == "classify")
        artifact = run_classify(cfg);
    else if (subcommand == "equidist")
        artifact = run_equidist(cfg);
    else if (subcommand == "dichotomy")
        artifact = run_dichotomy(cfg);
    else
        throw ConfigError("unknown subcommand: " + subcommand);
    const auto t1 = std::chrono::steady_clock::now();

    const std::string out_path =
        output_override.empty() ? cfg.get_string("output.path", "") : output_override;
    if (out_path.empty()) {
        std::cout << artifact;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open output path: " + out_path);
        out << artifact;
    }

    // wall time goes to stderr so the artifact stays byte-reproducible
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    std::cerr << "lyaplab " << subcommand << ": " << secs << " s\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"random conservative dynamics laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string output_override;
    std::vector<std::string> overrides;

    for (const char* name :
         {"lyapunov", "orbit", "projective", "classify", "equidist", "dichotomy"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "experiment config file");
        sub->add_option("--set", overrides, "override config entries (key=value)");
        sub->add_option("--output", output_override, "output path (default: config output.path or stdout)");
    }

    CLI11_PARSE(app, argc, argv);

    try {
        return run(app.get_subcommands().front()->get_name(), config_path, overrides,
                   output_override);
    } catch (const lyaplab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
