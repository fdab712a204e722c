#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sphereqed/commands.hpp"
#include "sphereqed/config.hpp"
#include "sphereqed/errors.hpp"

namespace {

struct GlobalArgs {
    std::optional<std::string> config_path;
    std::string out_path;
    std::vector<std::string> overrides;
    int threads = -1;
};

void add_global_options(CLI::App* cmd, GlobalArgs& g) {
    cmd->add_option("--config", g.config_path, "Config file (key = value lines, '#' comments)");
    cmd->add_option("--out", g.out_path, "Output path (default depends on the subcommand)");
    cmd->add_option("--set", g.overrides, "Config override key=value (repeatable)")
        ->take_all();
    cmd->add_option("--threads", g.threads, "Worker threads (default: machine parallelism)");
}

sqed::cli::RunConfig resolve(const GlobalArgs& g) {
    auto config = sqed::cli::load_config(g.config_path, g.overrides);
    if (g.threads >= 0) config.threads = g.threads;
    return config;
}

std::string out_or_default(const GlobalArgs& g, const std::string& subcommand) {
    return g.out_path.empty() ? sqed::cli::default_out_path(subcommand) : g.out_path;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decay rates, entanglement and Bell dynamics of two-level atoms near a "
                 "dispersing, absorbing dielectric microsphere"};
    app.require_subcommand(1);

    GlobalArgs g_res, g_rates, g_eof, g_bell, g_tri, g_val;

    auto* c_res = app.add_subcommand("resonances", "Scan sphere resonances, write/update the cache");
    add_global_options(c_res, g_res);

    auto* c_rates = app.add_subcommand("rates", "Sweep Gamma_+-/Gamma0 over frequency or distance");
    add_global_options(c_rates, g_rates);

    auto* c_eof = app.add_subcommand("eof", "Entanglement of formation vs time");
    add_global_options(c_eof, g_eof);
    std::string regime = "weak";
    c_eof->add_option("--regime", regime, "weak | strong")->check(CLI::IsMember({"weak", "strong"}));

    auto* c_bell = app.add_subcommand("bell", "Bell parameter B_S vs time (+ distance scan)");
    add_global_options(c_bell, g_bell);

    auto* c_tri = app.add_subcommand("tripartite", "Three-atom single-excitation dynamics");
    add_global_options(c_tri, g_tri);
    std::string mode = "weak_A_excited";
    c_tri->add_option("--mode", mode, "weak_A_excited | strong_symmetric")
        ->check(CLI::IsMember({"weak_A_excited", "strong_symmetric"}));

    auto* c_val = app.add_subcommand("validate", "Run the built-in oracle suite");
    add_global_options(c_val, g_val);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_res->parsed()) {
            const auto config = resolve(g_res);
            sqed::cli::cmd_resonances(config, out_or_default(g_res, "resonances"), std::cout);
        } else if (c_rates->parsed()) {
            const auto config = resolve(g_rates);
            sqed::cli::cmd_rates(config, out_or_default(g_rates, "rates"), std::cout);
        } else if (c_eof->parsed()) {
            const auto config = resolve(g_eof);
            const auto r = regime == "weak" ? sqed::cli::EofRegime::weak
                                            : sqed::cli::EofRegime::strong;
            sqed::cli::cmd_eof(config, r, out_or_default(g_eof, "eof_" + regime), std::cout);
        } else if (c_bell->parsed()) {
            const auto config = resolve(g_bell);
            sqed::cli::cmd_bell(config, out_or_default(g_bell, "bell"), std::cout);
        } else if (c_tri->parsed()) {
            const auto config = resolve(g_tri);
            const auto m = mode == "weak_A_excited" ? sqed::cli::TripartiteMode::weak_A_excited
                                                    : sqed::cli::TripartiteMode::strong_symmetric;
            sqed::cli::cmd_tripartite(config, m, out_or_default(g_tri, "tripartite"), std::cout);
        } else if (c_val->parsed()) {
            const int failures = sqed::cli::cmd_validate(std::cout);
            return failures == 0 ? sqed::cli::exit_ok : sqed::cli::exit_numerical;
        }
    } catch (const sqed::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return sqed::cli::exit_config;
    } catch (const sqed::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return sqed::cli::exit_numerical;
    } catch (const sqed::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return sqed::cli::exit_io;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return sqed::cli::exit_numerical;
    }
    return sqed::cli::exit_ok;
}
