// mixinglab: batch front end for correlation measurements, bound evaluation
// and the verification suites. All behavior is driven by a flat key-value
// config file; see README.md for the key reference.

#include "mixinglab/runner.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"mixinglab: multiple-mixing correlation laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;

    const char* commands[] = {"verify", "correlate", "bound", "reduce", "decay", "calibrate"};
    const char* blurbs[] = {
        "run the randomized property suites",
        "evaluate one correlation (exact + Monte Carlo) with its bound",
        "print a bound right-hand side",
        "split a diagonal element into chamber and centralizing parts",
        "run a power sweep and emit the CSV report",
        "calibrate the bound constant on a sweep and judge the holdout",
    };
    for (int i = 0; i < 6; ++i) {
        auto* sub = app.add_subcommand(commands[i], blurbs[i]);
        sub->add_option("--config", config_path, "path to the key-value config file")
            ->required();
        sub->add_option("--out", out_path, "output artifact path (CSV or JSON)");
    }

    CLI11_PARSE(app, argc, argv);

    const std::string command = app.get_subcommands().front()->get_name();
    try {
        auto cfg = mixinglab::KeyValueConfig::parse_file(config_path);
        auto result = mixinglab::run_command(command, cfg, out_path);
        std::cout << result.stdout_text;
        for (const auto& key : cfg.unused_keys())
            std::cerr << "warning: config key '" << key << "' was not used by this command\n";
        return result.exit_code;
    } catch (const mixinglab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
