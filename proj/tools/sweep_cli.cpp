#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cka/sweep.hpp"

namespace {

// The config file must be loaded before flag parsing so that flags override
// file values; find it with a light pre-scan.
std::string find_config_path(int argc, char** argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) return argv[i + 1];
        if (arg.rfind("--config=", 0) == 0) return arg.substr(9);
    }
    return "";
}

}  // namespace

int main(int argc, char** argv) {
    cka::SweepConfig cfg;
    try {
        const std::string config_path = find_config_path(argc, argv);
        if (!config_path.empty()) cfg = cka::load_config_file(config_path);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    CLI::App app{"Conference-key sweep over channel loss with per-point amplitude optimization"};
    app.set_version_flag("--version", cka::kVersion);
    std::string config_path;
    app.add_option("--config", config_path, "flat key-value config file; flags override it");
    app.add_option("--parties", cfg.parties, "number of parties N");
    app.add_option("--modes-exp", cfg.modes_exp, "detector count exponent s (M = 2^s)");
    app.add_option("--loss-start", cfg.loss_start, "first party-to-party loss (dB)");
    app.add_option("--loss-stop", cfg.loss_stop, "last party-to-party loss (dB)");
    app.add_option("--loss-step", cfg.loss_step, "loss step (dB)");
    std::vector<double> darks;
    app.add_option("--dark-count", darks, "dark-count probability, comma separated for several runs")
        ->delimiter(',');
    app.add_option("--misalignment", cfg.misalignment, "polarization misalignment fraction");
    app.add_option("--mode", cfg.mode, "yield mode: exact-yields or two-decoy");
    app.add_option("--cutoff", cfg.cutoff, "photon-number cutoff (even)");
    app.add_option("--decoy-high", cfg.decoy_high, "larger decoy intensity");
    app.add_option("--decoy-low", cfg.decoy_low, "smaller decoy intensity");
    app.add_option("--seed", cfg.seed, "Monte Carlo seed");
    app.add_option("--out", cfg.out, "output path");
    app.add_option("--format", cfg.format, "output format: csv or json");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }
    if (!darks.empty()) cfg.dark_count = darks;

    try {
        cfg.validate();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }

    try {
        const std::vector<cka::SweepResult> results = cka::run_sweep(cfg);
        bool any_row_failed = false;
        for (std::size_t i = 0; i < results.size(); ++i) {
            const std::string path = cka::output_path_for(cfg, i);
            cka::emit(results[i], cfg.format, path);
            std::size_t failed = 0;
            for (const cka::SweepRow& row : results[i].rows)
                if (row.status.rfind("error", 0) == 0) ++failed;
            any_row_failed = any_row_failed || failed > 0;
            std::printf("wrote %zu rows to %s (%zu failed)\n", results[i].rows.size(),
                        path.c_str(), failed);
        }
        return any_row_failed ? 2 : 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
