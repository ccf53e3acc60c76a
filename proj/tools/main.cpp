// SPDX-License-Identifier: Apache-2.0
//
// CLI front end for the hybrid-precoding energy-efficiency simulator:
//   hprec run --config scenario.json --out results/ [--seed N]
//             [--sweep n_rf=1..18] [--trials N] [--algos digital,ccs] [--plots]

#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "hprec/harness.hpp"

namespace {

std::vector<hprec::Algorithm> parse_algorithm_list(const std::string& text) {
    std::vector<hprec::Algorithm> algorithms;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) algorithms.push_back(hprec::parse_algorithm(item));
    if (algorithms.empty())
        throw std::invalid_argument("--algos list is empty: '" + text + "'");
    return algorithms;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hybrid analog/digital precoding energy-efficiency simulator"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "run a seeded Monte-Carlo sweep");
    std::string config_path;
    std::string out_dir;
    std::string sweep_override;
    std::string algos;
    std::uint64_t seed = 0;
    int trials = 0;
    bool plots = false;

    run->add_option("--config", config_path,
                    "JSON scenario/sweep config file");
    run->add_option("--out", out_dir, "output directory for CSV/SVG files")
        ->required();
    auto* seed_opt = run->add_option("--seed", seed, "master seed override");
    run->add_option("--sweep", sweep_override,
                    "swept variable override, e.g. n_rf=1..18 or n_tx=16,32,64");
    auto* trials_opt =
        run->add_option("--trials", trials, "trials per point override")
            ->check(CLI::PositiveNumber);
    run->add_option("--algos", algos,
                    "comma list from digital,ccs,pcs_sdr,pcs_closed");
    run->add_flag("--plots", plots, "also write SVG line plots");

    CLI11_PARSE(app, argc, argv);

    try {
        hprec::ScenarioConfig scenario;
        hprec::SweepSpec sweep;
        if (!config_path.empty())
            std::tie(scenario, sweep) = hprec::load_config_file(config_path);

        if (seed_opt->count() > 0) sweep.master_seed = seed;
        if (trials_opt->count() > 0) sweep.trials = trials;
        if (!sweep_override.empty()) {
            auto [name, values] = hprec::parse_sweep_override(sweep_override);
            sweep.variable = name;
            sweep.values = values;
        }
        if (!algos.empty()) sweep.algorithms = parse_algorithm_list(algos);
        if (sweep.values.empty()) {
            // Default scenario: sweep the RF-chain count over 1..18.
            sweep.variable = "n_rf";
            sweep.values.resize(18);
            std::iota(sweep.values.begin(), sweep.values.end(), 1);
        }

        const auto rows = hprec::run_sweep(scenario, sweep, out_dir, plots);
        std::size_t failed = 0;
        for (const auto& row : rows)
            if (!row.ok()) ++failed;
        std::printf("wrote %s/results.csv and %s/summary.csv (%zu rows, %zu failed)\n",
                    out_dir.c_str(), out_dir.c_str(), rows.size(), failed);
        return 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
