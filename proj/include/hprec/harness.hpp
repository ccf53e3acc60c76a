// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hprec/channel.hpp"
#include "hprec/types.hpp"

namespace hprec {

/// Precoder designs the sweep harness can evaluate.
enum class Algorithm { digital, ccs, pcs_sdr, pcs_closed };

std::string to_string(Algorithm algorithm);
Algorithm parse_algorithm(const std::string& name);

/// Full scenario: system/power parameters plus the multipath model used to
/// draw channels.
struct ScenarioConfig {
    SystemConfig system;
    MultipathSpec multipath;
};

/// One sweep: vary one scenario variable over a list of values, run a number
/// of independent trials per point for each selected algorithm.
struct SweepSpec {
    std::string variable = "n_rf"; ///< n_rf, n_tx or n_users
    std::vector<int> values;
    int trials = 100;
    std::vector<Algorithm> algorithms = {Algorithm::digital, Algorithm::ccs,
                                         Algorithm::pcs_closed};
    std::uint64_t master_seed = 1;
};

/// One CSV row: scenario point, algorithm, metrics, and an error message in
/// place of metrics when the trial failed.
struct ResultRow {
    std::uint64_t seed = 0;
    int n_tx = 0;
    int n_rx = 0;
    int n_users = 0;
    int n_rf = 0;
    Algorithm algorithm = Algorithm::digital;
    double sum_rate = 0.0;
    double total_power = 0.0;
    double ee = 0.0;
    double psr = 0.0;
    double final_ed = 0.0;
    int iterations = 0;
    bool converged = false;
    std::string error;

    bool ok() const { return error.empty(); }
};

/// Exact header of the results CSV.
std::string csv_header();

/// Serializes one row; floating-point fields carry 17 significant digits.
std::string csv_row(const ResultRow& row);

/// Runs one trial: draws the channel from the seed, designs the requested
/// precoder (hybrid algorithms approximate the digital optimum computed on
/// the same channel), and reports metrics.  The power-saving ratio is
/// measured against the digital baseline at the same seed.  Throws if the
/// config is invalid for the algorithm.
ResultRow run_point(const ScenarioConfig& scenario, Algorithm algorithm,
                    std::uint64_t seed);

/// Runs the sweep and writes <out_dir>/results.csv plus
/// <out_dir>/summary.csv (per-point mean/std over successful trials).  A
/// failed trial is recorded in its row's error column and never aborts the
/// sweep.  Rows are ordered by (point, algorithm, trial); per-trial seeds
/// are derived from (master_seed, point index, trial index), so a rerun
/// with the same spec reproduces the files byte for byte.  With emit_plots,
/// SVG line plots of mean EE and PSR against the swept variable are written
/// as well.
std::vector<ResultRow> run_sweep(const ScenarioConfig& scenario,
                                 const SweepSpec& sweep,
                                 const std::string& out_dir,
                                 bool emit_plots = false);

/// Loads scenario and sweep from a JSON config file with sections "system",
/// "multipath" and "sweep" whose keys mirror the corresponding struct
/// fields.  Unknown keys are rejected.
std::pair<ScenarioConfig, SweepSpec> load_config_file(const std::string& path);

/// Parses "name=start..end" (inclusive integer range) into a sweep
/// variable/values override.
std::pair<std::string, std::vector<int>> parse_sweep_override(
    const std::string& text);

} // namespace hprec
