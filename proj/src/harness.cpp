// SPDX-License-Identifier: Apache-2.0
#include "hprec/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hprec/ccs_altmin.hpp"
#include "hprec/digital_opt.hpp"
#include "hprec/metrics.hpp"
#include "hprec/pcs_altmin.hpp"
#include "hprec/rng.hpp"
#include "hprec/svg_plot.hpp"

namespace hprec {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string sanitize_message(std::string text) {
    for (char& c : text) {
        if (c == ',') c = ';';
        if (c == '\n' || c == '\r' || c == '"') c = ' ';
    }
    return text;
}

int parse_int_strict(const std::string& text) {
    int value = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw std::invalid_argument("cannot parse integer: '" + text + "'");
    return value;
}

SystemConfig apply_variable(SystemConfig base, const std::string& variable,
                            int value) {
    if (variable == "n_rf") {
        base.n_rf = value;
    } else if (variable == "n_tx") {
        base.n_tx = value;
    } else if (variable == "n_users") {
        base.n_users = value;
        base.n_streams = value; // one stream per user in this model
    } else {
        throw std::invalid_argument("unknown sweep variable: " + variable);
    }
    return base;
}

/// Channel draw and digital baseline shared by every algorithm of a trial.
struct TrialBaseline {
    ChannelSet channels;
    DigitalPrecoder digital;
    double digital_power = 0.0;
};

TrialBaseline make_baseline(const SystemConfig& config,
                            const MultipathSpec& multipath,
                            std::uint64_t seed) {
    TrialBaseline base;
    base.channels = draw_channel(config, multipath, seed);
    base.digital = optimize_digital(base.channels, config);
    base.digital_power = total_power(base.digital, config);
    return base;
}

ResultRow blank_row(const SystemConfig& config, Algorithm algorithm,
                    std::uint64_t seed) {
    ResultRow row;
    row.seed = seed;
    row.n_tx = config.n_tx;
    row.n_rx = config.n_rx;
    row.n_users = config.n_users;
    row.n_rf = config.n_rf;
    row.algorithm = algorithm;
    return row;
}

ResultRow run_point_with(const SystemConfig& config, Algorithm algorithm,
                         std::uint64_t seed, const TrialBaseline& base) {
    ResultRow row = blank_row(config, algorithm, seed);

    if (algorithm == Algorithm::digital) {
        EEReport report = energy_efficiency(base.channels, base.digital, config);
        row.sum_rate = report.sum_rate;
        row.total_power = report.total_power;
        row.ee = report.ee;
        row.psr = 0.0;
        row.final_ed = 0.0;
        row.iterations = base.digital.iterations;
        row.converged = base.digital.converged;
        return row;
    }

    HybridPrecoder precoder;
    AltMinTrace trace;
    if (algorithm == Algorithm::ccs) {
        CcsOptions options;
        options.seed = derive_seed(seed, 0xA1, 1);
        std::tie(precoder, trace) =
            ccs_altmin(base.digital.matrix, config.n_rf, config.p_max, options);
    } else {
        PcsOptions options;
        options.seed = derive_seed(seed, 0xA2, 1);
        options.use_sdr = (algorithm == Algorithm::pcs_sdr);
        std::tie(precoder, trace) =
            pcs_altmin(base.digital.matrix, config.n_rf, config.p_max, options);
    }

    EEReport report = energy_efficiency(base.channels, precoder, config);
    row.sum_rate = report.sum_rate;
    row.total_power = report.total_power;
    row.ee = report.ee;
    row.psr = power_saving_ratio(report.total_power, base.digital_power);
    row.final_ed = trace.final_ed();
    row.iterations = trace.iterations;
    row.converged = trace.converged;
    return row;
}

void validate_for_algorithm(const SystemConfig& config, Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::digital: config.validate(); break;
        case Algorithm::ccs:
            config.validate_hybrid(PrecoderStructure::ccs);
            break;
        case Algorithm::pcs_sdr:
        case Algorithm::pcs_closed:
            config.validate_hybrid(PrecoderStructure::pcs);
            break;
    }
}

/// Streaming mean/std accumulator for one (point, algorithm) block.
struct BlockStats {
    std::vector<double> sum_rate, total_power, ee, psr;
    int n_err = 0;

    void add(const ResultRow& row) {
        if (!row.ok()) {
            ++n_err;
            return;
        }
        sum_rate.push_back(row.sum_rate);
        total_power.push_back(row.total_power);
        ee.push_back(row.ee);
        psr.push_back(row.psr);
    }

    int n_ok() const { return static_cast<int>(ee.size()); }
};

double mean_of(const std::vector<double>& v) {
    if (v.empty()) return 0.0;
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double std_of(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean_of(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

void expect_object(const nlohmann::json& j, const std::string& section) {
    if (!j.is_object())
        throw std::invalid_argument("config section '" + section +
                                    "' must be a JSON object");
}

void parse_system_section(const nlohmann::json& j, SystemConfig& c) {
    expect_object(j, "system");
    for (const auto& [key, val] : j.items()) {
        if (key == "n_tx") c.n_tx = val.get<int>();
        else if (key == "n_rx") c.n_rx = val.get<int>();
        else if (key == "n_users") c.n_users = val.get<int>();
        else if (key == "n_streams") c.n_streams = val.get<int>();
        else if (key == "n_rf") c.n_rf = val.get<int>();
        else if (key == "bandwidth") c.bandwidth = val.get<double>();
        else if (key == "noise_power") c.noise_power = val.get<double>();
        else if (key == "pa_efficiency") c.pa_efficiency = val.get<double>();
        else if (key == "p_rf_chain") c.p_rf_chain = val.get<double>();
        else if (key == "p_static") c.p_static = val.get<double>();
        else if (key == "p_phase_shifter") c.p_phase_shifter = val.get<double>();
        else if (key == "p_max") c.p_max = val.get<double>();
        else if (key == "rate_floor") {
            if (val.is_number())
                c.rate_floor = {val.get<double>()};
            else
                c.rate_floor = val.get<std::vector<double>>();
        } else {
            throw std::invalid_argument("unknown system key: " + key);
        }
    }
}

void parse_multipath_section(const nlohmann::json& j, MultipathSpec& m) {
    expect_object(j, "multipath");
    for (const auto& [key, val] : j.items()) {
        if (key == "n_paths") m.n_paths = val.get<int>();
        else if (key == "angle_min") m.angle_min = val.get<double>();
        else if (key == "angle_max") m.angle_max = val.get<double>();
        else throw std::invalid_argument("unknown multipath key: " + key);
    }
}

void parse_sweep_section(const nlohmann::json& j, SweepSpec& s) {
    expect_object(j, "sweep");
    for (const auto& [key, val] : j.items()) {
        if (key == "variable") s.variable = val.get<std::string>();
        else if (key == "values") s.values = val.get<std::vector<int>>();
        else if (key == "trials") s.trials = val.get<int>();
        else if (key == "master_seed") s.master_seed = val.get<std::uint64_t>();
        else if (key == "algorithms") {
            s.algorithms.clear();
            for (const auto& name : val)
                s.algorithms.push_back(parse_algorithm(name.get<std::string>()));
        } else {
            throw std::invalid_argument("unknown sweep key: " + key);
        }
    }
}

} // namespace

std::string to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::digital: return "digital";
        case Algorithm::ccs: return "ccs";
        case Algorithm::pcs_sdr: return "pcs_sdr";
        case Algorithm::pcs_closed: return "pcs_closed";
    }
    throw std::invalid_argument("unknown algorithm value");
}

Algorithm parse_algorithm(const std::string& name) {
    if (name == "digital") return Algorithm::digital;
    if (name == "ccs") return Algorithm::ccs;
    if (name == "pcs_sdr") return Algorithm::pcs_sdr;
    if (name == "pcs_closed") return Algorithm::pcs_closed;
    throw std::invalid_argument("unknown algorithm name: " + name);
}

std::string csv_header() {
    return "seed,n_tx,n_rx,n_users,n_rf,algorithm,sum_rate,total_power,ee,"
           "psr,final_ed,iterations,converged,error";
}

std::string csv_row(const ResultRow& row) {
    std::ostringstream os;
    os << row.seed << ',' << row.n_tx << ',' << row.n_rx << ','
       << row.n_users << ',' << row.n_rf << ',' << to_string(row.algorithm)
       << ',' << fmt(row.sum_rate) << ',' << fmt(row.total_power) << ','
       << fmt(row.ee) << ',' << fmt(row.psr) << ',' << fmt(row.final_ed)
       << ',' << row.iterations << ',' << (row.converged ? 1 : 0) << ','
       << sanitize_message(row.error);
    return os.str();
}

ResultRow run_point(const ScenarioConfig& scenario, Algorithm algorithm,
                    std::uint64_t seed) {
    validate_for_algorithm(scenario.system, algorithm);
    TrialBaseline base =
        make_baseline(scenario.system, scenario.multipath, seed);
    return run_point_with(scenario.system, algorithm, seed, base);
}

std::vector<ResultRow> run_sweep(const ScenarioConfig& scenario,
                                 const SweepSpec& sweep,
                                 const std::string& out_dir,
                                 bool emit_plots) {
    if (sweep.values.empty())
        throw std::invalid_argument("run_sweep: values must be non-empty");
    for (std::size_t i = 1; i < sweep.values.size(); ++i)
        if (sweep.values[i] <= sweep.values[i - 1])
            throw std::invalid_argument(
                "run_sweep: values must be strictly increasing");
    if (sweep.trials < 1)
        throw std::invalid_argument("run_sweep: trials must be >= 1");
    if (sweep.algorithms.empty())
        throw std::invalid_argument("run_sweep: algorithms must be non-empty");
    // Rejects unknown variable names before any file is touched.
    (void)apply_variable(scenario.system, sweep.variable, sweep.values.front());

    namespace fs = std::filesystem;
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);

    const fs::path results_path = dir / "results.csv";
    const fs::path summary_path = dir / "summary.csv";
    std::ofstream results(results_path);
    if (!results)
        throw std::runtime_error("cannot open " + results_path.string() +
                                 " for writing");
    std::ofstream summary(summary_path);
    if (!summary)
        throw std::runtime_error("cannot open " + summary_path.string() +
                                 " for writing");

    results << csv_header() << '\n';
    summary << "variable,value,algorithm,n_ok,n_err,sum_rate_mean,"
               "sum_rate_std,total_power_mean,total_power_std,ee_mean,"
               "ee_std,psr_mean,psr_std\n";

    const std::size_t n_algos = sweep.algorithms.size();
    std::vector<PlotSeries> ee_series(n_algos), psr_series(n_algos);
    for (std::size_t a = 0; a < n_algos; ++a) {
        ee_series[a].label = to_string(sweep.algorithms[a]);
        psr_series[a].label = to_string(sweep.algorithms[a]);
    }

    std::vector<ResultRow> rows;
    rows.reserve(sweep.values.size() * n_algos *
                 static_cast<std::size_t>(sweep.trials));

    for (std::size_t point = 0; point < sweep.values.size(); ++point) {
        const SystemConfig config =
            apply_variable(scenario.system, sweep.variable, sweep.values[point]);

        // Baselines are shared by every algorithm at this point, built on
        // first use so a digital-free sweep of an infeasible point still
        // yields per-algorithm error rows rather than a global failure.
        std::vector<std::optional<TrialBaseline>> baselines(
            static_cast<std::size_t>(sweep.trials));
        std::vector<std::string> baseline_errors(
            static_cast<std::size_t>(sweep.trials));

        for (std::size_t a = 0; a < n_algos; ++a) {
            const Algorithm algorithm = sweep.algorithms[a];
            BlockStats stats;

            for (int trial = 0; trial < sweep.trials; ++trial) {
                const std::uint64_t seed = derive_seed(
                    sweep.master_seed, static_cast<std::uint64_t>(point),
                    static_cast<std::uint64_t>(trial));
                const auto t = static_cast<std::size_t>(trial);

                ResultRow row = blank_row(config, algorithm, seed);
                try {
                    validate_for_algorithm(config, algorithm);
                    if (!baselines[t] && baseline_errors[t].empty()) {
                        try {
                            baselines[t] = make_baseline(
                                config, scenario.multipath, seed);
                        } catch (const std::exception& e) {
                            baseline_errors[t] = e.what();
                        }
                    }
                    if (!baseline_errors[t].empty())
                        throw std::runtime_error(baseline_errors[t]);
                    row = run_point_with(config, algorithm, seed,
                                         *baselines[t]);
                } catch (const std::exception& e) {
                    row = blank_row(config, algorithm, seed);
                    row.error = e.what();
                }

                results << csv_row(row) << '\n';
                stats.add(row);
                rows.push_back(std::move(row));
            }

            summary << sweep.variable << ',' << sweep.values[point] << ','
                    << to_string(algorithm) << ',' << stats.n_ok() << ','
                    << stats.n_err << ',' << fmt(mean_of(stats.sum_rate))
                    << ',' << fmt(std_of(stats.sum_rate)) << ','
                    << fmt(mean_of(stats.total_power)) << ','
                    << fmt(std_of(stats.total_power)) << ','
                    << fmt(mean_of(stats.ee)) << ',' << fmt(std_of(stats.ee))
                    << ',' << fmt(mean_of(stats.psr)) << ','
                    << fmt(std_of(stats.psr)) << '\n';

            if (stats.n_ok() > 0) {
                ee_series[a].x.push_back(
                    static_cast<double>(sweep.values[point]));
                ee_series[a].y.push_back(mean_of(stats.ee));
                psr_series[a].x.push_back(
                    static_cast<double>(sweep.values[point]));
                psr_series[a].y.push_back(mean_of(stats.psr));
            }
        }
    }

    results.flush();
    summary.flush();
    if (!results || !summary)
        throw std::runtime_error("failed writing sweep outputs under " +
                                 dir.string());

    if (emit_plots) {
        auto nonempty = [](const std::vector<PlotSeries>& all) {
            std::vector<PlotSeries> kept;
            for (const auto& s : all)
                if (!s.x.empty()) kept.push_back(s);
            return kept;
        };
        write_svg_line_plot((dir / ("ee_vs_" + sweep.variable + ".svg")).string(),
                            "Mean energy efficiency", sweep.variable,
                            "EE (bit/joule)", nonempty(ee_series));
        write_svg_line_plot((dir / ("psr_vs_" + sweep.variable + ".svg")).string(),
                            "Mean power-saving ratio", sweep.variable,
                            "PSR", nonempty(psr_series));
    }

    return rows;
}

std::pair<ScenarioConfig, SweepSpec> load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);

    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error("config parse error in " + path + ": " +
                                 e.what());
    }
    if (!j.is_object())
        throw std::invalid_argument("config root must be a JSON object");

    for (const auto& [key, val] : j.items()) {
        (void)val;
        if (key != "system" && key != "multipath" && key != "sweep")
            throw std::invalid_argument("unknown config section: " + key);
    }

    ScenarioConfig scenario;
    SweepSpec sweep;
    if (j.contains("system")) parse_system_section(j["system"], scenario.system);
    if (j.contains("multipath"))
        parse_multipath_section(j["multipath"], scenario.multipath);
    if (j.contains("sweep")) parse_sweep_section(j["sweep"], sweep);
    return {scenario, sweep};
}

std::pair<std::string, std::vector<int>> parse_sweep_override(
    const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= text.size())
        throw std::invalid_argument(
            "sweep override must look like name=start..end or name=a,b,c: '" +
            text + "'");
    const std::string name = text.substr(0, eq);
    const std::string rest = text.substr(eq + 1);

    std::vector<int> values;
    const auto dots = rest.find("..");
    if (dots != std::string::npos) {
        const int start = parse_int_strict(rest.substr(0, dots));
        const int end = parse_int_strict(rest.substr(dots + 2));
        if (end < start)
            throw std::invalid_argument("sweep override range is empty: '" +
                                        text + "'");
        for (int v = start; v <= end; ++v) values.push_back(v);
    } else {
        std::stringstream ss(rest);
        std::string item;
        while (std::getline(ss, item, ','))
            values.push_back(parse_int_strict(item));
    }
    if (values.empty())
        throw std::invalid_argument("sweep override has no values: '" + text +
                                    "'");
    return {name, values};
}

} // namespace hprec
