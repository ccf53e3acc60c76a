// SPDX-License-Identifier: Apache-2.0
#include "hprec/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace hprec {

void SystemConfig::validate() const {
    if (n_tx < 1 || n_rx < 1 || n_users < 1 || n_streams < 1 || n_rf < 1)
        throw std::invalid_argument("SystemConfig: dimensions must be >= 1");
    if (!(bandwidth > 0.0))
        throw std::invalid_argument("SystemConfig: bandwidth must be > 0");
    if (!(noise_power > 0.0))
        throw std::invalid_argument("SystemConfig: noise_power must be > 0");
    if (!(pa_efficiency > 0.0) || pa_efficiency > 1.0)
        throw std::invalid_argument(
            "SystemConfig: pa_efficiency must be in (0, 1]");
    if (p_rf_chain < 0.0 || p_static < 0.0 || p_phase_shifter < 0.0)
        throw std::invalid_argument("SystemConfig: powers must be >= 0");
    if (!(p_max > 0.0))
        throw std::invalid_argument("SystemConfig: p_max must be > 0");
    if (!rate_floor.empty() && rate_floor.size() != 1 &&
        rate_floor.size() != static_cast<std::size_t>(n_users))
        throw std::invalid_argument(
            "SystemConfig: rate_floor must be empty, scalar, or one per user");
}

void SystemConfig::validate_hybrid(PrecoderStructure structure) const {
    validate();
    if (n_streams > n_rf || n_rf > n_tx)
        throw std::invalid_argument(
            "SystemConfig: hybrid design needs n_streams <= n_rf <= n_tx");
    if (n_users > n_rf)
        throw std::invalid_argument(
            "SystemConfig: hybrid design needs n_users <= n_rf");
    if (structure == PrecoderStructure::pcs && n_tx % n_rf != 0)
        throw std::invalid_argument(
            "SystemConfig: pcs needs n_rf to divide n_tx exactly");
}

double SystemConfig::rate_floor_for(int user) const {
    if (rate_floor.empty())
        return 0.0;
    if (rate_floor.size() == 1)
        return rate_floor[0];
    return rate_floor.at(static_cast<std::size_t>(user));
}

void validate_hybrid_precoder(const HybridPrecoder& hp, double p_max) {
    const int n_tx = static_cast<int>(hp.analog.n_rows);
    const int n_rf = static_cast<int>(hp.analog.n_cols);
    if (n_tx < 1 || n_rf < 1 || hp.digital.n_rows != hp.analog.n_cols)
        throw std::invalid_argument("HybridPrecoder: inconsistent shapes");

    const double modulus = 1.0 / std::sqrt(static_cast<double>(n_tx));
    const double tol = 1e-12;

    if (hp.structure == PrecoderStructure::ccs) {
        for (const arma::cx_double& e : hp.analog)
            if (std::abs(std::abs(e) - modulus) > tol)
                throw std::invalid_argument(
                    "HybridPrecoder: ccs entries must have modulus "
                    "1/sqrt(n_tx)");
    } else {
        if (n_tx % n_rf != 0)
            throw std::invalid_argument(
                "HybridPrecoder: pcs needs n_rf to divide n_tx");
        const int rows_per_block = n_tx / n_rf;
        for (int c = 0; c < n_rf; ++c) {
            for (int r = 0; r < n_tx; ++r) {
                const arma::cx_double e = hp.analog(r, c);
                if (r / rows_per_block == c) {
                    if (std::abs(std::abs(e) - modulus) > tol)
                        throw std::invalid_argument(
                            "HybridPrecoder: pcs on-support entries must "
                            "have modulus 1/sqrt(n_tx)");
                } else if (e != arma::cx_double(0.0, 0.0)) {
                    throw std::invalid_argument(
                        "HybridPrecoder: pcs off-support entries must be "
                        "exactly zero");
                }
            }
        }
    }

    const double power = std::pow(arma::norm(hp.product(), "fro"), 2);
    if (power > p_max + 1e-9)
        throw std::invalid_argument(
            "HybridPrecoder: transmit power exceeds p_max");
}

std::vector<double> per_user_rates(const arma::cx_mat& h_rows,
                                   const arma::cx_mat& f,
                                   const SystemConfig& config) {
    const int k_users = static_cast<int>(h_rows.n_rows);
    if (static_cast<int>(f.n_cols) != k_users)
        throw std::invalid_argument(
            "per_user_rates: one precoder column per user required");
    if (f.n_rows != h_rows.n_cols)
        throw std::invalid_argument(
            "per_user_rates: channel/precoder antenna mismatch");
    if (!(config.noise_power > 0.0))
        throw std::invalid_argument("per_user_rates: noise_power must be > 0");

    // cross(k, i) = |h_k f_i|^2
    const arma::mat cross = arma::square(arma::abs(h_rows * f));

    std::vector<double> rates(k_users);
    for (int k = 0; k < k_users; ++k) {
        const double signal = cross(k, k);
        const double interference =
            arma::accu(cross.row(k)) - signal + config.noise_power;
        rates[k] =
            config.bandwidth * std::log2(1.0 + signal / interference);
    }
    return rates;
}

std::vector<double> per_user_rates(const ChannelSet& channels,
                                   const arma::cx_mat& f,
                                   const SystemConfig& config) {
    return per_user_rates(effective_channels(channels), f, config);
}

namespace {

double consumed_power(double transmit_power, int n_rf_chains, int n_shifters,
                      const SystemConfig& config) {
    return transmit_power / config.pa_efficiency +
           static_cast<double>(n_rf_chains) * config.p_rf_chain +
           static_cast<double>(n_shifters) * config.p_phase_shifter +
           config.p_static;
}

EEReport build_report(const ChannelSet& channels, const arma::cx_mat& f_eff,
                      double power, const SystemConfig& config) {
    EEReport report;
    report.per_user_rate = per_user_rates(channels, f_eff, config);
    report.sum_rate = 0.0;
    for (double r : report.per_user_rate)
        report.sum_rate += r;
    report.total_power = power;
    if (!(power > 0.0))
        throw std::invalid_argument("energy_efficiency: total power must be > 0");
    report.ee = report.sum_rate / power;
    for (int k = 0; k < static_cast<int>(report.per_user_rate.size()); ++k)
        if (report.per_user_rate[k] < config.rate_floor_for(k))
            report.qos_violations.push_back(k);
    return report;
}

} // namespace

double total_power(const HybridPrecoder& precoder,
                   const SystemConfig& config) {
    const int n_tx = static_cast<int>(precoder.analog.n_rows);
    const int n_rf = precoder.n_rf();
    const int n_shifters =
        precoder.structure == PrecoderStructure::ccs ? n_tx * n_rf : n_tx;
    const double transmit = std::pow(arma::norm(precoder.product(), "fro"), 2);
    return consumed_power(transmit, n_rf, n_shifters, config);
}

double total_power(const DigitalPrecoder& precoder,
                   const SystemConfig& config) {
    const int n_tx = static_cast<int>(precoder.matrix.n_rows);
    const double transmit = std::pow(arma::norm(precoder.matrix, "fro"), 2);
    return consumed_power(transmit, n_tx, 0, config);
}

EEReport energy_efficiency(const ChannelSet& channels,
                           const HybridPrecoder& precoder,
                           const SystemConfig& config) {
    return build_report(channels, precoder.product(),
                        total_power(precoder, config), config);
}

EEReport energy_efficiency(const ChannelSet& channels,
                           const DigitalPrecoder& precoder,
                           const SystemConfig& config) {
    return build_report(channels, precoder.matrix,
                        total_power(precoder, config), config);
}

double power_saving_ratio(double hybrid_power, double digital_power) {
    if (!(digital_power > 0.0))
        throw std::invalid_argument(
            "power_saving_ratio: digital_power must be > 0");
    if (hybrid_power < 0.0)
        throw std::invalid_argument(
            "power_saving_ratio: hybrid_power must be >= 0");
    return (digital_power - hybrid_power) / digital_power;
}

} // namespace hprec
