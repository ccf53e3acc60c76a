// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <vector>

#include "hprec/channel.hpp"
#include "hprec/types.hpp"

namespace hprec {

/// Per-user achievable rates (bit/s) for the effective precoder f
/// (n_tx x n_users) over the effective row channels h (n_users x n_tx):
/// R_k = bandwidth * log2(1 + |h_k f_k|^2 / (sum_{i != k} |h_k f_i|^2 + noise)).
std::vector<double> per_user_rates(const arma::cx_mat& h_rows,
                                   const arma::cx_mat& f,
                                   const SystemConfig& config);

std::vector<double> per_user_rates(const ChannelSet& channels,
                                   const arma::cx_mat& f,
                                   const SystemConfig& config);

/// Total consumed power (W):
///   (1/pa_efficiency) * ||F_RF F_BB||_F^2 + n_rf * p_rf_chain
///   + n_shifters * p_phase_shifter + p_static
/// with n_shifters = n_tx * n_rf (ccs) or n_tx (pcs).
double total_power(const HybridPrecoder& precoder, const SystemConfig& config);

/// Total consumed power of the fully digital baseline: one RF chain per
/// antenna and no phase shifters.
double total_power(const DigitalPrecoder& precoder,
                   const SystemConfig& config);

/// Energy-efficiency report: rates, consumed power, their ratio (bit/joule)
/// and any violated per-user rate floors.
EEReport energy_efficiency(const ChannelSet& channels,
                           const HybridPrecoder& precoder,
                           const SystemConfig& config);

EEReport energy_efficiency(const ChannelSet& channels,
                           const DigitalPrecoder& precoder,
                           const SystemConfig& config);

/// Fraction of the digital baseline's power saved by a hybrid design:
/// (digital_power - hybrid_power) / digital_power.
double power_saving_ratio(double hybrid_power, double digital_power);

} // namespace hprec
