// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <cstdint>
#include <string>
#include <vector>

namespace hprec {

/// Phase-shifter network between the RF chains and the antennas.
///
/// ccs: completely connected, every chain drives every antenna through its
///      own phase shifter (n_tx * n_rf shifters, dense analog matrix).
/// pcs: partially connected, each chain drives a disjoint subarray of
///      n_tx / n_rf antennas (n_tx shifters, block-diagonal analog matrix).
enum class PrecoderStructure { ccs, pcs };

/// Scenario and power-model parameters for one downlink multi-user run.
///
/// Power figures are in watts, bandwidth in hertz, rates in bit/s; energy
/// efficiency therefore comes out in bit/joule.
struct SystemConfig {
    int n_tx = 64;     ///< transmit antennas N_t
    int n_rx = 1;      ///< receive antennas per user N_r
    int n_users = 4;   ///< single-stream users K
    int n_streams = 4; ///< data streams N_s (one per user in this model)
    int n_rf = 4;      ///< RF chains N_RF at the transmitter

    double bandwidth = 1.0;        ///< spectral bandwidth (Hz)
    double noise_power = 1e-3;     ///< receiver noise variance (W)
    double pa_efficiency = 0.38;   ///< power-amplifier efficiency, in (0, 1]
    double p_rf_chain = 0.25;      ///< power drawn per RF chain (W)
    double p_static = 1.0;         ///< static circuit power (W)
    double p_phase_shifter = 0.01; ///< power drawn per phase shifter (W)
    double p_max = 1.0;            ///< transmit power budget (W)

    /// Per-user quality-of-service floor (bit/s); scalar broadcast if one
    /// entry, empty means no floor.
    std::vector<double> rate_floor;

    /// Validates the scenario-independent invariants; throws
    /// std::invalid_argument on violation.
    void validate() const;

    /// Additional feasibility checks for a hybrid design with this config
    /// (n_streams <= n_rf <= n_tx; subarray divisibility for pcs).
    void validate_hybrid(PrecoderStructure structure) const;

    double rate_floor_for(int user) const;
};

/// Hybrid precoder pair: analog phase-shifter matrix (n_tx x n_rf, entries
/// of modulus 1/sqrt(n_tx) on the connected support) and digital baseband
/// matrix (n_rf x n_users).  The transmitted precoder is analog * digital.
struct HybridPrecoder {
    arma::cx_mat analog;
    arma::cx_mat digital;
    PrecoderStructure structure = PrecoderStructure::ccs;

    arma::cx_mat product() const { return analog * digital; }
    int n_rf() const { return static_cast<int>(analog.n_cols); }
};

/// Validates modulus/support structure and the transmit power budget;
/// throws std::invalid_argument on violation.
void validate_hybrid_precoder(const HybridPrecoder& hp, double p_max);

/// Fully digital precoder (n_tx x n_users) produced by the
/// energy-efficiency ascent, together with its convergence record.
struct DigitalPrecoder {
    arma::cx_mat matrix;
    bool converged = false;
    int iterations = 0;
    double final_gradient_norm = 0.0;
    std::vector<double> ee_per_iteration; ///< monotone non-decreasing
};

/// Energy-efficiency report for one precoder on one channel realization.
struct EEReport {
    std::vector<double> per_user_rate; ///< bit/s, one entry per user
    double sum_rate = 0.0;             ///< bit/s
    double total_power = 0.0;          ///< W
    double ee = 0.0;                   ///< bit/joule
    std::vector<int> qos_violations;   ///< users below their rate floor
};

/// Iteration record of an alternating-minimization run.  The objective is
/// the squared Euclidean distance ||F_opt - F_RF * F_BB||_F^2; the recorded
/// trace never increases.
struct AltMinTrace {
    std::vector<double> ed_per_iteration;
    int iterations = 0;
    bool converged = false;

    double final_ed() const {
        return ed_per_iteration.empty() ? 0.0 : ed_per_iteration.back();
    }
};

} // namespace hprec
