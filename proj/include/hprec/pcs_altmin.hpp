// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <cstdint>
#include <functional>
#include <optional>

#include "hprec/sdr.hpp"
#include "hprec/types.hpp"

namespace hprec {

/// Support pattern of the partially connected analog matrix: chain i drives
/// the contiguous subarray of rows [i * rows_per_block, (i+1) * rows_per_block).
struct BlockMask {
    int n_tx = 0;
    int n_rf = 0;
    int rows_per_block = 0;

    int block_of_row(int row) const { return row / rows_per_block; }
    bool on_support(int row, int col) const {
        return block_of_row(row) == col;
    }
};

/// Builds the subarray mask; n_rf must divide n_tx exactly.
BlockMask block_mask(int n_tx, int n_rf);

/// Closed-form digital update for a fixed partially connected analog
/// matrix: the least-squares solution (f_rf^H f_rf)^{-1} f_rf^H f_opt,
/// scaled down onto the power ball ||f_rf f_bb||_F^2 <= p_max only when the
/// bound is violated.
arma::cx_mat digital_ls_closed_form(const arma::cx_mat& f_opt,
                                    const arma::cx_mat& f_rf, double p_max);

/// Partially connected analog update for a fixed digital matrix: on-support
/// entry (r, i) takes modulus 1/sqrt(n_tx) and the phase of
/// sum_k f_opt(r, k) * conj(f_bb(i, k)); off-support entries are exactly
/// zero.  This is the exact on-support minimizer of the objective.
arma::cx_mat pcs_analog_update(const arma::cx_mat& f_opt,
                               const arma::cx_mat& f_bb,
                               const BlockMask& mask);

struct PcsOptions {
    double tol = 1e-6;     ///< stop on relative ED change below this
    int max_iter = 200;
    bool use_sdr = false;  ///< also run the SDR + rounding digital update
    int n_samples = 1000;  ///< rounding samples per SDR solve
    std::uint64_t seed = 0;
    std::optional<arma::cx_mat> init_analog;
    /// Invoked with every analog iterate (support-fidelity inspection).
    std::function<void(const arma::cx_mat&)> observer;
    SdrOptions sdr;
};

/// Alternating minimization of ||f_opt - f_rf * f_bb||_F^2 for the
/// partially connected structure.  The digital update is the closed form
/// above; with use_sdr the semidefinite relaxation plus randomized rounding
/// runs as well and the better of the two candidates is accepted, so the
/// recorded trace is non-increasing either way.
std::pair<HybridPrecoder, AltMinTrace> pcs_altmin(const arma::cx_mat& f_opt,
                                                  int n_rf, double p_max,
                                                  const PcsOptions& options = {});

} // namespace hprec
