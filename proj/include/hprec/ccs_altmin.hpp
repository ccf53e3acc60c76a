// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <cstdint>
#include <optional>

#include "hprec/types.hpp"

namespace hprec {

/// Semi-unitary digital factor maximizing Re tr(f_ss * f_opt^H * f_rf) over
/// matrices with orthonormal columns, obtained from the thin SVD
/// f_opt^H * f_rf = V * S * Y^H as f_ss = Y * V^H (n_rf x n_users,
/// f_ss^H f_ss = I).
arma::cx_mat procrustes_digital(const arma::cx_mat& f_opt,
                                const arma::cx_mat& f_rf);

/// Real scale minimizing ||f_opt - sigma * f_rf * f_ss||_F^2:
/// sigma = Re tr(f_ss * f_opt^H * f_rf) / ||f_rf * f_ss||_F^2.
double sigma_scale(const arma::cx_mat& f_opt, const arma::cx_mat& f_rf,
                   const arma::cx_mat& f_ss);

/// Fully connected analog update: every entry is set to modulus
/// 1/sqrt(n_tx) with the phase of the corresponding entry of
/// f_opt * f_ss^H (phase 0 for zero-magnitude entries).
arma::cx_mat phase_update_analog(const arma::cx_mat& f_opt,
                                 const arma::cx_mat& f_ss);

/// Optional warm start for ccs_altmin: analog matrix plus the matching
/// semi-unitary digital factor and scale, used as the initial incumbent.
struct CcsInit {
    arma::cx_mat analog;
    arma::cx_mat f_ss;
    double sigma = 1.0;
};

struct CcsOptions {
    double tol = 1e-6;         ///< stop on relative ED change below this
    int max_iter = 200;
    std::uint64_t seed = 0;    ///< analog phase initialization stream
    std::optional<CcsInit> init;
};

/// Alternating minimization of ||f_opt - f_rf * (sigma f_ss)||_F^2 for the
/// completely connected structure: semi-unitary digital factor by
/// orthogonal Procrustes, optimal real scale, and phase-extraction analog
/// update.  An iteration is accepted only if it does not increase the
/// objective, so the recorded trace is non-increasing; the final digital
/// matrix is rescaled onto the power ball if the budget is violated.
std::pair<HybridPrecoder, AltMinTrace> ccs_altmin(const arma::cx_mat& f_opt,
                                                  int n_rf, double p_max,
                                                  const CcsOptions& options = {});

} // namespace hprec
