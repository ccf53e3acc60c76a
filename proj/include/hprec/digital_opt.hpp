// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <optional>

#include "hprec/channel.hpp"
#include "hprec/types.hpp"

namespace hprec {

/// Structured split of one user's energy-efficiency gradient.  The Wirtinger
/// gradient with respect to the conjugate of precoder column k factors as
/// (2 / P^2) * (Q - J) * f_k, where P is the consumed power, Q is a scaled
/// rank-one outer product of the user's channel with itself, and J collects
/// the interference terms plus a positive multiple of the identity (J is
/// therefore Hermitian positive definite).
struct GradientParts {
    arma::cx_mat q;
    arma::cx_mat j;
    double total_power = 0.0;
};

/// Dense gradient split for user k.  Intended for verification and small
/// problems; the optimizer itself uses an equivalent matrix-free form.
GradientParts gradient_parts(const arma::cx_mat& h_rows, const arma::cx_mat& f,
                             const SystemConfig& config, int k);

/// Wirtinger gradient of the digital energy efficiency with respect to
/// conj(F), returned as an n_tx x n_users matrix (column k is the gradient
/// for user k's precoder column).  Real-coordinate derivatives are twice the
/// real/imaginary parts of these entries.
arma::cx_mat ee_gradient(const arma::cx_mat& h_rows, const arma::cx_mat& f,
                         const SystemConfig& config);

/// Digital energy efficiency of precoder f over the effective row channels:
/// sum rate divided by the fully digital consumed power.
double digital_ee(const arma::cx_mat& h_rows, const arma::cx_mat& f,
                  const SystemConfig& config);

struct DigitalOptOptions {
    double tol = 1e-6;    ///< stop when max_k ||gradient_k||_2 < tol
    int max_iter = 500;   ///< maximum ascent sweeps over all users
    double damping = 0.5; ///< fixed-point damping factor in (0, 1]

    /// Starting precoder (n_tx x n_users); the matched filter at equal power
    /// split when absent.  Scaled onto the power ball if it violates it.
    std::optional<arma::cx_mat> init;
};

/// Maximizes the digital energy efficiency under the transmit power budget
/// by a damped fixed-point ascent on the stationarity condition
/// f_k ~ J_k^{-1} h_k^H, with a per-column line search and backtracking.
/// Starts from the matched filter at equal power split.  The recorded EE
/// trace is non-decreasing and every iterate satisfies the power budget.
DigitalPrecoder optimize_digital(const ChannelSet& channels,
                                 const SystemConfig& config,
                                 const DigitalOptOptions& options = {});

DigitalPrecoder optimize_digital(const arma::cx_mat& h_rows,
                                 const SystemConfig& config,
                                 const DigitalOptOptions& options = {});

} // namespace hprec
