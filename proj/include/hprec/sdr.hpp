// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <cstdint>
#include <vector>

namespace hprec {

/// Homogenized form of the per-iteration digital least-squares subproblem
/// min ||vec(f_opt) - (I kron f_rf) d||^2 over a power ball.  With the
/// homogenization coordinate appended (t = [d; im], |im| = 1), the
/// objective is t^H cost t and the constraints become
/// tr(power_constraint T) <= power_bound and tr(norm_constraint T) = 1 on
/// T = t t^H.  All three matrices are Hermitian; dim = n_rf * n_users + 1.
struct HomogenizedQcqp {
    arma::cx_mat cost;             ///< E, dim x dim
    arma::cx_mat power_constraint; ///< A1 = diag(I, 0)
    arma::cx_mat norm_constraint;  ///< A2 = diag(0, ..., 0, 1)
    double power_bound = 0.0;      ///< p_max * n_rf / n_tx
    double norm_value = 1.0;
    int dim = 0;
    int n_rf = 0;
    int n_users = 0;
};

/// Builds the homogenized subproblem from the digital target and the fixed
/// analog matrix.  The quadratic power ball bounds ||vec(f_bb)||^2 by
/// p_max * n_rf / n_tx.
HomogenizedQcqp homogenize(const arma::cx_mat& f_opt,
                           const arma::cx_mat& f_rf, double p_max);

struct SdrOptions {
    double tol = 1e-8;
    int max_iter = 200000;
    int size_cap = 65; ///< largest accepted dim
};

/// Solution of the semidefinite relaxation min tr(E T) subject to
/// tr(A1 T) <= power_bound, tr(A2 T) = norm_value, T PSD.
struct SdrSolution {
    arma::cx_mat psd_matrix;
    double objective = 0.0;
    double dual_objective = 0.0;
    std::vector<double> residuals; ///< power violation, norm mismatch
    double rank1_gap = 0.0;        ///< second/first eigenvalue ratio
    bool converged = false;
    int iterations = 0;
};

/// First-order conic solver for the relaxation: alternating projection onto
/// the semidefinite cone and the affine constraint set with dual ascent
/// (ADMM on the dual problem).  The power inequality is handled through a
/// nonnegative slack, which keeps the relaxation a true lower bound of the
/// rank-constrained problem even when the ball is slack.
SdrSolution solve_sdr(const HomogenizedQcqp& qp, const SdrOptions& options = {});

/// Gaussian randomized rounding: draws n_samples vectors shaped by a square
/// root of the PSD solution, de-homogenizes each (divide by the last
/// coordinate), rescales onto the power ball when violated, and returns the
/// digital matrix (n_rf x n_users) with the smallest true objective.
/// Samples are drawn sequentially from one substream, so enlarging
/// n_samples never worsens the result.
arma::cx_mat randomize_round(const SdrSolution& solution,
                             const HomogenizedQcqp& qp, int n_samples,
                             std::uint64_t seed);

} // namespace hprec
