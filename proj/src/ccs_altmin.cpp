// SPDX-License-Identifier: Apache-2.0
#include "hprec/ccs_altmin.hpp"

#include <cmath>
#include <stdexcept>

#include "hprec/rng.hpp"

namespace hprec {

namespace {

double squared_distance(const arma::cx_mat& f_opt, const arma::cx_mat& f_rf,
                        const arma::cx_mat& f_ss, double sigma) {
    return std::pow(arma::norm(f_opt - sigma * (f_rf * f_ss), "fro"), 2);
}

arma::cx_mat random_phase_analog(int n_tx, int n_rf, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x616E61, 0x6C6F67)); // analog-init substream
    const double modulus = 1.0 / std::sqrt(static_cast<double>(n_tx));
    arma::cx_mat f_rf(n_tx, n_rf);
    for (int c = 0; c < n_rf; ++c)
        for (int r = 0; r < n_tx; ++r)
            f_rf(r, c) = std::polar(modulus,
                                    rng.uniform(0.0, 2.0 * arma::datum::pi));
    return f_rf;
}

} // namespace

arma::cx_mat procrustes_digital(const arma::cx_mat& f_opt,
                                const arma::cx_mat& f_rf) {
    if (f_opt.n_rows != f_rf.n_rows)
        throw std::invalid_argument("procrustes_digital: row mismatch");
    if (f_opt.n_cols > f_rf.n_cols)
        throw std::invalid_argument(
            "procrustes_digital: need n_users <= n_rf for orthonormal "
            "columns");

    const arma::cx_mat m = f_opt.t() * f_rf; // n_users x n_rf
    arma::cx_mat v, y;
    arma::vec s;
    if (!arma::svd_econ(v, s, y, m))
        throw std::runtime_error("procrustes_digital: svd failed");
    return y * v.t(); // n_rf x n_users, orthonormal columns
}

double sigma_scale(const arma::cx_mat& f_opt, const arma::cx_mat& f_rf,
                   const arma::cx_mat& f_ss) {
    if (f_opt.n_rows != f_rf.n_rows || f_rf.n_cols != f_ss.n_rows ||
        f_opt.n_cols != f_ss.n_cols)
        throw std::invalid_argument("sigma_scale: shape mismatch");

    const arma::cx_mat product = f_rf * f_ss;
    const double denom = std::pow(arma::norm(product, "fro"), 2);
    if (!(denom > 0.0))
        throw std::invalid_argument("sigma_scale: f_rf * f_ss is zero");
    const double numer = std::real(arma::trace(f_ss * f_opt.t() * f_rf));
    return numer / denom;
}

arma::cx_mat phase_update_analog(const arma::cx_mat& f_opt,
                                 const arma::cx_mat& f_ss) {
    if (f_opt.n_cols != f_ss.n_cols)
        throw std::invalid_argument("phase_update_analog: column mismatch");

    const int n_tx = static_cast<int>(f_opt.n_rows);
    const double modulus = 1.0 / std::sqrt(static_cast<double>(n_tx));
    const arma::cx_mat target = f_opt * f_ss.t(); // n_tx x n_rf

    arma::cx_mat f_rf(arma::size(target));
    for (arma::uword i = 0; i < target.n_elem; ++i) {
        const arma::cx_double e = target(i);
        // Zero magnitude keeps phase 0 by convention.
        f_rf(i) = (e == arma::cx_double(0.0, 0.0))
                      ? arma::cx_double(modulus, 0.0)
                      : std::polar(modulus, std::arg(e));
    }
    return f_rf;
}

std::pair<HybridPrecoder, AltMinTrace> ccs_altmin(const arma::cx_mat& f_opt,
                                                  int n_rf, double p_max,
                                                  const CcsOptions& options) {
    const int n_tx = static_cast<int>(f_opt.n_rows);
    const int k_users = static_cast<int>(f_opt.n_cols);
    if (n_tx < 1 || k_users < 1)
        throw std::invalid_argument("ccs_altmin: empty target");
    if (k_users > n_rf || n_rf > n_tx)
        throw std::invalid_argument(
            "ccs_altmin: need n_users <= n_rf <= n_tx");
    if (!(p_max > 0.0))
        throw std::invalid_argument("ccs_altmin: p_max must be > 0");
    if (!(options.tol > 0.0) || options.max_iter < 1)
        throw std::invalid_argument("ccs_altmin: bad options");

    // Incumbent state; accepted updates never increase the objective.
    arma::cx_mat best_rf;
    arma::cx_mat best_ss;
    double best_sigma = 1.0;
    double best_ed = 0.0;
    bool have_incumbent = false;

    arma::cx_mat f_rf;
    if (options.init) {
        if (options.init->analog.n_rows != f_opt.n_rows ||
            static_cast<int>(options.init->analog.n_cols) != n_rf)
            throw std::invalid_argument("ccs_altmin: bad init analog shape");
        f_rf = options.init->analog;
        best_rf = options.init->analog;
        best_ss = options.init->f_ss;
        best_sigma = options.init->sigma;
        best_ed = squared_distance(f_opt, best_rf, best_ss, best_sigma);
        have_incumbent = true;
    } else {
        f_rf = random_phase_analog(n_tx, n_rf, options.seed);
    }

    AltMinTrace trace;
    if (have_incumbent)
        trace.ed_per_iteration.push_back(best_ed);

    for (int iter = 0; iter < options.max_iter; ++iter) {
        const arma::cx_mat f_ss = procrustes_digital(f_opt, f_rf);
        const double sigma = sigma_scale(f_opt, f_rf, f_ss);
        const double ed = squared_distance(f_opt, f_rf, f_ss, sigma);

        if (have_incumbent && ed > best_ed + 1e-12 * (1.0 + best_ed)) {
            // The phase-extraction step is exactly monotone only for
            // n_rf == n_users; reject any excursion and stop.
            trace.converged = true;
            break;
        }

        const bool had_prev = have_incumbent;
        const double prev = had_prev ? best_ed : ed;
        best_rf = f_rf;
        best_ss = f_ss;
        best_sigma = sigma;
        best_ed = std::min(ed, prev);
        have_incumbent = true;
        trace.ed_per_iteration.push_back(best_ed);
        trace.iterations = iter + 1;

        if (had_prev && std::abs(prev - ed) <= options.tol * (1.0 + prev)) {
            trace.converged = true;
            break;
        }
        f_rf = phase_update_analog(f_opt, f_ss);
    }

    HybridPrecoder hp;
    hp.structure = PrecoderStructure::ccs;
    hp.analog = best_rf;
    hp.digital = best_sigma * best_ss;
    const double power = std::pow(arma::norm(hp.product(), "fro"), 2);
    if (power > p_max)
        hp.digital *= std::sqrt(p_max / power);
    return {hp, trace};
}

} // namespace hprec
