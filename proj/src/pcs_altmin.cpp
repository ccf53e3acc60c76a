// SPDX-License-Identifier: Apache-2.0
#include "hprec/pcs_altmin.hpp"

#include <cmath>
#include <stdexcept>

#include "hprec/rng.hpp"

namespace hprec {

namespace {

double squared_distance(const arma::cx_mat& f_opt, const arma::cx_mat& f_rf,
                        const arma::cx_mat& f_bb) {
    return std::pow(arma::norm(f_opt - f_rf * f_bb, "fro"), 2);
}

arma::cx_mat random_masked_analog(const BlockMask& mask, std::uint64_t seed) {
    Rng rng(derive_seed(seed, 0x706373, 0x696E6974)); // pcs-init substream
    const double modulus = 1.0 / std::sqrt(static_cast<double>(mask.n_tx));
    arma::cx_mat f_rf(mask.n_tx, mask.n_rf, arma::fill::zeros);
    for (int r = 0; r < mask.n_tx; ++r)
        f_rf(r, mask.block_of_row(r)) =
            std::polar(modulus, rng.uniform(0.0, 2.0 * arma::datum::pi));
    return f_rf;
}

} // namespace

BlockMask block_mask(int n_tx, int n_rf) {
    if (n_tx < 1 || n_rf < 1)
        throw std::invalid_argument("block_mask: sizes must be >= 1");
    if (n_tx % n_rf != 0)
        throw std::invalid_argument(
            "block_mask: n_rf must divide n_tx exactly");
    return BlockMask{n_tx, n_rf, n_tx / n_rf};
}

arma::cx_mat digital_ls_closed_form(const arma::cx_mat& f_opt,
                                    const arma::cx_mat& f_rf, double p_max) {
    if (f_opt.n_rows != f_rf.n_rows)
        throw std::invalid_argument("digital_ls_closed_form: row mismatch");
    if (!(p_max > 0.0))
        throw std::invalid_argument(
            "digital_ls_closed_form: p_max must be > 0");

    const arma::cx_mat gram = f_rf.t() * f_rf;
    arma::cx_mat f_bb;
    if (!arma::solve(f_bb, gram, f_rf.t() * f_opt,
                     arma::solve_opts::no_approx))
        throw std::runtime_error(
            "digital_ls_closed_form: singular analog Gram matrix");

    const double power = std::pow(arma::norm(f_rf * f_bb, "fro"), 2);
    if (power > p_max)
        f_bb *= std::sqrt(p_max / power);
    return f_bb;
}

arma::cx_mat pcs_analog_update(const arma::cx_mat& f_opt,
                               const arma::cx_mat& f_bb,
                               const BlockMask& mask) {
    if (static_cast<int>(f_opt.n_rows) != mask.n_tx ||
        static_cast<int>(f_bb.n_rows) != mask.n_rf ||
        f_opt.n_cols != f_bb.n_cols)
        throw std::invalid_argument("pcs_analog_update: shape mismatch");

    const double modulus = 1.0 / std::sqrt(static_cast<double>(mask.n_tx));
    arma::cx_mat f_rf(mask.n_tx, mask.n_rf, arma::fill::zeros);
    for (int r = 0; r < mask.n_tx; ++r) {
        const int i = mask.block_of_row(r);
        arma::cx_double acc(0.0, 0.0);
        for (arma::uword k = 0; k < f_opt.n_cols; ++k)
            acc += f_opt(r, k) * std::conj(f_bb(i, k));
        // Zero magnitude keeps phase 0 by convention.
        f_rf(r, i) = (acc == arma::cx_double(0.0, 0.0))
                         ? arma::cx_double(modulus, 0.0)
                         : std::polar(modulus, std::arg(acc));
    }
    return f_rf;
}

std::pair<HybridPrecoder, AltMinTrace> pcs_altmin(const arma::cx_mat& f_opt,
                                                  int n_rf, double p_max,
                                                  const PcsOptions& options) {
    const int n_tx = static_cast<int>(f_opt.n_rows);
    const int k_users = static_cast<int>(f_opt.n_cols);
    if (n_tx < 1 || k_users < 1)
        throw std::invalid_argument("pcs_altmin: empty target");
    if (k_users > n_rf)
        throw std::invalid_argument("pcs_altmin: need n_users <= n_rf");
    if (!(p_max > 0.0))
        throw std::invalid_argument("pcs_altmin: p_max must be > 0");
    if (!(options.tol > 0.0) || options.max_iter < 1 || options.n_samples < 1)
        throw std::invalid_argument("pcs_altmin: bad options");

    const BlockMask mask = block_mask(n_tx, n_rf);

    arma::cx_mat f_rf;
    if (options.init_analog) {
        f_rf = *options.init_analog;
        if (static_cast<int>(f_rf.n_rows) != n_tx ||
            static_cast<int>(f_rf.n_cols) != n_rf)
            throw std::invalid_argument("pcs_altmin: bad init analog shape");
    } else {
        f_rf = random_masked_analog(mask, options.seed);
    }
    if (options.observer)
        options.observer(f_rf);

    arma::cx_mat best_rf;
    arma::cx_mat best_bb;
    double best_ed = arma::datum::inf;
    bool have_incumbent = false;

    AltMinTrace trace;
    for (int iter = 0; iter < options.max_iter; ++iter) {
        arma::cx_mat f_bb = digital_ls_closed_form(f_opt, f_rf, p_max);
        double ed = squared_distance(f_opt, f_rf, f_bb);

        if (options.use_sdr) {
            // The homogenized ball bounds ||vec(f_bb)||^2 by
            // arg * n_rf / n_tx; passing p_max * n_tx makes that ball equal
            // the product-power budget ||f_rf f_bb||^2 <= p_max (disjoint
            // unit-norm analog columns give ||f_rf f_bb||^2 =
            // ||f_bb||^2 / n_rf), i.e. the same feasible set the closed
            // form uses.
            const HomogenizedQcqp qp =
                homogenize(f_opt, f_rf, p_max * n_tx);
            const SdrSolution sol = solve_sdr(qp, options.sdr);
            const arma::cx_mat f_sdr = randomize_round(
                sol, qp, options.n_samples,
                derive_seed(options.seed, 0x726E64,
                            static_cast<std::uint64_t>(iter)));
            const double ed_sdr = squared_distance(f_opt, f_rf, f_sdr);
            if (ed_sdr < ed) {
                ed = ed_sdr;
                f_bb = f_sdr;
            }
        }

        if (have_incumbent && ed > best_ed + 1e-12 * (1.0 + best_ed)) {
            trace.converged = true;
            break;
        }

        const bool had_prev = have_incumbent;
        const double prev = had_prev ? best_ed : ed;
        best_rf = f_rf;
        best_bb = f_bb;
        best_ed = std::min(ed, prev);
        have_incumbent = true;
        trace.ed_per_iteration.push_back(best_ed);
        trace.iterations = iter + 1;

        if (had_prev && std::abs(prev - ed) <= options.tol * (1.0 + prev)) {
            trace.converged = true;
            break;
        }

        f_rf = pcs_analog_update(f_opt, f_bb, mask);
        if (options.observer)
            options.observer(f_rf);
    }

    HybridPrecoder hp;
    hp.structure = PrecoderStructure::pcs;
    hp.analog = best_rf;
    hp.digital = best_bb;
    const double power = std::pow(arma::norm(hp.product(), "fro"), 2);
    if (power > p_max)
        hp.digital *= std::sqrt(p_max / power);
    return {hp, trace};
}

} // namespace hprec
