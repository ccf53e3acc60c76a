// SPDX-License-Identifier: Apache-2.0
#include "hprec/sdr.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>

#include "hprec/rng.hpp"

namespace hprec {

namespace {

void require_hermitian(const arma::cx_mat& m, const char* what) {
    if (!m.is_square() || arma::norm(m - m.t(), "fro") >
                              1e-12 * (1.0 + arma::norm(m, "fro")))
        throw std::invalid_argument(std::string(what) +
                                    ": matrix must be Hermitian");
}

double inner(const arma::cx_mat& a, const arma::cx_mat& b) {
    return std::real(arma::accu(arma::conj(a) % b));
}

arma::cx_mat psd_part(const arma::cx_mat& w) {
    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec, (w + w.t()) / 2.0))
        throw std::runtime_error("solve_sdr: eigendecomposition failed");
    arma::vec clamped = arma::clamp(eigval, 0.0, arma::datum::inf);
    return eigvec * arma::diagmat(clamped) * eigvec.t();
}

} // namespace

HomogenizedQcqp homogenize(const arma::cx_mat& f_opt,
                           const arma::cx_mat& f_rf, double p_max) {
    if (f_opt.n_rows != f_rf.n_rows)
        throw std::invalid_argument("homogenize: row mismatch");
    if (f_opt.is_empty() || f_rf.is_empty())
        throw std::invalid_argument("homogenize: empty input");
    if (!(p_max > 0.0))
        throw std::invalid_argument("homogenize: p_max must be > 0");

    const int n_tx = static_cast<int>(f_opt.n_rows);
    const int k_users = static_cast<int>(f_opt.n_cols);
    const int n_rf = static_cast<int>(f_rf.n_cols);
    const int n = n_rf * k_users + 1;

    const arma::cx_mat stacked =
        arma::kron(arma::eye<arma::cx_mat>(k_users, k_users), f_rf);
    const arma::cx_vec target = arma::vectorise(f_opt);

    HomogenizedQcqp qp;
    qp.dim = n;
    qp.n_rf = n_rf;
    qp.n_users = k_users;
    qp.cost.set_size(n, n);
    qp.cost.submat(0, 0, n - 2, n - 2) = stacked.t() * stacked;
    qp.cost.col(n - 1).head(n - 1) = -(stacked.t() * target);
    qp.cost.row(n - 1).head(n - 1) =
        qp.cost.col(n - 1).head(n - 1).t();
    qp.cost(n - 1, n - 1) =
        arma::cx_double(std::pow(arma::norm(target, 2), 2), 0.0);
    qp.cost = (qp.cost + qp.cost.t()) / 2.0;

    qp.power_constraint.zeros(n, n);
    qp.power_constraint.submat(0, 0, n - 2, n - 2) =
        arma::eye<arma::cx_mat>(n - 1, n - 1);
    qp.norm_constraint.zeros(n, n);
    qp.norm_constraint(n - 1, n - 1) = arma::cx_double(1.0, 0.0);

    qp.power_bound = p_max * static_cast<double>(n_rf) /
                     static_cast<double>(n_tx);
    qp.norm_value = 1.0;
    return qp;
}

SdrSolution solve_sdr(const HomogenizedQcqp& qp, const SdrOptions& options) {
    if (qp.dim < 2)
        throw std::invalid_argument("solve_sdr: dim must be >= 2");
    if (qp.dim > options.size_cap)
        throw std::invalid_argument("solve_sdr: dim exceeds size cap");
    require_hermitian(qp.cost, "solve_sdr cost");
    require_hermitian(qp.power_constraint, "solve_sdr power constraint");
    require_hermitian(qp.norm_constraint, "solve_sdr norm constraint");
    if (!(qp.power_bound >= 0.0) || !(qp.norm_value > 0.0))
        throw std::runtime_error("solve_sdr: infeasible constraint set");
    if (!(options.tol > 0.0) || options.max_iter < 1)
        throw std::invalid_argument("solve_sdr: bad options");

    const int n = qp.dim;
    const arma::cx_mat& e = qp.cost;
    const arma::cx_mat& a1 = qp.power_constraint;
    const arma::cx_mat& a2 = qp.norm_constraint;
    const double b1 = qp.power_bound;
    const double b2 = qp.norm_value;

    // Gram matrix of the constraint operator, slack included in row 1.
    arma::mat gram(2, 2);
    gram(0, 0) = inner(a1, a1) + 1.0;
    gram(0, 1) = inner(a1, a2);
    gram(1, 0) = gram(0, 1);
    gram(1, 1) = inner(a2, a2);
    const arma::mat gram_inv = arma::inv_sympd(gram);

    arma::cx_mat x(n, n, arma::fill::zeros); // primal iterate (multiplier)
    arma::cx_mat s_mat(n, n, arma::fill::zeros);
    double x_slack = 0.0;
    double s_slack = 0.0;
    arma::vec y(2, arma::fill::zeros);
    double mu = 1.0;

    const double e_norm = arma::norm(e, "fro");
    const double b_norm = std::hypot(b1, b2);

    SdrSolution sol;
    double pres = arma::datum::inf;
    double dres = arma::datum::inf;
    double gap = arma::datum::inf;

    int iter = 0;
    for (; iter < options.max_iter; ++iter) {
        // Dual block: y = gram^{-1} [ (b - A(x)) / mu + A(C - S) ].
        const double a1x = inner(a1, x) + x_slack;
        const double a2x = inner(a2, x);
        arma::vec rhs(2);
        rhs(0) = (b1 - a1x) / mu + inner(a1, e - s_mat) - s_slack;
        rhs(1) = (b2 - a2x) / mu + inner(a2, e - s_mat);
        y = gram_inv * rhs;

        // Cone block: project W = C - A*(y) - X/mu onto the PSD cone
        // (slack coordinate onto the nonnegative half-line).
        const arma::cx_mat w = e - y(0) * a1 - y(1) * a2 - x / mu;
        const double w_slack = -y(0) - x_slack / mu;
        s_mat = psd_part(w);
        s_slack = std::max(w_slack, 0.0);

        // Multiplier ascent; X stays PSD by construction.
        x = mu * (s_mat - w);
        x_slack = mu * (s_slack - w_slack);

        if (iter % 20 == 19 || iter == options.max_iter - 1) {
            const double p1 = inner(a1, x) + x_slack - b1;
            const double p2 = inner(a2, x) - b2;
            pres = std::hypot(p1, p2) / (1.0 + b_norm);
            const double d_mat =
                arma::norm(y(0) * a1 + y(1) * a2 + s_mat - e, "fro");
            const double d_sl = std::abs(y(0) + s_slack);
            dres = std::hypot(d_mat, d_sl) / (1.0 + e_norm);
            const double obj = inner(e, x);
            const double dual = b1 * y(0) + b2 * y(1);
            gap = std::abs(obj - dual) /
                  (1.0 + std::abs(obj) + std::abs(dual));
            if (std::getenv("HPREC_SDR_TRACE") && iter % 5000 == 4999)
                std::fprintf(stderr,
                             "iter=%d mu=%.3e pres=%.3e dres=%.3e gap=%.3e\n",
                             iter, mu, pres, dres, gap);
            if (pres < options.tol && dres < options.tol &&
                gap < options.tol) {
                sol.converged = true;
                ++iter;
                break;
            }
            // Residual balancing keeps the two convergence rates close.
            // Small mu amplifies the (b - A(X))/mu term in the dual step,
            // favoring primal feasibility, so a lagging dual residual calls
            // for a larger mu (and vice versa).
            if (iter % 100 == 99) {
                if (dres > 10.0 * pres)
                    mu = std::min(mu * 2.0, 1e6);
                else if (pres > 10.0 * dres)
                    mu = std::max(mu / 2.0, 1e-6);
            }
        }
    }

    sol.iterations = iter;
    sol.psd_matrix = (x + x.t()) / 2.0;
    sol.objective = inner(e, sol.psd_matrix);
    sol.dual_objective = b1 * y(0) + b2 * y(1);
    sol.residuals = {std::max(inner(a1, sol.psd_matrix) - b1, 0.0),
                     std::abs(inner(a2, sol.psd_matrix) - b2)};

    arma::vec eigval;
    if (!arma::eig_sym(eigval, sol.psd_matrix))
        throw std::runtime_error("solve_sdr: eigenvalue extraction failed");
    const double lead = eigval(n - 1);
    sol.rank1_gap = lead > 0.0 ? std::max(eigval(n - 2), 0.0) / lead : 1.0;
    return sol;
}

arma::cx_mat randomize_round(const SdrSolution& solution,
                             const HomogenizedQcqp& qp, int n_samples,
                             std::uint64_t seed) {
    if (n_samples < 1)
        throw std::invalid_argument("randomize_round: n_samples must be >= 1");
    if (static_cast<int>(solution.psd_matrix.n_rows) != qp.dim)
        throw std::invalid_argument("randomize_round: solution/problem "
                                    "dimension mismatch");

    const int n = qp.dim;
    arma::vec eigval;
    arma::cx_mat eigvec;
    if (!arma::eig_sym(eigval, eigvec,
                       (solution.psd_matrix + solution.psd_matrix.t()) / 2.0))
        throw std::runtime_error("randomize_round: eigendecomposition failed");
    const arma::cx_mat factor =
        eigvec *
        arma::diagmat(arma::sqrt(arma::clamp(eigval, 0.0, arma::datum::inf)));

    Rng rng(derive_seed(seed, 0x726F756E64ULL, 0));

    arma::cx_vec best_d;
    double best_ed = arma::datum::inf;
    for (int sample = 0; sample < n_samples; ++sample) {
        arma::cx_vec z(n);
        for (int i = 0; i < n; ++i)
            z(i) = rng.cx_normal();
        const arma::cx_vec t = factor * z;
        const arma::cx_double hom = t(n - 1);
        if (std::abs(hom) == 0.0)
            continue;
        arma::cx_vec d = t.head(n - 1) / hom;
        const double d_sq = std::pow(arma::norm(d, 2), 2);
        if (d_sq > qp.power_bound && d_sq > 0.0)
            d *= std::sqrt(qp.power_bound / d_sq);

        arma::cx_vec lifted(n);
        lifted.head(n - 1) = d;
        lifted(n - 1) = arma::cx_double(1.0, 0.0);
        const double ed =
            std::real(arma::cdot(lifted, qp.cost * lifted));
        if (ed < best_ed) {
            best_ed = ed;
            best_d = d;
        }
    }

    if (best_d.is_empty())
        throw std::runtime_error(
            "randomize_round: no usable sample (degenerate solution)");
    return arma::reshape(best_d, qp.n_rf, qp.n_users);
}

} // namespace hprec
