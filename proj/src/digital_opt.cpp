// SPDX-License-Identifier: Apache-2.0
#include "hprec/digital_opt.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hprec {

namespace {

constexpr double kLn2 = 0.69314718055994530941723212145818;

double digital_power(double transmit_power, int n_tx,
                     const SystemConfig& config) {
    return transmit_power / config.pa_efficiency +
           static_cast<double>(n_tx) * config.p_rf_chain + config.p_static;
}

/// Per-user SINR decomposition of the cross-gain matrix |h_i f_j|^2.
struct RateTerms {
    arma::vec signal; ///< N_i = |h_i f_i|^2
    arma::vec denom;  ///< D_i = sum_{j != i} |h_i f_j|^2 + noise
    arma::vec total;  ///< T_i = N_i + D_i
    double sum_rate = 0.0;
};

RateTerms rate_terms(const arma::mat& cross, const SystemConfig& config) {
    const int k_users = static_cast<int>(cross.n_rows);
    RateTerms t;
    t.signal.set_size(k_users);
    t.denom.set_size(k_users);
    t.total.set_size(k_users);
    for (int i = 0; i < k_users; ++i) {
        t.signal(i) = cross(i, i);
        t.denom(i) = arma::accu(cross.row(i)) - t.signal(i) +
                     config.noise_power;
        t.total(i) = t.signal(i) + t.denom(i);
        t.sum_rate +=
            config.bandwidth * std::log2(1.0 + t.signal(i) / t.denom(i));
    }
    return t;
}

void check_dims(const arma::cx_mat& h_rows, const arma::cx_mat& f,
                const SystemConfig& config) {
    if (static_cast<int>(h_rows.n_rows) != config.n_users)
        throw std::invalid_argument("digital_opt: one channel row per user");
    if (f.n_rows != h_rows.n_cols ||
        static_cast<int>(f.n_cols) != config.n_users)
        throw std::invalid_argument("digital_opt: precoder shape mismatch");
}

} // namespace

double digital_ee(const arma::cx_mat& h_rows, const arma::cx_mat& f,
                  const SystemConfig& config) {
    config.validate();
    check_dims(h_rows, f, config);
    const arma::mat cross = arma::square(arma::abs(h_rows * f));
    const RateTerms t = rate_terms(cross, config);
    const double power = digital_power(std::pow(arma::norm(f, "fro"), 2),
                                       static_cast<int>(f.n_rows), config);
    if (!(power > 0.0))
        throw std::invalid_argument("digital_ee: total power must be > 0");
    return t.sum_rate / power;
}

arma::cx_mat ee_gradient(const arma::cx_mat& h_rows, const arma::cx_mat& f,
                         const SystemConfig& config) {
    config.validate();
    check_dims(h_rows, f, config);

    const int k_users = config.n_users;
    const arma::cx_mat c = h_rows * f; // c(i, j) = h_i f_j
    const arma::mat cross = arma::square(arma::abs(c));
    const RateTerms t = rate_terms(cross, config);
    const double power = digital_power(std::pow(arma::norm(f, "fro"), 2),
                                       static_cast<int>(f.n_rows), config);
    if (!(power > 0.0))
        throw std::invalid_argument("ee_gradient: total power must be > 0");

    // d EE / d conj(f_k) = (1/P^2) * [ kappa * ( c_kk / T_k * h_k^H
    //     - sum_{i != k} w_i c_ik h_i^H ) - (R_sum / eps) f_k ],
    // kappa = P * bandwidth / ln 2,  w_i = N_i / (D_i T_i).
    const double kappa = power * config.bandwidth / kLn2;
    arma::cx_mat coef(k_users, k_users);
    for (int k = 0; k < k_users; ++k) {
        for (int i = 0; i < k_users; ++i) {
            if (i == k)
                coef(i, k) = kappa / t.total(k) * c(k, k);
            else
                coef(i, k) = -kappa * t.signal(i) /
                             (t.denom(i) * t.total(i)) * c(i, k);
        }
    }
    return (h_rows.t() * coef - (t.sum_rate / config.pa_efficiency) * f) /
           (power * power);
}

GradientParts gradient_parts(const arma::cx_mat& h_rows, const arma::cx_mat& f,
                             const SystemConfig& config, int k) {
    config.validate();
    check_dims(h_rows, f, config);
    if (k < 0 || k >= config.n_users)
        throw std::invalid_argument("gradient_parts: user index out of range");

    const int n_tx = static_cast<int>(h_rows.n_cols);
    const arma::mat cross = arma::square(arma::abs(h_rows * f));
    const RateTerms t = rate_terms(cross, config);
    const double power = digital_power(std::pow(arma::norm(f, "fro"), 2),
                                       static_cast<int>(f.n_rows), config);
    if (!(power > 0.0))
        throw std::invalid_argument(
            "gradient_parts: total power must be > 0");

    const double kappa_half = power * config.bandwidth / (2.0 * kLn2);

    GradientParts parts;
    parts.total_power = power;
    parts.q = kappa_half / t.total(k) *
              (h_rows.row(k).t() * h_rows.row(k));
    parts.j = arma::cx_mat(n_tx, n_tx, arma::fill::zeros);
    for (int i = 0; i < config.n_users; ++i) {
        if (i == k)
            continue;
        parts.j += kappa_half * t.signal(i) / (t.denom(i) * t.total(i)) *
                   (h_rows.row(i).t() * h_rows.row(i));
    }
    parts.j += t.sum_rate / (2.0 * config.pa_efficiency) *
               arma::cx_mat(n_tx, n_tx, arma::fill::eye);
    return parts;
}

namespace {

/// Energy efficiency after replacing user k's cross-gain column.  O(K) using
/// cached row sums of the squared cross-gain matrix.
double ee_with_column(const arma::mat& cross, const arma::vec& row_sums,
                      int k, const arma::vec& new_col_sq,
                      double transmit_power, int n_tx,
                      const SystemConfig& config) {
    const int k_users = static_cast<int>(cross.n_rows);
    double sum_rate = 0.0;
    for (int i = 0; i < k_users; ++i) {
        const double row_sum = row_sums(i) - cross(i, k) + new_col_sq(i);
        const double signal = (i == k) ? new_col_sq(k) : cross(i, i);
        const double denom = row_sum - signal + config.noise_power;
        sum_rate += config.bandwidth * std::log2(1.0 + signal / denom);
    }
    return sum_rate / digital_power(transmit_power, n_tx, config);
}

struct LinePoint {
    double beta = 0.0;
    double ee = -1.0;
};

} // namespace

DigitalPrecoder optimize_digital(const arma::cx_mat& h_rows,
                                 const SystemConfig& config,
                                 const DigitalOptOptions& options) {
    config.validate();
    if (static_cast<int>(h_rows.n_rows) != config.n_users ||
        static_cast<int>(h_rows.n_cols) != config.n_tx)
        throw std::invalid_argument("optimize_digital: channel shape mismatch");
    if (!(options.tol > 0.0) || options.max_iter < 1 ||
        !(options.damping > 0.0) || options.damping > 1.0)
        throw std::invalid_argument("optimize_digital: bad options");

    const int k_users = config.n_users;
    const int n_tx = config.n_tx;

    // Start from the supplied precoder, or the matched filter at equal
    // power split.
    arma::cx_mat f(n_tx, k_users, arma::fill::zeros);
    if (options.init) {
        if (static_cast<int>(options.init->n_rows) != n_tx ||
            static_cast<int>(options.init->n_cols) != k_users)
            throw std::invalid_argument("optimize_digital: init shape mismatch");
        f = *options.init;
        const double init_sq = std::pow(arma::norm(f, "fro"), 2);
        if (!(init_sq > 0.0))
            throw std::invalid_argument("optimize_digital: init must be nonzero");
        if (init_sq > config.p_max)
            f *= std::sqrt(config.p_max / init_sq);
    } else {
        bool any_nonzero = false;
        for (int k = 0; k < k_users; ++k) {
            const double nk = arma::norm(h_rows.row(k), 2);
            if (nk > 0.0) {
                f.col(k) = std::sqrt(config.p_max / k_users) *
                           (h_rows.row(k).t() / nk);
                any_nonzero = true;
            }
        }
        if (!any_nonzero)
            throw std::invalid_argument(
                "optimize_digital: all channels are zero");
    }

    arma::cx_mat c = h_rows * f;
    arma::mat cross = arma::square(arma::abs(c));
    double fro_sq = std::pow(arma::norm(f, "fro"), 2);
    double ee_cur = ee_with_column(cross, arma::sum(cross, 1), 0,
                                   arma::square(arma::abs(c.col(0))), fro_sq,
                                   n_tx, config);

    const arma::cx_mat h_gram = h_rows * h_rows.t(); // h_gram(i,j)=h_i h_j^H

    DigitalPrecoder out;
    out.ee_per_iteration.push_back(ee_cur);

    const auto max_column_norm = [&](const arma::cx_mat& grad) {
        double g = 0.0;
        for (arma::uword k = 0; k < grad.n_cols; ++k)
            g = std::max(g, arma::norm(grad.col(k), 2));
        return g;
    };
    double grad_norm = max_column_norm(ee_gradient(h_rows, f, config));

    int iter = 0;
    bool converged = grad_norm < options.tol;

    while (!converged && iter < options.max_iter) {
        ++iter;
        bool any_accept = false;

        for (int k = 0; k < k_users; ++k) {
            if (arma::norm(h_rows.row(k), 2) == 0.0)
                continue;

            const RateTerms t = rate_terms(cross, config);
            const double power = digital_power(fro_sq, n_tx, config);
            const double kappa_half =
                power * config.bandwidth / (2.0 * kLn2);
            const double c0 = std::max(
                t.sum_rate / (2.0 * config.pa_efficiency), 1e-300);

            // Direction d = J_k^{-1} h_k^H by the Woodbury identity:
            // J_k = c0 I + sum_{i != k} v_i h_i^H h_i is identity plus a
            // rank-(K-1) update, so only a (K-1) x (K-1) system is solved.
            std::vector<int> active;
            for (int i = 0; i < k_users; ++i) {
                if (i == k)
                    continue;
                const double vi = kappa_half * t.signal(i) /
                                  (t.denom(i) * t.total(i));
                if (vi > 0.0)
                    active.push_back(i);
            }
            arma::cx_vec d;
            if (active.empty()) {
                d = h_rows.row(k).t() / c0;
            } else {
                const int m = static_cast<int>(active.size());
                arma::cx_mat small(m, m);
                arma::cx_vec rhs(m);
                for (int a = 0; a < m; ++a) {
                    const int i = active[a];
                    const double vi = kappa_half * t.signal(i) /
                                      (t.denom(i) * t.total(i));
                    for (int b = 0; b < m; ++b)
                        small(a, b) = h_gram(i, active[b]);
                    small(a, a) += c0 / vi;
                    rhs(a) = h_gram(i, k);
                }
                // The system is Hermitian positive definite, but the ridge
                // terms c0 / v_i span many orders of magnitude once a user's
                // signal power collapses; Jacobi equilibration keeps it well
                // scaled in that regime.
                arma::vec s(m);
                for (int a = 0; a < m; ++a)
                    s(a) = 1.0 / std::sqrt(std::real(small(a, a)));
                for (int a = 0; a < m; ++a) {
                    for (int b = 0; b < m; ++b)
                        small(a, b) *= s(a) * s(b);
                    rhs(a) *= s(a);
                }
                arma::cx_vec u;
                if (arma::solve(u, small, rhs, arma::solve_opts::no_approx)) {
                    u %= arma::conv_to<arma::cx_vec>::from(s);
                    arma::cx_vec correction(n_tx, arma::fill::zeros);
                    for (int a = 0; a < m; ++a)
                        correction += u(a) * h_rows.row(active[a]).t();
                    d = (h_rows.row(k).t() - correction) / c0;
                } else {
                    d = h_rows.row(k).t() / c0;
                }
            }

            const double d_norm_sq = std::pow(arma::norm(d, 2), 2);
            if (!(d_norm_sq > 0.0))
                continue;
            const arma::cx_vec hd = h_rows * d;
            const arma::cx_vec f_col = f.col(k);
            const arma::cx_vec c_col = c.col(k);
            const double f_col_sq = std::pow(arma::norm(f_col, 2), 2);
            const double budget = config.p_max - (fro_sq - f_col_sq);
            const arma::vec row_sums = arma::sum(cross, 1);
            const double cross_dot = std::real(arma::cdot(d, f_col));

            bool accepted = false;
            double eta = options.damping;
            for (int back = 0; back < 6 && !accepted; ++back, eta *= 0.5) {
                const double qa = eta * eta * d_norm_sq;
                const double qb = 2.0 * eta * (1.0 - eta) * cross_dot;
                const double qc =
                    (1.0 - eta) * (1.0 - eta) * f_col_sq;
                // Largest beta with candidate power within the budget.
                const double disc =
                    qb * qb - 4.0 * qa * (qc - budget);
                if (!(disc >= 0.0))
                    continue;
                const double beta_max =
                    (-qb + std::sqrt(disc)) / (2.0 * qa);
                if (!(beta_max > 0.0))
                    continue;

                const auto eval = [&](double beta) {
                    const arma::cx_vec cand_c =
                        eta * beta * hd + (1.0 - eta) * c_col;
                    const double cand_sq =
                        qa * beta * beta + qb * beta + qc;
                    return ee_with_column(
                        cross, row_sums, k,
                        arma::square(arma::abs(cand_c)),
                        fro_sq - f_col_sq + cand_sq, n_tx, config);
                };

                // Coarse grid, then golden-section refinement around the
                // best bracket.
                constexpr int kGrid = 24;
                LinePoint best;
                for (int gi = 0; gi <= kGrid; ++gi) {
                    const double beta = beta_max * gi / kGrid;
                    const double ee = eval(beta);
                    if (ee > best.ee)
                        best = {beta, ee};
                }
                double lo = std::max(0.0, best.beta - beta_max / kGrid);
                double hi = std::min(beta_max, best.beta + beta_max / kGrid);
                const double golden = 0.61803398874989484820458683436564;
                double x1 = hi - golden * (hi - lo);
                double x2 = lo + golden * (hi - lo);
                double e1 = eval(x1);
                double e2 = eval(x2);
                for (int gs = 0; gs < 60; ++gs) {
                    if (e1 < e2) {
                        lo = x1;
                        x1 = x2;
                        e1 = e2;
                        x2 = lo + golden * (hi - lo);
                        e2 = eval(x2);
                    } else {
                        hi = x2;
                        x2 = x1;
                        e2 = e1;
                        x1 = hi - golden * (hi - lo);
                        e1 = eval(x1);
                    }
                    if (hi - lo < 1e-14 * beta_max)
                        break;
                }
                if (e1 > best.ee)
                    best = {x1, e1};
                if (e2 > best.ee)
                    best = {x2, e2};

                // Accept measurable improvements, and also moves that hold
                // EE within measurement noise: near the optimum the per-step
                // gains drop below double precision while the iterate is
                // still contracting toward the stationary point, and those
                // "flat" moves are what drive the gradient below tolerance.
                const double noise = 4e-15 * (1.0 + std::abs(ee_cur));
                if (best.ee > ee_cur - noise) {
                    const arma::cx_vec new_col =
                        eta * best.beta * d + (1.0 - eta) * f_col;
                    const bool material =
                        arma::norm(new_col - f_col, 2) >
                        1e-14 * (1.0 + arma::norm(f_col, 2));
                    if (best.ee > ee_cur + noise || material) {
                        f.col(k) = new_col;
                        c.col(k) = eta * best.beta * hd + (1.0 - eta) * c_col;
                        cross.col(k) = arma::square(arma::abs(c.col(k)));
                        fro_sq = fro_sq - f_col_sq +
                                 std::pow(arma::norm(new_col, 2), 2);
                        ee_cur = best.ee;
                        accepted = true;
                        any_accept = true;
                    }
                }
            }
        }

        out.ee_per_iteration.push_back(ee_cur);

        grad_norm = max_column_norm(ee_gradient(h_rows, f, config));
        if (grad_norm < options.tol) {
            converged = true;
            break;
        }
        if (!any_accept)
            break; // stalled: no column admits further improvement
    }

    out.matrix = std::move(f);
    out.converged = converged;
    out.iterations = iter;
    out.final_gradient_norm = grad_norm;
    return out;
}

DigitalPrecoder optimize_digital(const ChannelSet& channels,
                                 const SystemConfig& config,
                                 const DigitalOptOptions& options) {
    return optimize_digital(effective_channels(channels), config, options);
}

} // namespace hprec
