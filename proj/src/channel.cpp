// SPDX-License-Identifier: Apache-2.0
#include "hprec/channel.hpp"

#include <cmath>
#include <stdexcept>

#include "hprec/rng.hpp"

namespace hprec {

arma::cx_vec ula_response(const ArrayGeometry& geometry, double angle) {
    if (geometry.n_elements < 1)
        throw std::invalid_argument("ula_response: n_elements must be >= 1");
    if (!(geometry.wavelength > 0.0))
        throw std::invalid_argument("ula_response: wavelength must be > 0");
    if (!std::isfinite(angle))
        throw std::invalid_argument("ula_response: angle must be finite");

    const int n = geometry.n_elements;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    const double phase_step =
        2.0 * arma::datum::pi / geometry.wavelength * geometry.spacing *
        std::sin(angle);

    arma::cx_vec a(n);
    for (int i = 0; i < n; ++i)
        a(i) = scale * std::polar(1.0, phase_step * static_cast<double>(i));
    return a;
}

arma::cx_mat channel_from_paths(const std::vector<PathParams>& paths,
                                int n_tx, int n_rx) {
    if (paths.empty())
        throw std::invalid_argument("channel_from_paths: need >= 1 path");
    if (n_tx < 1 || n_rx < 1)
        throw std::invalid_argument("channel_from_paths: bad array sizes");

    const ArrayGeometry tx = ArrayGeometry::half_wavelength(n_tx);
    const ArrayGeometry rx = ArrayGeometry::half_wavelength(n_rx);
    const double norm = std::sqrt(static_cast<double>(n_tx) *
                                  static_cast<double>(n_rx) /
                                  static_cast<double>(paths.size()));

    arma::cx_mat g(n_rx, n_tx, arma::fill::zeros);
    for (const PathParams& p : paths) {
        const arma::cx_vec a_rx = ula_response(rx, p.aoa);
        const arma::cx_vec a_tx = ula_response(tx, p.aod);
        // Plain transpose (not conjugate) on the departure response.
        g += p.gain * (a_rx * a_tx.st());
    }
    return norm * g;
}

ChannelSet draw_channel(const SystemConfig& config, const MultipathSpec& spec,
                        std::uint64_t seed) {
    config.validate();
    if (spec.n_paths < 1)
        throw std::invalid_argument("draw_channel: n_paths must be >= 1");
    if (!(spec.angle_min <= spec.angle_max))
        throw std::invalid_argument("draw_channel: empty angle range");

    ChannelSet set;
    set.seed = seed;
    set.per_user.reserve(config.n_users);
    set.params.reserve(config.n_users);

    for (int k = 0; k < config.n_users; ++k) {
        std::vector<PathParams> paths(spec.n_paths);
        for (int l = 0; l < spec.n_paths; ++l) {
            // One substream per (user, path): draws are order-independent.
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k),
                                static_cast<std::uint64_t>(l)));
            paths[l].gain = rng.cx_normal();
            paths[l].aoa = rng.uniform(spec.angle_min, spec.angle_max);
            paths[l].aod = rng.uniform(spec.angle_min, spec.angle_max);
        }
        set.per_user.push_back(
            channel_from_paths(paths, config.n_tx, config.n_rx));
        set.params.push_back(std::move(paths));
    }
    return set;
}

arma::cx_mat effective_channels(const ChannelSet& channels) {
    if (channels.per_user.empty())
        throw std::invalid_argument("effective_channels: empty channel set");

    const int k_users = static_cast<int>(channels.per_user.size());
    const int n_tx = static_cast<int>(channels.per_user.front().n_cols);
    arma::cx_mat rows(k_users, n_tx);

    for (int k = 0; k < k_users; ++k) {
        const arma::cx_mat& g = channels.per_user[k];
        if (static_cast<int>(g.n_cols) != n_tx)
            throw std::invalid_argument(
                "effective_channels: inconsistent antenna counts");
        if (g.n_rows == 1) {
            rows.row(k) = g.row(0);
        } else {
            // Fixed analog combiner: dominant left singular vector.
            arma::cx_mat u, v;
            arma::vec s;
            if (!arma::svd_econ(u, s, v, g))
                throw std::runtime_error("effective_channels: svd failed");
            rows.row(k) = u.col(0).t() * g;
        }
    }
    return rows;
}

} // namespace hprec
