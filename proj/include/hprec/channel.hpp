// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <armadillo>
#include <cstdint>
#include <vector>

#include "hprec/types.hpp"

namespace hprec {

/// Uniform linear array described by element count, carrier wavelength and
/// element spacing (defaults to half-wavelength spacing).
struct ArrayGeometry {
    int n_elements = 1;
    double wavelength = 1.0;
    double spacing = 0.5;

    static ArrayGeometry half_wavelength(int n) {
        return ArrayGeometry{n, 1.0, 0.5};
    }
};

/// One planar-wave propagation path: complex gain plus angle of arrival and
/// angle of departure (radians, measured from array broadside).
struct PathParams {
    arma::cx_double gain;
    double aoa = 0.0;
    double aod = 0.0;
};

/// Multipath specification for drawing random channels: path count per user
/// and the angular support of the uniform angle distribution.
struct MultipathSpec {
    int n_paths = 3;
    double angle_min = -1.5707963267948966; ///< -pi/2
    double angle_max = 1.5707963267948966;  ///< +pi/2
};

/// Per-user channel matrices together with the parameters that generated
/// them.  Regenerating from the same seed reproduces the matrices bit for
/// bit.
struct ChannelSet {
    std::vector<arma::cx_mat> per_user;            ///< K matrices, n_rx x n_tx
    std::vector<std::vector<PathParams>> params;   ///< realized paths per user
    std::uint64_t seed = 0;
};

/// Array response of a uniform linear array at the given angle:
/// a[n] = (1/sqrt(N)) * exp(+j * (2*pi/wavelength) * spacing * n * sin(angle)),
/// n = 0..N-1.  Unit Euclidean norm by construction.
arma::cx_vec ula_response(const ArrayGeometry& geometry, double angle);

/// Builds one user's channel from explicit path parameters:
/// g = sqrt(n_tx*n_rx/L) * sum_l gain_l * a_rx(aoa_l) * a_tx(aod_l)^T.
/// Note the plain transpose on the departure response.
arma::cx_mat channel_from_paths(const std::vector<PathParams>& paths,
                                int n_tx, int n_rx);

/// Draws a K-user geometric multipath channel.  Gains are CN(0, 1), angles
/// uniform over the requested angular support; each (user, path) tuple has
/// its own substream derived from the seed, so results do not depend on
/// evaluation order.  E||g_k||_F^2 = n_tx * n_rx.
ChannelSet draw_channel(const SystemConfig& config, const MultipathSpec& spec,
                        std::uint64_t seed);

/// Effective row channels (K x n_tx).  With n_rx = 1 this is just the
/// stacked channel rows; with n_rx > 1 each user is collapsed through the
/// dominant left singular vector of its channel matrix, acting as a fixed
/// analog combiner.
arma::cx_mat effective_channels(const ChannelSet& channels);

} // namespace hprec
