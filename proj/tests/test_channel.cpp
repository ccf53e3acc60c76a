// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hprec/channel.hpp"
#include "hprec/rng.hpp"

using namespace hprec;

namespace {
const double kPi = arma::datum::pi;
}

TEST_CASE("broadside steering vector is constant") {
    const arma::cx_vec a = ula_response(ArrayGeometry::half_wavelength(4), 0.0);
    REQUIRE(a.n_elem == 4);
    for (const auto& v : a) {
        REQUIRE(v.real() == Catch::Approx(0.5).margin(1e-15));
        REQUIRE(v.imag() == Catch::Approx(0.0).margin(1e-15));
    }
}

TEST_CASE("endfire two-element steering vector alternates sign") {
    // Half-wavelength spacing at angle pi/2: phase step of pi per element.
    const arma::cx_vec a =
        ula_response(ArrayGeometry::half_wavelength(2), kPi / 2.0);
    const double s = 1.0 / std::sqrt(2.0);
    REQUIRE(std::abs(a(0) - arma::cx_double(s, 0.0)) < 1e-12);
    REQUIRE(std::abs(a(1) - arma::cx_double(-s, 0.0)) < 1e-12);
}

TEST_CASE("steering vectors have unit norm") {
    Rng rng(3);
    for (int i = 0; i < 1000; ++i) {
        const int n = 1 + static_cast<int>(rng.uniform(0.0, 128.0));
        const double angle = rng.uniform(-kPi / 2.0, kPi / 2.0);
        const arma::cx_vec a =
            ula_response(ArrayGeometry::half_wavelength(n), angle);
        REQUIRE(std::abs(arma::norm(a, 2) - 1.0) < 1e-12);
    }
}

TEST_CASE("steering vector rejects bad geometry") {
    REQUIRE_THROWS_AS(ula_response(ArrayGeometry{0, 1.0, 0.5}, 0.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(ula_response(ArrayGeometry{4, 0.0, 0.5}, 0.0),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(
        ula_response(ArrayGeometry::half_wavelength(4), arma::datum::nan),
        std::invalid_argument);
}

TEST_CASE("single-path channel is a scaled rank-one outer product") {
    const double aoa = 0.3, aod = -0.7;
    const arma::cx_mat g = channel_from_paths(
        {PathParams{arma::cx_double(1.0, 0.0), aoa, aod}}, 4, 2);
    REQUIRE(g.n_rows == 2);
    REQUIRE(g.n_cols == 4);

    const arma::cx_vec ar = ula_response(ArrayGeometry::half_wavelength(2), aoa);
    const arma::cx_vec at = ula_response(ArrayGeometry::half_wavelength(4), aod);
    const arma::cx_mat expected = std::sqrt(8.0) * ar * at.st();
    REQUIRE(arma::norm(g - expected, "fro") < 1e-12);
    REQUIRE(arma::norm(g, "fro") == Catch::Approx(std::sqrt(8.0)).margin(1e-12));
    REQUIRE(arma::rank(g) == 1);
}

TEST_CASE("channel rank is bounded by the path count") {
    SystemConfig config;
    config.n_tx = 8;
    config.n_rx = 4;
    config.n_users = 2;
    MultipathSpec spec;
    spec.n_paths = 2;
    const ChannelSet channels = draw_channel(config, spec, 77);
    for (const auto& g : channels.per_user) {
        REQUIRE(g.n_rows == 4);
        REQUIRE(g.n_cols == 8);
        REQUIRE(arma::rank(g) <= 2);
    }
}

TEST_CASE("channel energy is normalized on average") {
    // Monte-Carlo oracle: with unit-variance gains and unit-norm steering
    // vectors, E||g||_F^2 = n_tx * n_rx.
    SystemConfig config;
    config.n_tx = 16;
    config.n_rx = 1;
    config.n_users = 1;
    MultipathSpec spec;
    spec.n_paths = 3;

    double acc = 0.0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
        const ChannelSet channels =
            draw_channel(config, spec, 1000 + static_cast<std::uint64_t>(i));
        acc += std::pow(arma::norm(channels.per_user[0], "fro"), 2);
    }
    const double mean = acc / draws;
    REQUIRE(mean > 16.0 * 0.95);
    REQUIRE(mean < 16.0 * 1.05);
}

TEST_CASE("same seed regenerates the identical channel set") {
    SystemConfig config;
    config.n_tx = 12;
    config.n_rx = 2;
    config.n_users = 3;
    MultipathSpec spec;
    const ChannelSet a = draw_channel(config, spec, 5150);
    const ChannelSet b = draw_channel(config, spec, 5150);
    REQUIRE(a.per_user.size() == b.per_user.size());
    for (std::size_t k = 0; k < a.per_user.size(); ++k) {
        REQUIRE(arma::norm(a.per_user[k] - b.per_user[k], "fro") == 0.0);
    }
    const ChannelSet c = draw_channel(config, spec, 5151);
    REQUIRE(arma::norm(a.per_user[0] - c.per_user[0], "fro") > 0.0);
}

TEST_CASE("channel draw validates its inputs") {
    SystemConfig config;
    MultipathSpec spec;
    spec.n_paths = 0;
    REQUIRE_THROWS_AS(draw_channel(config, spec, 1), std::invalid_argument);
    REQUIRE_THROWS_AS(channel_from_paths({}, 4, 1), std::invalid_argument);
}

TEST_CASE("effective channels stack rows for single-antenna users") {
    SystemConfig config;
    config.n_tx = 6;
    config.n_rx = 1;
    config.n_users = 2;
    const ChannelSet channels = draw_channel(config, MultipathSpec{}, 9);
    const arma::cx_mat h = effective_channels(channels);
    REQUIRE(h.n_rows == 2);
    REQUIRE(h.n_cols == 6);
    for (int k = 0; k < 2; ++k)
        REQUIRE(arma::norm(h.row(k) - channels.per_user[k].row(0), "fro") ==
                0.0);
}

TEST_CASE("effective channels collapse multi-antenna users to one row") {
    SystemConfig config;
    config.n_tx = 8;
    config.n_rx = 3;
    config.n_users = 2;
    const ChannelSet channels = draw_channel(config, MultipathSpec{}, 21);
    const arma::cx_mat h = effective_channels(channels);
    REQUIRE(h.n_rows == 2);
    REQUIRE(h.n_cols == 8);
    // The dominant-combiner row preserves the channel's top singular value.
    for (int k = 0; k < 2; ++k) {
        const arma::vec sv = arma::svd(channels.per_user[k]);
        REQUIRE(arma::norm(h.row(k), 2) ==
                Catch::Approx(sv(0)).epsilon(1e-10));
    }
}
