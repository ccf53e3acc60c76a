// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "hprec/channel.hpp"
#include "hprec/metrics.hpp"
#include "hprec/pcs_altmin.hpp"
#include "hprec/rng.hpp"

using namespace hprec;

namespace {

/// Independent SINR-rate oracle, written directly from the definition.
std::vector<double> rate_oracle(const arma::cx_mat& h_rows,
                                const arma::cx_mat& f, double bandwidth,
                                double noise) {
    std::vector<double> rates;
    for (arma::uword k = 0; k < h_rows.n_rows; ++k) {
        double signal = 0.0, interference = 0.0;
        for (arma::uword j = 0; j < f.n_cols; ++j) {
            arma::cx_double dot{0.0, 0.0};
            for (arma::uword t = 0; t < f.n_rows; ++t)
                dot += h_rows(k, t) * f(t, j);
            if (j == k)
                signal = std::norm(dot);
            else
                interference += std::norm(dot);
        }
        rates.push_back(bandwidth *
                        std::log2(1.0 + signal / (interference + noise)));
    }
    return rates;
}

HybridPrecoder make_ccs_precoder(int n_tx, int n_rf, int k_users,
                                 std::uint64_t seed) {
    Rng rng(seed);
    HybridPrecoder hp;
    hp.structure = PrecoderStructure::ccs;
    hp.analog.set_size(n_tx, n_rf);
    const double mod = 1.0 / std::sqrt(static_cast<double>(n_tx));
    for (auto& v : hp.analog)
        v = std::polar(mod, rng.uniform(-arma::datum::pi, arma::datum::pi));
    hp.digital.set_size(n_rf, k_users);
    for (auto& v : hp.digital) v = rng.cx_normal();
    return hp;
}

HybridPrecoder make_pcs_precoder(int n_tx, int n_rf, int k_users,
                                 std::uint64_t seed) {
    Rng rng(seed);
    HybridPrecoder hp;
    hp.structure = PrecoderStructure::pcs;
    hp.analog.zeros(n_tx, n_rf);
    const BlockMask mask = block_mask(n_tx, n_rf);
    const double mod = 1.0 / std::sqrt(static_cast<double>(n_tx));
    for (int r = 0; r < n_tx; ++r)
        hp.analog(r, mask.block_of_row(r)) =
            std::polar(mod, rng.uniform(-arma::datum::pi, arma::datum::pi));
    hp.digital.set_size(n_rf, k_users);
    for (auto& v : hp.digital) v = rng.cx_normal();
    return hp;
}

} // namespace

TEST_CASE("unit-SNR single user achieves one bit") {
    SystemConfig config;
    config.n_tx = 2;
    config.n_users = 1;
    config.n_streams = 1;
    config.noise_power = 1.0;
    config.bandwidth = 1.0;
    arma::cx_mat h(1, 2, arma::fill::zeros);
    h(0, 0) = 1.0;
    arma::cx_mat f(2, 1, arma::fill::zeros);
    f(0, 0) = 1.0;
    const auto rates = per_user_rates(h, f, config);
    REQUIRE(rates.size() == 1);
    REQUIRE(rates[0] == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("zero precoder yields zero rates") {
    SystemConfig config;
    config.n_tx = 4;
    config.n_users = 3;
    config.n_streams = 3;
    arma::cx_mat h(3, 4, arma::fill::ones);
    arma::cx_mat f(4, 3, arma::fill::zeros);
    for (double r : per_user_rates(h, f, config)) REQUIRE(r == 0.0);
}

TEST_CASE("orthogonal users see single-user rates") {
    SystemConfig config;
    config.n_tx = 2;
    config.n_users = 2;
    config.n_streams = 2;
    config.noise_power = 0.25;
    config.bandwidth = 2.0;
    // h_1 orthogonal to f_2 and h_2 orthogonal to f_1 by construction.
    arma::cx_mat h(2, 2, arma::fill::zeros);
    h(0, 0) = arma::cx_double(1.0, 1.0);
    h(1, 1) = arma::cx_double(0.0, 2.0);
    arma::cx_mat f(2, 2, arma::fill::zeros);
    f(0, 0) = arma::cx_double(0.5, -0.5);
    f(1, 1) = arma::cx_double(1.5, 0.0);

    const auto rates = per_user_rates(h, f, config);
    const auto expected = rate_oracle(h, f, config.bandwidth,
                                      config.noise_power);
    for (int k = 0; k < 2; ++k)
        REQUIRE(rates[k] == Catch::Approx(expected[k]).epsilon(1e-12));

    // Cross-check against the explicit single-user formula.
    const double snr0 = std::norm(h(0, 0) * f(0, 0)) / config.noise_power;
    REQUIRE(rates[0] ==
            Catch::Approx(2.0 * std::log2(1.0 + snr0)).epsilon(1e-12));
}

TEST_CASE("rates agree with the oracle on random instances") {
    Rng rng(31);
    for (int inst = 0; inst < 20; ++inst) {
        SystemConfig config;
        config.n_tx = 5;
        config.n_users = 3;
        config.n_streams = 3;
        config.noise_power = 0.1;
        config.bandwidth = 1.7;
        arma::cx_mat h(3, 5), f(5, 3);
        for (auto& v : h) v = rng.cx_normal();
        for (auto& v : f) v = rng.cx_normal();
        const auto rates = per_user_rates(h, f, config);
        const auto expected =
            rate_oracle(h, f, config.bandwidth, config.noise_power);
        for (int k = 0; k < 3; ++k)
            REQUIRE(rates[k] == Catch::Approx(expected[k]).epsilon(1e-12));
    }
}

TEST_CASE("rates are invariant under a global phase rotation") {
    SystemConfig config;
    config.n_tx = 4;
    config.n_users = 2;
    config.n_streams = 2;
    Rng rng(17);
    arma::cx_mat h(2, 4), f(4, 2);
    for (auto& v : h) v = rng.cx_normal();
    for (auto& v : f) v = rng.cx_normal();
    const auto base = per_user_rates(h, f, config);
    const arma::cx_mat rotated = std::polar(1.0, 1.234) * f;
    const auto rot = per_user_rates(h, rotated, config);
    for (int k = 0; k < 2; ++k)
        REQUIRE(rot[k] == Catch::Approx(base[k]).epsilon(1e-12));
}

TEST_CASE("hybrid power follows the four-term model") {
    // With unity amplifier efficiency, unit transmit power, two chains at
    // 0.1 W each, free phase shifters and 0.2 W static draw: 1 + 0.2 + 0.2.
    SystemConfig config;
    config.n_tx = 2;
    config.n_rf = 2;
    config.n_users = 1;
    config.n_streams = 1;
    config.pa_efficiency = 1.0;
    config.p_rf_chain = 0.1;
    config.p_phase_shifter = 0.0;
    config.p_static = 0.2;
    config.p_max = 2.0;

    HybridPrecoder hp;
    hp.structure = PrecoderStructure::ccs;
    const double mod = 1.0 / std::sqrt(2.0);
    hp.analog = arma::cx_mat(2, 2, arma::fill::value(arma::cx_double(mod, 0)));
    hp.digital.zeros(2, 1);
    hp.digital(0, 0) = 1.0; // product has squared norm exactly 1
    REQUIRE(std::pow(arma::norm(hp.product(), "fro"), 2) ==
            Catch::Approx(1.0).margin(1e-14));
    REQUIRE(total_power(hp, config) == Catch::Approx(1.4).margin(1e-12));
}

TEST_CASE("shifter count difference between structures") {
    // Same product power, n_tx=16, n_rf=4: completely connected uses 64
    // shifters, partially connected 16, so the gap is 48 * p_ps = 0.48 W.
    SystemConfig config;
    config.n_tx = 16;
    config.n_rf = 4;
    config.n_users = 2;
    config.n_streams = 2;
    config.p_phase_shifter = 0.01;
    config.p_max = 10.0;

    HybridPrecoder ccs = make_ccs_precoder(16, 4, 2, 4001);
    HybridPrecoder pcs = make_pcs_precoder(16, 4, 2, 4002);
    // Normalize both products to unit squared norm.
    ccs.digital /= arma::norm(ccs.product(), "fro");
    pcs.digital /= arma::norm(pcs.product(), "fro");

    const double gap = total_power(ccs, config) - total_power(pcs, config);
    REQUIRE(gap == Catch::Approx(0.48).margin(1e-10));
}

TEST_CASE("zero transmit power leaves only circuit power") {
    SystemConfig config;
    config.n_tx = 8;
    config.n_rf = 2;
    config.n_users = 1;
    config.n_streams = 1;
    HybridPrecoder pcs = make_pcs_precoder(8, 2, 1, 5);
    pcs.digital.zeros();
    const double expected = 2 * config.p_rf_chain +
                            8 * config.p_phase_shifter + config.p_static;
    REQUIRE(total_power(pcs, config) ==
            Catch::Approx(expected).margin(1e-14));
}

TEST_CASE("digital baseline power uses one chain per antenna") {
    SystemConfig config;
    config.n_tx = 4;
    config.n_users = 2;
    config.n_streams = 2;
    config.pa_efficiency = 0.5;
    DigitalPrecoder dp;
    dp.matrix.zeros(4, 2);
    dp.matrix(0, 0) = 1.0;
    dp.matrix(1, 1) = arma::cx_double(0.0, 1.0); // squared norm 2
    const double expected =
        2.0 / 0.5 + 4 * config.p_rf_chain + config.p_static;
    REQUIRE(total_power(dp, config) ==
            Catch::Approx(expected).margin(1e-12));
}

TEST_CASE("power grows with each cost knob") {
    SystemConfig config;
    config.n_tx = 8;
    config.n_rf = 2;
    config.n_users = 2;
    config.n_streams = 2;
    config.p_max = 50.0;
    HybridPrecoder hp = make_ccs_precoder(8, 2, 2, 6);
    const double base = total_power(hp, config);

    HybridPrecoder louder = hp;
    louder.digital *= 2.0;
    REQUIRE(total_power(louder, config) > base);

    SystemConfig more_ps = config;
    more_ps.p_phase_shifter += 0.01;
    REQUIRE(total_power(hp, more_ps) > base);

    SystemConfig more_static = config;
    more_static.p_static += 0.5;
    REQUIRE(total_power(hp, more_static) > base);

    SystemConfig more_chains = config;
    more_chains.n_rf = 4; // power model charges per configured chain
    HybridPrecoder wider = make_ccs_precoder(8, 4, 2, 6);
    wider.digital *= arma::norm(hp.product(), "fro") /
                     arma::norm(wider.product(), "fro");
    REQUIRE(total_power(wider, more_chains) > base);
}

TEST_CASE("energy efficiency is the rate-power quotient") {
    SystemConfig config;
    config.n_tx = 8;
    config.n_rf = 4;
    config.n_users = 2;
    config.n_streams = 2;
    config.p_max = 4.0;
    const ChannelSet channels = draw_channel(config, MultipathSpec{}, 33);
    HybridPrecoder hp = make_ccs_precoder(8, 4, 2, 7);
    hp.digital *= 0.4;

    const EEReport report = energy_efficiency(channels, hp, config);
    double rate_sum = 0.0;
    for (double r : report.per_user_rate) rate_sum += r;
    REQUIRE(report.sum_rate == Catch::Approx(rate_sum).margin(1e-12));
    REQUIRE(report.ee == report.sum_rate / report.total_power);
    REQUIRE(report.total_power ==
            Catch::Approx(total_power(hp, config)).margin(1e-12));

    SystemConfig pricier = config;
    pricier.p_static *= 2.0;
    REQUIRE(energy_efficiency(channels, hp, pricier).ee < report.ee);
}

TEST_CASE("rate floors flag violating users") {
    SystemConfig config;
    config.n_tx = 8;
    config.n_rf = 4;
    config.n_users = 2;
    config.n_streams = 2;
    const ChannelSet channels = draw_channel(config, MultipathSpec{}, 44);
    HybridPrecoder hp = make_ccs_precoder(8, 4, 2, 8);
    hp.digital *= 0.3;
    const EEReport free_run = energy_efficiency(channels, hp, config);
    REQUIRE(free_run.qos_violations.empty());

    SystemConfig floored = config;
    floored.rate_floor = {free_run.per_user_rate[0] + 1.0,
                          free_run.per_user_rate[1] - 1e-9};
    const EEReport checked = energy_efficiency(channels, hp, floored);
    REQUIRE(checked.qos_violations == std::vector<int>{0});
}

TEST_CASE("power-saving ratio arithmetic") {
    REQUIRE(power_saving_ratio(5.0, 10.0) == Catch::Approx(0.5));
    REQUIRE(power_saving_ratio(7.25, 7.25) == 0.0);
    REQUIRE(power_saving_ratio(12.0, 10.0) < 0.0);
    REQUIRE(power_saving_ratio(4.0, 10.0) >
            power_saving_ratio(5.0, 10.0));
    REQUIRE_THROWS_AS(power_saving_ratio(1.0, 0.0), std::invalid_argument);
    REQUIRE_THROWS_AS(power_saving_ratio(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("identical product costs less under the subarray structure") {
    SystemConfig config;
    config.n_tx = 16;
    config.n_rf = 4;
    config.n_users = 2;
    config.n_streams = 2;
    config.p_max = 100.0;
    HybridPrecoder ccs = make_ccs_precoder(16, 4, 2, 91);
    HybridPrecoder pcs = make_pcs_precoder(16, 4, 2, 92);
    pcs.digital *= arma::norm(ccs.product(), "fro") /
                   arma::norm(pcs.product(), "fro");
    REQUIRE(total_power(pcs, config) < total_power(ccs, config));
}

TEST_CASE("precoder validation enforces structure") {
    SystemConfig config;
    HybridPrecoder hp = make_ccs_precoder(8, 2, 2, 14);
    hp.digital *= 1e-3;
    REQUIRE_NOTHROW(validate_hybrid_precoder(hp, 1.0));

    HybridPrecoder bad_mod = hp;
    bad_mod.analog(0, 0) *= 2.0;
    REQUIRE_THROWS_AS(validate_hybrid_precoder(bad_mod, 1.0),
                      std::invalid_argument);

    HybridPrecoder pcs = make_pcs_precoder(8, 2, 2, 15);
    pcs.digital *= 1e-3;
    REQUIRE_NOTHROW(validate_hybrid_precoder(pcs, 1.0));
    HybridPrecoder off_support = pcs;
    off_support.analog(0, 1) = off_support.analog(0, 0); // row 0 is block 0
    REQUIRE_THROWS_AS(validate_hybrid_precoder(off_support, 1.0),
                      std::invalid_argument);

    HybridPrecoder too_loud = hp;
    too_loud.digital *= 1e6;
    REQUIRE_THROWS_AS(validate_hybrid_precoder(too_loud, 1.0),
                      std::invalid_argument);
}

TEST_CASE("system config validation rejects bad parameters") {
    SystemConfig config;
    REQUIRE_NOTHROW(config.validate());

    SystemConfig bad = config;
    bad.n_users = 0;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = config;
    bad.pa_efficiency = 1.5;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = config;
    bad.p_max = 0.0;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);

    bad = config;
    bad.rate_floor = {1.0, 2.0, 3.0}; // neither scalar nor one per user
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);

    SystemConfig hybrid = config; // defaults: n_tx=64, n_rf=4, divisible
    REQUIRE_NOTHROW(hybrid.validate_hybrid(PrecoderStructure::pcs));
    hybrid.n_rf = 3; // 3 does not divide 64
    REQUIRE_THROWS_AS(hybrid.validate_hybrid(PrecoderStructure::pcs),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(hybrid.validate_hybrid(PrecoderStructure::ccs),
                      std::invalid_argument); // n_streams=4 > n_rf=3
}
