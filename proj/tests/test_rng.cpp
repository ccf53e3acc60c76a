// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <armadillo>

#include <cmath>
#include <set>

#include "hprec/rng.hpp"

using namespace hprec;

TEST_CASE("same seed reproduces the same stream") {
    Rng a(12345), b(12345);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(a.next_u64() == b.next_u64());
    }
    Rng c(12345), d(12345);
    for (int i = 0; i < 100; ++i) {
        REQUIRE(c.uniform() == d.uniform());
        REQUIRE(c.normal() == d.normal());
        REQUIRE(c.cx_normal() == d.cx_normal());
    }
}

TEST_CASE("different seeds give different streams") {
    Rng a(1), b(2);
    int equal = 0;
    for (int i = 0; i < 64; ++i)
        if (a.next_u64() == b.next_u64()) ++equal;
    REQUIRE(equal == 0);
}

TEST_CASE("uniform stays in its interval") {
    Rng rng(99);
    for (int i = 0; i < 10000; ++i) {
        const double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        const double v = rng.uniform(-2.5, 3.5);
        REQUIRE(v >= -2.5);
        REQUIRE(v < 3.5);
    }
}

TEST_CASE("normal moments match a standard Gaussian") {
    Rng rng(7);
    const int n = 200000;
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = rng.normal();
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / n;
    const double var = sum_sq / n - mean * mean;
    REQUIRE(std::abs(mean) < 0.02);
    REQUIRE(std::abs(var - 1.0) < 0.03);
}

TEST_CASE("complex normal is unit-variance circular") {
    Rng rng(11);
    const int n = 200000;
    double sum_abs_sq = 0.0, sum_re_sq = 0.0, sum_im_sq = 0.0;
    arma::cx_double sum{0.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const arma::cx_double z = rng.cx_normal();
        sum += z;
        sum_abs_sq += std::norm(z);
        sum_re_sq += z.real() * z.real();
        sum_im_sq += z.imag() * z.imag();
    }
    REQUIRE(std::abs(sum / static_cast<double>(n)) < 0.02);
    REQUIRE(std::abs(sum_abs_sq / n - 1.0) < 0.03);
    REQUIRE(std::abs(sum_re_sq / n - 0.5) < 0.02);
    REQUIRE(std::abs(sum_im_sq / n - 0.5) < 0.02);
}

TEST_CASE("derive_seed separates substreams") {
    REQUIRE(derive_seed(1, 2, 3) == derive_seed(1, 2, 3));
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 30; ++a)
        for (std::uint64_t b = 0; b < 30; ++b)
            seen.insert(derive_seed(42, a, b));
    REQUIRE(seen.size() == 900);
    REQUIRE(derive_seed(1, 0, 0) != derive_seed(2, 0, 0));
}
