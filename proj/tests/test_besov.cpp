// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <span>

#include "wavemap/besov.hpp"

using namespace wavemap;

namespace {

std::mt19937_64 test_rng(7041);

WaveletDecomp2D random_decomp(int depth, std::mt19937_64& rng, bool zero_w0 = false) {
    WaveletDecomp2D d(depth);
    std::normal_distribution<double> normal;
    for (double& v : d.coeffs()) v = normal(rng);
    if (zero_w0) d.w0() = 0.0;
    return d;
}

}  // namespace

TEST_CASE("besov_norm_1d examples") {
    WaveletDecomp1D c(3);
    c.w0() = -2.5;
    CHECK(besov_norm_1d(c, 2.0, 1.0) == doctest::Approx(2.5));

    WaveletDecomp1D d(3);
    d.detail(2, 0) = 0.7;
    CHECK(besov_norm_1d(d, 2.0, 1.0) == doctest::Approx(4.0 * 0.7));

    // p = 2, s = 0 collapses to the plain Euclidean norm
    WaveletDecomp1D r(4);
    std::normal_distribution<double> normal;
    for (double& v : r.coeffs()) v = normal(test_rng);
    double euclid = 0.0;
    for (double v : r.coeffs()) euclid += v * v;
    CHECK(besov_norm_1d(r, 2.0, 0.0) == doctest::Approx(std::sqrt(euclid)));

    CHECK_THROWS_AS(besov_norm_1d(r, 0.5, 1.0), std::invalid_argument);
}

TEST_CASE("besov_norm_2d examples") {
    WaveletDecomp2D c(2);
    c.w0() = 3.0;
    CHECK(besov_norm_2d(c, 2.0, 1.5) == doctest::Approx(3.0));

    WaveletDecomp2D d(2);
    d.detail(1, 0, 0, 0) = 1.0;
    CHECK(besov_norm_2d(d, 2.0, 1.5) == doctest::Approx(std::exp2(1.5)));

    // p = 1 level weight is 2^{j(s-1)}
    WaveletDecomp2D e(3);
    e.detail(2, 1, 1, 0) = -0.3;
    CHECK(besov_norm_2d(e, 1.0, 2.0) == doctest::Approx(std::exp2(2.0 * (2.0 - 1.0)) * 0.3));
}

TEST_CASE("besov_norm_general reduces and restricts correctly") {
    for (int t = 0; t < 5; ++t) {
        auto d = random_decomp(4, test_rng);
        CHECK(besov_norm_general(d, 2.0, 2.0, 1.2) ==
              doctest::Approx(besov_norm_2d(d, 2.0, 1.2)).epsilon(1e-12));
        CHECK(besov_norm_general(d, 1.5, 1.5, 0.7) ==
              doctest::Approx(besov_norm_2d(d, 1.5, 0.7)).epsilon(1e-12));
    }

    WaveletDecomp1D c(2);
    c.w0() = 1.25;
    CHECK(besov_norm_general(c, 3.0, 1.0, 0.4) == doctest::Approx(1.25));

    // single level-j block in 1D: q-independent value 2^{j(s+1/2-1/p)} (sum |w|^p)^{1/p}
    WaveletDecomp1D b(4);
    b.detail(3, 1) = 0.4;
    b.detail(3, 6) = -1.1;
    const double p = 1.5, s = 0.8;
    const double block = std::pow(std::pow(0.4, p) + std::pow(1.1, p), 1.0 / p);
    const double expect = std::exp2(3.0 * (s + 0.5 - 1.0 / p)) * block;
    CHECK(besov_norm_general(b, p, 1.0, s) == doctest::Approx(expect));
    CHECK(besov_norm_general(b, p, 2.5, s) == doctest::Approx(expect));
}

TEST_CASE("besov_seq_norm_linear") {
    std::vector<double> one{1.0};
    CHECK(besov_seq_norm_linear(one, 1.7, 2.3, 2) == doctest::Approx(1.0));
    CHECK(besov_seq_norm_linear(one, 3.0, 0.4, 1) == doctest::Approx(1.0));

    std::vector<double> c4{0.0, 0.0, 0.0, 1.0};
    CHECK(besov_seq_norm_linear(c4, 2.0, 1.0, 2) == doctest::Approx(2.0));

    // empirical equivalence constant against the level-weighted 2D norm
    for (int t = 0; t < 100; ++t) {
        auto d = random_decomp(4, test_rng, /*zero_w0=*/true);
        std::span<const double> tail(d.coeffs().data() + 1, d.size() - 1);
        const double a = besov_seq_norm_linear(tail, 2.0, 1.0, 2);
        const double b = besov_norm_2d(d, 2.0, 1.0);
        CHECK(a / b > 1.0 / 8.0);
        CHECK(a / b < 8.0);
    }
}

TEST_CASE("cm_inner_product") {
    WaveletDecomp2D u(3), v(3);
    u.detail(1, 2, 1, 0) = 1.0;
    v.detail(1, 2, 1, 0) = 1.0;
    CHECK(cm_inner_product(u, v, 1.5) == doctest::Approx(std::pow(4.0, 1.5)));

    WaveletDecomp2D w(3);
    w.detail(2, 0, 3, 3) = 1.0;
    CHECK(cm_inner_product(u, w, 1.5) == doctest::Approx(0.0));

    auto a = random_decomp(3, test_rng);
    auto b = random_decomp(3, test_rng);
    CHECK(cm_inner_product(a, b, 0.9) == doctest::Approx(cm_inner_product(b, a, 0.9)));

    // w0 enters with weight one, so <u,u> matches the squared B_2^s norm
    CHECK(cm_inner_product(a, a, 0.9) ==
          doctest::Approx(std::pow(besov_norm_2d(a, 2.0, 0.9), 2)));
    CHECK(cm_inner_product(a, a, 0.9) >= 0.0);

    WaveletDecomp2D zero(3);
    CHECK(cm_inner_product(zero, zero, 1.3) == 0.0);
}

TEST_CASE("cm_gradient") {
    WaveletDecomp2D zero(2);
    auto gz = cm_gradient(zero, 1.0);
    for (double v : gz.coeffs()) CHECK(v == 0.0);

    WaveletDecomp2D u(3);
    u.detail(2, 2, 1, 1) = 1.0;
    auto g = cm_gradient(u, 1.0);
    CHECK(g.detail(2, 2, 1, 1) == doctest::Approx(16.0));

    // finite-difference oracle for the half-squared norm
    auto x = random_decomp(3, test_rng);
    auto h = random_decomp(3, test_rng);
    const double s = 1.1, eps = 1e-6;
    WaveletDecomp2D xp = x, xm = x;
    for (std::size_t l = 0; l < x.size(); ++l) {
        xp.coeffs()[l] += eps * h.coeffs()[l];
        xm.coeffs()[l] -= eps * h.coeffs()[l];
    }
    const double fd =
        (0.5 * cm_inner_product(xp, xp, s) - 0.5 * cm_inner_product(xm, xm, s)) / (2.0 * eps);
    auto gx = cm_gradient(x, s);
    double dot = 0.0;
    for (std::size_t l = 0; l < x.size(); ++l) dot += gx.coeffs()[l] * h.coeffs()[l];
    CHECK(std::abs(fd - dot) < 1e-6 * std::abs(dot));
}

TEST_CASE("norm properties") {
    for (int t = 0; t < 20; ++t) {
        auto u = random_decomp(3, test_rng);
        auto v = random_decomp(3, test_rng);
        std::uniform_real_distribution<double> up(1.0, 3.0);
        const double p = up(test_rng), s = up(test_rng) - 1.5;

        // homogeneity
        WaveletDecomp2D su = u;
        for (double& c : su.coeffs()) c *= -2.25;
        CHECK(besov_norm_2d(su, p, s) == doctest::Approx(2.25 * besov_norm_2d(u, p, s)));

        // triangle inequality
        WaveletDecomp2D uv = u;
        for (std::size_t l = 0; l < u.size(); ++l) uv.coeffs()[l] += v.coeffs()[l];
        CHECK(besov_norm_2d(uv, p, s) <=
              besov_norm_2d(u, p, s) + besov_norm_2d(v, p, s) + 1e-12);

        // truncation never increases a norm
        WaveletDecomp2D tu = u;
        truncate_levels(tu, 2);
        CHECK(besov_norm_2d(tu, p, s) <= besov_norm_2d(u, p, s) + 1e-12);
        CHECK(besov_norm_general(tu, p, 1.0, s) <= besov_norm_general(u, p, 1.0, s) + 1e-12);
    }
}

TEST_CASE("weight vectors match the per-slot formulas") {
    auto cw = cm_weights(3, 1.5);
    CHECK(cw[0] == 1.0);
    CHECK(cw[linear_index_2d(2, 1, 0, 3)] == doctest::Approx(std::pow(4.0, 3.0)));
    auto bw = besov1_weights(3, 0.5);
    CHECK(bw[0] == 1.0);
    CHECK(bw[linear_index_2d(2, 0, 1, 1)] == doctest::Approx(std::exp2(-1.0)));
}
