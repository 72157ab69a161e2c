// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wavemap/optimize.hpp"

using namespace wavemap;

namespace {

// half squared norm toy objective
ObjParts half_sq(std::span<const double> u) {
    double s = 0.0;
    for (double x : u) s += x * x;
    return {0.5 * s, 0.5 * s, std::sqrt(s)};
}

std::vector<double> half_sq_grad(std::span<const double> u) {
    return std::vector<double>(u.begin(), u.end());
}

}  // namespace

TEST_CASE("gd accepts the first trial on the hand-worked example") {
    GdConfig cfg;
    cfg.alpha = 0.5;
    cfg.max_iters = 1;
    auto res = gd_backtracking(half_sq, half_sq_grad, {1.0}, cfg);
    REQUIRE(res.trace.size() >= 2);
    // u1 = 0.5 e1 accepted at N = 0 since 0.125 < 0.5 - 0.25
    CHECK(res.u[0] == doctest::Approx(0.5));
    CHECK(res.trace[1].backtracks == 0);
    CHECK(res.trace[1].objective == doctest::Approx(0.125));
}

TEST_CASE("gd flags exhaustion on the alpha = 1 boundary case") {
    GdConfig cfg;
    cfg.alpha = 1.0;
    cfg.max_iters = 10;
    auto res = gd_backtracking(half_sq, half_sq_grad, {1.0}, cfg);
    // required decrease 0.5*||g|| = 0.5 equals the whole objective; no trial
    // can satisfy the strict inequality, but -g is still a descent direction
    CHECK(res.stop == StopReason::backtracks_exhausted);
    CHECK(res.descent_failure_iter == -1);
    CHECK(res.u[0] == doctest::Approx(1.0));
}

TEST_CASE("gd returns immediately at a stationary point") {
    GdConfig cfg;
    auto res = gd_backtracking(half_sq, half_sq_grad, {0.0, 0.0}, cfg);
    CHECK(res.stop == StopReason::grad_tol);
    CHECK(res.trace.size() == 1);
}

TEST_CASE("gd trace is monotone and replays the printed rule") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> normal;
    std::vector<double> u0(8);
    for (double& v : u0) v = 2.0 * normal(rng);

    GdConfig cfg;
    cfg.alpha = 0.25;
    cfg.max_iters = 200;
    auto res = gd_backtracking(half_sq, half_sq_grad, u0, cfg);
    CHECK(res.trace.size() > 3);
    for (std::size_t k = 1; k < res.trace.size(); ++k)
        CHECK(res.trace[k].objective < res.trace[k - 1].objective);
    CHECK(gd_trace_satisfies_rule(res, cfg.alpha));
}

TEST_CASE("gd detects a non-descent direction") {
    // feed the *negated* gradient so -g points uphill
    auto bad_grad = [](std::span<const double> u) {
        auto g = half_sq_grad(u);
        for (double& v : g) v = -v;
        return g;
    };
    GdConfig cfg;
    cfg.alpha = 0.5;
    cfg.max_iters = 10;
    auto res = gd_backtracking(half_sq, bad_grad, {1.0}, cfg);
    CHECK(res.stop == StopReason::descent_failure);
    CHECK(res.descent_failure_iter == 0);
}

TEST_CASE("soft threshold closed form") {
    CHECK(soft_threshold(3.0, 1.0) == doctest::Approx(2.0));
    CHECK(soft_threshold(-3.0, 1.0) == doctest::Approx(-2.0));
    CHECK(soft_threshold(0.5, 1.0) == 0.0);
    CHECK(soft_threshold(-0.5, 1.0) == 0.0);
    CHECK(soft_threshold(1.0, 1.0) == 0.0);
}

TEST_CASE("fista solves the scalar prox problem") {
    // min 1/2 (w - 3)^2 + |w|  ->  w* = 2
    SmoothFn smooth = [](std::span<const double> u, std::vector<double>* g) {
        if (g) *g = {u[0] - 3.0};
        return 0.5 * (u[0] - 3.0) * (u[0] - 3.0);
    };
    std::vector<double> w{1.0};
    FistaConfig cfg;
    cfg.max_iters = 200;
    auto res = fista(smooth, w, {0.0}, cfg);
    CHECK(res.u[0] == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("fista with zero weights matches the exact quadratic minimizer") {
    // min 1/2 x^T A x - b^T x with diagonal A
    const std::vector<double> diag{1.0, 4.0, 0.5};
    const std::vector<double> b{1.0, -2.0, 0.75};
    SmoothFn smooth = [&](std::span<const double> u, std::vector<double>* g) {
        double f = 0.0;
        if (g) g->resize(3);
        for (int i = 0; i < 3; ++i) {
            f += 0.5 * diag[i] * u[i] * u[i] - b[i] * u[i];
            if (g) (*g)[i] = diag[i] * u[i] - b[i];
        }
        return f;
    };
    std::vector<double> w{0.0, 0.0, 0.0};
    FistaConfig cfg;
    cfg.max_iters = 400;
    auto res = fista(smooth, w, {0.0, 0.0, 0.0}, cfg);
    for (int i = 0; i < 3; ++i)
        CHECK(res.u[i] == doctest::Approx(b[i] / diag[i]).epsilon(1e-8));
}

TEST_CASE("fista objective never increases and large weights zero the details") {
    // slot 0 carries the data; the rest should threshold to exact zeros
    SmoothFn smooth = [](std::span<const double> u, std::vector<double>* g) {
        if (g) {
            g->assign(u.size(), 0.0);
            (*g)[0] = u[0] - 5.0;
        }
        return 0.5 * (u[0] - 5.0) * (u[0] - 5.0);
    };
    std::vector<double> w(6, 10.0);
    w[0] = 0.0;
    FistaConfig cfg;
    cfg.max_iters = 150;
    auto res = fista(smooth, w, {0.0, 1.0, -2.0, 0.5, 3.0, -0.25}, cfg);
    CHECK(res.u[0] == doctest::Approx(5.0).epsilon(1e-6));
    for (std::size_t i = 1; i < res.u.size(); ++i) CHECK(res.u[i] == 0.0);
    for (std::size_t k = 1; k < res.trace.size(); ++k)
        CHECK(res.trace[k].objective <= res.trace[k - 1].objective + 1e-12);
}

TEST_CASE("growing the penalty scale never reduces the zero count") {
    const std::vector<double> diag{1.0, 1.0, 1.0, 1.0};
    const std::vector<double> b{2.0, 0.8, 0.3, 0.05};
    SmoothFn smooth = [&](std::span<const double> u, std::vector<double>* g) {
        double f = 0.0;
        if (g) g->resize(4);
        for (int i = 0; i < 4; ++i) {
            f += 0.5 * diag[i] * u[i] * u[i] - b[i] * u[i];
            if (g) (*g)[i] = diag[i] * u[i] - b[i];
        }
        return f;
    };
    long prev_zeros = -1;
    for (double scale : {0.1, 0.5, 1.0}) {
        std::vector<double> w(4, scale);
        FistaConfig cfg;
        cfg.max_iters = 300;
        auto res = fista(smooth, w, {0.0, 0.0, 0.0, 0.0}, cfg);
        long zeros = 0;
        for (double v : res.u) zeros += std::abs(v) < 1e-8;
        CHECK(zeros >= prev_zeros);
        prev_zeros = zeros;
    }
    CHECK(prev_zeros >= 2);  // b entries 0.3 and 0.05 fall below the largest threshold
}

TEST_CASE("lbfgs minimizes a convex quadratic quickly") {
    const std::vector<double> diag{1.0, 10.0, 0.2, 4.0};
    auto obj = [&](std::span<const double> u) {
        double f = 0.0;
        for (int i = 0; i < 4; ++i) f += 0.5 * diag[i] * u[i] * u[i];
        return ObjParts{f, f, 0.0};
    };
    auto grad = [&](std::span<const double> u) {
        std::vector<double> g(4);
        for (int i = 0; i < 4; ++i) g[i] = diag[i] * u[i];
        return g;
    };
    LbfgsConfig cfg;
    cfg.grad_tol = 1e-9;
    auto res = lbfgs(obj, grad, {1.0, -2.0, 3.0, 0.5}, cfg);
    CHECK(res.stop == StopReason::grad_tol);
    CHECK(res.trace.size() < 60);
    for (double v : res.u) CHECK(std::abs(v) < 1e-8);
}
