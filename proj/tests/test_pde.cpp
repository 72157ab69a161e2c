// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "wavemap/pde.hpp"

using namespace wavemap;

namespace {

std::mt19937_64 test_rng(90210);

GridField random_field(int exponent, double scale, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, scale);
    GridField f(exponent);
    for (double& v : f.values()) v = normal(rng);
    return f;
}

// load-vector pairing <p, b_f> = sum_c f_c h^2/4 (corner sum of p)
double pair_with_cell_load(const NodalField& p, const GridField& f) {
    double acc = 0.0;
    const double q = 0.25 * f.cell_width() * f.cell_width();
    for (std::size_t k = 0; k < f.side(); ++k)
        for (std::size_t n = 0; n < f.side(); ++n)
            acc += q * f(k, n) *
                   (p.at(k, n) + p.at(k + 1, n) + p.at(k, n + 1) + p.at(k + 1, n + 1));
    return acc;
}

double max_nodal_error(const NodalField& p, const std::function<double(double, double)>& exact) {
    const double h = 1.0 / std::exp2(p.exponent());
    double m = 0.0;
    for (std::size_t i = 0; i < p.nodes_per_side(); ++i)
        for (std::size_t j = 0; j < p.nodes_per_side(); ++j)
            m = std::max(m, std::abs(p.at(i, j) - exact(i * h, j * h)));
    return m;
}

// discrete field error: bilinear interpolant vs exact solution at cell
// centers (nodal values alone superconverge for separable problems)
double max_center_error(const NodalField& p, const std::function<double(double, double)>& exact) {
    const double h = 1.0 / std::exp2(p.exponent());
    const std::size_t side = std::size_t{1} << p.exponent();
    double m = 0.0;
    for (std::size_t k = 0; k < side; ++k)
        for (std::size_t n = 0; n < side; ++n) {
            const double interp = 0.25 * (p.at(k, n) + p.at(k + 1, n) +
                                          p.at(k, n + 1) + p.at(k + 1, n + 1));
            m = std::max(m, std::abs(interp - exact((k + 0.5) * h, (n + 0.5) * h)));
        }
    return m;
}

}  // namespace

TEST_CASE("zero data gives the zero solution") {
    GridField u(4), f(4);
    EllipticSolver solver(u, BoundarySpec::dirichlet_left());
    auto p = solver.solve_source(f);
    for (double v : p.values()) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("manufactured solution p = x(2-x) converges at second order") {
    auto exact = [](double x, double) { return x * (2.0 - x); };
    double prev = 0.0;
    for (int n = 4; n <= 6; ++n) {
        GridField u(n), f(n, 2.0);
        EllipticSolver solver(u, BoundarySpec::dirichlet_left());
        auto p = solver.solve_source(f);
        CHECK(max_nodal_error(p, exact) < 1e-10);  // nodal superconvergence here
        const double err = max_center_error(p, exact);
        if (n == 4) CHECK(err < 5e-3);
        if (n > 4) {
            const double ratio = prev / err;
            CHECK(ratio > 3.5);
            CHECK(ratio < 4.5);
        }
        prev = err;
    }
}

TEST_CASE("constant log-permeability cancels against a scaled source") {
    const double c = 0.75;
    GridField u(5, c), f(5, 2.0 * std::exp(c));
    EllipticSolver solver(u, BoundarySpec::dirichlet_left());
    auto p = solver.solve_source(f);
    const double err = max_nodal_error(p, [](double x, double) { return x * (2.0 - x); });
    CHECK(err < 2e-3);
}

TEST_CASE("Dirichlet data propagates through elimination") {
    GridField u(4), f(4);
    BoundarySpec bc = BoundarySpec::dirichlet_left();
    bc.left.data = [](double) { return 1.0; };
    EllipticSolver solver(u, bc);
    auto p = solver.solve_source(f);
    for (double v : p.values()) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("Neumann flux data drives the exact linear profile") {
    GridField u(4), f(4);
    BoundarySpec bc = BoundarySpec::dirichlet_left();
    bc.right.data = [](double) { return 1.0; };
    EllipticSolver solver(u, bc);
    auto p = solver.solve_source(f);
    CHECK(max_nodal_error(p, [](double x, double) { return x; }) < 1e-10);
}

TEST_CASE("all-Neumann boundary is rejected") {
    BoundarySpec bc;
    CHECK_THROWS_AS(bc.validate(), std::invalid_argument);
    GridField u(3);
    CHECK_THROWS_AS(EllipticSolver(u, bc), std::invalid_argument);
}

TEST_CASE("adjoint solve basics") {
    GridField u(5);
    EllipticSolver solver(u, BoundarySpec::dirichlet_left());

    std::vector<ObsPoint> pts{{0.31, 0.47}, {0.6, 0.8}};
    std::vector<double> zero{0.0, 0.0};
    auto w = solver.solve_points(pts, zero);
    for (double v : w.values()) CHECK(v == 0.0);

    // linearity in the residual weights
    std::vector<double> w1{1.3, 0.0}, w2{0.0, -0.7};
    auto a = solver.solve_points(pts, w1);
    auto b = solver.solve_points(pts, w2);
    std::vector<double> w3{2.0 * 1.3, 2.0 * -0.7};
    auto c = solver.solve_points(pts, w3);
    for (std::size_t i = 0; i < c.values().size(); ++i)
        CHECK(c.values()[i] ==
              doctest::Approx(2.0 * (a.values()[i] + b.values()[i])).epsilon(1e-10));
}

TEST_CASE("point-source solution is stable under grid refinement") {
    std::vector<ObsPoint> src{{0.31, 0.47}};
    std::vector<double> wt{1.0};
    std::vector<ObsPoint> probes{{0.11, 0.86}, {0.72, 0.14}, {0.85, 0.77}};

    std::vector<double> coarse, fine;
    {
        GridField u(5);
        EllipticSolver solver(u, BoundarySpec::dirichlet_left());
        coarse = observe(solver.solve_points(src, wt).restrict_to_cells(), probes);
    }
    {
        GridField u(6);
        EllipticSolver solver(u, BoundarySpec::dirichlet_left());
        fine = observe(solver.solve_points(src, wt).restrict_to_cells(), probes);
    }
    for (std::size_t i = 0; i < probes.size(); ++i)
        CHECK(std::abs(coarse[i] - fine[i]) < 0.02 * std::abs(fine[i]));
}

TEST_CASE("discrete self-adjointness identity") {
    for (int trial = 0; trial < 5; ++trial) {
        GridField u = random_field(5, 0.8, test_rng);
        GridField f1 = random_field(5, 1.0, test_rng);
        GridField f2 = random_field(5, 1.0, test_rng);
        EllipticSolver solver(u, BoundarySpec::dirichlet_left());
        auto p1 = solver.solve_source(f1);
        auto p2 = solver.solve_source(f2);
        const double lhs = pair_with_cell_load(p1, f2);
        const double rhs = pair_with_cell_load(p2, f1);
        CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(lhs), std::abs(rhs)));
    }
}

TEST_CASE("mixed point/cell loads satisfy the same identity") {
    GridField u = random_field(5, 0.5, test_rng);
    GridField f = random_field(5, 1.0, test_rng);
    std::vector<ObsPoint> pts{{0.23, 0.71}, {0.52, 0.33}, {0.81, 0.65}};
    std::vector<double> wts{0.4, -1.2, 2.0};
    EllipticSolver solver(u, BoundarySpec::dirichlet_left());

    auto p = solver.solve_source(f);
    auto w = solver.solve_points(pts, wts);

    const auto obs = observe(p.restrict_to_cells(), pts);
    double lhs = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i) lhs += wts[i] * obs[i];
    const double rhs = pair_with_cell_load(w, f);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(std::abs(lhs), std::abs(rhs)));
}

TEST_CASE("energy identity ties grad_dot_field to the assembled operator") {
    GridField u = random_field(4, 0.6, test_rng);
    GridField f = random_field(4, 1.0, test_rng);
    EllipticSolver solver(u, BoundarySpec::dirichlet_left());
    auto p = solver.solve_source(f);

    auto gdot = grad_dot_field(p, p);
    double energy = 0.0;
    const double h2 = f.cell_width() * f.cell_width();
    for (std::size_t k = 0; k < f.side(); ++k)
        for (std::size_t n = 0; n < f.side(); ++n)
            energy += std::exp(u(k, n)) * gdot(k, n) * h2;
    const double work = pair_with_cell_load(p, f);
    CHECK(energy == doctest::Approx(work).epsilon(1e-10));
}

TEST_CASE("scaling the coefficient scales the solution inversely") {
    GridField u = random_field(4, 0.4, test_rng);
    GridField f = random_field(4, 1.0, test_rng);
    const double c = 3.0;
    GridField uc = u;
    for (double& v : uc.values()) v += std::log(c);

    EllipticSolver s1(u, BoundarySpec::dirichlet_left());
    EllipticSolver s2(uc, BoundarySpec::dirichlet_left());
    auto p1 = s1.solve_source(f);
    auto p2 = s2.solve_source(f);
    for (std::size_t i = 0; i < p1.values().size(); ++i)
        CHECK(p2.values()[i] == doctest::Approx(p1.values()[i] / c).epsilon(1e-9));
}

TEST_CASE("observe reproduces bilinear fields exactly, clamp strip included") {
    GridField p(4);
    auto lin = [](double x, double y) { return 2.0 + 3.0 * x - 1.5 * y + 0.25 * x * y; };
    const double h = p.cell_width();
    for (std::size_t k = 0; k < p.side(); ++k)
        for (std::size_t n = 0; n < p.side(); ++n) p(k, n) = lin(k * h, n * h);

    std::vector<ObsPoint> pts{{0.17, 0.40}, {0.99, 0.99}, {0.5, 0.97}, {0.0, 0.0}, {1.0, 1.0}};
    auto vals = observe(p, pts);
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(vals[i] == doctest::Approx(lin(pts[i].x, pts[i].y)).epsilon(1e-13));

    GridField c(3, 7.5);
    for (double v : observe(c, pts)) CHECK(v == doctest::Approx(7.5));

    CHECK_THROWS_AS(observe(p, std::vector<ObsPoint>{{1.2, 0.5}}), std::invalid_argument);
}

TEST_CASE("observe converges under refinement for a smooth field") {
    auto smooth = [](double x, double y) { return std::sin(3.0 * x) * std::cos(2.0 * y); };
    std::mt19937_64 rng(515);
    std::uniform_real_distribution<double> unif(0.05, 0.9);
    std::vector<ObsPoint> pts(50);
    for (auto& p : pts) p = {unif(rng), unif(rng)};

    double prev = 0.0;
    for (int n = 5; n <= 7; ++n) {
        auto f = sample_field(n, smooth);
        auto vals = observe(f, pts);
        double err = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i)
            err += std::abs(vals[i] - smooth(pts[i].x, pts[i].y));
        err /= double(pts.size());
        if (n > 5) CHECK(err < 0.35 * prev);
        prev = err;
    }
}

TEST_CASE("gradient_field examples") {
    auto fx = sample_field(5, [](double x, double) { return x; });
    auto g = gradient_field(fx);
    for (double v : g.x.values()) CHECK(v == doctest::Approx(1.0));
    for (double v : g.y.values()) CHECK(v == doctest::Approx(0.0));

    auto fq = sample_field(5, [](double x, double) { return x * (2.0 - x); });
    auto gq = gradient_field(fq);
    const double h = fq.cell_width();
    for (std::size_t k = 0; k + 1 < fq.side(); ++k) {
        const double xc = (k + 0.5) * h;
        CHECK(gq.x(k, 3) == doctest::Approx(2.0 - 2.0 * xc).epsilon(1e-10));
    }

    GridField c(4, 3.0);
    auto gc = gradient_field(c);
    for (double v : gc.x.values()) CHECK(v == 0.0);
    for (double v : gc.y.values()) CHECK(v == 0.0);
}

TEST_CASE("solver wrappers and the cg path agree with the direct path") {
    GridField u = random_field(4, 0.5, test_rng);
    GridField f = random_field(4, 1.0, test_rng);
    EllipticProblem prob{u, f, {}, BoundarySpec::dirichlet_left()};
    auto direct = solve_forward(prob);

    EllipticSolver cg_solver(u, BoundarySpec::dirichlet_left(), LinearSolverKind::cg);
    auto iter = cg_solver.solve_source(f).restrict_to_cells();
    CHECK(max_abs_diff(direct, iter) < 1e-8);

    std::vector<ObsPoint> pts{{0.4, 0.6}};
    std::vector<double> wts{2.0};
    auto adj = solve_adjoint(prob, wts, pts);
    EllipticSolver ds(u, BoundarySpec::dirichlet_left());
    CHECK(max_abs_diff(adj, ds.solve_points(pts, wts).restrict_to_cells()) < 1e-12);
    CHECK(ds.solve_count() == 1);
}
