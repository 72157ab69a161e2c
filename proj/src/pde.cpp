// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#include "wavemap/pde.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/IterativeLinearSolvers>

namespace wavemap {

bool BoundarySpec::has_dirichlet() const {
    return left.kind == BcKind::dirichlet || right.kind == BcKind::dirichlet ||
           bottom.kind == BcKind::dirichlet || top.kind == BcKind::dirichlet;
}

void BoundarySpec::validate() const {
    if (!has_dirichlet())
        throw std::invalid_argument(
            "BoundarySpec: all-Neumann boundary leaves the operator singular");
}

BoundarySpec BoundarySpec::dirichlet_left() {
    BoundarySpec bc;
    bc.left.kind = BcKind::dirichlet;
    return bc;
}

void ObservationSet::validate() const {
    if (gamma <= 0.0) throw std::invalid_argument("ObservationSet: gamma must be > 0");
    if (points.size() != values.size())
        throw std::invalid_argument("ObservationSet: point/value count mismatch");
    for (const auto& p : points)
        if (p.x <= 0.0 || p.x >= 1.0 || p.y <= 0.0 || p.y >= 1.0)
            throw std::invalid_argument("ObservationSet: points must be strictly interior");
}

NodalField::NodalField(int exponent, double fill) : exponent_(exponent) {
    if (exponent < 0 || exponent > 15)
        throw std::invalid_argument("NodalField: exponent out of range");
    values_.assign(nodes_per_side() * nodes_per_side(), fill);
}

GridField NodalField::restrict_to_cells() const {
    GridField out(exponent_);
    for (std::size_t k = 0; k < out.side(); ++k)
        for (std::size_t n = 0; n < out.side(); ++n)
            out(k, n) = at(k, n);
    return out;
}

InterpStencil interp_stencil(int exponent, double x, double y) {
    if (x < 0.0 || x > 1.0 || y < 0.0 || y > 1.0)
        throw std::invalid_argument("interp_stencil: point outside [0,1]^2");
    const std::size_t side = std::size_t{1} << exponent;
    if (side < 2)
        throw std::invalid_argument("interp_stencil: grid too coarse to interpolate");
    const double sx = x * static_cast<double>(side);
    const double sy = y * static_cast<double>(side);
    InterpStencil st;
    st.i = std::min(static_cast<std::size_t>(sx), side - 2);
    st.j = std::min(static_cast<std::size_t>(sy), side - 2);
    st.tx = sx - static_cast<double>(st.i);
    st.ty = sy - static_cast<double>(st.j);
    return st;
}

std::vector<double> observe(const GridField& p, std::span<const ObsPoint> points) {
    std::vector<double> out;
    out.reserve(points.size());
    for (const auto& pt : points) {
        const InterpStencil st = interp_stencil(p.exponent(), pt.x, pt.y);
        const double v00 = p(st.i, st.j), v10 = p(st.i + 1, st.j);
        const double v01 = p(st.i, st.j + 1), v11 = p(st.i + 1, st.j + 1);
        out.push_back((1.0 - st.tx) * (1.0 - st.ty) * v00 + st.tx * (1.0 - st.ty) * v10 +
                      (1.0 - st.tx) * st.ty * v01 + st.tx * st.ty * v11);
    }
    return out;
}

CellVectorField gradient_field(const GridField& p) {
    const std::size_t side = p.side();
    const double h = p.cell_width();
    CellVectorField g{GridField(p.exponent()), GridField(p.exponent())};
    if (side == 1) return g;
    for (std::size_t k = 0; k < side; ++k) {
        for (std::size_t n = 0; n < side; ++n) {
            const std::size_t ku = (k + 1 < side) ? k : k - 1;  // one-sided at the far strip
            const std::size_t nu = (n + 1 < side) ? n : n - 1;
            g.x(k, n) = (p(ku + 1, n) - p(ku, n)) / h;
            g.y(k, n) = (p(k, nu + 1) - p(k, nu)) / h;
        }
    }
    return g;
}

GridField grad_dot_field(const NodalField& a, const NodalField& b) {
    if (a.exponent() != b.exponent())
        throw std::invalid_argument("grad_dot_field: resolution mismatch");
    GridField out(a.exponent());
    const std::size_t side = out.side();
    const double h2 = out.cell_width() * out.cell_width();
    for (std::size_t k = 0; k < side; ++k) {
        for (std::size_t n = 0; n < side; ++n) {
            const double dsa = a.at(k + 1, n) - a.at(k, n);
            const double dna = a.at(k + 1, n + 1) - a.at(k, n + 1);
            const double dwa = a.at(k, n + 1) - a.at(k, n);
            const double dea = a.at(k + 1, n + 1) - a.at(k + 1, n);
            const double dsb = b.at(k + 1, n) - b.at(k, n);
            const double dnb = b.at(k + 1, n + 1) - b.at(k, n + 1);
            const double dwb = b.at(k, n + 1) - b.at(k, n);
            const double deb = b.at(k + 1, n + 1) - b.at(k + 1, n);
            const double integral = (dsa * dsb + dna * dnb) / 3.0 + (dsa * dnb + dna * dsb) / 6.0 +
                                    (dwa * dwb + dea * deb) / 3.0 + (dwa * deb + dea * dwb) / 6.0;
            out(k, n) = integral / h2;
        }
    }
    return out;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// Reference bilinear stiffness on the unit square (h-independent in 2D),
// local node order 00, 10, 01, 11.
constexpr double kLoc[4][4] = {
    {2.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0, -1.0 / 3.0},
    {-1.0 / 6.0, 2.0 / 3.0, -1.0 / 3.0, -1.0 / 6.0},
    {-1.0 / 6.0, -1.0 / 3.0, 2.0 / 3.0, -1.0 / 6.0},
    {-1.0 / 3.0, -1.0 / 6.0, -1.0 / 6.0, 2.0 / 3.0},
};

constexpr int kDirectDofLimit = 1 << 17;

}  // namespace

struct EllipticSolver::Impl {
    int n = 0;                       // grid exponent
    std::size_t side = 0;            // 2^n cells per axis
    std::size_t nodes = 0;           // (side+1)^2
    BoundarySpec bc;
    std::vector<double> cell_coeff;  // e^u per cell
    std::vector<int> free_of_node;   // node -> free dof index, -1 for Dirichlet
    std::vector<double> dirichlet_value;
    std::vector<double> dirichlet_rhs;  // coupling of eliminated columns, per free dof
    std::size_t n_free = 0;

    bool use_direct = true;
    SpMat mat;
    Eigen::SimplicialLLT<SpMat> llt;
    mutable Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg;
    mutable long solves = 0;

    std::size_t node(std::size_t i, std::size_t j) const { return i * (side + 1) + j; }

    double edge_data(const EdgeCondition& e, double t) const {
        return e.data ? e.data(t) : 0.0;
    }

    bool node_is_dirichlet(std::size_t i, std::size_t j, double* value) const {
        const double h = 1.0 / static_cast<double>(side);
        bool d = false;
        double v = 0.0;
        if (i == 0 && bc.left.kind == BcKind::dirichlet) { d = true; v = edge_data(bc.left, j * h); }
        if (i == side && bc.right.kind == BcKind::dirichlet) { d = true; v = edge_data(bc.right, j * h); }
        if (j == 0 && bc.bottom.kind == BcKind::dirichlet) { d = true; v = edge_data(bc.bottom, i * h); }
        if (j == side && bc.top.kind == BcKind::dirichlet) { d = true; v = edge_data(bc.top, i * h); }
        if (value) *value = v;
        return d;
    }

    void assemble();
    NodalField run(std::vector<double> load, bool homogeneous) const;
};

void EllipticSolver::Impl::assemble() {
    free_of_node.assign(nodes, -1);
    dirichlet_value.assign(nodes, 0.0);
    n_free = 0;
    for (std::size_t i = 0; i <= side; ++i) {
        for (std::size_t j = 0; j <= side; ++j) {
            double g = 0.0;
            if (node_is_dirichlet(i, j, &g)) {
                dirichlet_value[node(i, j)] = g;
            } else {
                free_of_node[node(i, j)] = static_cast<int>(n_free++);
            }
        }
    }

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(16 * side * side);
    dirichlet_rhs.assign(n_free, 0.0);
    for (std::size_t k = 0; k < side; ++k) {
        for (std::size_t n2 = 0; n2 < side; ++n2) {
            const double theta = cell_coeff[k * side + n2];
            const std::size_t corners[4] = {node(k, n2), node(k + 1, n2), node(k, n2 + 1),
                                            node(k + 1, n2 + 1)};
            for (int a = 0; a < 4; ++a) {
                const int ra = free_of_node[corners[a]];
                if (ra < 0) continue;
                for (int b = 0; b < 4; ++b) {
                    const double v = theta * kLoc[a][b];
                    const int cb = free_of_node[corners[b]];
                    if (cb >= 0)
                        trip.emplace_back(ra, cb, v);
                    else
                        dirichlet_rhs[static_cast<std::size_t>(ra)] += v * dirichlet_value[corners[b]];
                }
            }
        }
    }

    mat.resize(static_cast<Eigen::Index>(n_free), static_cast<Eigen::Index>(n_free));
    mat.setFromTriplets(trip.begin(), trip.end());
    mat.makeCompressed();

    if (use_direct) {
        llt.compute(mat);
        if (llt.info() != Eigen::Success)
            throw std::runtime_error("EllipticSolver: factorization failed");
    } else {
        cg.setTolerance(1e-12);
        cg.setMaxIterations(static_cast<Eigen::Index>(50 * std::sqrt(double(n_free)) + 1000));
        cg.compute(mat);
    }
}

NodalField EllipticSolver::Impl::run(std::vector<double> load, bool homogeneous) const {
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(n_free));
    for (std::size_t nd = 0; nd < nodes; ++nd)
        if (free_of_node[nd] >= 0) rhs[free_of_node[nd]] = load[nd];
    if (!homogeneous)
        for (std::size_t f = 0; f < n_free; ++f) rhs[static_cast<Eigen::Index>(f)] -= dirichlet_rhs[f];

    Eigen::VectorXd x;
    if (use_direct) {
        x = llt.solve(rhs);
    } else {
        x = cg.solve(rhs);
        if (cg.info() != Eigen::Success) {
            std::ostringstream msg;
            msg << "EllipticSolver: cg did not converge, residual " << cg.error();
            throw std::runtime_error(msg.str());
        }
    }
    ++solves;

    NodalField out(n);
    for (std::size_t nd = 0; nd < nodes; ++nd) {
        const int f = free_of_node[nd];
        out.values()[nd] = f >= 0 ? x[f] : (homogeneous ? 0.0 : dirichlet_value[nd]);
    }
    return out;
}

EllipticSolver::EllipticSolver(const GridField& log_perm, const BoundarySpec& bc,
                               LinearSolverKind kind)
    : impl_(std::make_unique<Impl>()) {
    bc.validate();
    impl_->n = log_perm.exponent();
    impl_->side = log_perm.side();
    impl_->nodes = (impl_->side + 1) * (impl_->side + 1);
    impl_->bc = bc;
    impl_->cell_coeff.resize(log_perm.size());
    for (std::size_t c = 0; c < log_perm.size(); ++c)
        impl_->cell_coeff[c] = std::exp(log_perm.values()[c]);
    const std::size_t dofs = impl_->nodes;
    impl_->use_direct = (kind == LinearSolverKind::direct) ||
                        (kind == LinearSolverKind::automatic && dofs <= kDirectDofLimit);
    impl_->assemble();
}

EllipticSolver::~EllipticSolver() = default;
EllipticSolver::EllipticSolver(EllipticSolver&&) noexcept = default;
EllipticSolver& EllipticSolver::operator=(EllipticSolver&&) noexcept = default;

int EllipticSolver::exponent() const { return impl_->n; }
long EllipticSolver::solve_count() const { return impl_->solves; }

NodalField EllipticSolver::solve_source(const GridField& f,
                                        std::span<const PointLoad> extra) const {
    auto& im = *impl_;
    if (f.exponent() != im.n)
        throw std::invalid_argument("solve_source: source resolution mismatch");
    const double h = f.cell_width();
    std::vector<double> load(im.nodes, 0.0);

    // cell sources: f_c h^2 / 4 to each corner
    const double quarter = 0.25 * h * h;
    for (std::size_t k = 0; k < im.side; ++k) {
        for (std::size_t n2 = 0; n2 < im.side; ++n2) {
            const double w = quarter * f(k, n2);
            load[im.node(k, n2)] += w;
            load[im.node(k + 1, n2)] += w;
            load[im.node(k, n2 + 1)] += w;
            load[im.node(k + 1, n2 + 1)] += w;
        }
    }

    // Neumann boundary terms, midpoint rule per boundary segment
    auto add_edge = [&](const EdgeCondition& e, bool vertical, std::size_t fixed) {
        if (e.kind != BcKind::neumann || !e.data) return;
        for (std::size_t s = 0; s < im.side; ++s) {
            const double v = 0.5 * h * e.data((static_cast<double>(s) + 0.5) * h);
            if (vertical) {
                load[im.node(fixed, s)] += v;
                load[im.node(fixed, s + 1)] += v;
            } else {
                load[im.node(s, fixed)] += v;
                load[im.node(s + 1, fixed)] += v;
            }
        }
    };
    add_edge(im.bc.left, true, 0);
    add_edge(im.bc.right, true, im.side);
    add_edge(im.bc.bottom, false, 0);
    add_edge(im.bc.top, false, im.side);

    for (const auto& p : extra) {
        const InterpStencil st = interp_stencil(im.n, p.x, p.y);
        load[im.node(st.i, st.j)] += p.weight * (1.0 - st.tx) * (1.0 - st.ty);
        load[im.node(st.i + 1, st.j)] += p.weight * st.tx * (1.0 - st.ty);
        load[im.node(st.i, st.j + 1)] += p.weight * (1.0 - st.tx) * st.ty;
        load[im.node(st.i + 1, st.j + 1)] += p.weight * st.tx * st.ty;
    }

    return im.run(std::move(load), /*homogeneous=*/false);
}

NodalField EllipticSolver::solve_points(std::span<const ObsPoint> points,
                                        std::span<const double> weights) const {
    auto& im = *impl_;
    if (points.size() != weights.size())
        throw std::invalid_argument("solve_points: point/weight count mismatch");
    std::vector<double> load(im.nodes, 0.0);
    for (std::size_t q = 0; q < points.size(); ++q) {
        const InterpStencil st = interp_stencil(im.n, points[q].x, points[q].y);
        const double w = weights[q];
        load[im.node(st.i, st.j)] += w * (1.0 - st.tx) * (1.0 - st.ty);
        load[im.node(st.i + 1, st.j)] += w * st.tx * (1.0 - st.ty);
        load[im.node(st.i, st.j + 1)] += w * (1.0 - st.tx) * st.ty;
        load[im.node(st.i + 1, st.j + 1)] += w * st.tx * st.ty;
    }
    return im.run(std::move(load), /*homogeneous=*/true);
}

GridField solve_forward(const EllipticProblem& problem) {
    EllipticSolver solver(problem.log_perm, problem.boundary);
    return solver.solve_source(problem.source, problem.point_sources).restrict_to_cells();
}

GridField solve_adjoint(const EllipticProblem& problem,
                        std::span<const double> residual_weights,
                        std::span<const ObsPoint> points) {
    EllipticSolver solver(problem.log_perm, problem.boundary);
    return solver.solve_points(points, residual_weights).restrict_to_cells();
}

}  // namespace wavemap
