// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "wavemap/grid_field.hpp"

namespace wavemap {

// Solver for -div(e^u grad p) = f on [0,1]^2 with mixed Dirichlet/Neumann
// boundary data, discretized with bilinear elements on the uniform grid.
// The coefficient e^u is constant per cell; unknowns live on the
// (2^N + 1)^2 vertex grid.

enum class BcKind { dirichlet, neumann };

struct EdgeCondition {
    BcKind kind = BcKind::neumann;
    // Boundary datum as a function of the coordinate along the edge
    // (x for bottom/top, y for left/right); empty means 0.  For Neumann
    // edges the datum is the boundary flux term of the weak form.
    std::function<double(double)> data;
};

struct BoundarySpec {
    EdgeCondition left, right, bottom, top;  // x=0, x=1, y=0, y=1
    bool has_dirichlet() const;
    void validate() const;  // throws when all edges are Neumann
    /// The experiment setup: p = 0 on x = 0, zero Neumann elsewhere.
    static BoundarySpec dirichlet_left();
};

struct ObsPoint {
    double x = 0.0, y = 0.0;
};

struct ObservationSet {
    std::vector<ObsPoint> points;
    std::vector<double> values;
    double gamma = 1.0;
    void validate() const;
};

struct PointLoad {
    double x = 0.0, y = 0.0, weight = 0.0;
};

struct EllipticProblem {
    GridField log_perm;                    // u on solver cells
    GridField source;                      // f on solver cells
    std::vector<PointLoad> point_sources;  // optional extra Dirac sources
    BoundarySpec boundary;
    int solver_exponent() const { return log_perm.exponent(); }
};

/// Values on the (2^N + 1)^2 vertex grid, node (i, j) at (i h, j h).
class NodalField {
public:
    NodalField() = default;
    explicit NodalField(int exponent, double fill = 0.0);

    int exponent() const { return exponent_; }
    std::size_t nodes_per_side() const { return (std::size_t{1} << exponent_) + 1; }
    double& at(std::size_t i, std::size_t j) { return values_[i * nodes_per_side() + j]; }
    double at(std::size_t i, std::size_t j) const { return values_[i * nodes_per_side() + j]; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    /// Drops the i = 2^N and j = 2^N boundary lines (lower-left convention).
    GridField restrict_to_cells() const;

private:
    int exponent_ = 0;
    std::vector<double> values_ = std::vector<double>(4, 0.0);
};

enum class LinearSolverKind { automatic, direct, cg };

/// Assembles and factorizes the operator for one coefficient field, then
/// answers primal (data-carrying) and dual (homogeneous) solves against it.
/// Immutable after construction; solves are const and reentrant.
class EllipticSolver {
public:
    EllipticSolver(const GridField& log_perm, const BoundarySpec& bc,
                   LinearSolverKind kind = LinearSolverKind::automatic);
    ~EllipticSolver();
    EllipticSolver(EllipticSolver&&) noexcept;
    EllipticSolver& operator=(EllipticSolver&&) noexcept;

    int exponent() const;

    /// Solves with cell source f plus optional Dirac loads, applying the
    /// boundary data of the spec passed at construction.
    NodalField solve_source(const GridField& f,
                            std::span<const PointLoad> extra = {}) const;

    /// Solves the dual problem: Dirac loads at the given points, weight[i]
    /// each, homogeneous Dirichlet/Neumann data on the same edge split.
    NodalField solve_points(std::span<const ObsPoint> points,
                            std::span<const double> weights) const;

    long solve_count() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Convenience wrappers over EllipticSolver matching the file-level formats.
GridField solve_forward(const EllipticProblem& problem);
GridField solve_adjoint(const EllipticProblem& problem,
                        std::span<const double> residual_weights,
                        std::span<const ObsPoint> points);

/// Bilinear interpolation of the stored samples at each point.  The samples
/// are treated as nodal values at (k 2^-N, n 2^-N); in the last strip next
/// to x = 1 or y = 1 the stencil is clamped, which extrapolates linearly
/// (still exact for globally bilinear fields).
std::vector<double> observe(const GridField& p, std::span<const ObsPoint> points);

/// The (node indices, barycentric offsets) pair used by both observe() and
/// the Dirac load assembly, so the two stay exact transposes of each other.
struct InterpStencil {
    std::size_t i = 0, j = 0;  // lower-left node; i+1, j+1 complete the stencil
    double tx = 0.0, ty = 0.0;
};
InterpStencil interp_stencil(int exponent, double x, double y);

struct CellVectorField {
    GridField x;
    GridField y;
};

/// Cell-centered difference gradient of the stored samples; exact for
/// affine fields, O(h^2) at interior cell centers.
CellVectorField gradient_field(const GridField& p);

/// Per-cell mean of grad(a) . grad(b) for two bilinear nodal fields,
/// i.e. the exact element integral divided by the cell area.
GridField grad_dot_field(const NodalField& a, const NodalField& b);

}  // namespace wavemap
