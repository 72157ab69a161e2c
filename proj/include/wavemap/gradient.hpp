// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#pragma once

#include <memory>
#include <span>
#include <vector>

#include "wavemap/pde.hpp"
#include "wavemap/wavelet.hpp"

namespace wavemap {

// Misfit evaluation and adjoint gradients with respect to prior coefficients.
// One gradient costs two PDE solves (forward + dual) regardless of the
// parameter count; the two assembly strategies differ only in how the
// projection of the adjoint product field onto the basis is computed:
//
//   method 1 (basis_integrals): one full-domain quadrature per basis
//     function, the slow exact reference;
//   method 2 (fast_transform): a single fast wavelet transform of the
//     product field (exact for Haar), or a plain FFT of its grid samples
//     for the trigonometric basis (a deliberately naive fast path that
//     ignores non-periodicity and sample alignment; kept as a
//     demonstration of where it stops being a descent direction).

enum class BasisKind { wavelet, fourier };
enum class GradientMethod { basis_integrals = 1, fast_transform = 2 };

// Trig products sin/cos(2 pi k x) * sin/cos(2 pi l y); the constant mode is
// (k, l, cc) = (0, 0, 3).
struct TrigMode {
    int k = 0;
    int l = 0;
    int type = 3;  // 0 = ss, 1 = cs, 2 = sc, 3 = cc
};

class Parameterization {
public:
    /// Haar basis truncated at depth j_max: 4^{j_max} coefficients in the
    /// linear layout, slot 0 = w0.
    static Parameterization wavelet(int j_max);
    /// Trig products with frequencies 0..k_max per axis: (2 k_max + 1)^2
    /// coefficients, slot 0 = constant mode.
    static Parameterization fourier(int k_max);

    BasisKind kind() const { return kind_; }
    int cut() const { return cut_; }  // j_max or k_max
    std::size_t size() const;
    const std::vector<TrigMode>& modes() const { return modes_; }

private:
    BasisKind kind_ = BasisKind::wavelet;
    int cut_ = 0;
    std::vector<TrigMode> modes_;
};

struct EvalCounters {
    long pde_solves = 0;
    long factorizations = 0;
    long quadratures = 0;      // basis integrals computed by method 1
    long fast_transforms = 0;  // method-2 transform invocations
    long misfit_evals = 0;
    long gradient_evals = 0;
};

struct ObjParts {
    double total = 0.0;
    double misfit = 0.0;
    double prior_norm = 0.0;  // norm recorded in traces (not the penalty value)
};

/// Quadratic prior penalty (scale/2) sum_l weights[l] c_l^2.
struct QuadraticPenalty {
    std::vector<double> weights;
    double scale = 1.0;

    double value(std::span<const double> c) const;
    double norm(std::span<const double> c) const;  // sqrt(sum w c^2)
    void add_gradient(std::span<const double> c, std::span<double> g) const;
};

/// Cameron-Martin weights 4^{js} of the B_2^s wavelet prior, kappa scale.
QuadraticPenalty wavelet_cm_penalty(int j_max, double s, double kappa = 1.0);

/// Inverse mode variances of the N(0, beta (-Laplace)^-alpha) prior; the
/// constant mode carries weight 0 (flat, identified by the data).
QuadraticPenalty fourier_cm_penalty(int k_max, double beta, double alpha);

class MisfitContext {
public:
    MisfitContext(GridField source, BoundarySpec bc, int solver_exponent,
                  ObservationSet obs, Parameterization par,
                  bool allow_inverse_crime = false);
    ~MisfitContext();
    MisfitContext(MisfitContext&&) noexcept;
    MisfitContext& operator=(MisfitContext&&) noexcept;

    const Parameterization& parameterization() const;
    std::size_t param_count() const;
    int solver_exponent() const;
    const ObservationSet& observations() const;
    const GridField& source() const;
    const BoundarySpec& boundary() const;

    /// Log-permeability on the solver grid: constant prolongation of the
    /// truncated Haar expansion, or trig products evaluated at cell centers.
    GridField coeff_to_field(std::span<const double> coeffs) const;

    /// Phi(u) = 1/(2 gamma^2) || y - Pi p_u ||^2; one forward solve.
    double misfit(std::span<const double> coeffs) const;

    /// e^u grad(p) . grad(w~) per cell from a forward and a dual solve.
    GridField integrand(std::span<const double> coeffs) const;

    std::vector<double> grad_misfit(std::span<const double> coeffs,
                                    GradientMethod method) const;

    /// The projection step of the gradient assembly alone: coefficients of
    /// the given product field in the parameter basis.  Exposed for tests
    /// and for the benchmark harness.
    std::vector<double> project(const GridField& product, GradientMethod method) const;

    ObjParts objective(std::span<const double> coeffs, const QuadraticPenalty& pen) const;
    std::vector<double> grad_objective(std::span<const double> coeffs,
                                       const QuadraticPenalty& pen,
                                       GradientMethod method) const;

    const EvalCounters& counters() const;
    void reset_counters();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace wavemap
