// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#pragma once

#include <span>
#include <vector>

#include "wavemap/wavelet.hpp"

namespace wavemap {

// Besov sequence norms over stored (finite-depth) Haar decompositions.  All
// norms include the |w0|^p term; level j carries the weight 2^{j p (s + d/2
// - d/p)} on the p-th powers (q-weighted in the general form).

double besov_norm_1d(const WaveletDecomp1D& decomp, double p, double s);
double besov_norm_2d(const WaveletDecomp2D& decomp, double p, double s);
double besov_norm_general(const WaveletDecomp1D& decomp, double p, double q, double s);
double besov_norm_general(const WaveletDecomp2D& decomp, double p, double q, double s);

/// Dimension-independent sequence norm over linearly indexed coefficients,
/// coeffs[i] = c_{i+1}: (sum_l l^{ps/d + p/2 - 1} |c_l|^p)^{1/p}.  Only
/// equivalent to the level-weighted norms, not equal.
double besov_seq_norm_linear(std::span<const double> coeffs, double p, double s, int d);

/// Cameron-Martin inner product of the B_2^s prior: sum_j 4^{js} sum w(u) w(v)
/// plus the w0 product with weight 1; shorter decompositions are zero-padded.
double cm_inner_product(const WaveletDecomp2D& u, const WaveletDecomp2D& v, double s);

/// Riesz representative of <u, .>_E in coefficient space: scales each level-j
/// coefficient by 4^{js}, passes w0 through.
WaveletDecomp2D cm_gradient(const WaveletDecomp2D& u, double s);

/// Per-slot weights 4^{js} (slot 0 -> 1) in the 2D linear layout of depth J;
/// the diagonal of the Cameron-Martin quadratic form.
std::vector<double> cm_weights(int depth, double s);

/// Per-slot weights of the B_1^s penalty in d = 2: 2^{j(s-1)}, slot 0 -> 1.
std::vector<double> besov1_weights(int depth, double s);

}  // namespace wavemap
