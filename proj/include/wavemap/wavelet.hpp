// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "wavemap/grid_field.hpp"

namespace wavemap {

// Haar decompositions store orthonormal-convention coefficients in the flat
// linear-index layout:
//
//   1D: slot 0 = w0 (coefficient of phi), slot 2^j + k = coefficient of
//       psi_{j,k} = 2^{j/2} psi(2^j x - k).  Depth J means levels 0..J-1,
//       2^J coefficients total.
//   2D: slot 0 = w0, slot (1+m)*4^j + k*2^j + n = coefficient of
//       psi^{(m)}_{j,k,n} = 2^j psi^{(m)}(2^j x - k, 2^j y - n).
//       Depth J means levels 0..J-1, 4^J coefficients total.
//
// Orientations: m = 0 horizontal (phi(x) psi(y)), m = 1 vertical
// (psi(x) phi(y)), m = 2 diagonal (psi(x) psi(y)).

class WaveletDecomp1D {
public:
    WaveletDecomp1D() = default;
    explicit WaveletDecomp1D(int depth);

    int depth() const { return depth_; }
    std::size_t size() const { return coeffs_.size(); }

    double& w0() { return coeffs_[0]; }
    double w0() const { return coeffs_[0]; }
    double& detail(int j, std::size_t k);
    double detail(int j, std::size_t k) const;

    std::vector<double>& coeffs() { return coeffs_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

private:
    int depth_ = 0;
    std::vector<double> coeffs_ = std::vector<double>(1, 0.0);
};

class WaveletDecomp2D {
public:
    WaveletDecomp2D() = default;
    explicit WaveletDecomp2D(int depth);

    int depth() const { return depth_; }
    std::size_t size() const { return coeffs_.size(); }

    double& w0() { return coeffs_[0]; }
    double w0() const { return coeffs_[0]; }
    double& detail(int j, int m, std::size_t k, std::size_t n);
    double detail(int j, int m, std::size_t k, std::size_t n) const;

    std::vector<double>& coeffs() { return coeffs_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

private:
    int depth_ = 0;
    std::vector<double> coeffs_ = std::vector<double>(1, 0.0);
};

/// Forward Haar transform of 2^N samples; throws on other lengths.
WaveletDecomp1D fwt1d(const std::vector<double>& values);
/// Exact inverse of fwt1d; returns 2^J values.
std::vector<double> iwt1d(const WaveletDecomp1D& decomp);

WaveletDecomp2D fwt2d(const GridField& field);
GridField iwt2d(const WaveletDecomp2D& decomp);

/// Zeroes every detail level j >= j_cut; keeps the storage depth.
void truncate_levels(WaveletDecomp2D& decomp, int j_cut);

// Linear re-indexing of wavelet indices, l >= 1.
std::size_t linear_index_1d(int j, std::size_t k);
std::pair<int, std::size_t> inverse_linear_index_1d(std::size_t l);

struct WaveletIndex2D {
    int j;
    int m;
    std::size_t k;
    std::size_t n;
};

std::size_t linear_index_2d(int j, int m, std::size_t k, std::size_t n);
WaveletIndex2D inverse_linear_index_2d(std::size_t l);

// Pointwise evaluation of the scaled Haar wavelets (right-continuous
// indicator convention, zero outside the support).
double haar_psi_1d(int j, std::size_t k, double x);
double haar_psi_2d(int j, int m, std::size_t k, std::size_t n, double x, double y);

/// Evaluates the truncated expansion at (x, y) in [0,1)^2 by inverting to
/// the native grid and doing a piecewise-constant lookup (exact for Haar).
double evaluate_expansion(const WaveletDecomp2D& decomp, double x, double y);

// Thread-local coefficient-operation counter; used to pin the transforms'
// linear cost in tests.
std::uint64_t wavelet_op_count();
void reset_wavelet_op_count();

}  // namespace wavemap
