// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#include "wavemap/wavelet.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace wavemap {

namespace {
thread_local std::uint64_t g_op_count = 0;
}

std::uint64_t wavelet_op_count() { return g_op_count; }
void reset_wavelet_op_count() { g_op_count = 0; }

WaveletDecomp1D::WaveletDecomp1D(int depth) : depth_(depth) {
    if (depth < 0 || depth > 30)
        throw std::invalid_argument("WaveletDecomp1D: depth out of range");
    coeffs_.assign(std::size_t{1} << depth, 0.0);
}

double& WaveletDecomp1D::detail(int j, std::size_t k) {
    return coeffs_[linear_index_1d(j, k)];
}

double WaveletDecomp1D::detail(int j, std::size_t k) const {
    return coeffs_[linear_index_1d(j, k)];
}

WaveletDecomp2D::WaveletDecomp2D(int depth) : depth_(depth) {
    if (depth < 0 || depth > 15)
        throw std::invalid_argument("WaveletDecomp2D: depth out of range");
    coeffs_.assign((std::size_t{1} << depth) * (std::size_t{1} << depth), 0.0);
}

double& WaveletDecomp2D::detail(int j, int m, std::size_t k, std::size_t n) {
    return coeffs_[linear_index_2d(j, m, k, n)];
}

double WaveletDecomp2D::detail(int j, int m, std::size_t k, std::size_t n) const {
    return coeffs_[linear_index_2d(j, m, k, n)];
}

std::size_t linear_index_1d(int j, std::size_t k) {
    if (j < 0 || k >= (std::size_t{1} << j))
        throw std::invalid_argument("linear_index_1d: shift out of range");
    return (std::size_t{1} << j) + k;
}

std::pair<int, std::size_t> inverse_linear_index_1d(std::size_t l) {
    if (l < 1) throw std::invalid_argument("inverse_linear_index_1d: l must be >= 1");
    int j = std::bit_width(l) - 1;
    return {j, l - (std::size_t{1} << j)};
}

std::size_t linear_index_2d(int j, int m, std::size_t k, std::size_t n) {
    if (j < 0 || m < 0 || m > 2)
        throw std::invalid_argument("linear_index_2d: bad level or orientation");
    const std::size_t half = std::size_t{1} << j;
    if (k >= half || n >= half)
        throw std::invalid_argument("linear_index_2d: shift out of range");
    const std::size_t block = half * half;
    return (std::size_t(1 + m)) * block + k * half + n;
}

WaveletIndex2D inverse_linear_index_2d(std::size_t l) {
    if (l < 1) throw std::invalid_argument("inverse_linear_index_2d: l must be >= 1");
    int j = 0;
    while ((std::size_t{1} << (2 * (j + 1))) <= l) ++j;
    const std::size_t block = std::size_t{1} << (2 * j);
    const std::size_t half = std::size_t{1} << j;
    std::size_t r = l - block;
    WaveletIndex2D idx;
    idx.j = j;
    idx.m = static_cast<int>(r / block);
    r %= block;
    idx.k = r / half;
    idx.n = r % half;
    return idx;
}

WaveletDecomp1D fwt1d(const std::vector<double>& values) {
    const std::size_t len = values.size();
    if (len == 0 || (len & (len - 1)) != 0)
        throw std::invalid_argument("fwt1d: input length must be a power of two");
    const int depth = std::countr_zero(len);

    WaveletDecomp1D out(depth);
    std::vector<double> a = values;
    for (int j = depth - 1; j >= 0; --j) {
        const std::size_t half = std::size_t{1} << j;
        // orthonormal coefficient = 2^{-j/2} * (pairwise half-difference)
        const double scale = std::exp2(-0.5 * j);
        for (std::size_t k = 0; k < half; ++k) {
            const double lo = a[2 * k], hi = a[2 * k + 1];
            a[k] = 0.5 * (lo + hi);
            out.detail(j, k) = scale * 0.5 * (lo - hi);
            g_op_count += 2;
        }
    }
    out.w0() = a[0];
    return out;
}

std::vector<double> iwt1d(const WaveletDecomp1D& decomp) {
    const int depth = decomp.depth();
    std::vector<double> a(std::size_t{1} << depth);
    a[0] = decomp.w0();
    for (int j = 0; j < depth; ++j) {
        const std::size_t half = std::size_t{1} << j;
        const double scale = std::exp2(0.5 * j);
        for (std::size_t k = half; k-- > 0;) {
            const double aj = a[k];
            const double d = scale * decomp.detail(j, k);
            a[2 * k] = aj + d;
            a[2 * k + 1] = aj - d;
            g_op_count += 2;
        }
    }
    return a;
}

WaveletDecomp2D fwt2d(const GridField& field) {
    const int depth = field.exponent();
    WaveletDecomp2D out(depth);
    GridField a = field;
    for (int j = depth - 1; j >= 0; --j) {
        const std::size_t half = std::size_t{1} << j;
        const double scale = std::exp2(-static_cast<double>(j));
        for (std::size_t k = 0; k < half; ++k) {
            for (std::size_t n = 0; n < half; ++n) {
                const double v00 = a(2 * k, 2 * n);      // lower-left in (x, y)
                const double v10 = a(2 * k + 1, 2 * n);
                const double v01 = a(2 * k, 2 * n + 1);
                const double v11 = a(2 * k + 1, 2 * n + 1);
                a(k, n) = 0.25 * (v00 + v10 + v01 + v11);
                // m = 0: sign flips across y; m = 1: across x; m = 2: both.
                out.detail(j, 0, k, n) = scale * 0.25 * (v00 + v10 - v01 - v11);
                out.detail(j, 1, k, n) = scale * 0.25 * (v00 - v10 + v01 - v11);
                out.detail(j, 2, k, n) = scale * 0.25 * (v00 - v10 - v01 + v11);
                g_op_count += 4;
            }
        }
    }
    out.w0() = a(0, 0);
    return out;
}

GridField iwt2d(const WaveletDecomp2D& decomp) {
    const int depth = decomp.depth();
    GridField a(depth);
    a(0, 0) = decomp.w0();
    for (int j = 0; j < depth; ++j) {
        const std::size_t half = std::size_t{1} << j;
        const double scale = std::exp2(static_cast<double>(j));
        for (std::size_t k = half; k-- > 0;) {
            for (std::size_t n = half; n-- > 0;) {
                const double avg = a(k, n);
                const double d0 = scale * decomp.detail(j, 0, k, n);
                const double d1 = scale * decomp.detail(j, 1, k, n);
                const double d2 = scale * decomp.detail(j, 2, k, n);
                a(2 * k, 2 * n) = avg + d0 + d1 + d2;
                a(2 * k + 1, 2 * n) = avg + d0 - d1 - d2;
                a(2 * k, 2 * n + 1) = avg - d0 + d1 - d2;
                a(2 * k + 1, 2 * n + 1) = avg - d0 - d1 + d2;
                g_op_count += 4;
            }
        }
    }
    return a;
}

void truncate_levels(WaveletDecomp2D& decomp, int j_cut) {
    if (j_cut < 0) throw std::invalid_argument("truncate_levels: negative cut");
    for (int j = j_cut; j < decomp.depth(); ++j) {
        const std::size_t half = std::size_t{1} << j;
        for (int m = 0; m < 3; ++m)
            for (std::size_t k = 0; k < half; ++k)
                for (std::size_t n = 0; n < half; ++n)
                    decomp.detail(j, m, k, n) = 0.0;
    }
}

namespace {

// psi on [0,1): +1 on [0,1/2), -1 on [1/2,1), 0 elsewhere.
inline double mother(double t) {
    if (t < 0.0 || t >= 1.0) return 0.0;
    return t < 0.5 ? 1.0 : -1.0;
}

inline double box(double t) { return (t >= 0.0 && t < 1.0) ? 1.0 : 0.0; }

}  // namespace

double haar_psi_1d(int j, std::size_t k, double x) {
    const double t = std::exp2(j) * x - static_cast<double>(k);
    return std::exp2(0.5 * j) * mother(t);
}

double haar_psi_2d(int j, int m, std::size_t k, std::size_t n, double x, double y) {
    const double s = std::exp2(j);
    const double tx = s * x - static_cast<double>(k);
    const double ty = s * y - static_cast<double>(n);
    double v;
    switch (m) {
        case 0: v = box(tx) * mother(ty); break;
        case 1: v = mother(tx) * box(ty); break;
        case 2: v = mother(tx) * mother(ty); break;
        default: throw std::invalid_argument("haar_psi_2d: orientation out of range");
    }
    return s * v;
}

double evaluate_expansion(const WaveletDecomp2D& decomp, double x, double y) {
    if (x < 0.0 || x >= 1.0 || y < 0.0 || y >= 1.0)
        throw std::invalid_argument("evaluate_expansion: point outside [0,1)^2");
    const GridField img = iwt2d(decomp);
    const auto k = static_cast<std::size_t>(x * static_cast<double>(img.side()));
    const auto n = static_cast<std::size_t>(y * static_cast<double>(img.side()));
    return img(k, n);
}

}  // namespace wavemap
