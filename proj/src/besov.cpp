// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#include "wavemap/besov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wavemap {

namespace {

void check_pq(double p, double q) {
    if (p < 1.0 || q < 1.0)
        throw std::invalid_argument("besov norm: p and q must be >= 1");
}

double level_power_1d(const WaveletDecomp1D& d, int j, double p) {
    double s = 0.0;
    const std::size_t half = std::size_t{1} << j;
    for (std::size_t k = 0; k < half; ++k)
        s += std::pow(std::abs(d.detail(j, k)), p);
    return s;
}

double level_power_2d(const WaveletDecomp2D& d, int j, double p) {
    double s = 0.0;
    const std::size_t half = std::size_t{1} << j;
    for (int m = 0; m < 3; ++m)
        for (std::size_t k = 0; k < half; ++k)
            for (std::size_t n = 0; n < half; ++n)
                s += std::pow(std::abs(d.detail(j, m, k, n)), p);
    return s;
}

}  // namespace

// The w0 term enters with exponent q so the norm stays homogeneous for
// p != q; for p == q this is the printed |w0|^p.
double besov_norm_general(const WaveletDecomp1D& decomp, double p, double q, double s) {
    check_pq(p, q);
    double acc = std::pow(std::abs(decomp.w0()), q);
    for (int j = 0; j < decomp.depth(); ++j) {
        const double w = std::exp2(j * q * (s + 0.5 - 1.0 / p));
        acc += w * std::pow(level_power_1d(decomp, j, p), q / p);
    }
    return std::pow(acc, 1.0 / q);
}

double besov_norm_general(const WaveletDecomp2D& decomp, double p, double q, double s) {
    check_pq(p, q);
    double acc = std::pow(std::abs(decomp.w0()), q);
    for (int j = 0; j < decomp.depth(); ++j) {
        const double w = std::exp2(j * q * (s + 1.0 - 2.0 / p));
        acc += w * std::pow(level_power_2d(decomp, j, p), q / p);
    }
    return std::pow(acc, 1.0 / q);
}

double besov_norm_1d(const WaveletDecomp1D& decomp, double p, double s) {
    return besov_norm_general(decomp, p, p, s);
}

double besov_norm_2d(const WaveletDecomp2D& decomp, double p, double s) {
    return besov_norm_general(decomp, p, p, s);
}

double besov_seq_norm_linear(std::span<const double> coeffs, double p, double s, int d) {
    if (p < 1.0) throw std::invalid_argument("besov_seq_norm_linear: p must be >= 1");
    if (d != 1 && d != 2) throw std::invalid_argument("besov_seq_norm_linear: d must be 1 or 2");
    const double expo = p * s / d + 0.5 * p - 1.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        const double l = static_cast<double>(i + 1);
        acc += std::pow(l, expo) * std::pow(std::abs(coeffs[i]), p);
    }
    return std::pow(acc, 1.0 / p);
}

double cm_inner_product(const WaveletDecomp2D& u, const WaveletDecomp2D& v, double s) {
    double acc = u.w0() * v.w0();
    const int depth = std::min(u.depth(), v.depth());
    for (int j = 0; j < depth; ++j) {
        const double w = std::pow(4.0, j * s);
        double lvl = 0.0;
        const std::size_t half = std::size_t{1} << j;
        for (int m = 0; m < 3; ++m)
            for (std::size_t k = 0; k < half; ++k)
                for (std::size_t n = 0; n < half; ++n)
                    lvl += u.detail(j, m, k, n) * v.detail(j, m, k, n);
        acc += w * lvl;
    }
    return acc;
}

WaveletDecomp2D cm_gradient(const WaveletDecomp2D& u, double s) {
    WaveletDecomp2D out(u.depth());
    out.w0() = u.w0();
    for (int j = 0; j < u.depth(); ++j) {
        const double w = std::pow(4.0, j * s);
        const std::size_t half = std::size_t{1} << j;
        for (int m = 0; m < 3; ++m)
            for (std::size_t k = 0; k < half; ++k)
                for (std::size_t n = 0; n < half; ++n)
                    out.detail(j, m, k, n) = w * u.detail(j, m, k, n);
    }
    return out;
}

std::vector<double> cm_weights(int depth, double s) {
    std::vector<double> w((std::size_t{1} << depth) * (std::size_t{1} << depth), 1.0);
    for (std::size_t l = 1; l < w.size(); ++l)
        w[l] = std::pow(4.0, inverse_linear_index_2d(l).j * s);
    return w;
}

std::vector<double> besov1_weights(int depth, double s) {
    std::vector<double> w((std::size_t{1} << depth) * (std::size_t{1} << depth), 1.0);
    for (std::size_t l = 1; l < w.size(); ++l)
        w[l] = std::exp2(inverse_linear_index_2d(l).j * (s - 1.0));
    return w;
}

}  // namespace wavemap
