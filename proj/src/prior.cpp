// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#include "wavemap/prior.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wavemap {

void WaveletPriorSpec::validate() const {
    if (kappa <= 0.0) throw std::invalid_argument("WaveletPriorSpec: kappa must be > 0");
    if (p < 1.0) throw std::invalid_argument("WaveletPriorSpec: p must be >= 1");
    if (s <= 0.0) throw std::invalid_argument("WaveletPriorSpec: s must be > 0");
    if (j_max < 0) throw std::invalid_argument("WaveletPriorSpec: j_max must be >= 0");
}

void TrigPriorSpec::validate() const {
    if (beta <= 0.0) throw std::invalid_argument("TrigPriorSpec: beta must be > 0");
    if (k_max < 1) throw std::invalid_argument("TrigPriorSpec: k_max must be >= 1");
}

double sample_gg(double p, Rng& rng) {
    if (p < 1.0) throw std::invalid_argument("sample_gg: p must be >= 1");
    std::gamma_distribution<double> gamma(1.0 / p, 2.0);
    std::bernoulli_distribution flip(0.5);
    const double mag = std::pow(gamma(rng), 1.0 / p);
    return flip(rng) ? mag : -mag;
}

WaveletDecomp1D sample_wavelet_prior_1d(const WaveletPriorSpec& spec, Rng& rng) {
    spec.validate();
    WaveletDecomp1D out(spec.j_max + 1);
    const double amp = std::pow(spec.kappa, -1.0 / spec.p);
    for (int j = 0; j <= spec.j_max; ++j) {
        const double level = amp * std::exp2(-j * (spec.s + 0.5 - 1.0 / spec.p));
        const std::size_t half = std::size_t{1} << j;
        for (std::size_t k = 0; k < half; ++k)
            out.detail(j, k) = level * sample_gg(spec.p, rng);
    }
    return out;
}

WaveletDecomp2D sample_wavelet_prior_2d(const WaveletPriorSpec& spec, Rng& rng) {
    spec.validate();
    WaveletDecomp2D out(spec.j_max + 1);
    const double amp = std::pow(spec.kappa, -1.0 / spec.p);
    for (int j = 0; j <= spec.j_max; ++j) {
        const double level = amp * std::pow(4.0, -j * (0.5 * spec.s + 0.5 - 1.0 / spec.p));
        const std::size_t half = std::size_t{1} << j;
        for (int m = 0; m < 3; ++m)
            for (std::size_t k = 0; k < half; ++k)
                for (std::size_t n = 0; n < half; ++n)
                    out.detail(j, m, k, n) = level * sample_gg(spec.p, rng);
    }
    return out;
}

double trig_mode_sigma(const TrigPriorSpec& spec, int k, int l) {
    const double lam = 4.0 * std::numbers::pi * std::numbers::pi
                       * static_cast<double>(k * k + l * l);
    return std::sqrt(spec.beta) * std::pow(lam, -0.5 * spec.alpha);
}

GridField sample_trig_prior_2d(const TrigPriorSpec& spec, int grid_exponent, Rng& rng) {
    spec.validate();
    GridField out(grid_exponent, spec.mu);
    const std::size_t side = out.side();
    const double h = out.cell_width();
    std::normal_distribution<double> normal(0.0, 1.0);

    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> sx(side), cx(side), sy(side), cy(side);
    for (int k = 0; k <= spec.k_max; ++k) {
        for (int l = 0; l <= spec.k_max; ++l) {
            if (k == 0 && l == 0) continue;
            const double sigma = trig_mode_sigma(spec, k, l);
            const double a_ss = sigma * normal(rng);
            const double a_cs = sigma * normal(rng);
            const double a_sc = sigma * normal(rng);
            const double a_cc = sigma * normal(rng);
            for (std::size_t i = 0; i < side; ++i) {
                const double x = static_cast<double>(i) * h;
                sx[i] = std::sin(two_pi * k * x);
                cx[i] = std::cos(two_pi * k * x);
                sy[i] = std::sin(two_pi * l * x);
                cy[i] = std::cos(two_pi * l * x);
            }
            for (std::size_t i = 0; i < side; ++i)
                for (std::size_t j = 0; j < side; ++j)
                    out(i, j) += a_ss * sx[i] * sy[j] + a_cs * cx[i] * sy[j]
                               + a_sc * sx[i] * cy[j] + a_cc * cx[i] * cy[j];
        }
    }
    return out;
}

}  // namespace wavemap
