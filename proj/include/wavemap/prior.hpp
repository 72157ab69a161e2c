// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#pragma once

#include <random>

#include "wavemap/grid_field.hpp"
#include "wavemap/wavelet.hpp"

namespace wavemap {

using Rng = std::mt19937_64;

/// (kappa, B_pp^s) wavelet prior.  j_max is the finest sampled level, so the
/// returned decomposition has depth j_max + 1 (levels 0..j_max); w0 stays 0.
struct WaveletPriorSpec {
    double kappa = 1.0;
    double p = 2.0;
    double s = 1.0;
    int j_max = 0;
    void validate() const;
};

/// N(mu, beta (-Laplace)^-alpha) prior on [0,1]^2, truncated at frequency
/// k_max per axis.  The constant mode is excluded from the randomized sum
/// and replaced by the deterministic mean mu.
struct TrigPriorSpec {
    double mu = 0.0;
    double beta = 1.0;
    double alpha = 1.0;
    int k_max = 1;
    void validate() const;
};

/// Draws from the generalized Gaussian density ~ exp(-|x|^p / 2) via
/// |X|^p ~ Gamma(1/p, 2) and a symmetric sign.
double sample_gg(double p, Rng& rng);

WaveletDecomp1D sample_wavelet_prior_1d(const WaveletPriorSpec& spec, Rng& rng);
WaveletDecomp2D sample_wavelet_prior_2d(const WaveletPriorSpec& spec, Rng& rng);

/// Mode standard deviation beta^{1/2} (4 pi^2 (k^2 + l^2))^{-alpha/2}.
double trig_mode_sigma(const TrigPriorSpec& spec, int k, int l);

/// Sample realized on the 2^N x 2^N grid (lower-left sampling convention).
GridField sample_trig_prior_2d(const TrigPriorSpec& spec, int grid_exponent, Rng& rng);

}  // namespace wavemap
