// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavemap/gradient.hpp"
#include "wavemap/optimize.hpp"
#include "wavemap/prior.hpp"

namespace wavemap {

/// Configuration errors name the offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ObsGridSpec {
    double lo = 0.05;
    double hi = 0.95;
    int count = 7;  // per side
};

struct ExperimentConfig {
    // discretization
    int n_solver = 7;
    int j_max = 5;   // wavelet depth: 4^j_max parameters
    int k_max = 16;  // trig cutoff: (2 k_max + 1)^2 parameters
    bool allow_inverse_crime = false;

    // priors
    double prior_s = 1.5;
    double prior_kappa = 1.0;
    double trig_beta = 2.0;
    double trig_alpha = 0.5;

    // observations
    ObsGridSpec obs;
    double gamma = 1.0;
    bool zero_noise = false;

    // gradient-descent MAP runs
    double gd_alpha = 2e-4;
    int gd_max_backtracks = 40;
    long iter_budget = 600;
    double time_budget_s = 120.0;
    double grad_tol = 0.0;
    long descent_check_every = 25;

    // sparse (B_1^s) run
    double sparse_s = 0.5;
    double sparse_scale = 1.0;
    long fista_iters = 400;
    double fista_step = 1.0;

    // io
    std::string outdir = "out";
    std::uint64_t seed = 42;
    bool write_images = true;

    void validate() const;
};

/// CI-scale settings: 32x32 solver grid, 64 wavelet / 81 trig parameters.
ExperimentConfig fast_profile();

/// Key-value assignment using "section.key" names from the config file
/// schema; throws ConfigError for unknown keys or unparsable values.
void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

/// Flat INI-style file: [section] headers, key = value lines, '#' comments.
ExperimentConfig load_config_file(const std::string& path);

// The reconstruction scenario: log-permeability with a smooth trend, an
// annulus arc and a narrow deep strip; three disk sources; Dirichlet-0 on
// x = 0, zero Neumann elsewhere; 7x7 interior observation grid.
GridField build_ground_truth(int n_solver);
GridField build_sources(int n_solver);

/// Truth pressure at the configured solver resolution.
GridField solve_truth_pressure(const ExperimentConfig& cfg);

/// Observation points on the configured grid, values sampled from the truth
/// pressure plus gamma-scaled Gaussian noise (rng-driven, reproducible).
/// Warns on stderr when a point coincides with a solver node.
ObservationSet build_observations(const ExperimentConfig& cfg,
                                  const GridField& truth_pressure, Rng& rng);

std::string run_name(BasisKind basis, GradientMethod method);

struct MapRunResult {
    std::string name;
    OptResult opt;
    EvalCounters counters;
    double wall_s = 0.0;
    double gradient_s_total = 0.0;
    long gradient_calls = 0;
    bool failed = false;        // descent-direction failure recorded
    std::string failure_note;
    std::vector<double> coeffs;
    GridField field;            // final log-permeability on the solver grid

    double per_gradient_s() const {
        return gradient_calls > 0 ? gradient_s_total / double(gradient_calls) : 0.0;
    }
    double final_objective() const { return opt.final_parts.total; }
};

/// Shared data pipeline: same seed gives every run identical observations.
MisfitContext build_context(const ExperimentConfig& cfg, BasisKind basis);

MapRunResult run_map(const ExperimentConfig& cfg, BasisKind basis, GradientMethod method);

struct ComparisonReport {
    std::vector<MapRunResult> runs;  // wavelet m1, wavelet m2, fourier m1, fourier m2
};

/// The four-way comparison under a shared iteration/time budget; individual
/// failures are recorded in the report, never abort the batch.
ComparisonReport run_comparison(const ExperimentConfig& cfg);

struct SparseRunResult {
    MapRunResult run;
    long zero_count = 0;                    // |w| < 1e-8
    std::vector<double> sorted_magnitudes;  // descending
};

/// FISTA MAP with the weighted-l1 B_1^s penalty (misfit gradient by the
/// fast transform).
SparseRunResult run_sparse(const ExperimentConfig& cfg);

// output writers (17 significant digits, value columns deterministic)
void write_trace_csv(const OptResult& result, const std::string& path,
                     const std::string& norm_label = "cm_norm");
void write_summary_csv(const ComparisonReport& report, const std::string& path);
void write_wavelet_coeff_csv(std::span<const double> coeffs, const std::string& path);
void write_fourier_coeff_csv(std::span<const double> coeffs, const Parameterization& par,
                             const std::string& path);

}  // namespace wavemap
