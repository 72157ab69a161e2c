// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "wavemap/gradient.hpp"

namespace wavemap {

using ObjectiveFn = std::function<ObjParts(std::span<const double>)>;
using GradientFn = std::function<std::vector<double>(std::span<const double>)>;
/// Smooth part for FISTA; fills *grad when non-null.
using SmoothFn = std::function<double(std::span<const double>, std::vector<double>*)>;

enum class StopReason {
    grad_tol,
    max_iters,
    backtracks_exhausted,
    time_budget,
    descent_failure,
    step_collapse,
};

const char* to_string(StopReason r);

struct TraceRow {
    long iter = 0;
    double time_s = 0.0;
    double objective = 0.0;
    double misfit = 0.0;
    double prior_norm = 0.0;
    double grad_norm = 0.0;
    int backtracks = 0;
};

struct OptResult {
    std::vector<double> u;
    ObjParts final_parts;
    std::vector<TraceRow> trace;
    StopReason stop = StopReason::max_iters;
    long descent_failure_iter = -1;  // iteration where the probe found non-descent
};

// Gradient descent with the backstepping rule u_{k+1} = u_k - (alpha/2^N) g,
// N the smallest integer with I(u_{k+1}) < I(u_k) - (alpha/2) ||g||.  The
// right-hand side deliberately uses the unscaled alpha and the plain norm;
// when no N up to max_backtracks satisfies it, a central-difference probe
// along -g decides between a step-rule stall and a genuine non-descent
// direction.
struct GdConfig {
    double alpha = 1.0;
    int max_backtracks = 40;
    long max_iters = 1000;
    double grad_tol = 0.0;
    double time_budget_s = std::numeric_limits<double>::infinity();
    double descent_probe_eps = 1e-6;
    // probe -g by central differences every N iterations (0 = only when
    // backtracking is exhausted); a non-negative derivative stops the run
    // with descent_failure
    long descent_check_every = 0;
};

OptResult gd_backtracking(const ObjectiveFn& objective, const GradientFn& gradient,
                          std::vector<double> u0, const GdConfig& cfg);

/// Replays every acceptance inequality recorded in a gd_backtracking trace.
bool gd_trace_satisfies_rule(const OptResult& result, double alpha);

double soft_threshold(double x, double t);

// FISTA for smooth(x) + sum_l weights[l] |x_l|: proximal steps are
// per-coefficient soft thresholds, momentum t_{k+1} = (1+sqrt(1+4t^2))/2,
// with step backtracking against the quadratic majorizer and a restart
// (momentum reset) whenever the objective would increase.
struct FistaConfig {
    double step = 1.0;
    bool backtrack = true;
    double step_growth = 1.02;
    long max_iters = 500;
    double tol = 0.0;  // relative objective-change stop; 0 disables
    double time_budget_s = std::numeric_limits<double>::infinity();
};

OptResult fista(const SmoothFn& smooth, std::span<const double> l1_weights,
                std::vector<double> u0, const FistaConfig& cfg);

// Limited-memory BFGS with Armijo backtracking; same interface, not part of
// the acceptance gates.
struct LbfgsConfig {
    int memory = 8;
    long max_iters = 200;
    double grad_tol = 1e-10;
    int max_backtracks = 40;
    double time_budget_s = std::numeric_limits<double>::infinity();
};

OptResult lbfgs(const ObjectiveFn& objective, const GradientFn& gradient,
                std::vector<double> u0, const LbfgsConfig& cfg);

}  // namespace wavemap
