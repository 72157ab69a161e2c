// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#include "wavemap/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace wavemap {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_s(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

}  // namespace

const char* to_string(StopReason r) {
    switch (r) {
        case StopReason::grad_tol: return "grad_tol";
        case StopReason::max_iters: return "max_iters";
        case StopReason::backtracks_exhausted: return "backtracks_exhausted";
        case StopReason::time_budget: return "time_budget";
        case StopReason::descent_failure: return "descent_failure";
        case StopReason::step_collapse: return "step_collapse";
    }
    return "unknown";
}

OptResult gd_backtracking(const ObjectiveFn& objective, const GradientFn& gradient,
                          std::vector<double> u0, const GdConfig& cfg) {
    if (cfg.alpha <= 0.0) throw std::invalid_argument("gd_backtracking: alpha must be > 0");
    const auto start = Clock::now();

    OptResult res;
    res.u = std::move(u0);
    ObjParts parts = objective(res.u);
    int used_backtracks = 0;

    auto descent_probe = [&](const std::vector<double>& g, double gn) {
        const double eps = cfg.descent_probe_eps * std::max(1.0, norm2(res.u));
        std::vector<double> up(res.u), dn(res.u);
        for (std::size_t i = 0; i < res.u.size(); ++i) {
            up[i] -= eps * g[i] / gn;
            dn[i] += eps * g[i] / gn;
        }
        return (objective(up).total - objective(dn).total) / (2.0 * eps);
    };

    for (long iter = 0;; ++iter) {
        const std::vector<double> g = gradient(res.u);
        const double gn = norm2(g);
        res.trace.push_back({iter, elapsed_s(start), parts.total, parts.misfit,
                             parts.prior_norm, gn, used_backtracks});

        if (gn <= cfg.grad_tol) {
            res.stop = StopReason::grad_tol;
            break;
        }
        if (iter >= cfg.max_iters) {
            res.stop = StopReason::max_iters;
            break;
        }
        if (elapsed_s(start) > cfg.time_budget_s) {
            res.stop = StopReason::time_budget;
            break;
        }
        if (cfg.descent_check_every > 0 && iter % cfg.descent_check_every == 0 &&
            descent_probe(g, gn) >= 0.0) {
            res.stop = StopReason::descent_failure;
            res.descent_failure_iter = iter;
            break;
        }

        const double required = parts.total - 0.5 * cfg.alpha * gn;
        bool accepted = false;
        std::vector<double> trial(res.u.size());
        ObjParts trial_parts;
        for (int n = 0; n <= cfg.max_backtracks; ++n) {
            const double step = cfg.alpha / std::exp2(n);
            for (std::size_t i = 0; i < res.u.size(); ++i)
                trial[i] = res.u[i] - step * g[i];
            trial_parts = objective(trial);
            if (trial_parts.total < required) {
                accepted = true;
                used_backtracks = n;
                break;
            }
        }

        if (!accepted) {
            // distinguish a stall of the printed rule from a non-descent
            // direction
            if (descent_probe(g, gn) >= 0.0) {
                res.stop = StopReason::descent_failure;
                res.descent_failure_iter = iter;
            } else {
                res.stop = StopReason::backtracks_exhausted;
            }
            break;
        }

        res.u.swap(trial);
        parts = trial_parts;
    }

    res.final_parts = parts;
    return res;
}

bool gd_trace_satisfies_rule(const OptResult& result, double alpha) {
    for (std::size_t k = 1; k < result.trace.size(); ++k) {
        const auto& prev = result.trace[k - 1];
        const auto& cur = result.trace[k];
        if (!(cur.objective < prev.objective - 0.5 * alpha * prev.grad_norm)) return false;
    }
    return true;
}

double soft_threshold(double x, double t) {
    if (x > t) return x - t;
    if (x < -t) return x + t;
    return 0.0;
}

OptResult fista(const SmoothFn& smooth, std::span<const double> l1_weights,
                std::vector<double> u0, const FistaConfig& cfg) {
    if (cfg.step <= 0.0) throw std::invalid_argument("fista: step must be > 0");
    const auto start = Clock::now();
    const std::size_t dim = u0.size();
    if (l1_weights.size() != dim) throw std::invalid_argument("fista: weight size mismatch");

    auto penalty = [&](std::span<const double> x) {
        double s = 0.0;
        for (std::size_t i = 0; i < dim; ++i) s += l1_weights[i] * std::abs(x[i]);
        return s;
    };

    OptResult res;
    res.u = std::move(u0);
    std::vector<double> x_prev = res.u;
    std::vector<double> y = res.u;
    std::vector<double> g(dim), x_new(dim);

    double t_mom = 1.0;
    double tau = cfg.step;
    double f_x = smooth(res.u, nullptr);
    double obj = f_x + penalty(res.u);

    for (long iter = 0;; ++iter) {
        const double f_y = smooth(y, &g);
        const double gn = norm2(g);
        res.trace.push_back({iter, elapsed_s(start), obj, f_x, penalty(res.u), gn, 0});

        if (iter >= cfg.max_iters) {
            res.stop = StopReason::max_iters;
            break;
        }
        if (elapsed_s(start) > cfg.time_budget_s) {
            res.stop = StopReason::time_budget;
            break;
        }

        // proximal step with majorization backtracking
        int halvings = 0;
        double f_new = 0.0;
        while (true) {
            for (std::size_t i = 0; i < dim; ++i)
                x_new[i] = soft_threshold(y[i] - tau * g[i], tau * l1_weights[i]);
            f_new = smooth(x_new, nullptr);
            double lin = f_y, sq = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                const double d = x_new[i] - y[i];
                lin += g[i] * d;
                sq += d * d;
            }
            if (!cfg.backtrack || f_new <= lin + sq / (2.0 * tau) + 1e-15 * std::abs(f_y))
                break;
            tau *= 0.5;
            ++halvings;
            if (tau < 1e-18) {
                res.stop = StopReason::step_collapse;
                res.final_parts = {obj, f_x, penalty(res.u)};
                return res;
            }
        }
        res.trace.back().backtracks = halvings;

        const double obj_new = f_new + penalty(x_new);
        if (obj_new > obj) {
            // restart: drop momentum and retake the step from the current
            // iterate; the majorized prox step from x cannot increase
            t_mom = 1.0;
            y = res.u;
            continue;
        }

        x_prev = res.u;
        res.u = x_new;
        f_x = f_new;
        const double rel_change = std::abs(obj - obj_new) / std::max(1.0, std::abs(obj));
        obj = obj_new;

        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_mom * t_mom));
        const double mix = (t_mom - 1.0) / t_next;
        for (std::size_t i = 0; i < dim; ++i)
            y[i] = res.u[i] + mix * (res.u[i] - x_prev[i]);
        t_mom = t_next;
        tau *= cfg.step_growth;

        if (cfg.tol > 0.0 && rel_change < cfg.tol) {
            res.trace.push_back({res.trace.back().iter + 1, elapsed_s(start), obj, f_x,
                                 penalty(res.u), gn, halvings});
            res.stop = StopReason::grad_tol;
            break;
        }
    }

    res.final_parts = {obj, f_x, penalty(res.u)};
    return res;
}

OptResult lbfgs(const ObjectiveFn& objective, const GradientFn& gradient,
                std::vector<double> u0, const LbfgsConfig& cfg) {
    const auto start = Clock::now();
    const std::size_t dim = u0.size();

    OptResult res;
    res.u = std::move(u0);
    ObjParts parts = objective(res.u);
    std::vector<double> g = gradient(res.u);

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;

    int used_backtracks = 0;
    for (long iter = 0;; ++iter) {
        const double gn = norm2(g);
        res.trace.push_back({iter, elapsed_s(start), parts.total, parts.misfit,
                             parts.prior_norm, gn, used_backtracks});
        if (gn <= cfg.grad_tol) {
            res.stop = StopReason::grad_tol;
            break;
        }
        if (iter >= cfg.max_iters) {
            res.stop = StopReason::max_iters;
            break;
        }
        if (elapsed_s(start) > cfg.time_budget_s) {
            res.stop = StopReason::time_budget;
            break;
        }

        // two-loop recursion
        std::vector<double> d = g;
        std::vector<double> alpha(s_hist.size());
        for (std::size_t i = s_hist.size(); i-- > 0;) {
            alpha[i] = rho_hist[i] * dot(s_hist[i], d);
            for (std::size_t j = 0; j < dim; ++j) d[j] -= alpha[i] * y_hist[i][j];
        }
        if (!s_hist.empty()) {
            const double gamma =
                dot(s_hist.back(), y_hist.back()) / dot(y_hist.back(), y_hist.back());
            for (double& v : d) v *= gamma;
        }
        for (std::size_t i = 0; i < s_hist.size(); ++i) {
            const double beta = rho_hist[i] * dot(y_hist[i], d);
            for (std::size_t j = 0; j < dim; ++j) d[j] += (alpha[i] - beta) * s_hist[i][j];
        }
        for (double& v : d) v = -v;
        double slope = dot(g, d);
        if (slope >= 0.0) {  // fall back to steepest descent
            for (std::size_t j = 0; j < dim; ++j) d[j] = -g[j];
            slope = -gn * gn;
        }

        // Armijo backtracking
        double step = 1.0;
        bool accepted = false;
        std::vector<double> trial(dim);
        ObjParts trial_parts;
        for (int n = 0; n <= cfg.max_backtracks; ++n) {
            for (std::size_t j = 0; j < dim; ++j) trial[j] = res.u[j] + step * d[j];
            trial_parts = objective(trial);
            if (trial_parts.total <= parts.total + 1e-4 * step * slope) {
                accepted = true;
                used_backtracks = n;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            res.stop = StopReason::backtracks_exhausted;
            break;
        }

        std::vector<double> g_new = gradient(trial);
        std::vector<double> s(dim), yv(dim);
        for (std::size_t j = 0; j < dim; ++j) {
            s[j] = trial[j] - res.u[j];
            yv[j] = g_new[j] - g[j];
        }
        const double sy = dot(s, yv);
        if (sy > 1e-12 * norm2(s) * norm2(yv)) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(yv));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > cfg.memory) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }
        res.u.swap(trial);
        parts = trial_parts;
        g.swap(g_new);
    }

    res.final_parts = parts;
    return res;
}

}  // namespace wavemap
