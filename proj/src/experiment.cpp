// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#include "wavemap/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "wavemap/besov.hpp"

namespace wavemap {

namespace {

constexpr double kLn10 = 2.302585092994046;  // 1 / log10(e)

using Clock = std::chrono::steady_clock;

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse '" + value + "' as number for " + key);
    }
}

long parse_long(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long v = std::stol(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config: cannot parse '" + value + "' as integer for " + key);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError("config: cannot parse '" + value + "' as bool for " + key);
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

void ExperimentConfig::validate() const {
    if (n_solver < 2 || n_solver > 12) throw ConfigError("config: experiment.n_solver out of range [2,12]");
    if (j_max < 0) throw ConfigError("config: experiment.j_max must be >= 0");
    if (k_max < 1) throw ConfigError("config: experiment.k_max must be >= 1");
    if (!allow_inverse_crime && n_solver < j_max + 2)
        throw ConfigError("config: experiment.n_solver violates the inverse-crime guard "
                          "(need n_solver >= j_max + 2 or experiment.allow_inverse_crime)");
    if ((1 << n_solver) < 2 * k_max)
        throw ConfigError("config: experiment.k_max not resolvable on the solver grid");
    if (prior_s <= 0.0) throw ConfigError("config: prior.s must be > 0");
    if (prior_kappa <= 0.0) throw ConfigError("config: prior.kappa must be > 0");
    if (trig_beta <= 0.0) throw ConfigError("config: prior.trig_beta must be > 0");
    if (gamma <= 0.0) throw ConfigError("config: observations.gamma must be > 0");
    if (obs.count < 1) throw ConfigError("config: observations.count must be >= 1");
    if (obs.lo <= 0.0 || obs.hi >= 1.0 || obs.lo > obs.hi)
        throw ConfigError("config: observations grid must be strictly interior");
    if (gd_alpha <= 0.0) throw ConfigError("config: optimizer.gd_alpha must be > 0");
    if (gd_max_backtracks < 1) throw ConfigError("config: optimizer.gd_max_backtracks must be >= 1");
    if (iter_budget < 1) throw ConfigError("config: optimizer.iter_budget must be >= 1");
    if (time_budget_s <= 0.0) throw ConfigError("config: optimizer.time_budget_s must be > 0");
    if (sparse_s <= 0.0) throw ConfigError("config: sparse.s must be > 0");
    if (sparse_scale < 0.0) throw ConfigError("config: sparse.scale must be >= 0");
    if (fista_iters < 1) throw ConfigError("config: sparse.fista_iters must be >= 1");
    if (fista_step <= 0.0) throw ConfigError("config: sparse.fista_step must be > 0");
}

ExperimentConfig fast_profile() {
    ExperimentConfig cfg;
    cfg.n_solver = 5;
    cfg.j_max = 3;
    cfg.k_max = 4;
    cfg.iter_budget = 400;
    cfg.time_budget_s = 30.0;
    cfg.fista_iters = 200;
    return cfg;
}

void set_config_value(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "experiment.n_solver") cfg.n_solver = int(parse_long(key, value));
    else if (key == "experiment.j_max") cfg.j_max = int(parse_long(key, value));
    else if (key == "experiment.k_max") cfg.k_max = int(parse_long(key, value));
    else if (key == "experiment.allow_inverse_crime") cfg.allow_inverse_crime = parse_bool(key, value);
    else if (key == "experiment.seed") cfg.seed = std::uint64_t(parse_long(key, value));
    else if (key == "experiment.outdir") cfg.outdir = value;
    else if (key == "experiment.write_images") cfg.write_images = parse_bool(key, value);
    else if (key == "prior.s") cfg.prior_s = parse_double(key, value);
    else if (key == "prior.kappa") cfg.prior_kappa = parse_double(key, value);
    else if (key == "prior.trig_beta") cfg.trig_beta = parse_double(key, value);
    else if (key == "prior.trig_alpha") cfg.trig_alpha = parse_double(key, value);
    else if (key == "observations.gamma") cfg.gamma = parse_double(key, value);
    else if (key == "observations.zero_noise") cfg.zero_noise = parse_bool(key, value);
    else if (key == "observations.lo") cfg.obs.lo = parse_double(key, value);
    else if (key == "observations.hi") cfg.obs.hi = parse_double(key, value);
    else if (key == "observations.count") cfg.obs.count = int(parse_long(key, value));
    else if (key == "optimizer.gd_alpha") cfg.gd_alpha = parse_double(key, value);
    else if (key == "optimizer.gd_max_backtracks") cfg.gd_max_backtracks = int(parse_long(key, value));
    else if (key == "optimizer.iter_budget") cfg.iter_budget = parse_long(key, value);
    else if (key == "optimizer.time_budget_s") cfg.time_budget_s = parse_double(key, value);
    else if (key == "optimizer.grad_tol") cfg.grad_tol = parse_double(key, value);
    else if (key == "optimizer.descent_check_every") cfg.descent_check_every = parse_long(key, value);
    else if (key == "sparse.s") cfg.sparse_s = parse_double(key, value);
    else if (key == "sparse.scale") cfg.sparse_scale = parse_double(key, value);
    else if (key == "sparse.fista_iters") cfg.fista_iters = parse_long(key, value);
    else if (key == "sparse.fista_step") cfg.fista_step = parse_double(key, value);
    else throw ConfigError("config: unknown key '" + key + "'");
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("config: cannot open " + path);
    ExperimentConfig cfg;
    std::string line, section;
    long lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) + " of " + path +
                              " is not 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty())
            throw ConfigError("config: key '" + key + "' outside any [section] in " + path);
        set_config_value(cfg, section + "." + key, value);
    }
    return cfg;
}

GridField build_ground_truth(int n_solver) {
    GridField out(n_solver);
    const double h = out.cell_width();
    for (std::size_t k = 0; k < out.side(); ++k) {
        for (std::size_t n = 0; n < out.side(); ++n) {
            const double x = double(k) * h, y = double(n) * h;
            const double rr = (x - 1.0) * (x - 1.0) + y * y;
            const bool arc = x <= 0.85 && rr > 0.55 * 0.55 && rr < 0.65 * 0.65;
            const bool strip = x > 0.4375 && x < 0.5 && y > 0.625;
            if (arc && strip)
                throw std::logic_error("build_ground_truth: case regions overlap");
            double v = 0.5 * kLn10 * std::sin(4.0 * x);
            if (strip) v += -4.0 * kLn10;
            else if (arc) v += -2.0 * kLn10;
            out(k, n) = v;
        }
    }
    return out;
}

GridField build_sources(int n_solver) {
    GridField out(n_solver);
    const double h = out.cell_width();
    const struct { double x, y, value; } disks[3] = {
        {0.6, 0.85, -2000.0}, {0.2, 0.75, 2000.0}, {0.8, 0.2, -2000.0}};
    for (std::size_t k = 0; k < out.side(); ++k) {
        for (std::size_t n = 0; n < out.side(); ++n) {
            const double x = (double(k) + 0.5) * h, y = (double(n) + 0.5) * h;
            double v = 0.0;
            for (const auto& d : disks) {
                const double dx = x - d.x, dy = y - d.y;
                if (dx * dx + dy * dy < 0.1 * 0.1) v += d.value;
            }
            out(k, n) = v;
        }
    }
    return out;
}

GridField solve_truth_pressure(const ExperimentConfig& cfg) {
    EllipticProblem prob{build_ground_truth(cfg.n_solver), build_sources(cfg.n_solver),
                         {}, BoundarySpec::dirichlet_left()};
    return solve_forward(prob);
}

ObservationSet build_observations(const ExperimentConfig& cfg,
                                  const GridField& truth_pressure, Rng& rng) {
    ObservationSet obs;
    obs.gamma = cfg.gamma;
    const int c = cfg.obs.count;
    const double step = c > 1 ? (cfg.obs.hi - cfg.obs.lo) / double(c - 1) : 0.0;
    const double nodes = std::exp2(cfg.n_solver);
    for (int i = 0; i < c; ++i) {
        for (int j = 0; j < c; ++j) {
            const double x = cfg.obs.lo + step * i;
            const double y = cfg.obs.lo + step * j;
            obs.points.push_back({x, y});
            const double fx = x * nodes, fy = y * nodes;
            if (fx == std::floor(fx) && fy == std::floor(fy))
                std::cerr << "warning: observation point (" << x << ", " << y
                          << ") coincides with a solver node\n";
        }
    }
    obs.values = observe(truth_pressure, obs.points);
    if (!cfg.zero_noise) {
        std::normal_distribution<double> noise(0.0, cfg.gamma);
        for (double& v : obs.values) v += noise(rng);
    }
    return obs;
}

std::string run_name(BasisKind basis, GradientMethod method) {
    std::string name = basis == BasisKind::wavelet ? "wavelet" : "fourier";
    name += method == GradientMethod::basis_integrals ? "_m1" : "_m2";
    return name;
}

MisfitContext build_context(const ExperimentConfig& cfg, BasisKind basis) {
    cfg.validate();
    Rng rng(cfg.seed);
    const GridField pressure = solve_truth_pressure(cfg);
    ObservationSet obs = build_observations(cfg, pressure, rng);
    auto par = basis == BasisKind::wavelet ? Parameterization::wavelet(cfg.j_max)
                                           : Parameterization::fourier(cfg.k_max);
    return MisfitContext(build_sources(cfg.n_solver), BoundarySpec::dirichlet_left(),
                         cfg.n_solver, std::move(obs), std::move(par),
                         cfg.allow_inverse_crime);
}

MapRunResult run_map(const ExperimentConfig& cfg, BasisKind basis, GradientMethod method) {
    MapRunResult out;
    out.name = run_name(basis, method);

    const MisfitContext ctx = build_context(cfg, basis);
    const QuadraticPenalty pen =
        basis == BasisKind::wavelet
            ? wavelet_cm_penalty(cfg.j_max, cfg.prior_s, cfg.prior_kappa)
            : fourier_cm_penalty(cfg.k_max, cfg.trig_beta, cfg.trig_alpha);

    ObjectiveFn objective = [&](std::span<const double> u) { return ctx.objective(u, pen); };
    GradientFn gradient = [&](std::span<const double> u) {
        const auto t0 = Clock::now();
        auto g = ctx.grad_objective(u, pen, method);
        out.gradient_s_total += std::chrono::duration<double>(Clock::now() - t0).count();
        ++out.gradient_calls;
        return g;
    };

    GdConfig gd;
    gd.alpha = cfg.gd_alpha;
    gd.max_backtracks = cfg.gd_max_backtracks;
    gd.max_iters = cfg.iter_budget;
    gd.grad_tol = cfg.grad_tol;
    gd.time_budget_s = cfg.time_budget_s;
    gd.descent_check_every = cfg.descent_check_every;

    std::vector<double> u0(ctx.param_count(), 0.0);
    const auto t0 = Clock::now();
    out.opt = gd_backtracking(objective, gradient, std::move(u0), gd);
    out.wall_s = std::chrono::duration<double>(Clock::now() - t0).count();

    out.counters = ctx.counters();
    out.failed = out.opt.stop == StopReason::descent_failure;
    if (out.failed)
        out.failure_note = "descent check failed at iteration " +
                           std::to_string(out.opt.descent_failure_iter);
    out.coeffs = out.opt.u;
    out.field = ctx.coeff_to_field(out.coeffs);
    return out;
}

ComparisonReport run_comparison(const ExperimentConfig& cfg) {
    ComparisonReport report;
    const std::pair<BasisKind, GradientMethod> runs[4] = {
        {BasisKind::wavelet, GradientMethod::basis_integrals},
        {BasisKind::wavelet, GradientMethod::fast_transform},
        {BasisKind::fourier, GradientMethod::basis_integrals},
        {BasisKind::fourier, GradientMethod::fast_transform},
    };
    for (const auto& [basis, method] : runs) {
        try {
            report.runs.push_back(run_map(cfg, basis, method));
        } catch (const std::exception& e) {
            MapRunResult failed;
            failed.name = run_name(basis, method);
            failed.failed = true;
            failed.failure_note = e.what();
            report.runs.push_back(std::move(failed));
        }
    }
    return report;
}

SparseRunResult run_sparse(const ExperimentConfig& cfg) {
    SparseRunResult out;
    out.run.name = "wavelet_fista_b1";

    const MisfitContext ctx = build_context(cfg, BasisKind::wavelet);
    std::vector<double> weights = besov1_weights(cfg.j_max, cfg.sparse_s);
    for (double& w : weights) w *= cfg.sparse_scale;

    SmoothFn smooth = [&](std::span<const double> u, std::vector<double>* grad) {
        if (grad) {
            const auto t0 = Clock::now();
            *grad = ctx.grad_misfit(u, GradientMethod::fast_transform);
            out.run.gradient_s_total +=
                std::chrono::duration<double>(Clock::now() - t0).count();
            ++out.run.gradient_calls;
            return ctx.misfit(u);
        }
        return ctx.misfit(u);
    };

    FistaConfig fista_cfg;
    fista_cfg.step = cfg.fista_step;
    fista_cfg.max_iters = cfg.fista_iters;
    fista_cfg.time_budget_s = cfg.time_budget_s;

    std::vector<double> u0(ctx.param_count(), 0.0);
    const auto t0 = Clock::now();
    out.run.opt = fista(smooth, weights, std::move(u0), fista_cfg);
    out.run.wall_s = std::chrono::duration<double>(Clock::now() - t0).count();
    out.run.counters = ctx.counters();
    out.run.coeffs = out.run.opt.u;
    out.run.field = ctx.coeff_to_field(out.run.coeffs);

    out.sorted_magnitudes.reserve(out.run.coeffs.size());
    for (double v : out.run.coeffs) out.sorted_magnitudes.push_back(std::abs(v));
    std::sort(out.sorted_magnitudes.rbegin(), out.sorted_magnitudes.rend());
    out.zero_count = std::count_if(out.run.coeffs.begin(), out.run.coeffs.end(),
                                   [](double v) { return std::abs(v) < 1e-8; });
    return out;
}

void write_trace_csv(const OptResult& result, const std::string& path,
                     const std::string& norm_label) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_trace_csv: cannot open " + path);
    os.precision(17);
    os << "iter,time_s,I,Phi," << norm_label << ",grad_norm,backtracks\n";
    for (const auto& row : result.trace)
        os << row.iter << ',' << row.time_s << ',' << row.objective << ',' << row.misfit
           << ',' << row.prior_norm << ',' << row.grad_norm << ',' << row.backtracks << '\n';
    os << "# stop_reason," << to_string(result.stop) << '\n';
}

void write_summary_csv(const ComparisonReport& report, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_summary_csv: cannot open " + path);
    os.precision(17);
    os << "run,status,final_I,final_Phi,final_norm,iterations,pde_solves,"
          "gradient_evals,solves_per_gradient,quadratures,fast_transforms,"
          "wall_s,per_gradient_s,stop_reason\n";
    for (const auto& r : report.runs) {
        const long grads = r.counters.gradient_evals;
        const double solves_per_grad = grads > 0 ? 2.0 : 0.0;  // by construction
        os << r.name << ',' << (r.failed ? "failed" : "ok") << ',' << r.final_objective()
           << ',' << r.opt.final_parts.misfit << ',' << r.opt.final_parts.prior_norm << ','
           << (r.opt.trace.empty() ? 0 : r.opt.trace.back().iter) << ','
           << r.counters.pde_solves << ',' << grads << ',' << solves_per_grad << ','
           << r.counters.quadratures << ',' << r.counters.fast_transforms << ',' << r.wall_s
           << ',' << r.per_gradient_s() << ',' << to_string(r.opt.stop) << '\n';
    }
}

void write_wavelet_coeff_csv(std::span<const double> coeffs, const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_wavelet_coeff_csv: cannot open " + path);
    os.precision(17);
    os << "l,j,m,k,n,value\n";
    for (std::size_t l = 0; l < coeffs.size(); ++l) {
        if (l == 0) {
            os << "0,-1,-1,0,0," << coeffs[0] << '\n';
        } else {
            const auto idx = inverse_linear_index_2d(l);
            os << l << ',' << idx.j << ',' << idx.m << ',' << idx.k << ',' << idx.n << ','
               << coeffs[l] << '\n';
        }
    }
}

void write_fourier_coeff_csv(std::span<const double> coeffs, const Parameterization& par,
                             const std::string& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("write_fourier_coeff_csv: cannot open " + path);
    os.precision(17);
    os << "idx,k,l,type,value\n";
    static const char* names[4] = {"ss", "cs", "sc", "cc"};
    for (std::size_t t = 0; t < coeffs.size(); ++t) {
        const auto& md = par.modes()[t];
        os << t << ',' << md.k << ',' << md.l << ',' << names[md.type] << ',' << coeffs[t]
           << '\n';
    }
}

}  // namespace wavemap
