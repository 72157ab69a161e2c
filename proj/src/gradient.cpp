// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 wavemap contributors

#include "wavemap/gradient.hpp"

#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <stdexcept>

#include <fftw3.h>

#include "wavemap/besov.hpp"
#include "wavemap/prior.hpp"

namespace wavemap {

Parameterization Parameterization::wavelet(int j_max) {
    if (j_max < 0 || j_max > 10)
        throw std::invalid_argument("Parameterization: j_max out of range");
    Parameterization p;
    p.kind_ = BasisKind::wavelet;
    p.cut_ = j_max;
    return p;
}

Parameterization Parameterization::fourier(int k_max) {
    if (k_max < 1 || k_max > 128)
        throw std::invalid_argument("Parameterization: k_max out of range");
    Parameterization p;
    p.kind_ = BasisKind::fourier;
    p.cut_ = k_max;
    p.modes_.push_back({0, 0, 3});  // constant
    for (int k = 0; k <= k_max; ++k) {
        for (int l = 0; l <= k_max; ++l) {
            if (k == 0 && l == 0) continue;
            if (k > 0 && l > 0) p.modes_.push_back({k, l, 0});  // ss
            if (l > 0) p.modes_.push_back({k, l, 1});           // cs
            if (k > 0) p.modes_.push_back({k, l, 2});           // sc
            p.modes_.push_back({k, l, 3});                      // cc
        }
    }
    const std::size_t expect =
        std::size_t(2 * k_max + 1) * std::size_t(2 * k_max + 1);
    if (p.modes_.size() != expect)
        throw std::logic_error("Parameterization: fourier mode count mismatch");
    return p;
}

std::size_t Parameterization::size() const {
    if (kind_ == BasisKind::wavelet)
        return (std::size_t{1} << cut_) * (std::size_t{1} << cut_);
    return modes_.size();
}

double QuadraticPenalty::value(std::span<const double> c) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += weights[i] * c[i] * c[i];
    return 0.5 * scale * acc;
}

double QuadraticPenalty::norm(std::span<const double> c) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) acc += weights[i] * c[i] * c[i];
    return std::sqrt(acc);
}

void QuadraticPenalty::add_gradient(std::span<const double> c, std::span<double> g) const {
    for (std::size_t i = 0; i < c.size(); ++i) g[i] += scale * weights[i] * c[i];
}

QuadraticPenalty wavelet_cm_penalty(int j_max, double s, double kappa) {
    QuadraticPenalty pen;
    pen.weights = cm_weights(j_max, s);
    pen.scale = kappa;
    return pen;
}

QuadraticPenalty fourier_cm_penalty(int k_max, double beta, double alpha) {
    TrigPriorSpec spec;
    spec.beta = beta;
    spec.alpha = alpha;
    spec.k_max = k_max;
    const auto par = Parameterization::fourier(k_max);
    QuadraticPenalty pen;
    pen.weights.reserve(par.size());
    for (const auto& m : par.modes()) {
        if (m.k == 0 && m.l == 0) {
            pen.weights.push_back(0.0);  // flat on the constant mode
        } else {
            const double sigma = trig_mode_sigma(spec, m.k, m.l);
            pen.weights.push_back(1.0 / (sigma * sigma));
        }
    }
    return pen;
}

struct MisfitContext::Impl {
    GridField source;
    BoundarySpec bc;
    int n_solver = 0;
    ObservationSet obs;
    Parameterization par;

    // trig tables at cell centers, [k][i], shared by both axes
    std::vector<std::vector<double>> sin_tab, cos_tab;
    std::size_t fft_side = 0;  // transform grid for the fourier fast path
    fftw_plan fft_plan = nullptr;

    mutable std::mutex counter_mutex;
    mutable EvalCounters counters;

    ~Impl() {
        if (fft_plan) fftw_destroy_plan(fft_plan);
    }

    std::size_t side() const { return std::size_t{1} << n_solver; }

    struct Bundle {
        EllipticSolver solver;
        NodalField pressure;
        std::vector<double> residuals;
        double phi = 0.0;
    };

    Bundle forward(const GridField& log_perm) const {
        Bundle b{EllipticSolver(log_perm, bc), NodalField(), {}, 0.0};
        b.pressure = b.solver.solve_source(source);
        const auto vals = observe(b.pressure.restrict_to_cells(), obs.points);
        b.residuals.resize(vals.size());
        double acc = 0.0;
        for (std::size_t i = 0; i < vals.size(); ++i) {
            b.residuals[i] = obs.values[i] - vals[i];
            acc += b.residuals[i] * b.residuals[i];
        }
        b.phi = acc / (2.0 * obs.gamma * obs.gamma);
        return b;
    }

    // e^u grad(p) . grad(w~) per cell; w~ carries the residual/gamma^2 Dirac
    // loads so that h^2 * sum_c psi_l(c) q_c is the exact discrete gradient.
    GridField product_field(const Bundle& b, const GridField& log_perm) const {
        std::vector<double> lambda(b.residuals.size());
        for (std::size_t i = 0; i < lambda.size(); ++i)
            lambda[i] = b.residuals[i] / (obs.gamma * obs.gamma);
        const NodalField dual = b.solver.solve_points(obs.points, lambda);
        GridField q = grad_dot_field(b.pressure, dual);
        for (std::size_t c = 0; c < q.size(); ++c)
            q.values()[c] *= std::exp(log_perm.values()[c]);
        return q;
    }

    std::vector<double> project_wavelet_m1(const GridField& q) const;
    std::vector<double> project_wavelet_m2(const GridField& q) const;
    std::vector<double> project_fourier_m1(const GridField& q) const;
    std::vector<double> project_fourier_m2(const GridField& q) const;

    void bump(long solves, long factor, long quad, long fast, long mis, long grad) const {
        std::lock_guard<std::mutex> lock(counter_mutex);
        counters.pde_solves += solves;
        counters.factorizations += factor;
        counters.quadratures += quad;
        counters.fast_transforms += fast;
        counters.misfit_evals += mis;
        counters.gradient_evals += grad;
    }
};

// method 1, wavelet: one full-domain quadrature per basis function with
// psi_l evaluated pointwise per cell, the generic slow reference.  The
// integrand is piecewise constant, so each signed cell-sum is the exact
// integral; exploiting the wavelets' support structure is deliberately left
// to method 2.
std::vector<double> MisfitContext::Impl::project_wavelet_m1(const GridField& q) const {
    const std::size_t m_side = side();
    const double h = q.cell_width();
    const double h2 = h * h;
    std::vector<double> g(par.size(), 0.0);

    double acc0 = 0.0;
    for (double v : q.values()) acc0 += v;
    g[0] = h2 * acc0;

    for (std::size_t l = 1; l < g.size(); ++l) {
        const auto idx = inverse_linear_index_2d(l);
        double acc = 0.0;
        for (std::size_t ck = 0; ck < m_side; ++ck) {
            const double x = static_cast<double>(ck) * h;
            for (std::size_t cn = 0; cn < m_side; ++cn)
                acc += haar_psi_2d(idx.j, idx.m, idx.k, idx.n, x,
                                   static_cast<double>(cn) * h) *
                       q(ck, cn);
        }
        g[l] = h2 * acc;
    }
    return g;
}

std::vector<double> MisfitContext::Impl::project_wavelet_m2(const GridField& q) const {
    // orthonormal-convention transform coefficients equal the integrals
    // against the basis directly (conversion constant 1, pinned by the
    // method-1 agreement tests)
    const auto decomp = fwt2d(q);
    std::vector<double> g(par.size());
    for (std::size_t l = 0; l < g.size(); ++l) g[l] = decomp.coeffs()[l];
    return g;
}

std::vector<double> MisfitContext::Impl::project_fourier_m1(const GridField& q) const {
    const std::size_t m_side = side();
    const double h2 = q.cell_width() * q.cell_width();
    std::vector<double> g(par.size(), 0.0);
    for (std::size_t t = 0; t < par.modes().size(); ++t) {
        const auto& md = par.modes()[t];
        const auto& fx = (md.type == 0 || md.type == 2) ? sin_tab[md.k] : cos_tab[md.k];
        const auto& fy = (md.type == 0 || md.type == 1) ? sin_tab[md.l] : cos_tab[md.l];
        double acc = 0.0;
        for (std::size_t i = 0; i < m_side; ++i) {
            const double vx = fx[i];
            double row = 0.0;
            for (std::size_t j = 0; j < m_side; ++j) row += fy[j] * q(i, j);
            acc += vx * row;
        }
        g[t] = h2 * acc;
    }
    return g;
}

// method 2, fourier: fast transform at the parameterization's natural
// resolution, mirroring the wavelet path.  The product field is
// point-decimated onto the smallest power-of-two grid that resolves k_max
// and FFT'd there, reading coefficients off the low-frequency bins under a
// periodicity assumption.  Cell averages (the Haar path) are stable on L^2
// product fields; point samples are not, which is exactly what makes this
// path break down on irregular adjoint products.
std::vector<double> MisfitContext::Impl::project_fourier_m2(const GridField& q) const {
    const std::size_t t_side = fft_side;
    const std::size_t stride = side() / t_side;
    std::vector<double> in(t_side * t_side);
    for (std::size_t i = 0; i < t_side; ++i)
        for (std::size_t j = 0; j < t_side; ++j)
            in[i * t_side + j] = q(i * stride, j * stride);
    std::vector<std::complex<double>> out(t_side * (t_side / 2 + 1));
    fftw_execute_dft_r2c(fft_plan, in.data(), reinterpret_cast<fftw_complex*>(out.data()));

    const double inv = 1.0 / static_cast<double>(t_side * t_side);
    auto bin = [&](std::size_t a, std::size_t b) {
        return out[a * (t_side / 2 + 1) + b] * inv;
    };
    // F(k, l) for l >= 0 directly; F(k, -l) via conjugate symmetry
    std::vector<double> g(par.size(), 0.0);
    for (std::size_t t = 0; t < par.modes().size(); ++t) {
        const auto& md = par.modes()[t];
        const auto k = static_cast<std::size_t>(md.k);
        const auto l = static_cast<std::size_t>(md.l);
        const std::complex<double> f_pl = bin(k, l);
        const std::complex<double> f_mi = std::conj(bin((t_side - k) % t_side, l));
        const double c_pl = f_pl.real(), s_pl = -f_pl.imag();
        const double c_mi = f_mi.real(), s_mi = -f_mi.imag();
        switch (md.type) {
            case 0: g[t] = 0.5 * (c_mi - c_pl); break;
            case 1: g[t] = 0.5 * (s_pl - s_mi); break;
            case 2: g[t] = 0.5 * (s_pl + s_mi); break;
            default: g[t] = 0.5 * (c_mi + c_pl); break;
        }
    }
    return g;
}

MisfitContext::MisfitContext(GridField source, BoundarySpec bc, int solver_exponent,
                             ObservationSet obs, Parameterization par,
                             bool allow_inverse_crime)
    : impl_(std::make_unique<Impl>()) {
    bc.validate();
    obs.validate();
    if (source.exponent() != solver_exponent)
        throw std::invalid_argument("MisfitContext: source resolution mismatch");

    if (par.kind() == BasisKind::wavelet) {
        if (!allow_inverse_crime && solver_exponent < par.cut() + 2)
            throw std::invalid_argument(
                "MisfitContext: inverse-crime guard requires n_solver >= j_max + 2");
        if (solver_exponent < par.cut())
            throw std::invalid_argument("MisfitContext: solver grid coarser than the basis");
    } else {
        if ((std::size_t{1} << solver_exponent) < 2 * std::size_t(par.cut()))
            throw std::invalid_argument(
                "MisfitContext: solver grid cannot resolve k_max (need 2^N >= 2 k_max)");
    }

    impl_->source = std::move(source);
    impl_->bc = std::move(bc);
    impl_->n_solver = solver_exponent;
    impl_->obs = std::move(obs);
    impl_->par = std::move(par);

    if (impl_->par.kind() == BasisKind::fourier) {
        const std::size_t m_side = impl_->side();
        const double h = 1.0 / static_cast<double>(m_side);
        const double two_pi = 2.0 * std::numbers::pi;
        impl_->sin_tab.resize(impl_->par.cut() + 1);
        impl_->cos_tab.resize(impl_->par.cut() + 1);
        for (int k = 0; k <= impl_->par.cut(); ++k) {
            impl_->sin_tab[k].resize(m_side);
            impl_->cos_tab[k].resize(m_side);
            for (std::size_t i = 0; i < m_side; ++i) {
                const double x = (static_cast<double>(i) + 0.5) * h;
                impl_->sin_tab[k][i] = std::sin(two_pi * k * x);
                impl_->cos_tab[k][i] = std::cos(two_pi * k * x);
            }
        }
        std::size_t t_side = 2;
        while (t_side < 2 * std::size_t(impl_->par.cut()) + 1) t_side *= 2;
        impl_->fft_side = std::min(t_side, m_side);
        std::vector<double> dummy_in(impl_->fft_side * impl_->fft_side);
        std::vector<std::complex<double>> dummy_out(impl_->fft_side * (impl_->fft_side / 2 + 1));
        impl_->fft_plan = fftw_plan_dft_r2c_2d(
            static_cast<int>(impl_->fft_side), static_cast<int>(impl_->fft_side),
            dummy_in.data(), reinterpret_cast<fftw_complex*>(dummy_out.data()),
            FFTW_ESTIMATE | FFTW_UNALIGNED);
        if (!impl_->fft_plan) throw std::runtime_error("MisfitContext: fftw plan failed");
    }
}

MisfitContext::~MisfitContext() = default;
MisfitContext::MisfitContext(MisfitContext&&) noexcept = default;
MisfitContext& MisfitContext::operator=(MisfitContext&&) noexcept = default;

const Parameterization& MisfitContext::parameterization() const { return impl_->par; }
std::size_t MisfitContext::param_count() const { return impl_->par.size(); }
int MisfitContext::solver_exponent() const { return impl_->n_solver; }
const ObservationSet& MisfitContext::observations() const { return impl_->obs; }
const GridField& MisfitContext::source() const { return impl_->source; }
const BoundarySpec& MisfitContext::boundary() const { return impl_->bc; }

GridField MisfitContext::coeff_to_field(std::span<const double> coeffs) const {
    const auto& im = *impl_;
    if (coeffs.size() != im.par.size())
        throw std::invalid_argument("coeff_to_field: coefficient count mismatch");

    if (im.par.kind() == BasisKind::wavelet) {
        WaveletDecomp2D d(im.par.cut());
        for (std::size_t l = 0; l < coeffs.size(); ++l) d.coeffs()[l] = coeffs[l];
        const GridField coarse = iwt2d(d);
        GridField fine(im.n_solver);
        const int shift = im.n_solver - im.par.cut();
        for (std::size_t k = 0; k < fine.side(); ++k)
            for (std::size_t n = 0; n < fine.side(); ++n)
                fine(k, n) = coarse(k >> shift, n >> shift);
        return fine;
    }

    // separable accumulation: per x-frequency, combine the y-profiles first
    const std::size_t m_side = im.side();
    const int kmax = im.par.cut();
    std::vector<std::vector<double>> prof_sin(kmax + 1, std::vector<double>(m_side, 0.0));
    std::vector<std::vector<double>> prof_cos(kmax + 1, std::vector<double>(m_side, 0.0));
    for (std::size_t t = 0; t < im.par.modes().size(); ++t) {
        const auto& md = im.par.modes()[t];
        const double c = coeffs[t];
        if (c == 0.0) continue;
        const auto& fy = (md.type == 0 || md.type == 1) ? im.sin_tab[md.l] : im.cos_tab[md.l];
        auto& prof = (md.type == 0 || md.type == 2) ? prof_sin[md.k] : prof_cos[md.k];
        for (std::size_t j = 0; j < m_side; ++j) prof[j] += c * fy[j];
    }
    GridField fine(im.n_solver);
    for (int k = 0; k <= kmax; ++k) {
        for (std::size_t i = 0; i < m_side; ++i) {
            const double sx = im.sin_tab[k][i], cx = im.cos_tab[k][i];
            if (sx == 0.0 && cx == 0.0) continue;
            for (std::size_t j = 0; j < m_side; ++j)
                fine(i, j) += sx * prof_sin[k][j] + cx * prof_cos[k][j];
        }
    }
    return fine;
}

double MisfitContext::misfit(std::span<const double> coeffs) const {
    const auto b = impl_->forward(coeff_to_field(coeffs));
    impl_->bump(1, 1, 0, 0, 1, 0);
    return b.phi;
}

GridField MisfitContext::integrand(std::span<const double> coeffs) const {
    const GridField field = coeff_to_field(coeffs);
    auto b = impl_->forward(field);
    auto q = impl_->product_field(b, field);
    impl_->bump(2, 1, 0, 0, 0, 0);
    return q;
}

std::vector<double> MisfitContext::grad_misfit(std::span<const double> coeffs,
                                               GradientMethod method) const {
    const auto& im = *impl_;
    const GridField field = coeff_to_field(coeffs);
    auto b = im.forward(field);
    const GridField q = im.product_field(b, field);

    std::vector<double> g = project(q, method);
    im.bump(2, 1, 0, 0, 0, 1);
    return g;
}

std::vector<double> MisfitContext::project(const GridField& product,
                                           GradientMethod method) const {
    const auto& im = *impl_;
    if (product.exponent() != im.n_solver)
        throw std::invalid_argument("project: product field resolution mismatch");
    std::vector<double> g;
    if (im.par.kind() == BasisKind::wavelet) {
        g = method == GradientMethod::basis_integrals ? im.project_wavelet_m1(product)
                                                      : im.project_wavelet_m2(product);
    } else {
        g = method == GradientMethod::basis_integrals ? im.project_fourier_m1(product)
                                                      : im.project_fourier_m2(product);
    }
    const bool m1 = method == GradientMethod::basis_integrals;
    im.bump(0, 0, m1 ? static_cast<long>(im.par.size()) : 0, m1 ? 0 : 1, 0, 0);
    return g;
}

ObjParts MisfitContext::objective(std::span<const double> coeffs,
                                  const QuadraticPenalty& pen) const {
    ObjParts parts;
    parts.misfit = misfit(coeffs);
    parts.prior_norm = pen.norm(coeffs);
    parts.total = parts.misfit + pen.value(coeffs);
    return parts;
}

std::vector<double> MisfitContext::grad_objective(std::span<const double> coeffs,
                                                  const QuadraticPenalty& pen,
                                                  GradientMethod method) const {
    auto g = grad_misfit(coeffs, method);
    pen.add_gradient(coeffs, g);
    return g;
}

const EvalCounters& MisfitContext::counters() const { return impl_->counters; }

void MisfitContext::reset_counters() {
    std::lock_guard<std::mutex> lock(impl_->counter_mutex);
    impl_->counters = EvalCounters{};
}

}  // namespace wavemap
