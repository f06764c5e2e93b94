#include "sbmtcl/bath_correlation.hpp"

#include <algorithm>
#include <cmath>

#include "sbmtcl/special_functions.hpp"

namespace sbmtcl {

namespace {

using quad::Complex;
using quad::QuadConfig;
using quad::TailEnvelope;

const DrudeSpectralDensity* as_drude(const SpectralDensity& sd) {
    return dynamic_cast<const DrudeSpectralDensity*>(&sd);
}

double drude_eta_closed(const DrudeParams& p, double t) {
    return -0.5 * M_PI * p.gamma * p.lambda_cut * p.lambda_cut * std::exp(-t * p.lambda_cut);
}

// Matsubara route for nu_D, resummed so that every piece converges for all
// t > 0:
//   nu_D(t) = pi g L e^{-Lt}/b
//           + (2 pi g L^2/b) [ -L e^{-Lt} (1 - (bL/2) cot(bL/2)) / (2 L^2)
//                              - sum_{n>=1} e^{-nu_n t} L^2/(nu_n (L^2-nu_n^2))
//                              - (b/2pi) log(1 - e^{-2 pi t / b}) ]
// The log term carries the integrable small-t singularity; the remaining sum
// decays like 1/n^3 and is accelerated.
double drude_nu_closed(const DrudeParams& p, double t, double beta) {
    const double g = p.gamma;
    const double L = p.lambda_cut;
    if (drude_matsubara_resonant(beta, L)) beta *= 1.0 + 1e-9;
    if (!(t > 0))
        throw NumericalError("nu: the Drude correlation diverges logarithmically at t = 0");

    const double head = M_PI * g * L * std::exp(-L * t) / beta;
    const double half_bl = 0.5 * beta * L;
    const double closed_sum = -L * std::exp(-L * t) * (1.0 - half_bl / std::tan(half_bl)) /
                              (2.0 * L * L);
    const double x = std::exp(-2.0 * M_PI * t / beta);
    const double log_term = (beta / (2.0 * M_PI)) * std::log1p(-x);

    auto term = [&](long n) -> double {
        if (n == 0) return 0.0;
        const double nu_n = 2.0 * M_PI * std::abs(static_cast<double>(n)) / beta;
        return 0.5 * std::exp(-nu_n * t) * L * L / (nu_n * (L * L - nu_n * nu_n));
    };
    const double tol = 1e-13 * std::max(1.0, M_PI * g * L / beta);
    const double rem = special::sum_matsubara(term, tol, 2);

    return head + (2.0 * M_PI * g * L * L / beta) * (closed_sum - rem - log_term);
}

bool conditional_tail(const TailEnvelope& env) {
    return env.kind == TailEnvelope::Kind::rational && env.power <= 1.0;
}

// Absolutely convergent oscillatory half-line integral: truncate via the
// envelope and integrate with half-period breakpoints.
double absolute_osc_integral(const quad::RealFn& g, double t, const SpectralDensity& sd,
                             double beta_for_envelope, const QuadConfig& cfg) {
    TailEnvelope env = sd.tail_envelope();
    if (beta_for_envelope > 0) {
        // coth(beta w/2) < 1 + 2/(beta w); bound it at the frequency scale
        const double bs = beta_for_envelope * sd.frequency_scale();
        env.coeff *= 1.0 + 2.0 / bs;
    }
    const double T =
        quad::truncation_point(env, cfg.abs_tol / cfg.tail_cutoff_factor, 20.0 * sd.frequency_scale());
    std::vector<double> breaks;
    if (t > 0) {
        const double half_period = M_PI / t;
        for (double x = half_period; x < T; x += half_period) breaks.push_back(x);
    }
    for (int i = 1; i < 40; ++i) breaks.push_back(i * sd.frequency_scale() / 4.0);
    auto r = quad::integrate(g, 0.0, T, cfg, breaks);
    return r.value.real();
}

} // namespace

bool drude_matsubara_resonant(double beta, double lambda_cut) {
    const double x = beta * lambda_cut / (2.0 * M_PI);
    const double n = std::round(x);
    return n >= 1.0 && std::abs(x - n) < 1e-9 * (x + 1.0);
}

std::complex<double> oscillatory_half_line(const quad::RealFn& amplitude, double t, double scale,
                                           double envelope_coeff, const QuadConfig& cfg) {
    if (!(t > 0)) throw ValidationError("oscillatory_half_line: t must be positive");
    if (!(scale > 0)) throw ValidationError("oscillatory_half_line: scale must be positive");

    const double target = std::max(cfg.abs_tol, 1e-11);
    double T = std::cbrt(std::max(envelope_coeff, 1e-6) / (target * t * t * t));
    T = std::clamp(T, 20.0 * scale, 3e7);

    std::vector<double> breaks;
    const double half_period = M_PI / t;
    breaks.reserve(static_cast<std::size_t>(T / half_period) + 128);
    for (double x = half_period; x < T; x += half_period) breaks.push_back(x);
    const double head_step = std::min(scale, T / 40.0) / 4.0;
    for (int i = 1; i < 80; ++i) breaks.push_back(i * head_step);

    QuadConfig inner = cfg;
    inner.max_subdivisions = std::max(cfg.max_subdivisions, 4000);

    const double h_fd = 1e-4 * scale;
    auto one_eps = [&](double eps) {
        const Complex z{-eps, t};
        quad::ComplexFn f = [&](double w) { return amplitude(w) * std::exp(z * w); };
        auto r = quad::integrate(f, 0.0, T, inner, breaks);
        const double aT = amplitude(T);
        const double apT = (amplitude(T + h_fd) - amplitude(T - h_fd)) / (2.0 * h_fd);
        const Complex tail = -std::exp(z * T) * (aT / z + apT / (z * z));
        return r.value + tail;
    };

    const double eps0 = 1e-6 * scale;
    const Complex i1 = one_eps(eps0);
    const Complex i2 = one_eps(0.5 * eps0);
    const Complex i3 = one_eps(0.25 * eps0);
    const Complex r1 = 2.0 * i2 - i1;
    const Complex r2 = 2.0 * i3 - i2;
    return (4.0 * r2 - r1) / 3.0;
}

double eta(const SpectralDensity& sd, double t, const QuadConfig& cfg) {
    if (!(t >= 0)) throw ValidationError("eta: t must be non-negative");
    if (const auto* d = as_drude(sd)) return drude_eta_closed(d->params(), t);

    const TailEnvelope env = sd.tail_envelope();
    if (conditional_tail(env)) {
        if (t == 0.0)
            throw NumericalError("eta: conditionally convergent integral needs t > 0");
        const Complex v = oscillatory_half_line([&](double w) { return sd.j(w); }, t,
                                                sd.frequency_scale(), env.coeff, cfg);
        return -v.imag();
    }
    return -absolute_osc_integral([&](double w) { return sd.j(w) * std::sin(t * w); }, t, sd,
                                  0.0, cfg);
}

double nu(const SpectralDensity& sd, double t, double beta, const QuadConfig& cfg) {
    if (!(beta > 0)) throw ValidationError("nu: beta must be positive");
    t = std::abs(t); // nu is even in t
    if (const auto* d = as_drude(sd)) return drude_nu_closed(d->params(), t, beta);

    const TailEnvelope env = sd.tail_envelope();
    if (conditional_tail(env)) {
        if (t == 0.0)
            throw NumericalError("nu: conditionally convergent integral needs t > 0");
        const double bs = beta * sd.frequency_scale();
        const Complex v =
            oscillatory_half_line([&](double w) { return sd.f(w, beta); }, t,
                                  sd.frequency_scale(), env.coeff * (1.0 + 2.0 / bs), cfg);
        return v.real();
    }
    return absolute_osc_integral([&](double w) { return sd.f(w, beta) * std::cos(t * w); }, t, sd,
                                 beta, cfg);
}

CorrelationSample sample_correlation(const SpectralDensity& sd, double beta, double t,
                                     const QuadConfig& cfg) {
    CorrelationSample s;
    s.t = t;
    s.eta = eta(sd, t, cfg);
    s.nu = nu(sd, t, beta, cfg);
    s.method = as_drude(sd) ? "closed_form" : "quadrature";
    return s;
}

// ---------------------------------------------------------------- grid cache

CorrelationGrid::CorrelationGrid(const SpectralDensity& sd, double beta, double omega,
                                 double t_request, const QuadConfig& cfg)
    : sd_(sd), beta_(beta), cfg_(cfg) {
    if (!(beta > 0)) throw ValidationError("correlation grid: beta must be positive");
    if (!(omega > 0)) throw ValidationError("correlation grid: omega must be positive");
    if (!(t_request > 0)) throw ValidationError("correlation grid: t_request must be positive");

    const double scale = sd.frequency_scale();
    h_ = std::min(0.05 / omega, 0.05 / scale);

    const double decay_scale = std::max(1.0 / scale, beta / (2.0 * M_PI));
    double horizon = 40.0 * decay_scale;

    const bool drude = as_drude(sd) != nullptr;
    auto fill = [&](double t_end) {
        const std::size_t n = static_cast<std::size_t>(std::ceil(t_end / h_)) + 1;
        eta_.resize(n);
        nu_.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double t = k * h_;
            eta_[k] = eta(sd_, t, cfg_);
            if (k == 0 && drude) {
                nu_[0] = std::numeric_limits<double>::quiet_NaN();
                nu_start_singular_ = true;
            } else {
                nu_[k] = nu(sd_, t, beta_, cfg_);
            }
        }
        t_end_ = (n - 1) * h_;
    };

    for (int attempt = 0;; ++attempt) {
        const double t_end = std::min(t_request, horizon);
        fill(t_end);
        double peak = 0.0;
        for (std::size_t k = 1; k < eta_.size(); ++k)
            peak = std::max({peak, std::abs(eta_[k]), std::abs(nu_[k])});
        const double tail =
            std::max(std::abs(eta_.back()), std::abs(nu_.back()));
        decayed_ = tail <= 1e-13 * peak;
        if (t_end >= t_request || decayed_ || attempt >= 3) break;
        horizon *= 1.7;
    }
}

double CorrelationGrid::interpolate(const std::vector<double>& y, std::size_t cell,
                                    double s) const {
    // Catmull-Rom with one-sided slopes at the ends (and past a singular
    // nu node 0, which is never dereferenced).
    const std::size_t n = y.size();
    const double y0 = y[cell];
    const double y1 = y[cell + 1];
    auto slope = [&](std::size_t k) {
        const std::size_t lo_ok = (k >= 1 && std::isfinite(y[k - 1])) ? 1u : 0u;
        if (lo_ok && k + 1 < n) return (y[k + 1] - y[k - 1]) / 2.0;
        if (k + 2 < n) return (-3.0 * y[k] + 4.0 * y[k + 1] - y[k + 2]) / 2.0;
        return (3.0 * y[k] - 4.0 * y[k - 1] + y[k - 2]) / 2.0;
    };
    const double m0 = slope(cell);
    const double m1 = slope(cell + 1);
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * m1;
}

double CorrelationGrid::eta_at(double t) const {
    if (!(t >= 0)) throw ValidationError("correlation grid: t must be non-negative");
    if (t > t_end_) {
        if (decayed_) return 0.0;
        throw ConfigurationError("correlation grid: query beyond an undecayed horizon");
    }
    if (t <= h_) return eta(sd_, t, cfg_);
    const std::size_t cell = std::min(static_cast<std::size_t>(t / h_), eta_.size() - 2);
    return interpolate(eta_, cell, t / h_ - cell);
}

double CorrelationGrid::nu_at(double t) const {
    if (!(t >= 0)) throw ValidationError("correlation grid: t must be non-negative");
    if (t > t_end_) {
        if (decayed_) return 0.0;
        throw ConfigurationError("correlation grid: query beyond an undecayed horizon");
    }
    if (t <= h_) return nu(sd_, t, beta_, cfg_);
    const std::size_t cell = std::min(static_cast<std::size_t>(t / h_), nu_.size() - 2);
    return interpolate(nu_, cell, t / h_ - cell);
}

} // namespace sbmtcl
