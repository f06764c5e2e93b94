#include "sbmtcl/spectral.hpp"

#include <cmath>

namespace sbmtcl {

namespace {

double require_finite(double omega) {
    if (!std::isfinite(omega)) throw ValidationError("spectral density: non-finite frequency");
    return omega;
}

// coth with no intermediate overflow; callers keep |x| away from 0.
double coth(double x) { return 1.0 / std::tanh(x); }

} // namespace

double sinc(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double SpectralDensity::j(double omega) const {
    require_finite(omega);
    if (omega == 0.0) return 0.0;
    const double v = j_pos(std::abs(omega));
    return omega > 0 ? v : -v;
}

double SpectralDensity::j_prime(double omega) const {
    require_finite(omega);
    return j_prime_pos(std::abs(omega));
}

double SpectralDensity::j_over_omega(double omega) const {
    require_finite(omega);
    return j_over_omega_pos(std::abs(omega));
}

double SpectralDensity::j_over_omega_pos(double omega) const {
    if (omega < 1e-8 * frequency_scale()) return j_over_omega_limit();
    return j_pos(omega) / omega;
}

double SpectralDensity::f(double omega, double beta) const {
    require_finite(omega);
    if (!(beta > 0)) throw ValidationError("spectral density: beta must be positive");
    const double x = 0.5 * beta * std::abs(omega);
    if (x < 1e-8) {
        // J coth(beta w/2) = (2/beta)(J/w) + J beta w / 6 + O(w^3 J)
        return 2.0 / beta * j_over_omega(omega) + j_pos(std::abs(omega)) * beta * std::abs(omega) / 6.0;
    }
    return j_pos(std::abs(omega)) * coth(x);
}

double SpectralDensity::f_prime(double omega, double beta) const {
    require_finite(omega);
    if (!(beta > 0)) throw ValidationError("spectral density: beta must be positive");
    if (omega == 0.0) throw ValidationError("f_prime: undefined at omega = 0");
    const double aw = std::abs(omega);
    const double x = 0.5 * beta * aw;
    double csch2 = 0.0;
    if (x < 350.0) {
        const double sh = std::sinh(x);
        csch2 = 1.0 / (sh * sh);
    }
    const double v = j_prime_pos(aw) * coth(x) - j_pos(aw) * 0.5 * beta * csch2;
    // f is even, so f' is odd.
    return omega > 0 ? v : -v;
}

// ---------------------------------------------------------------- Drude

DrudeSpectralDensity::DrudeSpectralDensity(DrudeParams p) : p_(p) {
    if (!(p_.gamma > 0)) throw ValidationError("drude: gamma must be positive");
    if (!(p_.lambda_cut > 0)) throw ValidationError("drude: lambda_cut must be positive");
}

std::vector<std::pair<std::string, double>> DrudeSpectralDensity::parameters() const {
    return {{"gamma", p_.gamma}, {"lambda_cut", p_.lambda_cut}};
}

quad::TailEnvelope DrudeSpectralDensity::tail_envelope() const {
    // J(w) <= gamma Lambda^2 / w
    return quad::TailEnvelope::rational(p_.gamma * p_.lambda_cut * p_.lambda_cut, 1.0);
}

double DrudeSpectralDensity::j_pos(double w) const {
    const double l2 = p_.lambda_cut * p_.lambda_cut;
    return p_.gamma * l2 * w / (l2 + w * w);
}

double DrudeSpectralDensity::j_prime_pos(double w) const {
    const double l2 = p_.lambda_cut * p_.lambda_cut;
    const double d = l2 + w * w;
    return p_.gamma * l2 * (l2 - w * w) / (d * d);
}

double DrudeSpectralDensity::j_over_omega_pos(double w) const {
    const double l2 = p_.lambda_cut * p_.lambda_cut;
    return p_.gamma * l2 / (l2 + w * w);
}

// ---------------------------------------------------------------- DQD sinc

DqdSincSpectralDensity::DqdSincSpectralDensity(DqdSincParams p) : p_(p) {
    if (!(p_.gamma > 0)) throw ValidationError("dqd_sinc: gamma must be positive");
    if (!(p_.omega_c > 0)) throw ValidationError("dqd_sinc: omega_c must be positive");
    if (!(p_.omega_max > 0)) throw ValidationError("dqd_sinc: omega_max must be positive");
}

std::vector<std::pair<std::string, double>> DqdSincSpectralDensity::parameters() const {
    return {{"gamma", p_.gamma}, {"omega_c", p_.omega_c}, {"omega_max", p_.omega_max}};
}

quad::TailEnvelope DqdSincSpectralDensity::tail_envelope() const {
    // |J| <= 2 gamma w exp(-w^2/(2 wmax^2)) <= C exp(-w^2/(2 (1.25 wmax)^2))
    return quad::TailEnvelope::gaussian(4.0 * p_.gamma * p_.omega_max, 1.25 * p_.omega_max);
}

namespace {
double sinc_prime(double x) {
    const double ax = std::abs(x);
    if (ax < 1e-4) return -x / 3.0 + x * x * x / 30.0;
    return (x * std::cos(x) - std::sin(x)) / (x * x);
}
} // namespace

double DqdSincSpectralDensity::j_pos(double w) const {
    return w * j_over_omega_pos(w);
}

double DqdSincSpectralDensity::j_over_omega_pos(double w) const {
    const double x = w / p_.omega_c;
    double one_minus_sinc;
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        one_minus_sinc = x2 / 6.0 - x2 * x2 / 120.0;
    } else {
        one_minus_sinc = 1.0 - sinc(x);
    }
    return p_.gamma * one_minus_sinc * std::exp(-w * w / (2.0 * p_.omega_max * p_.omega_max));
}

double DqdSincSpectralDensity::j_prime_pos(double w) const {
    const double x = w / p_.omega_c;
    const double wm2 = p_.omega_max * p_.omega_max;
    const double G = std::exp(-w * w / (2.0 * wm2));
    double one_minus_sinc;
    if (std::abs(x) < 1e-4) {
        const double x2 = x * x;
        one_minus_sinc = x2 / 6.0 - x2 * x2 / 120.0;
    } else {
        one_minus_sinc = 1.0 - sinc(x);
    }
    return p_.gamma * G *
           (one_minus_sinc - x * sinc_prime(x) - (w * w / wm2) * one_minus_sinc);
}

// ---------------------------------------------------------------- custom

CustomSpectralDensity::CustomSpectralDensity(std::function<double(double)> j_fn,
                                             std::function<double(double)> j_prime_fn,
                                             double j_over_omega_limit, double frequency_scale,
                                             quad::TailEnvelope envelope, std::string tag)
    : j_fn_(std::move(j_fn)),
      j_prime_fn_(std::move(j_prime_fn)),
      limit_(j_over_omega_limit),
      scale_(frequency_scale),
      envelope_(envelope),
      tag_(std::move(tag)) {
    if (!j_fn_) throw ValidationError("custom density: j callable is required");
    if (!(scale_ > 0)) throw ValidationError("custom density: frequency scale must be positive");
}

double CustomSpectralDensity::j_pos(double w) const { return j_fn_(w); }

double CustomSpectralDensity::j_prime_pos(double w) const {
    if (j_prime_fn_) return j_prime_fn_(w);
    // central difference with one Richardson refinement
    const double h = std::max(1e-6, 1e-6 * std::abs(w));
    auto d = [&](double hh) {
        const double lo = w - hh;
        const double flo = lo >= 0.0 ? j_fn_(lo) : -j_fn_(-lo);
        return (j_fn_(w + hh) - flo) / (2.0 * hh);
    };
    const double d1 = d(h);
    const double d2 = d(0.5 * h);
    return (4.0 * d2 - d1) / 3.0;
}

} // namespace sbmtcl
