// spectral.hpp — Bath spectral densities J(w), their odd analytic continuation,
// the symmetrized function f(w) = J(w) coth(beta w / 2), and derivatives.

#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sbmtcl/errors.hpp"
#include "sbmtcl/quadrature.hpp"

namespace sbmtcl {

// Base interface. Implementations provide J and J' for w >= 0 only; the base
// class reflects to negative frequencies, so oddness of J (and evenness of J')
// holds by construction.
class SpectralDensity {
public:
    virtual ~SpectralDensity() = default;

    // J(w), odd continuation. Throws ValidationError for non-finite w.
    double j(double omega) const;

    // dJ/dw, even continuation.
    double j_prime(double omega) const;

    // J(w)/w, continuous through w = 0 (value there is j_over_omega_limit()).
    double j_over_omega(double omega) const;

    // f(w) = J(w) coth(beta w / 2); even in w; the removable point at w = 0
    // evaluates to (2/beta) * lim J(w)/w.
    double f(double omega, double beta) const;

    // f'(w) = J'(w) coth(beta w/2) - J(w) (beta/2) csch^2(beta w/2).
    // Only defined away from w = 0 (ValidationError otherwise).
    double f_prime(double omega, double beta) const;

    virtual double j_over_omega_limit() const = 0;
    virtual std::string model_tag() const = 0;
    virtual std::vector<std::pair<std::string, double>> parameters() const = 0;

    // Characteristic bath frequency (cutoff scale); sets truncation and grid
    // heuristics downstream.
    virtual double frequency_scale() const = 0;

    // Pointwise envelope of |J| at large w.
    virtual quad::TailEnvelope tail_envelope() const = 0;

protected:
    virtual double j_pos(double omega) const = 0;       // w >= 0
    virtual double j_prime_pos(double omega) const = 0; // w >= 0
    virtual double j_over_omega_pos(double omega) const; // default: j_pos(w)/w with limit
};

struct DrudeParams {
    double gamma = 1.0;      // dimensionless coupling
    double lambda_cut = 1.0; // cutoff frequency
};

// Ohmic density with Lorentzian rolloff: J(w) = gamma Lambda^2 w / (Lambda^2 + w^2).
class DrudeSpectralDensity final : public SpectralDensity {
public:
    explicit DrudeSpectralDensity(DrudeParams p);

    double j_over_omega_limit() const override { return p_.gamma; }
    std::string model_tag() const override { return "drude"; }
    std::vector<std::pair<std::string, double>> parameters() const override;
    double frequency_scale() const override { return p_.lambda_cut; }
    quad::TailEnvelope tail_envelope() const override;

    const DrudeParams& params() const { return p_; }

protected:
    double j_pos(double omega) const override;
    double j_prime_pos(double omega) const override;
    double j_over_omega_pos(double omega) const override;

private:
    DrudeParams p_;
};

struct DqdSincParams {
    double gamma = 1.0;     // dimensionless coupling
    double omega_c = 1.0;   // sound velocity over dot distance
    double omega_max = 8.0; // Gaussian cutoff frequency
};

// Piezoelectric/deformation phonon density for a double quantum dot:
// J(w) = gamma w (1 - sinc(w/w_c)) exp(-w^2 / (2 w_max^2)).
class DqdSincSpectralDensity final : public SpectralDensity {
public:
    explicit DqdSincSpectralDensity(DqdSincParams p);

    double j_over_omega_limit() const override { return 0.0; }
    std::string model_tag() const override { return "dqd_sinc"; }
    std::vector<std::pair<std::string, double>> parameters() const override;
    double frequency_scale() const override { return p_.omega_max; }
    quad::TailEnvelope tail_envelope() const override;

    const DqdSincParams& params() const { return p_; }

protected:
    double j_pos(double omega) const override;
    double j_prime_pos(double omega) const override;
    double j_over_omega_pos(double omega) const override;

private:
    DqdSincParams p_;
};

// User-supplied density: j (required) and j' (optional; central differences
// with Richardson refinement otherwise) as callables on w >= 0, plus the
// declared limit of J(w)/w at 0 and tail/scale metadata.
class CustomSpectralDensity final : public SpectralDensity {
public:
    CustomSpectralDensity(std::function<double(double)> j_fn,
                          std::function<double(double)> j_prime_fn, // may be nullptr
                          double j_over_omega_limit, double frequency_scale,
                          quad::TailEnvelope envelope, std::string tag = "custom");

    double j_over_omega_limit() const override { return limit_; }
    std::string model_tag() const override { return tag_; }
    std::vector<std::pair<std::string, double>> parameters() const override { return {}; }
    double frequency_scale() const override { return scale_; }
    quad::TailEnvelope tail_envelope() const override { return envelope_; }

protected:
    double j_pos(double omega) const override;
    double j_prime_pos(double omega) const override;

private:
    std::function<double(double)> j_fn_;
    std::function<double(double)> j_prime_fn_;
    double limit_;
    double scale_;
    quad::TailEnvelope envelope_;
    std::string tag_;
};

// sin(x)/x with a series branch near 0.
double sinc(double x);

} // namespace sbmtcl
