// bath_correlation.hpp — Bath two-point correlation functions eta(t), nu(t):
// closed forms for the Drude model, quadrature for everything else, plus a
// uniform-grid cache used by the time-dependent generator.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "sbmtcl/quadrature.hpp"
#include "sbmtcl/spectral.hpp"

namespace sbmtcl {

// eta(t) = -int_0^inf J(w) sin(t w) dw  (imaginary part of <B B(-t)>).
// Drude dispatches to -pi gamma Lambda^2 exp(-t Lambda) / 2; t >= 0 required.
double eta(const SpectralDensity& sd, double t, const quad::QuadConfig& cfg = {});

// nu(t) = int_0^inf f(w) cos(t w) dw (real part). Even in t. Drude dispatches
// to the Matsubara-sum closed route; near the degenerate points
// beta Lambda = 2 pi n the sum is evaluated at a relatively shifted beta.
double nu(const SpectralDensity& sd, double t, double beta, const quad::QuadConfig& cfg = {});

// True when beta*Lambda sits within relative 1e-9 of a nonzero multiple of
// 2 pi, i.e. where individual Matsubara terms degenerate.
bool drude_matsubara_resonant(double beta, double lambda_cut);

struct CorrelationSample {
    double t = 0.0;
    double eta = 0.0;
    double nu = 0.0;
    std::string method; // "closed_form" or "quadrature"
};

CorrelationSample sample_correlation(const SpectralDensity& sd, double beta, double t,
                                     const quad::QuadConfig& cfg = {});

// int_0^inf a(w) exp((i t - eps) w) dw for amplitudes with slowly decaying
// tails: exp(-eps w) regulator with Richardson extrapolation over
// eps, eps/2, eps/4 and a two-term boundary-corrected truncation. Requires
// t > 0. Exposed for the dual-route tests.
std::complex<double> oscillatory_half_line(const quad::RealFn& amplitude, double t, double scale,
                                           double envelope_coeff, const quad::QuadConfig& cfg);

// Uniform-grid samples of eta and nu on [0, t_end], cubic (Catmull-Rom)
// interpolation in between. The grid stops early once both functions have
// decayed below 1e-13 of their peak; queries beyond a decayed horizon return
// zero, queries beyond an undecayed horizon throw ConfigurationError.
class CorrelationGrid {
public:
    CorrelationGrid(const SpectralDensity& sd, double beta, double omega, double t_request,
                    const quad::QuadConfig& cfg = {});

    double spacing() const { return h_; }
    double t_end() const { return t_end_; }
    bool decayed() const { return decayed_; }
    std::size_t size() const { return eta_.size(); }

    double eta_at(double t) const;
    double nu_at(double t) const;

    // Node access for cell-wise integration in the generator module.
    double node_eta(std::size_t k) const { return eta_[k]; }
    double node_nu(std::size_t k) const { return nu_[k]; }
    bool nu_start_singular() const { return nu_start_singular_; }

    const SpectralDensity& density() const { return sd_; }
    double beta() const { return beta_; }

    // Catmull-Rom value of the interpolant on cell k at local parameter
    // s in [0,1]; `values` is eta_ or nu_.
    double interpolate(const std::vector<double>& values, std::size_t cell, double s) const;

private:
    const SpectralDensity& sd_;
    double beta_;
    double h_ = 0.0;
    double t_end_ = 0.0;
    bool decayed_ = false;
    bool nu_start_singular_ = false;
    std::vector<double> eta_;
    std::vector<double> nu_;
    quad::QuadConfig cfg_;

    friend class Tcl2TimeEvaluator;
};

} // namespace sbmtcl
