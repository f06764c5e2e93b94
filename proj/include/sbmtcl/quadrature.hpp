// quadrature.hpp — Adaptive Gauss–Kronrod integration, semi-infinite domains via
// declared tail envelopes or variable transform, and indented-contour integrals
// over real-axis poles (principal value minus i*pi times residues, with
// finite-part handling for order-2 poles).

#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "sbmtcl/errors.hpp"

namespace sbmtcl::quad {

using Complex = std::complex<double>;
using ComplexFn = std::function<Complex(double)>;
using RealFn = std::function<double(double)>;

struct QuadConfig {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_subdivisions = 4000;
    double tail_cutoff_factor = 10.0; // truncate where envelope < abs_tol / factor
};

struct QuadResult {
    Complex value{0.0, 0.0};
    double error = 0.0;
    std::size_t evaluations = 0;

    double real() const { return value.real(); }
};

// Pointwise bound on |f| for large |x|, declared by the caller. Used to pick
// truncation points for unbounded domains and to add the leading analytic tail
// of the integral beyond the truncation point.
struct TailEnvelope {
    enum class Kind { none, exponential, gaussian, rational };

    Kind kind = Kind::none;
    double coeff = 0.0; // C in C*exp(-rate*x), C*exp(-x^2/(2 sigma^2)), C/x^power
    double rate = 0.0;  // exponential rate
    double sigma = 0.0; // gaussian width
    double power = 0.0; // rational power (> 1)

    static TailEnvelope exponential(double coeff, double rate);
    static TailEnvelope gaussian(double coeff, double sigma);
    static TailEnvelope rational(double coeff, double power);
};

// x beyond which the envelope value stays below `threshold`; never below
// `min_cutoff`.
double truncation_point(const TailEnvelope& env, double threshold, double min_cutoff);

// Real-axis pole of an integrand, at most order 2. `auto_classify` runs a local
// Laurent fit (order-2 coefficient and residue) and downgrades coefficients
// that are zero within fitting noise.
struct PoleSpec {
    enum class Kind { removable, simple, second_order, auto_classify };

    double location = 0.0;
    Kind kind = Kind::auto_classify;
    Complex residue{0.0, 0.0}; // c1
    Complex coeff2{0.0, 0.0};  // c2 (order-2 Laurent coefficient)

    static PoleSpec removable_at(double x);
    static PoleSpec simple_at(double x, Complex residue);
    static PoleSpec auto_at(double x);
};

// Fit c2, c1 of f near `location` from symmetric samples at offsets
// {u, u/2, u/4}, u = 1e-2 * scale, with two Richardson levels each.
PoleSpec classify_pole(const ComplexFn& f, double location, double scale);

// Adaptive Gauss–Kronrod (G7/K15) on a finite interval. Optional interior
// breakpoints seed the initial subdivision.
QuadResult integrate(const ComplexFn& f, double a, double b, const QuadConfig& cfg = {},
                     const std::vector<double>& breakpoints = {});

// [a, inf): truncation via the envelope (plus leading analytic tail for
// rational envelopes), or the substitution x = a + u/(1-u) when no envelope is
// declared.
QuadResult integrate_to_infinity(const ComplexFn& f, double a, const QuadConfig& cfg = {},
                                 const TailEnvelope& env = {}, double min_cutoff = 1.0);

// (-inf, inf), symmetric truncation via the envelope.
QuadResult integrate_real_line(const ComplexFn& f, const QuadConfig& cfg,
                               const TailEnvelope& env, double min_cutoff);

// Integral along a contour indented *above* every listed real pole:
//   result = finite-part/principal-value integral - i*pi*sum(residues).
// Order-2 parts are subtracted analytically (Hadamard finite part); a small
// stencil patch around each pole keeps cancellation noise out of the
// quadrature. Domain is [a, b]; pass b from truncation_point() for
// semi-infinite integrands and add tails via the envelope overloads below.
QuadResult pv_integral_above(const ComplexFn& f, double a, double b,
                             const std::vector<PoleSpec>& poles, const QuadConfig& cfg = {},
                             double pole_scale = 1.0);

// Same, over [a, inf) or (-inf, inf) with envelope-based truncation.
QuadResult pv_integral_above_half_line(const ComplexFn& f, double a,
                                       const std::vector<PoleSpec>& poles, const QuadConfig& cfg,
                                       const TailEnvelope& env, double min_cutoff,
                                       double pole_scale = 1.0);
QuadResult pv_integral_above_real_line(const ComplexFn& f, const std::vector<PoleSpec>& poles,
                                       const QuadConfig& cfg, const TailEnvelope& env,
                                       double min_cutoff, double pole_scale = 1.0);

} // namespace sbmtcl::quad
