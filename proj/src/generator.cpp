#include "sbmtcl/generator.hpp"

#include <cmath>
#include <complex>
#include <sstream>

#include "sbmtcl/special_functions.hpp"

namespace sbmtcl {

namespace {

using quad::Complex;
using quad::PoleSpec;
using quad::QuadConfig;
using quad::TailEnvelope;

// 5-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 5> kGlX = {0.046910077030668, 0.230765344947158, 0.5,
                                        0.769234655052842, 0.953089922969332};
constexpr std::array<double, 5> kGlW = {0.118463442528095, 0.239314335249683,
                                        0.284444444444444, 0.239314335249683,
                                        0.118463442528095};

TailEnvelope compose_rational(const TailEnvelope& j_env, double coth_bound, double extra_power) {
    if (j_env.kind == TailEnvelope::Kind::rational)
        return TailEnvelope::rational(j_env.coeff * coth_bound, j_env.power + extra_power);
    TailEnvelope e = j_env; // gaussian/exponential decay dominates any power
    e.coeff *= coth_bound;
    return e;
}

} // namespace

void SystemParams::validate() const {
    if (!(omega > 0)) throw ValidationError("system: omega must be positive");
    if (!(beta > 0)) throw ValidationError("system: beta must be positive");
    if (a1 == 0.0 && a3 == 0.0)
        throw ValidationError("system: coupling components a1, a3 cannot both vanish");
    if (!(coupling_sq >= 0)) throw ValidationError("system: coupling_sq must be non-negative");
}

SystemParams SystemParams::dqd(double epsilon, double t_c, double beta, double coupling_sq) {
    const double omega = std::sqrt(epsilon * epsilon + 4.0 * t_c * t_c);
    if (!(omega > 0)) throw ValidationError("system: epsilon and t_c cannot both vanish");
    SystemParams p;
    p.omega = omega;
    p.a1 = epsilon / omega;
    p.a3 = 2.0 * t_c / omega;
    p.beta = beta;
    p.coupling_sq = coupling_sq;
    p.validate();
    return p;
}

double GeneratorMatrix::max_abs() const {
    double m = 0.0;
    for (const auto& row : f)
        for (double v : row) m = std::max(m, std::abs(v));
    return m;
}

GeneratorMatrix tcl0(const SystemParams& p) {
    p.validate();
    GeneratorMatrix g;
    g.order = 0;
    g.f[1][2] = -p.omega;
    g.f[2][1] = p.omega;
    return g;
}

GeneratorMatrix tcl2_asymptotic(const SystemParams& p, const SpectralDensity& sd,
                                const QuadConfig& cfg) {
    p.validate();
    const double W = p.omega;
    const double a1 = p.a1, a3 = p.a3;
    const double jW = sd.j(W);
    const double fW = sd.f(W, p.beta);
    const double f0 = sd.f(0.0, p.beta);

    GeneratorMatrix g;
    g.order = 2;

    g.f[1][0] = -2.0 * M_PI * a1 * a3 * jW;
    g.f[1][1] = -2.0 * M_PI * a3 * a3 * f0;
    g.f[1][3] = -2.0 * M_PI * a1 * a3 * fW;
    g.f[2][2] = -2.0 * M_PI * (a1 * a1 * fW + a3 * a3 * f0);
    g.f[3][0] = -2.0 * M_PI * a1 * a1 * jW;
    g.f[3][1] = -2.0 * M_PI * a1 * a3 * f0;
    g.f[3][3] = -2.0 * M_PI * a1 * a1 * fW;

    const double scale = std::max(W, sd.frequency_scale());
    const double min_cut = 20.0 * scale;
    const double coth_bound = 1.0 + 2.0 / (p.beta * sd.frequency_scale());

    if (a1 != 0.0) {
        // q_f = PV int_0^inf f(w) / (w^2 - W^2) dw, simple pole at W
        quad::ComplexFn qf = [&](double w) {
            return Complex{sd.f(w, p.beta) / ((w - W) * (w + W)), 0.0};
        };
        auto pole = PoleSpec::simple_at(W, Complex{fW / (2.0 * W), 0.0});
        const double q_f = quad::pv_integral_above_half_line(
                               qf, 0.0, {pole}, cfg,
                               compose_rational(sd.tail_envelope(), coth_bound, 2.0), min_cut, W)
                               .real();
        g.f[2][1] = -4.0 * a1 * a1 * W * q_f;
        g.f[2][3] = 4.0 * a1 * a3 * W * q_f;
    }
    if (a1 != 0.0 && a3 != 0.0) {
        // q_20 = PV int_0^inf (J(w)/w) / (w^2 - W^2) dw; w = 0 is regular by
        // construction of j_over_omega.
        quad::ComplexFn q20 = [&](double w) {
            return Complex{sd.j_over_omega(w) / ((w - W) * (w + W)), 0.0};
        };
        auto pole = PoleSpec::simple_at(W, Complex{jW / (2.0 * W * W), 0.0});
        const double q = quad::pv_integral_above_half_line(
                             q20, 0.0, {pole}, cfg,
                             compose_rational(sd.tail_envelope(), 1.0, 3.0), min_cut, W)
                             .real();
        g.f[2][0] = 4.0 * a1 * a3 * W * W * q;
    }
    return g;
}

// ------------------------------------------------------------ time-dependent

Tcl2TimeEvaluator::Tcl2TimeEvaluator(const SystemParams& p, const SpectralDensity& sd,
                                     double t_request, const QuadConfig& cfg)
    : p_(p), grid_(sd, p.beta, p.omega, t_request, cfg) {
    p_.validate();
    const double W = p_.omega;
    const double h = grid_.spacing();
    const std::size_t n = grid_.size();
    i_es_.assign(n, 0.0);
    i_ec1_.assign(n, 0.0);
    i_n_.assign(n, 0.0);
    i_nc_.assign(n, 0.0);
    i_ns_.assign(n, 0.0);
    if (n < 4) throw ConfigurationError("tcl2 evaluator: correlation grid too short");

    // first cell by direct quadrature of the raw correlation functions (the
    // Drude nu has an integrable log singularity at 0)
    QuadConfig head = cfg;
    head.abs_tol = std::min(cfg.abs_tol, 1e-12);
    const auto& sd_ref = grid_.density();
    const double beta = grid_.beta();
    auto head_integral = [&](const quad::RealFn& f) {
        return quad::integrate(f, 0.0, h, head).value.real();
    };
    i_es_[1] = head_integral([&](double u) { return eta(sd_ref, u, head) * std::sin(W * u); });
    i_ec1_[1] =
        head_integral([&](double u) { return eta(sd_ref, u, head) * (std::cos(W * u) - 1.0); });
    i_n_[1] = head_integral([&](double u) { return nu(sd_ref, u, beta, head); });
    i_nc_[1] =
        head_integral([&](double u) { return nu(sd_ref, u, beta, head) * std::cos(W * u); });
    i_ns_[1] =
        head_integral([&](double u) { return nu(sd_ref, u, beta, head) * std::sin(W * u); });

    // remaining cells: 5-point Gauss-Legendre on the cubic interpolants
    for (std::size_t k = 1; k + 1 < n; ++k) {
        double d_es = 0, d_ec1 = 0, d_n = 0, d_nc = 0, d_ns = 0;
        const double t0 = k * h;
        for (int q = 0; q < 5; ++q) {
            const double s = kGlX[q];
            const double t = t0 + s * h;
            const double w_eta = grid_.interpolate(grid_.eta_, k, s);
            const double w_nu = grid_.interpolate(grid_.nu_, k, s);
            const double c = std::cos(W * t), sn = std::sin(W * t);
            d_es += kGlW[q] * w_eta * sn;
            d_ec1 += kGlW[q] * w_eta * (c - 1.0);
            d_n += kGlW[q] * w_nu;
            d_nc += kGlW[q] * w_nu * c;
            d_ns += kGlW[q] * w_nu * sn;
        }
        i_es_[k + 1] = i_es_[k] + h * d_es;
        i_ec1_[k + 1] = i_ec1_[k] + h * d_ec1;
        i_n_[k + 1] = i_n_[k] + h * d_n;
        i_nc_[k + 1] = i_nc_[k] + h * d_nc;
        i_ns_[k + 1] = i_ns_[k] + h * d_ns;
    }
}

double Tcl2TimeEvaluator::kernel_at(const std::vector<double>& values, double t) const {
    const double h = grid_.spacing();
    if (t >= grid_.t_end()) {
        if (grid_.decayed() || t <= grid_.t_end() + 1e-12) return values.back();
        throw ConfigurationError("tcl2 evaluator: time beyond the correlation cache horizon");
    }
    const std::size_t cell = std::min(static_cast<std::size_t>(t / h), values.size() - 2);
    return grid_.interpolate(values, cell, t / h - cell);
}

GeneratorMatrix Tcl2TimeEvaluator::at_time(double t) const {
    if (!(t >= 0)) throw ValidationError("tcl2 evaluator: t must be non-negative");
    GeneratorMatrix g;
    g.order = 2;
    g.time = t;
    if (t == 0.0) return g;

    const double a1 = p_.a1, a3 = p_.a3;
    const double es = kernel_at(i_es_, t);
    const double ec1 = kernel_at(i_ec1_, t);
    const double in = kernel_at(i_n_, t);
    const double inc = kernel_at(i_nc_, t);
    const double ins = kernel_at(i_ns_, t);

    g.f[1][0] = 4.0 * a1 * a3 * es;
    g.f[1][1] = -4.0 * a3 * a3 * in;
    g.f[1][3] = -4.0 * a1 * a3 * inc;
    g.f[2][0] = -4.0 * a1 * a3 * ec1;
    g.f[2][1] = 4.0 * a1 * a1 * ins;
    g.f[2][2] = -4.0 * (a1 * a1 * inc + a3 * a3 * in);
    g.f[2][3] = -4.0 * a1 * a3 * ins;
    g.f[3][0] = 4.0 * a1 * a1 * es;
    g.f[3][1] = -4.0 * a1 * a3 * in;
    g.f[3][3] = -4.0 * a1 * a1 * inc;
    return g;
}

// ------------------------------------------------------------------- TCL4

namespace {

struct Tcl4Context {
    const SpectralDensity& sd;
    double beta;
    double W;
    double a1, a3;
    double fW, fpW, f0, jW, jpW;

    Tcl4Context(const SystemParams& p, const SpectralDensity& s)
        : sd(s),
          beta(p.beta),
          W(p.omega),
          a1(p.a1),
          a3(p.a3),
          fW(s.f(p.omega, p.beta)),
          fpW(s.f_prime(p.omega, p.beta)),
          f0(s.f(0.0, p.beta)),
          jW(s.j(p.omega)),
          jpW(s.j_prime(p.omega)) {}
};

double f33_integrand(const Tcl4Context& c, double w) {
    const double W = c.W;
    const double d2 = (w - W) * (w + W); // w^2 - W^2
    const double a14 = c.a1 * c.a1 * c.a1 * c.a1;
    double t1 = 4.0 * M_PI * a14 * W * c.sd.f(w, c.beta) / (d2 * d2) * (d2 * c.fpW + 2.0 * W * c.fW);
    double t2 = 0.0;
    if (c.a1 != 0.0 && c.a3 != 0.0) {
        const double fw = c.sd.f(w, c.beta);
        const double fm = c.sd.f(w - W, c.beta);
        const double fp = c.sd.f(w + W, c.beta);
        const double jw = c.sd.j(w);
        const double jm = c.sd.j(w - W);
        const double jp = c.sd.j(w + W);
        const double num =
            fw * (4.0 * c.fW * d2 * d2 - 2.0 * w * W * (w + W) * (w + W) * fm +
                  w * (w - W) * (2.0 * W * (w - W) * fp - 4.0 * c.f0 * w * (w + W))) -
            2.0 * W * jw * d2 * ((w + W) * jm + (W - w) * jp);
        const double den = w * d2; // w^3 - w W^2
        t2 = 2.0 * M_PI * c.a1 * c.a1 * c.a3 * c.a3 * num / (den * den);
    }
    return 0.5 * (t1 + t2);
}

double f30_integrand(const Tcl4Context& c, double w) {
    const double W = c.W;
    const double d2 = (w - W) * (w + W);
    const double a14 = c.a1 * c.a1 * c.a1 * c.a1;
    const double fw = c.sd.f(w, c.beta);
    const double jw = c.sd.j(w);
    double t1 = 4.0 * M_PI * a14 / (d2 * d2) *
                (fw * (W * d2 * c.jpW + c.jW * (w * w + 3.0 * W * W)) - 2.0 * w * W * c.fW * jw);
    double t2 = 0.0;
    if (c.a1 != 0.0 && c.a3 != 0.0) {
        const double jm = c.sd.j(w - W);
        const double jp = c.sd.j(w + W);
        const double den = w * d2;
        t2 = 4.0 * M_PI * c.a1 * c.a1 * c.a3 * c.a3 / (den * den) *
             (2.0 * c.f0 * w * W * jw * (W * W - w * w) +
              fw * ((w - W) * (w - W) * (2.0 * c.jW * (w + W) * (w + W) - W * W * jp) +
                    W * W * (w + W) * (w + W) * jm));
    }
    return 0.5 * (t1 + t2);
}

double tcl4_integral(const SystemParams& p, const SpectralDensity& sd, const QuadConfig& cfg,
                     bool is_f33) {
    p.validate();
    if (p.a1 == 0.0) return 0.0;
    const Tcl4Context ctx(p, sd);
    const double W = p.omega;

    quad::ComplexFn g = [&](double w) {
        return Complex{is_f33 ? f33_integrand(ctx, w) : f30_integrand(ctx, w), 0.0};
    };

    // pointwise tail envelope: sampled |g| w^3, generously padded
    const double S = std::max(W, sd.frequency_scale());
    double coeff = 0.0;
    for (double m : {25.0, 35.0, 50.0}) {
        const double w = m * S;
        coeff = std::max({coeff, std::abs(g(w).real()) * w * w * w,
                          std::abs(g(-w).real()) * w * w * w});
    }
    const TailEnvelope env = TailEnvelope::rational(4.0 * coeff, 3.0);

    std::vector<PoleSpec> poles{PoleSpec::auto_at(-W), PoleSpec::auto_at(W)};
    if (p.a3 != 0.0) poles.push_back(PoleSpec::auto_at(0.0));

    auto r = quad::pv_integral_above_real_line(g, poles, cfg, env, 20.0 * S, W);
    const double re = r.value.real();
    const double im = r.value.imag();
    if (std::abs(im) > 1e-8 * (1.0 + std::abs(re))) {
        std::ostringstream msg;
        msg << (is_f33 ? "tcl4_f33" : "tcl4_f30")
            << ": imaginary part failed the reality check: value = (" << re << ", " << im << ")";
        throw NumericalError(msg.str());
    }
    return re;
}

} // namespace

double tcl4_f33(const SystemParams& p, const SpectralDensity& sd, const QuadConfig& cfg) {
    return tcl4_integral(p, sd, cfg, true);
}

double tcl4_f30(const SystemParams& p, const SpectralDensity& sd, const QuadConfig& cfg) {
    return tcl4_integral(p, sd, cfg, false);
}

DrudeTcl4 drude_tcl4_closed_form(double gamma, double lambda_cut, double omega, double beta) {
    if (!(gamma > 0) || !(lambda_cut > 0) || !(omega > 0) || !(beta > 0))
        throw ValidationError("drude_tcl4_closed_form: parameters must be positive");

    using special::digamma;
    using special::trigamma;
    const Complex I{0.0, 1.0};
    const double L = lambda_cut, W = omega, b = beta;
    const double L2 = L * L, W2 = W * W;
    const Complex x = I * b * W / (2.0 * M_PI);

    const Complex f30 =
        (2.0 * gamma * gamma * L2 * L * W / (b * std::pow(L2 + W2, 3))) *
        (4.0 * M_PI * b * L * (L2 - 2.0 * W2) * digamma(b * L / (2.0 * M_PI) + 1.0) +
         8.0 * M_PI * M_PI * W2 -
         b * L *
             (2.0 * M_PI * (L2 - I * L * W - 2.0 * W2) * digamma(1.0 - x) +
              2.0 * M_PI * (L2 + I * L * W - 2.0 * W2) * digamma(1.0 + x) -
              I * b * W * (L2 + W2) * (trigamma(1.0 - x) - trigamma(1.0 + x))));

    const Complex p0m = digamma(-x), p0p = digamma(x);
    const Complex p1m = trigamma(-x), p1p = trigamma(x);
    const double sinhbW = std::sinh(b * W);
    const double csch_half = 1.0 / std::sinh(0.5 * b * W);

    const Complex f33 =
        (gamma * gamma * L2 * L * W / (M_PI * b * b * std::pow(L2 + W2, 3))) *
        (-2.0 * I * M_PI * b * b * L * (L2 - 3.0 * W2) * p0m * p0m +
         2.0 * I * M_PI * b * b * L * (L2 - 3.0 * W2) * p0p * p0p +
         32.0 * std::pow(M_PI, 3) * W +
         2.0 * b * p0m *
             (2.0 * I * M_PI * M_PI * (L + I * W) * (L + 3.0 * I * W) -
              b * b * L * W * (L2 + W2) * p1m) -
         2.0 * I * M_PI * b * b * (L - I * W) * (L + I * W) *
             ((L + I * W) * p1m - (L - I * W) * p1p) +
         2.0 * b * p0p *
             (-L * b * b * W * (L2 + W2) * p1p -
              2.0 * I * M_PI * M_PI * (L - I * W) * (L - 3.0 * I * W)) -
         2.0 * M_PI * M_PI * b * b * L * digamma(b * L / (2.0 * M_PI)) * csch_half * csch_half *
             (b * W * (L2 + W2) - (L2 - 3.0 * W2) * sinhbW));

    DrudeTcl4 out;
    auto take_real = [](const Complex& z, const char* name) {
        if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z.real())))
            throw NumericalError(std::string(name) + ": closed form failed the reality check");
        return z.real();
    };
    out.f30 = take_real(f30, "drude_tcl4_closed_form(f30)");
    out.f33 = take_real(f33, "drude_tcl4_closed_form(f33)");
    return out;
}

} // namespace sbmtcl
