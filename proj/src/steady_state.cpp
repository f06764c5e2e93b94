#include "sbmtcl/steady_state.hpp"

#include <array>
#include <cmath>

namespace sbmtcl {

namespace {

using quad::Complex;
using quad::PoleSpec;
using quad::QuadConfig;
using quad::TailEnvelope;

TailEnvelope mfgs_envelope(const SpectralDensity& sd, double beta, double extra_power) {
    TailEnvelope env = sd.tail_envelope();
    const double coth_bound = 1.0 + 2.0 / (beta * sd.frequency_scale());
    if (env.kind == TailEnvelope::Kind::rational)
        return TailEnvelope::rational(env.coeff * coth_bound, env.power + extra_power);
    env.coeff *= coth_bound;
    return env;
}

// Solve the 3x3 system A x = rhs by Gaussian elimination with partial pivoting.
std::array<double, 3> solve3(std::array<std::array<double, 4>, 3> aug) {
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(aug[r][col]) > std::abs(aug[piv][col])) piv = r;
        if (std::abs(aug[piv][col]) < 1e-300)
            throw NumericalError("tcl2_only_steady_state: singular generator matrix");
        std::swap(aug[piv], aug[col]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double m = aug[r][col] / aug[col][col];
            for (int c = col; c < 4; ++c) aug[r][c] -= m * aug[col][c];
        }
    }
    return {aug[0][3] / aug[0][0], aug[1][3] / aug[1][1], aug[2][3] / aug[2][2]};
}

} // namespace

BlochVector gibbs_state(double beta, double omega) {
    if (!(beta > 0) || !(omega > 0))
        throw ValidationError("gibbs_state: beta and omega must be positive");
    BlochVector v;
    v.v3 = -std::tanh(0.5 * beta * omega);
    return v;
}

double coherence_correction_tcl(const SystemParams& p, const SpectralDensity& sd,
                                const QuadConfig& cfg) {
    p.validate();
    if (p.a1 == 0.0 || p.a3 == 0.0) return 0.0;
    const GeneratorMatrix g2 = tcl2_asymptotic(p, sd, cfg);
    const double v3_0 = gibbs_state(p.beta, p.omega).v3;
    return -(g2(2, 0) + v3_0 * g2(2, 3)) / p.omega;
}

double coherence_correction_mfgs(const SystemParams& p, const SpectralDensity& sd,
                                 const QuadConfig& cfg) {
    p.validate();
    if (p.a1 == 0.0 || p.a3 == 0.0) return 0.0;
    const double W = p.omega;
    const double th = std::tanh(0.5 * p.beta * W);

    // 4 a1 a3 int_0^inf [ f(w) tanh(bW/2) - W J(w)/w ] / (w^2 - W^2) dw;
    // both w = 0 and w = W are removable, the latter via a stencil patch.
    quad::ComplexFn g = [&](double w) {
        const double num = sd.f(w, p.beta) * th - W * sd.j_over_omega(w);
        return Complex{num / ((w - W) * (w + W)), 0.0};
    };
    const double min_cut = 20.0 * std::max(W, sd.frequency_scale());
    auto r = quad::pv_integral_above_half_line(g, 0.0, {PoleSpec::removable_at(W)}, cfg,
                                               mfgs_envelope(sd, p.beta, 2.0), min_cut, W);
    return 4.0 * p.a1 * p.a3 * r.real();
}

double population_correction_tcl(const SystemParams& p, const SpectralDensity& sd,
                                 const QuadConfig& cfg) {
    p.validate();
    if (p.a1 == 0.0) return 0.0;

    const double fW = sd.f(p.omega, p.beta);
    const double f0 = sd.f(0.0, p.beta);
    const double f33_2 = -2.0 * M_PI * p.a1 * p.a1 * fW;
    const double scale = 2.0 * M_PI * (p.a1 * p.a1 + p.a3 * p.a3) *
                         std::max({std::abs(fW), std::abs(f0), 1e-6});
    if (std::abs(f33_2) < 1e-12 * scale)
        throw NumericalError(
            "population_correction_tcl: F33^(2) vanishes (decoupled configuration)");

    const double f30_4 = tcl4_f30(p, sd, cfg);
    const double f33_4 = tcl4_f33(p, sd, cfg);
    const double v3_0 = gibbs_state(p.beta, p.omega).v3;
    const double f31_2 = -2.0 * M_PI * p.a1 * p.a3 * f0;
    const double v1_2 = p.a3 != 0.0 ? coherence_correction_tcl(p, sd, cfg) : 0.0;
    return -(f30_4 + v3_0 * f33_4 + v1_2 * f31_2) / f33_2;
}

double population_correction_mfgs(const SystemParams& p, const SpectralDensity& sd,
                                  const QuadConfig& cfg) {
    p.validate();
    if (p.a1 == 0.0) return 0.0;
    const double W = p.omega;
    const double b = p.beta;
    const double cothW = 1.0 / std::tanh(0.5 * b * W);
    const double cschbW = 1.0 / std::sinh(b * W);

    // -2 a1^2 tanh(bW/2) int_0^inf
    //     [2 w W coth(bW/2) J(w) - f(w)(b W (w^2-W^2) csch(bW) + w^2 + W^2)]
    //     / (w^2-W^2)^2 dw
    // The w = W point is a removable double zero over a double zero.
    quad::ComplexFn g = [&](double w) {
        const double d2 = (w - W) * (w + W);
        const double num = 2.0 * w * W * cothW * sd.j(w) -
                           sd.f(w, b) * (b * W * d2 * cschbW + w * w + W * W);
        return Complex{num / (d2 * d2), 0.0};
    };
    const double min_cut = 20.0 * std::max(W, sd.frequency_scale());
    auto r = quad::pv_integral_above_half_line(g, 0.0, {PoleSpec::removable_at(W)}, cfg,
                                               mfgs_envelope(sd, p.beta, 3.0), min_cut, W);
    return -2.0 * p.a1 * p.a1 * std::tanh(0.5 * b * W) * r.real();
}

BlochVector tcl2_only_steady_state(const SystemParams& p, const SpectralDensity& sd,
                                   const QuadConfig& cfg) {
    p.validate();
    const GeneratorMatrix g0 = tcl0(p);
    const GeneratorMatrix g2 = tcl2_asymptotic(p, sd, cfg);
    // rows 1..3 of (F0 + l^2 F2) (1, x)^T = 0
    std::array<std::array<double, 4>, 3> aug{};
    for (int r = 1; r <= 3; ++r) {
        for (int c = 1; c <= 3; ++c)
            aug[r - 1][c - 1] = g0(r, c) + p.coupling_sq * g2(r, c);
        aug[r - 1][3] = -(g0(r, 0) + p.coupling_sq * g2(r, 0));
    }
    const auto x = solve3(aug);
    BlochVector v;
    v.v1 = x[0];
    v.v2 = x[1];
    v.v3 = x[2];
    return v;
}

SteadyStateReport assemble_report(const SystemParams& p, const SpectralDensity& sd,
                                  const QuadConfig& cfg) {
    p.validate();
    SteadyStateReport rep;
    rep.gibbs = gibbs_state(p.beta, p.omega);

    rep.tcl_correction.v1 = coherence_correction_tcl(p, sd, cfg);
    rep.tcl_correction.v2 = v2_correction();
    rep.tcl_correction.v3 = population_correction_tcl(p, sd, cfg);

    rep.mfgs_correction.v1 = coherence_correction_mfgs(p, sd, cfg);
    rep.mfgs_correction.v2 = 0.0;
    rep.mfgs_correction.v3 = population_correction_mfgs(p, sd, cfg);

    rep.route_discrepancy.v1 = std::abs(rep.tcl_correction.v1 - rep.mfgs_correction.v1);
    rep.route_discrepancy.v2 = std::abs(rep.tcl_correction.v2 - rep.mfgs_correction.v2);
    rep.route_discrepancy.v3 = std::abs(rep.tcl_correction.v3 - rep.mfgs_correction.v3);

    rep.assembled = rep.gibbs;
    rep.assembled.v1 += p.coupling_sq * rep.mfgs_correction.v1;
    rep.assembled.v2 += p.coupling_sq * rep.mfgs_correction.v2;
    rep.assembled.v3 += p.coupling_sq * rep.mfgs_correction.v3;

    rep.tcl2_only_ss = tcl2_only_steady_state(p, sd, cfg);

    const GeneratorMatrix g2 = tcl2_asymptotic(p, sd, cfg);
    rep.generator_entries = {
        {"F10_2", g2(1, 0)}, {"F11_2", g2(1, 1)}, {"F13_2", g2(1, 3)}, {"F20_2", g2(2, 0)},
        {"F21_2", g2(2, 1)}, {"F22_2", g2(2, 2)}, {"F23_2", g2(2, 3)}, {"F30_2", g2(3, 0)},
        {"F31_2", g2(3, 1)}, {"F33_2", g2(3, 3)},
    };
    if (p.a1 != 0.0) {
        rep.generator_entries["F30_4"] = tcl4_f30(p, sd, cfg);
        rep.generator_entries["F33_4"] = tcl4_f33(p, sd, cfg);
    }
    return rep;
}

} // namespace sbmtcl
