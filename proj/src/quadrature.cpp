#include "sbmtcl/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>

namespace sbmtcl::quad {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights (positive half).
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct PanelEval {
    Complex value;
    double error;
};

PanelEval gk15(const ComplexFn& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const Complex fc = f(c);
    Complex resk = kWgk[7] * fc;
    Complex resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const Complex f1 = f(c - h * kXgk[j]);
        const Complex f2 = f(c + h * kXgk[j]);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[(j - 1) / 2] * (f1 + f2);
    }
    return {resk * h, std::abs((resk - resg) * h)};
}

struct Panel {
    double a, b;
    Complex value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
};

bool finite_value(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

QuadResult adaptive(const ComplexFn& f, double a, double b, const QuadConfig& cfg,
                    const std::vector<double>& breakpoints) {
    if (!(std::isfinite(a) && std::isfinite(b)) || !(a < b))
        throw ValidationError("integrate: invalid finite interval");

    std::vector<double> edges{a};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    edges.push_back(b);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    std::priority_queue<Panel> heap;
    Complex total{0.0, 0.0};
    double total_err = 0.0;
    std::size_t evals = 0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        auto pe = gk15(f, edges[i], edges[i + 1]);
        evals += 15;
        if (!finite_value(pe.value))
            throw NumericalError("integrate: non-finite integrand value");
        heap.push({edges[i], edges[i + 1], pe.value, pe.error});
        total += pe.value;
        total_err += pe.error;
    }

    const double width_floor = 1e-15 * (std::abs(a) + std::abs(b) + 1.0);
    std::vector<Panel> stuck;
    int splits = 0;
    auto tol = [&]() { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };

    while (total_err > tol() && !heap.empty()) {
        if (splits >= cfg.max_subdivisions)
            throw ConvergenceError("integrate: subdivision budget exhausted", total, total_err);
        Panel worst = heap.top();
        heap.pop();
        if (worst.b - worst.a < width_floor) {
            stuck.push_back(worst);
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        auto left = gk15(f, worst.a, mid);
        auto right = gk15(f, mid, worst.b);
        evals += 30;
        if (!finite_value(left.value) || !finite_value(right.value))
            throw NumericalError("integrate: non-finite integrand value");
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
        ++splits;
    }

    // Recompute the sums once to shed accumulation error.
    Complex value{0.0, 0.0};
    double error = 0.0;
    auto accumulate = [&](const Panel& p) {
        value += p.value;
        error += p.error;
    };
    while (!heap.empty()) {
        accumulate(heap.top());
        heap.pop();
    }
    for (const auto& p : stuck) accumulate(p);
    return {value, error, evals};
}

// Leading analytic tail of the integral beyond the truncation edge, assuming f
// follows the declared envelope shape there. `edge` is the signed endpoint.
Complex tail_correction(const ComplexFn& f, double edge, const TailEnvelope& env) {
    const Complex fT = f(edge);
    const double T = std::abs(edge);
    switch (env.kind) {
        case TailEnvelope::Kind::rational:
            if (env.power > 1.0) return fT * T / (env.power - 1.0);
            return {0.0, 0.0};
        case TailEnvelope::Kind::exponential:
            return env.rate > 0 ? fT / env.rate : Complex{0.0, 0.0};
        case TailEnvelope::Kind::gaussian:
            return env.sigma > 0 ? fT * env.sigma * env.sigma / T : Complex{0.0, 0.0};
        default:
            return {0.0, 0.0};
    }
}

} // namespace

TailEnvelope TailEnvelope::exponential(double coeff, double rate) {
    TailEnvelope e;
    e.kind = Kind::exponential;
    e.coeff = coeff;
    e.rate = rate;
    return e;
}

TailEnvelope TailEnvelope::gaussian(double coeff, double sigma) {
    TailEnvelope e;
    e.kind = Kind::gaussian;
    e.coeff = coeff;
    e.sigma = sigma;
    return e;
}

TailEnvelope TailEnvelope::rational(double coeff, double power) {
    TailEnvelope e;
    e.kind = Kind::rational;
    e.coeff = coeff;
    e.power = power;
    return e;
}

double truncation_point(const TailEnvelope& env, double threshold, double min_cutoff) {
    if (threshold <= 0) throw ValidationError("truncation_point: threshold must be positive");
    double x = min_cutoff;
    if (env.coeff > threshold) {
        switch (env.kind) {
            case TailEnvelope::Kind::exponential:
                x = std::log(env.coeff / threshold) / env.rate;
                break;
            case TailEnvelope::Kind::gaussian:
                x = env.sigma * std::sqrt(2.0 * std::log(env.coeff / threshold));
                break;
            case TailEnvelope::Kind::rational:
                x = std::pow(env.coeff / threshold, 1.0 / env.power);
                break;
            case TailEnvelope::Kind::none:
                throw ValidationError("truncation_point: envelope has no declared decay");
        }
    } else if (env.kind == TailEnvelope::Kind::none) {
        throw ValidationError("truncation_point: envelope has no declared decay");
    }
    return std::max(x, min_cutoff);
}

QuadResult integrate(const ComplexFn& f, double a, double b, const QuadConfig& cfg,
                     const std::vector<double>& breakpoints) {
    return adaptive(f, a, b, cfg, breakpoints);
}

QuadResult integrate_to_infinity(const ComplexFn& f, double a, const QuadConfig& cfg,
                                 const TailEnvelope& env, double min_cutoff) {
    if (env.kind == TailEnvelope::Kind::none) {
        // x = a + u/(1-u); the Jacobian grows like (1-u)^-2, so the integrand
        // must decay on its own. Nodes are strictly interior, u = 1 is never hit.
        ComplexFn g = [f, a](double u) {
            const double om = 1.0 - u;
            return f(a + u / om) / (om * om);
        };
        return adaptive(g, 0.0, 1.0, cfg, {0.5, 0.9, 0.99});
    }
    const double T = truncation_point(env, cfg.abs_tol / cfg.tail_cutoff_factor, min_cutoff);
    QuadResult r = adaptive(f, a, a + T, cfg, {});
    const Complex tail = tail_correction(f, a + T, env);
    r.value += tail;
    r.error += 0.5 * std::abs(tail);
    return r;
}

QuadResult integrate_real_line(const ComplexFn& f, const QuadConfig& cfg, const TailEnvelope& env,
                               double min_cutoff) {
    const double T = truncation_point(env, cfg.abs_tol / cfg.tail_cutoff_factor, min_cutoff);
    QuadResult r = adaptive(f, -T, T, cfg, {0.0});
    const Complex tail_hi = tail_correction(f, T, env);
    const Complex tail_lo = tail_correction(f, -T, env);
    r.value += tail_hi + tail_lo;
    r.error += 0.5 * (std::abs(tail_hi) + std::abs(tail_lo));
    return r;
}

PoleSpec PoleSpec::removable_at(double x) {
    PoleSpec p;
    p.location = x;
    p.kind = Kind::removable;
    return p;
}

PoleSpec PoleSpec::simple_at(double x, Complex residue) {
    PoleSpec p;
    p.location = x;
    p.kind = Kind::simple;
    p.residue = residue;
    return p;
}

PoleSpec PoleSpec::auto_at(double x) {
    PoleSpec p;
    p.location = x;
    p.kind = Kind::auto_classify;
    return p;
}

PoleSpec classify_pole(const ComplexFn& f, double location, double scale) {
    if (!(scale > 0)) throw ValidationError("classify_pole: scale must be positive");
    const double u0 = 1e-2 * scale;

    std::array<Complex, 3> S{}, A{};
    double norm = 0.0;
    for (int k = 0; k < 3; ++k) {
        const double u = u0 / (1 << k);
        const Complex gp = f(location + u);
        const Complex gm = f(location - u);
        if (!finite_value(gp) || !finite_value(gm))
            throw NumericalError("classify_pole: non-finite sample near pole");
        S[k] = 0.5 * u * u * (gp + gm);
        A[k] = 0.5 * u * (gp - gm);
        norm = std::max({norm, std::abs(S[k]), std::abs(A[k])});
    }
    const Complex R1 = (4.0 * S[1] - S[0]) / 3.0;
    const Complex R2 = (4.0 * S[2] - S[1]) / 3.0;
    Complex c2 = (16.0 * R2 - R1) / 15.0;
    const Complex Q1 = (4.0 * A[1] - A[0]) / 3.0;
    const Complex Q2 = (4.0 * A[2] - A[1]) / 3.0;
    Complex c1 = (16.0 * Q2 - Q1) / 15.0;

    const double th = 1e-8 * norm + 1e-300;
    const bool has_c2 = std::abs(c2) > th;
    const bool has_c1 = std::abs(c1) > th;
    if (std::abs(c2) > 1e-4 * norm && std::abs(c2 - R2) > 1e-3 * std::abs(c2))
        throw NumericalError("classify_pole: order-2 coefficient did not stabilize");
    if (std::abs(c1) > 1e-4 * norm && std::abs(c1 - Q2) > 1e-3 * std::abs(c1))
        throw NumericalError("classify_pole: residue estimate did not stabilize");

    PoleSpec p;
    p.location = location;
    if (has_c2) {
        p.kind = PoleSpec::Kind::second_order;
        p.coeff2 = c2;
        p.residue = has_c1 ? c1 : Complex{0.0, 0.0};
    } else if (has_c1) {
        p.kind = PoleSpec::Kind::simple;
        p.residue = c1;
    } else {
        p.kind = PoleSpec::Kind::removable;
    }
    return p;
}

namespace {

// Degree-5 Lagrange interpolation through the six nodes p +- {1,2,3} w,
// replacing the integrand inside |x - p| < w where direct evaluation is
// dominated by cancellation (or is 0/0 at a removable point).
class PolePatch {
public:
    PolePatch(double center, double window) : p_(center), w_(window) {
        for (int i = 0; i < 6; ++i) {
            const double off = (i < 3 ? -(3 - i) : i - 2) * w_;
            nodes_[i] = p_ + off;
        }
    }

    double center() const { return p_; }
    double window() const { return w_; }

    bool covers(double x) const { return std::abs(x - p_) < w_; }

    template <typename F>
    Complex eval(double x, F&& raw) {
        if (!filled_) {
            for (int i = 0; i < 6; ++i) values_[i] = raw(nodes_[i]);
            filled_ = true;
        }
        Complex acc{0.0, 0.0};
        for (int i = 0; i < 6; ++i) {
            double li = 1.0;
            for (int j = 0; j < 6; ++j)
                if (j != i) li *= (x - nodes_[j]) / (nodes_[i] - nodes_[j]);
            acc += li * values_[i];
        }
        return acc;
    }

private:
    double p_, w_;
    std::array<double, 6> nodes_{};
    std::array<Complex, 6> values_{};
    bool filled_ = false;
};

} // namespace

QuadResult pv_integral_above(const ComplexFn& f, double a, double b,
                             const std::vector<PoleSpec>& poles, const QuadConfig& cfg,
                             double pole_scale) {
    const double w = 1e-3 * pole_scale;
    std::vector<PoleSpec> resolved;
    resolved.reserve(poles.size());
    for (const auto& p : poles) {
        if (!(p.location > a && p.location < b))
            throw ValidationError("pv_integral_above: pole on or outside the domain boundary");
        if (std::min(p.location - a, b - p.location) <= 10.0 * w)
            throw ValidationError("pv_integral_above: pole too close to the domain boundary");
        resolved.push_back(p.kind == PoleSpec::Kind::auto_classify
                               ? classify_pole(f, p.location, pole_scale)
                               : p);
    }
    for (std::size_t i = 0; i < resolved.size(); ++i)
        for (std::size_t j = i + 1; j < resolved.size(); ++j)
            if (std::abs(resolved[i].location - resolved[j].location) <= 10.0 * w)
                throw ValidationError("pv_integral_above: poles closer than 10x the patch window");

    auto subtracted = [&](double x) {
        Complex v = f(x);
        for (const auto& p : resolved) {
            const double d = x - p.location;
            if (p.kind == PoleSpec::Kind::second_order) v -= p.coeff2 / (d * d);
            if (p.kind != PoleSpec::Kind::removable) v -= p.residue / d;
        }
        return v;
    };

    std::vector<PolePatch> patches;
    patches.reserve(resolved.size());
    for (const auto& p : resolved) patches.emplace_back(p.location, w);

    ComplexFn g = [&](double x) {
        for (auto& patch : patches)
            if (patch.covers(x)) return patch.eval(x, subtracted);
        return subtracted(x);
    };

    std::vector<double> breaks;
    for (const auto& p : resolved) {
        breaks.push_back(p.location);
        breaks.push_back(p.location - 10.0 * w);
        breaks.push_back(p.location + 10.0 * w);
        breaks.push_back(p.location - pole_scale);
        breaks.push_back(p.location + pole_scale);
    }

    QuadResult r = adaptive(g, a, b, cfg, breaks);
    for (const auto& p : resolved) {
        if (p.kind == PoleSpec::Kind::removable) continue;
        const double dl = p.location - a; // > 0
        const double dr = b - p.location; // > 0
        if (p.kind == PoleSpec::Kind::second_order)
            r.value += p.coeff2 * (1.0 / (a - p.location) - 1.0 / (b - p.location));
        r.value += p.residue * std::log(dr / dl);
        r.value += Complex{0.0, -M_PI} * p.residue;
    }
    return r;
}

QuadResult pv_integral_above_half_line(const ComplexFn& f, double a,
                                       const std::vector<PoleSpec>& poles, const QuadConfig& cfg,
                                       const TailEnvelope& env, double min_cutoff,
                                       double pole_scale) {
    const double T = truncation_point(env, cfg.abs_tol / cfg.tail_cutoff_factor, min_cutoff);
    QuadResult r = pv_integral_above(f, a, a + T, poles, cfg, pole_scale);
    const Complex tail = tail_correction(f, a + T, env);
    r.value += tail;
    r.error += 0.5 * std::abs(tail);
    return r;
}

QuadResult pv_integral_above_real_line(const ComplexFn& f, const std::vector<PoleSpec>& poles,
                                       const QuadConfig& cfg, const TailEnvelope& env,
                                       double min_cutoff, double pole_scale) {
    const double T = truncation_point(env, cfg.abs_tol / cfg.tail_cutoff_factor, min_cutoff);
    QuadResult r = pv_integral_above(f, -T, T, poles, cfg, pole_scale);
    const Complex tail_hi = tail_correction(f, T, env);
    const Complex tail_lo = tail_correction(f, -T, env);
    r.value += tail_hi + tail_lo;
    r.error += 0.5 * (std::abs(tail_hi) + std::abs(tail_lo));
    return r;
}

} // namespace sbmtcl::quad
