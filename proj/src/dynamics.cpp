#include "sbmtcl/dynamics.hpp"

#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <memory>

namespace sbmtcl {

namespace {

using State = std::array<double, 4>;

void validate_initial(const BlochVector& v) {
    if (std::abs(v.v0 - 1.0) > 1e-9)
        throw ValidationError("evolve: initial state must have v0 = 1");
    const double n2 = v.v1 * v.v1 + v.v2 * v.v2 + v.v3 * v.v3;
    if (n2 > 1.0 + 1e-12)
        throw ValidationError("evolve: initial state lies outside the Bloch ball");
}

std::array<double, 4> window_drift(const Trajectory& traj, double window) {
    std::array<double, 4> lo{}, hi{};
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    const double t_from = traj.times.back() - window;
    bool any = false;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        if (traj.times[i] < t_from) continue;
        any = true;
        const auto& s = traj.states[i];
        const std::array<double, 4> v{s.v0, s.v1, s.v2, s.v3};
        for (int c = 0; c < 4; ++c) {
            lo[c] = std::min(lo[c], v[c]);
            hi[c] = std::max(hi[c], v[c]);
        }
    }
    std::array<double, 4> drift{};
    if (any)
        for (int c = 0; c < 4; ++c) drift[c] = hi[c] - lo[c];
    return drift;
}

} // namespace

Trajectory evolve(const SystemParams& p, const SpectralDensity& sd, const BlochVector& v_init,
                  double t_max, double dt_out, const quad::QuadConfig& cfg,
                  const IntegratorOptions& opts) {
    p.validate();
    validate_initial(v_init);
    if (!(t_max > 0)) throw ValidationError("evolve: t_max must be positive");
    if (!(dt_out > 0) || dt_out > t_max)
        throw ValidationError("evolve: dt_out must lie in (0, t_max]");

    std::unique_ptr<Tcl2TimeEvaluator> ev;
    if (p.coupling_sq > 0.0) {
        ev = std::make_unique<Tcl2TimeEvaluator>(p, sd, t_max, cfg);
        if (!ev->decayed() && ev->grid_end() < t_max)
            throw ConfigurationError(
                "evolve: correlation cache horizon is shorter than t_max and the bath has not "
                "decayed");
    }

    const GeneratorMatrix g0 = tcl0(p);
    auto rhs = [&](const State& v, State& dv, double t) {
        GeneratorMatrix g2;
        if (ev) g2 = ev->at_time(t);
        dv[0] = 0.0;
        for (int r = 1; r < 4; ++r) {
            double acc = 0.0;
            for (int c = 0; c < 4; ++c) {
                double m = g0(r, c);
                if (ev) m += p.coupling_sq * g2(r, c);
                acc += m * v[c];
            }
            dv[r] = acc;
        }
    };

    const auto n_out = static_cast<std::size_t>(std::floor(t_max / dt_out + 1e-9));
    std::vector<double> times(n_out + 1);
    for (std::size_t k = 0; k <= n_out; ++k) times[k] = k * dt_out;

    Trajectory traj;
    traj.params = p;
    traj.times.reserve(times.size());
    traj.states.reserve(times.size());

    State state{v_init.v0, v_init.v1, v_init.v2, v_init.v3};
    namespace ode = boost::numeric::odeint;
    auto stepper =
        ode::make_controlled(opts.abs_tol, opts.rel_tol, ode::runge_kutta_cash_karp54<State>());
    ode::integrate_times(stepper, rhs, state, times.begin(), times.end(), dt_out / 4.0,
                         [&](const State& s, double t) {
                             traj.times.push_back(t);
                             traj.states.push_back(BlochVector{s[0], s[1], s[2], s[3]});
                         });

    traj.diagnostics_window = 0.1 * t_max;
    traj.last_window_drift = window_drift(traj, traj.diagnostics_window);
    return traj;
}

SteadyDetection detect_steady_state(const Trajectory& traj, double window, double tol) {
    if (traj.times.size() < 2) throw ValidationError("detect_steady_state: trajectory too short");
    if (!(window > 0) || window > traj.times.back() - traj.times.front())
        throw ValidationError("detect_steady_state: window does not fit the trajectory");
    if (!(tol > 0)) throw ValidationError("detect_steady_state: tol must be positive");

    SteadyDetection det;
    det.drift = window_drift(traj, window);
    det.converged =
        det.drift[0] < tol && det.drift[1] < tol && det.drift[2] < tol && det.drift[3] < tol;
    if (det.converged) {
        const double t_from = traj.times.back() - window;
        double n = 0;
        BlochVector mean{0, 0, 0, 0};
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            if (traj.times[i] < t_from) continue;
            mean.v0 += traj.states[i].v0;
            mean.v1 += traj.states[i].v1;
            mean.v2 += traj.states[i].v2;
            mean.v3 += traj.states[i].v3;
            n += 1;
        }
        mean.v0 /= n;
        mean.v1 /= n;
        mean.v2 /= n;
        mean.v3 /= n;
        det.state = mean;
    }
    return det;
}

} // namespace sbmtcl
