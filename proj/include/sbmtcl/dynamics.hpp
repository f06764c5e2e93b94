// dynamics.hpp — Bloch-vector time evolution under v' = [F0 + l^2 F2(t)] v,
// with the time-dependent second-order generator interpolated from a
// precomputed grid.

#pragma once

#include <array>
#include <vector>

#include "sbmtcl/steady_state.hpp"

namespace sbmtcl {

struct IntegratorOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-10;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<BlochVector> states;
    SystemParams params;
    // max-min spread per component over the trailing 10% window
    std::array<double, 4> last_window_drift{};
    double diagnostics_window = 0.0;
};

Trajectory evolve(const SystemParams& p, const SpectralDensity& sd, const BlochVector& v_init,
                  double t_max, double dt_out, const quad::QuadConfig& cfg = {},
                  const IntegratorOptions& opts = {});

struct SteadyDetection {
    bool converged = false;
    BlochVector state;              // window mean when converged
    std::array<double, 4> drift{};  // per-component spread over the window
};

// Window-averaged tail state if every component drifts less than `tol` over
// the trailing `window` of the trajectory; a not-converged marker otherwise.
SteadyDetection detect_steady_state(const Trajectory& traj, double window, double tol);

} // namespace sbmtcl
