// steady_state.hpp — Second-order steady state assembled along two independent
// routes: the perturbative TCL solution (second-order coherence, fourth-order
// population input) and the closed mean-force integrals. Their agreement is
// the library's central consistency check.

#pragma once

#include <map>
#include <string>

#include "sbmtcl/generator.hpp"

namespace sbmtcl {

struct BlochVector {
    double v0 = 1.0;
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;
};

// O(lambda^2) increments of the three nontrivial components.
struct BlochCorrection {
    double v1 = 0.0;
    double v2 = 0.0;
    double v3 = 0.0;
};

struct SteadyStateReport {
    BlochVector gibbs;
    BlochCorrection tcl_correction;
    BlochCorrection mfgs_correction;
    BlochVector assembled;       // gibbs + coupling_sq * mfgs_correction
    BlochCorrection route_discrepancy; // |tcl - mfgs| per component
    BlochVector tcl2_only_ss;    // exact null vector of F0 + lambda^2 F2
    std::map<std::string, double> generator_entries;
};

// (1, 0, 0, -tanh(beta*omega/2)).
BlochVector gibbs_state(double beta, double omega);

// v1^(2) from the asymptotic TCL2 entries: -(F20 + v3^(0) F23)/omega.
double coherence_correction_tcl(const SystemParams& p, const SpectralDensity& sd,
                                const quad::QuadConfig& cfg = {});

// v1^(2) as the closed mean-force integral.
double coherence_correction_mfgs(const SystemParams& p, const SpectralDensity& sd,
                                 const quad::QuadConfig& cfg = {});

// Exactly zero at every order; kept as an operation so reports carry the
// theorem as data.
constexpr double v2_correction() { return 0.0; }

// v3^(2) = -(F30^(4) + v3^(0) F33^(4) + v1^(2) F31^(2)) / F33^(2).
double population_correction_tcl(const SystemParams& p, const SpectralDensity& sd,
                                 const quad::QuadConfig& cfg = {});

// v3^(2) as the closed mean-force integral (removable double zero at omega).
double population_correction_mfgs(const SystemParams& p, const SpectralDensity& sd,
                                  const quad::QuadConfig& cfg = {});

// Exact null vector of F^(0) + coupling_sq * F^(2), normalized to v0 = 1. This
// is the (population-inaccurate) fixed point the second-order dynamics relaxes
// to.
BlochVector tcl2_only_steady_state(const SystemParams& p, const SpectralDensity& sd,
                                   const quad::QuadConfig& cfg = {});

SteadyStateReport assemble_report(const SystemParams& p, const SpectralDensity& sd,
                                  const quad::QuadConfig& cfg = {});

} // namespace sbmtcl
