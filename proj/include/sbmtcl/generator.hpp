// generator.hpp — TCL generator matrices for the spin-boson qubit: the free
// part, the second-order generator (time-dependent and asymptotic), and the
// asymptotic fourth-order coefficients F33/F30 needed for the steady-state
// population correction.

#pragma once

#include <array>
#include <memory>
#include <optional>
#include <vector>

#include "sbmtcl/bath_correlation.hpp"
#include "sbmtcl/quadrature.hpp"
#include "sbmtcl/spectral.hpp"

namespace sbmtcl {

struct SystemParams {
    double omega = 1.0;       // level splitting
    double a1 = 1.0;          // sigma_1 component of the coupling operator
    double a3 = 0.0;          // sigma_3 component
    double beta = 1.0;        // inverse bath temperature
    double coupling_sq = 1.0; // lambda^2, applied at the steady-state/dynamics layer

    void validate() const;

    // Double-quantum-dot parameterization: detuning epsilon and tunneling t_c,
    // with omega^2 = epsilon^2 + 4 t_c^2, a1 = epsilon/omega, a3 = 2 t_c/omega.
    static SystemParams dqd(double epsilon, double t_c, double beta, double coupling_sq);
};

// 4x4 real generator block acting on the Bloch 4-vector. Row 0 is identically
// zero (trace preservation).
struct GeneratorMatrix {
    int order = 0;
    std::optional<double> time; // nullopt marks the asymptotic limit
    std::array<std::array<double, 4>, 4> f{};

    double operator()(int row, int col) const { return f[row][col]; }
    double max_abs() const;
};

// F^(0): only F12 = -omega, F21 = +omega.
GeneratorMatrix tcl0(const SystemParams& p);

// Asymptotic second-order generator. Closed entries use J and f at 0 and
// omega; F20, F21, F23 are principal-value frequency integrals with the simple
// pole at omega.
GeneratorMatrix tcl2_asymptotic(const SystemParams& p, const SpectralDensity& sd,
                                const quad::QuadConfig& cfg = {});

// Finite-time second-order generator backed by cached bath correlations. The
// five cumulative kernels
//   I_es(t)  = int_0^t eta(u) sin(omega u) du
//   I_ec1(t) = int_0^t eta(u) (cos(omega u) - 1) du
//   I_n(t)   = int_0^t nu(u) du
//   I_nc(t)  = int_0^t nu(u) cos(omega u) du
//   I_ns(t)  = int_0^t nu(u) sin(omega u) du
// determine every matrix element.
class Tcl2TimeEvaluator {
public:
    Tcl2TimeEvaluator(const SystemParams& p, const SpectralDensity& sd, double t_request,
                      const quad::QuadConfig& cfg = {});

    GeneratorMatrix at_time(double t) const;

    double grid_end() const { return grid_.t_end(); }
    bool decayed() const { return grid_.decayed(); }
    const CorrelationGrid& correlations() const { return grid_; }

private:
    SystemParams p_;
    CorrelationGrid grid_;
    std::vector<double> i_es_, i_ec1_, i_n_, i_nc_, i_ns_;

    double kernel_at(const std::vector<double>& values, double t) const;
};

// Asymptotic fourth-order coefficients, evaluated as single frequency
// integrals over the whole real line along a contour indented above the poles
// at {-omega, 0, +omega}. The result must be real; a NumericalError is thrown
// if the imaginary part survives beyond 1e-8 relative.
double tcl4_f33(const SystemParams& p, const SpectralDensity& sd,
                const quad::QuadConfig& cfg = {});
double tcl4_f30(const SystemParams& p, const SpectralDensity& sd,
                const quad::QuadConfig& cfg = {});

struct DrudeTcl4 {
    double f30 = 0.0;
    double f33 = 0.0;
};

// Digamma/trigamma closed forms for the Drude bath at a3 = 0, a1 = 1.
DrudeTcl4 drude_tcl4_closed_form(double gamma, double lambda_cut, double omega, double beta);

} // namespace sbmtcl
