// special_functions.hpp — Complex digamma/trigamma and accelerated Matsubara sums

#pragma once

#include <complex>
#include <functional>

#include "sbmtcl/errors.hpp"

namespace sbmtcl::special {

// psi^(0)(z) for complex z, accurate to >= 12 significant digits. Reflection
// for Re(z) < 0.5, upward recurrence until |z| is large, then the Bernoulli
// asymptotic series. Throws ValidationError at the poles (non-positive
// integers).
std::complex<double> digamma(std::complex<double> z);

// psi^(1)(z), same scheme.
std::complex<double> trigamma(std::complex<double> z);

// Sum of term(n) over all integers n, evaluated as term(0) plus symmetric
// partial sums, with Richardson acceleration of the algebraic (1/n^2-class)
// tail. `tail_order` is the number of acceleration levels. Throws
// ConvergenceError if the accelerated increments stop shrinking or the term
// magnitudes fail to decay.
double sum_matsubara(const std::function<double(long)>& term, double tol, int tail_order = 2);

} // namespace sbmtcl::special
