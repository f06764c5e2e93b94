#include "sbmtcl/special_functions.hpp"

#include <array>
#include <cmath>
#include <vector>

namespace sbmtcl::special {

namespace {

using Complex = std::complex<double>;

// B_{2n}/(2n) and B_{2n} show up in the asymptotic series; store B_2..B_16.
constexpr std::array<double, 8> kBernoulli = {
    1.0 / 6.0, -1.0 / 30.0, 1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0, -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0};

constexpr double kShiftRadius = 12.0;

bool at_pole(const Complex& z) {
    if (z.imag() != 0.0) return false;
    const double r = z.real();
    return r <= 0.0 && r == std::floor(r);
}

Complex digamma_asymptotic(Complex z) {
    // psi(z) ~ log z - 1/(2z) - sum B_2n / (2n z^(2n))
    const Complex inv = 1.0 / z;
    const Complex inv2 = inv * inv;
    Complex acc = std::log(z) - 0.5 * inv;
    Complex p = inv2;
    for (std::size_t n = 0; n < kBernoulli.size(); ++n) {
        acc -= kBernoulli[n] / (2.0 * (n + 1.0)) * p;
        p *= inv2;
    }
    return acc;
}

Complex trigamma_asymptotic(Complex z) {
    // psi'(z) ~ 1/z + 1/(2z^2) + sum B_2n / z^(2n+1)
    const Complex inv = 1.0 / z;
    const Complex inv2 = inv * inv;
    Complex acc = inv + 0.5 * inv2;
    Complex p = inv * inv2;
    for (std::size_t n = 0; n < kBernoulli.size(); ++n) {
        acc += kBernoulli[n] * p;
        p *= inv2;
    }
    return acc;
}

} // namespace

Complex digamma(Complex z) {
    if (at_pole(z)) throw ValidationError("digamma: pole at non-positive integer");
    if (z.real() < 0.5) {
        // psi(z) = psi(1-z) - pi*cot(pi*z)
        const Complex piz = M_PI * z;
        return digamma(1.0 - z) - M_PI * std::cos(piz) / std::sin(piz);
    }
    Complex shift{0.0, 0.0};
    while (std::abs(z) < kShiftRadius) {
        shift -= 1.0 / z;
        z += 1.0;
    }
    return digamma_asymptotic(z) + shift;
}

Complex trigamma(Complex z) {
    if (at_pole(z)) throw ValidationError("trigamma: pole at non-positive integer");
    if (z.real() < 0.5) {
        // psi'(z) = -psi'(1-z) + pi^2 / sin^2(pi*z)
        const Complex s = std::sin(M_PI * z);
        return -trigamma(1.0 - z) + M_PI * M_PI / (s * s);
    }
    Complex shift{0.0, 0.0};
    while (std::abs(z) < kShiftRadius) {
        shift += 1.0 / (z * z);
        z += 1.0;
    }
    return trigamma_asymptotic(z) + shift;
}

double sum_matsubara(const std::function<double(long)>& term, double tol, int tail_order) {
    if (!(tol > 0)) throw ValidationError("sum_matsubara: tolerance must be positive");
    if (tail_order < 1) tail_order = 1;

    // Partial sums S_N at N = N0 * 2^k; tail ~ c/N + d/N^2 + ... so Richardson
    // in 1/N accelerates them. Terms are accumulated incrementally.
    constexpr long kN0 = 16;
    constexpr int kMaxLevels = 22;

    double running = term(0);
    long covered = 0;
    std::vector<double> partial; // S at N0*2^k

    auto extend_to = [&](long N) {
        for (long n = covered + 1; n <= N; ++n) running += term(n) + term(-n);
        covered = N;
    };

    double prev_acc = 0.0;
    bool have_prev = false;
    for (int level = 0; level < kMaxLevels; ++level) {
        const long N = kN0 << level;
        extend_to(N);
        partial.push_back(running);

        // tail-decay sanity once enough history exists
        if (level >= 2) {
            const double t_now = std::abs(term(N)) + std::abs(term(-N));
            const double t_then = std::abs(term(N / 2)) + std::abs(term(-N / 2));
            if (t_now > t_then && t_now > tol)
                throw ConvergenceError("sum_matsubara: term magnitudes are not decreasing",
                                       running, t_now);
        }

        if (partial.size() < static_cast<std::size_t>(tail_order + 1)) continue;

        // Richardson table on the most recent (tail_order+1) partial sums.
        std::vector<double> row(partial.end() - (tail_order + 1), partial.end());
        for (int lev = 1; lev <= tail_order; ++lev) {
            const double f = std::pow(2.0, lev);
            for (std::size_t i = 0; i + 1 < row.size(); ++i)
                row[i] = (f * row[i + 1] - row[i]) / (f - 1.0);
            row.pop_back();
        }
        const double acc = row.front();
        if (have_prev && std::abs(acc - prev_acc) < tol) return acc;
        prev_acc = acc;
        have_prev = true;
    }
    throw ConvergenceError("sum_matsubara: did not converge within the level budget", prev_acc,
                           std::abs(prev_acc - partial[partial.size() - 2]));
}

} // namespace sbmtcl::special
