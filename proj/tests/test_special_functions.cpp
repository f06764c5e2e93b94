#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "sbmtcl/special_functions.hpp"

using namespace sbmtcl;
using special::digamma;
using special::sum_matsubara;
using special::trigamma;
using Complex = std::complex<double>;

namespace {

// Euler-Mascheroni via harmonic sums with Euler-Maclaurin corrections; an
// oracle independent of the digamma implementation.
double euler_gamma_oracle() {
    const int n = 200;
    double h = 0.0;
    for (int k = 1; k <= n; ++k) h += 1.0 / k;
    const double N = n;
    return h - std::log(N) - 1.0 / (2.0 * N) + 1.0 / (12.0 * N * N) -
           1.0 / (120.0 * N * N * N * N);
}

// zeta(2) the same way.
double zeta2_oracle() {
    const int n = 200;
    double s = 0.0;
    for (int k = 1; k <= n; ++k) s += 1.0 / (static_cast<double>(k) * k);
    const double N = n;
    return s + 1.0 / N - 1.0 / (2.0 * N * N) + 1.0 / (6.0 * N * N * N);
}

} // namespace

TEST_CASE("digamma(1) is minus the Euler-Mascheroni constant") {
    const double gamma = euler_gamma_oracle();
    CHECK(digamma({1.0, 0.0}).real() == doctest::Approx(-gamma).epsilon(1e-13));
    CHECK(digamma({1.0, 0.0}).real() == doctest::Approx(-0.577215664901532861).epsilon(1e-14));
    CHECK(std::abs(digamma({1.0, 0.0}).imag()) < 1e-15);
}

TEST_CASE("trigamma(1) is zeta(2)") {
    const double z2 = zeta2_oracle();
    CHECK(trigamma({1.0, 0.0}).real() == doctest::Approx(z2).epsilon(1e-12));
    CHECK(trigamma({1.0, 0.0}).real() ==
          doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-14));
}

TEST_CASE("reference values across the plane") {
    // frozen against an independent arbitrary-precision implementation
    struct Ref {
        Complex z, psi0, psi1;
    };
    const Ref refs[] = {
        {{0.5, 0.0}, {-1.96351002602142348, 0.0}, {4.93480220054467931, 0.0}},
        {{-1.5, 0.5},
         {0.731892637354522686, 2.64065951997751459},
         {1.10380249554099377, -0.111892198603484614}},
        {{3.0, -4.0},
         {1.55035981733341091, -1.01050220918604445},
         {0.113153113946791704, 0.179680016184178367}},
        {{0.0, 2.0},
         {0.714591515373977527, 1.82080728264223023},
         {-0.125068837859055417, -0.477825550147229748}},
    };
    for (const auto& r : refs) {
        CHECK(std::abs(digamma(r.z) - r.psi0) <= 1e-12 * (1.0 + std::abs(r.psi0)));
        CHECK(std::abs(trigamma(r.z) - r.psi1) <= 1e-12 * (1.0 + std::abs(r.psi1)));
    }
}

TEST_CASE("recurrence identity at random complex points") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> re(-8.0, 8.0), im(-8.0, 8.0);
    for (int i = 0; i < 200; ++i) {
        Complex z{re(rng), im(rng)};
        if (std::abs(z.imag()) < 0.05) z += Complex{0.0, 0.1}; // stay off the pole line
        const Complex lhs = digamma(z + 1.0) - digamma(z);
        CHECK(std::abs(lhs - 1.0 / z) < 1e-11 * (1.0 + std::abs(1.0 / z)));
        const Complex lt = trigamma(z + 1.0) - trigamma(z);
        CHECK(std::abs(lt + 1.0 / (z * z)) < 1e-11 * (1.0 + std::abs(1.0 / (z * z))));
    }
}

TEST_CASE("poles are rejected") {
    CHECK_THROWS_AS(digamma({0.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(digamma({-3.0, 0.0}), ValidationError);
    CHECK_THROWS_AS(trigamma({-1.0, 0.0}), ValidationError);
}

TEST_CASE("matsubara sum: zeta(2) and the zero series") {
    auto inv_sq = [](long n) { return n == 0 ? 0.0 : 0.5 / (static_cast<double>(n) * n); };
    CHECK(sum_matsubara(inv_sq, 1e-12) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-10));

    auto zero = [](long) { return 0.0; };
    CHECK(sum_matsubara(zero, 1e-12) == doctest::Approx(0.0));
}

TEST_CASE("matsubara sum rejects non-decreasing tails") {
    auto flat = [](long n) { return n == 0 ? 0.0 : 1.0; };
    CHECK_THROWS_AS(sum_matsubara(flat, 1e-10), ConvergenceError);
}

TEST_CASE("matsubara sum of a Lorentzian tail has the coth closed form") {
    // sum over Z of 1/(n^2 + 4) = (pi/2) coth(2 pi)
    auto term = [](long n) { return 1.0 / (static_cast<double>(n) * n + 4.0); };
    const double expected = M_PI / 2.0 / std::tanh(2.0 * M_PI);
    CHECK(sum_matsubara(term, 1e-12) == doctest::Approx(expected).epsilon(1e-10));
}
