#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "qlj/specialfn.hpp"

using namespace qlj::specialfn;
using std::numbers::pi;

namespace {

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace

TEST_CASE("ground and first excited values at the origin") {
    auto h0 = hermite_function(0, 0.0);
    CHECK(h0.value == doctest::Approx(0.75112554446494).epsilon(1e-14));
    CHECK(h0.derivative == 0.0);
    auto h1 = hermite_function(1, 0.0);
    CHECK(h1.value == 0.0);
    CHECK(h1.derivative == doctest::Approx(std::sqrt(2.0) * std::pow(pi, -0.25)).epsilon(1e-14));
}

TEST_CASE("phi_4 matches the explicit H_4 polynomial") {
    const double u = 1.3;
    const double h4 = 16 * std::pow(u, 4) - 48 * u * u + 12;
    const double expect = h4 * std::exp(-u * u / 2) / std::sqrt(16.0 * 24.0 * std::sqrt(pi));
    CHECK(rel_err(hermite_function(4, u).value, expect) <= 1e-13);
}

TEST_CASE("psi_1d matches the 50-digit recurrence oracle") {
    const double omega = 2.0, x = 0.7;
    const double expect = std::pow(omega, 0.25) * oracle::hermite_function(20, std::sqrt(omega) * x);
    CHECK(rel_err(psi_1d(20, omega, x), expect) <= 1e-12);
    CHECK(psi_1d(0, 1.0, 0.0) == doctest::Approx(std::pow(pi, -0.25)).epsilon(1e-15));
}

TEST_CASE("deep tails stay accurate through mantissa rescaling") {
    for (auto [n, u] : {std::pair{150, 25.0}, {200, 30.0}, {60, 18.0}, {5, 26.0}}) {
        CAPTURE(n);
        CAPTURE(u);
        const double expect = oracle::hermite_function(n, u);
        CHECK(rel_err(hermite_function(n, u).value, expect) <= 1e-10);
    }
}

TEST_CASE("parity, boundedness and finiteness") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dist(-30.0, 30.0);
    std::vector<double> v(201), d(201);
    for (int trial = 0; trial < 200; ++trial) {
        const double u = dist(rng);
        hermite_table(200, u, v, d);
        std::vector<double> vm(201), dm(201);
        hermite_table(200, -u, vm, dm);
        for (int n = 0; n <= 200; ++n) {
            REQUIRE(std::isfinite(v[n]));
            REQUIRE(std::isfinite(d[n]));
            CHECK(std::abs(v[n]) <= 0.76);
            const double sign = n % 2 ? -1.0 : 1.0;
            CHECK(vm[n] == doctest::Approx(sign * v[n]).epsilon(1e-13).scale(1e-300));
        }
    }
}

TEST_CASE("orthonormality under trapezoid quadrature") {
    const int points = 4096;
    for (double omega : {1.0, 2.0, 3.0}) {
        const double L = 20 / std::sqrt(omega), h = 2 * L / (points - 1);
        std::vector<std::vector<double>> table(41, std::vector<double>(points));
        for (int k = 0; k < points; ++k)
            for (int n = 0; n <= 40; ++n) table[n][k] = psi_1d(n, omega, -L + k * h);
        double worst = 0;
        for (int n = 0; n <= 40; ++n)
            for (int m = n; m <= 40; ++m) {
                double s = 0;
                for (int k = 0; k < points; ++k) s += (k == 0 || k == points - 1 ? 0.5 : 1.0) * table[n][k] * table[m][k];
                worst = std::max(worst, std::abs(s * h - (n == m ? 1.0 : 0.0)));
            }
        CAPTURE(omega);
        CHECK(worst <= 1e-8);
    }
}

TEST_CASE("analytic derivative agrees with central differences") {
    const double step = 1e-5;
    double worst = 0;
    for (int n = 0; n <= 60; ++n)
        for (double u = -9.0; u <= 9.0; u += 0.37) {
            const double fd = (hermite_function(n, u + step).value - hermite_function(n, u - step).value) / (2 * step);
            worst = std::max(worst, std::abs(fd - hermite_function(n, u).derivative));
        }
    CHECK(worst <= 1e-6);
}

TEST_CASE("psi_1d derivative is the chain-rule scaled phi'") {
    const double omega = 3.0, x = -0.4, h = 1e-6;
    const double fd = (psi_1d(7, omega, x + h) - psi_1d(7, omega, x - h)) / (2 * h);
    CHECK(psi_1d_derivative(7, omega, x) == doctest::Approx(fd).epsilon(1e-7));
}

TEST_CASE("log_weight against exact integers") {
    CHECK(log_weight(13, 0, 1, 1) == 0.0);
    CHECK(log_weight(2, 1, 1, 1) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(rel_err(log_weight(20, 7, 2, 3), oracle::log_weight(20, 7, 2, 3)) <= 1e-12);
    for (int K = 0; K <= 20; ++K) CHECK(rel_err(log_weight(20, K, 3, 6), oracle::log_weight(20, K, 3, 6)) <= 1e-12);
}

TEST_CASE("precondition violations throw") {
    CHECK_THROWS_AS(hermite_function(-1, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(psi_1d(0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(psi_1d(0, -2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(log_weight(3, 4, 1, 1), std::invalid_argument);
}
