#include "qlj/specialfn.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace qlj::specialfn {

namespace {

// pi^(-1/4)
const double kPhi0 = std::pow(std::numbers::pi, -0.25);

// Mantissas above this are rescaled so large |u| does not underflow phi_0
// before the recurrence has grown the higher orders back into range.
constexpr double kRescale = 1e100;
const double kLogRescale = std::log(kRescale);

void check_order(int n) {
    if (n < 0) throw std::invalid_argument("hermite order must be nonnegative");
}

}  // namespace

void hermite_table(int n_max, double u, std::span<double> values, std::span<double> derivs) {
    check_order(n_max);
    if (values.size() < static_cast<std::size_t>(n_max) + 1 ||
        derivs.size() < static_cast<std::size_t>(n_max) + 1)
        throw std::invalid_argument("hermite_table: output spans too small");

    // Run the recurrence on mantissas m_k with phi_k = m_k * exp(log_scale).
    double log_scale = -0.5 * u * u;
    double factor = std::exp(log_scale);
    double prev = 0.0;
    double cur = kPhi0;
    values[0] = cur * factor;
    for (int k = 0; k < n_max; ++k) {
        double next = std::sqrt(2.0 / (k + 1)) * u * cur - std::sqrt(double(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
        if (std::abs(cur) > kRescale) {
            cur /= kRescale;
            prev /= kRescale;
            log_scale += kLogRescale;
            factor = std::exp(log_scale);
        }
        values[k + 1] = cur * factor;
    }
    derivs[0] = -u * values[0];
    for (int k = 1; k <= n_max; ++k)
        derivs[k] = std::sqrt(2.0 * k) * values[k - 1] - u * values[k];
}

HermiteEval hermite_function(int n, double u) {
    check_order(n);
    std::vector<double> v(n + 1), d(n + 1);
    hermite_table(n, u, v, d);
    return {n, u, v[n], d[n]};
}

double psi_1d(int n, double omega, double x) {
    if (!(omega > 0)) throw std::invalid_argument("psi_1d: omega must be positive");
    double s = std::sqrt(omega);
    return std::sqrt(s) * hermite_function(n, s * x).value;
}

double psi_1d_derivative(int n, double omega, double x) {
    if (!(omega > 0)) throw std::invalid_argument("psi_1d_derivative: omega must be positive");
    double s = std::sqrt(omega);
    return s * std::sqrt(s) * hermite_function(n, s * x).derivative;
}

double log_factorial(int n) {
    if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
    int sign = 0;
    return ::lgamma_r(n + 1.0, &sign);
}

double log_weight(int N, int K, int p, int q) {
    if (N < 0 || K < 0 || K > N) throw std::invalid_argument("log_weight: need 0 <= K <= N");
    if (p < 1 || q < 1) throw std::invalid_argument("log_weight: p and q must be positive");
    return log_factorial(q * N) - log_factorial(p * K) - log_factorial(q * (N - K));
}

}  // namespace qlj::specialfn
