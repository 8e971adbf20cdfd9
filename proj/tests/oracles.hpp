#pragma once

// Independent reference computations used only by tests.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <complex>
#include <vector>

#include "qlj/states.hpp"

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_50;
using boost::multiprecision::cpp_int;

inline cpp_int factorial(int n) {
    cpp_int r = 1;
    for (int k = 2; k <= n; ++k) r *= k;
    return r;
}

// log[(qN)! / ((pK)! (q(N-K))!)] from exact integers.
inline double log_weight(int N, int K, int p, int q) {
    mp num(factorial(q * N));
    mp den(factorial(p * K) * factorial(q * (N - K)));
    return static_cast<double>(boost::multiprecision::log(num / den));
}

// phi_n(u) from the physicists' Hermite recurrence in 50-digit arithmetic,
// normalized explicitly by sqrt(2^n n! sqrt(pi)).
inline double hermite_function(int n, double u_in) {
    const mp u(u_in);
    mp h0 = 1, h1 = 2 * u;
    mp h = n == 0 ? h0 : h1;
    for (int k = 1; k < n; ++k) {
        h = 2 * u * h1 - 2 * k * h0;
        h0 = h1;
        h1 = h;
    }
    const mp pi = boost::math::constants::pi<mp>();
    const mp norm = boost::multiprecision::sqrt(boost::multiprecision::pow(mp(2), n) * mp(factorial(n)) *
                                                boost::multiprecision::sqrt(pi));
    return static_cast<double>(h * boost::multiprecision::exp(-u * u / 2) / norm);
}

// (1+|z|^2)^(-N/2) sqrt(C(N,K)) z^K, ascending K.
inline std::vector<std::complex<double>> binomial_su2(int N, std::complex<double> z) {
    std::vector<std::complex<double>> c(N + 1);
    const double pref = std::pow(1 + std::norm(z), -0.5 * N);
    std::complex<double> zk = 1;
    for (int K = 0; K <= N; ++K) {
        mp binom = mp(factorial(N)) / mp(factorial(K) * factorial(N - K));
        c[K] = pref * std::sqrt(static_cast<double>(binom)) * zk;
        zk *= z;
    }
    return c;
}

inline std::vector<qlj::states::FockCoeff> as_kets(const std::vector<std::complex<double>>& c, int p, int q) {
    const int N = static_cast<int>(c.size()) - 1;
    std::vector<qlj::states::FockCoeff> out;
    for (int K = 0; K <= N; ++K) out.push_back({p * K, q * (N - K), c[K]});
    return out;
}

}  // namespace oracle
