#pragma once

#include <span>

namespace qlj::specialfn {

// Normalized Hermite function phi_n(u) = H_n(u) exp(-u^2/2) / sqrt(2^n n! sqrt(pi))
// and its derivative with respect to u.
struct HermiteEval {
    int n;
    double u;
    double value;
    double derivative;
};

// Throws std::invalid_argument for n < 0.
HermiteEval hermite_function(int n, double u);

// Fills values[k] = phi_k(u) and derivs[k] = phi_k'(u) for k = 0..n_max.
// Both spans must hold at least n_max + 1 entries.
void hermite_table(int n_max, double u, std::span<double> values, std::span<double> derivs);

// 1D oscillator eigenfunction omega^(1/4) phi_n(sqrt(omega) x).
double psi_1d(int n, double omega, double x);

// d/dx of psi_1d.
double psi_1d_derivative(int n, double omega, double x);

// log[(qN)! / ((pK)! (q(N-K))!)]
double log_weight(int N, int K, int p, int q);

// log(n!) via log-gamma; reentrant.
double log_factorial(int n);

}  // namespace qlj::specialfn
