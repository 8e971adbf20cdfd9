#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

namespace qlj::states {

using cplx = std::complex<double>;

// Frequencies w_x = q w0, w_y = p w0, with (p, q) = m (p0, q0) and gcd(p0, q0) = 1.
struct OscillatorParams {
    int p = 1;
    int q = 1;
    double omega0 = 1.0;
    int p0 = 1;
    int q0 = 1;
    int m = 1;

    // Validates and fills the coprime reduction.
    static OscillatorParams make(int p, int q, double omega0 = 1.0);

    double omega_x() const { return q * omega0; }
    double omega_y() const { return p * omega0; }
    bool fundamental() const { return m == 1; }
};

// alpha real >= 0, beta = beta_abs e^{i phi}.
struct AmplitudePair {
    double alpha = 1.0;
    double beta_abs = 1.0;
    double phi = 0.0;

    cplx beta() const { return std::polar(beta_abs, phi); }
};

// Subspace amplitude (zeta or xi) in log-polar form so that alpha^p / beta^q
// never overflows and the alpha = 0 / beta = 0 limits are representable.
struct SubspaceAmplitude {
    double log_abs = 0.0;  // -inf: zero (single ket K = 0); +inf: at infinity (K = N)
    double arg = 0.0;

    static SubspaceAmplitude from_complex(cplx z);
    static SubspaceAmplitude at_infinity();
    // xi = alpha^p / beta^q = |alpha|^p / |beta|^q e^{-i q phi}. Throws if both vanish.
    static SubspaceAmplitude from_pair(const AmplitudePair& amp, int p, int q);

    bool is_zero() const;
    bool is_infinite() const;
    cplx value() const;  // finite amplitudes only
};

enum class Provenance { iso_fundamental, aniso_fundamental, higher_harmonic, oracle, su2_bloch };

std::string_view to_string(Provenance p);
Provenance provenance_from_string(std::string_view s);

struct FockCoeff {
    int nx;
    int ny;
    cplx c;
};

// Normalized vector on the kets |pK, q(N-K)>, ordered by ascending K.
struct LissajousState {
    OscillatorParams params;
    int N = 0;
    std::vector<FockCoeff> coeffs;
    double energy = 0.0;
    Provenance provenance = Provenance::aniso_fundamental;

    double norm_squared() const;
};

double state_energy(int N, int p, int q, double omega0);

// c_K = (1+|zeta|^2)^(-N/2) C(N,K)^(1/2) zeta^K on |K, N-K>.
LissajousState build_isotropic(int N, cplx zeta);
LissajousState build_isotropic(int N, SubspaceAmplitude zeta);

// c_K proportional to [(qN)!/((pK)!(q(N-K))!)]^(1/2) xi^K on |pK, q(N-K)>.
LissajousState build_anisotropic(int N, int p, int q, cplx xi, double omega0 = 1.0);
LissajousState build_anisotropic(int N, int p, int q, SubspaceAmplitude xi, double omega0 = 1.0);

// Shorthand: build_anisotropic with xi taken from the coherent amplitudes.
LissajousState build_from_amplitudes(int N, const OscillatorParams& params, const AmplitudePair& amp);

// log N_{N,p,q}: minus half the log of sum_K (qN)!/((pK)!(q(N-K))!) |xi|^{2K}.
double log_norm_constant(int N, int p, int q, SubspaceAmplitude xi);

struct HigherHarmonic {
    cplx weight;
    std::vector<LissajousState> terms;
};

// The m fundamental (p0, q0) states with mN quanta and base frequency m w0
// whose weighted sum is the (m p0, m q0) state. Throws on gcd(p0, q0) != 1 or m < 2.
HigherHarmonic higher_harmonic_decomposition(int N, int m, int p0, int q0, const AmplitudePair& amp,
                                             double omega0 = 1.0);

// weight * sum of the term vectors over every ket they touch, ascending nx.
// Kets off the (m p0, m q0) subspace cancel to rounding level.
std::vector<FockCoeff> superpose(const HigherHarmonic& hh);

// Truncated two-mode coherent state projected onto the (p, q) subspace.
// Independent of the closed-form builders. Throws when every selected entry vanishes
// or when the truncated tail exceeds tail_tol.
LissajousState project_coherent_oracle(const AmplitudePair& amp, int N, int p, int q, double tail_tol,
                                       double omega0 = 1.0);

// Per-mode Fock cutoff used by the oracle: ceil(|a|^2 + 12|a| + 30).
int oracle_cutoff(double abs_a);

// build_isotropic(N, tan(theta/2) e^{-i phi}); theta = pi gives |N, 0>.
LissajousState su2_from_bloch(int N, double theta, double phi);

// Angular-momentum labels stored doubled so half-integers are exact.
struct AngularMomentumState {
    int two_J = 0;
    struct Entry {
        int two_M;
        cplx c;
    };
    std::vector<Entry> coeffs;  // ascending M
};

AngularMomentumState fock_to_angular(const LissajousState& s);
LissajousState angular_to_fock(const AngularMomentumState& a, double omega0 = 1.0);

// Max |a_i - b_i| over kets keyed by (nx, ny); a ket missing from one side
// counts as zero there. The phase variant first rotates b by arg <b|a>.
double max_coeff_diff_up_to_phase(const std::vector<FockCoeff>& a, const std::vector<FockCoeff>& b);
double max_coeff_diff(const std::vector<FockCoeff>& a, const std::vector<FockCoeff>& b);

}  // namespace qlj::states
