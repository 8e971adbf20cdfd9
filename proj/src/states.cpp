#include "qlj/states.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "qlj/specialfn.hpp"

namespace qlj::states {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

double log_sum_exp(const std::vector<double>& v) {
    double mx = *std::max_element(v.begin(), v.end());
    double s = 0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

}  // namespace

OscillatorParams OscillatorParams::make(int p, int q, double omega0) {
    require(p >= 1 && q >= 1, "p and q must be positive integers");
    require(omega0 > 0 && std::isfinite(omega0), "omega0 must be positive and finite");
    int g = std::gcd(p, q);
    return {p, q, omega0, p / g, q / g, g};
}

SubspaceAmplitude SubspaceAmplitude::from_complex(cplx z) {
    require(std::isfinite(z.real()) && std::isfinite(z.imag()), "subspace amplitude must be finite");
    if (z == cplx{}) return {-kInf, 0.0};
    return {std::log(std::abs(z)), std::arg(z)};
}

SubspaceAmplitude SubspaceAmplitude::at_infinity() { return {kInf, 0.0}; }

SubspaceAmplitude SubspaceAmplitude::from_pair(const AmplitudePair& amp, int p, int q) {
    require(amp.alpha >= 0 && amp.beta_abs >= 0, "amplitude magnitudes must be nonnegative");
    require(amp.alpha > 0 || amp.beta_abs > 0, "alpha and beta cannot both vanish");
    require(std::isfinite(amp.phi), "phase must be finite");
    if (amp.beta_abs == 0) return {kInf, 0.0};
    if (amp.alpha == 0) return {-kInf, 0.0};
    // Equal powers go through the ratio so a common rescaling of alpha and beta
    // by a power of two leaves xi bit-identical.
    const double log_abs = p == q ? p * std::log(amp.alpha / amp.beta_abs)
                                  : p * std::log(amp.alpha) - q * std::log(amp.beta_abs);
    return {log_abs, -q * amp.phi};
}

bool SubspaceAmplitude::is_zero() const { return log_abs == -kInf; }
bool SubspaceAmplitude::is_infinite() const { return log_abs == kInf; }

cplx SubspaceAmplitude::value() const {
    require(!is_infinite(), "amplitude at infinity has no finite value");
    if (is_zero()) return {};
    return std::polar(std::exp(log_abs), arg);
}

std::string_view to_string(Provenance p) {
    switch (p) {
        case Provenance::iso_fundamental: return "iso-fundamental";
        case Provenance::aniso_fundamental: return "aniso-fundamental";
        case Provenance::higher_harmonic: return "higher-harmonic";
        case Provenance::oracle: return "oracle";
        case Provenance::su2_bloch: return "su2-bloch";
    }
    return "unknown";
}

Provenance provenance_from_string(std::string_view s) {
    for (auto p : {Provenance::iso_fundamental, Provenance::aniso_fundamental, Provenance::higher_harmonic,
                   Provenance::oracle, Provenance::su2_bloch})
        if (to_string(p) == s) return p;
    throw std::invalid_argument("unknown provenance tag: " + std::string(s));
}

double LissajousState::norm_squared() const {
    double s = 0;
    for (const auto& e : coeffs) s += std::norm(e.c);
    return s;
}

double state_energy(int N, int p, int q, double omega0) {
    return omega0 * (double(N) * p * q + 0.5 * (q + p));
}

LissajousState build_anisotropic(int N, int p, int q, SubspaceAmplitude xi, double omega0) {
    require(N >= 0, "N must be nonnegative");
    LissajousState s;
    s.params = OscillatorParams::make(p, q, omega0);
    s.N = N;
    s.energy = state_energy(N, p, q, omega0);
    s.provenance = p == 1 && q == 1 ? Provenance::iso_fundamental
                   : s.params.fundamental() ? Provenance::aniso_fundamental
                                            : Provenance::higher_harmonic;
    s.coeffs.reserve(N + 1);
    for (int K = 0; K <= N; ++K) s.coeffs.push_back({p * K, q * (N - K), cplx{}});

    if (xi.is_zero() || xi.is_infinite()) {
        s.coeffs[xi.is_zero() ? 0 : N].c = 1.0;
        return s;
    }
    std::vector<double> lc(N + 1);
    for (int K = 0; K <= N; ++K) lc[K] = 0.5 * specialfn::log_weight(N, K, p, q) + K * xi.log_abs;
    double shift = *std::max_element(lc.begin(), lc.end());
    double norm = 0;
    for (int K = 0; K <= N; ++K) {
        double mag = std::exp(lc[K] - shift);
        s.coeffs[K].c = std::polar(mag, K * xi.arg);
        norm += mag * mag;
    }
    double inv = 1.0 / std::sqrt(norm);
    for (auto& e : s.coeffs) e.c *= inv;
    return s;
}

LissajousState build_anisotropic(int N, int p, int q, cplx xi, double omega0) {
    return build_anisotropic(N, p, q, SubspaceAmplitude::from_complex(xi), omega0);
}

LissajousState build_isotropic(int N, SubspaceAmplitude zeta) { return build_anisotropic(N, 1, 1, zeta); }

LissajousState build_isotropic(int N, cplx zeta) { return build_anisotropic(N, 1, 1, zeta); }

LissajousState build_from_amplitudes(int N, const OscillatorParams& params, const AmplitudePair& amp) {
    return build_anisotropic(N, params.p, params.q, SubspaceAmplitude::from_pair(amp, params.p, params.q),
                             params.omega0);
}

double log_norm_constant(int N, int p, int q, SubspaceAmplitude xi) {
    require(N >= 0, "N must be nonnegative");
    require(!xi.is_infinite(), "normalization constant vanishes at infinity");
    if (xi.is_zero()) return 0.0;  // only K = 0 contributes, with weight 1
    std::vector<double> terms(N + 1);
    for (int K = 0; K <= N; ++K) terms[K] = specialfn::log_weight(N, K, p, q) + 2.0 * K * xi.log_abs;
    return -0.5 * log_sum_exp(terms);
}

HigherHarmonic higher_harmonic_decomposition(int N, int m, int p0, int q0, const AmplitudePair& amp,
                                             double omega0) {
    require(m >= 2, "higher harmonic needs m >= 2");
    require(p0 >= 1 && q0 >= 1 && std::gcd(p0, q0) == 1, "p0 and q0 must be coprime positive integers");
    require(N >= 0, "N must be nonnegative");
    const int p = m * p0, q = m * q0;
    SubspaceAmplitude xi0 = SubspaceAmplitude::from_pair(amp, p0, q0);
    SubspaceAmplitude xi = SubspaceAmplitude::from_pair(amp, p, q);

    HigherHarmonic hh;
    if (xi.is_zero() || xi.is_infinite()) {
        hh.weight = 1.0 / m;
    } else {
        hh.weight = std::exp(log_norm_constant(N, p, q, xi) - log_norm_constant(m * N, p0, q0, xi0)) / m;
    }
    for (int n = 0; n < m; ++n) {
        // e^{-i(2 pi n + q0 m phi)/m} on top of |xi0|.
        SubspaceAmplitude t{xi0.log_abs, -(2 * std::numbers::pi * n) / m - q0 * amp.phi};
        hh.terms.push_back(build_anisotropic(m * N, p0, q0, t, m * omega0));
    }
    return hh;
}

std::vector<FockCoeff> superpose(const HigherHarmonic& hh) {
    std::map<std::pair<int, int>, cplx> acc;
    for (const auto& term : hh.terms)
        for (const auto& e : term.coeffs) acc[{e.nx, e.ny}] += hh.weight * e.c;
    std::vector<FockCoeff> out;
    out.reserve(acc.size());
    for (const auto& [k, c] : acc) out.push_back({k.first, k.second, c});
    return out;
}

int oracle_cutoff(double abs_a) { return static_cast<int>(std::ceil(abs_a * abs_a + 12 * abs_a + 30)); }

namespace {

// Single-mode coherent coefficients a^n / sqrt(n!) e^{-|a|^2/2}, n = 0..n_max,
// plus a bound on the Poisson mass beyond n_max.
std::pair<std::vector<cplx>, double> coherent_mode(cplx a, int n_max) {
    std::vector<cplx> c(n_max + 1);
    c[0] = std::exp(-0.5 * std::norm(a));
    for (int n = 1; n <= n_max; ++n) c[n] = c[n - 1] * a / std::sqrt(double(n));
    double lam = std::norm(a);
    double next = std::norm(c[n_max]) * lam / (n_max + 1);
    double ratio = lam / (n_max + 2);
    double tail = ratio < 1 ? next / (1 - ratio) : kInf;
    return {std::move(c), tail};
}

}  // namespace

LissajousState project_coherent_oracle(const AmplitudePair& amp, int N, int p, int q, double tail_tol,
                                       double omega0) {
    require(N >= 0, "N must be nonnegative");
    require(tail_tol > 0, "tail_tol must be positive");
    require(amp.alpha >= 0 && amp.beta_abs >= 0, "amplitude magnitudes must be nonnegative");
    const cplx a = amp.alpha;
    const cplx b = amp.beta();
    const int nx_max = std::max(oracle_cutoff(std::abs(a)), p * N);
    const int ny_max = std::max(oracle_cutoff(std::abs(b)), q * N);
    auto [cx, tail_x] = coherent_mode(a, nx_max);
    auto [cy, tail_y] = coherent_mode(b, ny_max);
    if (tail_x + tail_y >= tail_tol) throw std::runtime_error("oracle truncation tail exceeds tolerance");

    // Full truncated box, then the subspace selection.
    std::vector<cplx> box(std::size_t(nx_max + 1) * (ny_max + 1));
    for (int n = 0; n <= nx_max; ++n)
        for (int k = 0; k <= ny_max; ++k) box[std::size_t(n) * (ny_max + 1) + k] = cx[n] * cy[k];

    LissajousState s;
    s.params = OscillatorParams::make(p, q, omega0);
    s.N = N;
    s.energy = state_energy(N, p, q, omega0);
    s.provenance = Provenance::oracle;
    double norm = 0;
    for (int K = 0; K <= N; ++K) {
        int nx = p * K, ny = q * (N - K);
        cplx c = box[std::size_t(nx) * (ny_max + 1) + ny];
        s.coeffs.push_back({nx, ny, c});
        norm += std::norm(c);
    }
    if (!(norm > 0)) throw std::domain_error("projection onto the subspace vanishes");
    double inv = 1.0 / std::sqrt(norm);
    for (auto& e : s.coeffs) e.c *= inv;
    return s;
}

LissajousState su2_from_bloch(int N, double theta, double phi) {
    require(theta >= 0 && theta <= std::numbers::pi, "theta must lie in [0, pi]");
    SubspaceAmplitude z = theta == std::numbers::pi ? SubspaceAmplitude::at_infinity()
                                                    : SubspaceAmplitude{std::log(std::tan(theta / 2)), -phi};
    LissajousState s = build_isotropic(N, z);
    s.provenance = Provenance::su2_bloch;
    return s;
}

AngularMomentumState fock_to_angular(const LissajousState& s) {
    require(s.params.p == 1 && s.params.q == 1, "angular momentum map needs p = q = 1");
    AngularMomentumState a;
    a.two_J = s.N;
    for (const auto& e : s.coeffs) a.coeffs.push_back({2 * e.nx - s.N, e.c});
    return a;
}

LissajousState angular_to_fock(const AngularMomentumState& a, double omega0) {
    require(a.two_J >= 0, "J must be nonnegative");
    LissajousState s;
    s.params = OscillatorParams::make(1, 1, omega0);
    s.N = a.two_J;
    s.energy = state_energy(s.N, 1, 1, omega0);
    s.provenance = Provenance::iso_fundamental;
    for (const auto& e : a.coeffs) {
        require((e.two_M + a.two_J) % 2 == 0 && std::abs(e.two_M) <= a.two_J, "M out of range");
        int K = (e.two_M + a.two_J) / 2;
        s.coeffs.push_back({K, s.N - K, e.c});
    }
    return s;
}

namespace {

std::map<std::pair<int, int>, std::pair<cplx, cplx>> pair_up(const std::vector<FockCoeff>& a,
                                                             const std::vector<FockCoeff>& b) {
    std::map<std::pair<int, int>, std::pair<cplx, cplx>> m;
    for (const auto& e : a) m[{e.nx, e.ny}].first += e.c;
    for (const auto& e : b) m[{e.nx, e.ny}].second += e.c;
    return m;
}

}  // namespace

double max_coeff_diff(const std::vector<FockCoeff>& a, const std::vector<FockCoeff>& b) {
    double worst = 0;
    for (const auto& [k, v] : pair_up(a, b)) worst = std::max(worst, std::abs(v.first - v.second));
    return worst;
}

double max_coeff_diff_up_to_phase(const std::vector<FockCoeff>& a, const std::vector<FockCoeff>& b) {
    auto m = pair_up(a, b);
    cplx overlap{};
    for (const auto& [k, v] : m) overlap += std::conj(v.second) * v.first;
    cplx rot = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx{1.0};
    double worst = 0;
    for (const auto& [k, v] : m) worst = std::max(worst, std::abs(v.first - rot * v.second));
    return worst;
}

}  // namespace qlj::states
