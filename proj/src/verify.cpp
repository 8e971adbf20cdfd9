#include "qlj/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <tuple>
#include <utility>

#include <fmt/core.h>

#include "qlj/classical.hpp"
#include "qlj/fields.hpp"
#include "qlj/semiclassical.hpp"
#include "qlj/states.hpp"

namespace qlj::verify {

using std::numbers::pi;
using cplx = std::complex<double>;
using states::AmplitudePair;
using states::OscillatorParams;

namespace {

struct Config {
    int p, q;
    AmplitudePair amp;
};

states::LissajousState build(const Config& c, int N = 20) {
    return states::build_from_amplitudes(N, OscillatorParams::make(c.p, c.q), c.amp);
}

Config unit(int p, int q, double phi) { return {p, q, {1.0, 1.0, phi}}; }

std::string label(const Config& c) {
    return fmt::format("({},{},{:.4f})", c.p, c.q, c.amp.phi);
}

CheckResult result(int id, std::string name) {
    CheckResult r;
    r.id = id;
    r.name = std::move(name);
    return r;
}

fields::EvalOptions eval_opts(const VerifyOptions& o) { return {o.threads, fields::NyquistPolicy::fail}; }

double max_abs(const std::vector<double>& v) {
    double m = 0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// c_{K+1} = c_K zeta sqrt((N-K)/(K+1)), c_0 = (1+|zeta|^2)^(-N/2).
std::vector<cplx> binomial_recurrence(int N, cplx zeta) {
    std::vector<cplx> c(N + 1);
    c[0] = std::pow(1 + std::norm(zeta), -0.5 * N);
    for (int K = 0; K < N; ++K) c[K + 1] = c[K] * zeta * std::sqrt(double(N - K) / (K + 1));
    return c;
}

CheckResult su2_equivalence(const VerifyOptions&) {
    const std::vector<cplx> zetas = {{0.0, 0.0},           {1.0, 0.0},           {-1.0, 0.0},
                                     {0.0, 1.0},           std::polar(0.3, 0.4), std::polar(2.5, -1.1),
                                     std::polar(0.7, 2.9), std::polar(1.9, pi / 7), std::polar(0.05, -2.0),
                                     std::polar(4.0, 0.9), std::polar(1.0, -pi / 6), std::polar(1.3, 3.0)};
    double closed = 0, oracle = 0;
    for (int N = 1; N <= 30; ++N)
        for (cplx z : zetas) {
            const auto s = states::build_isotropic(N, z);
            const auto ref = binomial_recurrence(N, z);
            for (int K = 0; K <= N; ++K) closed = std::max(closed, std::abs(s.coeffs[K].c - ref[K]));
            const auto o = states::project_coherent_oracle({0.8 * std::abs(z), 0.8, -std::arg(z)}, N, 1, 1, 1e-14);
            oracle = std::max(oracle, states::max_coeff_diff_up_to_phase(s.coeffs, o.coeffs));
        }
    auto r = result(1, "SU(2) equivalence");
    r.measured = std::max(closed, oracle);
    r.threshold = 1e-12;
    r.pass = r.measured <= r.threshold;
    r.detail = fmt::format("binomial {:.2e}, oracle {:.2e}", closed, oracle);
    return r;
}

CheckResult superposition_identity(const VerifyOptions& o) {
    const std::vector<std::tuple<int, int, int>> families = {{2, 1, 1}, {3, 1, 1}, {4, 1, 1},
                                                             {2, 1, 2}, {3, 1, 2}, {2, 2, 3}};
    const std::vector<AmplitudePair> amps = {{1.0, 1.0, 0.0}, {1.0, 1.0, pi / 7}, {0.6, 1.3, -0.8}};
    double coeff = 0, wave = 0;
    for (auto [m, p0, q0] : families)
        for (int N = 0; N <= 10; ++N)
            for (std::size_t a = 0; a < amps.size(); ++a) {
                const auto hh = states::higher_harmonic_decomposition(N, m, p0, q0, amps[a]);
                const auto direct = states::build_from_amplitudes(N, OscillatorParams::make(m * p0, m * q0), amps[a]);
                coeff = std::max(coeff, states::max_coeff_diff(states::superpose(hh), direct.coeffs));
                if (a != 1 || (N != 1 && N != 5 && N != 10)) continue;
                const auto grid = fields::default_extent(direct, 256, 256);
                const auto ref = fields::eval_state(direct, grid, eval_opts(o));
                std::vector<cplx> sum(grid.size());
                for (const auto& t : hh.terms) {
                    const auto f = fields::eval_state(t, grid, eval_opts(o));
                    for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += f.psi[k];
                }
                double peak = 0, err = 0;
                for (std::size_t k = 0; k < sum.size(); ++k) {
                    peak = std::max(peak, std::abs(ref.psi[k]));
                    err = std::max(err, std::abs(hh.weight * sum[k] - ref.psi[k]));
                }
                wave = std::max(wave, err / peak);
            }
    auto r = result(2, "higher-harmonic superposition");
    r.measured = coeff;
    r.threshold = 1e-12;
    r.pass = coeff <= 1e-12 && wave <= 1e-10;
    r.detail = fmt::format("coefficients {:.2e} (<= 1e-12), wavefunction {:.2e} of max|psi| (<= 1e-10)", coeff, wave);
    return r;
}

std::vector<Config> figure_configs() {
    const double t = std::tan(5 * pi / 12);
    return {unit(1, 1, 0),          unit(1, 1, pi / 2),       unit(1, 1, pi / 12),      unit(1, 1, pi / 8),
            unit(1, 1, pi / 6),     unit(1, 1, pi / 4),       unit(1, 1, 5 * pi / 12), {1, 1, {t, 1.0, 0.0}},
            {1, 1, {t, 1.0, pi / 2}}, unit(1, 2, 0),           unit(1, 2, pi / 4),       unit(1, 2, pi / 8),
            unit(2, 3, 0),          unit(2, 3, pi / 6),       unit(2, 3, pi / 12),      unit(2, 2, 0),
            unit(2, 2, pi / 2),     unit(2, 2, pi / 7),       unit(3, 3, 0),            unit(3, 3, pi / 6),
            unit(2, 4, 0),          unit(2, 4, pi / 6),       unit(3, 6, pi / 8)};
}

CheckResult normalization(const VerifyOptions& o) {
    double worst = 0;
    std::string where;
    for (const auto& c : figure_configs()) {
        const auto s = build(c);
        const auto g = fields::default_extent(s);
        const double err = std::abs(fields::quadrature(fields::eval_state(s, g, eval_opts(o)).rho, g) - 1);
        if (err >= worst) {
            worst = err;
            where = label(c);
        }
    }
    auto r = result(3, "normalization on auto extent");
    r.measured = worst;
    r.threshold = 1e-6;
    r.pass = worst <= 1e-6;
    r.detail = fmt::format("{} configurations, worst {}", figure_configs().size(), where);
    return r;
}

CheckResult static_limits(const VerifyOptions& o) {
    const std::vector<Config> cfgs = {unit(1, 1, 0), unit(1, 2, 0), unit(2, 3, 0), unit(2, 2, 0),
                                      unit(2, 2, pi / 2), unit(3, 3, 0), unit(2, 4, 0)};
    double worst = 0;
    for (const auto& c : cfgs) {
        const auto s = build(c);
        const auto f = fields::eval_state(s, fields::default_extent(s), eval_opts(o));
        const double rmax = max_abs(f.rho);
        const double j = std::max(max_abs(f.jx), max_abs(f.jy));
        worst = std::max(worst, j / (rmax * std::sqrt(s.params.omega0)));
    }
    auto r = result(4, "static limits carry no current");
    r.measured = worst;
    r.threshold = 1e-12;
    r.pass = worst <= 1e-12;
    r.detail = "max|J| / (max rho sqrt(w0)) over 7 configurations";
    return r;
}

CheckResult vortex_counts(const VerifyOptions& o) {
    const std::vector<std::pair<Config, int>> cases = {{unit(1, 2, pi / 4), 2}, {unit(2, 3, pi / 6), 6},
                                                       {unit(2, 2, pi / 7), 4}, {unit(3, 3, pi / 6), 9},
                                                       {unit(2, 4, pi / 6), 8}};
    int mismatches = 0;
    std::string detail;
    for (const auto& [c, expect] : cases) {
        const auto s = build(c);
        const auto v = fields::detect_vortices(fields::eval_state(s, fields::default_extent(s), eval_opts(o)), 1e-6);
        mismatches += v.count() != expect;
        detail += fmt::format("{}{}->{} ", label(c), v.count() == expect ? "" : "!", v.count());
    }
    auto r = result(5, "vortex counts");
    r.measured = mismatches;
    r.threshold = 0;
    r.pass = mismatches == 0;
    r.detail = detail;
    return r;
}

CheckResult circulation_sign(const VerifyOptions& o) {
    const auto s = build(unit(1, 1, pi / 2));
    const auto f = fields::eval_state(s, fields::default_extent(s), eval_opts(o));
    const double floor = 1e-3 * max_abs(f.rho);
    double lowest = INFINITY;
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) {
            const std::size_t k = f.grid.index(i, j);
            if (f.rho[k] > floor) lowest = std::min(lowest, f.grid.x(i) * f.jy[k] - f.grid.y(j) * f.jx[k]);
        }
    auto r = result(6, "counterclockwise circulation");
    r.measured = lowest;
    r.threshold = 0;
    r.pass = lowest >= 0;
    r.detail = "min of x Jy - y Jx where rho > 1e-3 max rho";
    return r;
}

CheckResult continuity(const VerifyOptions& o) {
    const std::vector<Config> cfgs = {unit(1, 1, pi / 2), unit(1, 2, pi / 4), unit(2, 3, pi / 6),
                                      unit(2, 2, pi / 7), unit(3, 3, pi / 6), unit(2, 4, pi / 6)};
    double worst_ratio_dev = 0, worst_abs = 0;
    bool ratios_ok = true;
    std::string detail;
    for (const auto& c : cfgs) {
        const auto s = build(c);
        const auto coarse = fields::divergence_residual(fields::eval_state(s, fields::default_extent(s, 256, 256), eval_opts(o)));
        const auto fine = fields::divergence_residual(fields::eval_state(s, fields::default_extent(s, 512, 512), eval_opts(o)));
        const double ratio = coarse.max_abs / fine.max_abs;
        ratios_ok = ratios_ok && std::abs(ratio - 4) <= 1.0;
        worst_ratio_dev = std::max(worst_ratio_dev, std::abs(ratio - 4));
        worst_abs = std::max(worst_abs, fine.normalized);
        detail += fmt::format("{} ratio {:.3f} residual {:.2e}; ", label(c), ratio, fine.normalized);
    }
    auto r = result(7, "continuity convergence");
    r.measured = worst_abs;
    r.threshold = 1e-3;
    r.pass = ratios_ok && worst_abs <= 1e-3;
    r.detail = detail + fmt::format("ratios within 4 +- 25%: {}", ratios_ok ? "yes" : "no");
    return r;
}

CheckResult ehrenfest(const VerifyOptions& o) {
    const std::vector<Config> cfgs = {unit(1, 1, 0), unit(1, 1, pi / 2), unit(1, 2, 0), unit(1, 2, pi / 8),
                                      unit(1, 2, pi / 4)};
    double worst = 0;
    for (const auto& c : cfgs) {
        semiclassical::SemiclassicalConfig cfg{c.amp, OscillatorParams::make(c.p, c.q), {}};
        const auto g = semiclassical::semiclassical_extent(cfg, 192, 192);
        worst = std::max(worst, semiclassical::ehrenfest_report(cfg, 32, g, eval_opts(o)).max_deviation);
    }
    auto r = result(8, "Ehrenfest centroid");
    r.measured = worst;
    r.threshold = 1e-6;
    r.pass = worst <= 1e-6;
    r.detail = "sup centroid distance over 32 times, 5 configurations";
    return r;
}

CheckResult interference(const VerifyOptions& o) {
    const auto hh = states::higher_harmonic_decomposition(20, 2, 1, 1, {1.0, 1.0, 0.0});
    const auto g = fields::default_extent(build(unit(2, 2, 0)));
    const auto d = fields::interference_decomposition(hh.weight, hh.terms, g, eval_opts(o));
    const auto inc = fields::incoherent_mixture(hh.terms, g, eval_opts(o));
    double identity = 0, gap = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        identity = std::max(identity, std::abs(d.rho_total[k] - (d.rho_diagonal[k] + d.rho_cross[k])));
        gap = std::max(gap, std::abs(d.rho_total[k] - inc[k]));
    }
    const double rel = gap / max_abs(d.rho_total);
    auto r = result(9, "coherent versus incoherent");
    r.measured = rel;
    r.threshold = 0.05;
    r.pass = identity <= 1e-14 && rel >= 0.05;
    r.detail = fmt::format("identity {:.2e} (<= 1e-14), gap {:.6f} of max rho (>= 0.05)", identity, rel);
    return r;
}

// Mass of rho inside |r - R| <= h, R = sqrt(N / w0) the classical radius.
double tube_mass(const fields::WaveField& f, double R, double h) {
    std::vector<double> inside(f.grid.size());
    for (int j = 0; j < f.grid.ny; ++j)
        for (int i = 0; i < f.grid.nx; ++i) {
            const std::size_t k = f.grid.index(i, j);
            inside[k] = std::abs(std::hypot(f.grid.x(i), f.grid.y(j)) - R) <= h ? f.rho[k] : 0.0;
        }
    return fields::quadrature(inside, f.grid);
}

CheckResult localization(const VerifyOptions& o) {
    std::vector<double> fixed, relative;
    for (int N : {5, 10, 20, 40}) {
        const auto s = build(unit(1, 1, pi / 2), N);
        const auto f = fields::eval_state(s, fields::default_extent(s), eval_opts(o));
        const double R = std::sqrt(double(N));
        fixed.push_back(tube_mass(f, R, 3 / std::sqrt(double(N))));
        relative.push_back(tube_mass(f, R, 0.3 * R));
    }
    bool increasing = true, rel_increasing = true;
    for (std::size_t k = 1; k < fixed.size(); ++k) {
        increasing = increasing && fixed[k] > fixed[k - 1];
        rel_increasing = rel_increasing && relative[k] > relative[k - 1];
    }
    auto r = result(10, "localization in a tube");
    r.measured = fixed.back() - fixed.front();
    r.threshold = 0;
    r.pass = increasing;
    r.detail = fmt::format("tube 3/sqrt(N): {:.4f} {:.4f} {:.4f} {:.4f}; tube 0.3 R: {:.4f} {:.4f} {:.4f} {:.4f} ({})",
                           fixed[0], fixed[1], fixed[2], fixed[3], relative[0], relative[1], relative[2], relative[3],
                           rel_increasing ? "increasing" : "not increasing");
    return r;
}

CheckResult classical_checks(const VerifyOptions&) {
    int bad = 0;
    for (auto [q, p] : {std::pair{1, 1}, {2, 1}, {3, 2}}) {
        const auto e = classical::axis_extrema_count({1, 1, double(q), double(p), pi / 5, 1}, 4096);
        bad += e.on_x != q || e.on_y != p;
    }
    const classical::ClassicalCurve c46{1, 1, 4, 6, pi / 5, 1}, c23{1, 1, 2, 3, pi / 5, 1};
    std::vector<classical::Point2> a, b;
    const int M = 4096;
    for (int k = 0; k < M; ++k) a.push_back(classical::curve_point(c46, 2 * pi * k / M));
    for (int k = 0; k < M / 2; ++k) b.push_back(classical::curve_point(c23, 2 * pi * k / (M / 2)));
    const double h = classical::hausdorff_distance(a, b);
    auto r = result(11, "classical extrema and 4:6 path");
    r.measured = h;
    r.threshold = 1e-9;
    r.pass = bad == 0 && h <= 1e-9;
    r.detail = fmt::format("axis extrema mismatches {}, Hausdorff {:.2e}", bad, h);
    return r;
}

CheckResult closed_form(const VerifyOptions& o) {
    const std::vector<Config> cfgs = {unit(1, 1, 0), unit(1, 2, pi / 4), unit(2, 3, pi / 6)};
    double worst = 0, unhalved = 0, nmin = INFINITY, nmax = 0;
    for (const auto& c : cfgs) {
        semiclassical::SemiclassicalConfig cfg{c.amp, OscillatorParams::make(c.p, c.q), {}};
        const auto rep = semiclassical::closed_form_report(cfg, semiclassical::semiclassical_extent(cfg), eval_opts(o));
        worst = std::max(worst, rep.rederived_max_rel_err);
        unhalved = std::max(unhalved, rep.unhalved_max_rel_err);
        nmin = std::min(nmin, rep.unhalved_norm_min);
        nmax = std::max(nmax, rep.unhalved_norm_max);
    }
    auto r = result(12, "closed-form coherent packet");
    r.measured = worst;
    r.threshold = 1e-10;
    r.pass = worst <= 1e-10;
    r.detail = fmt::format("unhalved variant: error {:.3f} of max|psi|, norm {:.4f}..{:.4f}", unhalved, nmin, nmax);
    return r;
}

const std::map<std::string, std::vector<int>>& suites() {
    static const std::map<std::string, std::vector<int>> s = {
        {"identities", {1, 2}},   {"normalization", {3}}, {"currents", {4, 6, 7}},
        {"vortices", {5}},        {"semiclassical", {8, 12}}, {"interference", {9}},
        {"localization", {10}},   {"classical", {11}},
        {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}},
    };
    return s;
}

}  // namespace

std::vector<int> suite_criteria(const std::string& suite) {
    const auto it = suites().find(suite);
    if (it == suites().end()) throw std::invalid_argument("unknown suite: " + suite);
    return it->second;
}

std::vector<std::string> suite_names() {
    std::vector<std::string> n;
    for (const auto& [k, v] : suites()) n.push_back(k);
    return n;
}

CheckResult run_criterion(int id, const VerifyOptions& opts) {
    using Fn = CheckResult (*)(const VerifyOptions&);
    static constexpr Fn table[kCriterionCount] = {su2_equivalence, superposition_identity, normalization,
                                                  static_limits,   vortex_counts,          circulation_sign,
                                                  continuity,      ehrenfest,              interference,
                                                  localization,    classical_checks,       closed_form};
    if (id < 1 || id > kCriterionCount) throw std::invalid_argument("criterion id out of range");
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r = table[id - 1](opts);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::string format_result(const CheckResult& r) {
    return fmt::format("{} [{}] {}: measured {:.6g}, threshold {:.6g} ({:.2f} s) | {}", r.pass ? "PASS" : "FAIL", r.id,
                       r.name, r.measured, r.threshold, r.seconds, r.detail);
}

}  // namespace qlj::verify
