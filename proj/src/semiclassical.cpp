#include "qlj/semiclassical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qlj::semiclassical {

using cplx = std::complex<double>;
using std::numbers::pi;

namespace {

cplx evolved(cplx a, double omega, double t) { return a * std::polar(1.0, -omega * t); }

std::vector<cplx> coherent_series(cplx a) {
    const int n_max = states::oracle_cutoff(std::abs(a));
    std::vector<cplx> c(n_max + 1);
    c[0] = std::exp(-0.5 * std::norm(a));
    for (int n = 1; n <= n_max; ++n) c[n] = c[n - 1] * a / std::sqrt(double(n));
    return c;
}

}  // namespace

std::vector<double> default_times(const states::OscillatorParams& params, int count) {
    if (count < 1) throw std::invalid_argument("default_times: count must be positive");
    std::vector<double> t(count);
    for (int k = 0; k < count; ++k) t[k] = 2 * pi / params.omega0 * k / count;
    return t;
}

classical::ClassicalCurve classical_curve(const SemiclassicalConfig& cfg) {
    const auto& p = cfg.params;
    return {std::sqrt(2.0) * cfg.amp.alpha / std::sqrt(p.omega_x()),
            std::sqrt(2.0) * cfg.amp.beta_abs / std::sqrt(p.omega_y()),
            double(p.q), double(p.p), cfg.amp.phi, p.omega0};
}

fields::FieldGrid semiclassical_extent(const SemiclassicalConfig& cfg, int nx, int ny) {
    const auto c = classical_curve(cfg);
    return fields::FieldGrid::symmetric(c.A + fields::extent_half_width(0, cfg.params.omega_x()),
                                        c.B + fields::extent_half_width(0, cfg.params.omega_y()), nx, ny);
}

fields::WaveField eval_semiclassical(const SemiclassicalConfig& cfg, double t, const fields::FieldGrid& grid,
                                     const fields::EvalOptions& opts) {
    const double wx = cfg.params.omega_x(), wy = cfg.params.omega_y();
    const auto a = coherent_series(evolved(cfg.amp.alpha, wx, t));
    const auto b = coherent_series(evolved(cfg.amp.beta(), wy, t));
    return fields::eval_product(a, wx, b, wy, grid, opts);
}

fields::WaveField eval_closed_form(const SemiclassicalConfig& cfg, double t, const fields::FieldGrid& grid,
                                   ClosedForm form) {
    const double wx = cfg.params.omega_x(), wy = cfg.params.omega_y();
    const cplx a = evolved(cfg.amp.alpha, wx, t), b = evolved(cfg.amp.beta(), wy, t);
    const bool unhalved = form == ClosedForm::unhalved;
    const double pref = unhalved ? std::sqrt(wx * wy) / pi : std::pow(wx * wy, 0.25) / std::sqrt(pi);
    const double sq = unhalved ? 1.0 : 0.5;

    // Separable: Psi = f(x) g(y), each a displaced Gaussian.
    auto factor = [&](cplx amp, double w, double u) {
        return std::exp(-0.5 * w * u * u + std::sqrt(2 * w) * u * amp - sq * amp * amp - 0.5 * std::norm(amp));
    };
    fields::WaveField f;
    f.grid = grid;
    f.psi.resize(grid.size());
    f.grad_x.resize(grid.size());
    f.grad_y.resize(grid.size());
    std::vector<cplx> fx(grid.nx), gy(grid.ny);
    for (int i = 0; i < grid.nx; ++i) fx[i] = factor(a, wx, grid.x(i));
    for (int j = 0; j < grid.ny; ++j) gy[j] = factor(b, wy, grid.y(j));
    for (int j = 0; j < grid.ny; ++j)
        for (int i = 0; i < grid.nx; ++i) {
            const std::size_t k = grid.index(i, j);
            const cplx psi = pref * fx[i] * gy[j];
            f.psi[k] = psi;
            f.grad_x[k] = (-wx * grid.x(i) + std::sqrt(2 * wx) * a) * psi;
            f.grad_y[k] = (-wy * grid.y(j) + std::sqrt(2 * wy) * b) * psi;
        }
    fields::fill_derived(f);
    return f;
}

Centroid centroid(const fields::WaveField& f) {
    const auto& g = f.grid;
    std::vector<double> xr(g.size()), yr(g.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const std::size_t k = g.index(i, j);
            xr[k] = g.x(i) * f.rho[k];
            yr[k] = g.y(j) * f.rho[k];
        }
    return {fields::quadrature(xr, g), fields::quadrature(yr, g)};
}

EhrenfestReport ehrenfest_report(const SemiclassicalConfig& cfg, int n_times, const fields::FieldGrid& grid,
                                 const fields::EvalOptions& opts) {
    if (cfg.times.empty() && n_times < 8) throw std::invalid_argument("ehrenfest_report: need at least 8 times");
    const auto times = cfg.times.empty() ? default_times(cfg.params, n_times) : cfg.times;
    const auto curve = classical_curve(cfg);
    EhrenfestReport r;
    for (double t : times) {
        const Centroid c = centroid(eval_semiclassical(cfg, t, grid, opts));
        const classical::Point2 p = classical::curve_point(curve, t);
        r.rows.push_back({t, c, p});
        r.max_deviation = std::max(r.max_deviation, std::hypot(c.x - p.x, c.y - p.y));
    }
    return r;
}

ClosedFormReport closed_form_report(const SemiclassicalConfig& cfg, const fields::FieldGrid& grid,
                                    const fields::EvalOptions& opts) {
    const auto times = cfg.times.empty() ? default_times(cfg.params, 8) : cfg.times;
    ClosedFormReport r;
    r.unhalved_norm_min = std::numeric_limits<double>::infinity();
    for (double t : times) {
        const auto series = eval_semiclassical(cfg, t, grid, opts);
        const auto mine = eval_closed_form(cfg, t, grid, ClosedForm::rederived);
        const auto alt = eval_closed_form(cfg, t, grid, ClosedForm::unhalved);
        double scale = 0, e1 = 0, e2 = 0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            scale = std::max(scale, std::abs(series.psi[k]));
            e1 = std::max(e1, std::abs(mine.psi[k] - series.psi[k]));
            e2 = std::max(e2, std::abs(alt.psi[k] - series.psi[k]));
        }
        r.rederived_max_rel_err = std::max(r.rederived_max_rel_err, e1 / scale);
        r.unhalved_max_rel_err = std::max(r.unhalved_max_rel_err, e2 / scale);
        const double n = fields::quadrature(alt.rho, grid);
        r.unhalved_norm_min = std::min(r.unhalved_norm_min, n);
        r.unhalved_norm_max = std::max(r.unhalved_norm_max, n);
    }
    return r;
}

}  // namespace qlj::semiclassical
