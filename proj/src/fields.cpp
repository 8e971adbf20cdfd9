#include "qlj/fields.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <iostream>
#include <numbers>
#include <string>
#include <thread>
#include <utility>

#include "qlj/specialfn.hpp"

namespace qlj::fields {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

// Calls fn(j) for every row j, contiguous row blocks per worker.
template <class F>
void parallel_rows(int ny, int threads, F&& fn) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, ny);
    if (workers == 1) {
        for (int j = 0; j < ny; ++j) fn(j);
        return;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        int lo = int(std::int64_t(ny) * w / workers), hi = int(std::int64_t(ny) * (w + 1) / workers);
        pool.emplace_back([lo, hi, &fn] {
            for (int j = lo; j < hi; ++j) fn(j);
        });
    }
}

// Rows n = 0..n_max of omega^(1/4) phi_n(sqrt(omega) t_k) and its t-derivative,
// laid out as table[n * count + k].
struct ModeTable {
    int count = 0;
    std::vector<double> value;
    std::vector<double> deriv;

    double v(int n, int k) const { return value[std::size_t(n) * count + k]; }
    double d(int n, int k) const { return deriv[std::size_t(n) * count + k]; }
};

ModeTable mode_table(int n_max, double omega, int count, double t0, double dt) {
    ModeTable t;
    t.count = count;
    t.value.resize(std::size_t(n_max + 1) * count);
    t.deriv.resize(t.value.size());
    const double s = std::sqrt(omega), s4 = std::sqrt(s), s34 = s * s4;
    std::vector<double> v(n_max + 1), d(n_max + 1);
    for (int k = 0; k < count; ++k) {
        specialfn::hermite_table(n_max, s * (t0 + k * dt), v, d);
        for (int n = 0; n <= n_max; ++n) {
            t.value[std::size_t(n) * count + k] = s4 * v[n];
            t.deriv[std::size_t(n) * count + k] = s34 * d[n];
        }
    }
    return t;
}

WaveField blank_field(const FieldGrid& grid) {
    WaveField f;
    f.grid = grid;
    f.psi.assign(grid.size(), cplx{});
    f.grad_x.assign(grid.size(), cplx{});
    f.grad_y.assign(grid.size(), cplx{});
    return f;
}

}  // namespace

FieldGrid FieldGrid::make(double x_min, double x_max, double y_min, double y_max, int nx, int ny) {
    require(std::isfinite(x_min) && std::isfinite(x_max) && std::isfinite(y_min) && std::isfinite(y_max),
            "grid bounds must be finite");
    require(x_max > x_min && y_max > y_min, "grid bounds must be increasing");
    require(nx >= 16 && ny >= 16, "grid needs at least 16 nodes per axis");
    return {x_min, x_max, y_min, y_max, nx, ny};
}

FieldGrid FieldGrid::symmetric(double half_x, double half_y, int nx, int ny) {
    return make(-half_x, half_x, -half_y, half_y, nx, ny);
}

void fill_derived(WaveField& f) {
    const std::size_t n = f.psi.size();
    f.rho.resize(n);
    f.jx.resize(n);
    f.jy.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const cplx p = f.psi[k];
        f.rho[k] = std::norm(p);
        f.jx[k] = (std::conj(p) * f.grad_x[k]).imag();
        f.jy[k] = (std::conj(p) * f.grad_y[k]).imag();
    }
}

double nyquist_spacing(int n_max, double omega) { return std::numbers::pi / std::sqrt((2.0 * n_max + 1) * omega); }

void check_nyquist(int nx_max, double omega_x, int ny_max, double omega_y, const FieldGrid& grid,
                   NyquistPolicy policy) {
    if (policy == NyquistPolicy::ignore) return;
    const double hx = nyquist_spacing(nx_max, omega_x), hy = nyquist_spacing(ny_max, omega_y);
    if (grid.dx() <= hx && grid.dy() <= hy) return;
    std::string msg = "grid under-resolves the state: need dx <= " + std::to_string(hx) + " and dy <= " +
                      std::to_string(hy) + ", have " + std::to_string(grid.dx()) + ", " + std::to_string(grid.dy());
    if (policy == NyquistPolicy::fail) throw NyquistError(msg);
    std::cerr << "warning: " << msg << '\n';
}

WaveField eval_expansion(std::span<const states::FockCoeff> coeffs, double omega_x, double omega_y,
                         const FieldGrid& grid, const EvalOptions& opts) {
    require(omega_x > 0 && omega_y > 0, "mode frequencies must be positive");
    require(!coeffs.empty(), "expansion has no coefficients");
    int nx_max = 0, ny_max = 0;
    for (const auto& e : coeffs) {
        require(e.nx >= 0 && e.ny >= 0, "negative quantum number");
        nx_max = std::max(nx_max, e.nx);
        ny_max = std::max(ny_max, e.ny);
    }
    check_nyquist(nx_max, omega_x, ny_max, omega_y, grid, opts.nyquist);

    const ModeTable X = mode_table(nx_max, omega_x, grid.nx, grid.x_min, grid.dx());
    const ModeTable Y = mode_table(ny_max, omega_y, grid.ny, grid.y_min, grid.dy());
    WaveField f = blank_field(grid);
    parallel_rows(grid.ny, opts.threads, [&](int j) {
        cplx* psi = &f.psi[grid.index(0, j)];
        cplx* gx = &f.grad_x[grid.index(0, j)];
        cplx* gy = &f.grad_y[grid.index(0, j)];
        for (const auto& e : coeffs) {
            const cplx a = e.c * Y.v(e.ny, j);
            const cplx b = e.c * Y.d(e.ny, j);
            const double* xv = &X.value[std::size_t(e.nx) * grid.nx];
            const double* xd = &X.deriv[std::size_t(e.nx) * grid.nx];
            for (int i = 0; i < grid.nx; ++i) {
                psi[i] += a * xv[i];
                gx[i] += a * xd[i];
                gy[i] += b * xv[i];
            }
        }
    });
    fill_derived(f);
    return f;
}

WaveField eval_state(const states::LissajousState& s, const FieldGrid& grid, const EvalOptions& opts) {
    return eval_expansion(s.coeffs, s.params.omega_x(), s.params.omega_y(), grid, opts);
}

WaveField eval_product(std::span<const cplx> a, double omega_x, std::span<const cplx> b, double omega_y,
                       const FieldGrid& grid, const EvalOptions& opts) {
    require(omega_x > 0 && omega_y > 0, "mode frequencies must be positive");
    require(!a.empty() && !b.empty(), "empty mode series");
    const int nx_max = static_cast<int>(a.size()) - 1, ny_max = static_cast<int>(b.size()) - 1;
    check_nyquist(nx_max, omega_x, ny_max, omega_y, grid, opts.nyquist);

    auto series = [](std::span<const cplx> c, const ModeTable& t, std::vector<cplx>& v, std::vector<cplx>& d) {
        v.assign(t.count, cplx{});
        d.assign(t.count, cplx{});
        for (std::size_t n = 0; n < c.size(); ++n)
            for (int k = 0; k < t.count; ++k) {
                v[k] += c[n] * t.v(int(n), k);
                d[k] += c[n] * t.d(int(n), k);
            }
    };
    std::vector<cplx> fx, dfx, gy, dgy;
    series(a, mode_table(nx_max, omega_x, grid.nx, grid.x_min, grid.dx()), fx, dfx);
    series(b, mode_table(ny_max, omega_y, grid.ny, grid.y_min, grid.dy()), gy, dgy);

    WaveField f = blank_field(grid);
    parallel_rows(grid.ny, opts.threads, [&](int j) {
        for (int i = 0; i < grid.nx; ++i) {
            const std::size_t k = grid.index(i, j);
            f.psi[k] = fx[i] * gy[j];
            f.grad_x[k] = dfx[i] * gy[j];
            f.grad_y[k] = fx[i] * dgy[j];
        }
    });
    fill_derived(f);
    return f;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t h = v.size() / 2;
    return pairwise_sum(v.first(h)) + pairwise_sum(v.subspan(h));
}

double quadrature(std::span<const double> values, const FieldGrid& grid) {
    require(values.size() == grid.size(), "quadrature: value count does not match grid");
    std::vector<double> w(values.size());
    const double dx = grid.dx(), dy = grid.dy();
    for (int j = 0; j < grid.ny; ++j) {
        const double wy = (j == 0 || j == grid.ny - 1) ? 0.5 * dy : dy;
        for (int i = 0; i < grid.nx; ++i) {
            const double wx = (i == 0 || i == grid.nx - 1) ? 0.5 * dx : dx;
            w[grid.index(i, j)] = wx * wy * values[grid.index(i, j)];
        }
    }
    return pairwise_sum(w);
}

double extent_half_width(int n_max, double omega) {
    require(n_max >= 0 && omega > 0, "extent_half_width: bad mode");
    const double r = std::sqrt(2.0 * n_max + 1);
    return std::max(1.5 * r / std::sqrt(omega), (r + 4.5) / std::sqrt(omega));
}

FieldGrid default_extent(const states::LissajousState& s, int nx, int ny) {
    int nx_max = 0, ny_max = 0;
    for (const auto& e : s.coeffs) {
        if (e.c == cplx{}) continue;
        nx_max = std::max(nx_max, e.nx);
        ny_max = std::max(ny_max, e.ny);
    }
    return FieldGrid::symmetric(extent_half_width(nx_max, s.params.omega_x()),
                                extent_half_width(ny_max, s.params.omega_y()), nx, ny);
}

std::vector<double> divergence(const WaveField& f) {
    const auto& g = f.grid;
    std::vector<double> div(g.size(), 0.0);
    const double ix = 0.5 / g.dx(), iy = 0.5 / g.dy();
    for (int j = 1; j < g.ny - 1; ++j)
        for (int i = 1; i < g.nx - 1; ++i)
            div[g.index(i, j)] = (f.jx[g.index(i + 1, j)] - f.jx[g.index(i - 1, j)]) * ix +
                                 (f.jy[g.index(i, j + 1)] - f.jy[g.index(i, j - 1)]) * iy;
    return div;
}

DivergenceResidual divergence_residual(const WaveField& f) {
    DivergenceResidual r;
    for (double d : divergence(f)) r.max_abs = std::max(r.max_abs, std::abs(d));
    for (std::size_t k = 0; k < f.jx.size(); ++k) r.max_current = std::max(r.max_current, std::hypot(f.jx[k], f.jy[k]));
    if (r.max_current > 0) r.normalized = r.max_abs * std::min(f.grid.dx(), f.grid.dy()) / r.max_current;
    return r;
}

std::vector<double> stream_function(const WaveField& f) {
    const auto& g = f.grid;
    std::vector<double> S(g.size(), 0.0);
    const double dx = g.dx(), dy = g.dy();
    for (int i = 1; i < g.nx; ++i)
        S[g.index(i, 0)] = S[g.index(i - 1, 0)] - 0.5 * dx * (f.jy[g.index(i - 1, 0)] + f.jy[g.index(i, 0)]);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            S[g.index(i, j)] = S[g.index(i, j - 1)] + 0.5 * dy * (f.jx[g.index(i, j - 1)] + f.jx[g.index(i, j)]);
    return S;
}

VortexSet detect_vortices(const WaveField& f, double density_floor, double cell_threshold) {
    require(density_floor > 0 && density_floor < 1, "density_floor must lie in (0, 1)");
    require(cell_threshold > 0 && cell_threshold < 1, "cell_threshold must lie in (0, 1)");
    const auto& g = f.grid;
    VortexSet out;

    const double rho_max = *std::max_element(f.rho.begin(), f.rho.end());
    const double floor_abs = density_floor * rho_max;
    for (int j = 0; j + 1 < g.ny; ++j)
        for (int i = 0; i + 1 < g.nx; ++i) {
            const std::size_t c[4] = {g.index(i, j), g.index(i + 1, j), g.index(i + 1, j + 1), g.index(i, j + 1)};
            if (std::any_of(c, c + 4, [&](std::size_t k) { return f.rho[k] <= floor_abs; })) continue;
            double total = 0;
            for (int e = 0; e < 4; ++e) total += std::arg(f.psi[c[(e + 1) % 4]] * std::conj(f.psi[c[e]]));
            const int w = static_cast<int>(std::lround(total / (2 * std::numbers::pi)));
            if (w == 0) continue;
            const int sgn = w > 0 ? 1 : -1;
            for (int n = 0; n < std::abs(w); ++n) out.vortices.push_back({g.x(i) + 0.5 * g.dx(), g.y(j) + 0.5 * g.dy(), sgn});
            (sgn > 0 ? out.positive : out.negative) += std::abs(w);
        }

    const std::vector<double> S = stream_function(f);
    double s_max = 0;
    for (double v : S) s_max = std::max(s_max, std::abs(v));
    if (s_max == 0) return out;
    const double t = cell_threshold * s_max;

    std::vector<int> label(g.size(), -1);
    for (int j0 = 0; j0 < g.ny; ++j0)
        for (int i0 = 0; i0 < g.nx; ++i0) {
            const std::size_t k0 = g.index(i0, j0);
            if (label[k0] >= 0 || std::abs(S[k0]) <= t) continue;
            const int sign = S[k0] > 0 ? 1 : -1;
            const int id = static_cast<int>(out.cells.size());
            CirculationCell cell{0, 0, sign, 0, 0, 0};
            double wsum = 0;
            std::deque<std::pair<int, int>> queue{{i0, j0}};
            label[k0] = id;
            while (!queue.empty()) {
                auto [i, j] = queue.front();
                queue.pop_front();
                const double w = std::abs(S[g.index(i, j)]);
                cell.x += w * g.x(i);
                cell.y += w * g.y(j);
                wsum += w;
                cell.peak = std::max(cell.peak, w);
                ++cell.nodes;
                const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
                for (const auto& n : nb) {
                    if (n[0] < 0 || n[0] >= g.nx || n[1] < 0 || n[1] >= g.ny) continue;
                    const std::size_t k = g.index(n[0], n[1]);
                    if (label[k] >= 0 || sign * S[k] <= t) continue;
                    label[k] = id;
                    queue.emplace_back(n[0], n[1]);
                }
            }
            cell.x /= wsum;
            cell.y /= wsum;
            out.cells.push_back(cell);
            (sign > 0 ? out.cells_positive : out.cells_negative)++;
        }

    for (const auto& v : out.vortices) {
        const int i = static_cast<int>(std::floor((v.x - g.x_min) / g.dx()));
        const int j = static_cast<int>(std::floor((v.y - g.y_min) / g.dy()));
        for (auto [di, dj] : {std::pair{0, 0}, {1, 0}, {0, 1}, {1, 1}}) {
            const int id = label[g.index(std::min(i + di, g.nx - 1), std::min(j + dj, g.ny - 1))];
            if (id >= 0) {
                out.cells[id].net_winding += v.winding;
                break;
            }
        }
    }
    return out;
}

namespace {

std::vector<std::vector<cplx>> term_psis(const std::vector<states::LissajousState>& terms, const FieldGrid& grid,
                                         const EvalOptions& opts) {
    require(!terms.empty(), "no terms to evaluate");
    std::vector<std::vector<cplx>> out;
    for (const auto& t : terms) out.push_back(eval_state(t, grid, opts).psi);
    return out;
}

}  // namespace

Interference interference_decomposition(cplx weight, const std::vector<states::LissajousState>& terms,
                                        const FieldGrid& grid, const EvalOptions& opts) {
    const auto psis = term_psis(terms, grid, opts);
    const double w2 = std::norm(weight);
    Interference r;
    r.rho_total.resize(grid.size());
    r.rho_diagonal.resize(grid.size());
    r.rho_cross.resize(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        cplx sum{};
        double diag = 0, cross = 0;
        for (std::size_t a = 0; a < psis.size(); ++a) {
            sum += psis[a][k];
            diag += std::norm(psis[a][k]);
            for (std::size_t b = a + 1; b < psis.size(); ++b) cross += 2 * (std::conj(psis[a][k]) * psis[b][k]).real();
        }
        r.rho_total[k] = std::norm(weight * sum);
        r.rho_diagonal[k] = w2 * diag;
        r.rho_cross[k] = w2 * cross;
    }
    return r;
}

std::vector<double> incoherent_mixture(const std::vector<states::LissajousState>& terms, const FieldGrid& grid,
                                       const EvalOptions& opts) {
    const auto psis = term_psis(terms, grid, opts);
    std::vector<double> out(grid.size(), 0.0);
    for (const auto& p : psis)
        for (std::size_t k = 0; k < grid.size(); ++k) out[k] += std::norm(p[k]);
    for (double& v : out) v /= double(psis.size());
    return out;
}

int axis_extrema_count(const WaveField& f, Axis axis, double density_floor) {
    require(density_floor > 0 && density_floor < 1, "density_floor must lie in (0, 1)");
    const auto& g = f.grid;
    const bool along_x = axis == Axis::x;
    // The x-axis is the row y = 0; the y-axis is the column x = 0.
    const int n_line = along_x ? g.nx : g.ny;
    const int n_cross = along_x ? g.ny : g.nx;
    const double step = along_x ? g.dy() : g.dx();
    int on = -1;
    for (int k = 0; k < n_cross; ++k) {
        const double c = along_x ? g.y(k) : g.x(k);
        if (std::abs(c) <= 1e-9 * step) on = k;
    }
    require(on >= 0, "axis_extrema_count: the axis does not lie on grid nodes");

    const double floor_abs = density_floor * *std::max_element(f.rho.begin(), f.rho.end());
    auto rho = [&](int k) { return along_x ? f.rho[g.index(k, on)] : f.rho[g.index(on, k)]; };
    auto coord = [&](int k) { return along_x ? g.x(k) : g.y(k); };
    int count = 0;
    for (int k = 1; k + 1 < n_line; ++k)
        if (coord(k) > 0 && rho(k) > floor_abs && rho(k) > rho(k - 1) && rho(k) > rho(k + 1)) ++count;
    return count;
}

}  // namespace qlj::fields
