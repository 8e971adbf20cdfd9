#include "qlj/classical.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qlj::classical {

using std::numbers::pi;

Point2 curve_point(const ClassicalCurve& c, double t) {
    return {c.A * std::cos(c.q * c.omega0 * t), c.B * std::cos(c.p * c.omega0 * t - c.phi)};
}

std::vector<Point2> sample_curve(const ClassicalCurve& c, double t0, double t1, int n) {
    if (n < 2) throw std::invalid_argument("sample_curve: need at least two samples");
    std::vector<Point2> out;
    out.reserve(n);
    for (int k = 0; k < n; ++k) out.push_back(curve_point(c, t0 + (t1 - t0) * k / (n - 1)));
    return out;
}

double ellipse_residual(double x, double y, double A, double B, double phi) {
    if (!(A > 0) || !(B > 0)) throw std::invalid_argument("ellipse_residual: amplitudes must be positive");
    double s = std::sin(phi);
    return B * B * x * x - 2 * A * B * x * y * std::cos(phi) + A * A * y * y - A * A * B * B * s * s;
}

namespace {

bool near_integer(double v) { return std::abs(v - std::round(v)) <= 1e-12 * std::max(1.0, std::abs(v)); }

}  // namespace

Closure closure_analysis(double q, double p, double tol) {
    if (!(q > 0) || !(p > 0) || !(tol > 0))
        throw std::invalid_argument("closure_analysis: q, p, tol must be positive");
    const double x = q / p;

    // Convergents h/k of the continued fraction of x.
    long h_prev = 1, h = static_cast<long>(std::floor(x));
    long k_prev = 0, k = 1;
    double rem = x - std::floor(x);
    Closure out;
    while (true) {
        if (std::abs(x - double(h) / double(k)) <= tol * std::max(1.0, x)) {
            out.commensurate = true;
            break;
        }
        if (rem == 0.0) break;
        double inv = 1.0 / rem;
        long a = static_cast<long>(std::floor(inv));
        rem = inv - std::floor(inv);
        long h_next = a * h + h_prev;
        long k_next = a * k + k_prev;
        if (k_next > kMaxDenominator) break;
        h_prev = h;
        h = h_next;
        k_prev = k;
        k = k_next;
    }
    if (!out.commensurate) return out;

    out.q0 = static_cast<int>(h);
    out.p0 = static_cast<int>(k);
    out.phase_period = 2 * pi / h;
    if (near_integer(q) && near_integer(p)) {
        long qi = std::lround(q), pi_ = std::lround(p);
        if (qi % h == 0 && pi_ % k == 0 && qi / h == pi_ / k) out.m = static_cast<int>(qi / h);
    }
    return out;
}

namespace {

// Golden-section maximization of f on [a, b].
double refine_max(const std::function<double(double)>& f, double a, double b) {
    const double g = (std::sqrt(5.0) - 1) / 2;
    double c = b - g * (b - a), d = a + g * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 200 && (b - a) > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

// Parameter values in [0, T) where f reaches 1 (within 1e-9), from a
// cyclic sampling followed by golden-section refinement.
std::vector<double> contacts(const std::function<double(double)>& f, double T, int samples,
                             double merge_tol) {
    std::vector<double> v(samples);
    for (int k = 0; k < samples; ++k) v[k] = f(T * k / samples);
    std::vector<double> hits;
    for (int k = 0; k < samples; ++k) {
        double l = v[(k + samples - 1) % samples], r = v[(k + 1) % samples];
        if (!(v[k] >= l && v[k] > r)) continue;
        double dt = T / samples;
        double t = refine_max(f, T * k / samples - dt, T * k / samples + dt);
        if (f(t) < 1 - 1e-9) continue;
        t = std::fmod(t + T, T);
        hits.push_back(t);
    }
    std::sort(hits.begin(), hits.end());
    std::vector<double> merged;
    for (double t : hits)
        if (merged.empty() || t - merged.back() > merge_tol) merged.push_back(t);
    if (merged.size() > 1 && merged.front() + T - merged.back() <= merge_tol) merged.pop_back();
    return merged;
}

int distinct_values(std::vector<double> vals, double tol) {
    std::sort(vals.begin(), vals.end());
    int n = 0;
    for (std::size_t i = 0; i < vals.size(); ++i)
        if (i == 0 || vals[i] - vals[i - 1] > tol) ++n;
    return n;
}

}  // namespace

AxisExtrema axis_extrema_count(const ClassicalCurve& c, int samples) {
    if (!near_integer(c.q) || !near_integer(c.p) || c.q < 1 || c.p < 1)
        throw std::invalid_argument("axis_extrema_count: q and p must be positive integers");
    int q = static_cast<int>(std::lround(c.q)), p = static_cast<int>(std::lround(c.p));
    if (samples < 16 * q * p) throw std::invalid_argument("axis_extrema_count: need samples >= 16 q p");

    const double T = 2 * pi / c.omega0;
    // Merge tolerance 2 pi / (1024 q p) in phase angle, converted to time.
    const double merge = 2 * pi / (1024.0 * q * p) / c.omega0;
    auto xs = [&](double sgn) { return [&c, sgn](double t) { return sgn * curve_point(c, t).x / c.A; }; };
    auto ys = [&](double sgn) { return [&c, sgn](double t) { return sgn * curve_point(c, t).y / c.B; }; };

    auto x_pos = contacts(xs(1), T, samples, merge), x_neg = contacts(xs(-1), T, samples, merge);
    auto y_pos = contacts(ys(1), T, samples, merge), y_neg = contacts(ys(-1), T, samples, merge);

    auto other = [&](const std::vector<double>& ts, bool want_y) {
        std::vector<double> out;
        for (double t : ts) {
            Point2 pt = curve_point(c, t);
            out.push_back(want_y ? pt.y : pt.x);
        }
        return out;
    };
    const double space_tol = 1e-6 * std::max(c.A, c.B);
    AxisExtrema r;
    r.on_x = static_cast<int>(x_pos.size());
    r.on_y = static_cast<int>(y_pos.size());
    r.distinct_x_points = distinct_values(other(x_pos, true), space_tol) + distinct_values(other(x_neg, true), space_tol);
    r.distinct_y_points = distinct_values(other(y_pos, false), space_tol) + distinct_values(other(y_neg, false), space_tol);
    r.retraces = r.distinct_x_points < static_cast<int>(x_pos.size() + x_neg.size()) ||
                 r.distinct_y_points < static_cast<int>(y_pos.size() + y_neg.size());
    return r;
}

double hausdorff_distance(std::span<const Point2> a, std::span<const Point2> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("hausdorff_distance: empty point set");
    auto directed = [](std::span<const Point2> from, std::span<const Point2> to) {
        double worst = 0;
        for (const auto& u : from) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& v : to) best = std::min(best, std::hypot(u.x - v.x, u.y - v.y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

}  // namespace qlj::classical
