#pragma once

#include <optional>
#include <span>
#include <vector>

namespace qlj::classical {

// x = A cos(q w0 t), y = B cos(p w0 t - phi)
struct ClassicalCurve {
    double A = 1.0;
    double B = 1.0;
    double q = 1.0;
    double p = 1.0;
    double phi = 0.0;
    double omega0 = 1.0;
};

struct Point2 {
    double x;
    double y;
};

Point2 curve_point(const ClassicalCurve& c, double t);

// n evenly spaced samples on [t0, t1] inclusive.
std::vector<Point2> sample_curve(const ClassicalCurve& c, double t0, double t1, int n);

// B^2 x^2 - 2 A B x y cos(phi) + A^2 y^2 - A^2 B^2 sin^2(phi); zero on the 1:1 curve.
double ellipse_residual(double x, double y, double A, double B, double phi);

struct Closure {
    bool commensurate = false;
    std::optional<int> p0;
    std::optional<int> q0;
    std::optional<int> m;  // set only for integer inputs
    std::optional<double> phase_period;
};

inline constexpr long kMaxDenominator = 1000;

// Rational detection of q/p by continued fractions with denominators up to
// kMaxDenominator. The phase period is 2 pi / q0: the curve family for
// (m q0, m p0) is the reduced family reparameterized.
Closure closure_analysis(double q, double p, double tol);

struct AxisExtrema {
    int on_x = 0;  // parameter values per period with x = +A
    int on_y = 0;  // parameter values per period with y = +B
    // Distinct spatial contact points over both sides of each axis; fewer than
    // 2 * on_x (resp. 2 * on_y) means the curve retraces through a contact.
    int distinct_x_points = 0;
    int distinct_y_points = 0;
    bool retraces = false;
};

// Counts contacts with the bounding box per period on the positive side of
// each axis: q on x, p on y. Requires integer commensurate q, p and
// samples >= 16 q p; throws std::invalid_argument otherwise.
AxisExtrema axis_extrema_count(const ClassicalCurve& c, int samples);

// Symmetric Hausdorff distance between two point sets (brute force).
double hausdorff_distance(std::span<const Point2> a, std::span<const Point2> b);

}  // namespace qlj::classical
