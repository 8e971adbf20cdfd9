#pragma once

#include <vector>

#include "qlj/classical.hpp"
#include "qlj/fields.hpp"
#include "qlj/states.hpp"

namespace qlj::semiclassical {

// Two-mode coherent state |alpha e^{-i w_x t}, beta e^{-i w_y t}>.
struct SemiclassicalConfig {
    states::AmplitudePair amp;
    states::OscillatorParams params;
    std::vector<double> times;
};

// count uniform times over one period 2 pi / w0, endpoint excluded.
std::vector<double> default_times(const states::OscillatorParams& params, int count = 32);

// Per-axis half-width: classical amplitude plus the ground-state margin of fields::extent_half_width.
fields::FieldGrid semiclassical_extent(const SemiclassicalConfig& cfg, int nx = 128, int ny = 128);

// Truncated double series (the reference evaluation); the per-mode cutoff
// follows states::oracle_cutoff.
fields::WaveField eval_semiclassical(const SemiclassicalConfig& cfg, double t, const fields::FieldGrid& grid,
                                     const fields::EvalOptions& opts = {});

enum class ClosedForm {
    // (w_x w_y)^(1/4)/sqrt(pi) exp(-(w_x x^2 + w_y y^2)/2 + sqrt(2 w_x) x a + sqrt(2 w_y) y b
    //   - (a^2 + b^2)/2 - (|a|^2 + |b|^2)/2), a = alpha e^{-i w_x t}, b = beta e^{-i w_y t}
    rederived,
    // Same with prefactor sqrt(w_x w_y)/pi and exponent -(a^2 + b^2), kept for comparison.
    unhalved,
};

fields::WaveField eval_closed_form(const SemiclassicalConfig& cfg, double t, const fields::FieldGrid& grid,
                                   ClosedForm form = ClosedForm::rederived);

struct Centroid {
    double x;
    double y;
};

// Trapezoid quadrature of x rho and y rho; assumes a normalized field.
Centroid centroid(const fields::WaveField& f);

// Classical path with A = sqrt(2)|alpha|/sqrt(w_x), B = sqrt(2)|beta|/sqrt(w_y).
classical::ClassicalCurve classical_curve(const SemiclassicalConfig& cfg);

struct TrajectoryRow {
    double t;
    Centroid quantum;
    classical::Point2 classical;
};

struct EhrenfestReport {
    double max_deviation = 0;
    std::vector<TrajectoryRow> rows;
};

// Uses cfg.times when set, otherwise default_times(params, n_times).
EhrenfestReport ehrenfest_report(const SemiclassicalConfig& cfg, int n_times, const fields::FieldGrid& grid,
                                 const fields::EvalOptions& opts = {});

struct ClosedFormReport {
    double rederived_max_rel_err = 0;  // max |closed - series| / max |series| over all times
    double unhalved_max_rel_err = 0;
    double unhalved_norm_min = 0;  // quadrature of |Psi|^2 for the unhalved form
    double unhalved_norm_max = 0;
};

ClosedFormReport closed_form_report(const SemiclassicalConfig& cfg, const fields::FieldGrid& grid,
                                    const fields::EvalOptions& opts = {});

}  // namespace qlj::semiclassical
