#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

#include "qlj/states.hpp"

namespace qlj::fields {

using cplx = std::complex<double>;

// Uniform rectangular grid; node (i, j) sits at (x_min + i dx, y_min + j dy).
// Storage everywhere is row-major with rows along y: index = j * nx + i.
struct FieldGrid {
    double x_min = -1, x_max = 1, y_min = -1, y_max = 1;
    int nx = 16, ny = 16;

    static FieldGrid make(double x_min, double x_max, double y_min, double y_max, int nx, int ny);
    static FieldGrid symmetric(double half_x, double half_y, int nx, int ny);

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dy() const { return (y_max - y_min) / (ny - 1); }
    double x(int i) const { return x_min + i * dx(); }
    double y(int j) const { return y_min + j * dy(); }
    std::size_t size() const { return std::size_t(nx) * ny; }
    std::size_t index(int i, int j) const { return std::size_t(j) * nx + i; }
};

struct WaveField {
    FieldGrid grid;
    std::vector<cplx> psi;
    std::vector<cplx> grad_x;
    std::vector<cplx> grad_y;
    std::vector<double> rho;
    std::vector<double> jx;
    std::vector<double> jy;
};

// Recomputes rho = |psi|^2 and J = Im(conj(psi) grad) from the stored values.
void fill_derived(WaveField& f);

class NyquistError : public std::domain_error {
   public:
    using std::domain_error::domain_error;
};

enum class NyquistPolicy { fail, warn, ignore };

struct EvalOptions {
    int threads = 0;  // 0: hardware concurrency
    NyquistPolicy nyquist = NyquistPolicy::fail;
};

// Separable expansion sum c psi_nx^(wx)(x) psi_ny^(wy)(y) with analytic gradients.
// Rows are distributed over threads; every node is summed in coefficient order,
// so results do not depend on the thread count.
WaveField eval_expansion(std::span<const states::FockCoeff> coeffs, double omega_x, double omega_y,
                         const FieldGrid& grid, const EvalOptions& opts = {});

// Uses w_x = q w0 and w_y = p w0 from the state's parameters.
WaveField eval_state(const states::LissajousState& s, const FieldGrid& grid, const EvalOptions& opts = {});

// Product state f(x) g(y) with f = sum a_n psi_n^(wx), g = sum b_n psi_n^(wy).
WaveField eval_product(std::span<const cplx> a, double omega_x, std::span<const cplx> b, double omega_y,
                       const FieldGrid& grid, const EvalOptions& opts = {});

// Largest spacing that still gives two samples per shortest local wavelength
// of a mode with quantum number n_max: pi / sqrt((2 n_max + 1) omega).
double nyquist_spacing(int n_max, double omega);

// Throws NyquistError or warns on stderr, per policy.
void check_nyquist(int nx_max, double omega_x, int ny_max, double omega_y, const FieldGrid& grid,
                   NyquistPolicy policy);

// Sum with a fixed pairwise tree over the input order.
double pairwise_sum(std::span<const double> v);

// 2D trapezoid rule over the grid.
double quadrature(std::span<const double> values, const FieldGrid& grid);

// Half-width covering a mode n at frequency omega:
// max(1.5 sqrt((2n+1)/omega), (sqrt(2n+1) + 4.5)/sqrt(omega)).
double extent_half_width(int n_max, double omega);

FieldGrid default_extent(const states::LissajousState& s, int nx = 512, int ny = 512);

// Central-difference divergence of J at interior nodes; boundary nodes hold 0.
std::vector<double> divergence(const WaveField& f);

struct DivergenceResidual {
    double max_abs = 0;      // max |div J| over interior nodes
    double normalized = 0;   // max_abs * min(dx, dy) / max |J|
    double max_current = 0;  // max |J|
};

DivergenceResidual divergence_residual(const WaveField& f);

struct Vortex {
    double x;
    double y;
    int winding;  // +1 counterclockwise phase increase, -1 clockwise
};

// Connected region where the stream function of J exceeds the cell threshold
// in magnitude. sign +1 is counterclockwise circulation.
struct CirculationCell {
    double x;
    double y;
    int sign;
    double peak;      // max |S| inside the cell
    int net_winding;  // sum of phase windings inside the cell
    int nodes;
};

struct VortexSet {
    std::vector<Vortex> vortices;  // plaquette phase singularities
    int positive = 0;
    int negative = 0;
    std::vector<CirculationCell> cells;
    int cells_positive = 0;
    int cells_negative = 0;

    // Counts circulation cells, not individual singularities.
    int count() const { return static_cast<int>(cells.size()); }
    int net_winding() const { return positive - negative; }
};

inline constexpr double kDefaultDensityFloor = 1e-6;
inline constexpr double kDefaultCellThreshold = 0.1;

// Stream function S with dS/dy = Jx, dS/dx = -Jy, integrated by trapezoid
// along the bottom row and then up each column.
std::vector<double> stream_function(const WaveField& f);

VortexSet detect_vortices(const WaveField& f, double density_floor = kDefaultDensityFloor,
                          double cell_threshold = kDefaultCellThreshold);

struct Interference {
    std::vector<double> rho_total;
    std::vector<double> rho_diagonal;
    std::vector<double> rho_cross;
};

Interference interference_decomposition(cplx weight, const std::vector<states::LissajousState>& terms,
                                        const FieldGrid& grid, const EvalOptions& opts = {});

// (1/m) sum_j |Psi_j|^2 over the normalized terms.
std::vector<double> incoherent_mixture(const std::vector<states::LissajousState>& terms, const FieldGrid& grid,
                                       const EvalOptions& opts = {});

enum class Axis { x, y };

// Strict local maxima of rho along the positive half of the given coordinate
// axis, above density_floor * max rho. The axis must lie on grid nodes.
int axis_extrema_count(const WaveField& f, Axis axis, double density_floor = kDefaultDensityFloor);

}  // namespace qlj::fields
