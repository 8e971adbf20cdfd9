// qlj: command-line front end. Every run writes manifest.json into the output
// directory listing each emitted file with its CRC-32.
//
// Exit codes: 0 success, 2 flag or parameter error, 3 verification failure, 4 I/O error.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <numeric>
#include <optional>
#include <regex>

#include "qlj/classical.hpp"
#include "qlj/fields.hpp"
#include "qlj/io.hpp"
#include "qlj/semiclassical.hpp"
#include "qlj/states.hpp"
#include "qlj/verify.hpp"

namespace {

using namespace qlj;
using io::json;
namespace fs = std::filesystem;

constexpr const char* kToolVersion = "1.0.0";
constexpr const char* kOutEnv = "QLJ_OUT_DIR";
constexpr int kClassicalSamples = 4096;

enum Exit { ok = 0, flag_error = 2, verify_failed = 3, io_error = 4 };

struct Options {
    int N = 20;
    int p = 1;
    int q = 1;
    double alpha = 1.0;
    double beta_abs = 1.0;
    std::string phi = "0";
    double omega0 = 1.0;
    std::optional<int> m;
    std::string grid;  // empty: the subcommand's default
    std::string extent = "auto";
    std::string out;
    std::string format = "csv";
    double floor = fields::kDefaultDensityFloor;
    int times = 32;
    int threads = 0;
    std::string suite = "all";
};

// Accepts decimals and rational multiples of pi: pi, -pi/4, 5pi/12, 2*pi/3, 0.5.
double parse_phase(const std::string& text) {
    static const std::regex pi_form(R"(^\s*([+-]?)\s*([0-9]*\.?[0-9]*)\s*\*?\s*pi\s*(?:/\s*([0-9]*\.?[0-9]+))?\s*$)");
    std::smatch m;
    if (std::regex_match(text, m, pi_form)) {
        const double a = m[2].length() ? io::parse_double(m[2].str()) : 1.0;
        const double b = m[3].matched ? io::parse_double(m[3].str()) : 1.0;
        if (b == 0) throw std::invalid_argument("phase denominator is zero: " + text);
        const double v = a * std::numbers::pi / b;
        return m[1] == "-" ? -v : v;
    }
    try {
        return io::parse_double(text);
    } catch (const io::IoError&) {
        throw std::invalid_argument("cannot parse phase '" + text + "'");
    }
}

std::pair<int, int> parse_grid(const std::string& text) {
    static const std::regex form(R"(^([0-9]+)x([0-9]+)$)");
    std::smatch m;
    if (!std::regex_match(text, m, form)) throw std::invalid_argument("--grid expects NXxNY, got '" + text + "'");
    const int nx = std::stoi(m[1]), ny = std::stoi(m[2]);
    if (nx < 16 || ny < 16 || nx > 8192 || ny > 8192) throw std::invalid_argument("--grid sizes must lie in [16, 8192]");
    return {nx, ny};
}

std::optional<std::pair<double, double>> parse_extent(const std::string& text) {
    if (text == "auto") return std::nullopt;
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("--extent expects auto or X:Y");
    try {
        const double x = io::parse_double(text.substr(0, colon)), y = io::parse_double(text.substr(colon + 1));
        if (!(x > 0 && y > 0)) throw std::invalid_argument("--extent half-widths must be positive");
        return std::pair{x, y};
    } catch (const io::IoError&) {
        throw std::invalid_argument("--extent expects auto or X:Y, got '" + text + "'");
    }
}

states::OscillatorParams params_of(const Options& o) {
    if (o.p < 1 || o.q < 1) throw std::invalid_argument("--p and --q must be positive");
    if (o.N < 0) throw std::invalid_argument("--N must be non-negative");
    if (!(o.omega0 > 0)) throw std::invalid_argument("--omega0 must be positive");
    if (o.alpha < 0 || o.beta_abs < 0) throw std::invalid_argument("--alpha and --beta-abs must be non-negative");
    const int g = std::gcd(o.p, o.q);
    if (o.m && *o.m != g)
        throw std::invalid_argument("--m " + std::to_string(*o.m) + " is inconsistent with p = " + std::to_string(o.p) +
                                    ", q = " + std::to_string(o.q) + " (their gcd is " + std::to_string(g) + ")");
    return states::OscillatorParams::make(o.p, o.q, o.omega0);
}

states::AmplitudePair amp_of(const Options& o) { return {o.alpha, o.beta_abs, parse_phase(o.phi)}; }

fields::EvalOptions eval_opts(const Options& o) { return {o.threads, fields::NyquistPolicy::fail}; }

fields::FieldGrid grid_for(const Options& o, const std::string& fallback,
                           const std::function<fields::FieldGrid(int, int)>& automatic) {
    const auto [nx, ny] = parse_grid(o.grid.empty() ? fallback : o.grid);
    const auto ext = parse_extent(o.extent);
    return ext ? fields::FieldGrid::symmetric(ext->first, ext->second, nx, ny) : automatic(nx, ny);
}

fs::path out_dir(const Options& o) {
    fs::path dir = o.out;
    if (dir.empty()) {
        const char* env = std::getenv(kOutEnv);
        dir = env && *env ? env : "qlj_out";
    }
    fs::create_directories(dir);
    return dir;
}

std::map<std::string, std::string> state_parameters(const Options& o) {
    std::map<std::string, std::string> p = {
        {"N", std::to_string(o.N)},         {"p", std::to_string(o.p)},
        {"q", std::to_string(o.q)},         {"alpha", io::format_double(o.alpha)},
        {"beta-abs", io::format_double(o.beta_abs)}, {"phi", o.phi},
        {"omega0", io::format_double(o.omega0)},
    };
    if (o.m) p["m"] = std::to_string(*o.m);
    return p;
}

struct Run {
    fs::path dir;
    io::RunManifest manifest;

    Run(const Options& o, const std::string& command) : dir(out_dir(o)) {
        manifest.command = command;
        manifest.tool_version = kToolVersion;
    }
    void text(const std::string& name, const std::string& body) {
        io::write_text(dir / name, body);
        manifest.add_output(dir, name);
    }
    void field(const std::string& name, const fields::WaveField& f, io::FieldFormat format, const json& provenance) {
        io::write_field(dir / name, f, format, provenance);
        manifest.add_output(dir, name);
        manifest.add_output(dir, name + ".json");
    }
    void raster(const std::string& name, const std::vector<double>& v, const fields::FieldGrid& g) {
        io::write_raster(dir / name, v, g);
        manifest.add_output(dir, name);
    }
    void finish() { io::write_manifest(dir / "manifest.json", manifest); }
};

json provenance_of(const Run& run, const states::LissajousState& s) {
    return {{"command", run.manifest.command},
            {"parameters", run.manifest.parameters},
            {"state", std::string(states::to_string(s.provenance))},
            {"tool_version", kToolVersion}};
}

int cmd_classical(const Options& o) {
    const auto params = params_of(o);
    Run run(o, "classical");
    run.manifest.parameters = state_parameters(o);
    run.manifest.parameters.erase("N");
    const auto curve = semiclassical::classical_curve({amp_of(o), params, {}});
    std::vector<double> t(kClassicalSamples);
    std::vector<classical::Point2> pts(kClassicalSamples);
    for (int k = 0; k < kClassicalSamples; ++k) {
        t[k] = 2 * std::numbers::pi / o.omega0 * k / kClassicalSamples;
        pts[k] = classical::curve_point(curve, t[k]);
    }
    io::write_polyline_csv(run.dir / "classical.csv", t, pts);
    run.manifest.add_output(run.dir, "classical.csv");

    const auto closure = classical::closure_analysis(o.q, o.p, 1e-12);
    const auto ext = classical::axis_extrema_count(curve, kClassicalSamples);
    json summary = {{"A", curve.A},
                    {"B", curve.B},
                    {"q0", closure.q0.value_or(0)},
                    {"p0", closure.p0.value_or(0)},
                    {"m", closure.m.value_or(0)},
                    {"phase_period", closure.phase_period.value_or(0.0)},
                    {"extrema_x", ext.on_x},
                    {"extrema_y", ext.on_y},
                    {"distinct_x_points", ext.distinct_x_points},
                    {"distinct_y_points", ext.distinct_y_points},
                    {"retraces", ext.retraces}};
    run.text("classical.json", summary.dump(2) + "\n");
    run.finish();
    std::cout << "A " << curve.A << ", B " << curve.B << "; extrema on x " << ext.on_x << ", on y " << ext.on_y
              << (ext.retraces ? " (retraced)" : "") << "\n";
    return ok;
}

int cmd_state(const Options& o) {
    const auto s = states::build_from_amplitudes(o.N, params_of(o), amp_of(o));
    Run run(o, "state");
    run.manifest.parameters = state_parameters(o);
    const auto j = io::state_to_json(s);
    run.text("state.json", j.dump(2) + "\n");
    run.finish();
    std::cout << j.dump(2) << "\n";
    return ok;
}

int cmd_field(const Options& o) {
    const auto s = states::build_from_amplitudes(o.N, params_of(o), amp_of(o));
    const auto format = io::field_format_from_string(o.format);
    const auto grid = grid_for(o, "512x512", [&](int nx, int ny) { return fields::default_extent(s, nx, ny); });
    Run run(o, "field");
    run.manifest.parameters = state_parameters(o);
    run.manifest.parameters["grid"] = std::to_string(grid.nx) + "x" + std::to_string(grid.ny);
    run.manifest.parameters["extent"] = o.extent;
    run.manifest.parameters["format"] = o.format;
    run.manifest.grid = io::grid_to_json(grid);

    const auto f = fields::eval_state(s, grid, eval_opts(o));
    run.field("field." + o.format, f, format, provenance_of(run, s));
    run.raster("rho.ppm", f.rho, grid);
    std::vector<double> jmag(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) jmag[k] = std::hypot(f.jx[k], f.jy[k]);
    run.raster("current.ppm", jmag, grid);
    io::write_vector_csv(run.dir / "vectors.csv", f, std::max(1, std::max(grid.nx, grid.ny) / 32));
    run.manifest.add_output(run.dir, "vectors.csv");

    const auto div = fields::divergence_residual(f);
    json summary = {{"norm", fields::quadrature(f.rho, grid)},
                    {"max_rho", *std::max_element(f.rho.begin(), f.rho.end())},
                    {"max_current", div.max_current},
                    {"divergence_max", div.max_abs},
                    {"divergence_normalized", div.normalized},
                    {"energy", s.energy}};
    run.text("summary.json", summary.dump(2) + "\n");
    run.finish();
    std::cout << "norm " << summary["norm"].get<double>() << ", max|J| " << div.max_current << "\n";
    return ok;
}

json vortex_json(const fields::VortexSet& v, double floor) {
    json cells = json::array(), sing = json::array();
    for (const auto& c : v.cells)
        cells.push_back({{"x", c.x}, {"y", c.y}, {"sign", c.sign}, {"peak", c.peak}, {"net_winding", c.net_winding},
                         {"nodes", c.nodes}});
    for (const auto& s : v.vortices) sing.push_back({{"x", s.x}, {"y", s.y}, {"winding", s.winding}});
    return {{"count", v.count()},
            {"counterclockwise", v.cells_positive},
            {"clockwise", v.cells_negative},
            {"density_floor", floor},
            {"cell_threshold", fields::kDefaultCellThreshold},
            {"cells", cells},
            {"singularities", sing},
            {"net_winding", v.net_winding()}};
}

int cmd_vortices(const Options& o) {
    const auto s = states::build_from_amplitudes(o.N, params_of(o), amp_of(o));
    if (!(o.floor > 0 && o.floor < 1)) throw std::invalid_argument("--floor must lie in (0, 1)");
    const auto grid = grid_for(o, "512x512", [&](int nx, int ny) { return fields::default_extent(s, nx, ny); });
    Run run(o, "vortices");
    run.manifest.parameters = state_parameters(o);
    run.manifest.parameters["grid"] = std::to_string(grid.nx) + "x" + std::to_string(grid.ny);
    run.manifest.parameters["extent"] = o.extent;
    run.manifest.parameters["floor"] = io::format_double(o.floor);
    run.manifest.grid = io::grid_to_json(grid);

    const auto v = fields::detect_vortices(fields::eval_state(s, grid, eval_opts(o)), o.floor);
    run.text("vortices.json", vortex_json(v, o.floor).dump(2) + "\n");
    run.finish();
    std::cout << "vortices " << v.count() << " (" << v.cells_positive << " counterclockwise, " << v.cells_negative
              << " clockwise)\n";
    return ok;
}

int cmd_semiclassical(const Options& o) {
    const semiclassical::SemiclassicalConfig base{amp_of(o), params_of(o), {}};
    if (o.times < 1) throw std::invalid_argument("--times must be positive");
    const auto format = io::field_format_from_string(o.format);
    const auto grid = grid_for(o, "128x128", [&](int nx, int ny) { return semiclassical::semiclassical_extent(base, nx, ny); });
    Run run(o, "semiclassical");
    run.manifest.parameters = state_parameters(o);
    run.manifest.parameters.erase("N");
    run.manifest.parameters["grid"] = std::to_string(grid.nx) + "x" + std::to_string(grid.ny);
    run.manifest.parameters["extent"] = o.extent;
    run.manifest.parameters["format"] = o.format;
    run.manifest.parameters["times"] = std::to_string(o.times);
    run.manifest.grid = io::grid_to_json(grid);

    auto cfg = base;
    cfg.times = semiclassical::default_times(cfg.params, o.times);
    semiclassical::EhrenfestReport report;
    const auto curve = semiclassical::classical_curve(cfg);
    for (std::size_t k = 0; k < cfg.times.size(); ++k) {
        const double t = cfg.times[k];
        const auto f = semiclassical::eval_semiclassical(cfg, t, grid, eval_opts(o));
        char name[32];
        std::snprintf(name, sizeof(name), "snapshot_%03zu.", k);
        run.field(name + o.format, f, format,
                  {{"command", "semiclassical"}, {"parameters", run.manifest.parameters}, {"t", t}});
        const auto c = semiclassical::centroid(f);
        const auto p = classical::curve_point(curve, t);
        report.rows.push_back({t, c, p});
        report.max_deviation = std::max(report.max_deviation, std::hypot(c.x - p.x, c.y - p.y));
    }
    io::write_trajectory_csv(run.dir / "trajectory.csv", report);
    run.manifest.add_output(run.dir, "trajectory.csv");
    run.finish();
    std::cout << "max centroid deviation " << report.max_deviation << " over " << cfg.times.size() << " times\n";
    return ok;
}

int cmd_verify(const Options& o) {
    const auto ids = verify::suite_criteria(o.suite);
    Run run(o, "verify");
    run.manifest.parameters = {{"suite", o.suite}};
    json results = json::array();
    bool all = true;
    for (int id : ids) {
        const auto r = verify::run_criterion(id, {o.threads});
        all = all && r.pass;
        std::cout << verify::format_result(r) << std::endl;
        results.push_back({{"id", r.id},
                           {"name", r.name},
                           {"pass", r.pass},
                           {"measured", r.measured},
                           {"threshold", r.threshold},
                           {"detail", r.detail}});
    }
    // Timings are left out so identical runs produce identical files.
    run.text("verify.json", json{{"suite", o.suite}, {"results", results}}.dump(2) + "\n");
    run.finish();
    return all ? ok : verify_failed;
}

void add_state_flags(CLI::App* sub, Options& o) {
    sub->add_option("--N", o.N, "quanta per degenerate subspace index")->capture_default_str();
    sub->add_option("--p", o.p, "y frequency multiplier")->capture_default_str();
    sub->add_option("--q", o.q, "x frequency multiplier")->capture_default_str();
    sub->add_option("--alpha", o.alpha, "|alpha|")->capture_default_str();
    sub->add_option("--beta-abs", o.beta_abs, "|beta|")->capture_default_str();
    sub->add_option("--phi", o.phi, "phase of beta in radians; accepts pi/K, 5pi/12, -pi/4")->capture_default_str();
    sub->add_option("--omega0", o.omega0, "base frequency")->capture_default_str();
    sub->add_option("--m", o.m, "harmonic order; must equal gcd(p, q)");
    sub->add_option("--out", o.out, std::string("output directory (default $") + kOutEnv + " or qlj_out)");
    sub->add_option("--threads", o.threads, "worker threads, 0 for all cores")->capture_default_str();
}

void add_grid_flags(CLI::App* sub, Options& o, const std::string& fallback) {
    sub->add_option("--grid", o.grid, "NXxNY (default " + fallback + ")");
    sub->add_option("--extent", o.extent, "auto or half-widths X:Y")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum Lissajous states of the 2D harmonic oscillator"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    Options o;

    auto* classical = app.add_subcommand("classical", "classical Lissajous polyline and axis extrema");
    add_state_flags(classical, o);
    auto* state = app.add_subcommand("state", "coefficients and energy of a Lissajous state");
    add_state_flags(state, o);
    auto* field = app.add_subcommand("field", "field dump, density and current rasters");
    add_state_flags(field, o);
    add_grid_flags(field, o, "512x512");
    field->add_option("--format", o.format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}))->capture_default_str();
    auto* vortices = app.add_subcommand("vortices", "circulation cells and phase singularities");
    add_state_flags(vortices, o);
    add_grid_flags(vortices, o, "512x512");
    vortices->add_option("--floor", o.floor, "density floor relative to max rho")->capture_default_str();
    auto* semi = app.add_subcommand("semiclassical", "coherent-state snapshots and centroid trajectory");
    add_state_flags(semi, o);
    add_grid_flags(semi, o, "128x128");
    semi->add_option("--format", o.format, "csv or bin")->check(CLI::IsMember({"csv", "bin"}))->capture_default_str();
    semi->add_option("--times", o.times, "snapshots per period")->capture_default_str();
    auto* ver = app.add_subcommand("verify", "acceptance checks");
    ver->add_option("--suite", o.suite, "one of: " + [] {
        std::string s;
        for (const auto& n : verify::suite_names()) s += (s.empty() ? "" : ", ") + n;
        return s;
    }())->capture_default_str();
    ver->add_option("--out", o.out, "output directory");
    ver->add_option("--threads", o.threads, "worker threads, 0 for all cores");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : flag_error;
    }

    try {
        if (*classical) return cmd_classical(o);
        if (*state) return cmd_state(o);
        if (*field) return cmd_field(o);
        if (*vortices) return cmd_vortices(o);
        if (*semi) return cmd_semiclassical(o);
        return cmd_verify(o);
    } catch (const io::IoError& e) {
        std::cerr << "qlj: " << e.what() << "\n";
        return io_error;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "qlj: " << e.what() << "\n";
        return io_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qlj: " << e.what() << "\n";
        return flag_error;
    } catch (const std::domain_error& e) {
        std::cerr << "qlj: " << e.what() << "\n";
        return flag_error;
    }
}
