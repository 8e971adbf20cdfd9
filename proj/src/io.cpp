#include "qlj/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include <boost/crc.hpp>

namespace qlj::io {

namespace {

constexpr std::uint32_t kBinaryVersion = 1;
constexpr int kColumns = 7;

std::string read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, std::string_view bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

fs::path sidecar_path(const fs::path& data_path) { return fs::path(data_path.string() + ".json"); }

template <class T>
void put_le(std::string& out, T v) {
    std::array<char, sizeof(T)> b;
    std::memcpy(b.data(), &v, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
    out.append(b.data(), b.size());
}

template <class T>
T get_le(const char* p) {
    std::array<char, sizeof(T)> b;
    std::memcpy(b.data(), p, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b.begin(), b.end());
    T v;
    std::memcpy(&v, b.data(), sizeof(T));
    return v;
}

std::array<double, kColumns> node_row(const fields::WaveField& f, int i, int j) {
    const std::size_t k = f.grid.index(i, j);
    return {f.grid.x(i), f.grid.y(j), f.psi[k].real(), f.psi[k].imag(), f.rho[k], f.jx[k], f.jy[k]};
}

fields::WaveField empty_field(const fields::FieldGrid& g) {
    fields::WaveField f;
    f.grid = g;
    f.psi.resize(g.size());
    f.rho.resize(g.size());
    f.jx.resize(g.size());
    f.jy.resize(g.size());
    return f;
}

void store_row(fields::WaveField& f, std::size_t k, const std::array<double, kColumns>& r) {
    f.psi[k] = {r[2], r[3]};
    f.rho[k] = r[4];
    f.jx[k] = r[5];
    f.jy[k] = r[6];
}

bool has_magic(std::string_view bytes) {
    return bytes.size() >= sizeof(kBinaryMagic) && std::memcmp(bytes.data(), kBinaryMagic, sizeof(kBinaryMagic)) == 0;
}

}  // namespace

FieldFormat field_format_from_string(const std::string& s) {
    if (s == "csv") return FieldFormat::csv;
    if (s == "bin") return FieldFormat::bin;
    throw std::invalid_argument("unknown field format: " + s);
}

std::string to_string(FieldFormat f) { return f == FieldFormat::csv ? "csv" : "bin"; }

std::string format_double(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc{}) throw IoError("number formatting failed");
    return {buf, end};
}

double parse_double(std::string_view s) {
    double v = 0;
    auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || end != s.data() + s.size()) throw IoError("malformed number: " + std::string(s));
    return v;
}

std::string crc32_hex(std::span<const char> bytes) {
    boost::crc_32_type crc;
    crc.process_bytes(bytes.data(), bytes.size());
    char buf[9];
    std::snprintf(buf, sizeof(buf), "%08x", static_cast<unsigned>(crc.checksum()));
    return buf;
}

std::string file_crc32(const fs::path& path) {
    const std::string bytes = read_bytes(path);
    return crc32_hex(bytes);
}

json grid_to_json(const fields::FieldGrid& g) {
    return {{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min}, {"y_max", g.y_max}, {"nx", g.nx}, {"ny", g.ny}};
}

fields::FieldGrid grid_from_json(const json& j) {
    try {
        return fields::FieldGrid::make(j.at("x_min").get<double>(), j.at("x_max").get<double>(),
                                       j.at("y_min").get<double>(), j.at("y_max").get<double>(), j.at("nx").get<int>(),
                                       j.at("ny").get<int>());
    } catch (const json::exception& e) {
        throw MalformedHeaderError(std::string("bad grid metadata: ") + e.what());
    }
}

void write_field(const fs::path& data_path, const fields::WaveField& f, FieldFormat format, const json& provenance) {
    const auto& g = f.grid;
    if (f.psi.size() != g.size() || f.rho.size() != g.size() || f.jx.size() != g.size() || f.jy.size() != g.size())
        throw IoError("field arrays do not match the grid");
    std::string out;
    if (format == FieldFormat::csv) {
        out.reserve(g.size() * 120);
        out += kFieldHeader;
        out += '\n';
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const auto r = node_row(f, i, j);
                for (int c = 0; c < kColumns; ++c) {
                    if (c) out += ',';
                    out += format_double(r[c]);
                }
                out += '\n';
            }
    } else {
        out.reserve(sizeof(kBinaryMagic) + 12 + g.size() * kColumns * 8);
        out.append(kBinaryMagic, sizeof(kBinaryMagic));
        put_le<std::uint32_t>(out, kBinaryVersion);
        put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.nx));
        put_le<std::uint32_t>(out, static_cast<std::uint32_t>(g.ny));
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                for (double v : node_row(f, i, j)) put_le<double>(out, v);
    }
    write_bytes(data_path, out);

    json side = {{"format", to_string(format)},
                 {"columns", json::array({"x", "y", "re_psi", "im_psi", "rho", "jx", "jy"})},
                 {"order", "row-major, rows along y from y_min, x fastest"},
                 {"grid", grid_to_json(g)},
                 {"nodes", g.size()},
                 {"data_file", data_path.filename().string()},
                 {"checksum", {{"algorithm", "crc32"}, {"value", crc32_hex(out)}}},
                 {"provenance", provenance}};
    write_bytes(sidecar_path(data_path), side.dump(2) + "\n");
}

fields::WaveField read_field(const fs::path& data_path, FieldFormat expected) {
    json side;
    try {
        side = json::parse(read_bytes(sidecar_path(data_path)));
    } catch (const json::exception& e) {
        throw MalformedHeaderError(std::string("unreadable sidecar: ") + e.what());
    }
    const fields::FieldGrid g = grid_from_json(side.value("grid", json::object()));
    const std::string bytes = read_bytes(data_path);
    const std::string declared = side.value("format", "");
    const bool binary = has_magic(bytes);

    if (expected == FieldFormat::csv && (binary || declared == "bin"))
        throw FormatError(data_path.string() + " holds binary field data, requested text");
    if (expected == FieldFormat::bin && (!binary || declared == "csv"))
        throw FormatError(data_path.string() + " holds text field data, requested binary");

    fields::WaveField f = empty_field(g);
    if (expected == FieldFormat::csv) {
        std::string_view rest(bytes);
        const std::size_t eol = rest.find('\n');
        if (eol == std::string_view::npos || rest.substr(0, eol) != kFieldHeader)
            throw MalformedHeaderError("field CSV header must be '" + std::string(kFieldHeader) + "'");
        rest.remove_prefix(eol + 1);
        std::size_t row = 0;
        while (!rest.empty()) {
            std::size_t end = rest.find('\n');
            if (end == std::string_view::npos)
                throw DimensionMismatchError("truncated final row after " + std::to_string(row) + " rows");
            std::string_view line = rest.substr(0, end);
            rest.remove_prefix(end + 1);
            std::array<double, kColumns> r{};
            int c = 0;
            while (true) {
                const std::size_t comma = line.find(',');
                if (c >= kColumns) throw DimensionMismatchError("row " + std::to_string(row) + " has too many columns");
                r[c++] = parse_double(line.substr(0, comma));
                if (comma == std::string_view::npos) break;
                line.remove_prefix(comma + 1);
            }
            if (c != kColumns) throw DimensionMismatchError("row " + std::to_string(row) + " has too few columns");
            if (row >= g.size()) throw DimensionMismatchError("more rows than the grid holds");
            store_row(f, row++, r);
        }
        if (row != g.size())
            throw DimensionMismatchError("expected " + std::to_string(g.size()) + " rows, found " + std::to_string(row));
    } else {
        const std::size_t head = sizeof(kBinaryMagic) + 12;
        if (bytes.size() < head) throw DimensionMismatchError("binary header truncated");
        const auto version = get_le<std::uint32_t>(bytes.data() + 8);
        if (version != kBinaryVersion) throw MalformedHeaderError("unsupported binary version " + std::to_string(version));
        const auto nx = get_le<std::uint32_t>(bytes.data() + 12), ny = get_le<std::uint32_t>(bytes.data() + 16);
        if (int(nx) != g.nx || int(ny) != g.ny) throw DimensionMismatchError("binary dimensions disagree with sidecar");
        if (bytes.size() != head + g.size() * kColumns * 8)
            throw DimensionMismatchError("binary payload size does not match " + std::to_string(g.size()) + " nodes");
        const char* p = bytes.data() + head;
        for (std::size_t k = 0; k < g.size(); ++k) {
            std::array<double, kColumns> r;
            for (int c = 0; c < kColumns; ++c, p += 8) r[c] = get_le<double>(p);
            store_row(f, k, r);
        }
    }

    const json checksum = side.value("checksum", json::object());
    const std::string want = checksum.value("value", std::string{});
    if (want != crc32_hex(bytes)) throw ChecksumError("checksum mismatch for " + data_path.string());
    return f;
}

json state_to_json(const states::LissajousState& s) {
    json coeffs = json::array();
    for (const auto& e : s.coeffs) coeffs.push_back({e.nx, e.ny, e.c.real(), e.c.imag()});
    const auto& p = s.params;
    return {{"params", {{"p", p.p}, {"q", p.q}, {"omega0", p.omega0}, {"p0", p.p0}, {"q0", p.q0}, {"m", p.m}}},
            {"N", s.N},
            {"coeffs", coeffs},
            {"provenance", std::string(states::to_string(s.provenance))},
            {"energy", s.energy}};
}

states::LissajousState state_from_json(const json& j) {
    try {
        states::LissajousState s;
        const auto& p = j.at("params");
        s.params = states::OscillatorParams::make(p.at("p").get<int>(), p.at("q").get<int>(), p.at("omega0").get<double>());
        s.N = j.at("N").get<int>();
        s.energy = j.at("energy").get<double>();
        s.provenance = states::provenance_from_string(j.at("provenance").get<std::string>());
        for (const auto& e : j.at("coeffs")) {
            if (e.size() != 4) throw IoError("state coefficient entries need [nx, ny, re, im]");
            s.coeffs.push_back({e[0].get<int>(), e[1].get<int>(), {e[2].get<double>(), e[3].get<double>()}});
        }
        if (static_cast<int>(s.coeffs.size()) != s.N + 1) throw IoError("state needs N + 1 coefficients");
        for (const auto& e : s.coeffs)
            if (s.params.q * e.nx + s.params.p * e.ny != s.N * s.params.p * s.params.q)
                throw IoError("coefficient ket outside the degenerate subspace");
        return s;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed state JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw IoError(std::string("invalid state JSON: ") + e.what());
    }
}

Rgb colormap(double t) {
    static constexpr std::array<std::array<double, 3>, 5> stops = {{
        {0, 0, 0},
        {50, 20, 110},
        {190, 30, 60},
        {245, 140, 20},
        {252, 245, 180},
    }};
    t = std::clamp(t, 0.0, 1.0) * (stops.size() - 1);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(t), stops.size() - 2);
    const double w = t - k;
    auto mix = [&](int c) {
        return static_cast<std::uint8_t>(std::lround(stops[k][c] + w * (stops[k + 1][c] - stops[k][c])));
    };
    return {mix(0), mix(1), mix(2)};
}

void write_raster(const fs::path& path, std::span<const double> values, const fields::FieldGrid& grid) {
    if (values.size() != grid.size()) throw IoError("raster values do not match the grid");
    if (!std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); }))
        throw IoError("raster values must be finite");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double span = *hi - *lo;
    std::string out = "P6\n" + std::to_string(grid.nx) + " " + std::to_string(grid.ny) + "\n255\n";
    for (int j = grid.ny - 1; j >= 0; --j)
        for (int i = 0; i < grid.nx; ++i) {
            const double t = span > 0 ? (values[grid.index(i, j)] - *lo) / span : 0.0;
            const Rgb c = colormap(t);
            out += static_cast<char>(c.r);
            out += static_cast<char>(c.g);
            out += static_cast<char>(c.b);
        }
    write_bytes(path, out);
}

void write_vector_csv(const fs::path& path, const fields::WaveField& f, int stride) {
    if (stride < 1) throw IoError("vector stride must be positive");
    std::string out = "x,y,jx,jy\n";
    for (int j = 0; j < f.grid.ny; j += stride)
        for (int i = 0; i < f.grid.nx; i += stride) {
            const std::size_t k = f.grid.index(i, j);
            out += format_double(f.grid.x(i)) + ',' + format_double(f.grid.y(j)) + ',' + format_double(f.jx[k]) + ',' +
                   format_double(f.jy[k]) + '\n';
        }
    write_bytes(path, out);
}

void write_polyline_csv(const fs::path& path, std::span<const double> t, std::span<const classical::Point2> pts) {
    if (t.size() != pts.size()) throw IoError("polyline parameter and point counts differ");
    std::string out = "t,x,y\n";
    for (std::size_t k = 0; k < t.size(); ++k)
        out += format_double(t[k]) + ',' + format_double(pts[k].x) + ',' + format_double(pts[k].y) + '\n';
    write_bytes(path, out);
}

void write_trajectory_csv(const fs::path& path, const semiclassical::EhrenfestReport& r) {
    std::string out = "t,x_bar,y_bar,x_classical,y_classical\n";
    for (const auto& row : r.rows)
        out += format_double(row.t) + ',' + format_double(row.quantum.x) + ',' + format_double(row.quantum.y) + ',' +
               format_double(row.classical.x) + ',' + format_double(row.classical.y) + '\n';
    write_bytes(path, out);
}

void write_text(const fs::path& path, const std::string& text) { write_bytes(path, text); }

std::string read_text(const fs::path& path) { return read_bytes(path); }

void RunManifest::add_output(const fs::path& dir, const fs::path& file) {
    const fs::path full = file.is_absolute() ? file : dir / file;
    std::error_code ec;
    const auto size = fs::file_size(full, ec);
    if (ec) throw IoError("cannot stat " + full.string());
    outputs.push_back({fs::relative(full, dir).generic_string(), file_crc32(full), size});
}

json manifest_to_json(const RunManifest& m) {
    json outputs = json::array();
    for (const auto& o : m.outputs) outputs.push_back({{"path", o.path}, {"crc32", o.crc32}, {"bytes", o.bytes}});
    return {{"command", m.command},
            {"parameters", m.parameters},
            {"tool_version", m.tool_version},
            {"grid", m.grid},
            {"outputs", outputs}};
}

RunManifest manifest_from_json(const json& j) {
    try {
        RunManifest m;
        m.command = j.at("command").get<std::string>();
        m.parameters = j.at("parameters").get<std::map<std::string, std::string>>();
        m.tool_version = j.at("tool_version").get<std::string>();
        m.grid = j.at("grid");
        for (const auto& o : j.at("outputs"))
            m.outputs.push_back({o.at("path").get<std::string>(), o.at("crc32").get<std::string>(),
                                 o.at("bytes").get<std::uintmax_t>()});
        return m;
    } catch (const json::exception& e) {
        throw IoError(std::string("malformed manifest: ") + e.what());
    }
}

void write_manifest(const fs::path& path, const RunManifest& m) { write_bytes(path, manifest_to_json(m).dump(2) + "\n"); }

}  // namespace qlj::io
