#include <doctest.h>

#include <clocale>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>

#include "qlj/io.hpp"

using namespace qlj;
using namespace qlj::io;
using std::numbers::pi;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("qlj_io_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

fields::WaveField sample_field() {
    auto s = states::build_from_amplitudes(6, states::OscillatorParams::make(1, 2), {1.0, 1.0, pi / 4});
    return fields::eval_state(s, fields::default_extent(s, 24, 36));
}

template <class T>
bool same(const std::vector<T>& a, const std::vector<T>& b) {
    return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
}

std::string slurp(const fs::path& p) { return read_text(p); }

}  // namespace

TEST_CASE("number text round-trips exactly") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int k = 0; k < 2000; ++k) {
        const double v = u(rng) * std::pow(10.0, int(rng() % 40) - 20);
        CHECK(parse_double(format_double(v)) == v);
    }
    CHECK(parse_double(format_double(-0.0)) == 0.0);
    CHECK(format_double(0.5) == "0.5");
    CHECK_THROWS_AS(parse_double("1.5x"), IoError);
}

TEST_CASE("formatting ignores the C locale") {
    const std::string before = format_double(1234.5);
    if (std::setlocale(LC_ALL, "de_DE.UTF-8") || std::setlocale(LC_ALL, "fr_FR.UTF-8")) {
        CHECK(format_double(1234.5) == before);
        CHECK(parse_double("1234.5") == 1234.5);
        std::setlocale(LC_ALL, "C");
    }
    CHECK(before == "1234.5");
}

TEST_CASE("crc32 check value") {
    const std::string s = "123456789";
    CHECK(crc32_hex(s) == "cbf43926");
}

TEST_CASE("field dumps round-trip bit for bit") {
    TempDir dir;
    const auto f = sample_field();
    for (auto format : {FieldFormat::csv, FieldFormat::bin}) {
        const fs::path p = dir.path / ("field." + to_string(format));
        write_field(p, f, format, {{"source", "test"}});
        auto g = read_field(p, format);
        CHECK(g.grid.nx == f.grid.nx);
        CHECK(g.grid.y_max == f.grid.y_max);
        CHECK(same(g.psi, f.psi));
        CHECK(same(g.rho, f.rho));
        CHECK(same(g.jx, f.jx));
        CHECK(same(g.jy, f.jy));
        CHECK(g.grad_x.empty());
        auto side = json::parse(slurp(p.string() + ".json"));
        CHECK(side["checksum"]["value"] == file_crc32(p));
        CHECK(side["provenance"]["source"] == "test");
        CHECK(side["nodes"] == f.grid.size());
    }
}

TEST_CASE("csv header and first row") {
    TempDir dir;
    const auto f = sample_field();
    write_field(dir.path / "f.csv", f, FieldFormat::csv);
    std::ifstream in(dir.path / "f.csv");
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == kFieldHeader);
    CHECK(row.rfind(format_double(f.grid.x_min) + "," + format_double(f.grid.y_min) + ",", 0) == 0);
}

TEST_CASE("reader rejects damaged dumps") {
    TempDir dir;
    const auto f = sample_field();
    const fs::path csv = dir.path / "f.csv", bin = dir.path / "f.bin";
    write_field(csv, f, FieldFormat::csv);
    write_field(bin, f, FieldFormat::bin);

    SUBCASE("binary requested as text and text as binary") {
        CHECK_THROWS_AS(read_field(bin, FieldFormat::csv), FormatError);
        CHECK_THROWS_AS(read_field(csv, FieldFormat::bin), FormatError);
    }
    SUBCASE("truncated csv") {
        std::string text = slurp(csv);
        text.resize(text.size() - 40);
        write_text(csv, text);
        CHECK_THROWS_AS(read_field(csv, FieldFormat::csv), DimensionMismatchError);
    }
    SUBCASE("missing row") {
        std::string text = slurp(csv);
        text.erase(text.rfind('\n', text.size() - 2) + 1);
        write_text(csv, text);
        CHECK_THROWS_AS(read_field(csv, FieldFormat::csv), DimensionMismatchError);
    }
    SUBCASE("truncated binary") {
        std::string bytes = slurp(bin);
        bytes.resize(bytes.size() - 8);
        write_text(bin, bytes);
        CHECK_THROWS_AS(read_field(bin, FieldFormat::bin), DimensionMismatchError);
    }
    SUBCASE("bad header") {
        std::string text = slurp(csv);
        text.replace(0, 1, "u");
        write_text(csv, text);
        CHECK_THROWS_AS(read_field(csv, FieldFormat::csv), MalformedHeaderError);
    }
    SUBCASE("corrupted value keeps its shape but fails the checksum") {
        std::string text = slurp(csv);
        const auto pos = text.find_first_of("12345678", text.find('\n'));
        ++text[pos];
        write_text(csv, text);
        CHECK_THROWS_AS(read_field(csv, FieldFormat::csv), ChecksumError);
    }
    SUBCASE("flipped binary payload byte") {
        std::string bytes = slurp(bin);
        bytes[bytes.size() - 3] ^= 0x10;
        write_text(bin, bytes);
        CHECK_THROWS_AS(read_field(bin, FieldFormat::bin), ChecksumError);
    }
    SUBCASE("missing sidecar") {
        fs::remove(csv.string() + ".json");
        CHECK_THROWS_AS(read_field(csv, FieldFormat::csv), IoError);
    }
}

TEST_CASE("raster output is deterministic") {
    TempDir dir;
    const auto f = sample_field();
    write_raster(dir.path / "a.ppm", f.rho, f.grid);
    write_raster(dir.path / "b.ppm", f.rho, f.grid);
    const std::string a = slurp(dir.path / "a.ppm");
    CHECK(a == slurp(dir.path / "b.ppm"));
    const std::string head = "P6\n" + std::to_string(f.grid.nx) + " " + std::to_string(f.grid.ny) + "\n255\n";
    CHECK(a.rfind(head, 0) == 0);
    CHECK(a.size() == head.size() + 3 * f.grid.size());
}

TEST_CASE("constant field gives a uniform image") {
    TempDir dir;
    fields::FieldGrid g = fields::FieldGrid::symmetric(1, 1, 16, 16);
    write_raster(dir.path / "c.ppm", std::vector<double>(g.size(), 3.5), g);
    const std::string img = slurp(dir.path / "c.ppm");
    const auto body = img.substr(img.size() - 3 * g.size());
    const Rgb first = colormap(0);
    for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(std::uint8_t(body[3 * k]) == first.r);
        CHECK(std::uint8_t(body[3 * k + 2]) == first.b);
    }
}

TEST_CASE("raster orientation puts y_max on top") {
    TempDir dir;
    fields::FieldGrid g = fields::FieldGrid::symmetric(1, 1, 16, 16);
    std::vector<double> v(g.size());
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) v[g.index(i, j)] = g.y(j);
    write_raster(dir.path / "o.ppm", v, g);
    const std::string img = slurp(dir.path / "o.ppm");
    const auto body = img.substr(img.size() - 3 * g.size());
    const Rgb top = colormap(1), bottom = colormap(0);
    CHECK(std::uint8_t(body[0]) == top.r);
    CHECK(std::uint8_t(body[body.size() - 1]) == bottom.b);
}

TEST_CASE("raster rejects non-finite values and wrong sizes") {
    TempDir dir;
    fields::FieldGrid g = fields::FieldGrid::symmetric(1, 1, 16, 16);
    std::vector<double> v(g.size(), 1.0);
    v[5] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(write_raster(dir.path / "n.ppm", v, g), IoError);
    v[5] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(write_raster(dir.path / "n.ppm", v, g), IoError);
    CHECK_THROWS_AS(write_raster(dir.path / "n.ppm", std::vector<double>(10, 1.0), g), IoError);
}

TEST_CASE("colormap endpoints and monotone luminance") {
    auto lum = [](Rgb c) { return 0.2126 * c.r + 0.7152 * c.g + 0.0722 * c.b; };
    CHECK(colormap(0).r == 0);
    CHECK(colormap(1).r == 252);
    CHECK(colormap(-3).g == colormap(0).g);
    CHECK(colormap(7).g == colormap(1).g);
    double prev = -1;
    for (int k = 0; k <= 100; ++k) {
        const double l = lum(colormap(k / 100.0));
        CHECK(l >= prev);
        prev = l;
    }
}

TEST_CASE("state JSON round-trip and validation") {
    auto s = states::build_from_amplitudes(12, states::OscillatorParams::make(2, 3, 1.5), {0.7, 1.3, 0.4});
    auto back = state_from_json(json::parse(state_to_json(s).dump()));
    CHECK(back.N == s.N);
    CHECK(back.params.p == 2);
    CHECK(back.params.omega0 == 1.5);
    CHECK(back.provenance == s.provenance);
    REQUIRE(back.coeffs.size() == s.coeffs.size());
    for (std::size_t k = 0; k < s.coeffs.size(); ++k) {
        CHECK(back.coeffs[k].nx == s.coeffs[k].nx);
        CHECK(back.coeffs[k].c == s.coeffs[k].c);
    }
    auto bad = state_to_json(s);
    bad["coeffs"][0][0] = 1;
    CHECK_THROWS_AS(state_from_json(bad), IoError);
    auto short_ = state_to_json(s);
    short_["coeffs"].erase(0);
    CHECK_THROWS_AS(state_from_json(short_), IoError);
    CHECK_THROWS_AS(state_from_json(json::parse("{\"N\": 3}")), IoError);
}

TEST_CASE("manifest round-trip") {
    TempDir dir;
    write_text(dir.path / "out.txt", "hello\n");
    RunManifest m;
    m.command = "field";
    m.parameters = {{"N", "20"}, {"phi", "pi/4"}};
    m.tool_version = "1.0.0";
    m.grid = grid_to_json(fields::FieldGrid::symmetric(2, 3, 32, 16));
    m.add_output(dir.path, "out.txt");
    REQUIRE(m.outputs.size() == 1);
    CHECK(m.outputs[0].bytes == 6);
    CHECK(m.outputs[0].crc32 == crc32_hex(std::string("hello\n")));
    write_manifest(dir.path / "manifest.json", m);
    auto back = manifest_from_json(json::parse(slurp(dir.path / "manifest.json")));
    CHECK(back.command == "field");
    CHECK(back.parameters == m.parameters);
    CHECK(back.outputs[0].path == "out.txt");
    CHECK(grid_from_json(back.grid).ny == 16);
    CHECK_THROWS_AS(manifest_from_json(json::array()), IoError);
}

TEST_CASE("unwritable destinations raise IoError") {
    CHECK_THROWS_AS(write_text("/nonexistent_dir_qlj/x.txt", "x"), IoError);
    CHECK_THROWS_AS(read_text("/nonexistent_dir_qlj/x.txt"), IoError);
    CHECK_THROWS_AS(field_format_from_string("png"), std::invalid_argument);
}
