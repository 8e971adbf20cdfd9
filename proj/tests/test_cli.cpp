#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <sys/wait.h>

#include "qlj/io.hpp"

using namespace qlj::io;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("qlj_cli_" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

struct Result {
    int code;
    std::string out;
};

std::string quote(const std::string& s) { return "'" + s + "'"; }

Result run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + quote(QLJ_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof(buf), pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

json load(const fs::path& p) { return json::parse(read_text(p)); }

}  // namespace

TEST_CASE("vortices for the 2:3 figure") {
    TempDir dir;
    auto r = run("vortices --N 20 --p 2 --q 3 --phi pi/6 --out " + quote(dir.path.string()));
    REQUIRE(r.code == 0);
    CHECK(r.out.find("vortices 6") != std::string::npos);
    CHECK(load(dir.path / "vortices.json")["count"] == 6);
    auto m = load(dir.path / "manifest.json");
    CHECK(m["command"] == "vortices");
    CHECK(m["parameters"]["phi"] == "pi/6");
}

TEST_CASE("identities suite passes") {
    TempDir dir;
    auto r = run("verify --suite identities --out " + quote(dir.path.string()));
    CHECK(r.code == 0);
    CHECK(r.out.find("PASS [1]") != std::string::npos);
    CHECK(r.out.find("PASS [2]") != std::string::npos);
    auto v = load(dir.path / "verify.json");
    CHECK(v["results"].size() == 2);
}

TEST_CASE("failing checks exit with 3") {
    TempDir dir;
    // The fixed-width tube criterion fails; see the README.
    CHECK(run("verify --suite localization --out " + quote(dir.path.string())).code == 3);
}

TEST_CASE("flag errors exit with 2") {
    TempDir dir;
    const std::string out = " --out " + quote(dir.path.string());
    CHECK(run("field --bogus 1" + out).code == 2);
    CHECK(run("nosuchcommand").code == 2);
    CHECK(run("state --p 2 --q 4 --m 3" + out).code == 2);
    CHECK(run("state --p 2 --q 4 --m 2" + out).code == 0);
    CHECK(run("state --phi pi/0" + out).code == 2);
    CHECK(run("state --phi half" + out).code == 2);
    CHECK(run("field --grid 512" + out).code == 2);
    CHECK(run("field --extent 3" + out).code == 2);
    CHECK(run("field --format png" + out).code == 2);
    CHECK(run("verify --suite nope" + out).code == 2);
    // Under-resolved grid: the Nyquist guard is a parameter error.
    CHECK(run("field --p 3 --q 6 --phi pi/8 --grid 32x32" + out).code == 2);
}

TEST_CASE("unwritable output exits with 4") {
    TempDir dir;
    write_text(dir.path / "file", "x");
    CHECK(run("state --out " + quote((dir.path / "file" / "sub").string())).code == 4);
}

TEST_CASE("output directory from the environment") {
    TempDir dir;
    auto r = run("state --N 3", "QLJ_OUT_DIR=" + quote(dir.path.string()));
    CHECK(r.code == 0);
    CHECK(fs::exists(dir.path / "state.json"));
    CHECK(fs::exists(dir.path / "manifest.json"));
}

TEST_CASE("phase literals parse exactly") {
    TempDir dir;
    const std::string out = " --out " + quote(dir.path.string());
    REQUIRE(run("state --N 4 --p 1 --q 2 --phi 5pi/12" + out).code == 0);
    const auto a = read_text(dir.path / "state.json");
    REQUIRE(run("state --N 4 --p 1 --q 2 --phi " + format_double(5 * 3.14159265358979323846 / 12) + out).code == 0);
    CHECK(read_text(dir.path / "state.json") == a);
    REQUIRE(run("state --N 4 --phi -pi/4" + out).code == 0);
    const auto b = read_text(dir.path / "state.json");
    REQUIRE(run("state --N 4 --phi -0.25*pi" + out).code == 0);
    CHECK(read_text(dir.path / "state.json") == b);
}

TEST_CASE("state subcommand prints coefficients and energy") {
    TempDir dir;
    auto r = run("state --N 2 --p 1 --q 1 --out " + quote(dir.path.string()));
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["N"] == 2);
    CHECK(j["coeffs"].size() == 3);
    CHECK(j["energy"].get<double>() == doctest::Approx(3.0));
}

TEST_CASE("every output is listed with its checksum and replays byte for byte") {
    TempDir a, b;
    const std::string args = "field --N 6 --p 1 --q 2 --phi pi/4 --grid 64x48 --format bin";
    REQUIRE(run(args + " --threads 3 --out " + quote(a.path.string())).code == 0);
    auto m = load(a.path / "manifest.json");
    std::size_t files = 0;
    for (const auto& e : fs::directory_iterator(a.path)) files += e.path().filename() != "manifest.json";
    CHECK(m["outputs"].size() == files);
    for (const auto& o : m["outputs"]) CHECK(file_crc32(a.path / o["path"].get<std::string>()) == o["crc32"]);

    // Rebuild the command line from the recorded parameters alone.
    std::string replay = m["command"].get<std::string>();
    for (const auto& [k, v] : m["parameters"].items()) replay += " --" + k + " " + quote(v.get<std::string>());
    REQUIRE(run(replay + " --threads 1 --out " + quote(b.path.string())).code == 0);
    for (const auto& o : m["outputs"]) {
        const auto p = o["path"].get<std::string>();
        CHECK(read_text(a.path / p) == read_text(b.path / p));
    }
    CHECK(read_text(a.path / "manifest.json") == read_text(b.path / "manifest.json"));
    auto f = read_field(a.path / "field.bin", FieldFormat::bin);
    CHECK(f.grid.nx == 64);
}

TEST_CASE("classical and semiclassical outputs") {
    TempDir dir;
    const std::string out = " --out " + quote(dir.path.string());
    REQUIRE(run("classical --p 2 --q 3 --phi pi/4" + out).code == 0);
    auto c = load(dir.path / "classical.json");
    CHECK(c["extrema_x"] == 3);
    CHECK(c["extrema_y"] == 2);
    CHECK(read_text(dir.path / "classical.csv").rfind("t,x,y\n", 0) == 0);

    REQUIRE(run("semiclassical --p 1 --q 2 --times 4 --grid 64x64" + out).code == 0);
    const auto traj = read_text(dir.path / "trajectory.csv");
    CHECK(traj.rfind("t,x_bar,y_bar,x_classical,y_classical\n", 0) == 0);
    CHECK(std::count(traj.begin(), traj.end(), '\n') == 5);
    CHECK(fs::exists(dir.path / "snapshot_003.csv"));
    CHECK(load(dir.path / "manifest.json")["outputs"].size() == 9);
}

TEST_CASE("defaults give the static 1:1 state") {
    TempDir dir;
    REQUIRE(run("field --grid 128x128 --out " + quote(dir.path.string())).code == 0);
    auto s = load(dir.path / "summary.json");
    CHECK(s["max_current"].get<double>() == 0.0);
    CHECK(s["norm"].get<double>() == doctest::Approx(1.0).epsilon(1e-6));
    auto m = load(dir.path / "manifest.json");
    CHECK(m["parameters"]["N"] == "20");
    CHECK(m["parameters"]["alpha"] == "1");
    CHECK(m["parameters"]["phi"] == "0");
}
