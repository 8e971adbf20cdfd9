#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qlj/classical.hpp"
#include "qlj/fields.hpp"
#include "qlj/semiclassical.hpp"
#include "qlj/states.hpp"

namespace qlj::io {

namespace fs = std::filesystem;
using json = nlohmann::json;

class IoError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};
class MalformedHeaderError : public IoError {
   public:
    using IoError::IoError;
};
class DimensionMismatchError : public IoError {
   public:
    using IoError::IoError;
};
class ChecksumError : public IoError {
   public:
    using IoError::IoError;
};
// Data in the other encoding than the one requested (binary read as text or vice versa).
class FormatError : public IoError {
   public:
    using IoError::IoError;
};

enum class FieldFormat { csv, bin };

FieldFormat field_format_from_string(const std::string& s);
std::string to_string(FieldFormat f);

inline constexpr const char* kFieldHeader = "x,y,re_psi,im_psi,rho,jx,jy";
inline constexpr char kBinaryMagic[8] = {'Q', 'L', 'J', 'F', 'I', 'E', 'L', 'D'};

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);
double parse_double(std::string_view s);

// CRC-32 (IEEE) of a byte range or a whole file, as 8 lowercase hex digits.
std::string crc32_hex(std::span<const char> bytes);
std::string file_crc32(const fs::path& path);

// Writes the data file and a JSON sidecar at data_path + ".json". The dump
// stores psi, rho and J per node; gradients are not part of the format.
void write_field(const fs::path& data_path, const fields::WaveField& f, FieldFormat format,
                 const json& provenance = json::object());

// Reads a dump written by write_field in the expected format. Gradients come back empty.
fields::WaveField read_field(const fs::path& data_path, FieldFormat expected);

json grid_to_json(const fields::FieldGrid& g);
fields::FieldGrid grid_from_json(const json& j);

json state_to_json(const states::LissajousState& s);
states::LissajousState state_from_json(const json& j);

// Fixed colormap: piecewise-linear through black, indigo, crimson, orange and
// pale yellow at equal spacing. Values are min-max normalized before lookup;
// a constant field maps to the first stop.
struct Rgb {
    std::uint8_t r, g, b;
};
Rgb colormap(double t);

// Binary PPM (P6). Image row 0 is the grid row at y_max. Throws IoError on
// non-finite values or a size mismatch.
void write_raster(const fs::path& path, std::span<const double> values, const fields::FieldGrid& grid);

// x, y, jx, jy at every stride-th node in each direction.
void write_vector_csv(const fs::path& path, const fields::WaveField& f, int stride);

void write_polyline_csv(const fs::path& path, std::span<const double> t, std::span<const classical::Point2> pts);
void write_trajectory_csv(const fs::path& path, const semiclassical::EhrenfestReport& r);

void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

struct OutputEntry {
    std::string path;  // relative to the manifest directory
    std::string crc32;
    std::uintmax_t bytes = 0;
};

struct RunManifest {
    std::string command;
    std::map<std::string, std::string> parameters;
    std::string tool_version;
    json grid = nullptr;
    std::vector<OutputEntry> outputs;

    // Records a file already written under dir.
    void add_output(const fs::path& dir, const fs::path& file);
};

json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const json& j);
void write_manifest(const fs::path& path, const RunManifest& m);

}  // namespace qlj::io
