#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace yrast::io {

using json = nlohmann::json;

inline constexpr const char* kVersion = "1.0.0";
/// Environment variable naming the default output directory.
inline constexpr const char* kOutputDirEnv = "YRASTLAB_OUTPUT_DIR";

/// 64-bit FNV-1a of the compact JSON dump, as 16 hex digits.
std::string config_hash(const json& config);

struct Provenance {
  std::string command;
  json config = json::object();
  std::uint64_t seed = 0;

  std::string hash() const { return config_hash(config); }
  json to_json() const;
};

/// %.17g (round-trips every double); integers print without a decimal point.
std::string format_number(double v);

/// A CSV file: `#` comment lines, one header row, string cells.
struct CsvTable {
  std::vector<std::string> comments;  // without the leading "# "
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values);
  std::size_t column(const std::string& name) const;
  std::vector<double> numeric(const std::string& name) const;
};

CsvTable make_table(std::vector<std::string> header, const Provenance& prov);

std::string to_string(const CsvTable& table);
CsvTable parse_csv(const std::string& text);
/// Parses, rewrites every numeric cell with format_number and serializes again.
std::string reserialize_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_csv(const std::filesystem::path& path, const CsvTable& table);
/// Pretty-printed (2 spaces) with a trailing newline.
void write_json(const std::filesystem::path& path, const json& value);

/// The explicit directory if given, else $YRASTLAB_OUTPUT_DIR, else ".".
std::filesystem::path output_dir(const std::string& explicit_dir = {});

}  // namespace yrast::io
