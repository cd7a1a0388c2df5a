#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace mpp {

inline constexpr const char* kToolVersion = "1.0.0";
inline constexpr const char* kUnitNote =
    "units: frequencies linear THz, times ps, lengths um, damping rates 1/ps "
    "(amplitude decay, no 2 pi)";

/// %.12g: shortest round-trippable fixed formatting for byte-identical output.
std::string format_number(double value);

/// "# key: value" comment block carrying tool version, config hash and units.
void write_metadata_header(std::ostream& out, const std::string& config_hash);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::string& config_hash,
            const std::vector<std::string>& columns);

  void row(const std::vector<double>& values);
  void raw_row(const std::vector<std::string>& cells);

 private:
  std::ostream& out_;
  std::size_t n_columns_;
};

/// Serializes nlohmann-style json deterministically (sorted keys, %.12g
/// numbers) with the metadata embedded as a "_meta" object.
std::string json_with_metadata(const std::string& body_json,
                               const std::string& config_hash);

void write_text_file(const std::string& path, const std::string& content);

} // namespace mpp
