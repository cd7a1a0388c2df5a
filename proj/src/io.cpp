#include "mpp/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mpp/config.hpp"

namespace mpp {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

void write_metadata_header(std::ostream& out, const std::string& config_hash) {
  out << "# tool: mppsim " << kToolVersion << "\n";
  out << "# config_hash: " << config_hash << "\n";
  out << "# " << kUnitNote << "\n";
}

CsvWriter::CsvWriter(std::ostream& out, const std::string& config_hash,
                     const std::vector<std::string>& columns)
    : out_(out), n_columns_(columns.size()) {
  write_metadata_header(out_, config_hash);
  for (std::size_t i = 0; i < columns.size(); ++i)
    out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != n_columns_)
    throw std::invalid_argument("CSV row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i)
    out_ << format_number(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::raw_row(const std::vector<std::string>& cells) {
  if (cells.size() != n_columns_)
    throw std::invalid_argument("CSV row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i)
    out_ << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

std::string json_with_metadata(const std::string& body_json,
                               const std::string& config_hash) {
  nlohmann::json j = nlohmann::json::parse(body_json);
  j["_meta"] = {{"tool", std::string("mppsim ") + kToolVersion},
                {"config_hash", config_hash},
                {"units", kUnitNote}};
  return j.dump(2) + "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
}

} // namespace mpp
