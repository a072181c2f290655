#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.h"

namespace toriclab::cli {

std::string build_id();
std::string num(double v);

class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}
  void add(std::vector<std::string> row);
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }
  std::size_t column(const std::string& name) const;

  // "# config: {json}" line, then RFC 4180 records.
  void write(const std::filesystem::path& path, const ExperimentConfig& config) const;
  static CsvTable read(const std::filesystem::path& path);

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

ExperimentConfig read_config_header(const std::filesystem::path& csv);

struct RunRecord {
  std::string name;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> files;
  bool interrupted = false;
  double seconds = 0.0;
};

void write_sidecar(const std::filesystem::path& dir, const ExperimentConfig& config, const RunRecord& record);

// Writes text to a temporary file and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::string& text);

}  // namespace toriclab::cli
