#include "output.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#ifndef TORICLAB_BUILD_ID
#define TORICLAB_BUILD_ID "unknown"
#endif

namespace toriclab::cli {

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::vector<std::string> split_record(std::istream& in, const std::string& first) {
  std::vector<std::string> fields;
  std::string line = first;
  std::string field;
  bool quoted = false;
  for (;;) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char ch = line[i];
      if (quoted) {
        if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else if (ch == '"') {
          quoted = false;
        } else {
          field += ch;
        }
      } else if (ch == '"') {
        quoted = true;
      } else if (ch == ',') {
        fields.push_back(field);
        field.clear();
      } else if (ch != '\r') {
        field += ch;
      }
    }
    if (!quoted) break;
    field += '\n';
    if (!std::getline(in, line)) throw std::runtime_error("unterminated quoted CSV field");
  }
  fields.push_back(field);
  return fields;
}

}  // namespace

std::string build_id() { return TORICLAB_BUILD_ID; }

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void CsvTable::add(std::vector<std::string> row) {
  if (row.size() != header_.size()) throw std::logic_error("CSV row width does not match header");
  rows_.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (header_[i] == name) return i;
  }
  throw std::out_of_range("no CSV column '" + name + "'");
}

void CsvTable::write(const std::filesystem::path& path, const ExperimentConfig& config) const {
  std::ostringstream out;
  out << "# config: " << to_json(config).dump() << "\r\n";
  auto emit = [&](const std::vector<std::string>& rec) {
    for (std::size_t i = 0; i < rec.size(); ++i) out << (i ? "," : "") << quote(rec[i]);
    out << "\r\n";
  };
  emit(header_);
  for (const auto& r : rows_) emit(r);
  write_atomically(path, out.str());
}

CsvTable CsvTable::read(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto rec = split_record(in, line);
    if (header.empty()) {
      header = std::move(rec);
    } else {
      rows.push_back(std::move(rec));
    }
  }
  CsvTable t(header);
  for (auto& r : rows) t.add(std::move(r));
  return t;
}

ExperimentConfig read_config_header(const std::filesystem::path& csv) {
  std::ifstream in(csv);
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty file " + csv.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::string prefix = "# config: ";
  if (line.rfind(prefix, 0) != 0) throw ConfigError("no configuration header in " + csv.string());
  try {
    return from_json(nlohmann::json::parse(line.substr(prefix.size())));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("unreadable configuration header: ") + e.what());
  }
}

void write_sidecar(const std::filesystem::path& dir, const ExperimentConfig& config, const RunRecord& record) {
  nlohmann::json j{{"config", to_json(config)},
                   {"seed", config.seed},
                   {"build", build_id()},
                   {"workers", config.workers},
                   {"runtime_seconds", record.seconds},
                   {"interrupted", record.interrupted},
                   {"files", record.files},
                   {"summary", record.summary}};
  write_atomically(dir / (record.name + ".json"), j.dump(2) + "\n");
}

void write_atomically(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const auto tmp = std::filesystem::path(path.string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace toriclab::cli
