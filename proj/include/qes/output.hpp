#pragma once

// Deterministic tabular output: CSV with '.' decimal, ',' delimiter, Unix
// line endings, 12 significant digits; JSON carries full-precision doubles
// so a re-parse reproduces the values exactly.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace qes {

using Cell = std::variant<long long, double, std::string>;

struct OutputTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row) {
    if (row.size() != header.size())
      throw std::logic_error("OutputTable: row width differs from header");
    rows.push_back(std::move(row));
  }
};

inline std::string format_significant(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string cell_to_string(const Cell& c) {
  if (std::holds_alternative<long long>(c)) return std::to_string(std::get<long long>(c));
  if (std::holds_alternative<double>(c)) return format_significant(std::get<double>(c));
  return std::get<std::string>(c);
}

inline void write_csv(const OutputTable& t, std::ostream& os) {
  for (const auto& [k, v] : t.metadata) os << "# " << k << "=" << v << "\n";
  for (std::size_t i = 0; i < t.header.size(); ++i)
    os << (i ? "," : "") << t.header[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << cell_to_string(row[i]);
    os << "\n";
  }
}

inline void write_json(const OutputTable& t, std::ostream& os) {
  nlohmann::json doc;
  doc["metadata"] = nlohmann::json::object();
  for (const auto& [k, v] : t.metadata) doc["metadata"][k] = v;
  doc["columns"] = t.header;
  doc["rows"] = nlohmann::json::array();
  for (const auto& row : t.rows) {
    nlohmann::json jr = nlohmann::json::array();
    for (const Cell& c : row) {
      if (std::holds_alternative<long long>(c)) jr.push_back(std::get<long long>(c));
      else if (std::holds_alternative<double>(c)) jr.push_back(std::get<double>(c));
      else jr.push_back(std::get<std::string>(c));
    }
    doc["rows"].push_back(std::move(jr));
  }
  os << doc.dump(2) << "\n";
}

inline void write_table(const OutputTable& t, const std::string& path, const std::string& format) {
  auto emit = [&](std::ostream& os) {
    if (format == "csv") write_csv(t, os);
    else if (format == "json") write_json(t, os);
    else throw std::invalid_argument("unknown output format: " + format);
  };
  if (path.empty() || path == "-") {
    emit(std::cout);
  } else {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + path);
    emit(os);
  }
}

}  // namespace qes
