#include "tweezer/io/csv.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include "tweezer/errors.hpp"

namespace tweezer::io {

std::string format_number(double v) {
  char buf[64];
  if (v == 0.0) v = 0.0;  // -0 prints as 0
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

namespace {

std::string quote(const std::string& field) {
  if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
  std::string q = "\"";
  for (char c : field) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path, std::ios::binary), columns_(header.size()), path_(path) {
  if (!out_) throw ConfigError("cannot open " + path.string() + " for writing");
  row(header);
}

void CsvWriter::row(std::span<const double> values) {
  std::vector<std::string> fields;
  fields.reserve(values.size());
  for (double v : values) fields.push_back(format_number(v));
  row(fields);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_)
    throw ConfigError(path_.string() + ": row has " + std::to_string(fields.size()) +
                      " fields, header has " + std::to_string(columns_));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << quote(fields[i]);
  }
  out_ << "\r\n";
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::stringstream ss(line);
    std::string field;
    if (first) {
      while (std::getline(ss, field, ',')) t.header.push_back(field);
      first = false;
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, field, ',')) {
      double v = 0.0;
      const auto r = std::from_chars(field.data(), field.data() + field.size(), v);
      if (r.ec != std::errc{}) v = std::nan("");
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace tweezer::io
