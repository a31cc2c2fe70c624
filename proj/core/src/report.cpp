#include "contactlab/report.hpp"

#include <cstdio>
#include <fstream>

#include "contactlab/errors.hpp"

namespace contactlab {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

CsvTable::CsvTable(std::string schema, std::string config_echo) {
  comments_.push_back("# contactlab csv v1 schema=" + schema);
  comments_.push_back("# config " + config_echo);
}

void CsvTable::columns(std::vector<std::string> names) { columns_ = std::move(names); }

void CsvTable::row(std::vector<std::string> cells) {
  if (cells.size() != columns_.size())
    throw DataError("csv row width does not match the column count");
  rows_.push_back(std::move(cells));
}

std::string CsvTable::str() const {
  std::string out;
  for (const auto& c : comments_) {
    out += c;
    out += '\n';
  }
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (i) out += ',';
    out += columns_[i];
  }
  out += '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i) out += ',';
      out += r[i];
    }
    out += '\n';
  }
  return out;
}

void CsvTable::write(const std::string& path) const { write_text_file(path, str()); }

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot open '" + path + "' for writing");
  f << content;
  if (!f) throw DataError("failed writing '" + path + "'");
}

}  // namespace contactlab
