#pragma once

#include <cstdint>
#include <string>
#include <type_traits>
#include <vector>

namespace contactlab {

// fixed-precision float formatting shared by every artifact writer, so
// identical runs produce byte-identical files
std::string fmt_num(double v);
template <typename T, std::enable_if_t<std::is_integral_v<T>, int> = 0>
std::string fmt_num(T v) {
  return std::to_string(v);
}

// Small deterministic CSV builder: comment header lines, one column row,
// data rows. Cells are written verbatim; callers format numbers with
// fmt_num. No timing or thread information belongs here.
class CsvTable {
 public:
  CsvTable(std::string schema, std::string config_echo);

  void columns(std::vector<std::string> names);
  void row(std::vector<std::string> cells);
  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> comments_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::string& path, const std::string& content);

}  // namespace contactlab
