#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "contactlab/errors.hpp"
#include "contactlab/report.hpp"

using namespace contactlab;

TEST_CASE("numbers format with twelve significant digits") {
  CHECK(fmt_num(1.0) == "1");
  CHECK(fmt_num(0.5) == "0.5");
  CHECK(fmt_num(1.0 / 3.0) == "0.333333333333");
  CHECK(fmt_num(1e-9) == "1e-09");
  CHECK(fmt_num(std::size_t{42}) == "42");
  CHECK(fmt_num(-7) == "-7");
}

TEST_CASE("tables render comments, header and rows in order") {
  CsvTable t("demo", "{\"seed\":1}");
  t.columns({"a", "b"});
  t.row({"1", "2"});
  t.row({"3", "4"});
  std::string text = t.str();
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# contactlab csv v1 schema=demo");
  std::getline(in, line);
  CHECK(line == "# config {\"seed\":1}");
  std::getline(in, line);
  CHECK(line == "a,b");
  std::getline(in, line);
  CHECK(line == "1,2");
  std::getline(in, line);
  CHECK(line == "3,4");
  CHECK(!std::getline(in, line));
}

TEST_CASE("row width must match the declared columns") {
  CsvTable t("demo", "{}");
  t.columns({"a", "b"});
  CHECK_THROWS_AS(t.row({"1"}), DataError);
  CHECK_THROWS_AS(t.row({"1", "2", "3"}), DataError);
}

TEST_CASE("identical tables produce identical bytes") {
  auto build = [] {
    CsvTable t("demo", "{\"x\":2}");
    t.columns({"v"});
    t.row({fmt_num(0.1 + 0.2)});
    return t.str();
  };
  CHECK(build() == build());
}

TEST_CASE("tables write to disk and unwritable paths raise errors") {
  namespace fs = std::filesystem;
  fs::path p = fs::temp_directory_path() / "contactlab_report_test.csv";
  CsvTable t("demo", "{}");
  t.columns({"v"});
  t.row({"9"});
  t.write(p.string());
  std::ifstream f(p);
  std::string first;
  std::getline(f, first);
  CHECK(first == "# contactlab csv v1 schema=demo");
  f.close();
  fs::remove(p);
  CHECK_THROWS_AS(t.write("/nonexistent-dir-zzz/out.csv"), DataError);
}
