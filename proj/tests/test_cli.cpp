#include <doctest.h>

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "duhamel/kernels.hpp"

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = duhamel::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) {
    if (!l.empty() && l[0] != '#') v.push_back(l);
  }
  return v;
}

std::vector<double> fields(const std::string& line) {
  std::vector<double> v;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) {
    double d = std::nan("");
    std::from_chars(f.data(), f.data() + f.size(), d);
    v.push_back(d);
  }
  return v;
}

double column_max(const std::string& csv, std::size_t col) {
  const auto ls = lines(csv);
  double m = 0.0;
  for (std::size_t i = 1; i < ls.size(); ++i) m = std::max(m, fields(ls[i]).at(col));
  return m;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("duhamel_cli_" + name);
}

}  // namespace

TEST_CASE("tables subcommand") {
  const Run r8 = run({"tables", "--n", "8"});
  REQUIRE(r8.code == 0);
  CHECK(lines(r8.out).at(0) == "t,eps1,eps2");
  CHECK(column_max(r8.out, 1) <= 1e-6);

  const Run r2 = run({"tables", "--n", "2"});
  REQUIRE(r2.code == 0);
  CHECK(lines(r2.out).size() == 3u);  // header + 2 rows

  const Run r4 = run({"tables", "--n", "4"});
  REQUIRE(r4.code == 0);
  CHECK(column_max(r4.out, 1) <= 5e-3);

  CHECK(run({"tables", "--n", "3"}).code == 2);
  CHECK(run({"tables"}).code == 2);
}

TEST_CASE("solve subcommand") {
  const Run z = run({"solve", "--problem", "zero", "--N", "4", "--M", "20"});
  REQUIRE(z.code == 0);
  const auto ls = lines(z.out);
  REQUIRE(ls.size() > 1);
  for (std::size_t i = 1; i < ls.size(); ++i) {
    const auto f = fields(ls[i]);
    for (std::size_t c = 3; c < f.size(); ++c) CHECK(f[c] == 0.0);
  }

  const auto report = temp_file("report.csv");
  const Run s = run({"solve", "--N", "8", "--report", report.string()});
  REQUIRE(s.code == 0);
  std::ifstream f(report);
  std::stringstream buf;
  buf << f.rdbuf();
  const Run t = run({"tables", "--n", "8"});
  CHECK(column_max(buf.str(), 1) == column_max(t.out, 1));
  std::filesystem::remove(report);

  CHECK(run({"solve", "--gamma", "1.5"}).code == 2);
  CHECK(run({"solve", "--problem", "unknown"}).code == 2);
  CHECK(run({"solve", "--N", "0"}).code == 2);
  CHECK(run({"solve", "--mode", "picard", "--fp-max-iter", "1", "--N", "6", "--M", "50"}).code == 3);
}

TEST_CASE("kernels subcommand") {
  const Run r = run({"kernels", "--t", "1"});
  REQUIRE(r.code == 0);
  const auto f = fields(lines(r.out).at(1));
  const double expected = 2.0 * std::exp(-M_PI * M_PI / 4);
  CHECK(f.at(1) == doctest::Approx(expected).epsilon(1e-4));
  CHECK(run({"kernels", "--t", "0"}).code == 2);
}

TEST_CASE("convergence and baseline subcommands") {
  const Run c = run({"convergence", "--Ns", "2,4,8", "--Ks", "1"});
  REQUIRE(c.code == 0);
  const auto ls = lines(c.out);
  REQUIRE(ls.size() == 4u);
  CHECK(fields(ls[2]).at(3) < fields(ls[1]).at(3));
  CHECK(fields(ls[3]).at(3) < fields(ls[2]).at(3));

  const Run b = run({"baseline", "--steps", "100,200"});
  REQUIRE(b.code == 0);
  const auto bl = lines(b.out);
  REQUIRE(bl.size() == 3u);
  CHECK(fields(bl[1]).at(3) / fields(bl[2]).at(3) == doctest::Approx(2.0).epsilon(0.25));
  CHECK(run({"baseline", "--steps", "0"}).code == 2);
}

TEST_CASE("structured output and inspect") {
  const auto doc = temp_file("doc.json");
  REQUIRE(run({"tables", "--n", "4", "--format", "structured", "--out", doc.string()}).code == 0);
  const Run i = run({"inspect", doc.string()});
  REQUIRE(i.code == 0);
  CHECK(i.out.find("kind error_report") != std::string::npos);
  CHECK(i.out.find("N 4\n") != std::string::npos);
  CHECK(i.out.find("rows 4\n") != std::string::npos);
  std::filesystem::remove(doc);

  const auto bad = temp_file("bad.json");
  std::ofstream(bad) << "{broken";
  CHECK(run({"inspect", bad.string()}).code == 4);
  std::filesystem::remove(bad);
  CHECK(run({"inspect", temp_file("missing.json").string()}).code == 4);
  CHECK(run({"tables", "--n", "2", "--out", "/nonexistent_dir/x.csv"}).code == 4);
}
