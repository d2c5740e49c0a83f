#include <doctest.h>

#include <charconv>
#include <clocale>
#include <cmath>
#include <stdexcept>
#include <locale>
#include <sstream>

#include "duhamel/report_io.hpp"

using namespace duhamel;

namespace {

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
};

double parse(const std::string& s) {
  double v = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), v);
  return v;
}

}  // namespace

TEST_CASE("numbers round-trip at full precision, independent of locale") {
  const std::locale saved = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  for (double v : {0.1, 1.0 / 3.0, 2.4310425894569221e-09, -7.5e300, 5e-324}) {
    const std::string s = format_double(v);
    CHECK(s.find(',') == std::string::npos);
    CHECK(parse(s) == v);
    std::size_t digits = 0;
    for (char c : s.substr(0, s.find('e'))) digits += (c >= '0' && c <= '9');
    CHECK(digits >= 15);
  }
  std::locale::global(saved);
}

TEST_CASE("CSV schemas") {
  ErrorReport rep;
  rep.rows = {{0.5, 1e-3, 2e-4}, {1.0, 3e-3, 4e-4}};
  std::ostringstream os;
  write_error_csv(os, rep, {"note"});
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# note");
  std::getline(is, line);
  CHECK(line == "t,eps1,eps2");
  std::getline(is, line);
  CHECK(line.rfind("5.0000000000000000e-01,", 0) == 0);

  StudyResult st;
  st.rows = {{2, 1, 200, 1e-2, 1e-3, 0.5, "ok"}, {4, 1, 200, 0.0, 0.0, 0.0, "boom"}};
  std::ostringstream so;
  write_study_csv(so, st);
  CHECK(so.str().find("N,K,M,max_eps1,max_eps2,wall_time_s\n") != std::string::npos);
  CHECK(so.str().find("# N=4 K=1 failed: boom") != std::string::npos);
  CHECK(so.str().find("4,1,200,nan,nan,") != std::string::npos);
}

TEST_CASE("structured documents round-trip config and rows exactly") {
  ConfigEcho cfg;
  cfg.subcommand = "tables";
  cfg.problem = "benchmark";
  cfg.solver.degree = 8;
  cfg.solver.slabs = 3;
  cfg.solver.modes = 150;
  cfg.solver.gamma = 0.25;
  cfg.solver.mode = SolveMode::kFixedPoint;
  cfg.solver.fp_tol = 3e-14;
  cfg.solver.fp_max_iter = 77;
  cfg.solver.coupling = BoundaryCoupling::kInterpolatedProduct;
  cfg.final_time = 2.5;
  cfg.notes = {"a", "b"};

  ErrorReport rep;
  rep.N = 8;
  rep.K = 3;
  rep.M = 150;
  rep.rows = {{1.0 / 3.0, 2.4310425894569221e-09, 6.0808452717608930e-10}, {2.5, 1e-300, 0.0}};
  const ParsedDocument d = parse_document(error_report_json(rep, cfg));
  CHECK(d.kind == "error_report");
  CHECK(d.config.subcommand == "tables");
  CHECK(d.config.solver.degree == 8);
  CHECK(d.config.solver.slabs == 3);
  CHECK(d.config.solver.modes == 150u);
  CHECK(d.config.solver.gamma == 0.25);
  CHECK(d.config.solver.mode == SolveMode::kFixedPoint);
  CHECK(d.config.solver.fp_tol == 3e-14);
  CHECK(d.config.solver.fp_max_iter == 77);
  CHECK(d.config.solver.coupling == BoundaryCoupling::kInterpolatedProduct);
  CHECK(d.config.final_time == 2.5);
  CHECK(d.config.notes == cfg.notes);
  REQUIRE(d.report.rows.size() == 2u);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(d.report.rows[i].t == rep.rows[i].t);
    CHECK(d.report.rows[i].eps1 == rep.rows[i].eps1);
    CHECK(d.report.rows[i].eps2 == rep.rows[i].eps2);
  }

  StudyResult st;
  st.rows = {{2, 1, 200, 4.6741213534463033e-03, 3.2e-3, 1.25e-4, "ok"}, {4, 1, 200, std::nan(""), std::nan(""), 0.0, "failed"}};
  const ParsedDocument ds = parse_document(study_json(st, cfg));
  CHECK(ds.kind == "study");
  REQUIRE(ds.study.rows.size() == 2u);
  CHECK(ds.study.rows[0].max_eps1 == st.rows[0].max_eps1);
  CHECK(ds.study.rows[0].wall_time_s == st.rows[0].wall_time_s);
  CHECK(std::isnan(ds.study.rows[1].max_eps1));
  CHECK(ds.study.rows[1].status == "failed");

  CHECK_THROWS_AS(parse_document("{not json"), std::runtime_error);
  CHECK_THROWS_AS(parse_document("{\"format\":\"other\"}"), std::runtime_error);
}
