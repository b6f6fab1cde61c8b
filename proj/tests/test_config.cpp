#include <doctest.h>

#include <string>

#include "vardyn/config.hpp"
#include "vardyn/error.hpp"

using namespace vardyn;
namespace cfg = vardyn::config;

namespace {

std::string error_text(std::string_view text) {
  try {
    (void)cfg::parse(text, "probe.cfg");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Config);
    return e.what();
  }
  FAIL("expected a parse error");
  return {};
}

}  // namespace

TEST_CASE("scalars, sections and comments") {
  const cfg::Table t = cfg::parse(R"(
# leading comment
experiment = "ising2q"   # trailing comment
seed = 18446744073709551615
realizations = +1_000
flag = true
quoted = 'single # not a comment'
[solver]
dt = 2.5e-3
)");
  REQUIRE(t.size() == 6);
  CHECK(cfg::find(t, "experiment")->as_string("experiment") == "ising2q");
  CHECK(cfg::find(t, "seed")->as_u64("seed") == 18446744073709551615ULL);
  CHECK(cfg::find(t, "realizations")->as_int("realizations") == 1000);
  CHECK(cfg::find(t, "flag")->as_bool("flag"));
  CHECK(cfg::find(t, "quoted")->as_string("quoted") == "single # not a comment");
  CHECK(cfg::find(t, "solver.dt")->as_number("solver.dt") == 2.5e-3);
  CHECK(cfg::find(t, "dt") == nullptr);
  CHECK(cfg::find(t, "seed")->position().line == 4);
}

TEST_CASE("arrays and inline tables, across lines") {
  const cfg::Table t = cfg::parse(R"(
lambda0 = [0.1,
           -0.2,]
gate = { generator = "1.0 ZZ", sign = -1 }
gate = { generator = "1.0 XI" }
points = [[0.5, -1], [0.5, 1]]
)");
  const cfg::Array& lam = cfg::find(t, "lambda0")->as_array("lambda0");
  REQUIRE(lam.size() == 2);
  CHECK(lam[1].as_number("lambda0") == -0.2);
  const auto gates = cfg::find_all(t, "gate");
  REQUIRE(gates.size() == 2);
  const cfg::Table& g0 = gates[0]->as_table("gate");
  CHECK(cfg::find(g0, "sign")->as_int("sign") == -1);
  CHECK_THROWS_AS(cfg::find(t, "gate"), Error);
  CHECK(cfg::find(t, "points")->as_array("points")[1].as_array("points")[1].as_number("p") == 1.0);
}

TEST_CASE("type errors name the field and position") {
  const cfg::Table t = cfg::parse("a = \"x\"\nb = 1.5\n");
  try {
    (void)cfg::find(t, "a")->as_number("a");
    FAIL("expected a type error");
  } catch (const Error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("'a'") != std::string::npos);
    CHECK(msg.find("line 1") != std::string::npos);
  }
  CHECK_THROWS_AS(cfg::find(t, "b")->as_int("b"), Error);
  CHECK_THROWS_AS(cfg::find(t, "b")->as_u64("b"), Error);
  CHECK_THROWS_AS(cfg::require_known_keys(t, {"a"}, "probe"), Error);
  CHECK_NOTHROW(cfg::require_known_keys(t, {"a", "b"}, "probe"));
}

TEST_CASE("syntax errors carry origin, line and column") {
  CHECK(error_text("a = 1\nb = \"open\n").starts_with("probe.cfg:2:"));
  CHECK(error_text("a = [1, 2\n").starts_with("probe.cfg:"));
  CHECK(error_text("= 3\n").starts_with("probe.cfg:1:"));
  CHECK(error_text("a = 1 2\n").starts_with("probe.cfg:1:"));
  CHECK(error_text("[solver\n").starts_with("probe.cfg:1:"));
  CHECK(error_text("a = nope\n").starts_with("probe.cfg:1:"));
  CHECK_THROWS_AS(cfg::parse_file("/nonexistent/vardyn.cfg"), Error);
}
