#include <cmath>
#include <limits>

#include "catch_amalgamated.hpp"
#include "kolmo/config.hpp"
#include "oracle/generators.hpp"

using namespace kolmo;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("defaults print and parse back to the same text") {
  const RunConfig def;
  const std::string text = print_config(def);
  CHECK(print_config(parse_config(text)) == text);
  CHECK_NOTHROW(def.validate());
  CHECK(def.beta() == beta_exponent(2.0, 2));
}

TEST_CASE("parsed values land in the right fields") {
  const RunConfig c = parse_config(R"(# comment
[model]
dim = 3
cutoff = 6
s = 2.75
alpha = 0.5

; another comment
[initial]
preset = random
omega_min = 0.8
omega_max = 1.6
seed = 18446744073709551615

[integrator]
method = rk4
dt = 1e-3
t_end = 0.25
extrema_check = off

[constants]
c_tilde = 2.5
gamma = 1
beta = 12

[output]
directory = runs/a b
snapshots = false
)");
  CHECK(c.dim == 3);
  CHECK(c.cutoff == 6);
  CHECK(c.s == 2.75);
  CHECK(c.alpha == 0.5);
  CHECK(c.initial.preset == InitialPreset::random);
  CHECK(c.initial.omega_max == 1.6);
  CHECK(c.initial.seed == std::numeric_limits<std::uint64_t>::max());
  CHECK(c.integrator.method == Method::rk4);
  CHECK(c.integrator.dt == 1e-3);
  CHECK_FALSE(c.extrema_check);
  CHECK(c.cmodel.c_tilde == 2.5);
  CHECK(c.beta() == 12.0);
  CHECK(c.output_dir == "runs/a b");
  CHECK_FALSE(c.write_snapshots);
  CHECK(print_config(parse_config(print_config(c))) == print_config(c));
}

TEST_CASE("bad input is reported with its line") {
  CHECK_THROWS_WITH(parse_config("[model]\ndim = 2\nwidth = 3\n"),
                    ContainsSubstring("line 3") && ContainsSubstring("width"));
  CHECK_THROWS_WITH(parse_config("[model]\n\ns = two\n"), ContainsSubstring("line 3") && ContainsSubstring("model.s"));
  CHECK_THROWS_WITH(parse_config("[model\n"), ContainsSubstring("line 1"));
  CHECK_THROWS_WITH(parse_config("dim = 2\n"), ContainsSubstring("unknown key"));
  CHECK_THROWS_AS(parse_config("[initial]\npreset = sphere\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[integrator]\nmethod = euler\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\ncutoff = 2.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[output]\nsnapshots = maybe\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/kolmo.ini"), ConfigError);
}

TEST_CASE("structural hypotheses are enforced") {
  RunConfig c;
  c.s = 1.0;
  CHECK_THROWS_WITH(c.validate(), ContainsSubstring("s > d/2"));
  c.s = 2.0;
  c.dim = 1;
  CHECK_THROWS_WITH(c.validate(), ContainsSubstring("d >= 2"));
  c.dim = 3;
  c.s = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.s = 1.6;
  CHECK_NOTHROW(c.validate());
  c.alpha = 0.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.alpha = 1.0;
  c.cmodel.c_tilde = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.cmodel.c_tilde = 1.0;
  c.beta_override = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.beta_override = 0.0;
  c.initial.preset = InitialPreset::snapshot;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.initial.preset = InitialPreset::constant;
  c.integrator.dt = -1.0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("numbers print in shortest round-trip form") {
  gen::Source src(71);
  for (int i = 0; i < 10000; ++i) {
    const double x = std::ldexp(src.normal(), src.integer(-300, 300));
    CHECK(parse_double(format_double(x), "x") == x);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(parse_double("-inf", "x") == -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(parse_double("1.5x", "x"), ConfigError);
  CHECK_THROWS_AS(parse_double("", "x"), ConfigError);
  CHECK_THROWS_AS(parse_double(" 1", "x"), ConfigError);
}

TEST_CASE("name conversions") {
  for (auto p : {InitialPreset::constant, InitialPreset::zero, InitialPreset::random, InitialPreset::snapshot})
    CHECK(preset_from_name(preset_name(p)) == p);
  for (auto m : {Method::rk4, Method::rk45}) CHECK(method_from_name(method_name(m)) == m);
  CHECK(method_from_name("dopri5") == Method::rk45);
}
