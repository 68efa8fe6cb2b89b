#include <cmath>
#include <limits>

#include "catch_amalgamated.hpp"
#include "kolmo/diagnostics.hpp"
#include "kolmo/integrator.hpp"
#include "oracle/generators.hpp"

using namespace kolmo;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

SimState constant_state(int n, double w, double b) {
  SimState st = SimState::zero(2, n);
  st.omega = SpectralField::constant(2, n, w);
  st.b = SpectralField::constant(2, n, b);
  return st;
}

// composite Simpson on [0, T]
double simpson(const ConstantModel& c, double T, int m = 20000) {
  const double h = T / m;
  double sum = c(0.0) + c(T);
  for (int i = 1; i < m; ++i) sum += (i % 2 ? 4.0 : 2.0) * c(i * h);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("beta exponent values") {
  CHECK_THAT(beta_exponent(2.0, 2), WithinRel(15.0, 1e-15));
  CHECK_THAT(beta_exponent(2.0, 3), WithinRel(29.0, 1e-15));
  CHECK_THAT(beta_exponent(3.0, 2), WithinRel(10.0, 1e-15));
  CHECK_THROWS_AS(beta_exponent(1.0, 2), Error);
  CHECK_THROWS_AS(beta_exponent(0.5, 2), Error);
  CHECK_THROWS_AS(beta_exponent(1.5, 3), Error);

  CHECK(beta_in_interpolation_branch(2.0, 2));
  CHECK(beta_in_interpolation_branch(2.5, 3));
  CHECK_FALSE(beta_in_interpolation_branch(3.0, 2));
  CHECK_FALSE(beta_in_interpolation_branch(1.0, 2));

  // the same formula above d/2 + 1: (2*4 + 3 + 1.5) * 4 / 3 / 2 and (2*8 + 3 + 2.875) * 4 / 5.75 / 2
  CHECK_THAT(beta_exponent(4.0, 2), WithinRel(25.0 / 3.0, 1e-15));
  CHECK_THAT(beta_exponent(7.25, 3), WithinRel(21.875 * 2.0 / 5.75, 1e-15));
}

TEST_CASE("beta is decreasing and continuous where ceil(s) is fixed") {
  // d = 2: ceil(s) = 2 on all of (1, 2]; d = 3: pieces (1.5, 2] and (2, 2.5]
  struct Piece {
    int d;
    double lo, hi;
  };
  for (const Piece& p : {Piece{2, 1.0, 2.0}, Piece{3, 1.5, 2.0}, Piece{3, 2.0, 2.5}, Piece{4, 2.0, 3.0}}) {
    double prev = std::numeric_limits<double>::infinity();
    const int m = 2000;
    for (int i = 1; i <= m; ++i) {
      const double s = p.lo + (p.hi - p.lo) * i / m;
      const double b = beta_exponent(s, p.d);
      CHECK(b > 1.0);
      CHECK(b <= prev);
      // no jumps inside a piece, away from the pole at s = d/2
      if (i > 1 && s - 0.5 * p.d >= 0.05) CHECK(prev - b <= 0.02 * prev);
      prev = b;
    }
  }
}

TEST_CASE("constant model integral") {
  for (double g : {-3.0, -1.0, -0.5, 0.0, 0.7, 2.0}) {
    const ConstantModel c{1.7, g};
    CHECK_THAT(c(0.0), WithinRel(1.7, 1e-15));
    CHECK_THAT(c(1.0), WithinRel(1.7 * std::pow(2.0, g), 1e-15));
    for (double T : {1e-6, 0.3, 2.0, 10.0}) CHECK_THAT(c.integral(T), WithinRel(simpson(c, T), 1e-9));
  }
}

TEST_CASE("existence time closed form") {
  CHECK_THAT(existence_time(0.0, 2.0, {1.0, 0.0}), WithinRel(0.5, 1e-15));
  CHECK_THAT(existence_time(0.0, 2.0, {2.0, 0.0}), WithinRel(0.25, 1e-15));

  double prev = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 50; ++i) {
    const double T = existence_time(0.2 * i, 3.0, {1.0, 0.5});
    CHECK(T < prev);
    prev = T;
  }

  // bounded integral of C never reaches the target
  CHECK(std::isinf(existence_time(0.0, 2.0, {0.5, -3.0})));
  CHECK(std::isinf(existence_time_bisection(0.0, 2.0, {0.5, -3.0})));

  CHECK_THROWS_AS(existence_time(0.0, 1.0, {}), Error);
  CHECK_THROWS_AS(existence_time(-1.0, 2.0, {}), Error);
}

TEST_CASE("existence time agrees with bisection") {
  gen::Source src(51);
  int finite = 0;
  for (int i = 0; i < 100; ++i) {
    const double x0 = std::pow(10.0, src.uniform(-3.0, 3.0));
    const double beta = src.uniform(1.05, 30.0);
    const ConstantModel c{std::pow(10.0, src.uniform(-2.0, 2.0)), src.uniform(-2.0, 2.0)};
    const double closed = existence_time(x0, beta, c);
    const double bis = existence_time_bisection(x0, beta, c);
    if (std::isinf(closed)) {
      CHECK(std::isinf(bis));
      continue;
    }
    ++finite;
    CHECK(std::abs(closed - bis) <= 1e-10 * closed);
    // the defining equation itself
    const double lhs = (1.0 - std::pow(2.0, 1.0 - beta)) * std::pow(1.0 + x0, 1.0 - beta);
    CHECK_THAT((beta - 1.0) * c.integral(closed), WithinRel(lhs, 1e-9));
  }
  CHECK(finite > 50);
}

TEST_CASE("uniform bound and P_k") {
  CHECK(uniform_bound(0.0) == 1.0);
  CHECK(uniform_bound(3.0) == 7.0);
  CHECK_THAT(p_k(3.0, 4.0), WithinRel(16.0, 1e-15));
  CHECK_THAT(p_k(8.0, 1.0), WithinRel(3.0, 1e-15));
  gen::Source src(52);
  for (int i = 0; i < 100; ++i) {
    const double x = src.uniform(0.0, 50.0);
    const double k1 = src.uniform(0.0, 20.0), k2 = src.uniform(0.0, 20.0);
    CHECK((p_k(x, std::max(k1, k2)) >= p_k(x, std::min(k1, k2))));
  }
}

TEST_CASE("triple norm sums the three fields") {
  gen::Source src(53);
  SimState st = SimState::zero(2, 6);
  st.v[0] = src.field(2, 6);
  st.v[1] = src.field(2, 6);
  st.omega = src.field(2, 6);
  st.b = src.field(2, 6);
  const double expected = hs_norm_sq(st.v[0], 1.5) + hs_norm_sq(st.v[1], 1.5) + hs_norm_sq(st.omega, 1.5) +
                          hs_norm_sq(st.b, 1.5);
  CHECK_THAT(triple_norm_sq(st, 1.5), WithinRel(expected, 1e-14));
}

TEST_CASE("extrema monitor") {
  const InitialBounds bounds{1.0, 1.0, 1.0, 1.0};
  const CutoffProfile profile = CutoffProfile::for_regularity(bounds, 2.0);
  const ExtremaCheck c = extrema_monitor(constant_state(4, 1.0, 1.0), profile, 28);
  CHECK(c.pass);
  CHECK_THAT(c.min_omega, WithinAbs(1.0, 1e-15));
  CHECK_THAT(c.min_b, WithinAbs(1.0, 1e-15));

  const ExtremaCheck low = extrema_monitor(constant_state(4, 1.0, 0.9), profile, 28);
  CHECK_FALSE(low.pass);
  const ExtremaCheck high = extrema_monitor(constant_state(4, 1.1, 1.0), profile, 28);
  CHECK_FALSE(high.pass);

  IntegratorConfig cfg;
  cfg.abs_tol = cfg.rel_tol = 1e-11;
  cfg.t_end = 2.0;
  cfg.sample_interval = 0.1;
  const Trajectory tr = integrate(constant_state(3, 1.0, 1.0), cfg, {1.0, 2.0, bounds, 4}, profile);
  for (const auto& st : tr.samples) {
    const ExtremaCheck e = extrema_monitor(st, profile, 20);
    CHECK(e.pass);
    CHECK_THAT(e.min_omega, WithinRel(profile.profiles(st.t).omega_min, 1e-6));
  }
}

TEST_CASE("energy balance on closed-form trajectories") {
  const InitialBounds bounds{1.0, 1.0, 1.0, 1.0};
  const CutoffProfile profile = CutoffProfile::for_regularity(bounds, 2.0);
  EnergyOptions opts;
  opts.s = 2.0;
  opts.beta = 15.0;
  opts.p_orders = {1.0, 2.0, 30.0};

  std::vector<SimState> two(2, SimState::zero(2, 3));
  CHECK_THROWS_AS(energy_balance(two, profile, opts), Error);

  std::vector<SimState> zeros;
  for (int i = 0; i < 5; ++i) {
    SimState z = SimState::zero(2, 3);
    z.t = 0.1 * i;
    zeros.push_back(z);
  }
  const EnergyBalance zb = energy_balance(zeros, profile, opts);
  for (const auto& r : zb.reports) {
    CHECK(r.lhs == 0.0);
    CHECK(r.lhs <= r.rhs_bound);
    CHECK(r.p_values.size() == 3);
  }
  CHECK(zb.violations == 0);

  // omega = b = 1/(1+t): X = 2/(1+t)^2, X_{s+1} = X and nu_min = 1/4
  std::vector<SimState> traj;
  const double dt = 0.01;
  for (int i = 0; i <= 100; ++i) {
    const double t = dt * i;
    SimState st = constant_state(3, 1.0 / (1.0 + t), 1.0 / (1.0 + t));
    st.t = t;
    traj.push_back(st);
  }
  const EnergyBalance eb = energy_balance(traj, profile, opts);
  REQUIRE(eb.reports.size() == traj.size());
  for (std::size_t i = 1; i + 1 < eb.reports.size(); ++i) {
    const double t = eb.reports[i].t;
    const double exact = -4.0 / std::pow(1.0 + t, 3) + 0.25 * 2.0 / std::pow(1.0 + t, 2);
    CHECK_THAT(eb.reports[i].lhs, WithinAbs(exact, 1e-3));
    CHECK(eb.reports[i].lhs < 0.0);
    CHECK_THAT(eb.reports[i].p_values[1], WithinRel(1.0 + 2.0 / std::pow(1.0 + t, 2), 1e-12));
    CHECK_THAT(eb.reports[i].nu_min, WithinRel(1.0, 1e-12));
  }
  CHECK(eb.violations == 0);
  CHECK(eb.fitted_c < 0.0);
  CHECK(eb.fitted_c == fit_energy_constant(eb.reports, opts.beta, opts.cmodel.gamma));
}

TEST_CASE("fitted constant is the smallest admissible one") {
  gen::Source src(54);
  std::vector<EnergyReport> reports(20);
  for (auto& r : reports) {
    r.t = src.uniform(0.0, 3.0);
    r.triple_sq = src.uniform(0.0, 2.0);
    r.lhs = src.uniform(-1.0, 5.0);
  }
  const double beta = 2.5, gamma = 0.3;
  const double c = fit_energy_constant(reports, beta, gamma);
  bool touches = false;
  for (const auto& r : reports) {
    const double bound = c * std::pow(1.0 + r.t, gamma) * std::pow(1.0 + r.triple_sq, beta);
    CHECK(r.lhs <= bound + 1e-14 * std::abs(bound));
    touches = touches || std::abs(r.lhs - bound) <= 1e-12 * std::abs(bound);
  }
  CHECK(touches);
}
