#include "kolmo/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace kolmo {

double ConstantModel::operator()(double t) const { return c_tilde * std::pow(1.0 + t, gamma); }

double ConstantModel::integral(double T) const {
  const double e = gamma + 1.0;
  if (e == 0.0) return c_tilde * std::log1p(T);
  return c_tilde * std::expm1(e * std::log1p(T)) / e;
}

double beta_exponent(double s, int dim) {
  const double excess = s - 0.5 * dim;
  if (!(excess > 0.0)) {
    throw Error("beta_exponent: s = " + std::to_string(s) + " must exceed d/2 = " + std::to_string(0.5 * dim));
  }
  const double branch = (2.0 * std::ceil(s) + 3.0 + 0.5 * excess) * 4.0 / excess;
  return 0.5 * std::max(4.0, branch);
}

bool beta_in_interpolation_branch(double s, int dim) {
  return s > 0.5 * dim && s <= 0.5 * dim + 1.0;
}

namespace {

double existence_target(double x0, double beta) {
  return -std::expm1((1.0 - beta) * std::log(2.0)) * std::pow(1.0 + x0, 1.0 - beta) / (beta - 1.0);
}

void check_existence_inputs(double x0, double beta, const ConstantModel& cmodel) {
  if (!(beta > 1.0)) throw Error("existence_time: beta must exceed 1");
  if (!(x0 >= 0.0)) throw Error("existence_time: initial norm must be nonnegative");
  if (!(cmodel.c_tilde > 0.0)) throw Error("existence_time: c_tilde must be positive");
}

}  // namespace

double existence_time(double initial_triple_sq, double beta, const ConstantModel& cmodel) {
  check_existence_inputs(initial_triple_sq, beta, cmodel);
  const double target = existence_target(initial_triple_sq, beta) / cmodel.c_tilde;
  const double e = cmodel.gamma + 1.0;
  if (e == 0.0) return std::expm1(target);
  const double arg = target * e;
  if (arg <= -1.0) return std::numeric_limits<double>::infinity();
  return std::expm1(std::log1p(arg) / e);
}

double existence_time_bisection(double initial_triple_sq, double beta, const ConstantModel& cmodel,
                                double tol) {
  check_existence_inputs(initial_triple_sq, beta, cmodel);
  const double target = existence_target(initial_triple_sq, beta);
  auto excess = [&](double T) { return cmodel.integral(T) - target; };
  double lo = 0.0, hi = 1.0;
  while (excess(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) return std::numeric_limits<double>::infinity();
  }
  for (int iter = 0; iter < 2000 && hi - lo > tol * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (excess(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double uniform_bound(double initial_triple_sq) { return 2.0 * initial_triple_sq + 1.0; }

double triple_norm_sq(const SimState& state, double s) {
  return hs_norm_sq(state.v, s) + hs_norm_sq(state.omega, s) + hs_norm_sq(state.b, s);
}

double p_k(double triple_sq, double k) { return std::pow(1.0 + triple_sq, 0.5 * k); }

namespace {

struct GridExtrema {
  double min = 0.0;
  double max = 0.0;
};

GridExtrema grid_extrema(const PhysicalGrid& g) {
  GridExtrema e{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const auto& v : g.values) {
    e.min = std::min(e.min, v.real());
    e.max = std::max(e.max, v.real());
  }
  return e;
}

}  // namespace

ExtremaCheck extrema_monitor(const SimState& state, const CutoffProfile& profile, int grid_points,
                             double tolerance) {
  const auto w = grid_extrema(to_physical(state.omega, grid_points));
  const auto b = grid_extrema(to_physical(state.b, grid_points));
  const TimeProfiles p = profile.profiles(state.t);
  ExtremaCheck check{w.min, w.max, b.min, false};
  check.pass = w.min >= p.omega_min * (1.0 - tolerance) && w.max <= p.omega_max * (1.0 + tolerance) &&
               b.min >= p.b_min * (1.0 - tolerance);
  return check;
}

double fit_energy_constant(const std::vector<EnergyReport>& reports, double beta, double gamma) {
  double c = -std::numeric_limits<double>::infinity();
  for (const auto& r : reports) {
    c = std::max(c, r.lhs / (std::pow(1.0 + r.t, gamma) * p_k(r.triple_sq, 2.0 * beta)));
  }
  return c;
}

EnergyReport energy_report(const SimState& state, const CutoffProfile& profile,
                           const EnergyOptions& options) {
  const double s = options.s;
  EnergyReport r;
  r.t = state.t;
  r.hs_v = hs_norm(state.v, s);
  r.hs_omega = hs_norm(state.omega, s);
  r.hs_b = hs_norm(state.b, s);
  r.triple_sq = r.hs_v * r.hs_v + r.hs_omega * r.hs_omega + r.hs_b * r.hs_b;
  r.hs1_triple_sq = triple_norm_sq(state, s + 1.0);
  for (double k : options.p_orders) r.p_values.push_back(p_k(r.triple_sq, k));
  const int points = options.grid_points > 0 ? options.grid_points : 4 * (2 * state.cutoff() - 1);
  const auto w = grid_extrema(to_physical(state.omega, points));
  const auto b = grid_extrema(to_physical(state.b, points));
  r.min_omega = w.min;
  r.max_omega = w.max;
  r.min_b = b.min;
  r.nu_min = grid_extrema(nu_bar_grid(state.b, state.omega, state.t, profile, points)).min;
  r.div_residual = divergence_residual(state.v);
  r.realness_residual = state.realness_residual();
  r.rhs_bound = options.cmodel(r.t) * p_k(r.triple_sq, 2.0 * options.beta);
  return r;
}

EnergyBalance energy_balance(const std::vector<SimState>& trajectory, const CutoffProfile& profile,
                             const EnergyOptions& options) {
  if (trajectory.size() < 3) throw Error("energy_balance: need at least three samples");
  EnergyBalance out;
  out.reports.reserve(trajectory.size());
  for (const auto& state : trajectory) out.reports.push_back(energy_report(state, profile, options));

  auto& rep = out.reports;
  const std::size_t last = rep.size() - 1;
  for (std::size_t i = 0; i <= last; ++i) {
    const std::size_t lo = i == 0 ? 0 : i - 1;
    const std::size_t hi = i == last ? last : i + 1;
    const double dt = rep[hi].t - rep[lo].t;
    const double dxdt = dt > 0.0 ? (rep[hi].triple_sq - rep[lo].triple_sq) / dt : 0.0;
    rep[i].lhs = dxdt + profile.profiles(rep[i].t).nu_min * rep[i].hs1_triple_sq;
    if (rep[i].lhs > rep[i].rhs_bound) ++out.violations;
  }
  out.fitted_c = fit_energy_constant(rep, options.beta, options.cmodel.gamma);
  return out;
}

}  // namespace kolmo
