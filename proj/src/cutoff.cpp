#include "kolmo/cutoff.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

namespace kolmo {

void InitialBounds::validate() const {
  if (!(b_min0 > 0.0)) throw Error("initial bounds: b_min0 must be positive, got " + std::to_string(b_min0));
  if (!(omega_min0 > 0.0)) {
    throw Error("initial bounds: omega_min0 must be positive, got " + std::to_string(omega_min0));
  }
  if (!(omega_max0 >= omega_min0)) throw Error("initial bounds: omega_max0 must be >= omega_min0");
  if (!(alpha > 0.0)) throw Error("initial bounds: alpha must be positive");
}

TimeProfiles time_profiles(const InitialBounds& bounds, double t) {
  if (!(t >= 0.0)) throw Error("time_profiles: time must be nonnegative");
  const double a = bounds.alpha;
  TimeProfiles p{};
  p.omega_min = bounds.omega_min0 / (1.0 + a * bounds.omega_min0 * t);
  p.omega_max = bounds.omega_max0 / (1.0 + a * bounds.omega_max0 * t);
  p.b_min = bounds.b_min0 * std::pow(1.0 + a * bounds.omega_max0 * t, -1.0 / a);
  p.nu_min = 0.25 * p.b_min / p.omega_max;
  return p;
}

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double left = std::exp(-1.0 / u);
  const double right = std::exp(-1.0 / (1.0 - u));
  return left / (left + right);
}

namespace {

// Unit-scale transition shapes: lower plateau 1/2 -> identity on [1/2, 1],
// identity -> upper plateau 2 on [1, 2].
double lower_shape(double x) {
  const double h = smooth_step(2.0 * x - 1.0);
  return (1.0 - h) * 0.5 + h * x;
}

double upper_shape(double x) {
  const double h = smooth_step(x - 1.0);
  return (1.0 - h) * x + h * 2.0;
}

double central_difference(const std::function<double(double)>& f, double x, int k, double h) {
  double sum = 0.0;
  double binom = 1.0;
  for (int j = 0; j <= k; ++j) {
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    sum += sign * binom * f(x + (0.5 * k - j) * h);
    binom = binom * (k - j) / (j + 1);
  }
  return sum / std::pow(h, k);
}

double sup_derivative(const std::function<double(double)>& f, double lo, double hi, int k) {
  const double h = std::pow(2.2e-16, 1.0 / (k + 2));
  const int samples = 4000;
  double worst = 0.0;
  for (int i = 0; i <= samples; ++i) {
    const double x = lo + (hi - lo) * i / samples;
    worst = std::max(worst, std::abs(central_difference(f, x, k, h)));
  }
  return worst;
}

}  // namespace

double measure_transition_constant(int order) {
  double c0 = 1.0;  // identity branch, first derivative
  for (int k = 1; k <= order; ++k) {
    c0 = std::max(c0, sup_derivative(lower_shape, 0.45, 1.05, k));
    c0 = std::max(c0, sup_derivative(upper_shape, 0.95, 2.05, k));
  }
  return c0;
}

CutoffProfile::CutoffProfile(InitialBounds bounds, int smoothness_order)
    : bounds_(bounds), smoothness_order_(smoothness_order) {
  bounds_.validate();
  if (smoothness_order < 1) throw Error("cutoff profile: smoothness order must be positive");
  c0_ = measure_transition_constant(smoothness_order);
}

CutoffProfile CutoffProfile::for_regularity(InitialBounds bounds, double s) {
  return CutoffProfile(bounds, static_cast<int>(std::ceil(s)) + 1);
}

double CutoffProfile::phi_b(double x, const TimeProfiles& p) const {
  const double floor = 0.5 * p.b_min;
  if (x >= p.b_min) return x;
  if (x <= floor) return floor;
  return p.b_min * lower_shape(x / p.b_min);
}

double CutoffProfile::psi_omega(double x, const TimeProfiles& p) const {
  const double floor = 0.5 * p.omega_min;
  const double ceiling = 2.0 * p.omega_max;
  if (x <= floor) return floor;
  if (x >= ceiling) return ceiling;
  if (x < p.omega_min) return p.omega_min * lower_shape(x / p.omega_min);
  if (x <= p.omega_max) return x;
  return p.omega_max * upper_shape(x / p.omega_max);
}

PhysicalGrid nu_bar_grid(const SpectralField& b, const SpectralField& omega, double t,
                         const CutoffProfile& profile, int points) {
  if (!(b.modes() == omega.modes())) throw DimensionMismatch("nu_bar: b and omega differ in shape");
  PhysicalGrid bg = to_physical(b, points);
  const PhysicalGrid wg = to_physical(omega, points);
  const TimeProfiles p = profile.profiles(t);
  for (std::size_t i = 0; i < bg.size(); ++i) {
    bg.values[i] = profile.phi_b(bg.values[i].real(), p) / profile.psi_omega(wg.values[i].real(), p);
  }
  return bg;
}

SpectralField nu_bar(const SpectralField& b, const SpectralField& omega, double t,
                     const CutoffProfile& profile, int points) {
  SpectralField out = from_physical(nu_bar_grid(b, omega, t, profile, points), b.cutoff());
  out.symmetrize();
  return out;
}

}  // namespace kolmo
