#pragma once

// Comparison bounds for b and omega and the smooth cutoffs that keep the
// regularized viscosity Phi_t(b) / Psi_t(omega) uniformly positive.

#include "kolmo/spectral.hpp"

namespace kolmo {

/// Extremes of the initial data and the decay constant alpha.
struct InitialBounds {
  double b_min0 = 1.0;
  double omega_min0 = 1.0;
  double omega_max0 = 1.0;
  double alpha = 1.0;

  /// Throws when 0 < omega_min0 <= omega_max0, b_min0 > 0, alpha > 0 fails.
  void validate() const;
};

struct TimeProfiles {
  double b_min;      // lower bound for b
  double omega_min;  // lower bound for omega
  double omega_max;  // upper bound for omega
  double nu_min;     // b_min / (4 omega_max)
};

/// Solutions of the comparison equations omega' = -alpha omega^2 started
/// from omega_min0 and omega_max0, and b' = -omega_max(t) b from b_min0.
TimeProfiles time_profiles(const InitialBounds& bounds, double t);

/// C-infinity step: 0 for u <= 0, 1 for u >= 1, built from exp(-1/u).
double smooth_step(double u);

class CutoffProfile {
 public:
  CutoffProfile(InitialBounds bounds, int smoothness_order);

  /// Profile whose derivative bounds cover orders 1..ceil(s)+1.
  static CutoffProfile for_regularity(InitialBounds bounds, double s);

  const InitialBounds& bounds() const { return bounds_; }
  int smoothness_order() const { return smoothness_order_; }

  /// Measured constant c0 with |Phi^(k)| <= c0 b_min^(1-k) and
  /// |Psi^(k)| <= c0 omega_min^(1-k) for k = 1..smoothness_order.
  double c0() const { return c0_; }

  TimeProfiles profiles(double t) const { return time_profiles(bounds_, t); }

  /// b_min/2 below b_min/2, identity above b_min, smooth in between.
  double phi_b(double x, double t) const { return phi_b(x, profiles(t)); }
  double phi_b(double x, const TimeProfiles& p) const;

  /// omega_min/2 below omega_min/2, identity on [omega_min, omega_max],
  /// 2 omega_max above 2 omega_max.
  double psi_omega(double x, double t) const { return psi_omega(x, profiles(t)); }
  double psi_omega(double x, const TimeProfiles& p) const;

 private:
  InitialBounds bounds_;
  int smoothness_order_;
  double c0_;
};

/// Largest |d^k/dx^k h| over the unit-scale transition shapes, for
/// k = 1..order, estimated by central differences on a fine sample.
double measure_transition_constant(int order);

/// Pointwise Phi_t(Re b) / Psi_t(Re omega) on a grid of `points` per axis.
PhysicalGrid nu_bar_grid(const SpectralField& b, const SpectralField& omega, double t,
                         const CutoffProfile& profile, int points);

/// The regularized viscosity transformed back and truncated to the cutoff
/// of b.
SpectralField nu_bar(const SpectralField& b, const SpectralField& omega, double t,
                     const CutoffProfile& profile, int points);

}  // namespace kolmo
