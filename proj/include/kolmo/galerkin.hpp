#pragma once

// Right-hand side of the truncated Kolmogorov system for the Fourier
// coefficients of (v, omega, b):
//
//   v_t     = -P_n(v.grad v) + div P_n(nu D v) - grad p
//   omega_t = -P_n(v.grad omega) + div P_n(nu grad omega) - alpha P_n(omega^2)
//   b_t     = -P_n(v.grad b) + div P_n(nu grad b) - P_n(b omega) + P_n(nu |Dv|^2)
//
// with nu = Phi_t(Re b) / Psi_t(Re omega) and p the zero-mean solution of
// -Lap p = div[P_n(v.grad v) - div P_n(nu D v)].

#include "kolmo/cutoff.hpp"
#include "kolmo/spectral.hpp"

namespace kolmo {

struct SimState {
  VectorField v;
  SpectralField omega;
  SpectralField b;
  double t = 0.0;

  static SimState zero(int dim, int cutoff);

  int dim() const { return omega.dim(); }
  int cutoff() const { return omega.cutoff(); }

  /// All d + 2 fields share one mode set; throws DimensionMismatch otherwise.
  void check_shapes() const;
  /// Conjugate-symmetrize every field.
  void symmetrize();
  /// Largest relative conjugate-symmetry defect over all fields.
  double realness_residual() const;
};

struct StateRate {
  VectorField dv;
  SpectralField domega;
  SpectralField db;
};

struct ModelParams {
  double alpha = 1.0;
  double s = 2.0;
  InitialBounds bounds;
  int oversample = 4;

  /// Requires s > d/2, alpha > 0 matching bounds.alpha, oversample >= 2.
  void validate(int dim) const;
  /// Smallest 2^a 3^b >= oversample (2n - 1); FFTW is slow on large primes.
  int grid_points(int cutoff) const;
};

/// grad p_n from the Poisson problem above.
VectorField pressure_gradient(const SimState& state, const ModelParams& params,
                              const CutoffProfile& profile);

/// The zero-mean pressure p_n itself.
SpectralField pressure(const SimState& state, const ModelParams& params,
                       const CutoffProfile& profile);

StateRate rhs(const SimState& state, const ModelParams& params, const CutoffProfile& profile);

/// Modewise removal of the component of f_k parallel to k.
VectorField leray_project(const VectorField& f);

/// -P_n(v.grad v) + div P_n(nu D v), before the pressure correction.
VectorField momentum_forcing(const SimState& state, const ModelParams& params,
                             const CutoffProfile& profile);

}  // namespace kolmo
