#pragma once

// Randomized checks of the fractional Sobolev inequalities used by the
// energy method, the three-way split of the commutator symbol, and a probe
// of the L^2 stability of the solution map.

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "kolmo/integrator.hpp"

namespace kolmo {

/// Amplitudes ~ (1 + |k|)^{-decay} times a unit complex normal per mode.
/// The draw for each k depends only on (seed, k), so a field with cutoff 2n
/// extends the one with cutoff n.
struct RandomFieldSpec {
  int dim = 2;
  int cutoff = 8;
  double decay = 0.0;
  std::uint64_t seed = 0;
};

SpectralField random_field(const RandomFieldSpec& spec);
/// Divergence-free random velocity (one sub-seed per component).
VectorField random_solenoidal(const RandomFieldSpec& spec);

/// Deterministic sub-seed for sample `index` of a campaign.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Random initial data mapped affinely so that the true extrema of omega are
/// exactly omega_min0 and omega_max0 and min b is exactly b_min0.
struct AdmissibleDataSpec {
  RandomFieldSpec field;
  int bandwidth = 4;          // only |k| < bandwidth + 1 are populated
  double velocity_l2 = 0.1;   // ||v||_{L^2}
  double b_spread = 0.1;      // max b - min b
  InitialBounds bounds;
};

SimState random_admissible_state(const AdmissibleDataSpec& spec);

/// Runs body(i) for i in [0, count) on up to worker_count() threads.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);
/// KOLMO_THREADS when set to a positive integer, else the hardware default.
unsigned worker_count();

/// L^p norm by quadrature on a grid of `points` per axis (0 picks
/// 4 (2n - 1)); p = infinity gives the grid maximum.
double lp_norm(const SpectralField& f, double p, int points = 0);
/// L^p norm of the pointwise Euclidean length.
double lp_norm(const VectorField& v, double p, int points = 0);

/// J^s(f g) - f J^s g with both products formed exactly at cutoff
/// n_f + n_g, large enough to hold every mode of f g.
SpectralField commutator(const SpectralField& f, const SpectralField& g, double s);

/// Phi_2 equals 1 on [1/9, 9]; Phi_1 and Phi_3 take up the rest below and
/// above.  Supports sit inside [0, 1/9), (1/10, 10) and (9, inf).
class PartitionOfUnity {
 public:
  double phi1(double x) const;
  double phi2(double x) const;
  double phi3(double x) const;
  double operator()(int j, double x) const;
};

struct CommutatorParts {
  SpectralField sigma1;
  SpectralField sigma2;
  SpectralField sigma3;
};

/// sigma_j(D)(f, g) by direct summation over mode pairs.  Throws for
/// cutoffs above 8.
CommutatorParts commutator_decomposition(const SpectralField& f, const SpectralField& g, double s,
                                         const PartitionOfUnity& partition = {});

struct EstimateSample {
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct EstimateReport {
  std::string name;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  std::vector<EstimateSample> entries;  // at the base cutoff
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  int cutoff = 0;
  /// Same campaign with every field extended to cutoff 2n.
  double max_ratio_refined = 0.0;
  /// max / min of the two maxima; 1 means identical.
  double stability = 1.0;
  bool finite = true;
};

struct CommutatorExponents {
  double p = 2.0;
  double p1 = std::numeric_limits<double>::infinity();
  double p2 = 2.0;
  double p3 = std::numeric_limits<double>::infinity();
  double p4 = 2.0;

  /// Throws unless 1/p = 1/p1 + 1/p2 = 1/p3 + 1/p4 with p, p2, p4 finite
  /// and all exponents above 1.
  void validate() const;
};

/// ||[J^s, f] g||_p / (||grad f||_{p1} ||J^{s-1} g||_{p2} + ||g||_{p3} ||J^s f||_{p4}).
EstimateReport verify_commutator_estimate(const RandomFieldSpec& spec, double s,
                                          const CommutatorExponents& exps, std::size_t samples);

struct ProductExponents {
  double p = 2.0;
  double p1 = 2.0;
  double q1 = std::numeric_limits<double>::infinity();
  double p2 = std::numeric_limits<double>::infinity();
  double q2 = 2.0;

  void validate() const;
};

/// ||J^s(f g)||_p / (||J^s f||_{p1} ||g||_{q1} + ||f||_{p2} ||J^s g||_{q2}).
EstimateReport verify_product_estimate(const RandomFieldSpec& spec, double s,
                                       const ProductExponents& exps, std::size_t samples);

enum class Composition { identity, sine, square, rational };

Composition composition_from_name(const std::string& name);
std::string composition_name(Composition g);
/// m-th derivative of G at x.
double composition_derivative(Composition g, int m, double x);

/// ||G(f)||_{H^s} / (||G'||_{C^{ceil s}} (1 + ||f||_inf)^{ceil s} ||f||_{H^s}),
/// the C^k norm taken over [-||f||_inf, ||f||_inf].
EstimateReport verify_composition_estimate(const RandomFieldSpec& spec, double s, Composition g,
                                           std::size_t samples);

/// ||grad f||_inf / (||f||_{H^s}^theta ||f||_{H^{s+1}}^{1-theta}) with
/// theta = (s - d/2)/2 for s <= d/2 + 1, and ||grad f||_inf / ||f||_{H^s}
/// beyond that.
EstimateReport verify_interpolation_inequality(const RandomFieldSpec& spec, double s,
                                               std::size_t samples);

/// The single-sample ratios behind the campaigns, exposed for testing.
EstimateSample commutator_ratio(const SpectralField& f, const SpectralField& g, double s,
                                const CommutatorExponents& exps);
EstimateSample product_ratio(const SpectralField& f, const SpectralField& g, double s,
                             const ProductExponents& exps);
EstimateSample composition_ratio(const SpectralField& f, double s, Composition g);
EstimateSample interpolation_ratio(const SpectralField& f, double s);

struct UniquenessReport {
  std::vector<double> times;
  std::vector<double> error;       // e(t) for the full perturbation
  std::vector<double> error_half;  // e(t) for half of it
  double fitted_growth = 0.0;      // smallest G with e(t) <= e(0) exp(G t)
  bool complete = true;
  std::string message;

  /// e(t) / e_half(t) at the sample closest to t.
  double ratio_at(double t) const;
};

/// Perturbation with unit L^2 norm per field (solenoidal in v), drawn from
/// `seed` with modes |k| <= 2.
SimState unit_perturbation(const SimState& like, std::uint64_t seed);

/// Integrates state0, state0 + amplitude P and state0 + amplitude P / 2 with
/// the same configuration and records e(t) = ||dv||^2 + ||domega||^2 + ||db||^2.
UniquenessReport uniqueness_probe(const SimState& state0, double amplitude, const ModelParams& params,
                                  const CutoffProfile& profile, const IntegratorConfig& config,
                                  std::uint64_t seed = 1);

}  // namespace kolmo
