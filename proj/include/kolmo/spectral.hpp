#pragma once

// Truncated Fourier fields on the unit torus [0,1)^d.
//
// A field with cutoff n stores one complex amplitude per wave vector k in
// the Euclidean ball |k| < n, ordered lexicographically (k_1 slowest, each
// component running from -(n-1) to n-1).  The field represents
//
//     f(x) = sum_{|k| < n} f_k exp(2 pi i k.x).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace kolmo {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kFourPiSq = 4.0 * kPi * kPi;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// The set of wave vectors k in Z^d with |k|^2 < n^2, with O(1) lookup.
/// Instances are immutable and shared between fields of the same shape.
class ModeSet {
 public:
  static std::shared_ptr<const ModeSet> get(int dim, int cutoff);

  ModeSet(int dim, int cutoff);

  int dim() const { return dim_; }
  int cutoff() const { return cutoff_; }
  std::size_t size() const { return norm_sq_.size(); }

  std::span<const int> wave(std::size_t i) const {
    return {waves_.data() + i * static_cast<std::size_t>(dim_),
            static_cast<std::size_t>(dim_)};
  }
  int norm_sq(std::size_t i) const { return norm_sq_[i]; }
  std::size_t mirror(std::size_t i) const { return mirror_[i]; }
  std::size_t zero_index() const { return zero_index_; }

  /// Position of k in this set, or nullopt when |k| >= cutoff.
  std::optional<std::size_t> index_of(std::span<const int> k) const;

  bool operator==(const ModeSet& other) const {
    return dim_ == other.dim_ && cutoff_ == other.cutoff_;
  }

 private:
  int dim_;
  int cutoff_;
  int side_;  // 2n - 1
  std::vector<int> waves_;
  std::vector<int> norm_sq_;
  std::vector<std::size_t> mirror_;
  std::vector<std::int32_t> box_lookup_;
  std::size_t zero_index_ = 0;
};

/// Fourier coefficients of a scalar field truncated to |k| < cutoff.
class SpectralField {
 public:
  SpectralField() = default;
  SpectralField(int dim, int cutoff);
  explicit SpectralField(std::shared_ptr<const ModeSet> modes);

  static SpectralField constant(int dim, int cutoff, double value);
  static SpectralField single_mode(int dim, int cutoff, std::span<const int> k,
                                   Complex amplitude);
  /// Real cosine/sine mode a*cos(2 pi k.x) + c*sin(2 pi k.x).
  static SpectralField trig_mode(int dim, int cutoff, std::span<const int> k,
                                 double cos_amplitude, double sin_amplitude);

  const ModeSet& modes() const { return *modes_; }
  const std::shared_ptr<const ModeSet>& modes_ptr() const { return modes_; }
  int dim() const { return modes_->dim(); }
  int cutoff() const { return modes_->cutoff(); }
  std::size_t size() const { return coeffs_.size(); }
  bool empty() const { return !modes_; }

  std::span<Complex> coeffs() { return coeffs_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  Complex& operator[](std::size_t i) { return coeffs_[i]; }
  const Complex& operator[](std::size_t i) const { return coeffs_[i]; }

  /// Amplitude at k; zero for wave vectors outside the ball.
  Complex coeff(std::span<const int> k) const;
  void set_coeff(std::span<const int> k, Complex value);

  /// Flag asserting conjugate symmetry f_{-k} = conj(f_k).
  bool is_real() const { return is_real_; }
  void set_real(bool value) { is_real_ = value; }

  /// Replace coefficients by the conjugate-symmetric average
  /// (f_k + conj(f_{-k})) / 2 and set the realness flag.
  void symmetrize();

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double factor);
  SpectralField& operator*=(Complex factor);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double c, SpectralField a) { return a *= c; }
  friend SpectralField operator*(SpectralField a, double c) { return a *= c; }
  friend SpectralField operator-(SpectralField a) { return a *= -1.0; }

 private:
  void require_same_shape(const SpectralField& other) const;

  std::shared_ptr<const ModeSet> modes_;
  std::vector<Complex> coeffs_;
  bool is_real_ = true;
};

/// d components sharing dim and cutoff.
struct VectorField {
  std::vector<SpectralField> components;

  VectorField() = default;
  VectorField(int dim, int cutoff);
  explicit VectorField(std::vector<SpectralField> comps);

  int dim() const { return components.front().dim(); }
  int cutoff() const { return components.front().cutoff(); }
  SpectralField& operator[](std::size_t j) { return components[j]; }
  const SpectralField& operator[](std::size_t j) const { return components[j]; }

  VectorField& operator+=(const VectorField& other);
  VectorField& operator-=(const VectorField& other);
  VectorField& operator*=(double factor);
};

/// Row-major d x d tensor of scalar fields.
struct TensorField {
  int dim = 0;
  std::vector<SpectralField> entries;

  SpectralField& operator()(int i, int j) { return entries[static_cast<std::size_t>(i * dim + j)]; }
  const SpectralField& operator()(int i, int j) const {
    return entries[static_cast<std::size_t>(i * dim + j)];
  }
};

/// Symbol of the Bessel potential, (1 + 4 pi^2 |k|^2)^{s/2}.
double bessel_symbol(int norm_sq, double s);

/// P_n: keep exactly the modes with |k| < n.  Also used to embed a field
/// into a larger ball (zero padding) when n exceeds the current cutoff.
SpectralField project(const SpectralField& f, int n);
VectorField project(const VectorField& v, int n);

SpectralField bessel_potential(const SpectralField& f, double s);
VectorField bessel_potential(const VectorField& v, double s);

double hs_norm_sq(const SpectralField& f, double s);
double hs_norm(const SpectralField& f, double s);
double hs_norm_sq(const VectorField& v, double s);
double hs_norm(const VectorField& v, double s);

SpectralField differentiate(const SpectralField& f, int axis);
VectorField gradient(const SpectralField& f);
SpectralField divergence(const VectorField& v);
/// div of a tensor along its first index: (div T)_j = sum_i d_i T_ij.
VectorField divergence(const TensorField& t);

/// D v = (grad v + grad v^T) / 2.
TensorField sym_gradient(const VectorField& v);

struct ExactProduct {};
struct OversampledProduct {
  int factor = 2;
};
using ProductMode = std::variant<ExactProduct, OversampledProduct>;

/// P_m(f g) with m = out_cutoff (default: f's cutoff).  Exact mode is the
/// direct convolution sum; oversampled mode multiplies on a grid of
/// factor * (2 n_max - 1) points per axis.
SpectralField spectral_product(const SpectralField& f, const SpectralField& g,
                               ProductMode mode = ExactProduct{},
                               std::optional<int> out_cutoff = std::nullopt);

/// Samples of a field on the uniform grid x_j = i_j / points, row-major.
struct PhysicalGrid {
  int dim = 0;
  int points = 0;
  std::vector<Complex> values;

  std::size_t size() const { return values.size(); }
  double max_imag() const;
};

std::size_t grid_size(int dim, int points);

/// Evaluate f on the grid.  With `lossless` set, a grid too coarse to
/// resolve every stored mode (points < 2n - 1) is rejected; otherwise the
/// modes alias onto the grid.
PhysicalGrid to_physical(const SpectralField& f, int points, bool lossless = true);

/// Discrete Fourier coefficients of the grid restricted to |k| < cutoff.
/// Requires points >= 2 cutoff - 1 so that the ball modes are distinct.
SpectralField from_physical(const PhysicalGrid& grid, int cutoff);

/// Pointwise evaluation at x in [0,1)^d by direct summation.
Complex evaluate(const SpectralField& f, std::span<const double> x);

struct Extremum {
  double value = 0.0;
  std::vector<double> location;
};

struct FieldExtrema {
  Extremum min;
  Extremum max;
};

/// Extrema of Re f: grid search on `points` per axis followed by Newton
/// polishing against the exact trigonometric polynomial.
FieldExtrema locate_extrema(const SpectralField& f, int points);

/// max_k |f_k - conj(f_{-k})| relative to max_k |f_k| (0 for the zero field).
double realness_residual(const SpectralField& f);

/// max_k |k . v_k| / (|k| max_k |v_k|).
double divergence_residual(const VectorField& v);

}  // namespace kolmo
