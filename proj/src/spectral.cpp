#include "kolmo/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>

#include "kolmo/fft.hpp"

namespace kolmo {

// ---------------------------------------------------------------------------
// ModeSet

std::shared_ptr<const ModeSet> ModeSet::get(int dim, int cutoff) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const ModeSet>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, cutoff}];
  if (!slot) slot = std::make_shared<const ModeSet>(dim, cutoff);
  return slot;
}

ModeSet::ModeSet(int dim, int cutoff) : dim_(dim), cutoff_(cutoff), side_(2 * cutoff - 1) {
  if (dim < 2 || dim > 6) throw Error("ModeSet: dimension must lie in [2, 6]");
  if (cutoff < 1) throw Error("ModeSet: cutoff must be at least 1");

  std::size_t box = 1;
  for (int j = 0; j < dim; ++j) box *= static_cast<std::size_t>(side_);
  box_lookup_.assign(box, -1);

  const int limit_sq = cutoff * cutoff;
  std::vector<int> k(static_cast<std::size_t>(dim), -(cutoff - 1));
  for (std::size_t pos = 0; pos < box; ++pos) {
    int nsq = 0;
    for (int c : k) nsq += c * c;
    if (nsq < limit_sq) {
      box_lookup_[pos] = static_cast<std::int32_t>(norm_sq_.size());
      waves_.insert(waves_.end(), k.begin(), k.end());
      norm_sq_.push_back(nsq);
    }
    // odometer increment, last axis fastest
    for (int j = dim - 1; j >= 0; --j) {
      if (++k[static_cast<std::size_t>(j)] <= cutoff - 1) break;
      k[static_cast<std::size_t>(j)] = -(cutoff - 1);
    }
  }

  mirror_.resize(norm_sq_.size());
  std::vector<int> neg(static_cast<std::size_t>(dim));
  for (std::size_t i = 0; i < norm_sq_.size(); ++i) {
    auto w = wave(i);
    std::transform(w.begin(), w.end(), neg.begin(), [](int c) { return -c; });
    mirror_[i] = *index_of(neg);
  }
  std::vector<int> zero(static_cast<std::size_t>(dim), 0);
  zero_index_ = *index_of(zero);
}

std::optional<std::size_t> ModeSet::index_of(std::span<const int> k) const {
  if (static_cast<int>(k.size()) != dim_) return std::nullopt;
  std::size_t pos = 0;
  for (int c : k) {
    if (c <= -cutoff_ || c >= cutoff_) return std::nullopt;
    pos = pos * static_cast<std::size_t>(side_) + static_cast<std::size_t>(c + cutoff_ - 1);
  }
  const auto idx = box_lookup_[pos];
  if (idx < 0) return std::nullopt;
  return static_cast<std::size_t>(idx);
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(int dim, int cutoff) : SpectralField(ModeSet::get(dim, cutoff)) {}

SpectralField::SpectralField(std::shared_ptr<const ModeSet> modes)
    : modes_(std::move(modes)), coeffs_(modes_->size()) {}

SpectralField SpectralField::constant(int dim, int cutoff, double value) {
  SpectralField f(dim, cutoff);
  f.coeffs_[f.modes_->zero_index()] = value;
  return f;
}

SpectralField SpectralField::single_mode(int dim, int cutoff, std::span<const int> k,
                                         Complex amplitude) {
  SpectralField f(dim, cutoff);
  if (auto idx = f.modes_->index_of(k)) f.coeffs_[*idx] = amplitude;
  f.is_real_ = std::all_of(k.begin(), k.end(), [](int c) { return c == 0; }) &&
               amplitude.imag() == 0.0;
  return f;
}

SpectralField SpectralField::trig_mode(int dim, int cutoff, std::span<const int> k,
                                       double cos_amplitude, double sin_amplitude) {
  SpectralField f(dim, cutoff);
  const bool is_zero = std::all_of(k.begin(), k.end(), [](int c) { return c == 0; });
  auto idx = f.modes_->index_of(k);
  if (!idx) return f;
  if (is_zero) {
    f.coeffs_[*idx] = cos_amplitude;
    return f;
  }
  // a cos(t) + c sin(t) = (a - i c)/2 e^{it} + (a + i c)/2 e^{-it}
  f.coeffs_[*idx] += Complex(cos_amplitude, -sin_amplitude) * 0.5;
  f.coeffs_[f.modes_->mirror(*idx)] += Complex(cos_amplitude, sin_amplitude) * 0.5;
  return f;
}

Complex SpectralField::coeff(std::span<const int> k) const {
  auto idx = modes_->index_of(k);
  return idx ? coeffs_[*idx] : Complex{};
}

void SpectralField::set_coeff(std::span<const int> k, Complex value) {
  auto idx = modes_->index_of(k);
  if (!idx) throw Error("set_coeff: wave vector outside the truncation ball");
  coeffs_[*idx] = value;
}

void SpectralField::symmetrize() {
  const std::vector<Complex> old = coeffs_;
  for (std::size_t i = 0; i < old.size(); ++i) {
    coeffs_[i] = 0.5 * (old[i] + std::conj(old[modes_->mirror(i)]));
  }
  is_real_ = true;
}

void SpectralField::require_same_shape(const SpectralField& other) const {
  if (!(*modes_ == *other.modes_)) {
    throw DimensionMismatch("spectral fields differ in dimension or cutoff");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  is_real_ = is_real_ && other.is_real_;
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  is_real_ = is_real_ && other.is_real_;
  return *this;
}

SpectralField& SpectralField::operator*=(double factor) {
  for (auto& c : coeffs_) c *= factor;
  return *this;
}

SpectralField& SpectralField::operator*=(Complex factor) {
  for (auto& c : coeffs_) c *= factor;
  if (factor.imag() != 0.0) is_real_ = false;
  return *this;
}

// ---------------------------------------------------------------------------
// VectorField

VectorField::VectorField(int dim, int cutoff) {
  components.reserve(static_cast<std::size_t>(dim));
  for (int j = 0; j < dim; ++j) components.emplace_back(dim, cutoff);
}

VectorField::VectorField(std::vector<SpectralField> comps) : components(std::move(comps)) {
  if (components.empty()) throw Error("VectorField: no components");
  if (static_cast<int>(components.size()) != components.front().dim()) {
    throw DimensionMismatch("VectorField: component count must equal the dimension");
  }
  for (const auto& c : components) {
    if (!(c.modes() == components.front().modes())) {
      throw DimensionMismatch("VectorField: components differ in shape");
    }
  }
}

VectorField& VectorField::operator+=(const VectorField& other) {
  for (std::size_t j = 0; j < components.size(); ++j) components[j] += other.components[j];
  return *this;
}

VectorField& VectorField::operator-=(const VectorField& other) {
  for (std::size_t j = 0; j < components.size(); ++j) components[j] -= other.components[j];
  return *this;
}

VectorField& VectorField::operator*=(double factor) {
  for (auto& c : components) c *= factor;
  return *this;
}

// ---------------------------------------------------------------------------
// Linear operators

double bessel_symbol(int norm_sq, double s) {
  return std::pow(1.0 + kFourPiSq * norm_sq, 0.5 * s);
}

SpectralField project(const SpectralField& f, int n) {
  SpectralField out(f.dim(), n);
  const auto& src = f.modes();
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (auto idx = out.modes().index_of(src.wave(i))) out[*idx] = f[i];
  }
  out.set_real(f.is_real());
  return out;
}

VectorField project(const VectorField& v, int n) {
  VectorField out;
  for (const auto& c : v.components) out.components.push_back(project(c, n));
  return out;
}

SpectralField bessel_potential(const SpectralField& f, double s) {
  SpectralField out = f;
  const auto& modes = f.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) out[i] *= bessel_symbol(modes.norm_sq(i), s);
  return out;
}

VectorField bessel_potential(const VectorField& v, double s) {
  VectorField out;
  for (const auto& c : v.components) out.components.push_back(bessel_potential(c, s));
  return out;
}

double hs_norm_sq(const SpectralField& f, double s) {
  const auto& modes = f.modes();
  double sum = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    sum += std::pow(1.0 + kFourPiSq * modes.norm_sq(i), s) * std::norm(f[i]);
  }
  return sum;
}

double hs_norm(const SpectralField& f, double s) { return std::sqrt(hs_norm_sq(f, s)); }

double hs_norm_sq(const VectorField& v, double s) {
  double sum = 0.0;
  for (const auto& c : v.components) sum += hs_norm_sq(c, s);
  return sum;
}

double hs_norm(const VectorField& v, double s) { return std::sqrt(hs_norm_sq(v, s)); }

SpectralField differentiate(const SpectralField& f, int axis) {
  if (axis < 0 || axis >= f.dim()) throw Error("differentiate: axis out of range");
  SpectralField out = f;
  const auto& modes = f.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    out[i] *= Complex(0.0, kTwoPi * modes.wave(i)[static_cast<std::size_t>(axis)]);
  }
  return out;
}

VectorField gradient(const SpectralField& f) {
  VectorField out;
  for (int a = 0; a < f.dim(); ++a) out.components.push_back(differentiate(f, a));
  return out;
}

SpectralField divergence(const VectorField& v) {
  SpectralField out(v[0].modes_ptr());
  bool real = true;
  for (int j = 0; j < v.dim(); ++j) {
    out += differentiate(v[static_cast<std::size_t>(j)], j);
    real = real && v[static_cast<std::size_t>(j)].is_real();
  }
  out.set_real(real);
  return out;
}

VectorField divergence(const TensorField& t) {
  VectorField out;
  for (int j = 0; j < t.dim; ++j) {
    SpectralField acc(t(0, j).modes_ptr());
    bool real = true;
    for (int i = 0; i < t.dim; ++i) {
      acc += differentiate(t(i, j), i);
      real = real && t(i, j).is_real();
    }
    acc.set_real(real);
    out.components.push_back(std::move(acc));
  }
  return out;
}

TensorField sym_gradient(const VectorField& v) {
  const int d = v.dim();
  TensorField out{d, {}};
  out.entries.resize(static_cast<std::size_t>(d * d));
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      SpectralField e = differentiate(v[static_cast<std::size_t>(j)], i);
      e += differentiate(v[static_cast<std::size_t>(i)], j);
      e *= 0.5;
      out(i, j) = e;
      out(j, i) = std::move(e);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Products and grid transforms

namespace {

SpectralField exact_product(const SpectralField& f, const SpectralField& g, int out_cutoff) {
  const int d = f.dim();
  const auto& fm = f.modes();
  const auto& gm = g.modes();
  SpectralField out(d, out_cutoff);
  const auto& om = out.modes();

  // Every sum k_f + k_g has components in [-pad, pad]; index a padded box so
  // that the lookup of the sum is an addition of precomputed positions.
  const int pad = (f.cutoff() - 1) + (g.cutoff() - 1);
  const std::size_t side = static_cast<std::size_t>(2 * pad + 1);
  std::size_t box = 1;
  for (int j = 0; j < d; ++j) box *= side;
  std::vector<std::int64_t> lookup(box, -1);
  std::vector<int> k(static_cast<std::size_t>(d), -pad);
  for (std::size_t pos = 0; pos < box; ++pos) {
    if (auto idx = om.index_of(k)) lookup[pos] = static_cast<std::int64_t>(*idx);
    for (int j = d - 1; j >= 0; --j) {
      if (++k[static_cast<std::size_t>(j)] <= pad) break;
      k[static_cast<std::size_t>(j)] = -pad;
    }
  }
  auto position = [&](std::span<const int> w, int shift) {
    std::int64_t p = 0;
    for (int c : w) p = p * static_cast<std::int64_t>(side) + (c + shift);
    return p;
  };
  // g positions carry the +pad shift so that fpos + gpos lands on k_f + k_g.
  std::vector<std::int64_t> fpos(fm.size()), gpos(gm.size());
  for (std::size_t i = 0; i < fm.size(); ++i) fpos[i] = position(fm.wave(i), 0);
  for (std::size_t j = 0; j < gm.size(); ++j) gpos[j] = position(gm.wave(j), pad);

  auto oc = out.coeffs();
  for (std::size_t i = 0; i < fm.size(); ++i) {
    const Complex fi = f[i];
    if (fi == Complex{}) continue;
    for (std::size_t j = 0; j < gm.size(); ++j) {
      const auto target = lookup[static_cast<std::size_t>(fpos[i] + gpos[j])];
      if (target >= 0) oc[static_cast<std::size_t>(target)] += fi * g[j];
    }
  }
  out.set_real(f.is_real() && g.is_real());
  return out;
}

}  // namespace

SpectralField spectral_product(const SpectralField& f, const SpectralField& g, ProductMode mode,
                               std::optional<int> out_cutoff) {
  if (f.dim() != g.dim()) throw DimensionMismatch("spectral_product: dimension mismatch");
  const int m = out_cutoff.value_or(f.cutoff());
  if (m < 1) throw Error("spectral_product: output cutoff must be at least 1");

  if (std::holds_alternative<ExactProduct>(mode)) return exact_product(f, g, m);

  const int factor = std::get<OversampledProduct>(mode).factor;
  if (factor < 2) throw Error("spectral_product: oversampling factor must be at least 2");
  const int n = std::max(f.cutoff(), g.cutoff());
  const int points = std::max(factor * (2 * n - 1), 2 * m - 1);
  PhysicalGrid a = to_physical(f, points);
  const PhysicalGrid b = to_physical(g, points);
  for (std::size_t i = 0; i < a.values.size(); ++i) a.values[i] *= b.values[i];
  SpectralField out = from_physical(a, m);
  out.set_real(f.is_real() && g.is_real());
  return out;
}

std::size_t grid_size(int dim, int points) {
  std::size_t total = 1;
  for (int j = 0; j < dim; ++j) total *= static_cast<std::size_t>(points);
  return total;
}

double PhysicalGrid::max_imag() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v.imag()));
  return m;
}

PhysicalGrid to_physical(const SpectralField& f, int points, bool lossless) {
  if (points < 1) throw Error("to_physical: grid must have at least one point per axis");
  if (lossless && points < 2 * f.cutoff() - 1) {
    throw Error("to_physical: grid of " + std::to_string(points) +
                " points per axis is too coarse for cutoff " + std::to_string(f.cutoff()));
  }
  PhysicalGrid grid{f.dim(), points, std::vector<Complex>(grid_size(f.dim(), points))};
  const auto offsets = fft::mode_offsets(f.modes(), points);
  fft::scatter(f, offsets, grid.values);
  fft::transform(grid.values, f.dim(), points, fft::Direction::backward);
  if (f.is_real()) {
    for (auto& v : grid.values) v.imag(0.0);
  }
  return grid;
}

SpectralField from_physical(const PhysicalGrid& grid, int cutoff) {
  if (grid.points < 2 * cutoff - 1) {
    throw Error("from_physical: grid too coarse to separate modes below cutoff " +
                std::to_string(cutoff));
  }
  std::vector<Complex> work = grid.values;
  fft::transform(work, grid.dim, grid.points, fft::Direction::forward);
  const auto modes = ModeSet::get(grid.dim, cutoff);
  const auto offsets = fft::mode_offsets(*modes, grid.points);
  SpectralField out =
      fft::gather(work, offsets, modes, 1.0 / static_cast<double>(grid_size(grid.dim, grid.points)));
  out.set_real(grid.max_imag() == 0.0);
  return out;
}

Complex evaluate(const SpectralField& f, std::span<const double> x) {
  const auto& modes = f.modes();
  Complex sum{};
  for (std::size_t i = 0; i < modes.size(); ++i) {
    double phase = 0.0;
    auto w = modes.wave(i);
    for (std::size_t a = 0; a < w.size(); ++a) phase += w[a] * x[a];
    sum += f[i] * std::polar(1.0, kTwoPi * phase);
  }
  return sum;
}

namespace {

// Value, gradient and Hessian of Re f at x.
struct LocalJet {
  double value = 0.0;
  std::vector<double> grad;
  std::vector<double> hess;
};

LocalJet local_jet(const SpectralField& f, std::span<const double> x) {
  const int d = f.dim();
  const auto& modes = f.modes();
  LocalJet jet{0.0, std::vector<double>(static_cast<std::size_t>(d)),
               std::vector<double>(static_cast<std::size_t>(d * d))};
  for (std::size_t i = 0; i < modes.size(); ++i) {
    auto w = modes.wave(i);
    double phase = 0.0;
    for (int a = 0; a < d; ++a) phase += w[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
    const Complex term = f[i] * std::polar(1.0, kTwoPi * phase);
    jet.value += term.real();
    // d/dx_a -> 2 pi i k_a
    for (int a = 0; a < d; ++a) {
      const double ka = kTwoPi * w[static_cast<std::size_t>(a)];
      jet.grad[static_cast<std::size_t>(a)] += (Complex(0.0, ka) * term).real();
      for (int b = 0; b < d; ++b) {
        const double kb = kTwoPi * w[static_cast<std::size_t>(b)];
        jet.hess[static_cast<std::size_t>(a * d + b)] -= ka * kb * term.real();
      }
    }
  }
  return jet;
}

// Solve H delta = -g by Gaussian elimination with partial pivoting.
bool newton_direction(std::vector<double> h, std::vector<double> g, int d,
                      std::vector<double>& delta) {
  for (int c = 0; c < d; ++c) {
    int piv = c;
    for (int r = c + 1; r < d; ++r) {
      if (std::abs(h[static_cast<std::size_t>(r * d + c)]) >
          std::abs(h[static_cast<std::size_t>(piv * d + c)]))
        piv = r;
    }
    if (std::abs(h[static_cast<std::size_t>(piv * d + c)]) < 1e-300) return false;
    if (piv != c) {
      for (int k = 0; k < d; ++k)
        std::swap(h[static_cast<std::size_t>(c * d + k)], h[static_cast<std::size_t>(piv * d + k)]);
      std::swap(g[static_cast<std::size_t>(c)], g[static_cast<std::size_t>(piv)]);
    }
    for (int r = c + 1; r < d; ++r) {
      const double m = h[static_cast<std::size_t>(r * d + c)] / h[static_cast<std::size_t>(c * d + c)];
      for (int k = c; k < d; ++k)
        h[static_cast<std::size_t>(r * d + k)] -= m * h[static_cast<std::size_t>(c * d + k)];
      g[static_cast<std::size_t>(r)] -= m * g[static_cast<std::size_t>(c)];
    }
  }
  delta.assign(static_cast<std::size_t>(d), 0.0);
  for (int r = d - 1; r >= 0; --r) {
    double acc = -g[static_cast<std::size_t>(r)];
    for (int k = r + 1; k < d; ++k)
      acc -= h[static_cast<std::size_t>(r * d + k)] * delta[static_cast<std::size_t>(k)];
    delta[static_cast<std::size_t>(r)] = acc / h[static_cast<std::size_t>(r * d + r)];
  }
  return true;
}

Extremum polish(const SpectralField& f, Extremum start, double spacing, bool minimize) {
  const int d = f.dim();
  const double sign = minimize ? 1.0 : -1.0;
  Extremum best = start;
  std::vector<double> x = start.location;
  std::vector<double> delta;
  for (int iter = 0; iter < 50; ++iter) {
    LocalJet jet = local_jet(f, x);
    for (auto& g : jet.grad) g *= sign;
    double hmax = 0.0;
    for (auto& h : jet.hess) {
      h *= sign;
      hmax = std::max(hmax, std::abs(h));
    }
    // flat directions make H singular; a small shift keeps them fixed
    for (int a = 0; a < d; ++a) jet.hess[static_cast<std::size_t>(a * d + a)] += 1e-10 * hmax + 1e-300;
    double slope = 0.0;
    const bool newton = newton_direction(jet.hess, jet.grad, d, delta);
    if (newton) {
      for (int a = 0; a < d; ++a) slope += jet.grad[static_cast<std::size_t>(a)] * delta[static_cast<std::size_t>(a)];
    }
    if (!newton || !(slope < 0.0)) {
      delta = jet.grad;
      for (auto& v : delta) v = -v;
    }
    double len = 0.0;
    for (double v : delta) len += v * v;
    len = std::sqrt(len);
    if (!(len > 0.0)) break;
    if (len > spacing) {
      for (auto& v : delta) v *= spacing / len;
      len = spacing;
    }
    bool improved = false;
    for (int halving = 0; halving < 60 && !improved; ++halving) {
      std::vector<double> trial(x);
      for (int a = 0; a < d; ++a) trial[static_cast<std::size_t>(a)] += delta[static_cast<std::size_t>(a)];
      const double value = evaluate(f, trial).real();
      if (sign * value < sign * best.value) {
        best.value = value;
        best.location = trial;
        x = trial;
        improved = true;
      } else {
        for (auto& v : delta) v *= 0.5;
        len *= 0.5;
      }
    }
    if (!improved || len < 1e-14) break;
  }
  for (auto& c : best.location) c -= std::floor(c);
  return best;
}

}  // namespace

FieldExtrema locate_extrema(const SpectralField& f, int points) {
  const PhysicalGrid grid = to_physical(f, points, false);
  const int d = f.dim();
  std::size_t imin = 0, imax = 0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid.values[i].real() < grid.values[imin].real()) imin = i;
    if (grid.values[i].real() > grid.values[imax].real()) imax = i;
  }
  auto location_of = [&](std::size_t lin) {
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int a = d - 1; a >= 0; --a) {
      x[static_cast<std::size_t>(a)] =
          static_cast<double>(lin % static_cast<std::size_t>(points)) / points;
      lin /= static_cast<std::size_t>(points);
    }
    return x;
  };
  const double spacing = 1.0 / points;
  FieldExtrema out;
  out.min = polish(f, {grid.values[imin].real(), location_of(imin)}, spacing, true);
  out.max = polish(f, {grid.values[imax].real(), location_of(imax)}, spacing, false);
  return out;
}

double realness_residual(const SpectralField& f) {
  double scale = 0.0, worst = 0.0;
  const auto& modes = f.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    scale = std::max(scale, std::abs(f[i]));
    worst = std::max(worst, std::abs(f[i] - std::conj(f[modes.mirror(i)])));
  }
  return scale == 0.0 ? 0.0 : worst / scale;
}

double divergence_residual(const VectorField& v) {
  const auto& modes = v[0].modes();
  double scale = 0.0, worst = 0.0;
  for (const auto& c : v.components) {
    for (std::size_t i = 0; i < c.size(); ++i) scale = std::max(scale, std::abs(c[i]));
  }
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (modes.norm_sq(i) == 0) continue;
    Complex dot{};
    auto w = modes.wave(i);
    for (std::size_t j = 0; j < v.components.size(); ++j) dot += static_cast<double>(w[j]) * v[j][i];
    worst = std::max(worst, std::abs(dot) / std::sqrt(static_cast<double>(modes.norm_sq(i))));
  }
  return scale == 0.0 ? 0.0 : worst / scale;
}

}  // namespace kolmo
