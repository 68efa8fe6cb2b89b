#include "kolmo/estimate_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace kolmo {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double unit_interval(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

// Unit complex normal (E|z|^2 = 1) keyed by (seed, k).
Complex mode_draw(std::uint64_t seed, std::span<const int> k) {
  std::uint64_t h = splitmix(seed ^ 0x6A09E667F3BCC909ull);
  for (int kj : k) h = splitmix(h ^ static_cast<std::uint32_t>(kj));
  const double u1 = unit_interval(splitmix(h));
  const double u2 = unit_interval(splitmix(h + 1));
  const double r = std::sqrt(-std::log1p(-u1));  // sqrt(-2 ln(1-u)) / sqrt(2)
  return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
}

bool is_inf(double p) { return std::isinf(p); }
double reciprocal(double p) { return is_inf(p) ? 0.0 : 1.0 / p; }

int default_points(int cutoff) { return 4 * (2 * cutoff - 1); }

double lp_from_magnitudes(const std::vector<double>& mag, double p) {
  if (is_inf(p)) return mag.empty() ? 0.0 : *std::max_element(mag.begin(), mag.end());
  double sum = 0.0;
  for (double m : mag) sum += std::pow(m, p);
  return std::pow(sum / static_cast<double>(mag.size()), 1.0 / p);
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

EstimateSample make_sample(double lhs, double rhs) { return {lhs, rhs, rhs > 0.0 ? lhs / rhs : 0.0}; }

using SampleFn = std::function<EstimateSample(std::uint64_t sample_seed, int cutoff)>;

struct Pass {
  std::vector<EstimateSample> kept;
  std::size_t skipped = 0;
  double max_ratio = 0.0;
  bool finite = true;
};

Pass run_pass(std::uint64_t seed, std::size_t samples, int cutoff, const SampleFn& fn) {
  std::vector<EstimateSample> all(samples);
  parallel_for(samples, [&](std::size_t i) { all[i] = fn(derive_seed(seed, i), cutoff); });
  Pass pass;
  for (const auto& e : all) {
    if (!(e.rhs > 0.0)) {
      ++pass.skipped;
      continue;
    }
    if (!std::isfinite(e.ratio)) pass.finite = false;
    pass.max_ratio = std::max(pass.max_ratio, e.ratio);
    pass.kept.push_back(e);
  }
  return pass;
}

EstimateReport run_campaign(std::string name, const RandomFieldSpec& spec, std::size_t samples,
                            const SampleFn& fn) {
  if (spec.cutoff < 1) throw Error(name + ": cutoff must be positive");
  Pass base = run_pass(spec.seed, samples, spec.cutoff, fn);
  Pass refined = run_pass(spec.seed, samples, 2 * spec.cutoff, fn);

  EstimateReport r;
  r.name = std::move(name);
  r.samples = samples;
  r.skipped = base.skipped;
  r.cutoff = spec.cutoff;
  r.max_ratio = base.max_ratio;
  r.max_ratio_refined = refined.max_ratio;
  r.finite = base.finite && refined.finite;
  std::vector<double> ratios;
  for (const auto& e : base.kept) ratios.push_back(e.ratio);
  r.median_ratio = median(ratios);
  r.entries = std::move(base.kept);
  const double lo = std::min(r.max_ratio, r.max_ratio_refined);
  const double hi = std::max(r.max_ratio, r.max_ratio_refined);
  r.stability = hi == 0.0 ? 1.0 : (lo == 0.0 ? std::numeric_limits<double>::infinity() : hi / lo);
  return r;
}

RandomFieldSpec with(const RandomFieldSpec& spec, int cutoff, std::uint64_t seed) {
  RandomFieldSpec out = spec;
  out.cutoff = cutoff;
  out.seed = seed;
  return out;
}

void require_exponent_identity(double a, double b, const char* what) {
  if (std::abs(a - b) > 1e-12) throw Error(std::string("exponents: ") + what + " violated");
}

double l2_distance_sq(const SpectralField& a, const SpectralField& b) {
  return hs_norm_sq(a - b, 0.0);
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix(seed ^ splitmix(index + 0x3C6EF372FE94F82Bull));
}

SpectralField random_field(const RandomFieldSpec& spec) {
  SpectralField f(spec.dim, spec.cutoff);
  const ModeSet& modes = f.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::size_t m = modes.mirror(i);
    if (i > m) continue;
    const auto k = modes.wave(i);
    const double amp = std::pow(1.0 + std::sqrt(static_cast<double>(modes.norm_sq(i))), -spec.decay);
    const Complex z = amp * mode_draw(spec.seed, k);
    if (i == m) {
      f[i] = Complex(z.real() * std::sqrt(2.0), 0.0);
    } else {
      f[i] = z;
      f[m] = std::conj(z);
    }
  }
  f.set_real(true);
  return f;
}

VectorField random_solenoidal(const RandomFieldSpec& spec) {
  std::vector<SpectralField> comps;
  for (int j = 0; j < spec.dim; ++j) {
    comps.push_back(random_field(with(spec, spec.cutoff, derive_seed(spec.seed, static_cast<std::uint64_t>(j)))));
  }
  VectorField v = leray_project(VectorField(std::move(comps)));
  for (auto& c : v.components) c.symmetrize();
  return v;
}

SimState random_admissible_state(const AdmissibleDataSpec& spec) {
  if (!(spec.bounds.omega_max0 >= spec.bounds.omega_min0) || !(spec.b_spread >= 0.0)) {
    throw Error("random_admissible_state: need omega_max0 >= omega_min0 and b_spread >= 0");
  }
  const int n = spec.field.cutoff;
  const int band = std::min(spec.bandwidth + 1, n);
  if (band < 2) throw Error("random_admissible_state: bandwidth must be at least 1");
  const int points = default_points(band);

  auto affine = [&](std::uint64_t stream, double low, double high) {
    SpectralField r = random_field(with(spec.field, band, derive_seed(spec.field.seed, stream)));
    const FieldExtrema ex = locate_extrema(r, points);
    const double range = ex.max.value - ex.min.value;
    if (!(range > 0.0)) throw Error("random_admissible_state: degenerate random field");
    const double scale = (high - low) / range;
    if (scale == 0.0) return SpectralField::constant(spec.field.dim, n, low);
    r *= scale;
    r[r.modes().zero_index()] += low - ex.min.value * scale;
    return project(r, n);
  };

  SimState st = SimState::zero(spec.field.dim, n);
  const InitialBounds& b = spec.bounds;
  st.omega = affine(100, b.omega_min0, b.omega_max0);
  st.b = affine(101, b.b_min0, b.b_min0 + spec.b_spread);
  VectorField v = random_solenoidal(with(spec.field, band, derive_seed(spec.field.seed, 102)));
  const double norm = hs_norm(v, 0.0);
  if (norm > 0.0) v *= spec.velocity_l2 / norm;
  st.v = project(v, n);
  st.symmetrize();
  return st;
}

unsigned worker_count() {
  if (const char* env = std::getenv("KOLMO_THREADS")) {
    char* end = nullptr;
    const long value = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && value > 0) return static_cast<unsigned>(value);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto run = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double lp_norm(const SpectralField& f, double p, int points) {
  if (!(p >= 1.0)) throw Error("lp_norm: p must be at least 1");
  const PhysicalGrid g = to_physical(f, points > 0 ? points : default_points(f.cutoff()));
  std::vector<double> mag(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) mag[i] = std::abs(g.values[i]);
  return lp_from_magnitudes(mag, p);
}

double lp_norm(const VectorField& v, double p, int points) {
  if (!(p >= 1.0)) throw Error("lp_norm: p must be at least 1");
  const int pts = points > 0 ? points : default_points(v.cutoff());
  std::vector<double> mag;
  for (const auto& c : v.components) {
    const PhysicalGrid g = to_physical(c, pts);
    if (mag.empty()) mag.assign(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) mag[i] += std::norm(g.values[i]);
  }
  for (double& m : mag) m = std::sqrt(m);
  return lp_from_magnitudes(mag, p);
}

SpectralField commutator(const SpectralField& f, const SpectralField& g, double s) {
  if (f.dim() != g.dim()) throw DimensionMismatch("commutator: dimension mismatch");
  const int out = f.cutoff() + g.cutoff();
  SpectralField lhs = bessel_potential(spectral_product(f, g, ExactProduct{}, out), s);
  lhs -= spectral_product(f, bessel_potential(g, s), ExactProduct{}, out);
  return lhs;
}

namespace {

constexpr double kLowStart = 0.1 + (1.0 / 9.0 - 0.1) / 4.0;
constexpr double kLowEnd = 1.0 / 9.0 - (1.0 / 9.0 - 0.1) / 4.0;
constexpr double kHighStart = 9.25;
constexpr double kHighEnd = 9.75;

}  // namespace

double PartitionOfUnity::phi2(double x) const {
  if (x <= kLowStart || x >= kHighEnd) return 0.0;
  if (x < kLowEnd) return smooth_step((x - kLowStart) / (kLowEnd - kLowStart));
  if (x <= kHighStart) return 1.0;
  return 1.0 - smooth_step((x - kHighStart) / (kHighEnd - kHighStart));
}

double PartitionOfUnity::phi1(double x) const { return x < 1.0 ? 1.0 - phi2(x) : 0.0; }
double PartitionOfUnity::phi3(double x) const { return x > 1.0 ? 1.0 - phi2(x) : 0.0; }

double PartitionOfUnity::operator()(int j, double x) const {
  switch (j) {
    case 1: return phi1(x);
    case 2: return phi2(x);
    case 3: return phi3(x);
    default: throw Error("PartitionOfUnity: index must be 1, 2 or 3");
  }
}

CommutatorParts commutator_decomposition(const SpectralField& f, const SpectralField& g, double s,
                                         const PartitionOfUnity& partition) {
  if (f.dim() != g.dim()) throw DimensionMismatch("commutator_decomposition: dimension mismatch");
  if (std::max(f.cutoff(), g.cutoff()) > 8) {
    throw Error("commutator_decomposition: cutoff " + std::to_string(std::max(f.cutoff(), g.cutoff())) +
                " too large for the direct double sum (at most 8)");
  }
  const int dim = f.dim();
  const int out = f.cutoff() + g.cutoff();
  CommutatorParts parts{SpectralField(dim, out), SpectralField(dim, out), SpectralField(dim, out)};
  const ModeSet& fm = f.modes();
  const ModeSet& gm = g.modes();
  const ModeSet& om = parts.sigma1.modes();
  std::vector<int> sum(static_cast<std::size_t>(dim));
  for (std::size_t a = 0; a < fm.size(); ++a) {
    if (f[a] == Complex{}) continue;
    const auto xi = fm.wave(a);
    const double xi_sq = fm.norm_sq(a);
    for (std::size_t b = 0; b < gm.size(); ++b) {
      if (g[b] == Complex{}) continue;
      const auto eta = gm.wave(b);
      int sum_sq = 0;
      for (int j = 0; j < dim; ++j) {
        sum[static_cast<std::size_t>(j)] = xi[static_cast<std::size_t>(j)] + eta[static_cast<std::size_t>(j)];
        sum_sq += sum[static_cast<std::size_t>(j)] * sum[static_cast<std::size_t>(j)];
      }
      const double diff = bessel_symbol(sum_sq, s) - bessel_symbol(gm.norm_sq(b), s);
      const double ratio = (1.0 + xi_sq) / (1.0 + gm.norm_sq(b));
      const std::size_t at = *om.index_of(sum);
      const Complex term = diff * f[a] * g[b];
      parts.sigma1[at] += partition.phi1(ratio) * term;
      parts.sigma2[at] += partition.phi2(ratio) * term;
      parts.sigma3[at] += partition.phi3(ratio) * term;
    }
  }
  const bool real = f.is_real() && g.is_real();
  for (auto* p : {&parts.sigma1, &parts.sigma2, &parts.sigma3}) p->set_real(real);
  return parts;
}

void CommutatorExponents::validate() const {
  for (double q : {p, p1, p2, p3, p4}) {
    if (!(q > 1.0)) throw Error("commutator exponents must exceed 1");
  }
  if (is_inf(p) || is_inf(p2) || is_inf(p4)) throw Error("commutator exponents p, p2, p4 must be finite");
  require_exponent_identity(reciprocal(p), reciprocal(p1) + reciprocal(p2), "1/p = 1/p1 + 1/p2");
  require_exponent_identity(reciprocal(p), reciprocal(p3) + reciprocal(p4), "1/p = 1/p3 + 1/p4");
}

void ProductExponents::validate() const {
  for (double q : {p, p1, q1, p2, q2}) {
    if (!(q > 1.0)) throw Error("product exponents must exceed 1");
  }
  if (is_inf(p) || is_inf(p1) || is_inf(q2)) throw Error("product exponents p, p1, q2 must be finite");
  require_exponent_identity(reciprocal(p), reciprocal(p1) + reciprocal(q1), "1/p = 1/p1 + 1/q1");
  require_exponent_identity(reciprocal(p), reciprocal(p2) + reciprocal(q2), "1/p = 1/p2 + 1/q2");
}

EstimateSample commutator_ratio(const SpectralField& f, const SpectralField& g, double s,
                                const CommutatorExponents& e) {
  const double lhs = lp_norm(commutator(f, g, s), e.p);
  const double rhs = lp_norm(gradient(f), e.p1) * lp_norm(bessel_potential(g, s - 1.0), e.p2) +
                     lp_norm(g, e.p3) * lp_norm(bessel_potential(f, s), e.p4);
  return make_sample(lhs, rhs);
}

EstimateSample product_ratio(const SpectralField& f, const SpectralField& g, double s,
                             const ProductExponents& e) {
  const int out = f.cutoff() + g.cutoff();
  const double lhs = lp_norm(bessel_potential(spectral_product(f, g, ExactProduct{}, out), s), e.p);
  const double rhs = lp_norm(bessel_potential(f, s), e.p1) * lp_norm(g, e.q1) +
                     lp_norm(f, e.p2) * lp_norm(bessel_potential(g, s), e.q2);
  return make_sample(lhs, rhs);
}

Composition composition_from_name(const std::string& name) {
  if (name == "identity") return Composition::identity;
  if (name == "sin" || name == "sine") return Composition::sine;
  if (name == "square") return Composition::square;
  if (name == "rational") return Composition::rational;
  throw Error("unknown composition '" + name + "' (identity, sin, square, rational)");
}

std::string composition_name(Composition g) {
  switch (g) {
    case Composition::identity: return "identity";
    case Composition::sine: return "sin";
    case Composition::square: return "square";
    case Composition::rational: return "rational";
  }
  return "?";
}

double composition_derivative(Composition g, int m, double x) {
  switch (g) {
    case Composition::identity:
      return m == 0 ? x : (m == 1 ? 1.0 : 0.0);
    case Composition::sine:
      switch (m % 4) {
        case 0: return std::sin(x);
        case 1: return std::cos(x);
        case 2: return -std::sin(x);
        default: return -std::cos(x);
      }
    case Composition::square:
      return m == 0 ? x * x : (m == 1 ? 2.0 * x : (m == 2 ? 2.0 : 0.0));
    case Composition::rational: {
      // x / (1 + x^2) = Re 1/(x - i)
      double factorial = 1.0;
      for (int j = 2; j <= m; ++j) factorial *= j;
      const Complex d = (m % 2 == 0 ? 1.0 : -1.0) * factorial / std::pow(Complex(x, -1.0), m + 1);
      return d.real();
    }
  }
  return 0.0;
}

EstimateSample composition_ratio(const SpectralField& f, double s, Composition g) {
  const int points = default_points(f.cutoff());
  PhysicalGrid grid = to_physical(f, points);
  double sup = 0.0;
  for (auto& v : grid.values) {
    sup = std::max(sup, std::abs(v.real()));
    v = Complex(composition_derivative(g, 0, v.real()), 0.0);
  }
  const SpectralField composed = from_physical(grid, (points + 1) / 2);
  const int order = static_cast<int>(std::ceil(s));
  double cnorm = 0.0;
  constexpr int kSamples = 2001;
  for (int m = 1; m <= order + 1; ++m) {
    for (int i = 0; i < kSamples; ++i) {
      const double x = sup * (2.0 * i / (kSamples - 1) - 1.0);
      cnorm = std::max(cnorm, std::abs(composition_derivative(g, m, x)));
    }
  }
  const double lhs = hs_norm(composed, s);
  const double rhs = cnorm * std::pow(1.0 + sup, order) * hs_norm(f, s);
  return make_sample(lhs, rhs);
}

EstimateSample interpolation_ratio(const SpectralField& f, double s) {
  const double half_dim = 0.5 * f.dim();
  if (!(s > half_dim)) throw Error("interpolation inequality needs s > d/2");
  const double lhs = lp_norm(gradient(f), std::numeric_limits<double>::infinity());
  double rhs = hs_norm(f, s);
  if (s <= half_dim + 1.0) {
    const double theta = 0.5 * (s - half_dim);
    rhs = std::pow(rhs, theta) * std::pow(hs_norm(f, s + 1.0), 1.0 - theta);
  }
  return make_sample(lhs, rhs);
}

EstimateReport verify_commutator_estimate(const RandomFieldSpec& spec, double s,
                                          const CommutatorExponents& exps, std::size_t samples) {
  if (!(s > 0.0)) throw Error("commutator estimate needs s > 0");
  exps.validate();
  return run_campaign("commutator", spec, samples, [&](std::uint64_t seed, int n) {
    const SpectralField f = random_field(with(spec, n, derive_seed(seed, 0)));
    const SpectralField g = random_field(with(spec, n, derive_seed(seed, 1)));
    return commutator_ratio(f, g, s, exps);
  });
}

EstimateReport verify_product_estimate(const RandomFieldSpec& spec, double s,
                                       const ProductExponents& exps, std::size_t samples) {
  if (!(s > 0.0)) throw Error("product estimate needs s > 0");
  exps.validate();
  return run_campaign("product", spec, samples, [&](std::uint64_t seed, int n) {
    const SpectralField f = random_field(with(spec, n, derive_seed(seed, 0)));
    const SpectralField g = random_field(with(spec, n, derive_seed(seed, 1)));
    return product_ratio(f, g, s, exps);
  });
}

EstimateReport verify_composition_estimate(const RandomFieldSpec& spec, double s, Composition g,
                                           std::size_t samples) {
  if (!(s > 0.0)) throw Error("composition estimate needs s > 0");
  return run_campaign("composition:" + composition_name(g), spec, samples, [&](std::uint64_t seed, int n) {
    SpectralField f = random_field(with(spec, n, derive_seed(seed, 0)));
    f[f.modes().zero_index()] = 0.0;  // keep ||f||_inf moderate so C^k(G') stays informative
    return composition_ratio(f, s, g);
  });
}

EstimateReport verify_interpolation_inequality(const RandomFieldSpec& spec, double s, std::size_t samples) {
  if (!(s > 0.5 * spec.dim)) throw Error("interpolation inequality needs s > d/2");
  return run_campaign("interpolation", spec, samples, [&](std::uint64_t seed, int n) {
    return interpolation_ratio(random_field(with(spec, n, derive_seed(seed, 0))), s);
  });
}

double UniquenessReport::ratio_at(double t) const {
  if (times.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::size_t best = 0;
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (std::abs(times[i] - t) < std::abs(times[best] - t)) best = i;
  }
  return error[best] / error_half[best];
}

SimState unit_perturbation(const SimState& like, std::uint64_t seed) {
  const int dim = like.dim();
  RandomFieldSpec spec{dim, 3, 0.0, seed};
  SimState p = SimState::zero(dim, like.cutoff());
  VectorField v = random_solenoidal(with(spec, 3, derive_seed(seed, 0)));
  v *= 1.0 / hs_norm(v, 0.0);
  p.v = project(v, like.cutoff());
  SpectralField w = random_field(with(spec, 3, derive_seed(seed, 1)));
  SpectralField b = random_field(with(spec, 3, derive_seed(seed, 2)));
  p.omega = project((1.0 / hs_norm(w, 0.0)) * w, like.cutoff());
  p.b = project((1.0 / hs_norm(b, 0.0)) * b, like.cutoff());
  p.t = like.t;
  return p;
}

namespace {

SimState perturbed(const SimState& base, const SimState& direction, double amplitude) {
  if (amplitude == 0.0) return base;
  SimState out = base;
  for (std::size_t j = 0; j < out.v.components.size(); ++j) {
    out.v[j] += amplitude * direction.v[j];
  }
  out.omega += amplitude * direction.omega;
  out.b += amplitude * direction.b;
  out.symmetrize();
  return out;
}

double state_distance_sq(const SimState& a, const SimState& b) {
  double e = l2_distance_sq(a.omega, b.omega) + l2_distance_sq(a.b, b.b);
  for (std::size_t j = 0; j < a.v.components.size(); ++j) e += l2_distance_sq(a.v[j], b.v[j]);
  return e;
}

}  // namespace

UniquenessReport uniqueness_probe(const SimState& state0, double amplitude, const ModelParams& params,
                                  const CutoffProfile& profile, const IntegratorConfig& config,
                                  std::uint64_t seed) {
  const SimState direction = unit_perturbation(state0, seed);
  const SimState full0 = perturbed(state0, direction, amplitude);
  const SimState half0 = perturbed(state0, direction, 0.5 * amplitude);
  for (const SimState* st : {&full0, &half0}) {
    if (locate_extrema(st->b, default_points(st->cutoff())).min.value <= 0.0 ||
        locate_extrema(st->omega, default_points(st->cutoff())).min.value <= 0.0) {
      throw Error("uniqueness_probe: perturbed data leaves the admissible set (b > 0, omega > 0)");
    }
  }

  std::vector<Trajectory> runs(3);
  const SimState* starts[3] = {&state0, &full0, &half0};
  for (std::size_t i = 0; i < 3; ++i) runs[i] = integrate(*starts[i], config, params, profile);

  UniquenessReport report;
  std::size_t count = runs[0].samples.size();
  for (const auto& r : runs) {
    count = std::min(count, r.samples.size());
    if (r.status != Trajectory::Status::completed) {
      report.complete = false;
      if (report.message.empty()) report.message = r.message;
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    const SimState& base = runs[0].samples[i];
    report.times.push_back(base.t);
    report.error.push_back(state_distance_sq(base, runs[1].samples[i]));
    report.error_half.push_back(state_distance_sq(base, runs[2].samples[i]));
  }
  if (!report.error.empty() && report.error.front() > 0.0) {
    const double e0 = report.error.front();
    const double t0 = report.times.front();
    double growth = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < count; ++i) {
      growth = std::max(growth, std::log(report.error[i] / e0) / (report.times[i] - t0));
    }
    report.fitted_growth = count > 1 ? growth : 0.0;
  }
  return report;
}

}  // namespace kolmo
