#include "kolmo/galerkin.hpp"

#include <cmath>
#include <string>

#include "kolmo/fft.hpp"

namespace kolmo {

SimState SimState::zero(int dim, int cutoff) {
  return SimState{VectorField(dim, cutoff), SpectralField(dim, cutoff), SpectralField(dim, cutoff), 0.0};
}

void SimState::check_shapes() const {
  if (static_cast<int>(v.components.size()) != dim()) {
    throw DimensionMismatch("state: velocity has " + std::to_string(v.components.size()) +
                            " components in dimension " + std::to_string(dim()));
  }
  for (const auto& c : v.components) {
    if (!(c.modes() == omega.modes())) throw DimensionMismatch("state: velocity shape differs from omega");
  }
  if (!(b.modes() == omega.modes())) throw DimensionMismatch("state: b shape differs from omega");
}

void SimState::symmetrize() {
  for (auto& c : v.components) c.symmetrize();
  omega.symmetrize();
  b.symmetrize();
}

double SimState::realness_residual() const {
  double worst = std::max(kolmo::realness_residual(omega), kolmo::realness_residual(b));
  for (const auto& c : v.components) worst = std::max(worst, kolmo::realness_residual(c));
  return worst;
}

void ModelParams::validate(int dim) const {
  if (dim < 2) throw Error("model: dimension must be at least 2");
  if (!(s > 0.5 * dim)) {
    throw Error("model: regularity s = " + std::to_string(s) + " must exceed d/2 = " +
                std::to_string(0.5 * dim));
  }
  if (!(alpha > 0.0)) throw Error("model: alpha must be positive");
  if (alpha != bounds.alpha) throw Error("model: alpha disagrees with the initial bounds");
  if (oversample < 2) throw Error("model: oversampling factor must be at least 2");
  bounds.validate();
}

int ModelParams::grid_points(int cutoff) const {
  const int need = oversample * (2 * cutoff - 1);
  int best = 0;
  for (long long p2 = 1; best == 0 || p2 < best; p2 *= 2) {
    long long m = p2;
    while (m < need) m *= 3;
    if (best == 0 || m < best) best = static_cast<int>(m);
  }
  return best;
}

namespace {

// Real fields on a common grid.  Two real fields travel through one complex
// FFT as f + i g; the split on the way back uses conjugate symmetry.
class RealGrids {
 public:
  RealGrids(const std::shared_ptr<const ModeSet>& modes, int points)
      : modes_(modes),
        dim_(modes->dim()),
        points_(points),
        total_(grid_size(modes->dim(), points)),
        offsets_(fft::mode_offsets(*modes, points)) {}

  std::size_t total() const { return total_; }

  std::vector<std::vector<double>> to_grid(const std::vector<const SpectralField*>& fields) const {
    std::vector<std::vector<double>> out(fields.size());
    std::vector<Complex> work(total_);
    for (std::size_t p = 0; p < fields.size(); p += 2) {
      std::fill(work.begin(), work.end(), Complex{});
      const SpectralField& f = *fields[p];
      for (std::size_t i = 0; i < offsets_.size(); ++i) work[offsets_[i]] += f[i];
      const bool paired = p + 1 < fields.size();
      if (paired) {
        const SpectralField& g = *fields[p + 1];
        for (std::size_t i = 0; i < offsets_.size(); ++i) work[offsets_[i]] += Complex(0.0, 1.0) * g[i];
      }
      fft::transform(work, dim_, points_, fft::Direction::backward);
      out[p].resize(total_);
      for (std::size_t i = 0; i < total_; ++i) out[p][i] = work[i].real();
      if (paired) {
        out[p + 1].resize(total_);
        for (std::size_t i = 0; i < total_; ++i) out[p + 1][i] = work[i].imag();
      }
    }
    return out;
  }

  std::vector<SpectralField> to_spectral(const std::vector<const std::vector<double>*>& grids) const {
    std::vector<SpectralField> out;
    out.reserve(grids.size());
    std::vector<Complex> work(total_);
    const double scale = 1.0 / static_cast<double>(total_);
    for (std::size_t p = 0; p < grids.size(); p += 2) {
      const bool paired = p + 1 < grids.size();
      const auto& f = *grids[p];
      if (paired) {
        const auto& g = *grids[p + 1];
        for (std::size_t i = 0; i < total_; ++i) work[i] = Complex(f[i], g[i]);
      } else {
        for (std::size_t i = 0; i < total_; ++i) work[i] = Complex(f[i], 0.0);
      }
      fft::transform(work, dim_, points_, fft::Direction::forward);
      SpectralField a(modes_), b(modes_);
      for (std::size_t i = 0; i < offsets_.size(); ++i) {
        const Complex h = work[offsets_[i]] * scale;
        const Complex hm = std::conj(work[offsets_[modes_->mirror(i)]] * scale);
        a[i] = 0.5 * (h + hm);
        if (paired) b[i] = Complex(0.0, -0.5) * (h - hm);
      }
      out.push_back(std::move(a));
      if (paired) out.push_back(std::move(b));
    }
    return out;
  }

 private:
  std::shared_ptr<const ModeSet> modes_;
  int dim_;
  int points_;
  std::size_t total_;
  std::vector<std::size_t> offsets_;
};

struct Assembly {
  VectorField forcing;  // -P_n(v.grad v) + div P_n(nu D v)
  SpectralField domega;
  SpectralField db;
};

// All nonlinear terms evaluated on one oversampled grid.
Assembly assemble(const SimState& state, const ModelParams& params, const CutoffProfile& profile,
                  bool scalars) {
  state.check_shapes();
  const int d = state.dim();
  const std::size_t du = static_cast<std::size_t>(d);
  const int n = state.cutoff();
  const auto& modes = state.omega.modes_ptr();
  const RealGrids grids(modes, params.grid_points(n));
  const std::size_t total = grids.total();

  // Inputs: v_j, G_ij = d_i v_j, omega, d_i omega, b, d_i b.
  std::vector<SpectralField> inputs;
  inputs.reserve(du + du * du + 2 + 2 * du);
  for (std::size_t j = 0; j < du; ++j) inputs.push_back(state.v[j]);
  for (int i = 0; i < d; ++i)
    for (std::size_t j = 0; j < du; ++j) inputs.push_back(differentiate(state.v[j], i));
  inputs.push_back(state.omega);
  for (int i = 0; i < d; ++i) inputs.push_back(differentiate(state.omega, i));
  inputs.push_back(state.b);
  for (int i = 0; i < d; ++i) inputs.push_back(differentiate(state.b, i));

  std::vector<const SpectralField*> ptrs;
  for (const auto& f : inputs) ptrs.push_back(&f);
  const auto g = grids.to_grid(ptrs);

  auto vel = [&](std::size_t j) -> const std::vector<double>& { return g[j]; };
  auto grad_v = [&](std::size_t i, std::size_t j) -> const std::vector<double>& {
    return g[du + i * du + j];
  };
  const std::size_t w0 = du + du * du;
  const auto& w = g[w0];
  auto grad_w = [&](std::size_t i) -> const std::vector<double>& { return g[w0 + 1 + i]; };
  const std::size_t b0 = w0 + 1 + du;
  const auto& bg = g[b0];
  auto grad_b = [&](std::size_t i) -> const std::vector<double>& { return g[b0 + 1 + i]; };

  const TimeProfiles prof = profile.profiles(state.t);
  std::vector<double> nu(total);
  for (std::size_t x = 0; x < total; ++x) {
    nu[x] = profile.phi_b(bg[x], prof) / profile.psi_omega(w[x], prof);
  }

  // Outputs: advection of v (d), nu D_ij for i <= j, then the scalar terms.
  std::vector<std::vector<double>> out;
  for (std::size_t j = 0; j < du; ++j) {
    std::vector<double> a(total, 0.0);
    for (std::size_t i = 0; i < du; ++i) {
      const auto& vi = vel(i);
      const auto& gij = grad_v(i, j);
      for (std::size_t x = 0; x < total; ++x) a[x] += vi[x] * gij[x];
    }
    out.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < du; ++i) {
    for (std::size_t j = i; j < du; ++j) {
      std::vector<double> tau(total);
      const auto& gij = grad_v(i, j);
      const auto& gji = grad_v(j, i);
      for (std::size_t x = 0; x < total; ++x) tau[x] = nu[x] * 0.5 * (gij[x] + gji[x]);
      out.push_back(std::move(tau));
    }
  }
  const std::size_t scalar0 = out.size();
  if (scalars) {
    std::vector<double> adv_w(total, 0.0), adv_b(total, 0.0), w2(total), bw(total), prod(total, 0.0);
    for (std::size_t i = 0; i < du; ++i) {
      const auto& vi = vel(i);
      const auto& gw = grad_w(i);
      const auto& gb = grad_b(i);
      for (std::size_t x = 0; x < total; ++x) {
        adv_w[x] += vi[x] * gw[x];
        adv_b[x] += vi[x] * gb[x];
      }
    }
    for (std::size_t x = 0; x < total; ++x) {
      w2[x] = w[x] * w[x];
      bw[x] = bg[x] * w[x];
    }
    for (std::size_t i = 0; i < du; ++i) {
      for (std::size_t j = 0; j < du; ++j) {
        const auto& gij = grad_v(i, j);
        const auto& gji = grad_v(j, i);
        for (std::size_t x = 0; x < total; ++x) {
          const double dij = 0.5 * (gij[x] + gji[x]);
          prod[x] += dij * dij;
        }
      }
    }
    for (std::size_t x = 0; x < total; ++x) prod[x] *= nu[x];
    out.push_back(std::move(adv_w));
    out.push_back(std::move(adv_b));
    out.push_back(std::move(w2));
    out.push_back(std::move(bw));
    out.push_back(std::move(prod));
    for (std::size_t i = 0; i < du; ++i) {
      std::vector<double> fw(total), fb(total);
      const auto& gw = grad_w(i);
      const auto& gb = grad_b(i);
      for (std::size_t x = 0; x < total; ++x) {
        fw[x] = nu[x] * gw[x];
        fb[x] = nu[x] * gb[x];
      }
      out.push_back(std::move(fw));
      out.push_back(std::move(fb));
    }
  }

  std::vector<const std::vector<double>*> out_ptrs;
  for (const auto& o : out) out_ptrs.push_back(&o);
  auto spec = grids.to_spectral(out_ptrs);

  Assembly result;
  // forcing_j = -adv_j + sum_i d_i tau_ij
  std::size_t tau_at = du;
  std::vector<std::size_t> tau_index(du * du);
  for (std::size_t i = 0; i < du; ++i) {
    for (std::size_t j = i; j < du; ++j) {
      tau_index[i * du + j] = tau_at;
      tau_index[j * du + i] = tau_at;
      ++tau_at;
    }
  }
  for (std::size_t j = 0; j < du; ++j) {
    SpectralField f = -spec[j];
    for (std::size_t i = 0; i < du; ++i) f += differentiate(spec[tau_index[i * du + j]], static_cast<int>(i));
    f.set_real(true);
    result.forcing.components.push_back(std::move(f));
  }

  if (scalars) {
    const auto& adv_w = spec[scalar0];
    const auto& adv_b = spec[scalar0 + 1];
    const auto& w2 = spec[scalar0 + 2];
    const auto& bw = spec[scalar0 + 3];
    const auto& prod = spec[scalar0 + 4];
    SpectralField dw = -adv_w;
    dw -= params.alpha * w2;
    SpectralField db = -adv_b;
    db -= bw;
    db += prod;
    for (std::size_t i = 0; i < du; ++i) {
      dw += differentiate(spec[scalar0 + 5 + 2 * i], static_cast<int>(i));
      db += differentiate(spec[scalar0 + 6 + 2 * i], static_cast<int>(i));
    }
    dw.set_real(true);
    db.set_real(true);
    result.domega = std::move(dw);
    result.db = std::move(db);
  }
  return result;
}

// -Lap p = -div forcing, so grad p_k = k (k . forcing_k) / |k|^2.
VectorField pressure_gradient_from(const VectorField& forcing) {
  const auto& modes = forcing[0].modes();
  const std::size_t d = forcing.components.size();
  VectorField grad(static_cast<int>(d), forcing.cutoff());
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const int nsq = modes.norm_sq(i);
    if (nsq == 0) continue;
    auto w = modes.wave(i);
    Complex dot{};
    for (std::size_t j = 0; j < d; ++j) dot += static_cast<double>(w[j]) * forcing[j][i];
    for (std::size_t j = 0; j < d; ++j) grad[j][i] = static_cast<double>(w[j]) * dot / static_cast<double>(nsq);
  }
  return grad;
}

}  // namespace

VectorField momentum_forcing(const SimState& state, const ModelParams& params,
                             const CutoffProfile& profile) {
  return assemble(state, params, profile, false).forcing;
}

VectorField pressure_gradient(const SimState& state, const ModelParams& params,
                              const CutoffProfile& profile) {
  return pressure_gradient_from(momentum_forcing(state, params, profile));
}

SpectralField pressure(const SimState& state, const ModelParams& params,
                       const CutoffProfile& profile) {
  const VectorField grad = pressure_gradient(state, params, profile);
  const auto& modes = grad[0].modes();
  SpectralField p(grad[0].modes_ptr());
  // grad p_k = 2 pi i k p_k
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const int nsq = modes.norm_sq(i);
    if (nsq == 0) continue;
    auto w = modes.wave(i);
    Complex dot{};
    for (std::size_t j = 0; j < grad.components.size(); ++j) dot += static_cast<double>(w[j]) * grad[j][i];
    p[i] = dot / (Complex(0.0, kTwoPi) * static_cast<double>(nsq));
  }
  return p;
}

StateRate rhs(const SimState& state, const ModelParams& params, const CutoffProfile& profile) {
  Assembly a = assemble(state, params, profile, true);
  StateRate rate;
  rate.dv = a.forcing;
  rate.dv -= pressure_gradient_from(a.forcing);
  rate.domega = std::move(a.domega);
  rate.db = std::move(a.db);
  return rate;
}

VectorField leray_project(const VectorField& f) {
  VectorField out = f;
  const auto& modes = f[0].modes();
  const std::size_t d = f.components.size();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const int nsq = modes.norm_sq(i);
    if (nsq == 0) continue;
    auto w = modes.wave(i);
    Complex dot{};
    for (std::size_t j = 0; j < d; ++j) dot += static_cast<double>(w[j]) * f[j][i];
    for (std::size_t j = 0; j < d; ++j) out[j][i] -= static_cast<double>(w[j]) * dot / static_cast<double>(nsq);
  }
  return out;
}

}  // namespace kolmo
