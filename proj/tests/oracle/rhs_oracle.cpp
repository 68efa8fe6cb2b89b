#include "oracle/rhs_oracle.hpp"

#include "oracle/fields.hpp"

namespace oracle {

kolmo::StateRate dense_rhs(const kolmo::SimState& state, const kolmo::ModelParams& params,
                           const kolmo::CutoffProfile& profile) {
  const int d = state.dim();
  const int n = state.cutoff();
  const int points = params.grid_points(n);

  std::vector<Dense> v;
  for (const auto& c : state.v.components) v.push_back(from_field(c));
  const Dense w = from_field(state.omega);
  const Dense b = from_field(state.b);

  const auto xs = grid_points(d, points);
  const kolmo::TimeProfiles prof = profile.profiles(state.t);
  std::vector<double> nu(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double bx = point_value(b, xs[i]).real();
    const double wx = point_value(w, xs[i]).real();
    nu[i] = profile.phi_b(bx, prof) / profile.psi_omega(wx, prof);
  }
  const Dense nu_hat = box_spectrum(nu, d, points);

  std::vector<std::vector<Dense>> grad_v(static_cast<std::size_t>(d));  // grad_v[i][j] = d_i v_j
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) grad_v[static_cast<std::size_t>(i)].push_back(derivative(v[static_cast<std::size_t>(j)], i));
  auto D = [&](int i, int j) {
    return scale(add(grad_v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                     grad_v[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]),
                 0.5);
  };

  std::vector<Dense> forcing;
  for (int j = 0; j < d; ++j) {
    Dense adv;
    for (int i = 0; i < d; ++i) adv = add(adv, convolve(v[static_cast<std::size_t>(i)], grad_v[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]));
    Dense f = scale(truncate(adv, n), -1.0);
    for (int i = 0; i < d; ++i) f = add(f, derivative(truncate(convolve(nu_hat, D(i, j)), n), i));
    forcing.push_back(f);
  }

  // dv = forcing - grad p with grad p_k = k (k . forcing_k) / |k|^2
  kolmo::StateRate rate;
  std::vector<kolmo::SpectralField> dv;
  for (int j = 0; j < d; ++j) {
    Dense out;
    for (const auto& [k, c] : forcing[static_cast<std::size_t>(j)]) {
      const int ksq = norm_sq(k);
      Complex dot{};
      if (ksq > 0) {
        for (int i = 0; i < d; ++i) {
          const auto it = forcing[static_cast<std::size_t>(i)].find(k);
          if (it != forcing[static_cast<std::size_t>(i)].end()) dot += static_cast<double>(k[static_cast<std::size_t>(i)]) * it->second;
        }
      }
      out[k] = ksq > 0 ? c - static_cast<double>(k[static_cast<std::size_t>(j)]) * dot / static_cast<double>(ksq) : c;
    }
    dv.push_back(to_field(out, d, n));
  }
  rate.dv = kolmo::VectorField(std::move(dv));

  Dense adv_w, adv_b, diff_w, diff_b, dsq;
  for (int i = 0; i < d; ++i) {
    const Dense wi = derivative(w, i);
    const Dense bi = derivative(b, i);
    adv_w = add(adv_w, convolve(v[static_cast<std::size_t>(i)], wi));
    adv_b = add(adv_b, convolve(v[static_cast<std::size_t>(i)], bi));
    diff_w = add(diff_w, derivative(truncate(convolve(nu_hat, wi), n), i));
    diff_b = add(diff_b, derivative(truncate(convolve(nu_hat, bi), n), i));
    for (int j = 0; j < d; ++j) {
      const Dense dij = D(i, j);
      dsq = add(dsq, convolve(dij, dij));
    }
  }
  Dense dw = add(scale(truncate(adv_w, n), -1.0), diff_w);
  dw = add(dw, truncate(convolve(w, w), n), -params.alpha);
  Dense db = add(scale(truncate(adv_b, n), -1.0), diff_b);
  db = add(db, truncate(convolve(b, w), n), -1.0);
  db = add(db, truncate(convolve(nu_hat, dsq), n));
  rate.domega = to_field(dw, d, n);
  rate.db = to_field(db, d, n);
  return rate;
}

}  // namespace oracle
