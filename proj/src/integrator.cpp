#include "kolmo/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kolmo {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0)) throw Error("integrator: dt must be positive");
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) throw Error("integrator: tolerances must be positive");
  if (!(t_end >= 0.0)) throw Error("integrator: t_end must be nonnegative");
  if (!(sample_interval >= 0.0)) throw Error("integrator: sample_interval must be nonnegative");
  if (reproject_every < 1 || monitor_every < 1) throw Error("integrator: cadences must be positive");
}

namespace {

using Flat = std::vector<Complex>;

Flat pack(const SimState& s) {
  Flat y;
  y.reserve((s.v.components.size() + 2) * s.omega.size());
  for (const auto& c : s.v.components) y.insert(y.end(), c.coeffs().begin(), c.coeffs().end());
  y.insert(y.end(), s.omega.coeffs().begin(), s.omega.coeffs().end());
  y.insert(y.end(), s.b.coeffs().begin(), s.b.coeffs().end());
  return y;
}

Flat pack(const StateRate& r) {
  Flat y;
  y.reserve((r.dv.components.size() + 2) * r.domega.size());
  for (const auto& c : r.dv.components) y.insert(y.end(), c.coeffs().begin(), c.coeffs().end());
  y.insert(y.end(), r.domega.coeffs().begin(), r.domega.coeffs().end());
  y.insert(y.end(), r.db.coeffs().begin(), r.db.coeffs().end());
  return y;
}

void unpack(const Flat& y, SimState& s) {
  std::size_t at = 0;
  auto fill = [&](SpectralField& f) {
    auto c = f.coeffs();
    std::copy(y.begin() + static_cast<std::ptrdiff_t>(at),
              y.begin() + static_cast<std::ptrdiff_t>(at + c.size()), c.begin());
    at += c.size();
  };
  for (auto& c : s.v.components) fill(c);
  fill(s.omega);
  fill(s.b);
}

class System {
 public:
  System(const SimState& shape, const ModelParams& params, const CutoffProfile& profile)
      : scratch_(shape), params_(params), profile_(profile) {}

  Flat operator()(double t, const Flat& y) {
    unpack(y, scratch_);
    scratch_.t = t;
    return pack(rhs(scratch_, params_, profile_));
  }

 private:
  SimState scratch_;
  const ModelParams& params_;
  const CutoffProfile& profile_;
};

// y + sum_i c_i k_i
Flat combine(const Flat& y, double h, std::initializer_list<std::pair<double, const Flat*>> terms) {
  Flat out = y;
  for (const auto& [c, k] : terms) {
    if (c == 0.0) continue;
    const double hc = h * c;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += hc * (*k)[i];
  }
  return out;
}

bool all_finite(const Flat& y) {
  return std::all_of(y.begin(), y.end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

Flat rk4_step(System& f, double t, const Flat& y, double h) {
  const Flat k1 = f(t, y);
  const Flat k2 = f(t + 0.5 * h, combine(y, h, {{0.5, &k1}}));
  const Flat k3 = f(t + 0.5 * h, combine(y, h, {{0.5, &k2}}));
  const Flat k4 = f(t + h, combine(y, h, {{1.0, &k3}}));
  return combine(y, h, {{1.0 / 6, &k1}, {1.0 / 3, &k2}, {1.0 / 3, &k3}, {1.0 / 6, &k4}});
}

// Dormand-Prince 5(4); returns the fifth-order solution and the error estimate.
struct EmbeddedResult {
  Flat y;
  Flat error;
};

EmbeddedResult dopri_step(System& f, double t, const Flat& y, double h) {
  const Flat k1 = f(t, y);
  const Flat k2 = f(t + h / 5, combine(y, h, {{1.0 / 5, &k1}}));
  const Flat k3 = f(t + 3 * h / 10, combine(y, h, {{3.0 / 40, &k1}, {9.0 / 40, &k2}}));
  const Flat k4 = f(t + 4 * h / 5, combine(y, h, {{44.0 / 45, &k1}, {-56.0 / 15, &k2}, {32.0 / 9, &k3}}));
  const Flat k5 = f(t + 8 * h / 9, combine(y, h,
                                           {{19372.0 / 6561, &k1},
                                            {-25360.0 / 2187, &k2},
                                            {64448.0 / 6561, &k3},
                                            {-212.0 / 729, &k4}}));
  const Flat k6 = f(t + h, combine(y, h,
                                   {{9017.0 / 3168, &k1},
                                    {-355.0 / 33, &k2},
                                    {46732.0 / 5247, &k3},
                                    {49.0 / 176, &k4},
                                    {-5103.0 / 18656, &k5}}));
  Flat y5 = combine(y, h,
                    {{35.0 / 384, &k1},
                     {500.0 / 1113, &k3},
                     {125.0 / 192, &k4},
                     {-2187.0 / 6784, &k5},
                     {11.0 / 84, &k6}});
  const Flat k7 = f(t + h, y5);
  // difference between fifth- and fourth-order weights
  constexpr double e1 = 35.0 / 384 - 5179.0 / 57600;
  constexpr double e3 = 500.0 / 1113 - 7571.0 / 16695;
  constexpr double e4 = 125.0 / 192 - 393.0 / 640;
  constexpr double e5 = -2187.0 / 6784 + 92097.0 / 339200;
  constexpr double e6 = 11.0 / 84 - 187.0 / 2100;
  constexpr double e7 = -1.0 / 40;
  Flat err(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    err[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
  }
  return {std::move(y5), std::move(err)};
}

double error_norm(const Flat& err, const Flat& y0, const Flat& y1, double atol, double rtol) {
  double worst = 0.0;
  for (std::size_t i = 0; i < err.size(); ++i) {
    const double scale = atol + rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
    worst = std::max(worst, std::abs(err[i]) / scale);
  }
  return worst;
}

void restore_structure(SimState& s, bool reproject) {
  s.symmetrize();
  if (reproject && divergence_residual(s.v) > 1e-11) {
    s.v = leray_project(s.v);
    for (auto& c : s.v.components) c.symmetrize();
  }
}

double triple_norm_sq(const SimState& s, double reg) {
  return hs_norm_sq(s.v, reg) + hs_norm_sq(s.omega, reg) + hs_norm_sq(s.b, reg);
}

}  // namespace

SimState step(const SimState& state, double h, const ModelParams& params,
              const CutoffProfile& profile) {
  if (!(h > 0.0)) throw Error("step: step size must be positive");
  System f(state, params, profile);
  const Flat y1 = rk4_step(f, state.t, pack(state), h);
  if (!all_finite(y1)) throw IntegrationFailure("step: non-finite coefficients at t = " + std::to_string(state.t));
  SimState next = state;
  unpack(y1, next);
  next.t = state.t + h;
  restore_structure(next, true);
  return next;
}

Trajectory integrate(const SimState& state0, const IntegratorConfig& config,
                     const ModelParams& params, const CutoffProfile& profile,
                     const SampleMonitor& monitor) {
  config.validate();
  state0.check_shapes();
  Trajectory traj;
  traj.samples.push_back(state0);

  const double t0 = state0.t;
  const double t_end = t0 + config.t_end;
  const double ceiling = config.blowup_factor * (2.0 * triple_norm_sq(state0, params.s) + 1.0);
  const double eps_t = 1e-12 * std::max(1.0, std::abs(t_end));

  if (monitor) {
    if (auto msg = monitor(state0); !msg.empty()) {
      traj.status = Trajectory::Status::monitor_abort;
      traj.message = msg;
      return traj;
    }
  }

  System f(state0, params, profile);
  SimState current = state0;
  Flat y = pack(current);
  double t = t0;
  double h = config.dt;
  std::size_t sample_index = 1;
  auto next_sample_time = [&]() {
    if (config.sample_interval <= 0.0) return t_end;
    return std::min(t_end, t0 + static_cast<double>(sample_index) * config.sample_interval);
  };

  while (t_end - t > eps_t) {
    if (traj.accepted_steps + traj.rejected_steps >= config.max_steps) {
      traj.status = Trajectory::Status::step_failure;
      traj.message = "step budget exhausted at t = " + std::to_string(t);
      break;
    }
    const double target = next_sample_time();
    const double h_try = std::min(h, target - t);
    const bool lands = h_try >= target - t - eps_t;

    Flat y_new;
    double h_next = h;
    if (config.method == Method::rk4) {
      y_new = rk4_step(f, t, y, h_try);
    } else {
      EmbeddedResult r = dopri_step(f, t, y, h_try);
      const double err = error_norm(r.error, y, r.y, config.abs_tol, config.rel_tol);
      if (!std::isfinite(err)) {
        traj.status = Trajectory::Status::step_failure;
        traj.message = "non-finite error estimate at t = " + std::to_string(t);
        break;
      }
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      if (err > 1.0) {
        ++traj.rejected_steps;
        h = h_try * factor;
        if (h < 1e-14 * std::max(1.0, std::abs(t))) {
          traj.status = Trajectory::Status::step_failure;
          traj.message = "step size underflow at t = " + std::to_string(t);
          break;
        }
        continue;
      }
      y_new = std::move(r.y);
      // keep the controller's proposal when the step was shortened to hit a sample
      h_next = lands && h_try < h ? h : h_try * factor;
    }

    if (!all_finite(y_new)) {
      traj.status = Trajectory::Status::step_failure;
      traj.message = "non-finite coefficients after step at t = " + std::to_string(t);
      break;
    }

    ++traj.accepted_steps;
    t = lands ? target : t + h_try;
    unpack(y_new, current);
    current.t = t;
    restore_structure(current, traj.accepted_steps % static_cast<std::size_t>(config.reproject_every) == 0);
    y = pack(current);
    h = h_next;

    const bool sample_now = lands || config.sample_interval <= 0.0;
    if (traj.accepted_steps % static_cast<std::size_t>(config.monitor_every) == 0 || sample_now) {
      const double norm_sq = triple_norm_sq(current, params.s);
      if (!(norm_sq <= ceiling)) {
        traj.samples.push_back(current);
        std::ostringstream msg;
        msg << "H^s norm squared " << norm_sq << " exceeds " << config.blowup_factor
            << " x (2 X0 + 1) = " << ceiling << " at t = " << t;
        traj.status = Trajectory::Status::monitor_abort;
        traj.message = msg.str();
        return traj;
      }
    }
    if (sample_now) {
      traj.samples.push_back(current);
      if (lands) ++sample_index;
      if (monitor) {
        if (auto msg = monitor(current); !msg.empty()) {
          traj.status = Trajectory::Status::monitor_abort;
          traj.message = msg;
          return traj;
        }
      }
    }
  }

  if (traj.status == Trajectory::Status::step_failure && traj.samples.back().t != current.t) {
    traj.samples.push_back(current);
  }
  return traj;
}

}  // namespace kolmo
