#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "kolmo/galerkin.hpp"

namespace kolmo {

enum class Method { rk4, rk45 };

struct IntegratorConfig {
  Method method = Method::rk45;
  double dt = 1e-3;  // fixed step (rk4) or initial step (rk45)
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  double t_end = 1.0;
  /// Samples are recorded at multiples of this interval (and at t_end);
  /// zero records every accepted step.
  double sample_interval = 0.0;
  int reproject_every = 1;
  int monitor_every = 1;
  /// Abort once ||(v, omega, b)||_{H^s}^2 exceeds this multiple of 2 X0 + 1.
  double blowup_factor = 10.0;
  std::size_t max_steps = 50'000'000;

  void validate() const;
};

/// One classical RK4 step of size h followed by conjugate symmetrization and,
/// when the relative divergence exceeds 1e-11, a Leray re-projection.
/// Throws IntegrationFailure on non-finite coefficients.
SimState step(const SimState& state, double h, const ModelParams& params,
              const CutoffProfile& profile);

class IntegrationFailure : public Error {
 public:
  using Error::Error;
};

struct Trajectory {
  enum class Status { completed, step_failure, monitor_abort };

  std::vector<SimState> samples;
  Status status = Status::completed;
  std::string message;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;
};

/// Optional per-sample callback; returning a non-empty string aborts the run
/// with that message and Status::monitor_abort.
using SampleMonitor = std::function<std::string(const SimState&)>;

Trajectory integrate(const SimState& state0, const IntegratorConfig& config,
                     const ModelParams& params, const CutoffProfile& profile,
                     const SampleMonitor& monitor = {});

}  // namespace kolmo
