#pragma once

// The command implementations behind the kolmo tool.  Each returns the
// process exit status: 0 success, 1 usage/config/I/O error, 2 monitor abort
// or invariant failure.

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kolmo/config.hpp"
#include "kolmo/estimate_lab.hpp"

namespace kolmo {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitMonitor = 2;

/// Initial data described by the config.  Throws ConfigError on bad input.
SimState build_initial_state(const RunConfig& config);

/// Measured extremes of omega_0 and b_0 (polished grid search).
InitialBounds measure_bounds(const SimState& state, double alpha);

/// Violated well-posedness hypotheses on the initial data, one message each:
/// div v_0 = 0, min b_0 > 0, min omega_0 > 0.
std::vector<std::string> hypothesis_violations(const SimState& state);

struct Certificate {
  int dim = 2;
  double s = 2.0;
  double beta = 2.0;
  double x0 = 0.0;
  double c_tilde = 1.0;
  double gamma = 0.0;
  double existence_time = 0.0;
  double uniform_bound = 1.0;
  std::vector<std::string> warnings;
};

Certificate existence_certificate(const RunConfig& config, const SimState& state);
std::string certificate_csv(const Certificate& cert);
Certificate parse_certificate_csv(const std::string& text);

struct SimulationRun {
  ModelParams params;
  CutoffProfile profile;
  Trajectory trajectory;
};

/// Integrates from `state0` with bounds measured from it, applying the
/// extrema monitor when the config asks for it.
SimulationRun run_simulation(const RunConfig& config, const SimState& state0);

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_existence_time(const RunConfig& config, std::ostream& out, std::ostream& err,
                       const std::optional<std::filesystem::path>& csv_path = std::nullopt);

struct VerifyOptions {
  std::string name;
  std::size_t samples = 200;
  std::uint64_t seed = 7;
  int dim = 2;
  int cutoff = 8;
  double s = 2.0;
  std::optional<double> decay;  // default s + d/2 + 1.5
  std::string composition = "sin";
  std::optional<std::filesystem::path> output;
};

const std::vector<std::string>& verify_names();
int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

int cmd_norms(const std::filesystem::path& snapshot, double s, std::ostream& out, std::ostream& err);

struct ConvergenceOptions {
  int levels = 3;                  // cutoffs n, 2n, 4n, ...
  std::vector<double> s_primes;    // default {s - 1}
};

struct ConvergenceResult {
  std::vector<int> cutoffs;
  std::vector<double> s_primes;
  /// distances[j][i]: H^{s'_j} distance between levels i and i + 1 at t_end
  std::vector<std::vector<double>> distances;
};

ConvergenceResult run_convergence(const RunConfig& config, const ConvergenceOptions& options);
int cmd_convergence(const RunConfig& config, const ConvergenceOptions& options, std::ostream& out,
                    std::ostream& err);

}  // namespace kolmo
