#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "kolmo/commands.hpp"

namespace {

// --set section.key=value overrides are appended to the file text, so later
// assignments win exactly as they would in the file itself.
kolmo::RunConfig read_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw kolmo::ConfigError("cannot read config " + path);
  std::ostringstream text;
  text << in.rdbuf() << '\n';
  for (const auto& o : overrides) {
    const auto dot = o.find('.');
    const auto eq = o.find('=');
    if (dot == std::string::npos || eq == std::string::npos || dot > eq) {
      throw kolmo::ConfigError("--set expects section.key=value, got '" + o + "'");
    }
    text << '[' << o.substr(0, dot) << "]\n" << o.substr(dot + 1, eq - dot - 1) << " = " << o.substr(eq + 1) << '\n';
  }
  return kolmo::parse_config(text.str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fourier-Galerkin simulator for the Kolmogorov two-equation turbulence model"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;

  auto* simulate = app.add_subcommand("simulate", "integrate the truncated system and write snapshots and diagnostics");
  simulate->add_option("config", config_path, "run configuration")->required();
  simulate->add_option("--set", overrides, "override a config entry, section.key=value");

  std::string csv_path;
  auto* existence = app.add_subcommand("existence-time", "print the existence-time certificate for the initial data");
  existence->add_option("config", config_path, "run configuration")->required();
  existence->add_option("--set", overrides, "override a config entry, section.key=value");
  existence->add_option("--csv", csv_path, "also write the certificate as CSV");

  kolmo::VerifyOptions vo;
  double decay = -1.0;
  std::string verify_out;
  auto* verify = app.add_subcommand("verify", "run an inequality campaign and write its report");
  verify->add_option("name", vo.name, "commutator | decomposition | product | composition | interpolation")->required();
  verify->add_option("--samples", vo.samples, "number of random samples");
  verify->add_option("--seed", vo.seed, "campaign seed");
  verify->add_option("--dim", vo.dim, "torus dimension");
  verify->add_option("--cutoff", vo.cutoff, "base cutoff n (the campaign also runs 2n)");
  verify->add_option("--s", vo.s, "regularity index");
  verify->add_option("--decay", decay, "spectral decay exponent (default s + d/2 + 1.5)");
  verify->add_option("--g", vo.composition, "composition function: identity, sin, square, rational");
  verify->add_option("--out", verify_out, "report file (default: stdout)");

  std::string snapshot_path;
  double norm_s = 2.0;
  auto* norms = app.add_subcommand("norms", "print norms and extrema of a snapshot");
  norms->add_option("snapshot", snapshot_path, "snapshot file")->required();
  norms->add_option("--s", norm_s, "Sobolev index");

  kolmo::ConvergenceOptions co;
  auto* convergence = app.add_subcommand("convergence", "compare solutions at cutoffs n, 2n, 4n, ...");
  convergence->add_option("config", config_path, "run configuration")->required();
  convergence->add_option("--set", overrides, "override a config entry, section.key=value");
  convergence->add_option("--levels", co.levels, "number of cutoffs");
  convergence->add_option("--sprime", co.s_primes, "Sobolev indices s' < s for the distances");

  auto* print = app.add_subcommand("print-config", "print a configuration in canonical form");
  print->add_option("config", config_path, "run configuration")->required();
  print->add_option("--set", overrides, "override a config entry, section.key=value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kolmo::kExitOk : kolmo::kExitUsage;
  }

  try {
    if (*simulate) return kolmo::cmd_simulate(read_config(config_path, overrides), std::cout, std::cerr);
    if (*existence) {
      std::optional<std::filesystem::path> csv;
      if (!csv_path.empty()) csv = csv_path;
      return kolmo::cmd_existence_time(read_config(config_path, overrides), std::cout, std::cerr, csv);
    }
    if (*verify) {
      if (decay >= 0.0) vo.decay = decay;
      if (!verify_out.empty()) vo.output = verify_out;
      return kolmo::cmd_verify(vo, std::cout, std::cerr);
    }
    if (*norms) return kolmo::cmd_norms(snapshot_path, norm_s, std::cout, std::cerr);
    if (*convergence) return kolmo::cmd_convergence(read_config(config_path, overrides), co, std::cout, std::cerr);
    if (*print) {
      const kolmo::RunConfig c = read_config(config_path, overrides);
      std::cout << kolmo::print_config(c);
      return kolmo::kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kolmo::kExitUsage;
  }
  return kolmo::kExitUsage;
}
