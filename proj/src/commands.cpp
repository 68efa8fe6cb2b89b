#include "kolmo/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "kolmo/io.hpp"

namespace kolmo {

namespace {

int grid_for(int cutoff) { return 4 * (2 * cutoff - 1); }

std::string snapshot_name(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "snapshot_%06zu.kolm", index);
  return buf;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace

SimState build_initial_state(const RunConfig& config) {
  const InitialSpec& in = config.initial;
  const int d = config.dim;
  const int n = config.cutoff;
  SimState st = SimState::zero(d, n);
  switch (in.preset) {
    case InitialPreset::zero:
      break;
    case InitialPreset::constant:
      st.omega = SpectralField::constant(d, n, in.omega_min);
      st.b = SpectralField::constant(d, n, in.b_min);
      break;
    case InitialPreset::random: {
      AdmissibleDataSpec spec;
      spec.field = {d, n, in.decay, in.seed};
      spec.bandwidth = in.bandwidth;
      spec.velocity_l2 = in.velocity_l2;
      spec.b_spread = in.b_spread;
      spec.bounds = {in.b_min, in.omega_min, in.omega_max, config.alpha};
      try {
        st = random_admissible_state(spec);
      } catch (const Error& e) {
        throw ConfigError(std::string("initial: ") + e.what());
      }
      break;
    }
    case InitialPreset::snapshot: {
      SnapshotOptions opts;
      opts.expected_dim = d;
      st = load_snapshot(in.snapshot, opts);
      const double t = st.t;
      if (st.cutoff() != n) {
        st.v = project(st.v, n);
        st.omega = project(st.omega, n);
        st.b = project(st.b, n);
      }
      st.t = t;
      break;
    }
  }
  return st;
}

InitialBounds measure_bounds(const SimState& state, double alpha) {
  const int points = grid_for(state.cutoff());
  const FieldExtrema w = locate_extrema(state.omega, points);
  const FieldExtrema b = locate_extrema(state.b, points);
  return {b.min.value, w.min.value, w.max.value, alpha};
}

std::vector<std::string> hypothesis_violations(const SimState& state) {
  std::vector<std::string> out;
  const double div = divergence_residual(state.v);
  if (div > 1e-9) out.push_back("hypothesis div v_0 = 0 violated (relative divergence " + format_double(div) + ")");
  const InitialBounds m = measure_bounds(state, 1.0);
  if (!(m.b_min0 > 0.0)) out.push_back("hypothesis min b_0 > 0 violated (min b_0 = " + format_double(m.b_min0) + ")");
  if (!(m.omega_min0 > 0.0)) {
    out.push_back("hypothesis min omega_0 > 0 violated (min omega_0 = " + format_double(m.omega_min0) + ")");
  }
  return out;
}

Certificate existence_certificate(const RunConfig& config, const SimState& state) {
  Certificate c;
  c.dim = config.dim;
  c.s = config.s;
  c.beta = config.beta();
  c.x0 = triple_norm_sq(state, config.s);
  c.c_tilde = config.cmodel.c_tilde;
  c.gamma = config.cmodel.gamma;
  c.existence_time = existence_time(c.x0, c.beta, config.cmodel);
  c.uniform_bound = uniform_bound(c.x0);
  c.warnings = hypothesis_violations(state);
  if (config.beta_override == 0.0 && !beta_in_interpolation_branch(config.s, config.dim)) {
    c.warnings.push_back("s > d/2 + 1: beta formula applied outside the range it was derived for");
  }
  return c;
}

std::string certificate_csv(const Certificate& c) {
  std::ostringstream out;
  out << "d,s,beta,X0,c_tilde,gamma,T,uniform_bound\n"
      << c.dim << ',' << format_double(c.s) << ',' << format_double(c.beta) << ',' << format_double(c.x0) << ','
      << format_double(c.c_tilde) << ',' << format_double(c.gamma) << ',' << format_double(c.existence_time) << ','
      << format_double(c.uniform_bound) << '\n';
  return out.str();
}

Certificate parse_certificate_csv(const std::string& text) {
  const CsvTable t = parse_csv(text);
  if (t.rows.size() != 1) throw Error("certificate csv: expected exactly one row");
  Certificate c;
  c.dim = static_cast<int>(t.column("d")[0]);
  c.s = t.column("s")[0];
  c.beta = t.column("beta")[0];
  c.x0 = t.column("X0")[0];
  c.c_tilde = t.column("c_tilde")[0];
  c.gamma = t.column("gamma")[0];
  c.existence_time = t.column("T")[0];
  c.uniform_bound = t.column("uniform_bound")[0];
  return c;
}

SimulationRun run_simulation(const RunConfig& config, const SimState& state0) {
  ModelParams params;
  params.alpha = config.alpha;
  params.s = config.s;
  params.oversample = config.oversample;
  params.bounds = measure_bounds(state0, config.alpha);
  params.validate(config.dim);
  CutoffProfile profile = CutoffProfile::for_regularity(params.bounds, params.s);

  SampleMonitor monitor;
  if (config.extrema_check) {
    const int points = params.grid_points(state0.cutoff());
    const double tol = config.extrema_tolerance;
    monitor = [&profile, points, tol](const SimState& st) -> std::string {
      const ExtremaCheck c = extrema_monitor(st, profile, points, tol);
      if (c.pass) return {};
      const TimeProfiles p = profile.profiles(st.t);
      std::ostringstream msg;
      msg << std::setprecision(12) << "maximum principle monitor at t = " << st.t << ": omega in [" << c.min_omega
          << ", " << c.max_omega << "], band [" << p.omega_min << ", " << p.omega_max << "]; min b = " << c.min_b
          << ", floor " << p.b_min;
      return msg.str();
    };
  }
  Trajectory traj = integrate(state0, config.integrator, params, profile, monitor);
  return {params, std::move(profile), std::move(traj)};
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    config.validate();
    const SimState state0 = build_initial_state(config);
    if (const auto bad = hypothesis_violations(state0); !bad.empty()) {
      for (const auto& m : bad) err << "error: " << m << '\n';
      return kExitUsage;
    }
    DirectoryLock lock(config.output_dir);
    const SimulationRun run = run_simulation(config, state0);
    const auto& samples = run.trajectory.samples;

    if (config.write_snapshots) {
      for (std::size_t i = 0; i < samples.size(); ++i) save_snapshot(samples[i], config.output_dir / snapshot_name(i));
    }

    EnergyOptions opts;
    opts.s = config.s;
    opts.beta = config.beta();
    opts.cmodel = config.cmodel;
    opts.grid_points = run.params.grid_points(config.cutoff);
    std::vector<EnergyReport> reports;
    double fitted = std::numeric_limits<double>::quiet_NaN();
    std::size_t violations = 0;
    if (samples.size() >= 3) {
      EnergyBalance eb = energy_balance(samples, run.profile, opts);
      fitted = eb.fitted_c;
      violations = eb.violations;
      reports = std::move(eb.reports);
    } else {
      for (const auto& st : samples) {
        reports.push_back(energy_report(st, run.profile, opts));
        reports.back().lhs = std::numeric_limits<double>::quiet_NaN();
      }
    }
    write_diagnostics_csv(reports, config.output_dir / "diagnostics.csv");

    const double x0 = reports.front().triple_sq;
    const double T = existence_time(x0, opts.beta, config.cmodel);
    double max_in_window = 0.0;
    for (const auto& r : reports) {
      if (r.t - samples.front().t <= T) max_in_window = std::max(max_in_window, r.triple_sq);
    }
    const Trajectory& tr = run.trajectory;
    const char* status = tr.status == Trajectory::Status::completed      ? "completed"
                         : tr.status == Trajectory::Status::monitor_abort ? "monitor_abort"
                                                                          : "step_failure";
    std::ostringstream summary;
    summary << "status = " << status << '\n';
    if (!tr.message.empty()) summary << "message = " << tr.message << '\n';
    summary << "t_final = " << format_double(samples.back().t) << '\n'
            << "samples = " << samples.size() << '\n'
            << "accepted_steps = " << tr.accepted_steps << '\n'
            << "rejected_steps = " << tr.rejected_steps << '\n'
            << "X0 = " << format_double(x0) << '\n'
            << "beta = " << format_double(opts.beta) << '\n'
            << "T = " << format_double(T) << '\n'
            << "uniform_bound = " << format_double(uniform_bound(x0)) << '\n'
            << "max_triple_sq_on_[0,T] = " << format_double(max_in_window) << '\n'
            << "uniform_bound_holds = " << (max_in_window <= uniform_bound(x0) ? "true" : "false") << '\n'
            << "fitted_c = " << format_double(fitted) << '\n'
            << "energy_violations = " << violations << '\n'
            << "final_triple_sq = " << format_double(reports.back().triple_sq) << '\n'
            << "final_min_omega = " << format_double(reports.back().min_omega) << '\n'
            << "final_max_omega = " << format_double(reports.back().max_omega) << '\n'
            << "final_min_b = " << format_double(reports.back().min_b) << '\n';
    write_text(config.output_dir / "summary.txt", summary.str());
    out << summary.str();
    if (tr.status != Trajectory::Status::completed) {
      err << "run stopped: " << tr.message << '\n';
      return kExitMonitor;
    }
    return kExitOk;
  });
}

int cmd_existence_time(const RunConfig& config, std::ostream& out, std::ostream& err,
                       const std::optional<std::filesystem::path>& csv_path) {
  return guarded(err, [&] {
    config.validate();
    const SimState state0 = build_initial_state(config);
    const Certificate c = existence_certificate(config, state0);
    out << "d = " << c.dim << '\n'
        << "s = " << format_double(c.s) << '\n'
        << "beta = " << format_double(c.beta) << '\n'
        << "X0 = " << format_double(c.x0) << '\n'
        << "c_tilde = " << format_double(c.c_tilde) << '\n'
        << "gamma = " << format_double(c.gamma) << '\n'
        << "T = " << format_double(c.existence_time) << '\n'
        << "uniform_bound = " << format_double(c.uniform_bound) << '\n';
    for (const auto& w : c.warnings) err << "warning: " << w << '\n';
    if (csv_path) write_text(*csv_path, certificate_csv(c));
    return kExitOk;
  });
}

const std::vector<std::string>& verify_names() {
  static const std::vector<std::string> names = {"commutator", "decomposition", "product", "composition",
                                                 "interpolation"};
  return names;
}

namespace {

using nlohmann::json;

json report_json(const EstimateReport& r) {
  json entries = json::array();
  for (const auto& e : r.entries) entries.push_back({{"lhs", e.lhs}, {"rhs", e.rhs}, {"ratio", e.ratio}});
  return {{"name", r.name},
          {"samples", r.samples},
          {"skipped", r.skipped},
          {"cutoff", r.cutoff},
          {"max_ratio", r.max_ratio},
          {"median_ratio", r.median_ratio},
          {"max_ratio_refined", r.max_ratio_refined},
          {"stability", r.stability},
          {"finite", r.finite},
          {"entries", entries}};
}

struct Check {
  std::string name;
  bool pass;
  double value;
};

json checks_json(const std::vector<Check>& checks) {
  json out = json::array();
  for (const auto& c : checks) out.push_back({{"check", c.name}, {"pass", c.pass}, {"value", c.value}});
  return out;
}

}  // namespace

int cmd_verify(const VerifyOptions& o, std::ostream& out, std::ostream& err) {
  const auto& names = verify_names();
  if (std::find(names.begin(), names.end(), o.name) == names.end()) {
    err << "error: unknown inequality '" << o.name << "'\nusage: kolmo verify <";
    for (std::size_t i = 0; i < names.size(); ++i) err << (i ? "|" : "") << names[i];
    err << "> [--samples N] [--seed S] [--dim D] [--cutoff N] [--s S] [--decay R] [--out FILE]\n";
    return kExitUsage;
  }
  return guarded(err, [&] {
    const RandomFieldSpec spec{o.dim, o.cutoff, o.decay.value_or(o.s + 0.5 * o.dim + 1.5), o.seed};
    json doc;
    doc["parameters"] = {{"name", o.name}, {"samples", o.samples}, {"seed", o.seed},   {"dim", o.dim},
                         {"cutoff", o.cutoff}, {"s", o.s},         {"decay", spec.decay}};
    std::vector<Check> checks;
    const SpectralField one = SpectralField::constant(o.dim, o.cutoff, 1.0);
    const SpectralField probe = random_field(spec);

    if (o.name == "decomposition") {
      double worst = 0.0;
      bool pass = true;
      json rows = json::array();
      for (std::size_t i = 0; i < o.samples; ++i) {
        const SpectralField f = random_field({o.dim, o.cutoff, spec.decay, derive_seed(o.seed, 2 * i)});
        const SpectralField g = random_field({o.dim, o.cutoff, spec.decay, derive_seed(o.seed, 2 * i + 1)});
        const SpectralField c = commutator(f, g, o.s);
        const CommutatorParts parts = commutator_decomposition(f, g, o.s);
        const double residual = hs_norm(parts.sigma1 + parts.sigma2 + parts.sigma3 - c, 0.0);
        const double scale = hs_norm(c, 0.0);
        const double rel = scale > 0.0 ? residual / scale : residual;
        pass = pass && (scale > 0.0 ? rel <= 1e-10 : residual <= 1e-12);
        worst = std::max(worst, rel);
        rows.push_back({{"residual", residual}, {"commutator_norm", scale}});
      }
      doc["entries"] = rows;
      checks.push_back({"decomposition identity (relative residual <= 1e-10)", pass, worst});
      const CommutatorParts flat = commutator_decomposition(one, probe, o.s);
      const double flat_norm = hs_norm(flat.sigma1, 0.0) + hs_norm(flat.sigma2, 0.0) + hs_norm(flat.sigma3, 0.0);
      checks.push_back({"constant f gives zero parts", flat_norm <= 1e-12, flat_norm});
    } else if (o.name == "commutator") {
      const EstimateReport r = verify_commutator_estimate(spec, o.s, {}, o.samples);
      doc["report"] = report_json(r);
      checks.push_back({"ratios finite", r.finite, r.max_ratio});
      const EstimateSample c = commutator_ratio(one, probe, o.s, {});
      checks.push_back({"constant f gives ratio 0", c.ratio <= 1e-12, c.ratio});
    } else if (o.name == "product") {
      const EstimateReport r = verify_product_estimate(spec, o.s, {}, o.samples);
      doc["report"] = report_json(r);
      checks.push_back({"ratios finite", r.finite, r.max_ratio});
      const EstimateSample c = product_ratio(probe, one, o.s, {});
      checks.push_back({"g = 1 gives ratio <= 1", c.ratio <= 1.0 + 1e-12, c.ratio});
    } else if (o.name == "composition") {
      const Composition g = composition_from_name(o.composition);
      const EstimateReport r = verify_composition_estimate(spec, o.s, g, o.samples);
      doc["report"] = report_json(r);
      doc["parameters"]["composition"] = composition_name(g);
      checks.push_back({"ratios finite", r.finite, r.max_ratio});
      const EstimateSample c = composition_ratio(probe, o.s, Composition::identity);
      checks.push_back({"identity gives ratio <= 1", c.ratio <= 1.0 + 1e-12, c.ratio});
    } else {
      const EstimateReport r = verify_interpolation_inequality(spec, o.s, o.samples);
      doc["report"] = report_json(r);
      checks.push_back({"ratios finite", r.finite, r.max_ratio});
      const int k[6] = {1, 0, 0, 0, 0, 0};
      const SpectralField cosine = SpectralField::trig_mode(o.dim, std::max(o.cutoff, 2), {k, static_cast<std::size_t>(o.dim)}, 1.0, 0.0);
      const EstimateSample c = interpolation_ratio(cosine, o.s);
      const double lam = 1.0 + kFourPiSq;
      const double theta = 0.5 * (o.s - 0.5 * o.dim);
      const double expected =
          beta_in_interpolation_branch(o.s, o.dim)
              ? kTwoPi / (std::pow(0.5 * std::pow(lam, o.s), 0.5 * theta) *
                          std::pow(0.5 * std::pow(lam, o.s + 1.0), 0.5 * (1.0 - theta)))
              : kTwoPi / std::sqrt(0.5 * std::pow(lam, o.s));
      const double rel = std::abs(c.ratio - expected) / expected;
      checks.push_back({"cos(2 pi x_1) closed form", rel <= 1e-9, rel});
    }

    bool pass = true;
    for (const auto& c : checks) pass = pass && c.pass;
    doc["checks"] = checks_json(checks);
    doc["pass"] = pass;
    const std::string text = doc.dump(2) + "\n";
    if (o.output) {
      write_text(*o.output, text);
    } else {
      out << text;
    }
    for (const auto& c : checks) {
      err << (c.pass ? "ok   " : "FAIL ") << c.name << " (" << format_double(c.value) << ")\n";
    }
    return pass ? kExitOk : kExitMonitor;
  });
}

int cmd_norms(const std::filesystem::path& snapshot, double s, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SimState st = load_snapshot(snapshot);
    const InitialBounds ext = measure_bounds(st, 1.0);
    out << "t = " << format_double(st.t) << '\n'
        << "d = " << st.dim() << '\n'
        << "n = " << st.cutoff() << '\n'
        << "s = " << format_double(s) << '\n'
        << "hs_v = " << format_double(hs_norm(st.v, s)) << '\n'
        << "hs_omega = " << format_double(hs_norm(st.omega, s)) << '\n'
        << "hs_b = " << format_double(hs_norm(st.b, s)) << '\n'
        << "triple_sq = " << format_double(triple_norm_sq(st, s)) << '\n'
        << "triple_sq_s_plus_1 = " << format_double(triple_norm_sq(st, s + 1.0)) << '\n'
        << "min_omega = " << format_double(ext.omega_min0) << '\n'
        << "max_omega = " << format_double(ext.omega_max0) << '\n'
        << "min_b = " << format_double(ext.b_min0) << '\n'
        << "div_residual = " << format_double(divergence_residual(st.v)) << '\n'
        << "realness_residual = " << format_double(st.realness_residual()) << '\n';
    return kExitOk;
  });
}

ConvergenceResult run_convergence(const RunConfig& config, const ConvergenceOptions& options) {
  config.validate();
  if (options.levels < 2) throw ConfigError("convergence: need at least two levels");
  ConvergenceResult result;
  result.s_primes = options.s_primes.empty() ? std::vector<double>{config.s - 1.0} : options.s_primes;
  for (double sp : result.s_primes) {
    if (!(sp < config.s)) throw ConfigError("convergence: s' must be below s");
  }
  std::vector<SimState> finals;
  for (int level = 0; level < options.levels; ++level) {
    RunConfig cfg = config;
    cfg.cutoff = config.cutoff << level;
    const SimState state0 = build_initial_state(cfg);
    if (const auto bad = hypothesis_violations(state0); !bad.empty()) throw ConfigError(bad.front());
    const SimulationRun run = run_simulation(cfg, state0);
    if (run.trajectory.status != Trajectory::Status::completed) {
      throw Error("convergence: run at n = " + std::to_string(cfg.cutoff) + " stopped: " + run.trajectory.message);
    }
    result.cutoffs.push_back(cfg.cutoff);
    finals.push_back(run.trajectory.samples.back());
  }
  for (double sp : result.s_primes) {
    std::vector<double> row;
    for (std::size_t i = 0; i + 1 < finals.size(); ++i) {
      const SimState& lo = finals[i];
      const SimState& hi = finals[i + 1];
      const int n = hi.cutoff();
      double d2 = hs_norm_sq(project(lo.omega, n) - hi.omega, sp) + hs_norm_sq(project(lo.b, n) - hi.b, sp);
      for (std::size_t j = 0; j < lo.v.components.size(); ++j) {
        d2 += hs_norm_sq(project(lo.v[j], n) - hi.v[j], sp);
      }
      row.push_back(std::sqrt(d2));
    }
    result.distances.push_back(std::move(row));
  }
  return result;
}

int cmd_convergence(const RunConfig& config, const ConvergenceOptions& options, std::ostream& out,
                    std::ostream& err) {
  return guarded(err, [&] {
    const ConvergenceResult r = run_convergence(config, options);
    out << "s_prime,n_coarse,n_fine,distance\n";
    bool monotone = true;
    for (std::size_t j = 0; j < r.s_primes.size(); ++j) {
      for (std::size_t i = 0; i < r.distances[j].size(); ++i) {
        out << format_double(r.s_primes[j]) << ',' << r.cutoffs[i] << ',' << r.cutoffs[i + 1] << ','
            << format_double(r.distances[j][i]) << '\n';
        if (i > 0 && !(r.distances[j][i] < r.distances[j][i - 1])) monotone = false;
      }
    }
    err << (monotone ? "refinement distances decrease monotonically\n"
                     : "warning: refinement distances are not monotone\n");
    return kExitOk;
  });
}

}  // namespace kolmo
