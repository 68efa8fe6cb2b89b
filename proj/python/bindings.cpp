#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "kolmo/config.hpp"
#include "kolmo/diagnostics.hpp"
#include "kolmo/estimate_lab.hpp"
#include "kolmo/integrator.hpp"
#include "kolmo/io.hpp"

namespace py = pybind11;
using namespace kolmo;

namespace {

py::array_t<std::complex<double>> coeff_array(const SpectralField& f) {
  py::array_t<std::complex<double>> out(static_cast<py::ssize_t>(f.size()));
  auto buf = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < f.size(); ++i) buf(static_cast<py::ssize_t>(i)) = f[i];
  return out;
}

void set_coeff_array(SpectralField& f, py::array_t<std::complex<double>, py::array::forcecast> values) {
  auto buf = values.unchecked<1>();
  if (static_cast<std::size_t>(buf.shape(0)) != f.size()) {
    throw py::value_error("expected " + std::to_string(f.size()) + " coefficients");
  }
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = buf(static_cast<py::ssize_t>(i));
  f.set_real(realness_residual(f) == 0.0);
}

py::array_t<int> wave_array(const SpectralField& f) {
  const ModeSet& modes = f.modes();
  py::array_t<int> out({static_cast<py::ssize_t>(modes.size()), static_cast<py::ssize_t>(modes.dim())});
  auto buf = out.mutable_unchecked<2>();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const auto k = modes.wave(i);
    for (int j = 0; j < modes.dim(); ++j) buf(static_cast<py::ssize_t>(i), j) = k[static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_kolmo, m) {
  m.doc() = "Fourier-Galerkin core of the kolmo simulator";

  py::register_exception<Error>(m, "KolmoError", PyExc_ValueError);

  py::class_<SpectralField>(m, "SpectralField")
      .def(py::init<int, int>(), py::arg("dim"), py::arg("cutoff"))
      .def_static("constant", &SpectralField::constant)
      .def_static("trig_mode",
                  [](int dim, int cutoff, std::vector<int> k, double c, double s) {
                    return SpectralField::trig_mode(dim, cutoff, k, c, s);
                  },
                  py::arg("dim"), py::arg("cutoff"), py::arg("k"), py::arg("cos_amplitude"),
                  py::arg("sin_amplitude") = 0.0)
      .def_property_readonly("dim", &SpectralField::dim)
      .def_property_readonly("cutoff", &SpectralField::cutoff)
      .def("__len__", &SpectralField::size)
      .def_property("coeffs", &coeff_array, &set_coeff_array)
      .def_property_readonly("waves", &wave_array)
      .def("coeff", [](const SpectralField& f, std::vector<int> k) { return f.coeff(k); })
      .def("set_coeff", [](SpectralField& f, std::vector<int> k, Complex c) { f.set_coeff(k, c); })
      .def("symmetrize", &SpectralField::symmetrize)
      .def("evaluate", [](const SpectralField& f, std::vector<double> x) { return evaluate(f, x); })
      .def(py::self + py::self)
      .def(py::self - py::self)
      .def(double() * py::self)
      .def(py::self * double());

  py::class_<VectorField>(m, "VectorField")
      .def(py::init<int, int>())
      .def(py::init<std::vector<SpectralField>>())
      .def_readwrite("components", &VectorField::components);

  m.def("bessel_symbol", &bessel_symbol, py::arg("norm_sq"), py::arg("s"));
  m.def("hs_norm", py::overload_cast<const SpectralField&, double>(&hs_norm), py::arg("f"), py::arg("s"));
  m.def("project", py::overload_cast<const SpectralField&, int>(&project), py::arg("f"), py::arg("n"));

  py::class_<InitialBounds>(m, "InitialBounds")
      .def(py::init([](double b_min0, double omega_min0, double omega_max0, double alpha) {
             return InitialBounds{b_min0, omega_min0, omega_max0, alpha};
           }),
           py::arg("b_min0") = 1.0, py::arg("omega_min0") = 1.0, py::arg("omega_max0") = 1.0,
           py::arg("alpha") = 1.0)
      .def_readwrite("b_min0", &InitialBounds::b_min0)
      .def_readwrite("omega_min0", &InitialBounds::omega_min0)
      .def_readwrite("omega_max0", &InitialBounds::omega_max0)
      .def_readwrite("alpha", &InitialBounds::alpha);

  py::class_<CutoffProfile>(m, "CutoffProfile")
      .def_static("for_regularity", &CutoffProfile::for_regularity, py::arg("bounds"), py::arg("s"))
      .def("phi_b", py::overload_cast<double, double>(&CutoffProfile::phi_b, py::const_))
      .def("psi_omega", py::overload_cast<double, double>(&CutoffProfile::psi_omega, py::const_))
      .def("profiles", [](const CutoffProfile& p, double t) {
        const TimeProfiles tp = p.profiles(t);
        return py::dict(py::arg("b_min") = tp.b_min, py::arg("omega_min") = tp.omega_min,
                        py::arg("omega_max") = tp.omega_max, py::arg("nu_min") = tp.nu_min);
      });

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double alpha, double s, InitialBounds bounds, int oversample) {
             return ModelParams{alpha, s, bounds, oversample};
           }),
           py::arg("alpha") = 1.0, py::arg("s") = 2.0, py::arg("bounds") = InitialBounds{},
           py::arg("oversample") = 4)
      .def_readwrite("alpha", &ModelParams::alpha)
      .def_readwrite("s", &ModelParams::s)
      .def_readwrite("bounds", &ModelParams::bounds)
      .def_readwrite("oversample", &ModelParams::oversample);

  py::class_<SimState>(m, "SimState")
      .def(py::init<>())
      .def_static("zero", &SimState::zero)
      .def_readwrite("v", &SimState::v)
      .def_readwrite("omega", &SimState::omega)
      .def_readwrite("b", &SimState::b)
      .def_readwrite("t", &SimState::t)
      .def_property_readonly("dim", &SimState::dim)
      .def_property_readonly("cutoff", &SimState::cutoff)
      .def("realness_residual", &SimState::realness_residual);

  py::class_<StateRate>(m, "StateRate")
      .def_readonly("dv", &StateRate::dv)
      .def_readonly("domega", &StateRate::domega)
      .def_readonly("db", &StateRate::db);

  m.def("rhs", &rhs, py::arg("state"), py::arg("params"), py::arg("profile"));

  py::enum_<Method>(m, "Method").value("rk4", Method::rk4).value("rk45", Method::rk45);

  py::class_<IntegratorConfig>(m, "IntegratorConfig")
      .def(py::init<>())
      .def_readwrite("method", &IntegratorConfig::method)
      .def_readwrite("dt", &IntegratorConfig::dt)
      .def_readwrite("abs_tol", &IntegratorConfig::abs_tol)
      .def_readwrite("rel_tol", &IntegratorConfig::rel_tol)
      .def_readwrite("t_end", &IntegratorConfig::t_end)
      .def_readwrite("sample_interval", &IntegratorConfig::sample_interval);

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("samples", &Trajectory::samples)
      .def_property_readonly("completed",
                             [](const Trajectory& t) { return t.status == Trajectory::Status::completed; })
      .def_readonly("message", &Trajectory::message)
      .def_readonly("accepted_steps", &Trajectory::accepted_steps);

  m.def(
      "integrate",
      [](const SimState& s0, const IntegratorConfig& c, const ModelParams& p, const CutoffProfile& prof) {
        py::gil_scoped_release release;
        return integrate(s0, c, p, prof);
      },
      py::arg("state0"), py::arg("config"), py::arg("params"), py::arg("profile"));

  py::class_<ConstantModel>(m, "ConstantModel")
      .def(py::init([](double c, double g) { return ConstantModel{c, g}; }), py::arg("c_tilde") = 1.0,
           py::arg("gamma") = 0.0)
      .def("__call__", &ConstantModel::operator())
      .def("integral", &ConstantModel::integral);

  m.def("beta_exponent", &beta_exponent, py::arg("s"), py::arg("dim"));
  m.def("existence_time", &existence_time, py::arg("initial_triple_sq"), py::arg("beta"),
        py::arg("cmodel") = ConstantModel{});
  m.def("uniform_bound", &uniform_bound);
  m.def("triple_norm_sq", &triple_norm_sq, py::arg("state"), py::arg("s"));

  py::class_<EnergyOptions>(m, "EnergyOptions")
      .def(py::init<>())
      .def_readwrite("s", &EnergyOptions::s)
      .def_readwrite("beta", &EnergyOptions::beta)
      .def_readwrite("cmodel", &EnergyOptions::cmodel);

  m.def(
      "energy_balance",
      [](const std::vector<SimState>& traj, const CutoffProfile& prof, const EnergyOptions& opts) {
        const EnergyBalance bal = energy_balance(traj, prof, opts);
        py::list rows;
        for (const auto& r : bal.reports) {
          rows.append(py::dict(py::arg("t") = r.t, py::arg("triple_sq") = r.triple_sq, py::arg("lhs") = r.lhs,
                               py::arg("rhs_bound") = r.rhs_bound, py::arg("min_omega") = r.min_omega,
                               py::arg("max_omega") = r.max_omega, py::arg("min_b") = r.min_b));
        }
        return py::make_tuple(rows, bal.fitted_c, bal.violations);
      },
      py::arg("trajectory"), py::arg("profile"), py::arg("options"));

  py::class_<RandomFieldSpec>(m, "RandomFieldSpec")
      .def(py::init([](int dim, int cutoff, double decay, std::uint64_t seed) {
             return RandomFieldSpec{dim, cutoff, decay, seed};
           }),
           py::arg("dim") = 2, py::arg("cutoff") = 8, py::arg("decay") = 0.0, py::arg("seed") = 0)
      .def_readwrite("dim", &RandomFieldSpec::dim)
      .def_readwrite("cutoff", &RandomFieldSpec::cutoff)
      .def_readwrite("decay", &RandomFieldSpec::decay)
      .def_readwrite("seed", &RandomFieldSpec::seed);

  m.def("random_field", &random_field);
  m.def("random_solenoidal", &random_solenoidal);

  py::class_<EstimateReport>(m, "EstimateReport")
      .def_readonly("name", &EstimateReport::name)
      .def_readonly("samples", &EstimateReport::samples)
      .def_readonly("skipped", &EstimateReport::skipped)
      .def_readonly("max_ratio", &EstimateReport::max_ratio)
      .def_readonly("median_ratio", &EstimateReport::median_ratio)
      .def_readonly("max_ratio_refined", &EstimateReport::max_ratio_refined)
      .def_readonly("stability", &EstimateReport::stability)
      .def_readonly("finite", &EstimateReport::finite);

  py::enum_<Composition>(m, "Composition")
      .value("identity", Composition::identity)
      .value("sine", Composition::sine)
      .value("square", Composition::square)
      .value("rational", Composition::rational);

  auto release = py::call_guard<py::gil_scoped_release>();
  m.def(
      "verify_commutator_estimate",
      [](const RandomFieldSpec& spec, double s, std::size_t n) {
        return verify_commutator_estimate(spec, s, CommutatorExponents{}, n);
      },
      py::arg("spec"), py::arg("s"), py::arg("samples"), release);
  m.def(
      "verify_product_estimate",
      [](const RandomFieldSpec& spec, double s, std::size_t n) {
        return verify_product_estimate(spec, s, ProductExponents{}, n);
      },
      py::arg("spec"), py::arg("s"), py::arg("samples"), release);
  m.def("verify_composition_estimate", &verify_composition_estimate, py::arg("spec"), py::arg("s"),
        py::arg("g"), py::arg("samples"), release);
  m.def("verify_interpolation_inequality", &verify_interpolation_inequality, py::arg("spec"), py::arg("s"),
        py::arg("samples"), release);

  m.def("encode_snapshot", [](const SimState& s) {
    const auto bytes = encode_snapshot(s);
    return py::bytes(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  });
  m.def("decode_snapshot", [](py::bytes data) {
    const std::string raw = data;
    return decode_snapshot(std::vector<std::uint8_t>(raw.begin(), raw.end()));
  });
  m.def("save_snapshot", &save_snapshot);
  m.def("load_snapshot", [](const std::filesystem::path& p) { return load_snapshot(p); });

  py::class_<RunConfig>(m, "RunConfig")
      .def_readonly("dim", &RunConfig::dim)
      .def_readonly("cutoff", &RunConfig::cutoff)
      .def_readonly("s", &RunConfig::s)
      .def_readonly("alpha", &RunConfig::alpha)
      .def("beta", &RunConfig::beta)
      .def("validate", &RunConfig::validate);
  m.def("parse_config", &parse_config);
  m.def("print_config", &print_config);
}
