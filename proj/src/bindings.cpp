#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <vector>

#include "obm/asymptotics.hpp"
#include "obm/error.hpp"
#include "obm/estimate.hpp"
#include "obm/harness.hpp"
#include "obm/model.hpp"
#include "obm/rng.hpp"
#include "obm/serialize.hpp"
#include "obm/simulate.hpp"
#include "obm/stats.hpp"

namespace py = pybind11;
using namespace obm;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PathGrid to_path(const Array& values, double T) {
  PathGrid p;
  p.T = T;
  p.values.assign(values.data(), values.data() + values.size());
  if (p.values.size() < 2) throw Error(Errc::InvalidConfig, "path needs at least two values");
  p.N = p.values.size() - 1;
  p.validate();
  return p;
}

Array to_array(const std::vector<double>& v) {
  Array a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::object json_to_py(const nlohmann::json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Side to_side(const std::string& s) {
  if (s == "plus") return Side::Plus;
  if (s == "minus") return Side::Minus;
  throw Error(Errc::InvalidConfig, "side must be 'plus' or 'minus'");
}

std::optional<SigmaPair> sigma_pair(std::optional<double> sp, std::optional<double> sm) {
  if (sp.has_value() != sm.has_value()) {
    throw Error(Errc::InvalidSigma, "give both sigma_plus and sigma_minus or neither");
  }
  if (!sp) return std::nullopt;
  return SigmaPair{*sp, *sm};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Oscillating Brownian motion with drift: simulation, estimation, limit laws";

  py::register_exception<Error>(m, "Error", PyExc_ValueError);

  py::class_<ModelParams>(m, "ModelParams")
      .def(py::init([](double sigma_plus, double sigma_minus, double b_plus, double b_minus, double xi0) {
             ModelParams p{sigma_plus, sigma_minus, b_plus, b_minus, xi0};
             p.validate();
             return p;
           }),
           py::arg("sigma_plus"), py::arg("sigma_minus"), py::arg("b_plus") = 0.0,
           py::arg("b_minus") = 0.0, py::arg("xi0") = 0.0)
      .def_readwrite("sigma_plus", &ModelParams::sigma_plus)
      .def_readwrite("sigma_minus", &ModelParams::sigma_minus)
      .def_readwrite("b_plus", &ModelParams::b_plus)
      .def_readwrite("b_minus", &ModelParams::b_minus)
      .def_readwrite("xi0", &ModelParams::xi0)
      .def("mirrored", &ModelParams::mirrored)
      .def("to_dict", [](const ModelParams& p) { return json_to_py(to_json(p)); })
      .def(py::self == py::self)
      .def("__repr__", [](const ModelParams& p) {
        return "ModelParams(" + to_json(p).dump() + ")";
      });

  m.def("classify_regime", [](const ModelParams& p) { return std::string(regime_tag(classify_regime(p))); });
  m.def("scale_function", &scale_function, py::arg("params"), py::arg("x"));
  m.def("speed_density", &speed_density, py::arg("params"), py::arg("x"));
  m.def("invariant_density", &invariant_density, py::arg("params"), py::arg("x"));

  m.def(
      "simulate_path",
      [](const ModelParams& p, double T, std::size_t N, std::size_t substeps, std::uint64_t seed) {
        PathGrid path;
        {
          py::gil_scoped_release release;
          path = simulate_path(SimConfig{p, T, N, substeps, seed});
        }
        return to_array(path.values);
      },
      py::arg("params"), py::arg("T"), py::arg("N"), py::arg("substeps") = 1, py::arg("seed") = 0);
  m.def("split_seed", &rng::split, py::arg("seed"), py::arg("index"));

  m.def(
      "path_stats",
      [](const Array& values, double T, std::optional<double> sp, std::optional<double> sm) {
        return json_to_py(to_json(path_stats(to_path(values, T), sigma_pair(sp, sm))));
      },
      py::arg("values"), py::arg("T"), py::arg("sigma_plus") = py::none(),
      py::arg("sigma_minus") = py::none());
  m.def(
      "estimate_drift",
      [](const Array& values, double T, std::optional<std::string> regime,
         std::optional<double> sp, std::optional<double> sm) {
        const PathStats s = path_stats(to_path(values, T));
        DriftEstimate est = beta_discrete(s);
        if (regime) {
          const auto sig = sigma_pair(sp, sm);
          if (!sig) throw Error(Errc::InvalidSigma, "regime needs sigma_plus and sigma_minus");
          const ModelParams p{sig->plus, sig->minus, est.beta_plus, est.beta_minus, s.xi0};
          apply_regime(est, s, p, parse_regime(*regime));
        }
        return json_to_py(to_json(est));
      },
      py::arg("values"), py::arg("T"), py::arg("regime") = py::none(),
      py::arg("sigma_plus") = py::none(), py::arg("sigma_minus") = py::none());
  m.def(
      "wilk_test",
      [](const Array& values, double T, const ModelParams& p, double b0_plus, double b0_minus,
         double alpha) {
        return json_to_py(to_json(wilk_test(path_stats(to_path(values, T)), p, b0_plus, b0_minus, alpha)));
      },
      py::arg("values"), py::arg("T"), py::arg("params"), py::arg("b0_plus"), py::arg("b0_minus"),
      py::arg("alpha") = 0.95);
  m.def("chi2_2dof_quantile", &chi2_2dof_quantile, py::arg("alpha"));

  m.def("arcsine_density", &arcsine_density, py::arg("ratio"), py::arg("u"));
  m.def("arcsine_cdf", &arcsine_cdf, py::arg("ratio"), py::arg("u"));
  m.def("ergodic_occupation_limit", &ergodic_occupation_limit, py::arg("params"));
  m.def(
      "ergodic_limit_sd",
      [](const ModelParams& p, const std::string& side) { return ergodic_limit_sd(p, to_side(side)); },
      py::arg("params"), py::arg("side"));
  m.def("n0_joint_density", &n0_joint_density, py::arg("params"), py::arg("rho"), py::arg("lam"),
        py::arg("tau"));
  m.def("n0_beta_density", &n0_beta_density, py::arg("params"), py::arg("a"), py::arg("b"));
  m.def(
      "n0_beta_marginal_density",
      [](const ModelParams& p, const std::string& side, double x) {
        return n0_beta_marginal_density(p, to_side(side), x);
      },
      py::arg("params"), py::arg("side"), py::arg("x"));
  m.def(
      "n0_beta_marginal_cdf",
      [](const ModelParams& p, const std::string& side, double x) {
        return n0_beta_marginal_cdf(p, to_side(side), x);
      },
      py::arg("params"), py::arg("side"), py::arg("x"));
  m.def("n1_minus_density", &n1_minus_density, py::arg("c"), py::arg("x"));
  m.def("n1_minus_cdf", &n1_minus_cdf, py::arg("c"), py::arg("x"));
  m.def("transient_ratio_density", &transient_ratio_density, py::arg("params"), py::arg("r"));
  m.def("t1_divergence_probability", &t1_divergence_probability, py::arg("params"));
  m.def(
      "ks_distance",
      [](const Array& sample, const std::function<double(double)>& cdf) {
        std::vector<double> v(sample.data(), sample.data() + sample.size());
        std::sort(v.begin(), v.end());
        return ks_distance(v, cdf);
      },
      py::arg("sample"), py::arg("cdf"));
  m.def(
      "kde",
      [](const Array& sample, const Array& grid, std::optional<double> bandwidth) {
        std::vector<double> s(sample.data(), sample.data() + sample.size());
        std::vector<double> g(grid.data(), grid.data() + grid.size());
        return to_array(kde(s, g, bandwidth));
      },
      py::arg("sample"), py::arg("grid"), py::arg("bandwidth") = py::none());

  m.def(
      "run_experiment",
      [](const py::dict& config, unsigned threads) {
        const auto text = py::module_::import("json").attr("dumps")(config).cast<std::string>();
        const ExperimentConfig cfg = experiment_config_from_json(nlohmann::json::parse(text));
        ExperimentResult res;
        {
          py::gil_scoped_release release;
          res = run_experiment(cfg, threads);
        }
        return json_to_py(to_json(res));
      },
      py::arg("config"), py::arg("threads") = 0);
}
