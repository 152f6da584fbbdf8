#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "almostdom/coefficients.hpp"
#include "almostdom/error.hpp"
#include "almostdom/inference.hpp"
#include "almostdom/simulation.hpp"

namespace py = pybind11;
using namespace almostdom;

namespace {

DominanceFamily make_family(const std::string& family, int m, const std::string& dir) {
  DominanceFamily f;
  if (family == "lorenz") f.family = Family::Lorenz;
  else if (family == "isd") f.family = Family::InverseSD;
  else if (family == "sd") f.family = Family::SD;
  else throw Error(ErrorKind::InvalidConfig, "unknown family '" + family + "'");
  f.degree = m;
  f.direction = dir == "down" ? Direction::Downward : Direction::Upward;
  f.validate();
  return f;
}

TwoSample make_data(std::vector<double> x1, std::vector<double> x2, bool matched) {
  if (matched) return TwoSample::matched({std::move(x1), std::move(x2)});
  return TwoSample::independent({std::move(x1), "1"}, {std::move(x2), "2"});
}

py::dict estimate(std::vector<double> x1, std::vector<double> x2, const std::string& family,
                  int m, const std::string& dir, std::size_t grid, double lo, double hi) {
  const DominanceFamily f = make_family(family, m, dir);
  const GridSpec spec = family_grid(f, x1, x2, grid, lo, hi);
  const auto est = coefficient(f, EmpiricalDistribution(x1), EmpiricalDistribution(x2), spec);
  py::dict out;
  out["name"] = f.name();
  out["c_hat"] = est.c_hat;
  out["pos_area"] = est.pos_area;
  out["neg_area"] = est.neg_area;
  out["n1"] = est.n1;
  out["n2"] = est.n2;
  out["phi"] = std::vector<double>(est.phi.values().begin(), est.phi.values().end());
  return out;
}

py::dict confidence_interval(std::vector<double> x1, std::vector<double> x2,
                             const std::string& family, int m, const std::string& dir,
                             bool matched, double t_n, std::size_t n_boot, double alpha,
                             std::uint64_t seed, std::size_t grid, double lo, double hi) {
  const DominanceFamily f = make_family(family, m, dir);
  const GridSpec spec = family_grid(f, x1, x2, grid, lo, hi);
  const TwoSample data = make_data(std::move(x1), std::move(x2), matched);
  InferenceConfig cfg;
  cfg.t_n = t_n;
  cfg.n_boot = n_boot;
  cfg.alpha = alpha;
  cfg.seed = seed;
  const auto scheme = matched ? SamplingScheme::MatchedPairs : SamplingScheme::Independent;
  BootstrapResult r;
  {
    py::gil_scoped_release release;
    r = bootstrap_ci(data, f, scheme, spec, cfg);
  }
  py::dict out;
  out["c_hat"] = r.estimate.c_hat;
  out["ci_lo"] = r.ci_lo;
  out["ci_hi"] = r.ci_hi;
  out["boundary"] = r.boundary;
  out["n_boot_effective"] = r.n_boot_effective;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Almost dominance coefficients and bootstrap confidence intervals";

  py::register_exception<Error>(m, "AlmostDomError");

  m.def("estimate", &estimate, py::arg("x1"), py::arg("x2"), py::arg("family") = "lorenz",
        py::arg("m") = 1, py::arg("direction") = "up", py::arg("grid") = 1000,
        py::arg("domain_lo") = 0.0, py::arg("domain_hi") = 0.0);
  m.def("confidence_interval", &confidence_interval, py::arg("x1"), py::arg("x2"),
        py::arg("family") = "lorenz", py::arg("m") = 1, py::arg("direction") = "up",
        py::arg("matched") = false, py::arg("t_n") = 0.001, py::arg("n_boot") = 1000,
        py::arg("alpha") = 0.05, py::arg("seed") = 0, py::arg("grid") = 1000,
        py::arg("domain_lo") = 0.0, py::arg("domain_hi") = 0.0);
  m.def(
      "preset_population",
      [](const std::string& name) {
        const Preset p = find_preset(name);
        return population_coefficient(p.dgp1, p.dgp2, p.family, 100000, p.domain_lo,
                                      p.domain_hi);
      },
      py::arg("name"));
  m.def(
      "dp_quantile",
      [](double alpha, double beta, double p) { return DoublePareto(alpha, beta).quantile(p); },
      py::arg("alpha"), py::arg("beta"), py::arg("p"));
  m.def("preset_names", &preset_names);
}
