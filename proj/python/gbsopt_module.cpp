// Copyright 2026 The gbsopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "gbsopt/ensembles.hpp"
#include "gbsopt/errors.hpp"
#include "gbsopt/experiment.hpp"
#include "gbsopt/gbs.hpp"
#include "gbsopt/hafnian.hpp"
#include "gbsopt/optimizers.hpp"
#include "gbsopt/proportional.hpp"

namespace py = pybind11;

namespace {

using ComplexArray = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

gbsopt::ComplexMatrix to_matrix(const ComplexArray& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1)) {
    throw gbsopt::InvalidArgument("expected a square 2-d array");
  }
  const auto n = static_cast<std::size_t>(a.shape(0));
  std::vector<gbsopt::Complex> entries(a.data(), a.data() + n * n);
  bool symmetric = true;
  for (std::size_t i = 0; i < n && symmetric; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (entries[i * n + j] != entries[j * n + i]) {
        symmetric = false;
        break;
      }
    }
  }
  return gbsopt::ComplexMatrix(n, std::move(entries), symmetric);
}

ComplexArray to_array(const gbsopt::ComplexMatrix& m) {
  const auto n = static_cast<py::ssize_t>(m.dim());
  ComplexArray out({n, n});
  std::copy(m.entries().begin(), m.entries().end(), out.mutable_data());
  return out;
}

py::object dataset_to_python(const gbsopt::FigureDataset& ds) {
  py::module_ json = py::module_::import("json");
  py::dict d;
  d["id"] = ds.id;
  d["columns"] = ds.columns;
  d["rows"] = ds.rows;
  d["metadata"] = json.attr("loads")(ds.metadata.dump());
  d["csv"] = ds.to_csv();
  return std::move(d);
}

}  // namespace

PYBIND11_MODULE(gbsopt, m) {
  m.doc() = "Gaussian boson sampling assisted Max-Haf optimization";

  py::register_exception<gbsopt::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<gbsopt::ResourceLimit>(m, "ResourceLimit", PyExc_RuntimeError);
  py::register_exception<gbsopt::DegenerateDistribution>(m, "DegenerateDistribution", PyExc_RuntimeError);

  m.def("hafnian", [](const ComplexArray& a) { return gbsopt::hafnian(to_matrix(a)); }, py::arg("matrix"));
  m.def(
      "hafnian_definition", [](const ComplexArray& a) { return gbsopt::hafnian_definition(to_matrix(a)); },
      py::arg("matrix"));
  m.def("double_factorial", &gbsopt::double_factorial, py::arg("k"));

  m.def(
      "coe_matrix",
      [](std::size_t n, double r, std::uint64_t seed) {
        gbsopt::RandomStream rng(seed);
        return to_array(gbsopt::coe_matrix(gbsopt::SqueezingSpec{r, n}, rng));
      },
      py::arg("n"), py::arg("r") = 1.0, py::arg("seed") = 0);

  m.def(
      "conditional_distribution",
      [](const ComplexArray& a, std::size_t k, double r) {
        auto b = to_matrix(a);
        if (!b.symmetric()) {
          throw gbsopt::InvalidArgument("conditional_distribution: matrix must be symmetric");
        }
        const auto dist = gbsopt::build_conditional_distribution(b, k, r);
        std::vector<std::string> patterns;
        patterns.reserve(dist.size());
        for (std::size_t i = 0; i < dist.size(); ++i) {
          patterns.push_back(dist.pattern(i).bitstring());
        }
        return py::make_tuple(patterns, dist.probabilities());
      },
      py::arg("matrix"), py::arg("k"), py::arg("r") = 1.0);

  m.def(
      "max_haf",
      [](const ComplexArray& a, std::size_t k) {
        const auto res = gbsopt::brute_force_maxhaf(to_matrix(a), k);
        return py::make_tuple(res.pattern.bitstring(), res.value);
      },
      py::arg("matrix"), py::arg("k"));
  m.def(
      "max_even_clique", [](const ComplexArray& a) { return gbsopt::max_clique_via_maxhaf(to_matrix(a)); },
      py::arg("adjacency"));

  m.def("expected_max_uniform", &gbsopt::prop::expected_max_uniform, py::arg("kappa"));
  m.def(
      "expected_max_proportional",
      [](double lambda, std::size_t kappa) { return gbsopt::prop::expected_max_proportional({lambda, kappa}); },
      py::arg("lambda_"), py::arg("kappa"));
  m.def("analytic_ratio_R", &gbsopt::prop::analytic_ratio_R, py::arg("n"), py::arg("k"));

  m.def(
      "run_experiment",
      [](const std::string& config_json) {
        const auto config = gbsopt::ExperimentConfig::from_json(nlohmann::json::parse(config_json));
        return dataset_to_python(gbsopt::run_experiment(config));
      },
      py::arg("config_json"));
}
