#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <set>

#include "quatperiod/pipeline.hpp"

namespace py = pybind11;
using namespace quatperiod;

namespace {

JobConfig config_from(const Json& j) {
  static const std::set<std::string> known{"command", "level",  "disc",   "nu1",    "nu2",   "alpha1",  "alpha2",
                                           "gamma",   "prec",   "bits",   "pmax",   "lpmax", "tolerance", "kernel",
                                           "newforms", "cache", "seed",   "labels", "phi1",  "phi2",    "kind",
                                           "prime",   "T",      "periods", "lvalues"};
  if (!j.is_object()) throw ArgumentError("configuration must be an object");
  for (const auto& [key, value] : j.items())
    if (!known.count(key)) throw ArgumentError("unknown option '" + key + "'");
  JobConfig c;
  c.command = j.value("command", "");
  c.level = j.value("level", c.level);
  c.disc = j.value("disc", c.disc);
  c.nu1 = j.value("nu1", c.nu1);
  c.nu2 = j.value("nu2", c.nu2);
  c.alpha1 = j.value("alpha1", c.alpha1);
  c.alpha2 = j.value("alpha2", c.alpha2);
  c.gamma = j.value("gamma", c.gamma);
  c.prec = j.value("prec", c.prec);
  c.bits = j.value("bits", c.bits);
  c.pmax = j.value("pmax", c.pmax);
  c.lpmax = j.value("lpmax", c.lpmax);
  c.tolerance = j.value("tolerance", c.tolerance);
  c.kernel = j.value("kernel", c.kernel);
  c.newforms = j.value("newforms", c.newforms);
  c.cache = j.value("cache", c.cache);
  c.seed = j.value("seed", c.seed);
  c.labels = j.value("labels", c.labels);
  c.phi1 = j.value("phi1", c.phi1);
  c.phi2 = j.value("phi2", c.phi2);
  c.kind = j.value("kind", c.kind);
  c.prime = j.value("prime", c.prime);
  c.index = j.value("T", c.index);
  const std::string weighting = j.value("periods", "units");
  if (weighting != "units" && weighting != "plain") throw ArgumentError("periods must be 'units' or 'plain'");
  c.weighting = weighting == "plain" ? PeriodWeighting::Plain : PeriodWeighting::Units;
  c.lvalues = j.value("lvalues", c.lvalues);
  return c;
}

std::string run_json(const std::string& text) {
  const Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ArgumentError("configuration is not valid JSON");
  const JobConfig c = config_from(j);
  return envelope(c, run_command(c)).dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quaternionic period sums, Yoshida lifts and triple-product L-values";
  m.attr("convention_version") = kConventionVersion;
  m.attr("schema_version") = kSchemaVersion;
  py::register_exception<StructuralError>(m, "InvariantError", PyExc_RuntimeError);

  m.def("run_json", &run_json, py::arg("config"), py::call_guard<py::gil_scoped_release>(),
        "Runs one CLI command from a JSON configuration and returns the JSON report.");
  m.def(
      "eichler_mass", [](long n1, long n2) { return to_string(eichler_mass(n1, n2)); }, py::arg("n1"),
      py::arg("n2") = 1);
  m.def("admissible_discriminants", &admissible_discriminants, py::arg("level"));
}
