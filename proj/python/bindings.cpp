#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "elicit/codec.hpp"
#include "elicit/feedback.hpp"
#include "elicit/fitting.hpp"
#include "elicit/session.hpp"

namespace py = pybind11;
using namespace elicit;

namespace {

// Rows are (p, x) or (p, x, dp, dx).
JudgementSet to_set(const std::vector<std::vector<double>>& rows) {
  JudgementSet set;
  for (const auto& r : rows) {
    if (r.size() != 2 && r.size() != 4) throw std::invalid_argument("judgement rows are (p, x) or (p, x, dp, dx)");
    set.add({r[0], r[1]}, r.size() == 4 ? ImprecisionBox{r[2], r[3]} : ImprecisionBox{});
  }
  return set;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fitting and feasibility for elicited percentiles";

  static py::exception<Error> error(m, "ElicitError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
    }
  });

  py::class_<LocationScaleDistribution>(m, "Distribution")
      .def(py::init([](const std::string& family, double location, double scale) {
             return LocationScaleDistribution(FamilyKind::parse(family), location, scale);
           }),
           py::arg("family"), py::arg("location") = 0.0, py::arg("scale") = 1.0)
      .def_property_readonly("family", [](const LocationScaleDistribution& d) { return d.family().label(); })
      .def_property_readonly("location", &LocationScaleDistribution::location)
      .def_property_readonly("scale", &LocationScaleDistribution::scale)
      .def("cdf", &LocationScaleDistribution::cdf)
      .def("survival", &LocationScaleDistribution::survival)
      .def("quantile", &LocationScaleDistribution::quantile)
      .def("density", &LocationScaleDistribution::density)
      .def("__repr__", [](const LocationScaleDistribution& d) {
        return "Distribution('" + d.family().label() + "', " + std::to_string(d.location()) + ", " +
               std::to_string(d.scale()) + ")";
      });

  m.def("fit_json", [](const std::vector<std::vector<double>>& rows, const std::string& families) {
    return codec::encode(fit_all(parse_family_list(families), to_set(rows))).dump();
  });

  m.def("feasible_json", [](const std::vector<std::vector<double>>& rows, const std::string& families) {
    const auto set = to_set(rows);
    codec::Json out = codec::Json::array();
    for (const auto& family : parse_family_list(families)) {
      auto item = codec::encode(check_feasibility(family, set));
      item["family"] = family.label();
      out.push_back(std::move(item));
    }
    return out.dump();
  });

  m.def("feedback_json", [](const std::vector<std::vector<double>>& rows, const std::string& families,
                            const std::vector<double>& probabilities, const std::vector<double>& thresholds) {
    const auto set = to_set(rows);
    FeedbackSpec spec;
    if (!probabilities.empty()) spec.probabilities = probabilities;
    spec.thresholds = thresholds.empty() ? default_tail_thresholds(set) : thresholds;
    const auto record = build_feedback(fit_all(parse_family_list(families), set), set, spec);
    codec::Json per_family = codec::Json::array();
    for (const auto& f : record.families)
      per_family.push_back({{"dist", codec::encode(f.dist)}, {"quantiles", f.quantiles}});
    codec::Json divergences = codec::Json::array();
    for (const auto& d : record.divergences)
      divergences.push_back({{"first", d.first}, {"second", d.second}, {"divergence", codec::encode(d.divergence)}});
    return codec::Json{{"probabilities", record.spec.probabilities},
                       {"thresholds", record.spec.thresholds},
                       {"families", per_family},
                       {"tails", codec::encode(record.tails)},
                       {"divergences", divergences}}
        .dump();
  });

  m.def("new_session", [](const std::string& id, const std::string& label) { return save(new_session(id, label)); });
  m.def("apply_event", [](const std::string& document, const std::string& event) {
    return save(apply_event(load(document), decode_event(codec::parse(event))));
  });
  m.def("replay_matches", [](const std::string& document) {
    const auto s = load(document);
    return save(replay(s.id, s.quantity_label, s.events)) == document;
  });
}
