#include "elicit/codec.hpp"

#include <cmath>

namespace elicit::codec {

namespace {

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t index) { return where + "/" + std::to_string(index); }

const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, "expected an array");
  return j;
}

const char* style_name(LineStyle style) {
  switch (style) {
    case LineStyle::Solid:
      return "solid";
    case LineStyle::Dotted:
      return "dotted";
    case LineStyle::Dashed:
      return "dashed";
  }
  return "solid";
}

Json optional_fit(const std::optional<FitResult>& fit) { return fit ? encode(*fit) : Json(nullptr); }

}  // namespace

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
}

const Json& field(const Json& object, const char* key, const std::string& where) {
  if (!object.is_object()) throw ParseError(where, "expected an object");
  const auto it = object.find(key);
  if (it == object.end()) throw ParseError(at(where, key), "missing field");
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) throw ParseError(where, "expected a number");
  return j.get<double>();
}

int integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) throw ParseError(where, "expected an integer");
  return j.get<int>();
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where, "expected a string");
  return j.get<std::string>();
}

std::vector<double> numbers(const Json& j, const std::string& where) {
  std::vector<double> out;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) out.push_back(number(j[i], at(where, i)));
  return out;
}

Json encode(const FamilyKind& family) { return family.label(); }

Json encode(const LocationScaleDistribution& dist) {
  return {{"family", dist.family().label()}, {"location", dist.location()}, {"scale", dist.scale()}};
}

Json encode(const JudgementSet& set) {
  Json list = Json::array();
  for (std::size_t i = 0; i < set.size(); ++i)
    list.push_back({{"p", set[i].probability}, {"x", set[i].value}, {"dp", set.box(i).delta_p}, {"dx", set.box(i).delta_x}});
  return {{"judgements", std::move(list)}};
}

Json encode(const ValidationReport& report) {
  Json violations = Json::array();
  for (const auto& v : report.violations)
    violations.push_back({{"index", v.index}, {"rule", to_string(v.rule)}, {"message", v.message}});
  return {{"ok", report.ok()}, {"violations", std::move(violations)}};
}

Json encode(const FitResult& fit) {
  return {{"family", fit.dist.family().label()},
          {"location", fit.dist.location()},
          {"scale", fit.dist.scale()},
          {"residuals", fit.residuals},
          {"max_abs_residual", fit.max_abs_residual},
          {"sse", fit.sse},
          {"method", to_string(fit.method)},
          {"converged", fit.converged},
          {"iterations", fit.iterations}};
}

Json encode(const FeasibilityResult& result) {
  return {{"feasible", result.feasible},
          {"witness", result.witness ? encode(*result.witness) : Json(nullptr)},
          {"min_max_violation", result.min_max_violation},
          {"iterations", result.iterations}};
}

Json encode(const FamilyFits& fits) {
  return {{"family", fits.family.label()},
          {"exact", optional_fit(fits.exact)},
          {"exact_error", fits.exact_error},
          {"least_squares", optional_fit(fits.least_squares)},
          {"least_squares_error", fits.least_squares_error},
          {"feasibility", encode(fits.feasibility)}};
}

Json encode(const std::vector<FamilyFits>& fits) {
  Json out = Json::array();
  for (const auto& f : fits) out.push_back(encode(f));
  return out;
}

Json encode(const TailReport& report) {
  Json ratios = Json::array();
  for (const auto& r : report.ratios)
    ratios.push_back({{"numerator", r.numerator}, {"denominator", r.denominator}, {"ratios", r.ratios}});
  return {{"thresholds", report.thresholds}, {"exceedance", report.exceedance}, {"ratios", std::move(ratios)}};
}

Json encode(const Divergence& divergence) {
  Json tails = Json::array();
  for (const auto& [t, r] : divergence.tail_ratios) tails.push_back({{"threshold", t}, {"ratio", r}});
  return {{"kolmogorov", divergence.kolmogorov}, {"argmax", divergence.argmax}, {"tail_ratios", std::move(tails)}};
}

Json encode_figure_sidecar(const FigureData& figure) {
  Json markers = Json::array();
  for (const auto& m : figure.markers) markers.push_back({{"x", m.x}, {"p", m.p}});
  Json rectangles = Json::array();
  for (const auto& r : figure.rectangles) {
    Json corners = Json::array();
    for (const auto& c : r.corners()) corners.push_back({c.x, c.p});
    rectangles.push_back(
        {{"x_min", r.x_min}, {"x_max", r.x_max}, {"p_min", r.p_min}, {"p_max", r.p_max}, {"corners", std::move(corners)}});
  }
  Json curves = Json::array();
  for (const auto& c : figure.curves)
    curves.push_back({{"label", c.label},
                      {"family", c.dist.family().label()},
                      {"location", c.dist.location()},
                      {"scale", c.dist.scale()},
                      {"style", style_name(c.style)}});
  return {{"markers", std::move(markers)}, {"rectangles", std::move(rectangles)}, {"curves", std::move(curves)}};
}

FamilyKind decode_family(const Json& j, const std::string& where) {
  try {
    return FamilyKind::parse(text(j, where));
  } catch (const std::invalid_argument& e) {
    throw ParseError(where, e.what());
  }
}

std::vector<FamilyKind> decode_families(const Json& j, const std::string& where) {
  if (j.is_string()) {
    try {
      return parse_family_list(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(where, e.what());
    }
  }
  std::vector<FamilyKind> out;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) out.push_back(decode_family(j[i], at(where, i)));
  return out;
}

LocationScaleDistribution decode_distribution(const Json& j, const std::string& where) {
  const auto family = decode_family(field(j, "family", where), at(where, "family"));
  const double location = number(field(j, "location", where), at(where, "location"));
  const double scale = number(field(j, "scale", where), at(where, "scale"));
  try {
    return LocationScaleDistribution(family, location, scale);
  } catch (const std::domain_error& e) {
    throw ParseError(where, e.what());
  }
}

JudgementSet decode_judgement_set(const Json& j, const std::string& where) {
  const std::string list_at = at(where, "judgements");
  const auto& list = array(field(j, "judgements", where), list_at);
  JudgementSet set;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const auto& item = list[i];
    const auto item_at = at(list_at, i);
    Judgement judgement{number(field(item, "p", item_at), at(item_at, "p")), number(field(item, "x", item_at), at(item_at, "x"))};
    ImprecisionBox box;
    if (item.contains("dp")) box.delta_p = number(item["dp"], at(item_at, "dp"));
    if (item.contains("dx")) box.delta_x = number(item["dx"], at(item_at, "dx"));
    set.add(judgement, box);
  }
  return set;
}

FitResult decode_fit(const Json& j, const std::string& where) {
  const auto dist = decode_distribution(j, where);
  const auto method_name = text(field(j, "method", where), at(where, "method"));
  FitMethod method;
  if (method_name == "exact_symmetric")
    method = FitMethod::ExactSymmetric;
  else if (method_name == "least_squares")
    method = FitMethod::LeastSquares;
  else
    throw ParseError(at(where, "method"), "unknown fit method '" + method_name + "'");
  const auto& converged = field(j, "converged", where);
  if (!converged.is_boolean()) throw ParseError(at(where, "converged"), "expected a boolean");
  return FitResult{dist,
                   numbers(field(j, "residuals", where), at(where, "residuals")),
                   number(field(j, "max_abs_residual", where), at(where, "max_abs_residual")),
                   number(field(j, "sse", where), at(where, "sse")),
                   method,
                   converged.get<bool>(),
                   integer(field(j, "iterations", where), at(where, "iterations"))};
}

FeasibilityResult decode_feasibility(const Json& j, const std::string& where) {
  FeasibilityResult out;
  const auto& feasible = field(j, "feasible", where);
  if (!feasible.is_boolean()) throw ParseError(at(where, "feasible"), "expected a boolean");
  out.feasible = feasible.get<bool>();
  const auto& witness = field(j, "witness", where);
  if (!witness.is_null()) out.witness = decode_distribution(witness, at(where, "witness"));
  out.min_max_violation = number(field(j, "min_max_violation", where), at(where, "min_max_violation"));
  out.iterations = integer(field(j, "iterations", where), at(where, "iterations"));
  return out;
}

FamilyFits decode_family_fits(const Json& j, const std::string& where) {
  FamilyFits out{.family = decode_family(field(j, "family", where), at(where, "family"))};
  if (const auto& exact = field(j, "exact", where); !exact.is_null()) out.exact = decode_fit(exact, at(where, "exact"));
  out.exact_error = text(field(j, "exact_error", where), at(where, "exact_error"));
  if (const auto& ls = field(j, "least_squares", where); !ls.is_null())
    out.least_squares = decode_fit(ls, at(where, "least_squares"));
  out.least_squares_error = text(field(j, "least_squares_error", where), at(where, "least_squares_error"));
  out.feasibility = decode_feasibility(field(j, "feasibility", where), at(where, "feasibility"));
  return out;
}

std::vector<FamilyFits> decode_fit_report(const Json& j, const std::string& where) {
  std::vector<FamilyFits> out;
  for (std::size_t i = 0; i < array(j, where).size(); ++i) out.push_back(decode_family_fits(j[i], at(where, i)));
  return out;
}

TailReport decode_tail_report(const Json& j, const std::string& where) {
  TailReport out;
  out.thresholds = numbers(field(j, "thresholds", where), at(where, "thresholds"));
  const auto& exceedance = array(field(j, "exceedance", where), at(where, "exceedance"));
  for (std::size_t i = 0; i < exceedance.size(); ++i)
    out.exceedance.push_back(numbers(exceedance[i], at(at(where, "exceedance"), i)));
  const auto& ratios = array(field(j, "ratios", where), at(where, "ratios"));
  for (std::size_t i = 0; i < ratios.size(); ++i) {
    const auto item_at = at(at(where, "ratios"), i);
    out.ratios.push_back({static_cast<std::size_t>(integer(field(ratios[i], "numerator", item_at), at(item_at, "numerator"))),
                          static_cast<std::size_t>(integer(field(ratios[i], "denominator", item_at), at(item_at, "denominator"))),
                          numbers(field(ratios[i], "ratios", item_at), at(item_at, "ratios"))});
  }
  return out;
}

Divergence decode_divergence(const Json& j, const std::string& where) {
  Divergence out;
  out.kolmogorov = number(field(j, "kolmogorov", where), at(where, "kolmogorov"));
  out.argmax = number(field(j, "argmax", where), at(where, "argmax"));
  const auto& tails = array(field(j, "tail_ratios", where), at(where, "tail_ratios"));
  for (std::size_t i = 0; i < tails.size(); ++i) {
    const auto item_at = at(at(where, "tail_ratios"), i);
    out.tail_ratios.emplace_back(number(field(tails[i], "threshold", item_at), at(item_at, "threshold")),
                                 number(field(tails[i], "ratio", item_at), at(item_at, "ratio")));
  }
  return out;
}

}  // namespace elicit::codec
