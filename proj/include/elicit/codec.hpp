#ifndef ELICIT_CODEC_HPP
#define ELICIT_CODEC_HPP

// JSON encodings shared by the session file, the CLI and the HTTP service.
// Decoders throw ParseError whose location is a JSON pointer into the document.

#include <string>
#include <vector>

#include <json.hpp>

#include "elicit/distributions.hpp"
#include "elicit/feedback.hpp"
#include "elicit/fitting.hpp"
#include "elicit/judgements.hpp"

namespace elicit::codec {

using Json = nlohmann::json;

Json encode(const FamilyKind& family);
Json encode(const LocationScaleDistribution& dist);
Json encode(const JudgementSet& set);
Json encode(const ValidationReport& report);
Json encode(const FitResult& fit);
Json encode(const FeasibilityResult& result);
Json encode(const FamilyFits& fits);
Json encode(const std::vector<FamilyFits>& fits);
Json encode(const TailReport& report);
Json encode(const Divergence& divergence);
/// Markers, rectangles and curve metadata; the sampled curves go to the CSV.
Json encode_figure_sidecar(const FigureData& figure);

FamilyKind decode_family(const Json& j, const std::string& where = "");
std::vector<FamilyKind> decode_families(const Json& j, const std::string& where = "");
LocationScaleDistribution decode_distribution(const Json& j, const std::string& where = "");
JudgementSet decode_judgement_set(const Json& j, const std::string& where = "");
FitResult decode_fit(const Json& j, const std::string& where = "");
FeasibilityResult decode_feasibility(const Json& j, const std::string& where = "");
FamilyFits decode_family_fits(const Json& j, const std::string& where = "");
std::vector<FamilyFits> decode_fit_report(const Json& j, const std::string& where = "");
TailReport decode_tail_report(const Json& j, const std::string& where = "");
Divergence decode_divergence(const Json& j, const std::string& where = "");

/// Parses text, turning syntax errors into ParseError("byte <n>", ...).
Json parse(const std::string& text);

/// Typed field access with pointer-style locations for error messages.
const Json& field(const Json& object, const char* key, const std::string& where);
double number(const Json& j, const std::string& where);
int integer(const Json& j, const std::string& where);
std::string text(const Json& j, const std::string& where);
std::vector<double> numbers(const Json& j, const std::string& where);

}  // namespace elicit::codec

#endif  // ELICIT_CODEC_HPP
