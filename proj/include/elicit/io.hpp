#ifndef ELICIT_IO_HPP
#define ELICIT_IO_HPP

#include <filesystem>
#include <string>

#include "elicit/feedback.hpp"
#include "elicit/judgements.hpp"

namespace elicit::io {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// `p,x,dp,dx` with header; dp/dx columns may be omitted on input.
std::string judgements_to_csv(const JudgementSet& set);
JudgementSet judgements_from_csv(const std::string& text);

std::string judgements_to_json(const JudgementSet& set);
JudgementSet judgements_from_json(const std::string& text);

/// Dispatches on extension: `.csv` is CSV, anything else JSON. Throws std::runtime_error naming a missing path.
JudgementSet read_judgements_file(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& content);

/// Columns `x,cdf_<label>...`, one row per grid point.
std::string figure_to_csv(const FigureData& figure);
/// Markers, rectangles and curve metadata.
std::string figure_sidecar_json(const FigureData& figure);
/// Self-contained SVG: curves (solid/dotted/dashed), dots and rectangles.
std::string figure_to_svg(const FigureData& figure);

}  // namespace elicit::io

#endif  // ELICIT_IO_HPP
