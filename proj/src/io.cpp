#include "elicit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "elicit/codec.hpp"

namespace elicit::io {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(trim(line.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

double parse_number(std::string_view s, const std::string& where) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(where, "not a number: '" + std::string(s) + "'");
  return v;
}

const char* dash_pattern(LineStyle style) {
  switch (style) {
    case LineStyle::Solid:
      return "";
    case LineStyle::Dotted:
      return " stroke-dasharray=\"2,3\"";
    case LineStyle::Dashed:
      return " stroke-dasharray=\"8,5\"";
  }
  return "";
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, ptr);
}

std::string judgements_to_csv(const JudgementSet& set) {
  std::string out = "p,x,dp,dx\n";
  for (std::size_t i = 0; i < set.size(); ++i) {
    out += format_number(set[i].probability) + ',' + format_number(set[i].value) + ',' +
           format_number(set.box(i).delta_p) + ',' + format_number(set.box(i).delta_x) + '\n';
  }
  return out;
}

JudgementSet judgements_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::vector<std::string_view> header;
  std::string header_line;
  JudgementSet set;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (header.empty()) {
      header_line = line;
      header = split_fields(header_line);
      const bool short_form = header.size() == 2 && header[0] == "p" && header[1] == "x";
      const bool long_form = header.size() == 4 && header[0] == "p" && header[1] == "x" && header[2] == "dp" && header[3] == "dx";
      if (!short_form && !long_form) throw ParseError(where, "expected header 'p,x' or 'p,x,dp,dx'");
      continue;
    }
    const auto fields = split_fields(line);
    if (fields.size() != header.size())
      throw ParseError(where, "expected " + std::to_string(header.size()) + " fields, got " + std::to_string(fields.size()));
    Judgement j{parse_number(fields[0], where), parse_number(fields[1], where)};
    ImprecisionBox box;
    if (fields.size() == 4) box = {parse_number(fields[2], where), parse_number(fields[3], where)};
    set.add(j, box);
  }
  if (header.empty()) throw ParseError("line 1", "missing CSV header");
  return set;
}

std::string judgements_to_json(const JudgementSet& set) { return codec::encode(set).dump(2) + "\n"; }

JudgementSet judgements_from_json(const std::string& text) { return codec::decode_judgement_set(codec::parse(text)); }

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

JudgementSet read_judgements_file(const std::filesystem::path& path) {
  const auto content = read_text_file(path);
  if (path.extension() == ".csv") return judgements_from_csv(content);
  return judgements_from_json(content);
}

std::string figure_to_csv(const FigureData& figure) {
  std::string out = "x";
  for (const auto& c : figure.curves) out += ",cdf_" + c.label;
  out += '\n';
  for (std::size_t k = 0; k < figure.x.size(); ++k) {
    out += format_number(figure.x[k]);
    for (const auto& c : figure.curves) out += ',' + format_number(c.cdf[k]);
    out += '\n';
  }
  return out;
}

std::string figure_sidecar_json(const FigureData& figure) { return codec::encode_figure_sidecar(figure).dump(2) + "\n"; }

std::string figure_to_svg(const FigureData& figure) {
  constexpr double kWidth = 640, kHeight = 420, kLeft = 56, kRight = 16, kTop = 16, kBottom = 44;
  const double x_lo = figure.x.empty() ? -1.0 : figure.x.front();
  const double x_hi = figure.x.empty() ? 1.0 : figure.x.back();
  auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * (kWidth - kLeft - kRight); };
  auto py = [&](double p) { return kHeight - kBottom - p * (kHeight - kTop - kBottom); };
  auto fmt = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<g stroke=\"black\" stroke-width=\"1\" fill=\"none\">\n";
  svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << fmt(kWidth - kRight) << "\" y2=\""
      << fmt(py(0)) << "\"/>\n";
  svg << "<line x1=\"" << fmt(kLeft) << "\" y1=\"" << fmt(py(0)) << "\" x2=\"" << fmt(kLeft) << "\" y2=\"" << fmt(py(1))
      << "\"/>\n";
  svg << "</g>\n<g font-family=\"sans-serif\" font-size=\"11\">\n";
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0})
    svg << "<text x=\"" << fmt(kLeft - 6) << "\" y=\"" << fmt(py(p) + 4) << "\" text-anchor=\"end\">" << p << "</text>\n";
  for (int k = 0; k <= 4; ++k) {
    const double x = x_lo + (x_hi - x_lo) * k / 4.0;
    svg << "<text x=\"" << fmt(px(x)) << "\" y=\"" << fmt(py(0) + 16) << "\" text-anchor=\"middle\">" << fmt(x)
        << "</text>\n";
  }
  svg << "<text x=\"" << fmt((kLeft + kWidth - kRight) / 2) << "\" y=\"" << fmt(kHeight - 8)
      << "\" text-anchor=\"middle\">X</text>\n</g>\n";

  for (const auto& r : figure.rectangles) {
    svg << "<rect class=\"box\" x=\"" << fmt(px(r.x_min)) << "\" y=\"" << fmt(py(r.p_max)) << "\" width=\""
        << fmt(px(r.x_max) - px(r.x_min)) << "\" height=\"" << fmt(py(r.p_min) - py(r.p_max))
        << "\" fill=\"none\" stroke=\"gray\"/>\n";
  }

  // Keep the SVG small: at most ~1000 vertices per curve.
  const std::size_t stride = std::max<std::size_t>(1, figure.x.size() / 1000);
  for (const auto& c : figure.curves) {
    svg << "<polyline class=\"curve\" data-label=\"" << c.label << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\""
        << dash_pattern(c.style) << " points=\"";
    for (std::size_t k = 0; k < figure.x.size(); k += stride) svg << fmt(px(figure.x[k])) << ',' << fmt(py(c.cdf[k])) << ' ';
    if (!figure.x.empty() && (figure.x.size() - 1) % stride != 0)
      svg << fmt(px(figure.x.back())) << ',' << fmt(py(c.cdf.back()));
    svg << "\"/>\n";
  }
  for (const auto& m : figure.markers)
    svg << "<circle class=\"judgement\" cx=\"" << fmt(px(m.x)) << "\" cy=\"" << fmt(py(m.p)) << "\" r=\"3\" fill=\"black\"/>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace elicit::io
