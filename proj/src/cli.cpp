#include "elicit/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include "elicit/codec.hpp"
#include "elicit/feedback.hpp"
#include "elicit/fitting.hpp"
#include "elicit/io.hpp"
#include "elicit/service.hpp"
#include "elicit/session.hpp"

namespace elicit::cli {

namespace {

using codec::Json;
namespace fs = std::filesystem;

// Raised for conditions that map to exit code 2 but are not CLI11 parse failures.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string sci(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

void require_input(const std::string& path) {
  if (!fs::exists(path)) throw UsageError("input file not found: " + path);
}

struct JudgementOptions {
  std::string path;
  std::optional<double> dp;
  std::optional<double> dx;

  void attach(CLI::App* cmd) {
    cmd->add_option("--judgements,-j", path, "Judgement file (.json or .csv)")->required();
    cmd->add_option("--dp", dp, "Probability half-width applied to every judgement");
    cmd->add_option("--dx", dx, "Value half-width applied to every judgement");
  }

  JudgementSet load() const {
    require_input(path);
    auto set = io::read_judgements_file(path);
    if (dp || dx) {
      // A uniform flag overrides per-judgement boxes; an unspecified half-width keeps the file's value.
      JudgementSet out;
      for (std::size_t i = 0; i < set.size(); ++i)
        out.add(set[i], {dp.value_or(set.box(i).delta_p), dx.value_or(set.box(i).delta_x)});
      set = std::move(out);
    }
    require_valid(set);
    return set;
  }
};

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("not a number: '" + item + "'");
    }
  }
  return out;
}

std::vector<FamilyKind> families_from(const std::string& text) {
  try {
    return parse_family_list(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

void print_fit_table(std::ostream& out, const std::vector<FamilyFits>& fits) {
  out << pad("family", 8) << pad("method", 17) << pad("location", 14) << pad("scale", 14) << pad("max|resid|", 12)
      << pad("sse", 12) << "feasible\n";
  for (const auto& f : fits) {
    for (const auto* fit : {f.exact ? &*f.exact : nullptr, f.least_squares ? &*f.least_squares : nullptr}) {
      if (!fit) continue;
      out << pad(f.family.label(), 8) << pad(to_string(fit->method), 17) << pad(fixed(fit->dist.location()), 14)
          << pad(fixed(fit->dist.scale()), 14) << pad(sci(fit->max_abs_residual), 12) << pad(sci(fit->sse), 12)
          << (f.feasibility.feasible ? "yes" : "no") << '\n';
    }
    if (!f.exact_error.empty()) out << pad(f.family.label(), 8) << "exact_symmetric  unavailable (" << f.exact_error << ")\n";
    if (!f.least_squares_error.empty())
      out << pad(f.family.label(), 8) << "least_squares    unavailable (" << f.least_squares_error << ")\n";
  }
}

void print_fit_csv(std::ostream& out, const std::vector<FamilyFits>& fits) {
  out << "family,method,location,scale,max_abs_residual,sse,feasible,min_max_violation\n";
  for (const auto& f : fits) {
    for (const auto* fit : {f.exact ? &*f.exact : nullptr, f.least_squares ? &*f.least_squares : nullptr}) {
      if (!fit) continue;
      out << f.family.label() << ',' << to_string(fit->method) << ',' << io::format_number(fit->dist.location()) << ','
          << io::format_number(fit->dist.scale()) << ',' << io::format_number(fit->max_abs_residual) << ','
          << io::format_number(fit->sse) << ',' << (f.feasibility.feasible ? "true" : "false") << ','
          << io::format_number(f.feasibility.min_max_violation) << '\n';
    }
  }
}

enum class CurveSource { Auto, Exact, LeastSquares, Witness };

LocationScaleDistribution pick_curve(const FamilyFits& f, CurveSource source, bool boxed) {
  if (source == CurveSource::Auto) source = boxed ? CurveSource::Witness : CurveSource::Exact;
  if (source == CurveSource::Witness && f.feasibility.feasible && f.feasibility.witness) return *f.feasibility.witness;
  if (source == CurveSource::Exact && f.exact) return f.exact->dist;
  if (f.least_squares) return f.least_squares->dist;
  if (f.exact) return f.exact->dist;
  return *f.feasibility.witness;
}

struct Options {
  std::string format = "table";
  std::string families = "normal,t5,cauchy";
  JudgementOptions judgements;

  // feedback
  std::string probs;
  std::string thresholds;

  // figure
  std::string out_path;
  std::string csv_path;
  std::string sidecar_path;
  std::optional<double> x_min;
  std::optional<double> x_max;
  int points = 401;
  std::string curves = "auto";

  // session
  std::string session_path;
  std::string session_id;
  std::string label;
  std::string event_path;
  std::string event_json;
  std::string session_out;

  // serve
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string store = "sessions";
  std::string static_root;
};

int cmd_fit(const Options& o, std::ostream& out) {
  const auto set = o.judgements.load();
  const auto fits = fit_all(families_from(o.families), set);
  if (o.format == "json")
    out << Json{{"fits", codec::encode(fits)}}.dump(2) << '\n';
  else if (o.format == "csv")
    print_fit_csv(out, fits);
  else
    print_fit_table(out, fits);
  return 0;
}

int cmd_feasible(const Options& o, std::ostream& out) {
  const auto set = o.judgements.load();
  const auto families = families_from(o.families);
  if (o.format == "json") {
    Json results = Json::array();
    for (const auto& f : families) {
      Json item = codec::encode(check_feasibility(f, set));
      item["family"] = f.label();
      results.push_back(std::move(item));
    }
    out << Json{{"feasibility", std::move(results)}}.dump(2) << '\n';
    return 0;
  }
  if (o.format == "csv") out << "family,feasible,min_max_violation,location,scale\n";
  for (const auto& f : families) {
    const auto r = check_feasibility(f, set);
    if (o.format == "csv") {
      out << f.label() << ',' << (r.feasible ? "true" : "false") << ',' << io::format_number(r.min_max_violation) << ','
          << io::format_number(r.witness->location()) << ',' << io::format_number(r.witness->scale()) << '\n';
    } else {
      out << pad(f.label(), 8) << (r.feasible ? "feasible  " : "infeasible") << "  min_max_violation "
          << sci(r.min_max_violation) << "  " << (r.feasible ? "witness" : "closest") << " location "
          << fixed(r.witness->location()) << " scale " << fixed(r.witness->scale()) << '\n';
    }
  }
  return 0;
}

int cmd_feedback(const Options& o, std::ostream& out) {
  const auto set = o.judgements.load();
  const auto fits = fit_all(families_from(o.families), set);
  FeedbackSpec spec;
  if (!o.probs.empty()) spec.probabilities = parse_number_list(o.probs);
  if (!o.thresholds.empty()) spec.thresholds = parse_number_list(o.thresholds);
  const auto record = build_feedback(fits, set, spec);

  if (o.format == "json") {
    Json families = Json::array();
    for (const auto& f : record.families) {
      Json item = codec::encode(f.dist);
      item["quantiles"] = f.quantiles;
      families.push_back(std::move(item));
    }
    Json divergences = Json::array();
    for (const auto& d : record.divergences) {
      Json item = codec::encode(d.divergence);
      item["first"] = d.first;
      item["second"] = d.second;
      divergences.push_back(std::move(item));
    }
    out << Json{{"probabilities", record.spec.probabilities},
                {"thresholds", record.spec.thresholds},
                {"families", std::move(families)},
                {"tails", codec::encode(record.tails)},
                {"divergences", std::move(divergences)}}
               .dump(2)
        << '\n';
    return 0;
  }
  if (o.format == "csv") {
    out << "family,kind,argument,value\n";
    for (std::size_t f = 0; f < record.families.size(); ++f) {
      const auto label = record.families[f].dist.family().label();
      for (std::size_t k = 0; k < record.spec.probabilities.size(); ++k)
        out << label << ",quantile," << io::format_number(record.spec.probabilities[k]) << ','
            << io::format_number(record.families[f].quantiles[k]) << '\n';
      for (std::size_t t = 0; t < record.tails.thresholds.size(); ++t)
        out << label << ",exceedance," << io::format_number(record.tails.thresholds[t]) << ','
            << io::format_number(record.tails.exceedance[f][t]) << '\n';
    }
    return 0;
  }
  out << "Quantiles\n";
  for (const auto& f : record.families) {
    out << "  " << pad(f.dist.family().label(), 8) << "(location " << fixed(f.dist.location(), 4) << ", scale "
        << fixed(f.dist.scale(), 4) << "):";
    for (std::size_t k = 0; k < f.quantiles.size(); ++k)
      out << "  q(" << fixed(record.spec.probabilities[k], 4) << ") = " << fixed(f.quantiles[k], 4);
    out << '\n';
  }
  out << "Exceedance P(X > t)\n";
  for (std::size_t f = 0; f < record.families.size(); ++f) {
    out << "  " << pad(record.families[f].dist.family().label(), 8);
    for (std::size_t t = 0; t < record.tails.thresholds.size(); ++t)
      out << "  t=" << fixed(record.tails.thresholds[t], 3) << ": " << sci(record.tails.exceedance[f][t]);
    out << '\n';
  }
  out << "Kolmogorov distance\n";
  for (const auto& d : record.divergences)
    out << "  " << record.families[d.first].dist.family().label() << " vs "
        << record.families[d.second].dist.family().label() << ": " << fixed(d.divergence.kolmogorov, 4) << " at x = "
        << fixed(d.divergence.argmax, 3) << '\n';
  return 0;
}

int cmd_figure(const Options& o, std::ostream& out) {
  const auto set = o.judgements.load();
  const auto fits = fit_all(families_from(o.families), set);
  CurveSource source = CurveSource::Auto;
  if (o.curves == "exact") source = CurveSource::Exact;
  if (o.curves == "least-squares") source = CurveSource::LeastSquares;
  if (o.curves == "witness") source = CurveSource::Witness;

  std::vector<LocationScaleDistribution> dists;
  for (const auto& f : fits) dists.push_back(pick_curve(f, source, set.has_boxes()));
  auto range = default_figure_range(set);
  if (o.x_min) range.first = *o.x_min;
  if (o.x_max) range.second = *o.x_max;
  if (o.points < 2) throw UsageError("--points must be at least 2");
  const auto fig = figure_data(dists, set, range, o.points);

  std::string csv_path = o.csv_path;
  std::string svg_path;
  if (!o.out_path.empty()) {
    if (fs::path(o.out_path).extension() == ".csv")
      csv_path = o.out_path;
    else
      svg_path = o.out_path;
  }
  if (!svg_path.empty()) io::write_text_file(svg_path, io::figure_to_svg(fig));
  std::string sidecar = o.sidecar_path;
  if (!csv_path.empty()) {
    io::write_text_file(csv_path, io::figure_to_csv(fig));
    if (sidecar.empty()) sidecar = fs::path(csv_path).replace_extension(".json").string();
  }
  if (!sidecar.empty()) io::write_text_file(sidecar, io::figure_sidecar_json(fig));
  if (svg_path.empty() && csv_path.empty()) {
    out << io::figure_to_csv(fig);
    return 0;
  }

  if (o.format == "json") {
    Json summary = codec::encode_figure_sidecar(fig);
    summary["files"] = Json::array();
    for (const auto& p : {svg_path, csv_path, sidecar})
      if (!p.empty()) summary["files"].push_back(p);
    out << summary.dump(2) << '\n';
  } else {
    out << "curves: " << fig.curves.size() << ", markers: " << fig.markers.size()
        << ", rectangles: " << fig.rectangles.size() << '\n';
    for (const auto& c : fig.curves)
      out << "  " << pad(c.label, 8) << "location " << fixed(c.dist.location()) << " scale " << fixed(c.dist.scale()) << '\n';
    for (const auto& p : {svg_path, csv_path, sidecar})
      if (!p.empty()) out << "wrote " << p << '\n';
  }
  return 0;
}

ElicitationSession read_session(const std::string& path) {
  require_input(path);
  return load(io::read_text_file(path));
}

int cmd_session_new(const Options& o, std::ostream& out) {
  const auto s = new_session(o.session_id, o.label);
  if (o.session_out.empty())
    out << save(s);
  else
    io::write_text_file(o.session_out, save(s));
  return 0;
}

int cmd_session_apply(const Options& o, std::ostream& out) {
  const auto s = read_session(o.session_path);
  std::string text = o.event_json;
  if (!o.event_path.empty()) {
    require_input(o.event_path);
    text = io::read_text_file(o.event_path);
  }
  if (text.empty()) throw UsageError("one of --event or --event-json is required");
  const auto next = apply_event(s, decode_event(codec::parse(text)));
  io::write_text_file(o.session_out.empty() ? o.session_path : o.session_out, save(next));
  out << "state: " << to_string(next.state) << ", rounds: " << next.rounds.size() << '\n';
  return 0;
}

int cmd_session_show(const Options& o, std::ostream& out) {
  const auto s = read_session(o.session_path);
  if (o.format == "json") {
    out << save(s);
    return 0;
  }
  out << "session " << s.id << " (" << s.quantity_label << "): " << to_string(s.state) << ", " << s.rounds.size()
      << " round(s), " << s.events.size() << " event(s)\n";
  for (std::size_t r = 0; r < s.rounds.size(); ++r) {
    const auto& round = s.rounds[r];
    out << "  round " << r + 1 << ": " << round.judgement_set.size() << " judgement(s)";
    if (round.fits) out << ", fitted " << round.fits->size() << " famil" << (round.fits->size() == 1 ? "y" : "ies");
    if (round.feedback_shown) out << ", feedback shown";
    if (round.expert_response) out << ", " << to_string(*round.expert_response);
    out << '\n';
  }
  return 0;
}

int cmd_session_replay(const Options& o, std::ostream& out) {
  const auto s = read_session(o.session_path);
  const auto rebuilt = replay(s.id, s.quantity_label, s.events);
  const bool same = save(rebuilt) == save(s);
  out << (same ? "identical" : "differs") << '\n';
  return same ? 0 : 1;
}

int cmd_serve(const Options& o, std::ostream& out) {
  service::SessionStore store(o.store);
  service::Api api(store);
  std::optional<fs::path> static_root;
  if (!o.static_root.empty()) static_root = o.static_root;
  service::HttpServer server(api, static_root);
  const int port = server.bind(o.host, o.port);
  if (port < 0) throw UsageError("cannot bind " + o.host + ":" + std::to_string(o.port));
  out << "listening on http://" << o.host << ':' << port << std::endl;
  return server.listen() ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Fit symmetric location-scale distributions to percentile judgements", "elicit"};
  app.require_subcommand(1);

  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));
  };
  auto add_families = [&](CLI::App* cmd) {
    cmd->add_option("--families,--family,-f", o.families, "Comma separated families: normal, t<nu>, cauchy");
  };

  auto* fit = app.add_subcommand("fit", "Exact, least-squares and feasibility fits per family");
  o.judgements.attach(fit);
  add_families(fit);
  add_format(fit);

  auto* feasible = app.add_subcommand("feasible", "Can a family thread every imprecision rectangle?");
  o.judgements.attach(feasible);
  add_families(feasible);
  add_format(feasible);

  auto* feedback = app.add_subcommand("feedback", "Quantiles, tail probabilities and divergences of the fits");
  o.judgements.attach(feedback);
  add_families(feedback);
  add_format(feedback);
  feedback->add_option("--probs", o.probs, "Comma separated feedback probabilities (default tertiles)");
  feedback->add_option("--thresholds", o.thresholds, "Comma separated tail thresholds");

  auto* figure = app.add_subcommand("figure", "CDF curves through the judgements, as SVG or CSV");
  o.judgements.attach(figure);
  add_families(figure);
  add_format(figure);
  figure->add_option("--out,-o", o.out_path, "Output file; .csv writes CSV plus a .json sidecar, otherwise SVG");
  figure->add_option("--csv", o.csv_path, "Also write the sampled curves as CSV");
  figure->add_option("--sidecar", o.sidecar_path, "Markers/rectangles JSON path");
  figure->add_option("--x-min", o.x_min, "Left end of the grid");
  figure->add_option("--x-max", o.x_max, "Right end of the grid");
  figure->add_option("--points", o.points, "Grid size");
  figure->add_option("--curves", o.curves, "Which fit to draw")
      ->check(CLI::IsMember({"auto", "exact", "least-squares", "witness"}));

  auto* session = app.add_subcommand("session", "Create, advance and inspect elicitation sessions");
  session->require_subcommand(1);
  auto* s_new = session->add_subcommand("new", "Start an empty session");
  s_new->add_option("--id", o.session_id, "Session identifier")->required();
  s_new->add_option("--label", o.label, "What the uncertain quantity is");
  s_new->add_option("--out,-o", o.session_out, "Write the session here instead of stdout");
  auto* s_apply = session->add_subcommand("apply", "Apply one event and save");
  s_apply->add_option("--session,-s", o.session_path, "Session file")->required();
  s_apply->add_option("--event,-e", o.event_path, "Event JSON file");
  s_apply->add_option("--event-json", o.event_json, "Event JSON text");
  s_apply->add_option("--out,-o", o.session_out, "Write here instead of updating in place");
  auto* s_show = session->add_subcommand("show", "Summarize a session");
  s_show->add_option("--session,-s", o.session_path, "Session file")->required();
  add_format(s_show);
  auto* s_replay = session->add_subcommand("replay", "Check that the event log reproduces the session");
  s_replay->add_option("--session,-s", o.session_path, "Session file")->required();

  auto* serve = app.add_subcommand("serve", "Run the HTTP/JSON service");
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--port", o.port, "Port (0 picks a free one)");
  serve->add_option("--store", o.store, "Session directory");
  serve->add_option("--static", o.static_root, "UI bundle served at /");

  std::vector<const char*> argv{"elicit"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    if (fit->parsed()) return cmd_fit(o, out);
    if (feasible->parsed()) return cmd_feasible(o, out);
    if (feedback->parsed()) return cmd_feedback(o, out);
    if (figure->parsed()) return cmd_figure(o, out);
    if (s_new->parsed()) return cmd_session_new(o, out);
    if (s_apply->parsed()) return cmd_session_apply(o, out);
    if (s_show->parsed()) return cmd_session_show(o, out);
    if (s_replay->parsed()) return cmd_session_replay(o, out);
    if (serve->parsed()) return cmd_serve(o, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidJudgementsError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace elicit::cli
