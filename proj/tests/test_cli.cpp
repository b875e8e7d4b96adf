#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "elicit/cli.hpp"
#include "elicit/codec.hpp"
#include "elicit/io.hpp"
#include "elicit/session.hpp"

using namespace elicit;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct Workspace {
  fs::path dir;
  Workspace() : dir(fs::temp_directory_path() / "elicit_cli_test") {
    fs::remove_all(dir);
    fs::create_directories(dir);
    io::write_text_file(dir / "three.json", io::judgements_to_json(canonical_set(CanonicalKind::Three)));
    io::write_text_file(dir / "five.json", io::judgements_to_json(canonical_set(CanonicalKind::Five)));
    io::write_text_file(dir / "five.csv", io::judgements_to_csv(canonical_set(CanonicalKind::Five)));
    io::write_text_file(dir / "bad.json", R"({"judgements":[{"p":0.5,"x":0},{"p":0.25,"x":1}]})");
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string operator()(const std::string& name) const { return (dir / name).string(); }
};

std::vector<std::vector<double>> read_csv(const std::string& text, std::vector<std::string>& header) {
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  header.clear();
  std::stringstream hs(line);
  for (std::string cell; std::getline(hs, cell, ',');) header.push_back(cell);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("fit prints the standard normal for five quantiles") {
  Workspace ws;
  const auto r = run({"fit", "--family", "normal", "--judgements", ws("five.json")});
  CHECK(r.code == 0);
  CHECK(r.out.find("least_squares") != std::string::npos);
  CHECK(r.out.find("1.0000") != std::string::npos);

  const auto json = run({"fit", "-f", "normal", "-j", ws("five.csv"), "--format", "json"});
  REQUIRE(json.code == 0);
  const auto doc = codec::parse(json.out);
  const auto fits = codec::decode_fit_report(doc["fits"]);
  CHECK(std::fabs(fits[0].least_squares->dist.location()) <= 1e-6);
  CHECK(std::fabs(fits[0].least_squares->dist.scale() - 1.0) <= 1e-4);
}

TEST_CASE("output is deterministic") {
  Workspace ws;
  for (const char* format : {"json", "csv"}) {
    const std::vector<std::string> args{"fit", "-j", ws("five.json"), "--format", format};
    CHECK(run(args).out == run(args).out);
  }
  const std::vector<std::string> fig{"figure", "-j", ws("three.json"), "--points", "101"};
  CHECK(run(fig).out == run(fig).out);
}

TEST_CASE("feasible reports witnesses") {
  Workspace ws;
  const auto r = run({"feasible", "--family", "cauchy", "--judgements", ws("five.json"), "--dp", "0.05", "--dx", "0.05"});
  CHECK(r.code == 0);
  CHECK(r.out.find("feasible  ") != std::string::npos);
  CHECK(r.out.find("witness location") != std::string::npos);

  const auto zero = run({"feasible", "--family", "cauchy", "--judgements", ws("five.json")});
  CHECK(zero.code == 0);  // an infeasible answer is still an answer
  CHECK(zero.out.find("infeasible") != std::string::npos);

  const auto csv = run({"feasible", "-j", ws("five.json"), "--dp", "0.05", "--dx", "0.05", "--format", "csv"});
  CHECK(csv.out.rfind("family,feasible,min_max_violation,location,scale\n", 0) == 0);
  CHECK(csv.out.find("cauchy,true,") != std::string::npos);
}

TEST_CASE("feedback formats") {
  Workspace ws;
  const auto table = run({"feedback", "-j", ws("three.json")});
  CHECK(table.code == 0);
  CHECK(table.out.find("-0.4307") != std::string::npos);
  const auto json = run({"feedback", "-j", ws("three.json"), "--format", "json", "--thresholds", "3"});
  REQUIRE(json.code == 0);
  const auto doc = codec::parse(json.out);
  CHECK(doc["thresholds"] == codec::Json::array({3.0}));
  const double normal = doc["tails"]["exceedance"][0][0];
  const double cauchy = doc["tails"]["exceedance"][2][0];
  CHECK(std::fabs(cauchy / normal - 52.0) <= 3.0);
  CHECK(run({"feedback", "-j", ws("three.json"), "--probs", "0.1,x"}).code == 2);
}

TEST_CASE("figure one: curves pass through the dots") {
  Workspace ws;
  const auto r = run({"figure", "-j", ws("three.json"), "--out", ws("fig1.csv"), "--x-min", "-3", "--x-max", "3",
                      "--points", "60001"});
  REQUIRE(r.code == 0);
  std::vector<std::string> header;
  const auto rows = read_csv(io::read_text_file(ws("fig1.csv")), header);
  CHECK(header == std::vector<std::string>{"x", "cdf_normal", "cdf_t5", "cdf_cauchy"});
  CHECK(fs::exists(ws("fig1.json")));
  const auto three = canonical_set(CanonicalKind::Three);
  for (const auto& j : three.judgements()) {
    std::size_t k = 0;
    while (rows[k + 1][0] < j.value) ++k;
    const double t = (j.value - rows[k][0]) / (rows[k + 1][0] - rows[k][0]);
    for (std::size_t c = 1; c < header.size(); ++c) {
      const double p = rows[k][c] + t * (rows[k + 1][c] - rows[k][c]);
      CHECK(std::fabs(p - j.probability) <= 1e-6);
    }
  }
}

TEST_CASE("figure two: SVG with three curves through five rectangles") {
  Workspace ws;
  const auto r = run({"figure", "--judgements", ws("five.json"), "--dp", "0.05", "--dx", "0.05", "--families",
                      "normal,t5,cauchy", "--out", ws("fig2.svg"), "--csv", ws("fig2.csv")});
  REQUIRE(r.code == 0);
  const auto svg = io::read_text_file(ws("fig2.svg"));
  std::size_t curves = 0, boxes = 0;
  for (auto p = svg.find("class=\"curve\""); p != std::string::npos; p = svg.find("class=\"curve\"", p + 1)) ++curves;
  for (auto p = svg.find("class=\"box\""); p != std::string::npos; p = svg.find("class=\"box\"", p + 1)) ++boxes;
  CHECK(curves == 3);
  CHECK(boxes == 5);
  const auto sidecar = codec::parse(io::read_text_file(ws("fig2.json")));
  CHECK(sidecar["rectangles"].size() == 5);
}

TEST_CASE("exit codes") {
  Workspace ws;
  const auto missing = run({"fit", "-j", ws("nope.json")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("input file not found: " + ws("nope.json")) != std::string::npos);
  CHECK(run({"fit"}).code == 2);
  CHECK(run({"fit", "-j", ws("five.json"), "--bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"fit", "-j", ws("five.json"), "--family", "gumbel"}).code == 2);
  CHECK(run({"fit", "-j", ws("five.json"), "--format", "xml"}).code == 2);
  const auto invalid = run({"fit", "-j", ws("bad.json")});
  CHECK(invalid.code == 1);
  CHECK_FALSE(invalid.err.empty());
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("session commands") {
  Workspace ws;
  const auto session = ws("s.json");
  REQUIRE(run({"session", "new", "--id", "cli1", "--label", "X", "--out", session}).code == 0);

  const auto three = codec::encode(canonical_set(CanonicalKind::Three));
  const auto add = codec::Json{{"type", "AddJudgements"}, {"judgement_set", three}}.dump();
  CHECK(run({"session", "apply", "-s", session, "--event-json", R"({"type":"Fit","families":["normal"]})"}).code == 1);
  CHECK(run({"session", "apply", "-s", session, "--event-json", add}).code == 0);
  io::write_text_file(ws("fit.json"), R"({"type":"Fit","families":["normal","t5","cauchy"]})");
  CHECK(run({"session", "apply", "-s", session, "--event", ws("fit.json")}).code == 0);
  CHECK(run({"session", "apply", "-s", session, "--event-json", R"({"type":"ShowFeedback"})"}).code == 0);
  CHECK(run({"session", "apply", "-s", session, "--event-json", R"({"type":"Finalize"})"}).code == 0);

  const auto loaded = load(io::read_text_file(session));
  CHECK(loaded.state == SessionState::Finalized);

  const auto show = run({"session", "show", "-s", session});
  CHECK(show.out.find("Finalized") != std::string::npos);
  CHECK(run({"session", "show", "-s", session, "--format", "json"}).out == io::read_text_file(session));

  const auto replay = run({"session", "replay", "-s", session});
  CHECK(replay.code == 0);
  CHECK(replay.out == "identical\n");

  // A tampered document no longer matches its own event log.
  auto doc = codec::parse(io::read_text_file(session));
  doc["rounds"][0]["judgement_set"]["judgements"][0]["x"] = -0.7;
  io::write_text_file(ws("tampered.json"), save(load(doc.dump())));
  CHECK(run({"session", "replay", "-s", ws("tampered.json")}).code == 1);

  CHECK(run({"session", "show", "-s", ws("absent.json")}).code == 2);
  CHECK(run({"session", "apply", "-s", session}).code == 2);
}
