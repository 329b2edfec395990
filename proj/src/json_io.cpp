#include "sepidx/json_io.hpp"

#include <charconv>
#include <cmath>

#include "json.hpp"
#include "sepidx/error.hpp"
#include "json_reader.hpp"

namespace sepidx {

using nlohmann::json;

namespace {

void write_real(double v, std::string& out) {
  char buf[64];
  // Shortest text that parses back to the same double; keep a decimal point
  // so integral reals stay reals.
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  const std::string_view text(buf, static_cast<std::size_t>(res.ptr - buf));
  out += text;
  if (text.find_first_of(".e") == std::string_view::npos) out += ".0";
}

void write_value(const json& j, std::string& out, int indent) {
  const auto pad = [&](int n) { out.append(static_cast<std::size_t>(n), ' '); };
  switch (j.type()) {
    case json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (const auto& [key, value] : j.items()) {
        if (!first) out += ",\n";
        first = false;
        pad(indent + 2);
        out += json(key).dump(-1, ' ', false, json::error_handler_t::replace);
        out += ": ";
        write_value(value, out, indent + 2);
      }
      out += "\n";
      pad(indent);
      out += "}";
      return;
    }
    case json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ",\n";
        pad(indent + 2);
        write_value(j[i], out, indent + 2);
      }
      out += "\n";
      pad(indent);
      out += "]";
      return;
    }
    case json::value_t::number_float:
      write_real(j.get<double>(), out);
      return;
    case json::value_t::string:
      out += j.dump(-1, ' ', false, json::error_handler_t::replace);
      return;
    default:
      out += j.dump();
      return;
  }
}

std::string canonical(const json& j) {
  std::string out;
  write_value(j, out, 0);
  out += "\n";
  return out;
}

json optional_real(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json to_json_value(const CandidateScore& s) {
  json j;
  j["candidate_name"] = s.candidate_name;
  j["si_value"] = s.si;
  j["match_count"] = s.match_count ? json(*s.match_count) : json(nullptr);
  j["q"] = s.q ? json(*s.q) : json(nullptr);
  return j;
}

json to_json_value(const ReportMetadata& m) {
  json inputs = json::array();
  for (const auto& in : m.inputs) {
    inputs.push_back({{"role", in.role},
                      {"name", in.name},
                      {"path", in.path},
                      {"sha256", in.sha256},
                      {"narrowed_from_f64", in.narrowed_from_f64}});
  }
  return {{"tool_version", m.tool_version},
          {"created_at", m.created_at},
          {"fixture_mode", m.fixture_mode},
          {"inputs", inputs}};
}

json header(const char* kind) { return {{"schema", kReportSchema}, {"kind", kind}}; }

CandidateScore read_score(const JsonReader& r) {
  CandidateScore s;
  s.candidate_name = r["candidate_name"].string();
  s.si = r["si_value"].real();
  if (s.si < 0.0 || s.si > 1.0) r["si_value"].fail("SI must lie in [0, 1]");
  s.match_count = r["match_count"].optional_unsigned();
  s.q = r["q"].optional_unsigned();
  if (s.match_count.has_value() != s.q.has_value()) {
    r.fail("match_count and q must both be present or both null");
  }
  if (s.q && *s.match_count > *s.q) r["match_count"].fail("match_count exceeds q");
  return s;
}

ReportMetadata read_metadata(const JsonReader& r) {
  ReportMetadata m;
  m.tool_version = r["tool_version"].string();
  m.created_at = r["created_at"].string();
  m.fixture_mode = r["fixture_mode"].boolean();
  const auto inputs = r["inputs"];
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const auto in = inputs[i];
    m.inputs.push_back({in["role"].string(), in["name"].string(), in["path"].string(),
                        in["sha256"].string(), in["narrowed_from_f64"].boolean()});
  }
  return m;
}

void check_header(const JsonReader& r, const char* kind) {
  if (r["schema"].string() != kReportSchema) r["schema"].fail("expected \"sepidx-report/1\"");
  if (r["kind"].string() != kind) r["kind"].fail(std::string("expected \"") + kind + "\"");
}

std::vector<double> read_reals(const JsonReader& r) {
  std::vector<double> out;
  for (std::size_t i = 0; i < r.size(); ++i) out.push_back(r[i].real());
  return out;
}

}  // namespace

void zero_timestamps(ReportMetadata& metadata) { metadata.created_at = kCanonicalTimestamp; }

std::string emit_json(const CandidateScore& score) { return canonical(to_json_value(score)); }

std::string emit_json(const RankingReport& report) {
  json j = header("ranking");
  j["baseline_si"] = report.baseline_si;
  json accepted = json::array(), rejected = json::array();
  for (const auto& s : report.accepted) accepted.push_back(to_json_value(s));
  for (const auto& s : report.rejected) rejected.push_back(to_json_value(s));
  j["accepted"] = accepted;
  j["rejected"] = rejected;
  j["accepted_count"] = report.accepted.size();
  j["rejected_count"] = report.rejected.size();
  j["total_candidates"] = report.total_candidates;
  json acc = json::object();
  for (const auto& [name, value] : report.reported_accuracy) acc[name] = value;
  j["reported_accuracy"] = acc;
  j["metadata"] = to_json_value(report.metadata);
  return canonical(j);
}

std::string emit_json(const StabilityReport& report) {
  json j = header("stability");
  j["fractions"] = report.fractions;
  j["trials"] = report.trials;
  j["seed"] = report.seed;
  j["stratified"] = report.stratified;
  json candidates = json::array();
  for (std::size_t c = 0; c < report.candidate_names.size(); ++c) {
    candidates.push_back({{"name", report.candidate_names[c]},
                          {"full_si", report.full_si[c]},
                          {"mean_si", report.mean_si[c]},
                          {"scores", report.scores[c]}});
  }
  j["candidates"] = candidates;
  j["baseline_scores"] = report.baseline_scores;
  json agreement = json::array();
  for (const auto& a : report.rank_agreement) agreement.push_back(optional_real(a));
  j["rank_agreement"] = agreement;
  j["metadata"] = to_json_value(report.metadata);
  return canonical(j);
}

std::string emit_json(const CorrelationSummary& summary) {
  json j = header("correlation");
  json points = json::array();
  for (const auto& p : summary.points) {
    points.push_back({{"name", p.name}, {"si", p.si}, {"accuracy", p.accuracy}});
  }
  j["points"] = points;
  j["spearman"] = optional_real(summary.spearman);
  j["pearson"] = optional_real(summary.pearson);
  json violations = json::array();
  for (const auto& [a, b] : summary.violations) violations.push_back(json::array({a, b}));
  j["violations"] = violations;
  j["metadata"] = to_json_value(summary.metadata);
  return canonical(j);
}

CandidateScore parse_candidate_score(std::string_view text) {
  const json doc = parse_json_document(text);
  return read_score(JsonReader(doc));
}

RankingReport parse_ranking_report(std::string_view text) {
  const json doc = parse_json_document(text);
  const JsonReader r(doc);
  check_header(r, "ranking");
  RankingReport report;
  report.baseline_si = r["baseline_si"].real();
  const auto accepted = r["accepted"];
  for (std::size_t i = 0; i < accepted.size(); ++i) report.accepted.push_back(read_score(accepted[i]));
  const auto rejected = r["rejected"];
  for (std::size_t i = 0; i < rejected.size(); ++i) report.rejected.push_back(read_score(rejected[i]));
  report.total_candidates = r["total_candidates"].unsigned_integer();
  if (r["accepted_count"].unsigned_integer() != report.accepted.size()) {
    r["accepted_count"].fail("does not match the accepted list");
  }
  if (r["rejected_count"].unsigned_integer() != report.rejected.size()) {
    r["rejected_count"].fail("does not match the rejected list");
  }
  if (report.total_candidates != report.accepted.size() + report.rejected.size()) {
    r["total_candidates"].fail("must equal accepted_count + rejected_count");
  }
  const auto acc = r["reported_accuracy"];
  for (const auto& key : acc.keys()) report.reported_accuracy[key] = acc[key].real();
  report.metadata = read_metadata(r["metadata"]);
  return report;
}

StabilityReport parse_stability_report(std::string_view text) {
  const json doc = parse_json_document(text);
  const JsonReader r(doc);
  check_header(r, "stability");
  StabilityReport report;
  report.fractions = read_reals(r["fractions"]);
  report.trials = static_cast<std::uint32_t>(r["trials"].unsigned_integer());
  report.seed = r["seed"].unsigned_integer();
  report.stratified = r["stratified"].boolean();
  const std::size_t nf = report.fractions.size();
  const auto candidates = r["candidates"];
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    const auto cand = candidates[c];
    report.candidate_names.push_back(cand["name"].string());
    report.full_si.push_back(cand["full_si"].real());
    report.mean_si.push_back(read_reals(cand["mean_si"]));
    if (report.mean_si.back().size() != nf) cand["mean_si"].fail("expected one value per fraction");
    const auto grid = cand["scores"];
    if (grid.size() != nf) grid.fail("expected one row per fraction");
    std::vector<std::vector<double>> rows;
    for (std::size_t f = 0; f < nf; ++f) rows.push_back(read_reals(grid[f]));
    report.scores.push_back(std::move(rows));
  }
  const auto baseline = r["baseline_scores"];
  for (std::size_t f = 0; f < baseline.size(); ++f) {
    report.baseline_scores.push_back(read_reals(baseline[f]));
  }
  const auto agreement = r["rank_agreement"];
  for (std::size_t f = 0; f < agreement.size(); ++f) {
    report.rank_agreement.push_back(agreement[f].optional_real());
  }
  report.metadata = read_metadata(r["metadata"]);
  return report;
}

CorrelationSummary parse_correlation_summary(std::string_view text) {
  const json doc = parse_json_document(text);
  const JsonReader r(doc);
  check_header(r, "correlation");
  CorrelationSummary summary;
  const auto points = r["points"];
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto p = points[i];
    summary.points.push_back({p["name"].string(), p["si"].real(), p["accuracy"].real()});
  }
  summary.spearman = r["spearman"].optional_real();
  summary.pearson = r["pearson"].optional_real();
  const auto violations = r["violations"];
  for (std::size_t i = 0; i < violations.size(); ++i) {
    const auto pair = violations[i];
    if (pair.size() != 2) pair.fail("expected a pair of names");
    summary.violations.emplace_back(pair[0].string(), pair[1].string());
  }
  summary.metadata = read_metadata(r["metadata"]);
  return summary;
}

std::map<std::string, double> parse_accuracies(std::string_view text) {
  const json doc = parse_json_document(text);
  const JsonReader r(doc);
  std::map<std::string, double> out;
  for (const auto& key : r.keys()) {
    const double v = r[key].real();
    if (!std::isfinite(v)) r[key].fail("accuracy must be finite");
    out[key] = v;
  }
  return out;
}

}  // namespace sepidx
