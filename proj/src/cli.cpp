#include "sepidx/cli.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iomanip>
#include <ostream>

#include "CLI11.hpp"
#include "sepidx/engine.hpp"
#include "sepidx/formats.hpp"
#include "sepidx/json_io.hpp"
#include "sepidx/manifest.hpp"
#include "sepidx/ranking.hpp"
#include "sepidx/reporting.hpp"
#include "sepidx/stability.hpp"

namespace sepidx {

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

unsigned threads_from(int flag) {
  if (flag > 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("SEPIDX_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return 0;
}

void stamp(ReportMetadata& metadata, bool canonical) {
  metadata.created_at = canonical ? kCanonicalTimestamp : utc_now();
}

void write_text(const std::string& path, const std::string& text) {
  write_file_bytes(path, std::as_bytes(std::span(text.data(), text.size())));
}

std::string read_text(const std::string& path) {
  const auto bytes = read_file_bytes(path);
  return {reinterpret_cast<const char*>(bytes.data()), bytes.size()};
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void print_ranking(const RankingReport& report, std::ostream& out) {
  std::size_t width = 9;
  for (const auto* group : {&report.accepted, &report.rejected}) {
    for (const auto& s : *group) width = std::max(width, s.candidate_name.size());
  }
  out << std::left << std::setw(6) << "rank" << std::setw(static_cast<int>(width + 2)) << "candidate"
      << std::setw(10) << "SI" << "status\n";
  std::size_t rank = 1;
  for (const auto& s : report.accepted) {
    out << std::setw(6) << rank++ << std::setw(static_cast<int>(width + 2)) << s.candidate_name
        << std::setw(10) << fixed6(s.si) << "ACCEPTED\n";
  }
  for (const auto& s : report.rejected) {
    out << std::setw(6) << "-" << std::setw(static_cast<int>(width + 2)) << s.candidate_name
        << std::setw(10) << fixed6(s.si) << "REJECTED\n";
  }
  out << "baseline SI0 = " << fixed6(report.baseline_si) << "; accepted T=" << report.accepted.size()
      << ", rejected N=" << report.rejected.size() << "\n";
}

struct SiArgs {
  std::string input;
  bool csv = false;
  std::string label_column = "label";
  bool json = false;
  int threads = 0;
};

struct RankArgs {
  std::string manifest;
  std::string out;
  bool canonical = false;
  int threads = 0;
};

struct StabilityArgs {
  std::string manifest;
  std::vector<double> fractions;
  std::uint32_t trials = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool stratified = false;
  bool canonical = false;
  int threads = 0;
};

struct CorrelateArgs {
  std::string report;
  std::string accuracies;
  std::string out;
  bool canonical = false;
};

int cmd_si(const SiArgs& a, std::ostream& out) {
  LabeledFeatureSet fs = a.csv ? read_csv(a.input, a.label_column) : read_sidx(a.input);
  const auto score = separation_index(fs, {threads_from(a.threads)});
  if (a.json) {
    out << emit_json(score);
  } else {
    out << fixed6(score.si) << "\n";
  }
  return 0;
}

int cmd_rank(const RankArgs& a, std::ostream& out) {
  const auto manifest = load_manifest(a.manifest);
  const auto run = load_inputs(manifest);
  auto report = rank_candidates(run.baseline, run.candidates, {threads_from(a.threads)});
  report.metadata.inputs = run.inputs;
  stamp(report.metadata, a.canonical);
  write_text(a.out, emit_json(report));
  print_ranking(report, out);
  return 0;
}

int cmd_stability(const StabilityArgs& a, std::ostream& out) {
  const auto manifest = load_manifest(a.manifest);
  if (!manifest.baseline.embedding) {
    throw Error(Errc::FixtureModeUnsupported, "stability needs a baseline embedding, not a precomputed SI");
  }
  for (const auto& c : manifest.candidates) {
    if (!c.embedding) {
      throw Error(Errc::FixtureModeUnsupported,
                  "candidate '" + c.name + "' has a precomputed SI; stability needs embeddings", c.name);
    }
  }
  const auto run = load_inputs(manifest);
  StabilityOptions options;
  options.fractions = a.fractions;
  options.trials = a.trials;
  options.seed = a.seed;
  options.stratified = a.stratified;
  auto report = stability_study(std::get<LabeledFeatureSet>(run.baseline), run.candidates, options,
                                {threads_from(a.threads)});
  report.metadata.inputs = run.inputs;
  stamp(report.metadata, a.canonical);
  write_text(a.out, emit_json(report));
  for (std::size_t f = 0; f < report.fractions.size(); ++f) {
    out << "fraction " << fixed6(report.fractions[f]) << "  rank agreement ";
    const auto& agreement = report.rank_agreement[f];
    out << (agreement ? fixed6(*agreement) : std::string("undefined")) << "\n";
  }
  return 0;
}

int cmd_correlate(const CorrelateArgs& a, std::ostream& out) {
  const auto report = parse_ranking_report(read_text(a.report));
  const auto accuracies = parse_accuracies(read_text(a.accuracies));
  auto summary = correlation_report(report, accuracies);
  stamp(summary.metadata, a.canonical);
  write_text(a.out, emit_json(summary));
  out << "spearman " << (summary.spearman ? fixed6(*summary.spearman) : std::string("undefined"))
      << "\npearson  " << (summary.pearson ? fixed6(*summary.pearson) : std::string("undefined"))
      << "\nviolations " << summary.violations.size() << "\n";
  for (const auto& [first, second] : summary.violations) out << "  " << first << " / " << second << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Separation index toolkit: score, rank and reject feature extractors", "sepidx"};
  app.require_subcommand(1);

  SiArgs si;
  auto* si_cmd = app.add_subcommand("si", "Separation index of one labelled feature file");
  si_cmd->add_option("--input", si.input, "SIDX file (or CSV with --csv)")->required();
  si_cmd->add_flag("--csv", si.csv, "Read the input as CSV");
  si_cmd->add_option("--label-column", si.label_column, "Label column for CSV input");
  si_cmd->add_flag("--json", si.json, "Print the score as JSON");
  si_cmd->add_option("--threads", si.threads, "Worker threads (default: SEPIDX_THREADS or all cores)");

  RankArgs rank;
  auto* rank_cmd = app.add_subcommand("rank", "Rank and reject candidates listed in a manifest");
  rank_cmd->add_option("--manifest", rank.manifest, "Run manifest (sepidx-manifest/1)")->required();
  rank_cmd->add_option("--out", rank.out, "Report path")->required();
  rank_cmd->add_flag("--canonical", rank.canonical, "Zero timestamps for byte-reproducible output");
  rank_cmd->add_option("--threads", rank.threads, "Worker threads");

  StabilityArgs stab;
  auto* stab_cmd = app.add_subcommand("stability", "Re-score candidates on random subsamples");
  stab_cmd->add_option("--manifest", stab.manifest, "Run manifest with embeddings")->required();
  stab_cmd->add_option("--fractions", stab.fractions, "Comma-separated fractions in (0, 1]")
      ->required()
      ->delimiter(',');
  stab_cmd->add_option("--trials", stab.trials, "Subsamples per fraction")->check(CLI::PositiveNumber);
  stab_cmd->add_option("--seed", stab.seed, "Root seed");
  stab_cmd->add_option("--out", stab.out, "Report path")->required();
  stab_cmd->add_flag("--stratified", stab.stratified, "Keep class proportions in each subsample");
  stab_cmd->add_flag("--canonical", stab.canonical, "Zero timestamps");
  stab_cmd->add_option("--threads", stab.threads, "Worker threads");

  CorrelateArgs corr;
  auto* corr_cmd = app.add_subcommand("correlate", "Rank correlation between SI and accuracy");
  corr_cmd->add_option("--report", corr.report, "Ranking report from `rank`")->required();
  corr_cmd->add_option("--accuracies", corr.accuracies, "JSON object name -> accuracy")->required();
  corr_cmd->add_option("--out", corr.out, "Summary path")->required();
  corr_cmd->add_flag("--canonical", corr.canonical, "Zero timestamps");

  std::vector<const char*> argv{"sepidx"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    // Prints help to `out` (exit 0) or the parse error to `err`.
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    if (*si_cmd) return cmd_si(si, out);
    if (*rank_cmd) return cmd_rank(rank, out);
    if (*stab_cmd) return cmd_stability(stab, out);
    if (*corr_cmd) return cmd_correlate(corr, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace sepidx
