#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sepidx {

inline constexpr const char* kToolVersion = "0.3.0";
inline constexpr const char* kReportSchema = "sepidx-report/1";
inline constexpr const char* kCanonicalTimestamp = "1970-01-01T00:00:00Z";

/// SI of one candidate. `match_count` and `q` are absent for candidates
/// replayed from a precomputed value.
struct CandidateScore {
  std::string candidate_name;
  double si = 0.0;
  std::optional<std::uint64_t> match_count;
  std::optional<std::uint64_t> q;

  bool precomputed() const noexcept { return !match_count.has_value(); }
  bool operator==(const CandidateScore&) const = default;
};

struct InputRecord {
  std::string role;  // "baseline" or "candidate"
  std::string name;
  std::string path;
  std::string sha256;
  bool narrowed_from_f64 = false;
  bool operator==(const InputRecord&) const = default;
};

struct ReportMetadata {
  std::string tool_version = kToolVersion;
  std::string created_at = kCanonicalTimestamp;
  bool fixture_mode = false;
  std::vector<InputRecord> inputs;
  bool operator==(const ReportMetadata&) const = default;
};

struct RankingReport {
  double baseline_si = 0.0;
  std::vector<CandidateScore> accepted;
  std::vector<CandidateScore> rejected;
  std::uint64_t total_candidates = 0;
  // Externally reported accuracies carried for correlation; never used for ranking.
  std::map<std::string, double> reported_accuracy;
  ReportMetadata metadata;

  std::size_t accepted_count() const noexcept { return accepted.size(); }
  std::size_t rejected_count() const noexcept { return rejected.size(); }
  bool operator==(const RankingReport&) const = default;
};

struct StabilityReport {
  std::vector<double> fractions;
  std::uint32_t trials = 1;
  std::uint64_t seed = 0;
  bool stratified = false;
  std::vector<std::string> candidate_names;
  // SI on the full data, one per candidate.
  std::vector<double> full_si;
  // scores[candidate][fraction][trial]
  std::vector<std::vector<std::vector<double>>> scores;
  // baseline_scores[fraction][trial]
  std::vector<std::vector<double>> baseline_scores;
  // mean_si[candidate][fraction]
  std::vector<std::vector<double>> mean_si;
  // Spearman between full-data SIs and trial-mean SIs; empty when undefined.
  std::vector<std::optional<double>> rank_agreement;
  ReportMetadata metadata;

  bool operator==(const StabilityReport&) const = default;
};

struct CorrelationPoint {
  std::string name;
  double si = 0.0;
  double accuracy = 0.0;
  bool operator==(const CorrelationPoint&) const = default;
};

struct CorrelationSummary {
  std::vector<CorrelationPoint> points;
  std::optional<double> spearman;
  std::optional<double> pearson;
  // Pairs ordered one way by SI and the other way by accuracy, higher SI first.
  std::vector<std::pair<std::string, std::string>> violations;
  ReportMetadata metadata;

  bool operator==(const CorrelationSummary&) const = default;
};

}  // namespace sepidx
