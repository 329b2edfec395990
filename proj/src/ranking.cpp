#include "sepidx/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace sepidx {

namespace {

double checked_precomputed(double si, const std::string& name) {
  if (!std::isfinite(si) || si < 0.0 || si > 1.0) {
    throw Error(Errc::InvalidArgument, "precomputed SI must lie in [0, 1]", name);
  }
  return si;
}

void check_label_sequences(const Baseline& baseline, std::span<const CandidateInput> candidates) {
  const LabeledFeatureSet* reference = std::get_if<LabeledFeatureSet>(&baseline);
  std::string reference_name = "baseline";
  for (const auto& c : candidates) {
    const auto* emb = c.embedding();
    if (emb == nullptr) continue;
    if (reference == nullptr) {
      reference = emb;
      reference_name = c.candidate_name;
      continue;
    }
    if (emb->labels != reference->labels) {
      throw Error(Errc::LabelSequenceMismatch,
                  "labels of candidate '" + c.candidate_name + "' differ from those of '" +
                      reference_name + "'",
                  c.candidate_name);
    }
  }
}

}  // namespace

bool ranks_before(const CandidateScore& a, const CandidateScore& b) noexcept {
  if (a.si != b.si) return a.si > b.si;
  return a.candidate_name < b.candidate_name;
}

CandidateScore score_candidate(const CandidateInput& candidate, const EngineOptions& options) {
  if (const auto* emb = candidate.embedding()) {
    CandidateScore score = separation_index(*emb, options);
    score.candidate_name = candidate.candidate_name;
    return score;
  }
  CandidateScore score;
  score.candidate_name = candidate.candidate_name;
  score.si = checked_precomputed(std::get<double>(candidate.source), candidate.candidate_name);
  return score;
}

RankingReport rank_scores(double baseline_si, std::vector<CandidateScore> scores) {
  if (scores.empty()) throw Error(Errc::EmptyCandidateList, "no candidates to rank");
  std::set<std::string> seen;
  for (const auto& s : scores) {
    if (!seen.insert(s.candidate_name).second) {
      throw Error(Errc::DuplicateCandidateName, "duplicate candidate name '" + s.candidate_name + "'",
                  s.candidate_name);
    }
  }

  RankingReport report;
  report.baseline_si = baseline_si;
  report.total_candidates = scores.size();
  std::sort(scores.begin(), scores.end(), ranks_before);
  for (auto& s : scores) {
    report.metadata.fixture_mode = report.metadata.fixture_mode || s.precomputed();
    // Equality with the baseline is accepted.
    (s.si < baseline_si ? report.rejected : report.accepted).push_back(std::move(s));
  }
  return report;
}

RankingReport rank_candidates(const Baseline& baseline, std::span<const CandidateInput> candidates,
                              const EngineOptions& options) {
  if (candidates.empty()) throw Error(Errc::EmptyCandidateList, "no candidates to rank");
  std::set<std::string> seen;
  for (const auto& c : candidates) {
    if (!seen.insert(c.candidate_name).second) {
      throw Error(Errc::DuplicateCandidateName,
                  "duplicate candidate name '" + c.candidate_name + "'", c.candidate_name);
    }
  }
  check_label_sequences(baseline, candidates);

  double baseline_si = 0.0;
  bool baseline_fixture = false;
  if (const auto* emb = std::get_if<LabeledFeatureSet>(&baseline)) {
    baseline_si = separation_index(*emb, options).si;
  } else {
    baseline_si = checked_precomputed(std::get<double>(baseline), "baseline");
    baseline_fixture = true;
  }

  std::vector<CandidateScore> scores;
  scores.reserve(candidates.size());
  for (const auto& c : candidates) scores.push_back(score_candidate(c, options));

  RankingReport report = rank_scores(baseline_si, std::move(scores));
  report.metadata.fixture_mode = report.metadata.fixture_mode || baseline_fixture;
  for (const auto& c : candidates) {
    if (c.reported_accuracy) report.reported_accuracy[c.candidate_name] = *c.reported_accuracy;
  }
  return report;
}

}  // namespace sepidx
