#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>

#include "sepidx/engine.hpp"
#include "sepidx/feature_set.hpp"
#include "sepidx/reports.hpp"

namespace sepidx {

/// Either a final-layer embedding of the target dataset or, in fixture mode,
/// an already known SI value.
using ScoreSource = std::variant<LabeledFeatureSet, double>;

struct CandidateInput {
  std::string candidate_name;
  ScoreSource source;
  std::optional<double> reported_accuracy;

  const LabeledFeatureSet* embedding() const noexcept {
    return std::get_if<LabeledFeatureSet>(&source);
  }
};

using Baseline = ScoreSource;

CandidateScore score_candidate(const CandidateInput& candidate, const EngineOptions& options = {});

/// Scores every candidate, rejects those strictly below the baseline SI and
/// sorts both groups by descending SI, ties by ascending name.
///
/// Throws EmptyCandidateList, DuplicateCandidateName, or LabelSequenceMismatch
/// when two embeddings (baseline included) disagree on the label sequence.
RankingReport rank_candidates(const Baseline& baseline, std::span<const CandidateInput> candidates,
                              const EngineOptions& options = {});

/// Same partition and ordering as rank_candidates, for already computed scores.
RankingReport rank_scores(double baseline_si, std::vector<CandidateScore> scores);

/// Descending SI, ascending name on ties.
bool ranks_before(const CandidateScore& a, const CandidateScore& b) noexcept;

}  // namespace sepidx
