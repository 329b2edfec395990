#pragma once

#include <map>
#include <string>
#include <string_view>

#include "sepidx/reports.hpp"

namespace sepidx {

// Canonical JSON: keys sorted bytewise, two-space indent, reals printed in their
// shortest round-trip form, LF line endings, trailing newline. Equal values give
// identical bytes and every real survives a parse unchanged.
std::string emit_json(const CandidateScore& score);
std::string emit_json(const RankingReport& report);
std::string emit_json(const StabilityReport& report);
std::string emit_json(const CorrelationSummary& summary);

// Parsers for the "sepidx-report/1" documents. Violations throw
// SchemaViolation with a JSON pointer in Error::where().
CandidateScore parse_candidate_score(std::string_view text);
RankingReport parse_ranking_report(std::string_view text);
StabilityReport parse_stability_report(std::string_view text);
CorrelationSummary parse_correlation_summary(std::string_view text);

/// {"name": accuracy, ...}
std::map<std::string, double> parse_accuracies(std::string_view text);

/// Replaces every timestamp with the canonical epoch string.
void zero_timestamps(ReportMetadata& metadata);

}  // namespace sepidx
