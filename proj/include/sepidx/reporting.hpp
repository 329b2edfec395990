#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sepidx/reports.hpp"

namespace sepidx {

/// 1-based ranks; tied values share the mean of the positions they span.
std::vector<double> fractional_ranks(std::span<const double> values);

/// Pearson correlation. Empty when either input is constant. Throws
/// LengthMismatch for unequal lengths and InvalidArgument for fewer than 2 values.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// Spearman correlation: Pearson correlation of the fractional ranks.
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

/// Pairs the report's candidates with the given accuracies (report order,
/// accepted first) and counts pairs ordered oppositely by SI and accuracy.
/// Throws InsufficientOverlap when fewer than 2 names are shared.
CorrelationSummary correlation_report(const RankingReport& report,
                                      const std::map<std::string, double>& accuracies);

}  // namespace sepidx
