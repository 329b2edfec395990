#include "sepidx/reporting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "sepidx/error.hpp"

namespace sepidx {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw Error(Errc::LengthMismatch, "correlation inputs have lengths " + std::to_string(x.size()) +
                                          " and " + std::to_string(y.size()));
  }
  if (x.size() < 2) throw Error(Errc::InvalidArgument, "correlation needs at least 2 values");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) {
      throw Error(Errc::NonFiniteValue, "non-finite correlation input at " + std::to_string(i));
    }
  }
}

}  // namespace

std::vector<double> fractional_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i + 1;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    // positions i..j-1 (0-based) share the average 1-based rank
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto rx = fractional_ranks(x);
  const auto ry = fractional_ranks(y);
  return pearson(rx, ry);
}

CorrelationSummary correlation_report(const RankingReport& report,
                                      const std::map<std::string, double>& accuracies) {
  CorrelationSummary summary;
  summary.metadata.fixture_mode = report.metadata.fixture_mode;
  summary.metadata.inputs = report.metadata.inputs;
  for (const auto* group : {&report.accepted, &report.rejected}) {
    for (const auto& score : *group) {
      if (auto it = accuracies.find(score.candidate_name); it != accuracies.end()) {
        summary.points.push_back({score.candidate_name, score.si, it->second});
      }
    }
  }
  if (summary.points.size() < 2) {
    throw Error(Errc::InsufficientOverlap,
                "accuracies cover " + std::to_string(summary.points.size()) +
                    " ranked candidate(s); at least 2 are needed");
  }

  std::vector<double> si, acc;
  for (const auto& p : summary.points) {
    si.push_back(p.si);
    acc.push_back(p.accuracy);
  }
  summary.spearman = spearman(si, acc);
  summary.pearson = pearson(si, acc);

  for (std::size_t i = 0; i < summary.points.size(); ++i) {
    for (std::size_t j = i + 1; j < summary.points.size(); ++j) {
      const auto& a = summary.points[i];
      const auto& b = summary.points[j];
      const bool opposite = (a.si > b.si && a.accuracy < b.accuracy) ||
                            (a.si < b.si && a.accuracy > b.accuracy);
      if (!opposite) continue;
      if (a.si > b.si) {
        summary.violations.emplace_back(a.name, b.name);
      } else {
        summary.violations.emplace_back(b.name, a.name);
      }
    }
  }
  return summary;
}

}  // namespace sepidx
