#include "sepidx/stability.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

#include "sepidx/reporting.hpp"

namespace sepidx {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

void check_fraction(double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw Error(Errc::InvalidArgument, "subsample fraction must lie in (0, 1], got " +
                                           std::to_string(fraction));
  }
}

// Partial Fisher-Yates over [0, n): the first k positions are the sample.
std::vector<std::size_t> draw(std::size_t n, std::size_t k, KeyedStream& stream) {
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(stream.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

KeyedStream::KeyedStream(std::uint64_t seed, double fraction, std::uint32_t trial,
                         std::uint64_t lane) noexcept {
  std::uint64_t k = splitmix64(seed + kGamma);
  k = splitmix64(k ^ std::bit_cast<std::uint64_t>(fraction));
  k = splitmix64(k ^ (static_cast<std::uint64_t>(trial) + kGamma));
  key_ = splitmix64(k ^ (lane * kGamma));
}

std::uint64_t KeyedStream::next() noexcept {
  ++counter_;
  return splitmix64(key_ + counter_ * kGamma);
}

std::uint64_t KeyedStream::below(std::uint64_t bound) noexcept {
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

std::size_t subsample_size(std::size_t q, double fraction) {
  check_fraction(fraction);
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(q)));
}

std::vector<std::size_t> subsample_indices(std::span<const Label> labels, double fraction,
                                           std::uint64_t seed, std::uint32_t trial,
                                           bool stratified) {
  const std::size_t q = labels.size();
  const std::size_t k = subsample_size(q, fraction);
  if (k < 2) {
    throw Error(Errc::SubsampleTooSmall, "fraction " + std::to_string(fraction) + " of " +
                                             std::to_string(q) + " points leaves " +
                                             std::to_string(k));
  }

  std::vector<std::size_t> picked;
  if (!stratified) {
    KeyedStream stream(seed, fraction, trial);
    picked = draw(q, k, stream);
  } else {
    std::map<Label, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < q; ++i) members[labels[i]].push_back(i);

    struct Quota {
      Label label;
      std::size_t take;
      double remainder;
    };
    std::vector<Quota> quotas;
    std::size_t assigned = 0;
    for (const auto& [label, rows] : members) {
      const double exact = fraction * static_cast<double>(rows.size());
      const auto base = static_cast<std::size_t>(std::floor(exact));
      quotas.push_back({label, base, exact - static_cast<double>(base)});
      assigned += base;
    }
    std::vector<std::size_t> order(quotas.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return quotas[a].remainder > quotas[b].remainder;
    });
    for (std::size_t i = 0; assigned < k && i < order.size(); ++i) {
      auto& quota = quotas[order[i]];
      if (quota.take < members[quota.label].size()) {
        ++quota.take;
        ++assigned;
      }
    }
    for (const auto& quota : quotas) {
      const auto& rows = members[quota.label];
      KeyedStream stream(seed, fraction, trial, static_cast<std::uint64_t>(quota.label) + 1);
      for (std::size_t pos : draw(rows.size(), quota.take, stream)) picked.push_back(rows[pos]);
    }
  }
  std::sort(picked.begin(), picked.end());
  return picked;
}

LabeledFeatureSet subsample(const LabeledFeatureSet& fs, double fraction, std::uint64_t seed,
                            std::uint32_t trial, bool stratified) {
  validate(fs);
  return select_rows(fs, subsample_indices(fs.labels, fraction, seed, trial, stratified));
}

StabilityReport stability_study(const LabeledFeatureSet& baseline,
                                std::span<const CandidateInput> candidates,
                                const StabilityOptions& options, const EngineOptions& engine) {
  if (candidates.empty()) throw Error(Errc::EmptyCandidateList, "no candidates for the study");
  if (options.fractions.empty()) throw Error(Errc::InvalidArgument, "no subsample fractions");
  if (options.trials < 1) throw Error(Errc::InvalidArgument, "trials must be at least 1");
  for (double f : options.fractions) check_fraction(f);
  validate(baseline);
  for (const auto& c : candidates) {
    if (c.embedding() == nullptr) {
      throw Error(Errc::FixtureModeUnsupported,
                  "candidate '" + c.candidate_name + "' has no embedding to subsample",
                  c.candidate_name);
    }
  }
  std::vector<std::string> names;
  for (const auto& c : candidates) {
    if (std::find(names.begin(), names.end(), c.candidate_name) != names.end()) {
      throw Error(Errc::DuplicateCandidateName,
                  "duplicate candidate name '" + c.candidate_name + "'", c.candidate_name);
    }
    if (c.embedding()->labels != baseline.labels) {
      throw Error(Errc::LabelSequenceMismatch,
                  "labels of candidate '" + c.candidate_name + "' differ from the baseline",
                  c.candidate_name);
    }
    names.push_back(c.candidate_name);
  }

  StabilityReport report;
  report.fractions = options.fractions;
  report.trials = options.trials;
  report.seed = options.seed;
  report.stratified = options.stratified;
  report.candidate_names = names;

  const std::size_t m = candidates.size();
  const std::size_t nf = options.fractions.size();
  for (const auto& c : candidates) {
    report.full_si.push_back(separation_index(*c.embedding(), engine).si);
  }
  report.scores.assign(m, std::vector<std::vector<double>>(nf));
  report.baseline_scores.assign(nf, {});
  report.mean_si.assign(m, std::vector<double>(nf, 0.0));

  for (std::size_t f = 0; f < nf; ++f) {
    for (std::uint32_t t = 0; t < options.trials; ++t) {
      const auto rows =
          subsample_indices(baseline.labels, options.fractions[f], options.seed, t, options.stratified);
      report.baseline_scores[f].push_back(
          separation_index(select_rows(baseline, rows), engine).si);
      for (std::size_t c = 0; c < m; ++c) {
        report.scores[c][f].push_back(
            separation_index(select_rows(*candidates[c].embedding(), rows), engine).si);
      }
    }
    for (std::size_t c = 0; c < m; ++c) {
      const auto& s = report.scores[c][f];
      report.mean_si[c][f] = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
    }
  }

  for (std::size_t f = 0; f < nf; ++f) {
    if (m < 2) {
      report.rank_agreement.push_back(std::nullopt);
      continue;
    }
    std::vector<double> means(m);
    for (std::size_t c = 0; c < m; ++c) means[c] = report.mean_si[c][f];
    report.rank_agreement.push_back(spearman(report.full_si, means));
  }
  return report;
}

}  // namespace sepidx
