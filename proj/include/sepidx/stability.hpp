#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sepidx/engine.hpp"
#include "sepidx/feature_set.hpp"
#include "sepidx/ranking.hpp"
#include "sepidx/reports.hpp"

namespace sepidx {

/// Counter-based random stream keyed on (seed, fraction, trial, lane). The
/// n-th output is SplitMix64 evaluated at key + n * gamma, so a stream depends
/// only on its key and never on the order in which streams are used.
class KeyedStream {
 public:
  KeyedStream(std::uint64_t seed, double fraction, std::uint32_t trial, std::uint64_t lane = 0) noexcept;

  std::uint64_t next() noexcept;
  // Uniform integer in [0, bound), bound > 0. Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// floor(fraction * q), the size of a subsample.
std::size_t subsample_size(std::size_t q, double fraction);

/// Row indices of a uniform sample without replacement, ascending. With
/// `stratified`, per-class quotas follow largest remainders and each class is
/// drawn from its own lane of the stream.
std::vector<std::size_t> subsample_indices(std::span<const Label> labels, double fraction,
                                           std::uint64_t seed, std::uint32_t trial,
                                           bool stratified = false);

LabeledFeatureSet subsample(const LabeledFeatureSet& fs, double fraction, std::uint64_t seed,
                            std::uint32_t trial, bool stratified = false);

struct StabilityOptions {
  std::vector<double> fractions{1.0, 0.75, 0.5};
  std::uint32_t trials = 1;
  std::uint64_t seed = 0;
  bool stratified = false;
};

/// Scores the baseline and every candidate on the same subsample for each
/// (fraction, trial) and compares the full-data ordering with the ordering of
/// trial means.
StabilityReport stability_study(const LabeledFeatureSet& baseline,
                                std::span<const CandidateInput> candidates,
                                const StabilityOptions& options, const EngineOptions& engine = {});

}  // namespace sepidx
