#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "sepidx/feature_set.hpp"
#include "sepidx/reports.hpp"

namespace sepidx {

struct EngineOptions {
  // 0 selects std::thread::hardware_concurrency().
  unsigned threads = 0;
};

unsigned resolve_threads(unsigned requested) noexcept;

/// Exact single nearest neighbour of every point, excluding the point itself.
/// Distances are squared Euclidean, accumulated in double over dimensions in
/// increasing order. Among equidistant candidates the smallest index wins.
struct NearestNeighborAssignment {
  std::vector<std::size_t> neighbor_index;
  std::vector<double> neighbor_sq_distance;

  bool operator==(const NearestNeighborAssignment&) const = default;
};

/// Blocked, multi-threaded search. Pairs are visited once per symmetric tile
/// and merged with a (distance, index) minimum, so the result does not depend
/// on the number of threads or on scheduling.
template <typename Scalar>
NearestNeighborAssignment nearest_neighbors(const BasicFeatureSet<Scalar>& fs,
                                            const EngineOptions& options = {});

/// Fraction of points whose nearest neighbour carries the same label.
template <typename Scalar>
CandidateScore separation_index(const BasicFeatureSet<Scalar>& fs,
                                const EngineOptions& options = {});

/// Scores a precomputed assignment. Throws LengthMismatch when `nn` does not
/// have one entry per point.
template <typename Scalar>
CandidateScore separation_index_with_labels(const BasicFeatureSet<Scalar>& fs,
                                            const NearestNeighborAssignment& nn);

CandidateScore score_assignment(std::span<const Label> labels,
                                const NearestNeighborAssignment& nn,
                                std::string name = {});

// Reference implementation: textbook double loop, single thread, no blocking.
template <typename Scalar>
NearestNeighborAssignment naive_nearest_neighbors(const BasicFeatureSet<Scalar>& fs);

template <typename Scalar>
CandidateScore naive_separation_index(const BasicFeatureSet<Scalar>& fs);

extern template NearestNeighborAssignment nearest_neighbors(const BasicFeatureSet<float>&,
                                                            const EngineOptions&);
extern template NearestNeighborAssignment nearest_neighbors(const BasicFeatureSet<double>&,
                                                            const EngineOptions&);
extern template CandidateScore separation_index(const BasicFeatureSet<float>&,
                                                const EngineOptions&);
extern template CandidateScore separation_index(const BasicFeatureSet<double>&,
                                                const EngineOptions&);
extern template CandidateScore separation_index_with_labels(const BasicFeatureSet<float>&,
                                                            const NearestNeighborAssignment&);
extern template CandidateScore separation_index_with_labels(const BasicFeatureSet<double>&,
                                                            const NearestNeighborAssignment&);
extern template NearestNeighborAssignment naive_nearest_neighbors(const BasicFeatureSet<float>&);
extern template NearestNeighborAssignment naive_nearest_neighbors(const BasicFeatureSet<double>&);
extern template CandidateScore naive_separation_index(const BasicFeatureSet<float>&);
extern template CandidateScore naive_separation_index(const BasicFeatureSet<double>&);

}  // namespace sepidx
