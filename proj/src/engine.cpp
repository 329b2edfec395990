#include "sepidx/engine.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

namespace sepidx {

namespace {

constexpr Eigen::Index kLanes = 16;  // candidates per packed panel
constexpr Eigen::Index kRows = 4;    // queries per micro-kernel call
constexpr Eigen::Index kTile = 64;   // points per tile side, multiple of kLanes

struct Best {
  double dist = std::numeric_limits<double>::infinity();
  std::size_t index = std::numeric_limits<std::size_t>::max();

  void offer(double d, std::size_t h) noexcept {
    if (d < dist || (d == dist && h < index)) {
      dist = d;
      index = h;
    }
  }
};

// Points regrouped into panels of kLanes rows; within a panel the values of one
// dimension are contiguous: packed[(panel * D + d) * kLanes + lane]. Rows past
// Q are zero and never reported.
template <typename Scalar>
class PackedPoints {
 public:
  PackedPoints(const PointMatrix<Scalar>& points, Eigen::Index padded_rows)
      : dim_(points.cols()), data_(static_cast<std::size_t>(padded_rows * points.cols()), Scalar(0)) {
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
      Scalar* base = panel(r / kLanes) + r % kLanes;
      for (Eigen::Index d = 0; d < dim_; ++d) base[d * kLanes] = points(r, d);
    }
  }

  const Scalar* panel(Eigen::Index p) const { return data_.data() + p * dim_ * kLanes; }
  Eigen::Index dim() const { return dim_; }

 private:
  Scalar* panel(Eigen::Index p) { return data_.data() + p * dim_ * kLanes; }

  Eigen::Index dim_;
  std::vector<Scalar> data_;
};

// Squared distances between kRows consecutive points of one panel (starting at
// `row_lane`) and all kLanes points of another panel. Each distance is summed
// over dimensions in increasing order, one lane per candidate, so the value is
// the same as the scalar loop in naive_nearest_neighbors.
template <typename Scalar>
inline void micro_kernel(const Scalar* row_panel, Eigen::Index row_lane, const Scalar* col_panel,
                         Eigen::Index dim, double out[kRows][kLanes]) {
  using Acc = Eigen::Array<double, kLanes, 1>;
  using Lanes = Eigen::Array<Scalar, kLanes, 1>;
  Acc a0 = Acc::Zero(), a1 = Acc::Zero(), a2 = Acc::Zero(), a3 = Acc::Zero();
  for (Eigen::Index d = 0; d < dim; ++d) {
    const Acc c = Eigen::Map<const Lanes>(col_panel + d * kLanes).template cast<double>();
    const Scalar* q = row_panel + d * kLanes + row_lane;
    a0 += (c - static_cast<double>(q[0])).square();
    a1 += (c - static_cast<double>(q[1])).square();
    a2 += (c - static_cast<double>(q[2])).square();
    a3 += (c - static_cast<double>(q[3])).square();
  }
  Eigen::Map<Acc>{out[0]} = a0;
  Eigen::Map<Acc>{out[1]} = a1;
  Eigen::Map<Acc>{out[2]} = a2;
  Eigen::Map<Acc>{out[3]} = a3;
}

// All pairs between tile `ti` (rows) and tile `tj` (columns), ti <= tj. On the
// diagonal every ordered pair is visited through the row side; off the
// diagonal each unordered pair is computed once and offered to both ends.
template <typename Scalar>
void process_tile(const PackedPoints<Scalar>& packed, std::size_t q, Eigen::Index ti,
                  Eigen::Index tj, std::vector<Best>& best) {
  const bool diagonal = ti == tj;
  const Eigen::Index dim = packed.dim();
  alignas(64) double block[kRows][kLanes];

  for (Eigen::Index i0 = ti * kTile; i0 < (ti + 1) * kTile; i0 += kRows) {
    if (static_cast<std::size_t>(i0) >= q) break;
    const Scalar* row_panel = packed.panel(i0 / kLanes);
    for (Eigen::Index j0 = tj * kTile; j0 < (tj + 1) * kTile; j0 += kLanes) {
      if (static_cast<std::size_t>(j0) >= q) break;
      micro_kernel(row_panel, i0 % kLanes, packed.panel(j0 / kLanes), dim, block);
      for (Eigen::Index r = 0; r < kRows; ++r) {
        const auto i = static_cast<std::size_t>(i0 + r);
        if (i >= q) break;
        for (Eigen::Index k = 0; k < kLanes; ++k) {
          const auto j = static_cast<std::size_t>(j0 + k);
          if (j >= q) break;
          if (diagonal) {
            if (i != j) best[i].offer(block[r][k], j);
          } else {
            best[i].offer(block[r][k], j);
            best[j].offer(block[r][k], i);
          }
        }
      }
    }
  }
}

template <typename Scalar>
std::vector<Best> blocked_search(const BasicFeatureSet<Scalar>& fs, unsigned threads) {
  const std::size_t q = fs.size();
  const Eigen::Index tiles = (static_cast<Eigen::Index>(q) + kTile - 1) / kTile;
  const PackedPoints<Scalar> packed(fs.points, tiles * kTile);

  const auto workers = static_cast<unsigned>(
      std::clamp<Eigen::Index>(static_cast<Eigen::Index>(threads), 1, tiles));
  std::vector<std::vector<Best>> partial(workers, std::vector<Best>(q));
  std::atomic<Eigen::Index> next_row{0};

  auto work = [&](unsigned w) {
    for (Eigen::Index ti = next_row.fetch_add(1); ti < tiles; ti = next_row.fetch_add(1)) {
      for (Eigen::Index tj = ti; tj < tiles; ++tj) process_tile(packed, q, ti, tj, partial[w]);
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }

  // (distance, index) minimum is order independent, so any split merges to
  // the same answer.
  std::vector<Best> merged = std::move(partial[0]);
  for (unsigned w = 1; w < workers; ++w) {
    for (std::size_t i = 0; i < q; ++i) merged[i].offer(partial[w][i].dist, partial[w][i].index);
  }
  return merged;
}

NearestNeighborAssignment to_assignment(const std::vector<Best>& best) {
  NearestNeighborAssignment nn;
  nn.neighbor_index.reserve(best.size());
  nn.neighbor_sq_distance.reserve(best.size());
  for (const auto& b : best) {
    nn.neighbor_index.push_back(b.index);
    nn.neighbor_sq_distance.push_back(b.dist);
  }
  return nn;
}

}  // namespace

unsigned resolve_threads(unsigned requested) noexcept {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

template <typename Scalar>
NearestNeighborAssignment nearest_neighbors(const BasicFeatureSet<Scalar>& fs,
                                            const EngineOptions& options) {
  validate(fs);
  return to_assignment(blocked_search(fs, resolve_threads(options.threads)));
}

CandidateScore score_assignment(std::span<const Label> labels, const NearestNeighborAssignment& nn,
                                std::string name) {
  const std::size_t q = labels.size();
  if (nn.neighbor_index.size() != q || nn.neighbor_sq_distance.size() != q) {
    throw Error(Errc::LengthMismatch,
                "assignment has " + std::to_string(nn.neighbor_index.size()) +
                    " entries for " + std::to_string(q) + " points",
                name);
  }
  std::uint64_t matches = 0;
  for (std::size_t i = 0; i < q; ++i) {
    const std::size_t h = nn.neighbor_index[i];
    if (h >= q || h == i) {
      throw Error(Errc::InvalidArgument, "neighbor index out of range at point " + std::to_string(i),
                  name);
    }
    matches += labels[i] == labels[h] ? 1u : 0u;
  }
  CandidateScore score;
  score.candidate_name = std::move(name);
  score.match_count = matches;
  score.q = q;
  score.si = q == 0 ? 0.0 : static_cast<double>(matches) / static_cast<double>(q);
  return score;
}

template <typename Scalar>
CandidateScore separation_index_with_labels(const BasicFeatureSet<Scalar>& fs,
                                            const NearestNeighborAssignment& nn) {
  validate(fs);
  return score_assignment(fs.labels, nn, fs.name);
}

template <typename Scalar>
CandidateScore separation_index(const BasicFeatureSet<Scalar>& fs, const EngineOptions& options) {
  return score_assignment(fs.labels, nearest_neighbors(fs, options), fs.name);
}

template <typename Scalar>
NearestNeighborAssignment naive_nearest_neighbors(const BasicFeatureSet<Scalar>& fs) {
  validate(fs);
  const auto& x = fs.points;
  const Eigen::Index q = x.rows();
  std::vector<Best> best(static_cast<std::size_t>(q));
  for (Eigen::Index i = 0; i < q; ++i) {
    for (Eigen::Index h = 0; h < q; ++h) {
      if (h == i) continue;
      double sum = 0.0;
      for (Eigen::Index d = 0; d < x.cols(); ++d) {
        const double t = static_cast<double>(x(i, d)) - static_cast<double>(x(h, d));
        sum += t * t;
      }
      best[static_cast<std::size_t>(i)].offer(sum, static_cast<std::size_t>(h));
    }
  }
  return to_assignment(best);
}

template <typename Scalar>
CandidateScore naive_separation_index(const BasicFeatureSet<Scalar>& fs) {
  return score_assignment(fs.labels, naive_nearest_neighbors(fs), fs.name);
}

template NearestNeighborAssignment nearest_neighbors(const BasicFeatureSet<float>&,
                                                     const EngineOptions&);
template NearestNeighborAssignment nearest_neighbors(const BasicFeatureSet<double>&,
                                                     const EngineOptions&);
template CandidateScore separation_index(const BasicFeatureSet<float>&, const EngineOptions&);
template CandidateScore separation_index(const BasicFeatureSet<double>&, const EngineOptions&);
template CandidateScore separation_index_with_labels(const BasicFeatureSet<float>&,
                                                     const NearestNeighborAssignment&);
template CandidateScore separation_index_with_labels(const BasicFeatureSet<double>&,
                                                     const NearestNeighborAssignment&);
template NearestNeighborAssignment naive_nearest_neighbors(const BasicFeatureSet<float>&);
template NearestNeighborAssignment naive_nearest_neighbors(const BasicFeatureSet<double>&);
template CandidateScore naive_separation_index(const BasicFeatureSet<float>&);
template CandidateScore naive_separation_index(const BasicFeatureSet<double>&);

}  // namespace sepidx
