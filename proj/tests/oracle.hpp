#pragma once

// Test-only reference computations. Nothing here calls into the library's
// distance or correlation code.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include "sepidx/feature_set.hpp"

namespace sepidx::oracle {

struct OracleNeighbor {
  std::size_t index;
  long double sq_distance;
};

// Scans every h != q with long double accumulation, keeping the first minimum.
template <typename Scalar>
std::vector<OracleNeighbor> brute_force_neighbors(const BasicFeatureSet<Scalar>& fs) {
  const auto q = static_cast<std::size_t>(fs.points.rows());
  const auto d = static_cast<std::size_t>(fs.points.cols());
  std::vector<OracleNeighbor> out(q, {std::numeric_limits<std::size_t>::max(),
                                      std::numeric_limits<long double>::infinity()});
  for (std::size_t i = 0; i < q; ++i) {
    for (std::size_t h = 0; h < q; ++h) {
      if (h == i) continue;
      long double s = 0;
      for (std::size_t k = 0; k < d; ++k) {
        const long double t = static_cast<long double>(fs.points(i, k)) - fs.points(h, k);
        s += t * t;
      }
      if (s < out[i].sq_distance) out[i] = {h, s};
    }
  }
  return out;
}

template <typename Scalar>
std::size_t brute_force_matches(const BasicFeatureSet<Scalar>& fs) {
  const auto nn = brute_force_neighbors(fs);
  std::size_t m = 0;
  for (std::size_t i = 0; i < nn.size(); ++i) m += fs.labels[i] == fs.labels[nn[i].index];
  return m;
}

// Rank of x[i] = 1 + #smaller + (#equal others) / 2, counted pairwise.
inline std::vector<long double> counting_ranks(const std::vector<double>& x) {
  std::vector<long double> r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    long double less = 0, equal = 0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j == i) continue;
      if (x[j] < x[i]) less += 1;
      if (x[j] == x[i]) equal += 1;
    }
    r[i] = 1 + less + equal / 2;
  }
  return r;
}

inline long double rank_pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto rx = counting_ranks(x);
  const auto ry = counting_ranks(y);
  const auto n = static_cast<long double>(x.size());
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline LabeledFeatureSet line_set(const std::vector<float>& xs, const std::vector<Label>& labels) {
  LabeledFeatureSet fs;
  fs.points.resize(static_cast<Eigen::Index>(xs.size()), 1);
  for (std::size_t i = 0; i < xs.size(); ++i) fs.points(static_cast<Eigen::Index>(i), 0) = xs[i];
  fs.labels = labels;
  return fs;
}

inline LabeledFeatureSet random_set(std::mt19937_64& rng, std::size_t q, std::size_t d,
                                    std::size_t classes) {
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  std::uniform_int_distribution<Label> l(0, static_cast<Label>(classes - 1));
  LabeledFeatureSet fs;
  fs.points.resize(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(d));
  for (Eigen::Index i = 0; i < fs.points.size(); ++i) fs.points.data()[i] = u(rng);
  for (std::size_t i = 0; i < q; ++i) fs.labels.push_back(l(rng));
  return fs;
}

// Gaussian blobs around well separated centres; label = blob index.
inline LabeledFeatureSet blob_set(std::mt19937_64& rng, std::size_t per_blob, std::size_t blobs,
                                  float spacing = 20.0f, float spread = 0.5f) {
  std::normal_distribution<float> n(0.0f, spread);
  LabeledFeatureSet fs;
  const auto q = per_blob * blobs;
  fs.points.resize(static_cast<Eigen::Index>(q), 2);
  for (std::size_t b = 0; b < blobs; ++b) {
    for (std::size_t i = 0; i < per_blob; ++i) {
      const auto r = static_cast<Eigen::Index>(b * per_blob + i);
      fs.points(r, 0) = spacing * static_cast<float>(b % 2) + n(rng);
      fs.points(r, 1) = spacing * static_cast<float>(b / 2) + n(rng);
      fs.labels.push_back(static_cast<Label>(b));
    }
  }
  return fs;
}


// Smallest gap, in plain (not squared) distance, between each point's nearest
// and second-nearest neighbour.
template <typename Scalar>
long double nearest_gap(const BasicFeatureSet<Scalar>& fs) {
  const auto q = static_cast<std::size_t>(fs.points.rows());
  long double worst = std::numeric_limits<long double>::infinity();
  for (std::size_t i = 0; i < q; ++i) {
    long double first = std::numeric_limits<long double>::infinity(), second = first;
    for (std::size_t h = 0; h < q; ++h) {
      if (h == i) continue;
      long double s = 0;
      for (Eigen::Index k = 0; k < fs.points.cols(); ++k) {
        const long double t = static_cast<long double>(fs.points(static_cast<Eigen::Index>(i), k)) -
                              fs.points(static_cast<Eigen::Index>(h), k);
        s += t * t;
      }
      const long double dist = std::sqrt(s);
      if (dist < first) {
        second = first;
        first = dist;
      } else if (dist < second) {
        second = dist;
      }
    }
    worst = std::min(worst, second - first);
  }
  return worst;
}

// Random set whose nearest neighbours all win by at least `gap`.
inline LabeledFeatureSet tie_free_set(std::mt19937_64& rng, std::size_t q, std::size_t d,
                                      std::size_t classes, long double gap = 1e-3L) {
  std::uniform_real_distribution<float> u(0.0f, 10.0f);
  std::uniform_int_distribution<Label> l(0, static_cast<Label>(classes - 1));
  while (true) {
    LabeledFeatureSet fs;
    fs.points.resize(static_cast<Eigen::Index>(q), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < fs.points.size(); ++i) fs.points.data()[i] = u(rng);
    for (std::size_t i = 0; i < q; ++i) fs.labels.push_back(l(rng));
    if (nearest_gap(fs) >= gap) return fs;
  }
}

}  // namespace sepidx::oracle
