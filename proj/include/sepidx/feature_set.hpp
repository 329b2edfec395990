#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sepidx/error.hpp"

namespace sepidx {

using Label = std::uint32_t;

template <typename Scalar>
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Q labelled points of dimension D. Rows of `points` are the points; `labels`
/// holds one class code per row. Codes are compared for equality only, so they
/// need not be contiguous.
template <typename Scalar>
struct BasicFeatureSet {
  using scalar_type = Scalar;

  PointMatrix<Scalar> points;
  std::vector<Label> labels;
  std::string name;
  // Set when the values were rounded down from a 64-bit source file.
  bool narrowed_from_f64 = false;

  std::size_t size() const noexcept { return static_cast<std::size_t>(points.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(points.cols()); }

  friend bool operator==(const BasicFeatureSet& a, const BasicFeatureSet& b) {
    return a.name == b.name && a.labels == b.labels &&
           a.narrowed_from_f64 == b.narrowed_from_f64 &&
           a.points.rows() == b.points.rows() && a.points.cols() == b.points.cols() &&
           a.points == b.points;
  }
};

using LabeledFeatureSet = BasicFeatureSet<float>;

/// Checks the feature-set invariants and returns the set unchanged.
/// Throws TooFewPoints (Q < 2), DimensionMismatch (D < 1 or label count != Q)
/// or NonFiniteValue naming the first offending cell in row-major order.
template <typename Scalar>
const BasicFeatureSet<Scalar>& validate(const BasicFeatureSet<Scalar>& fs) {
  const auto q = fs.size();
  if (q < 2) {
    throw Error(Errc::TooFewPoints,
                "a feature set needs at least 2 points, got " + std::to_string(q), fs.name);
  }
  if (fs.dim() < 1) {
    throw Error(Errc::DimensionMismatch, "feature dimension must be at least 1", fs.name);
  }
  if (fs.labels.size() != q) {
    throw Error(Errc::DimensionMismatch,
                "label count " + std::to_string(fs.labels.size()) + " != point count " +
                    std::to_string(q),
                fs.name);
  }
  if (!fs.points.allFinite()) {
    for (Eigen::Index r = 0; r < fs.points.rows(); ++r) {
      for (Eigen::Index c = 0; c < fs.points.cols(); ++c) {
        if (!std::isfinite(fs.points(r, c))) {
          throw Error(Errc::NonFiniteValue,
                      "non-finite value at row " + std::to_string(r) + ", column " +
                          std::to_string(c),
                      fs.name, static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
      }
    }
  }
  return fs;
}

template <typename Scalar>
BasicFeatureSet<Scalar> validated(BasicFeatureSet<Scalar> fs) {
  validate(fs);
  return fs;
}

/// Builds a feature set from any Eigen expression (rows = points).
template <typename Derived>
BasicFeatureSet<typename Derived::Scalar> make_feature_set(const Eigen::MatrixBase<Derived>& points,
                                                           std::vector<Label> labels,
                                                           std::string name = {}) {
  BasicFeatureSet<typename Derived::Scalar> fs;
  fs.points = points;
  fs.labels = std::move(labels);
  fs.name = std::move(name);
  return fs;
}

/// Copies the given rows, in the given order, into a new set with the same name.
template <typename Scalar>
BasicFeatureSet<Scalar> select_rows(const BasicFeatureSet<Scalar>& fs,
                                    const std::vector<std::size_t>& rows) {
  BasicFeatureSet<Scalar> out;
  out.name = fs.name;
  out.narrowed_from_f64 = fs.narrowed_from_f64;
  out.points.resize(static_cast<Eigen::Index>(rows.size()), fs.points.cols());
  out.labels.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.points.row(static_cast<Eigen::Index>(i)) = fs.points.row(static_cast<Eigen::Index>(rows[i]));
    out.labels.push_back(fs.labels[rows[i]]);
  }
  return out;
}

}  // namespace sepidx
