#pragma once

// Grid-discretized Hilbert-space primitives. A curve is a real vector of
// length d, read as function values on a uniform grid of [0,1]; a
// functional sample is n such curves observed over time.

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace funcpd {

// Inner product on the grid: plain Euclidean sum, or the 1/d-scaled sum
// that mimics the L^2([0,1]) product. Fixed per analysis run.
enum class GridWeighting { euclidean, mean };

inline const char* to_string(GridWeighting w) {
  return w == GridWeighting::euclidean ? "euclidean" : "mean";
}

inline double inner(std::span<const double> u, std::span<const double> v,
                    GridWeighting w = GridWeighting::euclidean) {
  if (u.size() != v.size())
    throw std::invalid_argument("inner: dimension mismatch (" +
                                std::to_string(u.size()) + " vs " +
                                std::to_string(v.size()) + ")");
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) acc += u[i] * v[i];
  if (w == GridWeighting::mean && !u.empty())
    acc /= static_cast<double>(u.size());
  return acc;
}

inline double norm(std::span<const double> u,
                   GridWeighting w = GridWeighting::euclidean) {
  return std::sqrt(inner(u, u, w));
}

// Flat row-major storage for a stack of curves sharing one grid.
class CurveMatrix {
 public:
  CurveMatrix() = default;
  CurveMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), values_(rows * cols, 0.0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> row(std::size_t i) {
    return {values_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * cols_, cols_};
  }

  double& at(std::size_t i, std::size_t j) { return values_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const {
    return values_[i * cols_ + j];
  }

  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// The observed series X_1..X_n. Validated on construction: n >= 2,
// d >= 1, every entry finite. Immutable afterwards.
class FunctionalSample {
 public:
  explicit FunctionalSample(CurveMatrix curves) : curves_(std::move(curves)) {
    if (curves_.rows() < 2)
      throw std::invalid_argument("FunctionalSample: need n >= 2 curves, got " +
                                  std::to_string(curves_.rows()));
    if (curves_.cols() < 1)
      throw std::invalid_argument("FunctionalSample: need grid size d >= 1");
    if (!curves_.all_finite())
      throw std::invalid_argument(
          "FunctionalSample: non-finite entry (NaN/Inf) in input");
  }

  static FunctionalSample from_rows(
      const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("from_rows: empty input");
    CurveMatrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != m.cols())
        throw std::invalid_argument(
            "from_rows: row " + std::to_string(i + 1) + " has " +
            std::to_string(rows[i].size()) + " entries, expected " +
            std::to_string(m.cols()));
      std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
    }
    return FunctionalSample(std::move(m));
  }

  std::size_t size() const { return curves_.rows(); }  // n
  std::size_t dim() const { return curves_.cols(); }   // d
  std::span<const double> row(std::size_t i) const { return curves_.row(i); }
  const CurveMatrix& curves() const { return curves_; }

 private:
  CurveMatrix curves_;
};

}  // namespace funcpd
