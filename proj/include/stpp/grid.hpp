#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace stpp {

/// Quiet NaN marks an undefined ("missing") surface entry throughout.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double x) { return std::isnan(x); }

/// Spatial lags u and temporal lags v at which surfaces are evaluated.
/// Both sequences are strictly increasing and positive.
class EvalGrid {
 public:
  EvalGrid(std::vector<double> u, std::vector<double> v);

  /// start, start+step, ... up to stop (inclusive, with rounding slack).
  static std::vector<double> axis(double start, double stop, double step);
  /// Same regular axis for u and v.
  static EvalGrid regular(double start, double stop, double step);
  /// 0.01, 0.02, ..., 0.25 in both directions.
  static EvalGrid default_grid();

  const std::vector<double>& u() const { return u_; }
  const std::vector<double>& v() const { return v_; }
  std::size_t nu() const { return u_.size(); }
  std::size_t nv() const { return v_.size(); }
  std::size_t size() const { return u_.size() * v_.size(); }

  bool operator==(const EvalGrid&) const = default;

 private:
  std::vector<double> u_;
  std::vector<double> v_;
};

/// Dense row-major matrix indexed (u index, v index).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const Matrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Trapezoidal quadrature weights for the nodes of a 1-D sequence.
std::vector<double> trapezoid_weights(const std::vector<double>& x);

}  // namespace stpp
