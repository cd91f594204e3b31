#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "stpp/geometry.hpp"

namespace stpp {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Quartic (biweight) kernel with support radius h, normalised to unit mass
/// on the plane: (3 / (pi h^2)) (1 - |z|^2 / h^2)^2.
double quartic_kernel(double dx, double dy, double h);

/// Mass of the quartic kernel centred at (x, y) that falls inside the spatial
/// rectangle of w. Integrated in polar coordinates with the radial part in
/// closed form and the angular part by Gauss-Legendre between breakpoints.
double quartic_edge_mass(double x, double y, double h, const STWindow& w);

/// Edge-corrected quartic kernel estimate of a spatial intensity,
/// sum_i k_h(s - s_i) / c(s_i).
class KernelSpatialField {
 public:
  KernelSpatialField(std::span<const Point2> points, const STWindow& w, double h);

  double operator()(double x, double y) const;

  double bandwidth() const { return h_; }
  std::size_t size() const { return xs_.size(); }
  /// Edge mass c(s_i) of each event, in input order.
  const std::vector<double>& edge_masses() const { return mass_; }

 private:
  STWindow window_;
  double h_;
  std::vector<double> xs_, ys_, mass_;
  // Uniform bins of side >= h over the window; events sorted by bin.
  std::size_t nbx_ = 1, nby_ = 1;
  double cell_x_ = 1.0, cell_y_ = 1.0;
  std::vector<std::size_t> bin_start_;
  std::vector<std::size_t> order_;
};

/// Log-linear spatial intensity exp(gamma . Z(u)) where u are the window
/// coordinates rescaled to [0, 1]^2 and Z holds the monomials of order <= 2
/// (order 1: 1, ux, uy; order 2 adds ux^2, ux*uy, uy^2).
class LogLinearSpatialField {
 public:
  LogLinearSpatialField(int order, std::vector<double> gamma, const STWindow& w);

  double operator()(double x, double y) const;

  int order() const { return order_; }
  const std::vector<double>& normalized_coefficients() const { return gamma_; }
  /// Coefficients for monomials of the raw coordinates (same ordering).
  std::vector<double> raw_coefficients() const;

  static std::size_t dimension(int order) { return order == 1 ? 3 : 6; }
  /// Covariate vector Z(u) for the location (x, y) in window coordinates.
  std::vector<double> covariates(double x, double y) const;

 private:
  int order_;
  std::vector<double> gamma_;
  double x0_, y0_, lx_, ly_;
};

/// Gaussian kernel estimate of a temporal intensity. Each evaluation is
/// divided by the kernel mass inside T at the evaluation time, and the whole
/// field is then rescaled so that it integrates to the number of events.
class KernelTemporalField {
 public:
  KernelTemporalField(std::span<const double> times, const Interval& range, double bw);

  double operator()(double t) const;

  double bandwidth() const { return bw_; }
  const Interval& range() const { return range_; }
  std::size_t size() const { return times_.size(); }

 private:
  double raw(double t) const;

  std::vector<double> times_;  // sorted
  Interval range_;
  double bw_;
  double scale_ = 1.0;
};

/// a * exp(rate * (t - origin)).
class ExpTemporalField {
 public:
  ExpTemporalField(double amplitude, double rate, double origin)
      : amplitude_(amplitude), rate_(rate), origin_(origin) {}

  double operator()(double t) const;

  double amplitude() const { return amplitude_; }
  double rate() const { return rate_; }
  double origin() const { return origin_; }

 private:
  double amplitude_, rate_, origin_;
};

using SpatialField = std::variant<KernelSpatialField, LogLinearSpatialField>;
using TemporalField = std::variant<KernelTemporalField, ExpTemporalField>;

double evaluate(const SpatialField& f, double x, double y);
double evaluate(const TemporalField& f, double t);

}  // namespace stpp
