#pragma once

#include <optional>

namespace stpp {

/// Closed interval [lo, hi] on the real line.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;

  double length() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }

  bool operator==(const Interval&) const = default;
};

/// A space-time event: location (sx, sy) and time t.
struct STPoint {
  double sx = 0.0;
  double sy = 0.0;
  double t = 0.0;

  bool operator==(const STPoint&) const = default;
};

/// Axis-aligned rectangle in space times an interval in time.
///
/// Every interval must have strictly positive length; the constructor throws
/// std::invalid_argument otherwise.
class STWindow {
 public:
  STWindow(Interval x, Interval y, Interval t);

  static STWindow unit_cube() { return {{0, 1}, {0, 1}, {0, 1}}; }

  const Interval& x() const { return x_; }
  const Interval& y() const { return y_; }
  const Interval& t() const { return t_; }

  double area() const { return x_.length() * y_.length(); }
  double duration() const { return t_.length(); }
  double volume() const { return area() * duration(); }

  bool contains_spatial(double sx, double sy) const {
    return x_.contains(sx) && y_.contains(sy);
  }
  bool contains(const STPoint& p) const {
    return contains_spatial(p.sx, p.sy) && t_.contains(p.t);
  }

  bool operator==(const STWindow&) const = default;

 private:
  Interval x_;
  Interval y_;
  Interval t_;
};

/// Distance from the location of p to the boundary of the spatial rectangle.
/// Throws std::invalid_argument when p lies outside w.
double boundary_dist_spatial(const STPoint& p, const STWindow& w);

/// Distance from t to the nearer end of the window's time interval.
double boundary_dist_temporal(double t, const STWindow& w);

/// Trim a margin u from each spatial side and v from each end in time.
/// Returns std::nullopt once any interval collapses to zero length.
std::optional<STWindow> erode(const STWindow& w, double u, double v);

/// Area of S ∩ (S + h_s) and length of T ∩ (T + h_t).
struct Overlap {
  double area = 0.0;
  double duration = 0.0;
};

Overlap translation_overlap(const STWindow& w, double hx, double hy, double ht);

/// Fraction of the circle of radius r centred at (cx, cy) that lies inside
/// the spatial rectangle of w. Arcs are clipped exactly against the four
/// sides. The centre must lie in the rectangle; r <= 0 returns 1.
double circle_proportion_inside(double cx, double cy, double r, const STWindow& w);

/// Temporal isotropic edge weight: 1 when [ti - |ti-tj|, ti + |ti-tj|] lies
/// inside t_range, 1/2 otherwise.
double temporal_weight(double ti, double tj, const Interval& t_range);

}  // namespace stpp
