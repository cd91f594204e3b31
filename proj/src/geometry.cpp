#include "stpp/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace stpp {

namespace {

void check_interval(const Interval& iv, const char* name) {
  if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.length() > 0.0)) {
    throw std::invalid_argument(std::string("window interval '") + name +
                                "' must be finite with positive length");
  }
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

STWindow::STWindow(Interval x, Interval y, Interval t) : x_(x), y_(y), t_(t) {
  check_interval(x_, "x");
  check_interval(y_, "y");
  check_interval(t_, "t");
}

double boundary_dist_spatial(const STPoint& p, const STWindow& w) {
  if (!w.contains_spatial(p.sx, p.sy)) {
    throw std::invalid_argument("boundary_dist_spatial: point outside window");
  }
  return std::min({p.sx - w.x().lo, w.x().hi - p.sx, p.sy - w.y().lo, w.y().hi - p.sy});
}

double boundary_dist_temporal(double t, const STWindow& w) {
  return std::min(t - w.t().lo, w.t().hi - t);
}

std::optional<STWindow> erode(const STWindow& w, double u, double v) {
  if (u < 0.0 || v < 0.0) {
    throw std::invalid_argument("erode: margins must be non-negative");
  }
  const Interval x{w.x().lo + u, w.x().hi - u};
  const Interval y{w.y().lo + u, w.y().hi - u};
  const Interval t{w.t().lo + v, w.t().hi - v};
  if (!(x.length() > 0.0) || !(y.length() > 0.0) || !(t.length() > 0.0)) {
    return std::nullopt;
  }
  return STWindow(x, y, t);
}

Overlap translation_overlap(const STWindow& w, double hx, double hy, double ht) {
  return {positive_part(w.x().length() - std::abs(hx)) *
              positive_part(w.y().length() - std::abs(hy)),
          positive_part(w.t().length() - std::abs(ht))};
}

double circle_proportion_inside(double cx, double cy, double r, const STWindow& w) {
  if (!w.contains_spatial(cx, cy)) {
    throw std::invalid_argument("circle_proportion_inside: centre outside window");
  }
  if (!(r > 0.0)) return 1.0;

  const double x0 = w.x().lo, x1 = w.x().hi, y0 = w.y().lo, y1 = w.y().hi;
  if (cx - x0 >= r && x1 - cx >= r && cy - y0 >= r && y1 - cy >= r) return 1.0;

  constexpr double two_pi = 2.0 * std::numbers::pi;
  // Crossing angles with the four side lines, plus the seam at 0 / 2π.
  std::array<double, 10> cut{};
  std::size_t n = 0;
  cut[n++] = 0.0;
  cut[n++] = two_pi;
  auto wrap = [&](double a) {
    a = std::fmod(a, two_pi);
    return a < 0.0 ? a + two_pi : a;
  };
  for (double xs : {x0, x1}) {
    const double d = (xs - cx) / r;
    if (std::abs(d) < 1.0) {
      const double a = std::acos(d);
      cut[n++] = wrap(a);
      cut[n++] = wrap(-a);
    }
  }
  for (double ys : {y0, y1}) {
    const double d = (ys - cy) / r;
    if (std::abs(d) < 1.0) {
      const double a = std::asin(d);
      cut[n++] = wrap(a);
      cut[n++] = wrap(std::numbers::pi - a);
    }
  }
  std::sort(cut.begin(), cut.begin() + n);

  const double tol = 1e-12 * std::max({1.0, std::abs(x0), std::abs(x1), std::abs(y0), std::abs(y1)});
  double inside = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double a = cut[k], b = cut[k + 1];
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b);
    const double px = cx + r * std::cos(mid);
    const double py = cy + r * std::sin(mid);
    if (px >= x0 - tol && px <= x1 + tol && py >= y0 - tol && py <= y1 + tol) {
      inside += b - a;
    }
  }
  return inside / two_pi;
}

double temporal_weight(double ti, double tj, const Interval& t_range) {
  const double d = std::abs(ti - tj);
  return (ti - d >= t_range.lo && ti + d <= t_range.hi) ? 1.0 : 0.5;
}

}  // namespace stpp
