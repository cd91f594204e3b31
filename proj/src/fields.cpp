#include "stpp/fields.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace stpp {

namespace {

using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

constexpr double kPi = std::numbers::pi;

// Distance from (x, y) to the rectangle boundary along direction theta.
double ray_length(double x, double y, double theta, const STWindow& w) {
  const double c = std::cos(theta), s = std::sin(theta);
  double best = std::numeric_limits<double>::infinity();
  if (c > 0) best = std::min(best, (w.x().hi - x) / c);
  if (c < 0) best = std::min(best, (w.x().lo - x) / c);
  if (s > 0) best = std::min(best, (w.y().hi - y) / s);
  if (s < 0) best = std::min(best, (w.y().lo - y) / s);
  return std::max(best, 0.0);
}

// Mass of the unit-radius quartic kernel inside radius y (y in [0, 1]).
double quartic_radial_mass(double y) {
  const double a = 1.0 - y * y;
  return 1.0 - a * a * a;
}

double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  return a < 0.0 ? a + 2.0 * kPi : a;
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

}  // namespace

double quartic_kernel(double dx, double dy, double h) {
  const double r2 = (dx * dx + dy * dy) / (h * h);
  if (r2 >= 1.0) return 0.0;
  const double a = 1.0 - r2;
  return 3.0 / (kPi * h * h) * a * a;
}

double quartic_edge_mass(double x, double y, double h, const STWindow& w) {
  if (!(h > 0.0)) throw std::invalid_argument("quartic_edge_mass: bandwidth must be positive");
  const double x0 = w.x().lo, x1 = w.x().hi, y0 = w.y().lo, y1 = w.y().hi;
  if (x - x0 >= h && x1 - x >= h && y - y0 >= h && y1 - y >= h) return 1.0;

  std::vector<double> cut{0.0, 2.0 * kPi};
  for (double cx : {x0, x1}) {
    for (double cy : {y0, y1}) {
      if (cx != x || cy != y) cut.push_back(wrap_angle(std::atan2(cy - y, cx - x)));
    }
  }
  for (double xs : {x0, x1}) {
    const double d = (xs - x) / h;
    if (std::abs(d) < 1.0) {
      cut.push_back(wrap_angle(std::acos(d)));
      cut.push_back(wrap_angle(-std::acos(d)));
    }
  }
  for (double ys : {y0, y1}) {
    const double d = (ys - y) / h;
    if (std::abs(d) < 1.0) {
      cut.push_back(wrap_angle(std::asin(d)));
      cut.push_back(wrap_angle(kPi - std::asin(d)));
    }
  }
  std::sort(cut.begin(), cut.end());

  auto integrand = [&](double theta) {
    return quartic_radial_mass(std::min(1.0, ray_length(x, y, theta, w) / h));
  };
  // Near a grazing side the ray length behaves like 1/sin, so a fixed rule
  // is not enough; refine adaptively.
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < cut.size(); ++k) {
    if (cut[k + 1] > cut[k]) {
      total += gauss_kronrod<double, 31>::integrate(integrand, cut[k], cut[k + 1], 12, 1e-11);
    }
  }
  return total / (2.0 * kPi);
}

KernelSpatialField::KernelSpatialField(std::span<const Point2> points, const STWindow& w, double h)
    : window_(w), h_(h) {
  if (!(h > 0.0)) throw std::invalid_argument("spatial kernel bandwidth must be positive");
  const std::size_t n = points.size();
  xs_.reserve(n);
  ys_.reserve(n);
  mass_.reserve(n);
  for (const auto& p : points) {
    xs_.push_back(p.x);
    ys_.push_back(p.y);
    mass_.push_back(quartic_edge_mass(p.x, p.y, h, w));
  }

  const double lx = w.x().length(), ly = w.y().length();
  nbx_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::min(lx / h, 1024.0)));
  nby_ = std::max<std::size_t>(1, static_cast<std::size_t>(std::min(ly / h, 1024.0)));
  cell_x_ = lx / static_cast<double>(nbx_);
  cell_y_ = ly / static_cast<double>(nby_);

  std::vector<std::size_t> bin(n);
  std::vector<std::size_t> count(nbx_ * nby_ + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto bx = std::min(nbx_ - 1, static_cast<std::size_t>(std::max(0.0, (xs_[i] - w.x().lo) / cell_x_)));
    const auto by = std::min(nby_ - 1, static_cast<std::size_t>(std::max(0.0, (ys_[i] - w.y().lo) / cell_y_)));
    bin[i] = bx * nby_ + by;
    ++count[bin[i] + 1];
  }
  for (std::size_t b = 1; b < count.size(); ++b) count[b] += count[b - 1];
  bin_start_ = count;
  order_.resize(n);
  std::vector<std::size_t> fill(count.begin(), count.end() - 1);
  for (std::size_t i = 0; i < n; ++i) order_[fill[bin[i]]++] = i;
}

double KernelSpatialField::operator()(double x, double y) const {
  const auto cx = static_cast<long>(std::floor((x - window_.x().lo) / cell_x_));
  const auto cy = static_cast<long>(std::floor((y - window_.y().lo) / cell_y_));
  double sum = 0.0;
  for (long bx = cx - 1; bx <= cx + 1; ++bx) {
    if (bx < 0 || bx >= static_cast<long>(nbx_)) continue;
    for (long by = cy - 1; by <= cy + 1; ++by) {
      if (by < 0 || by >= static_cast<long>(nby_)) continue;
      const std::size_t b = static_cast<std::size_t>(bx) * nby_ + static_cast<std::size_t>(by);
      for (std::size_t k = bin_start_[b]; k < bin_start_[b + 1]; ++k) {
        const std::size_t i = order_[k];
        sum += quartic_kernel(x - xs_[i], y - ys_[i], h_) / mass_[i];
      }
    }
  }
  return sum;
}

LogLinearSpatialField::LogLinearSpatialField(int order, std::vector<double> gamma, const STWindow& w)
    : order_(order),
      gamma_(std::move(gamma)),
      x0_(w.x().lo),
      y0_(w.y().lo),
      lx_(w.x().length()),
      ly_(w.y().length()) {
  if (order_ != 1 && order_ != 2) throw std::invalid_argument("log-linear model order must be 1 or 2");
  if (gamma_.size() != dimension(order_)) {
    throw std::invalid_argument("log-linear coefficient count does not match model order");
  }
}

std::vector<double> LogLinearSpatialField::covariates(double x, double y) const {
  const double ux = (x - x0_) / lx_, uy = (y - y0_) / ly_;
  if (order_ == 1) return {1.0, ux, uy};
  return {1.0, ux, uy, ux * ux, ux * uy, uy * uy};
}

double LogLinearSpatialField::operator()(double x, double y) const {
  const double ux = (x - x0_) / lx_, uy = (y - y0_) / ly_;
  double eta = gamma_[0] + gamma_[1] * ux + gamma_[2] * uy;
  if (order_ == 2) eta += gamma_[3] * ux * ux + gamma_[4] * ux * uy + gamma_[5] * uy * uy;
  return std::exp(eta);
}

std::vector<double> LogLinearSpatialField::raw_coefficients() const {
  // ux = a x + b, uy = c y + d
  const double a = 1.0 / lx_, b = -x0_ / lx_, c = 1.0 / ly_, d = -y0_ / ly_;
  const auto& g = gamma_;
  if (order_ == 1) return {g[0] + g[1] * b + g[2] * d, g[1] * a, g[2] * c};
  return {g[0] + g[1] * b + g[2] * d + g[3] * b * b + g[4] * b * d + g[5] * d * d,
          g[1] * a + 2.0 * g[3] * a * b + g[4] * a * d,
          g[2] * c + g[4] * b * c + 2.0 * g[5] * c * d,
          g[3] * a * a,
          g[4] * a * c,
          g[5] * c * c};
}

KernelTemporalField::KernelTemporalField(std::span<const double> times, const Interval& range, double bw)
    : times_(times.begin(), times.end()), range_(range), bw_(bw) {
  if (!(bw > 0.0)) throw std::invalid_argument("temporal kernel bandwidth must be positive");
  std::sort(times_.begin(), times_.end());
  if (times_.empty()) {
    scale_ = 0.0;
    return;
  }
  const double len = range_.length();
  const auto panels = static_cast<std::size_t>(std::clamp(std::ceil(len / (0.5 * bw_)), 1.0, 20000.0));
  const double step = len / static_cast<double>(panels);
  double mass = 0.0;
  auto f = [this](double t) { return raw(t); };
  for (std::size_t k = 0; k < panels; ++k) {
    const double a = range_.lo + step * static_cast<double>(k);
    const double b = k + 1 == panels ? range_.hi : a + step;
    mass += gauss<double, 20>::integrate(f, a, b);
  }
  scale_ = static_cast<double>(times_.size()) / mass;
}

double KernelTemporalField::raw(double t) const {
  const double reach = 10.0 * bw_;
  auto lo = std::lower_bound(times_.begin(), times_.end(), t - reach);
  auto hi = std::upper_bound(lo, times_.end(), t + reach);
  double sum = 0.0;
  for (auto it = lo; it != hi; ++it) {
    const double z = (t - *it) / bw_;
    sum += std::exp(-0.5 * z * z);
  }
  sum /= bw_ * std::sqrt(2.0 * kPi);
  const double inside = normal_cdf((range_.hi - t) / bw_) - normal_cdf((range_.lo - t) / bw_);
  return sum / inside;
}

double KernelTemporalField::operator()(double t) const { return scale_ * raw(t); }

double ExpTemporalField::operator()(double t) const { return amplitude_ * std::exp(rate_ * (t - origin_)); }

double evaluate(const SpatialField& f, double x, double y) {
  return std::visit([&](const auto& field) { return field(x, y); }, f);
}

double evaluate(const TemporalField& f, double t) {
  return std::visit([&](const auto& field) { return field(t); }, f);
}

}  // namespace stpp
