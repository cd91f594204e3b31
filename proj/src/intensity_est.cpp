#include "stpp/intensity_est.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>

#include "stpp/grid.hpp"

namespace stpp {

namespace {

constexpr double kPi = std::numbers::pi;

// Overlap area of two discs of radius h whose centres are t apart.
double disc_overlap(double t, double h) {
  if (t >= 2.0 * h) return 0.0;
  return 2.0 * h * h * std::acos(t / (2.0 * h)) - 0.5 * t * std::sqrt(4.0 * h * h - t * t);
}

struct WeightedPair {
  double d;
  double e;  // isotropic edge weight
};

// Ordered pairs closer than reach with their isotropic edge weights.
std::vector<WeightedPair> close_pairs(std::span<const Point2> pts, const STWindow& w, double reach) {
  std::vector<WeightedPair> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (i == j) continue;
      const double d = std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y);
      if (d >= reach) continue;
      const double prop = circle_proportion_inside(pts[i].x, pts[i].y, d, w);
      if (prop > 0.0) out.push_back({d, 1.0 / prop});
    }
  }
  return out;
}

double bd_criterion(const std::vector<WeightedPair>& pairs, std::size_t n, double area, double h) {
  const double nn = static_cast<double>(n);
  const double disc = kPi * h * h;
  double overlap = 0.0, within = 0.0;
  for (const auto& p : pairs) {
    overlap += p.e * disc_overlap(p.d, h);
    if (p.d <= h) within += p.e;
  }
  const double k_h = area / (nn * nn) * within;
  return area / (nn * disc) + area / (nn * nn) * overlap / (disc * disc) - 2.0 * k_h / disc;
}

// Mean of the density proportional to exp(g x) on [0, 1].
double truncated_exp_mean(double g) {
  if (std::abs(g) < 1e-4) return 0.5 + g / 12.0 - g * g * g / 720.0;
  return 1.0 / (-std::expm1(-g)) - 1.0 / g;
}

// g / (exp(g) - 1), continuous at 0.
double exp_ratio(double g) {
  if (std::abs(g) < 1e-8) return 1.0 - 0.5 * g;
  return g / std::expm1(g);
}

double norm(const Eigen::VectorXd& v) { return v.norm(); }

}  // namespace

double quantile_linear(std::vector<double> x, double p) {
  if (x.empty()) throw std::invalid_argument("quantile of an empty sample");
  std::sort(x.begin(), x.end());
  const double h = (static_cast<double>(x.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, x.size() - 1);
  return x[lo] + (h - static_cast<double>(lo)) * (x[hi] - x[lo]);
}

double silverman_bandwidth(std::span<const double> times) {
  const std::size_t n = times.size();
  if (n < 2) throw std::invalid_argument("Silverman bandwidth needs at least 2 times");
  const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
  // The mean of equal values can round away from them, leaving a tiny sd.
  if (*lo == *hi) throw std::invalid_argument("Silverman bandwidth: all times are identical");
  const double mean = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double t : times) ss += (t - mean) * (t - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  std::vector<double> v(times.begin(), times.end());
  const double iqr = quantile_linear(v, 0.75) - quantile_linear(v, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;  // heavy ties collapse the IQR only
  if (!(spread > 0.0)) throw std::invalid_argument("Silverman bandwidth: all times are identical");
  return 0.9 * std::pow(static_cast<double>(n), -0.2) * spread;
}

KernelTemporalField temporal_kernel_intensity(std::span<const double> times, const Interval& range, double bw) {
  return KernelTemporalField(times, range, bw);
}

KernelSpatialField spatial_kernel_intensity(std::span<const Point2> points, const STWindow& w, double bw) {
  return KernelSpatialField(points, w, bw);
}

double berman_diggle_criterion(std::span<const Point2> points, const STWindow& w, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("bandwidth must be positive");
  if (points.size() < 2) throw std::invalid_argument("Berman-Diggle criterion needs at least 2 points");
  return bd_criterion(close_pairs(points, w, 2.0 * h), points.size(), w.area(), h);
}

std::vector<double> berman_diggle_grid() {
  std::vector<double> g(64);
  const double a = std::log(0.01), b = std::log(0.5);
  for (int k = 0; k < 64; ++k) g[k] = std::exp(a + (b - a) * k / 63.0);
  g.front() = 0.01;
  g.back() = 0.5;
  return g;
}

double berman_diggle_bandwidth(std::span<const Point2> points, const STWindow& w) {
  if (points.size() < 10) throw std::invalid_argument("Berman-Diggle bandwidth needs at least 10 points");
  const auto grid = berman_diggle_grid();
  const auto pairs = close_pairs(points, w, 2.0 * grid.back());
  double best_h = 0.0, best = std::numeric_limits<double>::infinity();
  for (double h : grid) {
    const double m = bd_criterion(pairs, points.size(), w.area(), h);
    if (std::isfinite(m) && m < best) {
      best = m;
      best_h = h;
    }
  }
  if (!(best_h > 0.0)) throw std::runtime_error("Berman-Diggle criterion is not finite on the search grid");
  return best_h;
}

ParametricFit fit_loglinear(std::span<const Point2> points, const STWindow& w, int order) {
  if (order != 1 && order != 2) throw std::invalid_argument("model order must be 1 or 2");
  const std::size_t p = LogLinearSpatialField::dimension(order);
  if (points.size() < p) throw std::invalid_argument("too few points for the model dimension");

  constexpr int kGrid = 32;
  const double cw = w.x().length() / kGrid, ch = w.y().length() / kGrid;
  auto cell_of = [&](double x, double y) {
    const int cx = std::clamp(static_cast<int>((x - w.x().lo) / cw), 0, kGrid - 1);
    const int cy = std::clamp(static_cast<int>((y - w.y().lo) / ch), 0, kGrid - 1);
    return cx * kGrid + cy;
  };

  // Quadrature points: data first, then dummies at cell centres.
  std::vector<Point2> q(points.begin(), points.end());
  for (int cx = 0; cx < kGrid; ++cx) {
    for (int cy = 0; cy < kGrid; ++cy) q.push_back({w.x().lo + (cx + 0.5) * cw, w.y().lo + (cy + 0.5) * ch});
  }
  std::vector<int> count(kGrid * kGrid, 0);
  for (const auto& pt : q) ++count[cell_of(pt.x, pt.y)];

  const LogLinearSpatialField basis(order, std::vector<double>(p, 0.0), w);
  const std::size_t m = q.size();
  Eigen::MatrixXd Z(m, p);
  Eigen::VectorXd wt(m);
  for (std::size_t j = 0; j < m; ++j) {
    const auto z = basis.covariates(q[j].x, q[j].y);
    for (std::size_t k = 0; k < p; ++k) Z(j, k) = z[k];
    wt(j) = cw * ch / count[cell_of(q[j].x, q[j].y)];
  }
  Eigen::VectorXd zsum = Z.topRows(points.size()).colwise().sum().transpose();

  auto loglik = [&](const Eigen::VectorXd& g) {
    const Eigen::VectorXd eta = Z * g;
    return zsum.dot(g) - wt.dot(eta.array().exp().matrix());
  };

  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(p);
  gamma(0) = std::log(static_cast<double>(points.size()) / w.area());
  Convergence conv;
  double ll = loglik(gamma);
  conv.loglik_trace.push_back(ll);
  auto as_vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };

  for (int it = 0;; ++it) {
    const Eigen::VectorXd mu = wt.array() * (Z * gamma).array().exp();
    const Eigen::VectorXd grad = zsum - Z.transpose() * mu;
    conv.iterations = it;
    conv.gradient_norm = norm(grad);
    if (!std::isfinite(conv.gradient_norm)) throw FitError("log-linear fit diverged", as_vec(gamma));
    if (conv.gradient_norm <= 1e-8) break;
    if (it == 100) throw FitError("log-linear fit did not converge in 100 iterations", as_vec(gamma));

    const Eigen::MatrixXd info = Z.transpose() * mu.asDiagonal() * Z;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 0.0) {
      throw FitError("log-linear fit: information matrix is not positive definite", as_vec(gamma));
    }
    const Eigen::VectorXd step = ldlt.solve(grad);
    Eigen::VectorXd next = gamma + step;
    // Once the predicted gain is below the rounding of the log-likelihood,
    // the line search cannot tell steps apart; take the Newton step.
    if (grad.dot(step) <= 1e-12 * (1.0 + std::abs(ll))) {
      gamma = next;
      ll = loglik(gamma);
      conv.loglik_trace.push_back(ll);
      continue;
    }
    double t = 1.0;
    double next_ll = loglik(next);
    while (!(next_ll >= ll) && t > 1e-10) {
      t *= 0.5;
      next = gamma + t * step;
      next_ll = loglik(next);
    }
    if (!(next_ll >= ll)) {
      // No ascent along the Newton direction: at the optimum up to rounding.
      if (conv.gradient_norm <= 1e-6) break;
      throw FitError("log-linear fit: line search failed", as_vec(gamma));
    }
    gamma = next;
    ll = next_ll;
    conv.loglik_trace.push_back(ll);
  }

  LogLinearSpatialField field(order, as_vec(gamma), w);
  auto raw = field.raw_coefficients();
  return ParametricFit{order, std::move(field), std::move(raw), ll, std::move(conv)};
}

ExpTemporalField fit_exponential_temporal(std::span<const double> times, const Interval& range) {
  const double n = static_cast<double>(times.size());
  if (times.empty()) throw std::invalid_argument("exponential temporal fit needs at least one event");
  const double len = range.length();
  double r = 0.0;
  for (double t : times) r += (t - range.lo) / len;
  r /= n;
  if (!(r > 0.0 && r < 1.0)) throw std::runtime_error("exponential temporal fit: likelihood is unbounded");

  auto f = [r](double g) { return truncated_exp_mean(g) - r; };
  double lo = -1.0, hi = 1.0;
  while (f(lo) > 0.0) {
    lo *= 2.0;
    if (lo < -1e6) throw std::runtime_error("exponential temporal fit: rate diverged");
  }
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e6) throw std::runtime_error("exponential temporal fit: rate diverged");
  }
  std::uintmax_t iters = 200;
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, boost::math::tools::eps_tolerance<double>(52), iters);
  const double g = 0.5 * (a + b);
  return ExpTemporalField(n / len * exp_ratio(g), g / len, range.lo);
}

IntensityModel assemble_product(SpatialField spatial, TemporalField temporal, double n) {
  if (!(n > 0.0)) throw std::invalid_argument("product intensity needs n > 0");
  return ProductIntensity{std::move(spatial), std::move(temporal), n};
}

std::string IntensityStrategy::tag() const {
  switch (kind) {
    case Kind::True: return "true";
    case Kind::Kernel: return auto_bandwidth ? "kernel(auto)" : "kernel(" + format_double(bandwidth) + ")";
    case Kind::Parametric: return "parametric(" + std::to_string(order) + ")";
  }
  return "?";
}

IntensityStrategy IntensityStrategy::parse(const std::string& tag) {
  IntensityStrategy s;
  auto inner = [&](const std::string& head) -> std::optional<std::string> {
    if (tag.rfind(head + "(", 0) == 0 && tag.back() == ')') {
      return tag.substr(head.size() + 1, tag.size() - head.size() - 2);
    }
    return std::nullopt;
  };
  if (tag == "true") return s;
  if (tag == "kernel") {
    s.kind = Kind::Kernel;
    return s;
  }
  if (auto a = inner("kernel")) {
    s.kind = Kind::Kernel;
    if (*a != "auto") {
      s.auto_bandwidth = false;
      s.bandwidth = parse_double(*a);
      if (!(s.bandwidth > 0.0)) throw std::invalid_argument("kernel bandwidth must be positive");
    }
    return s;
  }
  if (tag == "parametric") {
    s.kind = Kind::Parametric;
    return s;
  }
  if (auto a = inner("parametric")) {
    s.kind = Kind::Parametric;
    if (*a != "1" && *a != "2") throw std::invalid_argument("parametric order must be 1 or 2");
    s.order = *a == "1" ? 1 : 2;
    return s;
  }
  throw std::invalid_argument("unknown intensity strategy '" + tag +
                              "' (valid: true, kernel(auto), kernel(<h>), parametric(1), parametric(2))");
}

std::vector<Point2> spatial_coords(const PointPattern& p) {
  std::vector<Point2> out;
  out.reserve(p.size());
  for (const auto& e : p.points()) out.push_back({e.sx, e.sy});
  return out;
}

std::vector<double> event_times(const PointPattern& p) {
  std::vector<double> out;
  out.reserve(p.size());
  for (const auto& e : p.points()) out.push_back(e.t);
  return out;
}

IntensityModel estimate_intensity(const PointPattern& p, const IntensityStrategy& s) {
  const auto xy = spatial_coords(p);
  const auto t = event_times(p);
  const double n = static_cast<double>(p.size());
  switch (s.kind) {
    case IntensityStrategy::Kind::True:
      throw std::invalid_argument("the true intensity is not estimated");
    case IntensityStrategy::Kind::Kernel: {
      const double h = s.auto_bandwidth ? berman_diggle_bandwidth(xy, p.window()) : s.bandwidth;
      auto spatial = spatial_kernel_intensity(xy, p.window(), h);
      auto temporal = temporal_kernel_intensity(t, p.window().t(), silverman_bandwidth(t));
      return assemble_product(std::move(spatial), std::move(temporal), n);
    }
    case IntensityStrategy::Kind::Parametric: {
      auto fit = fit_loglinear(xy, p.window(), s.order);
      auto temporal = fit_exponential_temporal(t, p.window().t());
      return ParametricIntensity{std::move(fit.field), temporal, n};
    }
  }
  throw std::logic_error("unhandled intensity strategy");
}

}  // namespace stpp
