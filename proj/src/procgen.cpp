#include "stpp/procgen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace stpp {

namespace {

constexpr int kBoundGrid = 64;
constexpr double kBoundSafety = 1.2;

std::vector<double> linspace(const Interval& iv, int n) {
  std::vector<double> out(n);
  for (int k = 0; k < n; ++k) out[k] = iv.lo + iv.length() * k / (n - 1);
  out.back() = iv.hi;
  return out;
}

double spatial_sup(const IntensityModel& m, const STWindow& w) {
  double best = 0.0;
  for (double x : linspace(w.x(), kBoundGrid)) {
    for (double y : linspace(w.y(), kBoundGrid)) best = std::max(best, m.spatial_factor(x, y));
  }
  return best;
}

double temporal_sup(const IntensityModel& m, const Interval& t) {
  double best = 0.0;
  for (double s : linspace(t, kBoundGrid)) best = std::max(best, m.temporal_factor(s));
  return best;
}

STPoint uniform_point(const STWindow& w, Rng& rng) {
  std::uniform_real_distribution<double> ux(w.x().lo, w.x().hi), uy(w.y().lo, w.y().hi),
      ut(w.t().lo, w.t().hi);
  const double x = ux(rng);
  const double y = uy(rng);
  const double t = ut(rng);
  return {x, y, t};
}

std::vector<STPoint> homogeneous(double lambda, const STWindow& w, Rng& rng) {
  std::poisson_distribution<long> count(lambda * w.volume());
  const long n = count(rng);
  std::vector<STPoint> pts;
  pts.reserve(static_cast<std::size_t>(n));
  for (long k = 0; k < n; ++k) pts.push_back(uniform_point(w, rng));
  return pts;
}

// Rejection from a homogeneous process at rate bound. Throws when the
// target exceeds the bound at a candidate.
template <class F>
std::vector<STPoint> thin(F&& target, double bound, const STWindow& w, Rng& rng) {
  std::vector<STPoint> cand = homogeneous(bound, w, rng);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<STPoint> kept;
  for (const auto& p : cand) {
    const double lam = target(p);
    if (lam > bound) {
      throw DominanceError("intensity " + std::to_string(lam) + " exceeds rejection bound " +
                           std::to_string(bound));
    }
    if (unif(rng) * bound < lam) kept.push_back(p);
  }
  return kept;
}

double temporal_mean(const IntensityModel& m, const Interval& t) {
  // Simpson on a fine grid; only used for the pre-window parent extension.
  const int n = 512;
  const double h = t.length() / n;
  double s = m.temporal_factor(t.lo) + m.temporal_factor(t.hi);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * m.temporal_factor(t.lo + h * k);
  return s * h / 3.0 / t.length();
}

}  // namespace

PointPattern::PointPattern(STWindow window, std::vector<STPoint> points)
    : window_(window), points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!window_.contains(points_[i])) {
      throw std::invalid_argument("event " + std::to_string(i) + " lies outside the window");
    }
  }
}

void ClusterSpec::validate() const {
  if (!(sigma > 0.0)) throw std::invalid_argument("cluster sigma must be positive");
  if (!(alpha > 0.0)) throw std::invalid_argument("cluster alpha must be positive");
  if (!(mc > 0.0)) throw std::invalid_argument("cluster mc must be positive");
  if (anisotropy) {
    if (!(anisotropy->zeta > 0.0 && anisotropy->zeta <= 1.0)) {
      throw std::invalid_argument("anisotropy zeta must lie in (0, 1]");
    }
    if (!(anisotropy->omega > 0.0)) throw std::invalid_argument("anisotropy omega must be positive");
  }
}

double ClusterSpec::effective_sigma() const {
  const double scale = anisotropy ? anisotropy->omega * std::max(1.0, anisotropy->zeta) : 1.0;
  return sigma * std::max(1.0, scale);
}

double lambda1(double sx, double sy, double t, double beta1, double n) {
  return IntensityModel::exp_form(beta1, n)(sx, sy, t);
}

double lambda2(double sx, double sy, double t, double beta2, double n) {
  return IntensityModel::cos_form(beta2, n)(sx, sy, t);
}

PointPattern simulate_hpp(double lambda, const STWindow& w, std::uint64_t seed) {
  if (!(lambda > 0.0)) throw std::invalid_argument("HPP intensity must be positive");
  Rng rng(seed);
  return PointPattern(w, homogeneous(lambda, w, rng));
}

PointPattern simulate_ipp(const IntensityModel& model, const STWindow& w, std::uint64_t seed) {
  Rng rng(seed);
  const double bound = kBoundSafety * model.scale() * spatial_sup(model, w) * temporal_sup(model, w.t());
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw std::invalid_argument("IPP intensity has no positive finite bound on the window");
  }
  return PointPattern(w, thin([&](const STPoint& p) { return model(p); }, bound, w, rng));
}

Point2 sample_offspring_offset(const ClusterSpec& spec, Rng& rng) {
  std::normal_distribution<double> z;
  const double z1 = z(rng);
  const double z2 = z(rng);
  if (!spec.anisotropy) return {spec.sigma * z1, spec.sigma * z2};
  const auto& a = *spec.anisotropy;
  const double s = spec.sigma * a.omega;
  const double c = std::cos(a.theta), n = std::sin(a.theta);
  const double e1 = s * z1, e2 = s * a.zeta * z2;
  return {c * e1 - n * e2, n * e1 + c * e2};
}

PointPattern simulate_pcp(const ClusterSpec& spec, const STWindow& w, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  const double pad = 4.0 * spec.effective_sigma();
  const double back = std::log(1000.0) / spec.alpha;
  const STWindow buffer({w.x().lo - pad, w.x().hi + pad}, {w.y().lo - pad, w.y().hi + pad},
                        {w.t().lo - back, w.t().hi});

  const IntensityModel& parent = spec.parent_intensity;
  std::vector<STPoint> parents;
  if (const auto* c = std::get_if<ConstantIntensity>(&parent.variant())) {
    parents = homogeneous(c->lambda, buffer, rng);
  } else {
    const double mean_t = temporal_mean(parent, w.t());
    const double scale = parent.scale();
    auto extended = [&](const STPoint& p) {
      const double x = std::clamp(p.sx, w.x().lo, w.x().hi);
      const double y = std::clamp(p.sy, w.y().lo, w.y().hi);
      const double ft = p.t < w.t().lo ? mean_t : parent.temporal_factor(p.t);
      return scale * parent.spatial_factor(x, y) * ft;
    };
    const double bound =
        kBoundSafety * scale * spatial_sup(parent, w) * std::max(mean_t, temporal_sup(parent, w.t()));
    parents = thin(extended, bound, buffer, rng);
  }

  std::poisson_distribution<long> brood(spec.mc);
  std::exponential_distribution<double> delay(spec.alpha);
  std::vector<STPoint> kept;
  for (const auto& p : parents) {
    const long m = brood(rng);
    for (long k = 0; k < m; ++k) {
      const Point2 d = sample_offspring_offset(spec, rng);
      const double dt = delay(rng);
      const STPoint child{p.sx + d.x, p.sy + d.y, p.t + dt};
      if (w.contains(child)) kept.push_back(child);
    }
  }
  return PointPattern(w, std::move(kept));
}

double pcp1_theoretical_g(double u, double v, const Pcp1Params& p) {
  const double amp = p.alpha / (8.0 * std::numbers::pi * p.sigma * p.sigma * p.nu);
  return 1.0 + amp * std::exp(-u * u / (4.0 * p.sigma * p.sigma) - p.alpha * v);
}

double pcp1_theoretical_k(double u, double v, const Pcp1Params& p) {
  return poisson_k(u, v) + (-std::expm1(-p.alpha * v)) * (-std::expm1(-u * u / (4.0 * p.sigma * p.sigma))) / p.nu;
}

Pcp1Params pcp1_params(const ClusterSpec& spec) {
  const auto* c = std::get_if<ConstantIntensity>(&spec.parent_intensity.variant());
  if (!c) throw std::invalid_argument("closed forms need a constant parent intensity");
  double sigma = spec.sigma;
  if (spec.anisotropy) {
    if (spec.anisotropy->zeta != 1.0) throw std::invalid_argument("closed forms need isotropic offspring");
    sigma *= spec.anisotropy->omega;
  }
  return {sigma, spec.alpha, c->lambda};
}

double poisson_k(double u, double v) { return 2.0 * std::numbers::pi * u * u * v; }

}  // namespace stpp
