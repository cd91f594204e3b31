#include "stpp/intensity_model.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stpp {

namespace {

using boost::math::quadrature::gauss;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double cos_factor(double beta, double x) { return 1.25 + std::cos(beta * x + 0.25); }

template <class F>
double integrate_1d(F&& f, double a, double b, int panels) {
  double total = 0.0;
  const double step = (b - a) / panels;
  for (int k = 0; k < panels; ++k) {
    const double lo = a + step * k;
    const double hi = k + 1 == panels ? b : lo + step;
    total += gauss<double, 20>::integrate(f, lo, hi);
  }
  return total;
}

// Per-axis factors of the analytic parent forms.
double parent_x(const OffspringIntensity& o, double x) {
  switch (o.parent) {
    case OffspringIntensity::Parent::Constant: return 1.0;
    case OffspringIntensity::Parent::Exp: return std::exp(o.beta * x);
    case OffspringIntensity::Parent::Cos: return cos_factor(o.beta, x);
  }
  return 1.0;
}

double parent_y(const OffspringIntensity& o, double y) {
  return o.parent == OffspringIntensity::Parent::Exp ? std::exp(o.beta * y) : 1.0;
}

double parent_t(const OffspringIntensity& o, double t) {
  switch (o.parent) {
    case OffspringIntensity::Parent::Constant: return 1.0;
    case OffspringIntensity::Parent::Exp: return std::exp(-o.beta * t);
    case OffspringIntensity::Parent::Cos: return cos_factor(o.beta, t);
  }
  return 1.0;
}

// Gaussian smoothing of f clamped to [lo, hi]: E f(clamp(x - D)), D ~ N(0, s^2).
template <class F>
double smooth_clamped(F&& f, double x, double lo, double hi, double s) {
  double total = f(lo) * (1.0 - normal_cdf((x - lo) / s)) + f(hi) * normal_cdf((x - hi) / s);
  const double a = std::max(lo, x - 9.0 * s), b = std::min(hi, x + 9.0 * s);
  if (b > a) {
    const int panels = std::max(1, static_cast<int>(std::ceil((b - a) / (1.5 * s))));
    const double c = 1.0 / (s * std::sqrt(2.0 * std::numbers::pi));
    total += integrate_1d(
        [&](double z) {
          const double d = (x - z) / s;
          return f(z) * c * std::exp(-0.5 * d * d);
        },
        a, b, panels);
  }
  return total;
}

double offspring_parent_scale(const OffspringIntensity& o) {
  const auto& w = o.window;
  const double ix = integrate_1d([&](double x) { return parent_x(o, x); }, w.x().lo, w.x().hi, 8);
  const double iy = integrate_1d([&](double y) { return parent_y(o, y); }, w.y().lo, w.y().hi, 8);
  const double it = integrate_1d([&](double t) { return parent_t(o, t); }, w.t().lo, w.t().hi, 8);
  return o.nu / (ix * iy * it);
}

double offspring_spatial(const OffspringIntensity& o, double x, double y) {
  const auto& w = o.window;
  const double fx = smooth_clamped([&](double z) { return parent_x(o, z); }, x, w.x().lo, w.x().hi, o.sigma);
  const double fy = smooth_clamped([&](double z) { return parent_y(o, z); }, y, w.y().lo, w.y().hi, o.sigma);
  return fx * fy;
}

double offspring_temporal(const OffspringIntensity& o, double t) {
  const auto& T = o.window.t();
  const double mean = o.parent_time_mean;
  if (t <= T.lo) return mean;
  const double tail = mean * std::exp(-o.alpha * (t - T.lo));
  const double lag = t - T.lo;
  const int panels = std::max(1, static_cast<int>(std::ceil(lag / 0.1)));
  const double body = integrate_1d(
      [&](double tau) { return parent_t(o, t - tau) * o.alpha * std::exp(-o.alpha * tau); }, 0.0,
      lag, panels);
  return body + tail;
}

}  // namespace

IntensityModel IntensityModel::constant(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("constant intensity must be positive");
  return ConstantIntensity{lambda};
}

IntensityModel IntensityModel::exp_form(double beta, double n) {
  if (!(beta > 0.0) || !(n > 0.0)) throw std::invalid_argument("exp intensity needs beta > 0, n > 0");
  return ExpIntensity{beta, n};
}

IntensityModel IntensityModel::cos_form(double beta, double n) {
  if (!(beta > 0.0) || !(n > 0.0)) throw std::invalid_argument("cos intensity needs beta > 0, n > 0");
  const double m = integrate_1d([&](double x) { return cos_factor(beta, x); }, 0.0, 1.0, 16);
  return CosIntensity{beta, n, m * m};
}

IntensityModel IntensityModel::offspring(OffspringIntensity o) {
  if (!(o.sigma > 0.0) || !(o.alpha > 0.0) || !(o.mc > 0.0) || !(o.nu > 0.0)) {
    throw std::invalid_argument("offspring intensity needs positive sigma, alpha, mc, nu");
  }
  o.parent_scale = offspring_parent_scale(o);
  const auto& T = o.window.t();
  o.parent_time_mean = integrate_1d([&](double s) { return parent_t(o, s); }, T.lo, T.hi, 8) / T.length();
  return o;
}

double IntensityModel::scale() const {
  return std::visit(
      overloaded{
          [](const ConstantIntensity& c) { return c.lambda; },
          [](const ExpIntensity& e) {
            const double b = e.beta;
            return e.n * b * b * b / (std::pow(std::expm1(b), 2) * -std::expm1(-b));
          },
          [](const CosIntensity& c) { return c.n / c.norm; },
          [](const ProductIntensity& p) { return 1.0 / p.n; },
          [](const ParametricIntensity& p) { return 1.0 / p.n; },
          [](const OffspringIntensity& o) { return o.mc * o.parent_scale; },
      },
      v_);
}

double IntensityModel::spatial_factor(double sx, double sy) const {
  return std::visit(
      overloaded{
          [](const ConstantIntensity&) { return 1.0; },
          [&](const ExpIntensity& e) { return std::exp(e.beta * (sx + sy)); },
          [&](const CosIntensity& c) { return cos_factor(c.beta, sx); },
          [&](const ProductIntensity& p) { return evaluate(p.spatial, sx, sy); },
          [&](const ParametricIntensity& p) { return p.spatial(sx, sy); },
          [&](const OffspringIntensity& o) { return offspring_spatial(o, sx, sy); },
      },
      v_);
}

double IntensityModel::temporal_factor(double t) const {
  return std::visit(
      overloaded{
          [](const ConstantIntensity&) { return 1.0; },
          [&](const ExpIntensity& e) { return std::exp(-e.beta * t); },
          [&](const CosIntensity& c) { return cos_factor(c.beta, t); },
          [&](const ProductIntensity& p) { return evaluate(p.temporal, t); },
          [&](const ParametricIntensity& p) { return p.temporal(t); },
          [&](const OffspringIntensity& o) { return offspring_temporal(o, t); },
      },
      v_);
}

double IntensityModel::operator()(double sx, double sy, double t) const {
  return std::visit(
      overloaded{
          [](const ConstantIntensity& c) { return c.lambda; },
          [&](const OffspringIntensity& o) {
            return o.mc * o.parent_scale * offspring_spatial(o, sx, sy) *
                   offspring_temporal(o, t);
          },
          [&](const auto&) { return scale() * spatial_factor(sx, sy) * temporal_factor(t); },
      },
      v_);
}

std::string IntensityModel::tag() const {
  return std::visit(overloaded{
                        [](const ConstantIntensity&) { return std::string("constant"); },
                        [](const ExpIntensity&) { return std::string("lambda1"); },
                        [](const CosIntensity&) { return std::string("lambda2"); },
                        [](const ProductIntensity&) { return std::string("kernel"); },
                        [](const ParametricIntensity&) { return std::string("parametric"); },
                        [](const OffspringIntensity&) { return std::string("offspring"); },
                    },
                    v_);
}

KeyValues IntensityModel::describe() const {
  KeyValues kv;
  kv.set("variant", tag());
  std::visit(
      overloaded{
          [&](const ConstantIntensity& c) { kv.set("lambda", c.lambda); },
          [&](const ExpIntensity& e) {
            kv.set("beta", e.beta);
            kv.set("n", e.n);
          },
          [&](const CosIntensity& c) {
            kv.set("beta", c.beta);
            kv.set("n", c.n);
            kv.set("norm", c.norm);
          },
          [&](const ProductIntensity& p) {
            kv.set("n", p.n);
            std::visit(overloaded{
                           [&](const KernelSpatialField& k) {
                             kv.set("spatial", "quartic_kernel");
                             kv.set("spatial_bandwidth", k.bandwidth());
                           },
                           [&](const LogLinearSpatialField& l) {
                             kv.set("spatial", "loglinear");
                             kv.set("spatial_order", std::to_string(l.order()));
                           },
                       },
                       p.spatial);
            std::visit(overloaded{
                           [&](const KernelTemporalField& k) {
                             kv.set("temporal", "gaussian_kernel");
                             kv.set("temporal_bandwidth", k.bandwidth());
                           },
                           [&](const ExpTemporalField& e) {
                             kv.set("temporal", "exponential");
                             kv.set("temporal_rate", e.rate());
                           },
                       },
                       p.temporal);
          },
          [&](const ParametricIntensity& p) {
            kv.set("n", p.n);
            kv.set("order", std::to_string(p.spatial.order()));
            const auto beta = p.spatial.raw_coefficients();
            for (std::size_t k = 0; k < beta.size(); ++k) kv.set("beta" + std::to_string(k), beta[k]);
            kv.set("temporal_amplitude", p.temporal.amplitude());
            kv.set("temporal_rate", p.temporal.rate());
            kv.set("temporal_origin", p.temporal.origin());
          },
          [&](const OffspringIntensity& o) {
            const char* names[] = {"constant", "lambda1", "lambda2"};
            kv.set("parent", names[static_cast<int>(o.parent)]);
            kv.set("beta", o.beta);
            kv.set("nu", o.nu);
            kv.set("mc", o.mc);
            kv.set("sigma", o.sigma);
            kv.set("alpha", o.alpha);
          },
      },
      v_);
  return kv;
}

double integrate(const IntensityModel& model, const STWindow& w, int panels) {
  const double it = integrate_1d([&](double t) { return model.temporal_factor(t); }, w.t().lo, w.t().hi, panels);
  const double ixy = integrate_1d(
      [&](double x) {
        return integrate_1d([&](double y) { return model.spatial_factor(x, y); }, w.y().lo, w.y().hi, panels);
      },
      w.x().lo, w.x().hi, panels);
  return model.scale() * ixy * it;
}

}  // namespace stpp
