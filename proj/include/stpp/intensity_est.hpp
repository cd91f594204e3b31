#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stpp/fields.hpp"
#include "stpp/intensity_model.hpp"
#include "stpp/procgen.hpp"

namespace stpp {

/// 0.9 n^(-1/5) min(sd, IQR / 1.34). sd uses the n - 1 divisor; quartiles
/// interpolate linearly between order statistics. Needs n >= 2 and some
/// spread in the data.
double silverman_bandwidth(std::span<const double> times);

/// Sample quantile with linear interpolation between order statistics.
double quantile_linear(std::vector<double> x, double p);

KernelTemporalField temporal_kernel_intensity(std::span<const double> times, const Interval& range, double bw);
KernelSpatialField spatial_kernel_intensity(std::span<const Point2> points, const STWindow& w, double bw);

/// Berman-Diggle estimate of the mean squared error of a disc-kernel
/// intensity estimate with radius h, up to a term that does not depend on h:
///   |S|/(n pi h^2) + (1/(pi h^2)^2) int B_h(t) dK(t) - 2 K(h)/(pi h^2),
/// where B_h(t) is the overlap area of two discs of radius h at distance t
/// and K is Ripley's isotropic-corrected estimate from the pattern.
double berman_diggle_criterion(std::span<const Point2> points, const STWindow& w, double h);
/// 64 log-spaced values on [0.01, 0.5].
std::vector<double> berman_diggle_grid();
/// Grid minimiser of berman_diggle_criterion. Needs at least 10 points.
double berman_diggle_bandwidth(std::span<const Point2> points, const STWindow& w);

struct Convergence {
  int iterations = 0;
  double gradient_norm = 0.0;
  std::vector<double> loglik_trace;  // one entry per accepted iterate, start included
};

struct ParametricFit {
  int order = 1;
  LogLinearSpatialField field;
  std::vector<double> coefficients;  // raw-coordinate coefficients
  double loglik = 0.0;               // Berman-Turner approximation at the optimum
  Convergence convergence;
};

/// Thrown when the optimiser fails. Carries the last iterate (window
/// coordinates) for diagnosis.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, std::vector<double> last) : std::runtime_error(what), last_(std::move(last)) {}
  const std::vector<double>& last_iterate() const { return last_; }

 private:
  std::vector<double> last_;
};

/// Poisson likelihood fit of exp(beta . Z(s)) by Berman-Turner quadrature
/// (32 x 32 dummy grid at cell centres, counting weights) and damped Newton.
/// Stops when the gradient norm falls to 1e-8; throws FitError after 100
/// iterations or when the Hessian stops being negative definite.
ParametricFit fit_loglinear(std::span<const Point2> points, const STWindow& w, int order);

/// a exp(gamma (t - t0)) on [t0, t1], fitted by one-dimensional Poisson
/// maximum likelihood. The amplitude makes the field integrate to n.
ExpTemporalField fit_exponential_temporal(std::span<const double> times, const Interval& range);

/// spatial(s) temporal(t) / n.
IntensityModel assemble_product(SpatialField spatial, TemporalField temporal, double n);

/// How the first-order intensity entering the second-order estimators is
/// obtained.
struct IntensityStrategy {
  enum class Kind { True, Kernel, Parametric };
  Kind kind = Kind::True;
  bool auto_bandwidth = true;  // kernel: Berman-Diggle spatial bandwidth
  double bandwidth = 0.2;      // kernel: fixed spatial bandwidth when !auto_bandwidth
  int order = 1;               // parametric: model order

  /// "true", "kernel(auto)", "kernel(0.2)", "parametric(1)".
  std::string tag() const;
  static IntensityStrategy parse(const std::string& tag);
};

/// Kernel: quartic spatial estimate (Berman-Diggle or fixed bandwidth) times
/// Gaussian temporal estimate with Silverman bandwidth. Parametric: log-linear
/// spatial fit times exponential temporal fit. Not defined for Kind::True.
IntensityModel estimate_intensity(const PointPattern& p, const IntensityStrategy& s);

std::vector<Point2> spatial_coords(const PointPattern& p);
std::vector<double> event_times(const PointPattern& p);

}  // namespace stpp
