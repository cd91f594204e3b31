#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stpp/geometry.hpp"
#include "stpp/intensity_model.hpp"
#include "stpp/rng.hpp"

namespace stpp {

/// Events observed in a window. Every event lies inside the window.
class PointPattern {
 public:
  PointPattern(STWindow window, std::vector<STPoint> points);

  const STWindow& window() const { return window_; }
  const std::vector<STPoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const STPoint& operator[](std::size_t i) const { return points_[i]; }

  bool operator==(const PointPattern&) const = default;

 private:
  STWindow window_;
  std::vector<STPoint> points_;
};

/// Geometric anisotropy of the offspring displacement. The covariance is
/// (omega sigma)^2 U_theta diag(1, zeta^2) U_theta^T.
struct Anisotropy {
  double zeta = 1.0;
  double theta = 0.0;
  double omega = 1.0;
};

/// Poisson cluster process: parents from parent_intensity, Poisson(mc)
/// offspring per parent, Gaussian spatial offsets, Exp(alpha) forward time
/// offsets. Only offspring are kept.
struct ClusterSpec {
  IntensityModel parent_intensity = IntensityModel::constant(25.0);
  double sigma = 0.1;
  double alpha = 0.2;
  double mc = 15.0;
  std::optional<Anisotropy> anisotropy;

  void validate() const;
  /// sigma times the largest standard-deviation scale of the covariance.
  double effective_sigma() const;
};

/// Thrown when a sampled intensity exceeds the rejection bound.
class DominanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exponential intensity, normalised to n on the unit cube.
double lambda1(double sx, double sy, double t, double beta1, double n);
/// Cosine intensity with a quadrature normalising constant; integrates to n.
double lambda2(double sx, double sy, double t, double beta2, double n);

PointPattern simulate_hpp(double lambda, const STWindow& w, std::uint64_t seed);

/// Thinning of a homogeneous process at 1.2 times the maximum of the model
/// over a 64^3 grid of the window. Throws DominanceError if any candidate
/// has an intensity above that bound.
PointPattern simulate_ipp(const IntensityModel& model, const STWindow& w, std::uint64_t seed);

/// Parents are simulated on the window dilated by 4 effective sigmas in
/// space and extended back in time by ln(1000) / alpha. Non-constant parent
/// intensities are extended by clamping space to the window and using their
/// time average before the start of T.
PointPattern simulate_pcp(const ClusterSpec& spec, const STWindow& w, std::uint64_t seed);

/// One spatial offspring displacement drawn from the cluster covariance.
Point2 sample_offspring_offset(const ClusterSpec& spec, Rng& rng);

/// Parameters of the stationary isotropic cluster process with closed forms.
struct Pcp1Params {
  double sigma = 0.1;
  double alpha = 0.2;
  double nu = 25.0;
};

/// 1 + alpha / (8 pi sigma^2 nu) exp(-u^2 / (4 sigma^2) - alpha v).
double pcp1_theoretical_g(double u, double v, const Pcp1Params& p);
/// 2 pi u^2 v + (1 / nu)(1 - exp(-alpha v))(1 - exp(-u^2 / (4 sigma^2))),
/// the cylinder integral of pcp1_theoretical_g.
double pcp1_theoretical_k(double u, double v, const Pcp1Params& p);
/// Requires isotropic offspring and a constant parent intensity.
Pcp1Params pcp1_params(const ClusterSpec& spec);

/// 2 pi u^2 v.
double poisson_k(double u, double v);

}  // namespace stpp
