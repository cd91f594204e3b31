#pragma once

#include <string>
#include <type_traits>
#include <utility>
#include <variant>

#include "stpp/fields.hpp"
#include "stpp/geometry.hpp"
#include "stpp/kvfile.hpp"

namespace stpp {

struct ConstantIntensity {
  double lambda = 1.0;
};

/// n beta^3 / ((e^beta - 1)^2 (1 - e^-beta)) * exp(beta (sx + sy - t));
/// integrates to n over the unit cube.
struct ExpIntensity {
  double beta = 1.0;
  double n = 1.0;
};

/// n (1.25 + cos(beta sx + 0.25)) (1.25 + cos(beta t + 0.25)) / norm, with
/// norm the numerically integrated product of the two factors over [0, 1]^3.
struct CosIntensity {
  double beta = 3.0;
  double n = 1.0;
  double norm = 1.0;
};

/// spatial(s) * temporal(t) / n.
struct ProductIntensity {
  SpatialField spatial;
  TemporalField temporal;
  double n = 1.0;
};

/// Fitted log-linear spatial model times a fitted exponential temporal model.
struct ParametricIntensity {
  LogLinearSpatialField spatial;
  ExpTemporalField temporal;
  double n = 1.0;
};

/// First-order intensity of the offspring of a cluster process whose parents
/// follow an analytic intensity (constant, exp or cos form). The parent
/// intensity is extended outside the window by clamping space to the
/// rectangle and, before the start of T, by its time average. Offspring are
/// displaced by isotropic N(0, sigma^2 I) in space and Exp(alpha) forward in
/// time.
struct OffspringIntensity {
  enum class Parent { Constant, Exp, Cos };
  Parent parent = Parent::Constant;
  double beta = 1.0;
  double nu = 25.0;  // parent intensity integrates to nu over the window
  double mc = 15.0;
  double sigma = 0.1;
  double alpha = 0.2;
  STWindow window = STWindow::unit_cube();
  // Filled by IntensityModel::offspring().
  double parent_scale = 0.0;
  double parent_time_mean = 0.0;
};

/// Evaluable first-order intensity lambda(s, t). Every variant is separable:
/// evaluate() == scale() * spatial_factor(s) * temporal_factor(t).
class IntensityModel {
 public:
  using Variant = std::variant<ConstantIntensity, ExpIntensity, CosIntensity, ProductIntensity,
                               ParametricIntensity, OffspringIntensity>;

  template <class T>
    requires(!std::is_same_v<std::remove_cvref_t<T>, IntensityModel> && std::is_constructible_v<Variant, T &&>)
  IntensityModel(T&& v) : v_(std::forward<T>(v)) {}  // NOLINT implicit

  static IntensityModel constant(double lambda);
  static IntensityModel exp_form(double beta, double n);
  /// Normalising constant is computed by quadrature.
  static IntensityModel cos_form(double beta, double n);
  static IntensityModel offspring(OffspringIntensity o);

  double operator()(double sx, double sy, double t) const;
  double operator()(const STPoint& p) const { return (*this)(p.sx, p.sy, p.t); }

  double scale() const;
  double spatial_factor(double sx, double sy) const;
  double temporal_factor(double t) const;

  const Variant& variant() const { return v_; }
  /// Short tag such as "constant", "lambda1", "kernel", "parametric".
  std::string tag() const;
  /// Variant tag plus parameters, for provenance files.
  KeyValues describe() const;

 private:
  Variant v_;
};

/// Tensor Gauss-Legendre integral of the model over a window.
double integrate(const IntensityModel& model, const STWindow& w, int panels = 16);

}  // namespace stpp
