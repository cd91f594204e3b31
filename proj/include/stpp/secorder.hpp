#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "stpp/grid.hpp"
#include "stpp/intensity_model.hpp"
#include "stpp/procgen.hpp"

namespace stpp {

enum class EdgeCorrection { None, Isotropic, Border, ModifiedBorder, Translation };

std::string correction_name(EdgeCorrection c);
std::optional<EdgeCorrection> parse_correction(const std::string& s);
const std::vector<EdgeCorrection>& all_corrections();
std::vector<std::string> correction_names();

enum class Statistic { K, G };

std::string statistic_name(Statistic s);
std::optional<Statistic> parse_statistic(const std::string& s);

/// K-hat or g-hat values on a (u, v) grid. Undefined entries hold kMissing.
struct Surface {
  Statistic statistic = Statistic::K;
  EvalGrid grid = EvalGrid::default_grid();
  Matrix values;
  EdgeCorrection correction = EdgeCorrection::None;
  std::string intensity_source = "true";

  double at(std::size_t iu, std::size_t iv) const { return values(iu, iv); }
  bool operator==(const Surface&) const = default;
};

/// Edge-correction weight w_ij at lags (u, v). Border and ModifiedBorder
/// return +infinity when x_i is not eligible (the pair contributes nothing)
/// and kMissing when the weight is undefined: no eligible event (Border) or
/// an eroded window that has collapsed (ModifiedBorder).
double pair_weight(const STPoint& xi, const STPoint& xj, const STWindow& w, EdgeCorrection corr, double u,
                   double v, const PointPattern& pattern, const IntensityModel& intensity);

/// Default kernel half-widths of g-hat.
inline constexpr double kDefaultHs = 0.01;
inline constexpr double kDefaultHt = 0.01;

struct EstimatorOptions {
  /// Enumerate all ordered pairs instead of using spatial bins. Results are
  /// bitwise identical; kept for testing.
  bool brute_force = false;
};

/// Intensity values are given per event, in pattern order.
Surface k_hat(const PointPattern& p, std::span<const double> lambda, EdgeCorrection corr, const EvalGrid& grid,
              const std::string& intensity_source = "true", EstimatorOptions opt = {});
Surface k_hat(const PointPattern& p, const IntensityModel& intensity, EdgeCorrection corr, const EvalGrid& grid,
              const std::string& intensity_source = "true", EstimatorOptions opt = {});

/// Box kernels of half-widths hs and ht; entries with u < hs are missing.
Surface g_hat(const PointPattern& p, std::span<const double> lambda, EdgeCorrection corr, const EvalGrid& grid,
              double hs = kDefaultHs, double ht = kDefaultHt, const std::string& intensity_source = "true",
              EstimatorOptions opt = {});
Surface g_hat(const PointPattern& p, const IntensityModel& intensity, EdgeCorrection corr, const EvalGrid& grid,
              double hs = kDefaultHs, double ht = kDefaultHt, const std::string& intensity_source = "true",
              EstimatorOptions opt = {});

/// Intensity at each event; throws if any value is not strictly positive.
std::vector<double> intensity_at_events(const PointPattern& p, const IntensityModel& intensity);

/// 4 pi int_0^v int_0^u g(u', v') u' du' dv' by the trapezoid rule on the
/// grid, with the integrand taken as 0 at u' = 0 and g(u, v_0) on [0, v_0].
/// Outputs whose integration domain holds a missing entry are missing.
Surface k_from_g(const Surface& g);

/// Long-format CSV: u,v,value,statistic,correction,intensity_source.
void write_surface_csv(std::ostream& out, const Surface& s, bool header = true);

}  // namespace stpp
