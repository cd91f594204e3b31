#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stpp/grid.hpp"
#include "stpp/intensity_est.hpp"
#include "stpp/scenario.hpp"
#include "stpp/secorder.hpp"

namespace stpp {

struct ErrorSurfaces {
  Matrix bias;
  Matrix mse;
  Matrix are;  // missing where the truth is 0
  std::size_t n_replications = 0;
};

/// Per-cell mean error, mean squared error and mean absolute relative error
/// against truth(u, v). A cell is missing when any estimate is missing there.
ErrorSurfaces error_surfaces(std::span<const Surface> estimates, const std::function<double(double, double)>& truth);

/// Cell-wise mean; missing where any input is missing.
Matrix mean_values(std::span<const Surface> surfaces);
/// truth(u, v) on the grid.
Matrix tabulate(const EvalGrid& grid, const std::function<double(double, double)>& f);

/// Cells defined in every surface (true = usable).
std::vector<bool> defined_mask(std::span<const Surface> surfaces);

/// Trapezoid-weighted integral of (a - b)^2 over the grid rectangle. Cells
/// missing in either input, or excluded by mask, drop out with their weight.
/// Throws std::domain_error when fewer than 4 cells remain.
double deviation_d(const Matrix& a, const Matrix& b, const EvalGrid& grid, const std::vector<bool>* mask = nullptr);
double deviation_d(const Surface& estimate, const Surface& reference);

/// D of each surface against the cohort mean.
std::vector<double> deviation_tilde(std::span<const Surface> surfaces, const std::vector<bool>* mask = nullptr);

/// Population variance of each sample, then 100 min V / V. A zero variance
/// scores 100; when every variance is zero all score 100.
double population_variance(std::span<const double> x);

template <class Key>
std::map<Key, double> relative_efficiency(const std::map<Key, std::vector<double>>& samples) {
  std::map<Key, double> var;
  double best = 0.0;
  bool first = true;
  for (const auto& [k, v] : samples) {
    if (v.size() < 2) throw std::invalid_argument("relative efficiency needs at least 2 values per sample");
    var[k] = population_variance(v);
    if (first || var[k] < best) best = var[k];
    first = false;
  }
  std::map<Key, double> out;
  for (const auto& [k, x] : var) out[k] = x == best ? 100.0 : 100.0 * best / x;
  return out;
}

struct Envelope {
  Matrix upper;
  std::size_t n_null = 0;
};

/// Pointwise maximum of the null surfaces; missing where any is missing.
Envelope envelope(std::span<const Surface> null_surfaces);
/// Fraction of test surfaces strictly above the envelope, per cell.
Matrix detection_probability(std::span<const Surface> test_surfaces, const Envelope& env);
/// Fraction of test values strictly above the largest null value.
double power_from_deviation(std::span<const double> test, std::span<const double> null);

struct StudyConfig {
  ProcessSpec scenario;
  STWindow window = STWindow::unit_cube();
  std::vector<EdgeCorrection> corrections = all_corrections();
  std::vector<Statistic> statistics{Statistic::K, Statistic::G};
  IntensityStrategy intensity;
  EvalGrid grid = EvalGrid::default_grid();
  double hs = kDefaultHs;
  double ht = kDefaultHt;
  std::size_t n_sim = 200;
  std::uint64_t seed = 1;
  bool power = true;  // also simulate the null cohort
  unsigned workers = 1;
};

/// Scenario ids fed to derive_seed.
inline constexpr std::uint64_t kTestScenario = 0;
inline constexpr std::uint64_t kNullScenario = 1;

/// Results for one (statistic, correction).
struct MethodResult {
  Statistic statistic = Statistic::K;
  EdgeCorrection correction = EdgeCorrection::None;
  Matrix mean;
  std::optional<ErrorSurfaces> errors;  // only with a closed-form truth
  std::vector<double> d_truth;          // D against the truth
  std::vector<double> d_tilde;          // D against the replication mean
  std::vector<double> null_d_tilde;
  std::optional<Envelope> env;
  std::optional<Matrix> detection;
  std::optional<double> power;
};

struct StatisticSummary {
  Statistic statistic = Statistic::K;
  double excluded_fraction = 0.0;  // cells outside the common defined domain
  std::string efficiency_basis;    // "D" or "D_tilde"
  std::map<EdgeCorrection, double> variance;
  std::map<EdgeCorrection, double> efficiency;
};

struct McReport {
  StudyConfig config;
  std::vector<std::uint64_t> test_seeds;
  std::vector<std::uint64_t> null_seeds;
  std::vector<MethodResult> methods;
  std::vector<StatisticSummary> summaries;

  const MethodResult& method(Statistic s, EdgeCorrection c) const;
  const StatisticSummary& summary(Statistic s) const;
};

/// Thrown by run_study when a replication fails; carries what is needed to
/// replay it.
class ReplicationError : public std::runtime_error {
 public:
  ReplicationError(std::size_t index, std::uint64_t seed, bool null_cohort, const std::string& what);
  std::size_t index() const { return index_; }
  std::uint64_t seed() const { return seed_; }
  bool null_cohort() const { return null_; }

 private:
  std::size_t index_;
  std::uint64_t seed_;
  bool null_;
};

/// The surfaces of one replication, indexed [statistic][correction] in the
/// order of the config lists. `known` is the process's true intensity; it
/// is built from the process when null and only used with Kind::True.
std::vector<std::vector<Surface>> replicate(const StudyConfig& cfg, const ProcessSpec& process, std::uint64_t seed,
                                            const IntensityModel* known = nullptr);

/// Runs all replications on cfg.workers threads and aggregates them in
/// replication order, so the report does not depend on the worker count.
McReport run_study(const StudyConfig& cfg);

}  // namespace stpp
