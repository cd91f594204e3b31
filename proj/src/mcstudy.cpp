#include "stpp/mcstudy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numeric>
#include <thread>

#include "stpp/rng.hpp"

namespace stpp {

namespace {

void check_cohort(std::span<const Surface> s) {
  if (s.empty()) throw std::invalid_argument("empty surface cohort");
  for (const auto& x : s) {
    if (!(x.grid == s[0].grid)) throw std::invalid_argument("surfaces do not share a grid");
  }
}

}  // namespace

ErrorSurfaces error_surfaces(std::span<const Surface> estimates, const std::function<double(double, double)>& truth) {
  check_cohort(estimates);
  const EvalGrid& g = estimates[0].grid;
  const double m = static_cast<double>(estimates.size());
  ErrorSurfaces out{Matrix(g.nu(), g.nv()), Matrix(g.nu(), g.nv()), Matrix(g.nu(), g.nv()), estimates.size()};
  for (std::size_t k = 0; k < g.nu(); ++k) {
    for (std::size_t l = 0; l < g.nv(); ++l) {
      const double t = truth(g.u()[k], g.v()[l]);
      double sb = 0.0, ss = 0.0, sa = 0.0;
      for (const auto& e : estimates) {
        const double d = e.values(k, l) - t;
        sb += d;
        ss += d * d;
        sa += std::abs(d);
      }
      out.bias(k, l) = sb / m;
      out.mse(k, l) = ss / m;
      out.are(k, l) = t != 0.0 ? sa / m / std::abs(t) : kMissing;
    }
  }
  return out;
}

Matrix mean_values(std::span<const Surface> surfaces) {
  check_cohort(surfaces);
  Matrix out(surfaces[0].values.rows(), surfaces[0].values.cols(), 0.0);
  for (const auto& s : surfaces) {
    for (std::size_t c = 0; c < out.data().size(); ++c) out.data()[c] += s.values.data()[c];
  }
  for (double& x : out.data()) x /= static_cast<double>(surfaces.size());
  return out;
}

Matrix tabulate(const EvalGrid& grid, const std::function<double(double, double)>& f) {
  Matrix out(grid.nu(), grid.nv());
  for (std::size_t k = 0; k < grid.nu(); ++k) {
    for (std::size_t l = 0; l < grid.nv(); ++l) out(k, l) = f(grid.u()[k], grid.v()[l]);
  }
  return out;
}

std::vector<bool> defined_mask(std::span<const Surface> surfaces) {
  check_cohort(surfaces);
  std::vector<bool> mask(surfaces[0].values.data().size(), true);
  for (const auto& s : surfaces) {
    for (std::size_t c = 0; c < mask.size(); ++c) {
      if (is_missing(s.values.data()[c])) mask[c] = false;
    }
  }
  return mask;
}

double deviation_d(const Matrix& a, const Matrix& b, const EvalGrid& grid, const std::vector<bool>* mask) {
  const auto wu = trapezoid_weights(grid.u());
  const auto wv = trapezoid_weights(grid.v());
  double sum = 0.0;
  std::size_t used = 0;
  for (std::size_t k = 0; k < grid.nu(); ++k) {
    for (std::size_t l = 0; l < grid.nv(); ++l) {
      if (mask && !(*mask)[k * grid.nv() + l]) continue;
      const double d = a(k, l) - b(k, l);
      if (is_missing(d)) continue;
      sum += wu[k] * wv[l] * d * d;
      ++used;
    }
  }
  if (used < 4) throw std::domain_error("deviation needs at least 4 defined grid cells");
  return sum;
}

double deviation_d(const Surface& estimate, const Surface& reference) {
  if (!(estimate.grid == reference.grid)) throw std::invalid_argument("surfaces do not share a grid");
  return deviation_d(estimate.values, reference.values, estimate.grid);
}

std::vector<double> deviation_tilde(std::span<const Surface> surfaces, const std::vector<bool>* mask) {
  const Matrix mean = mean_values(surfaces);
  std::vector<double> out;
  out.reserve(surfaces.size());
  for (const auto& s : surfaces) out.push_back(deviation_d(s.values, mean, s.grid, mask));
  return out;
}

double population_variance(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("variance of an empty sample");
  const double m = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size());
}

Envelope envelope(std::span<const Surface> null_surfaces) {
  check_cohort(null_surfaces);
  Envelope env{null_surfaces[0].values, null_surfaces.size()};
  for (const auto& s : null_surfaces.subspan(1)) {
    for (std::size_t c = 0; c < env.upper.data().size(); ++c) {
      double& u = env.upper.data()[c];
      const double x = s.values.data()[c];
      u = is_missing(x) || is_missing(u) ? kMissing : std::max(u, x);
    }
  }
  return env;
}

Matrix detection_probability(std::span<const Surface> test_surfaces, const Envelope& env) {
  check_cohort(test_surfaces);
  Matrix p(env.upper.rows(), env.upper.cols(), 0.0);
  std::vector<bool> missing(p.data().size(), false);
  for (const auto& s : test_surfaces) {
    for (std::size_t c = 0; c < p.data().size(); ++c) {
      const double x = s.values.data()[c], up = env.upper.data()[c];
      if (is_missing(x) || is_missing(up)) {
        missing[c] = true;
      } else if (x > up) {
        p.data()[c] += 1.0;
      }
    }
  }
  for (std::size_t c = 0; c < p.data().size(); ++c) {
    p.data()[c] = missing[c] ? kMissing : p.data()[c] / static_cast<double>(test_surfaces.size());
  }
  return p;
}

double power_from_deviation(std::span<const double> test, std::span<const double> null) {
  if (test.empty() || null.empty()) throw std::invalid_argument("power needs non-empty samples");
  const double top = *std::max_element(null.begin(), null.end());
  const auto hits = std::count_if(test.begin(), test.end(), [&](double x) { return x > top; });
  return static_cast<double>(hits) / static_cast<double>(test.size());
}

const MethodResult& McReport::method(Statistic s, EdgeCorrection c) const {
  for (const auto& m : methods) {
    if (m.statistic == s && m.correction == c) return m;
  }
  throw std::out_of_range("no result for " + statistic_name(s) + "/" + correction_name(c));
}

const StatisticSummary& McReport::summary(Statistic s) const {
  for (const auto& m : summaries) {
    if (m.statistic == s) return m;
  }
  throw std::out_of_range("no summary for " + statistic_name(s));
}

ReplicationError::ReplicationError(std::size_t index, std::uint64_t seed, bool null_cohort, const std::string& what)
    : std::runtime_error(std::string(null_cohort ? "null" : "test") + " replication " + std::to_string(index) +
                         " (seed " + std::to_string(seed) + ") failed: " + what),
      index_(index),
      seed_(seed),
      null_(null_cohort) {}

std::vector<std::vector<Surface>> replicate(const StudyConfig& cfg, const ProcessSpec& process, std::uint64_t seed,
                                            const IntensityModel* known) {
  const PointPattern p = process.simulate(cfg.window, seed);
  std::vector<double> lam;
  if (cfg.intensity.kind == IntensityStrategy::Kind::True) {
    lam = known ? intensity_at_events(p, *known) : intensity_at_events(p, process.intensity(cfg.window));
  } else {
    lam = intensity_at_events(p, estimate_intensity(p, cfg.intensity));
  }
  const std::string src = cfg.intensity.tag();
  std::vector<std::vector<Surface>> out;
  for (Statistic st : cfg.statistics) {
    auto& row = out.emplace_back();
    for (EdgeCorrection c : cfg.corrections) {
      row.push_back(st == Statistic::K ? k_hat(p, lam, c, cfg.grid, src)
                                       : g_hat(p, lam, c, cfg.grid, cfg.hs, cfg.ht, src));
    }
  }
  return out;
}

McReport run_study(const StudyConfig& cfg) {
  if (cfg.n_sim < 1) throw std::invalid_argument("n_sim must be at least 1");
  if (cfg.corrections.empty() || cfg.statistics.empty()) {
    throw std::invalid_argument("study needs at least one correction and one statistic");
  }
  const ProcessSpec test = cfg.scenario;
  const ProcessSpec null = test.null_process();
  const std::size_t n = cfg.n_sim;
  const std::size_t jobs = cfg.power ? 2 * n : n;

  McReport rep;
  rep.config = cfg;
  for (std::size_t r = 0; r < n; ++r) {
    rep.test_seeds.push_back(derive_seed(cfg.seed, kTestScenario, r));
    if (cfg.power) rep.null_seeds.push_back(derive_seed(cfg.seed, kNullScenario, r));
  }

  std::optional<IntensityModel> test_lambda, null_lambda;
  if (cfg.intensity.kind == IntensityStrategy::Kind::True) {
    test_lambda = test.intensity(cfg.window);
    if (cfg.power) null_lambda = null.intensity(cfg.window);
  }

  using Rep = std::vector<std::vector<Surface>>;
  std::vector<std::optional<Rep>> results(jobs);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex err_mu;
  std::optional<ReplicationError> first_error;

  auto work = [&] {
    for (;;) {
      if (failed.load()) return;
      const std::size_t j = next.fetch_add(1);
      if (j >= jobs) return;
      const bool is_null = j >= n;
      const std::size_t r = is_null ? j - n : j;
      const std::uint64_t seed = is_null ? rep.null_seeds[r] : rep.test_seeds[r];
      try {
        const IntensityModel* known = is_null ? (null_lambda ? &*null_lambda : nullptr)
                                              : (test_lambda ? &*test_lambda : nullptr);
        results[j] = replicate(cfg, is_null ? null : test, seed, known);
      } catch (const std::exception& e) {
        std::lock_guard lock(err_mu);
        // Keep the earliest job so the reported failure is reproducible.
        if (!first_error || j < (first_error->null_cohort() ? n + first_error->index() : first_error->index())) {
          first_error.emplace(r, seed, is_null, e.what());
        }
        failed.store(true);
      }
    }
  };

  const unsigned workers = std::max(1u, cfg.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (first_error) throw *first_error;

  const auto truth = test.truth();
  const std::size_t nc = cfg.corrections.size();
  for (std::size_t si = 0; si < cfg.statistics.size(); ++si) {
    const Statistic st = cfg.statistics[si];
    // Cohorts per correction, in replication order.
    std::vector<std::vector<Surface>> tests(nc), nulls(nc);
    std::vector<Surface> everything;
    for (std::size_t j = 0; j < jobs; ++j) {
      for (std::size_t c = 0; c < nc; ++c) {
        (j < n ? tests : nulls)[c].push_back((*results[j])[si][c]);
        everything.push_back((*results[j])[si][c]);
      }
    }
    const std::vector<bool> mask = defined_mask(everything);
    everything.clear();

    StatisticSummary sum;
    sum.statistic = st;
    sum.excluded_fraction =
        1.0 - static_cast<double>(std::count(mask.begin(), mask.end(), true)) / static_cast<double>(mask.size());
    sum.efficiency_basis = truth ? "D" : "D_tilde";

    std::optional<Matrix> truth_values;
    if (truth) truth_values = tabulate(cfg.grid, st == Statistic::K ? truth->k : truth->g);

    std::map<EdgeCorrection, std::vector<double>> basis;
    for (std::size_t c = 0; c < nc; ++c) {
      MethodResult m;
      m.statistic = st;
      m.correction = cfg.corrections[c];
      m.mean = mean_values(tests[c]);
      if (truth) {
        m.errors = error_surfaces(tests[c], st == Statistic::K ? truth->k : truth->g);
        for (const auto& s : tests[c]) m.d_truth.push_back(deviation_d(s.values, *truth_values, cfg.grid, &mask));
      }
      m.d_tilde = deviation_tilde(tests[c], &mask);
      if (cfg.power) {
        m.null_d_tilde = deviation_tilde(nulls[c], &mask);
        m.env = envelope(nulls[c]);
        m.detection = detection_probability(tests[c], *m.env);
        m.power = power_from_deviation(m.d_tilde, m.null_d_tilde);
      }
      basis[m.correction] = truth ? m.d_truth : m.d_tilde;
      rep.methods.push_back(std::move(m));
    }
    if (n >= 2) {
      for (const auto& [c, v] : basis) sum.variance[c] = population_variance(v);
      sum.efficiency = relative_efficiency(basis);
    }
    rep.summaries.push_back(std::move(sum));
  }
  return rep;
}

}  // namespace stpp
