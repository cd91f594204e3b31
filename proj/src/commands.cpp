#include "stpp/commands.hpp"

#include <fstream>
#include <ostream>
#include <random>

#include "stpp/config.hpp"
#include "stpp/intensity_est.hpp"
#include "stpp/mcstudy.hpp"
#include "stpp/pattern_io.hpp"
#include "stpp/report_io.hpp"

namespace stpp {

namespace {

// Keys of a pattern sidecar that are not study settings.
KeyValues study_keys(const KeyValues& kv) {
  KeyValues out;
  for (const auto& [k, v] : kv.entries()) {
    if (k.rfind("info.", 0) != 0) out.set(k, v);
  }
  return out;
}

KeyValues overlay(KeyValues base, const KeyValues& top) {
  for (const auto& [k, v] : top.entries()) base.set(k, v);
  return base;
}

KeyValues pattern_settings(const std::filesystem::path& pattern, const KeyValues& cfg) {
  const auto side = sidecar_path(pattern);
  KeyValues base = std::filesystem::exists(side) ? study_keys(KeyValues::load(side)) : KeyValues{};
  return overlay(base, cfg);
}

}  // namespace

KeyValues merge_config(const std::string& config_path, const KeyValues& overrides) {
  KeyValues kv;
  if (!config_path.empty()) {
    try {
      kv = KeyValues::load(config_path);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(config_path + ": " + e.what());
    }
  }
  return overlay(kv, overrides);
}

std::uint64_t ensure_seed(KeyValues& cfg) {
  if (!cfg.get("seed")) {
    std::random_device rd;
    const std::uint64_t s = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    cfg.set("seed", std::to_string(s));
  }
  return study_from_kv(cfg).seed;
}

void cmd_simulate(KeyValues cfg, const std::filesystem::path& out_csv) {
  ensure_seed(cfg);
  const StudyConfig c = study_from_kv(cfg);
  const PointPattern p = c.scenario.simulate(c.window, c.seed);
  KeyValues meta;
  c.scenario.write(meta);
  meta.set("seed", std::to_string(c.seed));
  meta.set("info.events", std::to_string(p.size()));
  write_pattern(out_csv, p, meta);
}

void cmd_estimate(const std::filesystem::path& pattern, const KeyValues& cfg, std::ostream& out) {
  const KeyValues settings = pattern_settings(pattern, cfg);
  const StudyConfig c = study_from_kv(settings);
  const PointPattern p = read_pattern(pattern, c.window);
  if (c.intensity.kind == IntensityStrategy::Kind::True && !settings.get("scenario")) {
    throw ConfigError("intensity = true needs the scenario of the pattern (sidecar or --scenario)");
  }
  const IntensityModel model = c.intensity.kind == IntensityStrategy::Kind::True
                                   ? c.scenario.intensity(c.window)
                                   : estimate_intensity(p, c.intensity);
  const auto lam = intensity_at_events(p, model);
  const std::string src = c.intensity.tag();
  bool header = true;
  for (Statistic st : c.statistics) {
    for (EdgeCorrection corr : c.corrections) {
      const Surface s = st == Statistic::K ? k_hat(p, lam, corr, c.grid, src)
                                           : g_hat(p, lam, corr, c.grid, c.hs, c.ht, src);
      write_surface_csv(out, s, header);
      header = false;
    }
  }
}

void cmd_intensity(const std::filesystem::path& pattern, const KeyValues& cfg, const std::filesystem::path& out) {
  KeyValues settings = pattern_settings(pattern, cfg);
  if (!cfg.get("intensity")) settings.set("intensity", "kernel(auto)");
  const StudyConfig c = study_from_kv(settings);
  const PointPattern p = read_pattern(pattern, c.window);
  KeyValues res;
  res.set("strategy", c.intensity.tag());
  res.set("events", std::to_string(p.size()));
  switch (c.intensity.kind) {
    case IntensityStrategy::Kind::True: {
      if (!settings.get("scenario")) throw ConfigError("intensity = true needs the scenario of the pattern");
      const KeyValues d = c.scenario.intensity(c.window).describe();
      for (const auto& [k, v] : d.entries()) res.set("model." + k, v);
      break;
    }
    case IntensityStrategy::Kind::Kernel: {
      const KeyValues d = estimate_intensity(p, c.intensity).describe();
      for (const auto& [k, v] : d.entries()) res.set("model." + k, v);
      break;
    }
    case IntensityStrategy::Kind::Parametric: {
      const auto xy = spatial_coords(p);
      const auto fit = fit_loglinear(xy, p.window(), c.intensity.order);
      const auto t = event_times(p);
      const IntensityModel m = ParametricIntensity{fit.field, fit_exponential_temporal(t, p.window().t()),
                                                   static_cast<double>(p.size())};
      const KeyValues d = m.describe();
      for (const auto& [k, v] : d.entries()) res.set("model." + k, v);
      res.set("fit.iterations", std::to_string(fit.convergence.iterations));
      res.set("fit.gradient_norm", fit.convergence.gradient_norm);
      res.set("fit.loglik", fit.loglik);
      break;
    }
  }
  res.save(out);
}

void cmd_mc(KeyValues cfg, const std::filesystem::path& out_dir, unsigned workers) {
  ensure_seed(cfg);
  StudyConfig c = study_from_kv(cfg);
  c.workers = workers;
  const McReport r = run_study(c);
  write_report(out_dir, r, study_to_kv(c));
}

std::string error_code(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return "usage";
  if (dynamic_cast<const ReplicationError*>(&e)) return "replication";
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return "io";
  if (dynamic_cast<const std::invalid_argument*>(&e)) return "invalid";
  if (dynamic_cast<const std::runtime_error*>(&e)) return "runtime";
  return "internal";
}

}  // namespace stpp
