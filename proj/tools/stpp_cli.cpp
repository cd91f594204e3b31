// Command-line front end: simulate | estimate | intensity | mc.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "stpp/commands.hpp"
#include "stpp/config.hpp"
#include "stpp/scenario.hpp"
#include "stpp/secorder.hpp"

namespace {

using stpp::KeyValues;

struct Flags {
  std::string config;
  std::vector<std::string> sets;
  KeyValues overrides;
};

void key_option(CLI::App* app, Flags& f, const std::string& flag, const std::string& key, const std::string& help) {
  app->add_option_function<std::string>(
      flag, [&f, key](const std::string& v) { f.overrides.set(key, v); }, help);
}

void common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "Flat `key = value` config file");
  app->add_option("--set", f.sets, "Override any config key (key=value), repeatable");
}

void scenario_options(CLI::App* app, Flags& f) {
  std::string names;
  for (const auto& n : stpp::family_names()) names += (names.empty() ? "" : ", ") + n;
  key_option(app, f, "--scenario", "scenario", "Process family: " + names);
  key_option(app, f, "--lambda", "lambda", "HPP intensity");
  key_option(app, f, "--form", "form", "First-order form for ipp/pcp3: lambda1, lambda2");
  key_option(app, f, "--beta", "beta", "Inhomogeneity parameter of the form");
  key_option(app, f, "--n", "n", "Expected count of an IPP");
  key_option(app, f, "--sigma", "sigma", "Offspring spatial standard deviation");
  key_option(app, f, "--alpha", "alpha", "Offspring temporal rate");
  key_option(app, f, "--nu", "nu", "Parent intensity (expected parents in the window)");
  key_option(app, f, "--mc", "mc", "Expected offspring per parent");
  key_option(app, f, "--zeta", "zeta", "Anisotropy ratio in (0, 1]");
  key_option(app, f, "--theta", "theta", "Anisotropy angle (radians)");
  key_option(app, f, "--omega", "omega", "Anisotropy scale on sigma");
  key_option(app, f, "--seed", "seed", "Master seed (random and recorded when absent)");
}

void estimator_options(CLI::App* app, Flags& f) {
  key_option(app, f, "--correction,--corrections", "corrections",
             "Edge corrections, comma separated or 'all': none, isotropic, border, modified_border, translation");
  key_option(app, f, "--statistic,--statistics", "statistics", "Statistics, comma separated: k, g");
  key_option(app, f, "--intensity", "intensity", "true | kernel(auto) | kernel(<h>) | parametric(1|2)");
  key_option(app, f, "--u-grid", "u_grid", "Spatial lags: start:stop:step or a list");
  key_option(app, f, "--v-grid", "v_grid", "Temporal lags: start:stop:step or a list");
  key_option(app, f, "--hs", "hs", "Spatial box-kernel half-width of g");
  key_option(app, f, "--ht", "ht", "Temporal box-kernel half-width of g");
}

KeyValues settle(const Flags& f) {
  KeyValues o = f.overrides;
  for (const auto& s : f.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw stpp::ConfigError("--set expects key=value, got '" + s + "'");
    o.set(s.substr(0, eq), s.substr(eq + 1));
  }
  return stpp::merge_config(f.config, o);
}

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spatio-temporal point process simulation and second-order estimation"};
  app.require_subcommand(1);

  Flags sim_f, est_f, int_f, mc_f;
  std::string sim_out = "pattern.csv", est_out = "-", int_out = "intensity.txt", mc_out = "report";
  std::string est_in, int_in;
  unsigned workers = 1;

  auto* sim = app.add_subcommand("simulate", "Simulate one pattern to CSV plus a .meta sidecar");
  common(sim, sim_f);
  scenario_options(sim, sim_f);
  sim->add_option("-o,--output", sim_out, "Pattern CSV path");

  auto* est = app.add_subcommand("estimate", "Estimate K and/or g surfaces of a pattern");
  common(est, est_f);
  est->add_option("pattern", est_in, "Pattern CSV")->required();
  scenario_options(est, est_f);
  estimator_options(est, est_f);
  est->add_option("-o,--output", est_out, "Surface CSV path, '-' for stdout");

  auto* inten = app.add_subcommand("intensity", "Estimate the first-order intensity of a pattern");
  common(inten, int_f);
  inten->add_option("pattern", int_in, "Pattern CSV")->required();
  key_option(inten, int_f, "--intensity", "intensity", "kernel(auto) | kernel(<h>) | parametric(1|2) | true");
  inten->add_option("-o,--output", int_out, "Model description (key = value)");

  auto* mc = app.add_subcommand("mc", "Run a Monte Carlo study into a report directory");
  common(mc, mc_f);
  scenario_options(mc, mc_f);
  estimator_options(mc, mc_f);
  key_option(mc, mc_f, "--n-sim", "n_sim", "Replications per cohort");
  key_option(mc, mc_f, "--power", "power", "Also simulate the null cohort (true/false)");
  mc->add_option("-o,--output", mc_out, "Report directory");
  mc->add_option("--workers", workers, "Worker threads; results do not depend on it")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: usage: " << one_line(e.what()) << '\n';
    return 2;
  }

  try {
    if (*sim) {
      stpp::cmd_simulate(settle(sim_f), sim_out);
    } else if (*est) {
      const KeyValues cfg = settle(est_f);
      if (est_out == "-") {
        stpp::cmd_estimate(est_in, cfg, std::cout);
      } else {
        std::ofstream out(est_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + est_out);
        stpp::cmd_estimate(est_in, cfg, out);
      }
    } else if (*inten) {
      stpp::cmd_intensity(int_in, settle(int_f), int_out);
    } else if (*mc) {
      stpp::cmd_mc(settle(mc_f), mc_out, workers);
    }
  } catch (const std::exception& e) {
    const std::string code = stpp::error_code(e);
    std::cerr << "error: " << code << ": " << one_line(e.what()) << '\n';
    return code == "usage" ? 2 : 1;
  }
  return 0;
}
