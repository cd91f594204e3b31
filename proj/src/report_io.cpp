#include "stpp/report_io.hpp"

#include <fstream>
#include <stdexcept>

namespace stpp {

namespace {

std::ofstream open(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

void surface_rows(std::ostream& out, const std::string& scenario, const MethodResult& m, const EvalGrid& g,
                  const std::string& name, const Matrix& values) {
  const std::string corr = correction_name(m.correction);
  const std::string stat = statistic_name(m.statistic) + "_" + name;
  for (std::size_t k = 0; k < g.nu(); ++k) {
    for (std::size_t l = 0; l < g.nv(); ++l) {
      out << scenario << ',' << corr << ',' << stat << ',' << format_double(g.u()[k]) << ','
          << format_double(g.v()[l]) << ',' << format_double(values(k, l)) << '\n';
    }
  }
}

}  // namespace

void write_report(const std::filesystem::path& dir, const McReport& r, const KeyValues& config) {
  std::filesystem::create_directories(dir);
  const std::string scenario = family_name(r.config.scenario.family);
  const EvalGrid& g = r.config.grid;

  auto report = open(dir / "report.csv");
  report << "scenario,correction,statistic,u,v,value\n";
  for (const auto& m : r.methods) {
    surface_rows(report, scenario, m, g, "mean", m.mean);
    if (m.errors) {
      surface_rows(report, scenario, m, g, "bias", m.errors->bias);
      surface_rows(report, scenario, m, g, "mse", m.errors->mse);
      surface_rows(report, scenario, m, g, "are", m.errors->are);
    }
    if (m.env) surface_rows(report, scenario, m, g, "envelope", m.env->upper);
    if (m.detection) surface_rows(report, scenario, m, g, "detection", *m.detection);
  }

  auto dev = open(dir / "deviations.csv");
  dev << "scenario,correction,statistic,kind,cohort,replication,seed,value\n";
  auto dev_rows = [&](const MethodResult& m, const char* kind, const char* cohort, const std::vector<double>& v,
                      const std::vector<std::uint64_t>& seeds) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      dev << scenario << ',' << correction_name(m.correction) << ',' << statistic_name(m.statistic) << ',' << kind
          << ',' << cohort << ',' << i << ',' << seeds[i] << ',' << format_double(v[i]) << '\n';
    }
  };
  for (const auto& m : r.methods) {
    dev_rows(m, "D", "test", m.d_truth, r.test_seeds);
    dev_rows(m, "D_tilde", "test", m.d_tilde, r.test_seeds);
    dev_rows(m, "D_tilde", "null", m.null_d_tilde, r.null_seeds);
  }

  auto pow = open(dir / "power.csv");
  pow << "scenario,correction,statistic,power,n_test,n_null\n";
  for (const auto& m : r.methods) {
    if (!m.power) continue;
    pow << scenario << ',' << correction_name(m.correction) << ',' << statistic_name(m.statistic) << ','
        << format_double(*m.power) << ',' << m.d_tilde.size() << ',' << m.null_d_tilde.size() << '\n';
  }

  auto eff = open(dir / "efficiency.csv");
  eff << "scenario,statistic,correction,basis,variance,efficiency\n";
  for (const auto& s : r.summaries) {
    for (const auto& [c, e] : s.efficiency) {
      eff << scenario << ',' << statistic_name(s.statistic) << ',' << correction_name(c) << ','
          << s.efficiency_basis << ',' << format_double(s.variance.at(c)) << ',' << format_double(e) << '\n';
    }
  }

  KeyValues meta = config;
  meta.set("info.format", "stpp-report 1");
  meta.set("info.seed_derivation", "splitmix64 chain of (seed, scenario id, replication)");
  meta.set("info.test_scenario_id", std::to_string(kTestScenario));
  if (r.config.power) meta.set("info.null_scenario_id", std::to_string(kNullScenario));
  meta.set("info.null_process", family_name(r.config.scenario.null_process().family));
  for (const auto& s : r.summaries) {
    meta.set("info.excluded_fraction." + statistic_name(s.statistic), s.excluded_fraction);
  }
  meta.save(dir / "meta.txt");
}

}  // namespace stpp
