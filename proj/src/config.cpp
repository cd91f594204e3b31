#include "stpp/config.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "stpp/pattern_io.hpp"

namespace stpp {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    const auto b = cur.find_first_not_of(" \t");
    const auto e = cur.find_last_not_of(" \t");
    out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : ", ") + s;
  return out;
}

double number(const std::string& key, const std::string& v) {
  try {
    return parse_double(v);
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "' must be a number, got '" + v + "'");
  }
}

std::uint64_t unsigned_number(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size()) {
    throw ConfigError("'" + key + "' must be a non-negative integer, got '" + v + "'");
  }
  return x;
}

bool boolean(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("'" + key + "' must be true or false, got '" + v + "'");
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys{
      "scenario", "lambda",   "form",      "beta",     "n",        "sigma",     "alpha",     "nu",
      "mc",       "zeta",     "theta",     "omega",    "window.x0", "window.x1", "window.y0", "window.y1",
      "window.t0", "window.t1", "corrections", "statistics", "intensity", "u_grid", "v_grid", "hs",
      "ht",       "n_sim",    "seed",      "power"};
  return keys;
}

std::vector<double> parse_axis(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 3) {
    const double a = number("grid", parts[0]), b = number("grid", parts[1]), h = number("grid", parts[2]);
    if (!(h > 0.0) || !(b >= a)) throw ConfigError("grid range '" + text + "' needs start <= stop and step > 0");
    return EvalGrid::axis(a, b, h);
  }
  std::vector<double> out;
  for (const auto& s : split(text, ',')) out.push_back(number("grid", s));
  if (!std::is_sorted(out.begin(), out.end()) || std::adjacent_find(out.begin(), out.end()) != out.end()) {
    throw ConfigError("grid values '" + text + "' must be strictly increasing");
  }
  return out;
}

std::string format_axis(const std::vector<double>& values) {
  std::string out;
  for (double x : values) out += (out.empty() ? "" : ",") + format_double(x);
  return out;
}

std::vector<EdgeCorrection> parse_corrections(const std::string& text) {
  if (text == "all") return all_corrections();
  std::vector<EdgeCorrection> out;
  for (const auto& s : split(text, ',')) {
    auto c = parse_correction(s);
    if (!c) throw ConfigError("unknown correction '" + s + "' (valid: " + join(correction_names()) + ", all)");
    if (std::find(out.begin(), out.end(), *c) == out.end()) out.push_back(*c);
  }
  if (out.empty()) throw ConfigError("no correction given");
  return out;
}

std::vector<Statistic> parse_statistics(const std::string& text) {
  std::vector<Statistic> out;
  for (const auto& s : split(text, ',')) {
    auto st = parse_statistic(s);
    if (!st) throw ConfigError("unknown statistic '" + s + "' (valid: k, g)");
    if (std::find(out.begin(), out.end(), *st) == out.end()) out.push_back(*st);
  }
  if (out.empty()) throw ConfigError("no statistic given");
  return out;
}

StudyConfig study_from_kv(const KeyValues& kv) {
  const auto& keys = known_keys();
  for (const auto& [k, v] : kv.entries()) {
    if (k.rfind("info.", 0) == 0) continue;
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw ConfigError("unknown configuration key '" + k + "'");
    }
  }
  StudyConfig c;
  try {
    c.scenario = ProcessSpec::read(kv);
    c.scenario.validate();
    // Keys the family ignores must still be in range when given.
    for (const char* k : {"lambda", "beta", "n", "sigma", "alpha", "nu", "mc", "omega"}) {
      if (auto v = kv.get(k); v && !(number(k, *v) > 0.0)) throw ConfigError(std::string(k) + " must be positive");
    }
    if (auto v = kv.get("zeta"); v && !(number("zeta", *v) > 0.0 && number("zeta", *v) <= 1.0)) {
      throw ConfigError("zeta must lie in (0, 1]");
    }
    c.window = read_window(kv);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (auto v = kv.get("corrections")) c.corrections = parse_corrections(*v);
  if (auto v = kv.get("statistics")) c.statistics = parse_statistics(*v);
  if (auto v = kv.get("intensity")) {
    try {
      c.intensity = IntensityStrategy::parse(*v);
    } catch (const std::exception& e) {
      throw ConfigError(e.what());
    }
  }
  try {
    auto u = kv.get("u_grid") ? parse_axis(*kv.get("u_grid")) : c.grid.u();
    auto v = kv.get("v_grid") ? parse_axis(*kv.get("v_grid")) : c.grid.v();
    c.grid = EvalGrid(std::move(u), std::move(v));
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  if (auto v = kv.get("hs")) c.hs = number("hs", *v);
  if (auto v = kv.get("ht")) c.ht = number("ht", *v);
  if (!(c.hs > 0.0) || !(c.ht > 0.0)) throw ConfigError("hs and ht must be positive");
  if (auto v = kv.get("n_sim")) c.n_sim = unsigned_number("n_sim", *v);
  if (c.n_sim < 1) throw ConfigError("n_sim must be at least 1");
  if (auto v = kv.get("seed")) c.seed = unsigned_number("seed", *v);
  if (auto v = kv.get("power")) c.power = boolean("power", *v);
  return c;
}

KeyValues study_to_kv(const StudyConfig& c) {
  KeyValues kv;
  c.scenario.write(kv);
  write_window(kv, c.window);
  std::vector<std::string> corr, stat;
  for (auto x : c.corrections) corr.push_back(correction_name(x));
  for (auto x : c.statistics) stat.push_back(statistic_name(x));
  std::string cs, ss;
  for (const auto& s : corr) cs += (cs.empty() ? "" : ",") + s;
  for (const auto& s : stat) ss += (ss.empty() ? "" : ",") + s;
  kv.set("corrections", cs);
  kv.set("statistics", ss);
  kv.set("intensity", c.intensity.tag());
  kv.set("u_grid", format_axis(c.grid.u()));
  kv.set("v_grid", format_axis(c.grid.v()));
  kv.set("hs", c.hs);
  kv.set("ht", c.ht);
  kv.set("n_sim", std::to_string(c.n_sim));
  kv.set("seed", std::to_string(c.seed));
  kv.set("power", c.power ? "true" : "false");
  return kv;
}

}  // namespace stpp
