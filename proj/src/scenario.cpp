#include "stpp/scenario.hpp"

#include <array>
#include <stdexcept>
#include <utility>

namespace stpp {

namespace {

constexpr std::array<std::pair<Family, const char*>, 6> kFamilies{{
    {Family::Hpp, "hpp"},
    {Family::Ipp, "ipp"},
    {Family::Pcp1, "pcp1"},
    {Family::Pcp2, "pcp2"},
    {Family::Pcp3, "pcp3"},
    {Family::Pcp3Null, "pcp3_null"},
}};

bool is_cluster(Family f) { return f == Family::Pcp1 || f == Family::Pcp2 || f == Family::Pcp3; }

IntensityModel analytic(FirstOrderForm form, double beta, double n) {
  return form == FirstOrderForm::Lambda1 ? IntensityModel::exp_form(beta, n)
                                         : IntensityModel::cos_form(beta, n);
}

void positive(double x, const char* name) {
  if (!(x > 0.0)) throw std::invalid_argument(std::string(name) + " must be positive");
}

}  // namespace

std::string family_name(Family f) {
  for (const auto& [k, name] : kFamilies) {
    if (k == f) return name;
  }
  return "?";
}

std::optional<Family> parse_family(const std::string& s) {
  for (const auto& [k, name] : kFamilies) {
    if (s == name) return k;
  }
  return std::nullopt;
}

std::vector<std::string> family_names() {
  std::vector<std::string> out;
  for (const auto& [k, name] : kFamilies) out.emplace_back(name);
  return out;
}

std::string form_name(FirstOrderForm f) { return f == FirstOrderForm::Lambda1 ? "lambda1" : "lambda2"; }

std::optional<FirstOrderForm> parse_form(const std::string& s) {
  if (s == "lambda1") return FirstOrderForm::Lambda1;
  if (s == "lambda2") return FirstOrderForm::Lambda2;
  return std::nullopt;
}

void ProcessSpec::validate() const {
  switch (family) {
    case Family::Hpp: positive(lambda, "lambda"); break;
    case Family::Ipp:
      positive(beta, "beta");
      positive(n, "n");
      break;
    case Family::Pcp2:
      if (!(zeta > 0.0 && zeta <= 1.0)) throw std::invalid_argument("zeta must lie in (0, 1]");
      positive(omega, "omega");
      [[fallthrough]];
    case Family::Pcp1:
    case Family::Pcp3:
    case Family::Pcp3Null:
      positive(sigma, "sigma");
      positive(alpha, "alpha");
      positive(nu, "nu");
      positive(mc, "mc");
      if (family == Family::Pcp3 || family == Family::Pcp3Null) positive(beta, "beta");
      break;
  }
}

ClusterSpec ProcessSpec::cluster(const STWindow& /*w*/) const {
  if (!is_cluster(family)) throw std::invalid_argument(family_name(family) + " is not a cluster process");
  ClusterSpec c;
  c.sigma = sigma;
  c.alpha = alpha;
  c.mc = mc;
  c.parent_intensity = family == Family::Pcp3 ? analytic(form, beta, nu) : IntensityModel::constant(nu);
  if (family == Family::Pcp2) c.anisotropy = Anisotropy{zeta, theta, omega};
  return c;
}

IntensityModel ProcessSpec::intensity(const STWindow& w) const {
  switch (family) {
    case Family::Hpp: return IntensityModel::constant(lambda);
    case Family::Ipp: return analytic(form, beta, n);
    case Family::Pcp1:
    case Family::Pcp2: return IntensityModel::constant(nu * mc);
    case Family::Pcp3:
    case Family::Pcp3Null: {
      OffspringIntensity o;
      o.parent = form == FirstOrderForm::Lambda1 ? OffspringIntensity::Parent::Exp
                                                 : OffspringIntensity::Parent::Cos;
      o.beta = beta;
      o.nu = nu;
      o.mc = mc;
      o.sigma = sigma;
      o.alpha = alpha;
      o.window = w;
      return IntensityModel::offspring(o);
    }
  }
  throw std::logic_error("unhandled family");
}

PointPattern ProcessSpec::simulate(const STWindow& w, std::uint64_t seed) const {
  validate();
  switch (family) {
    case Family::Hpp: return simulate_hpp(lambda, w, seed);
    case Family::Ipp:
    case Family::Pcp3Null: return simulate_ipp(intensity(w), w, seed);
    case Family::Pcp1:
    case Family::Pcp2:
    case Family::Pcp3: return simulate_pcp(cluster(w), w, seed);
  }
  throw std::logic_error("unhandled family");
}

ProcessSpec ProcessSpec::null_process() const {
  ProcessSpec out = *this;
  switch (family) {
    case Family::Hpp:
    case Family::Ipp:
    case Family::Pcp3Null: break;
    case Family::Pcp1:
    case Family::Pcp2:
      out.family = Family::Hpp;
      out.lambda = nu * mc;
      break;
    case Family::Pcp3: out.family = Family::Pcp3Null; break;
  }
  return out;
}

std::optional<Truth> ProcessSpec::truth() const {
  switch (family) {
    case Family::Hpp:
    case Family::Ipp:
    case Family::Pcp3Null:
      return Truth{[](double u, double v) { return poisson_k(u, v); }, [](double, double) { return 1.0; }};
    case Family::Pcp2:
      if (zeta != 1.0) return std::nullopt;
      [[fallthrough]];
    case Family::Pcp1: {
      const double s = family == Family::Pcp2 ? sigma * omega : sigma;
      const Pcp1Params p{s, alpha, nu};
      return Truth{[p](double u, double v) { return pcp1_theoretical_k(u, v, p); },
                   [p](double u, double v) { return pcp1_theoretical_g(u, v, p); }};
    }
    case Family::Pcp3: return std::nullopt;
  }
  return std::nullopt;
}

void ProcessSpec::write(KeyValues& kv, const std::string& prefix) const {
  auto put = [&](const char* key, double value) { kv.set(prefix + key, value); };
  kv.set(prefix + "scenario", family_name(family));
  switch (family) {
    case Family::Hpp: put("lambda", lambda); break;
    case Family::Ipp:
      kv.set(prefix + "form", form_name(form));
      put("beta", beta);
      put("n", n);
      break;
    case Family::Pcp3:
    case Family::Pcp3Null:
      kv.set(prefix + "form", form_name(form));
      put("beta", beta);
      [[fallthrough]];
    case Family::Pcp1:
    case Family::Pcp2:
      put("sigma", sigma);
      put("alpha", alpha);
      put("nu", nu);
      put("mc", mc);
      if (family == Family::Pcp2) {
        put("zeta", zeta);
        put("theta", theta);
        put("omega", omega);
      }
      break;
  }
}

ProcessSpec ProcessSpec::read(const KeyValues& kv, const std::string& prefix) {
  ProcessSpec s;
  if (auto v = kv.get(prefix + "scenario")) {
    auto f = parse_family(*v);
    if (!f) throw std::invalid_argument("unknown scenario '" + *v + "'");
    s.family = *f;
  }
  if (auto v = kv.get(prefix + "form")) {
    auto f = parse_form(*v);
    if (!f) throw std::invalid_argument("unknown intensity form '" + *v + "' (valid: lambda1, lambda2)");
    s.form = *f;
  }
  auto num = [&](const char* key, double& target) {
    if (auto v = kv.get(prefix + key)) target = parse_double(*v);
  };
  num("lambda", s.lambda);
  num("beta", s.beta);
  num("n", s.n);
  num("sigma", s.sigma);
  num("alpha", s.alpha);
  num("nu", s.nu);
  num("mc", s.mc);
  num("zeta", s.zeta);
  num("theta", s.theta);
  num("omega", s.omega);
  s.validate();
  return s;
}

}  // namespace stpp
