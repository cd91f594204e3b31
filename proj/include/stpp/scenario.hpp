#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stpp/geometry.hpp"
#include "stpp/intensity_model.hpp"
#include "stpp/kvfile.hpp"
#include "stpp/procgen.hpp"

namespace stpp {

/// Process families. Pcp3Null is the Poisson process sharing the first-order
/// intensity of the matching PCP3; it serves as the null in power studies.
enum class Family { Hpp, Ipp, Pcp1, Pcp2, Pcp3, Pcp3Null };

/// Analytic first-order forms used by IPP and as PCP3 parent intensity.
enum class FirstOrderForm { Lambda1, Lambda2 };

std::string family_name(Family f);
std::optional<Family> parse_family(const std::string& s);
std::vector<std::string> family_names();

std::string form_name(FirstOrderForm f);
std::optional<FirstOrderForm> parse_form(const std::string& s);

/// Oracle second-order functions of a process.
struct Truth {
  std::function<double(double, double)> k;
  std::function<double(double, double)> g;
};

/// A simulation scenario. Fields irrelevant to the family are ignored.
struct ProcessSpec {
  Family family = Family::Hpp;
  double lambda = 375.0;  // hpp
  FirstOrderForm form = FirstOrderForm::Lambda1;  // ipp, pcp3
  double beta = 1.0;
  double n = 375.0;  // ipp expected count
  double sigma = 0.1;
  double alpha = 0.2;
  double nu = 25.0;
  double mc = 15.0;
  double zeta = 1.0;  // pcp2
  double theta = 0.7853981633974483;
  double omega = 1.0;

  void validate() const;
  ClusterSpec cluster(const STWindow& w) const;
  /// First-order intensity of the simulated events.
  IntensityModel intensity(const STWindow& w) const;
  PointPattern simulate(const STWindow& w, std::uint64_t seed) const;
  /// Poisson process with the same first-order intensity.
  ProcessSpec null_process() const;
  /// Closed-form K and g where they exist (Poisson families, isotropic
  /// stationary clusters).
  std::optional<Truth> truth() const;

  /// Parameters relevant to the family, keys prefixed with `prefix`.
  void write(KeyValues& kv, const std::string& prefix = "") const;
  /// Reads keys written by write(); absent keys keep their defaults.
  static ProcessSpec read(const KeyValues& kv, const std::string& prefix = "");
};

}  // namespace stpp
