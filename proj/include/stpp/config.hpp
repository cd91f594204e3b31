#pragma once

#include <string>
#include <vector>

#include "stpp/kvfile.hpp"
#include "stpp/mcstudy.hpp"

namespace stpp {

/// Thrown for malformed or out-of-range configuration values. The CLI turns
/// it into a usage error.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// "start:stop:step" or a comma-separated list of values.
std::vector<double> parse_axis(const std::string& text);
/// Comma-separated list in shortest round-trip form.
std::string format_axis(const std::vector<double>& values);

std::vector<EdgeCorrection> parse_corrections(const std::string& text);
std::vector<Statistic> parse_statistics(const std::string& text);

/// Builds a study from flat keys. Unknown keys are rejected except those
/// prefixed `info.`, which reports use for provenance.
StudyConfig study_from_kv(const KeyValues& kv);
/// Every setting that affects results; study_from_kv(study_to_kv(c))
/// reproduces c apart from the worker count.
KeyValues study_to_kv(const StudyConfig& c);

/// Keys accepted by study_from_kv.
const std::vector<std::string>& known_keys();

}  // namespace stpp
