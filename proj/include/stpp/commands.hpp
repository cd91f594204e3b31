#pragma once

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "stpp/kvfile.hpp"

namespace stpp {

/// Error reported on one line as `error: <code>: <message>`.
class CliError : public std::runtime_error {
 public:
  CliError(std::string code, const std::string& message) : std::runtime_error(message), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

/// Loads the config file (if any) and applies overrides on top.
KeyValues merge_config(const std::string& config_path, const KeyValues& overrides);

/// Seed from the config, or a fresh random one recorded into cfg.
std::uint64_t ensure_seed(KeyValues& cfg);

/// Simulates the configured scenario into a pattern CSV plus sidecar.
void cmd_simulate(KeyValues cfg, const std::filesystem::path& out_csv);

/// Writes K-hat / g-hat surfaces for the pattern as long CSV. The pattern's
/// sidecar supplies scenario keys for intensity = true; cfg overrides them.
void cmd_estimate(const std::filesystem::path& pattern, const KeyValues& cfg, std::ostream& out);

/// Estimates the first-order intensity and writes its description.
void cmd_intensity(const std::filesystem::path& pattern, const KeyValues& cfg, const std::filesystem::path& out);

/// Runs a Monte Carlo study into a report directory.
void cmd_mc(KeyValues cfg, const std::filesystem::path& out_dir, unsigned workers);

/// Maps an exception to its CLI error code.
std::string error_code(const std::exception& e);

}  // namespace stpp
