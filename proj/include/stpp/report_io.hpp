#pragma once

#include <filesystem>

#include "stpp/kvfile.hpp"
#include "stpp/mcstudy.hpp"

namespace stpp {

/// Writes report.csv, deviations.csv, power.csv, efficiency.csv and
/// meta.txt into dir (created if needed). meta.txt holds `config` followed by
/// `info.*` provenance keys. Output depends only on the report contents.
void write_report(const std::filesystem::path& dir, const McReport& report, const KeyValues& config);

}  // namespace stpp
