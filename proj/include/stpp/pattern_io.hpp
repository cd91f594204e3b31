#pragma once

#include <filesystem>

#include "stpp/kvfile.hpp"
#include "stpp/procgen.hpp"

namespace stpp {

void write_window(KeyValues& kv, const STWindow& w, const std::string& prefix = "window.");
/// Unit cube when no window keys are present.
STWindow read_window(const KeyValues& kv, const std::string& prefix = "window.");

/// `<stem>.meta` next to the CSV file.
std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// CSV with header `sx,sy,t`, one event per row, shortest round-trip
/// decimal form. The sidecar holds the window bounds followed by `meta`.
void write_pattern(const std::filesystem::path& csv, const PointPattern& p, const KeyValues& meta = {});

/// Reads the CSV and takes the window from the sidecar when it exists.
PointPattern read_pattern(const std::filesystem::path& csv);
PointPattern read_pattern(const std::filesystem::path& csv, const STWindow& w);

}  // namespace stpp
