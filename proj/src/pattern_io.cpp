#include "stpp/pattern_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace stpp {

namespace {

// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split_record(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

void write_window(KeyValues& kv, const STWindow& w, const std::string& prefix) {
  kv.set(prefix + "x0", w.x().lo);
  kv.set(prefix + "x1", w.x().hi);
  kv.set(prefix + "y0", w.y().lo);
  kv.set(prefix + "y1", w.y().hi);
  kv.set(prefix + "t0", w.t().lo);
  kv.set(prefix + "t1", w.t().hi);
}

STWindow read_window(const KeyValues& kv, const std::string& prefix) {
  auto get = [&](const char* key, double fallback) {
    auto v = kv.get(prefix + key);
    return v ? parse_double(*v) : fallback;
  };
  return STWindow({get("x0", 0.0), get("x1", 1.0)}, {get("y0", 0.0), get("y1", 1.0)},
                  {get("t0", 0.0), get("t1", 1.0)});
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".meta");
  return p;
}

void write_pattern(const std::filesystem::path& csv, const PointPattern& p, const KeyValues& meta) {
  std::ofstream out(csv, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + csv.string());
  out << "sx,sy,t\n";
  for (const auto& e : p.points()) {
    out << format_double(e.sx) << ',' << format_double(e.sy) << ',' << format_double(e.t) << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + csv.string());

  KeyValues side;
  write_window(side, p.window());
  for (const auto& [k, v] : meta.entries()) side.set(k, v);
  side.save(sidecar_path(csv));
}

PointPattern read_pattern(const std::filesystem::path& csv) {
  const auto side = sidecar_path(csv);
  const STWindow w = std::filesystem::exists(side) ? read_window(KeyValues::load(side)) : STWindow::unit_cube();
  return read_pattern(csv, w);
}

PointPattern read_pattern(const std::filesystem::path& csv, const STWindow& w) {
  std::ifstream in(csv, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + csv.string());
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(csv.string() + ": empty file");
  const auto header = split_record(line);
  if (header != std::vector<std::string>{"sx", "sy", "t"}) {
    throw std::runtime_error(csv.string() + ": expected header sx,sy,t");
  }
  std::vector<STPoint> pts;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    const auto f = split_record(line);
    if (f.size() != 3) throw std::runtime_error(csv.string() + ": row " + std::to_string(row) + " needs 3 fields");
    try {
      pts.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2])});
    } catch (const std::exception& e) {
      throw std::runtime_error(csv.string() + ": row " + std::to_string(row) + ": " + e.what());
    }
  }
  return PointPattern(w, std::move(pts));
}

}  // namespace stpp
