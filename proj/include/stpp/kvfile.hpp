#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace stpp {

/// Ordered `key = value` text records, one per line, '#' starts a comment.
class KeyValues {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  std::optional<std::string> get(const std::string& key) const;
  bool contains(const std::string& key) const { return get(key).has_value(); }

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_string() const;
  static KeyValues parse(const std::string& text);

  void save(const std::filesystem::path& path) const;
  static KeyValues load(const std::filesystem::path& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

/// Shortest text that parses back to exactly the same double.
std::string format_double(double x);
double parse_double(const std::string& s);

}  // namespace stpp
