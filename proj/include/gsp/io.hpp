#pragma once

#include <array>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "gsp/graph.hpp"

namespace gsp {

// Edge list: "n=<count>" then one "i j" pair per line, 0-indexed, i < j. '#' starts a comment.
void write_edge_list(std::ostream& out, const Graph& g);
GraphPtr read_edge_list(std::istream& in, const std::string& source = "<stream>");

// Coordinates: "i x y" per line, 17 significant digits.
void write_coordinates(std::ostream& out, const std::vector<std::array<double, 2>>& coords);
std::vector<std::array<double, 2>> read_coordinates(std::istream& in, const std::string& source = "<stream>");

// Signals: optional "# n=<count>" header, then one value per line.
void write_signal(std::ostream& out, const Signal& x, bool header = true);
Signal read_signal(std::istream& in, const std::string& source = "<stream>");

void write_signal_file(const std::filesystem::path& path, const Signal& x);
Signal read_signal_file(const std::filesystem::path& path);
GraphPtr read_edge_list_file(const std::filesystem::path& path);

/**
 * "key = value" lines; blank lines and '#' comments ignored. Duplicate keys
 * and lines without '=' are errors naming the line.
 */
class KeyValueConfig {
 public:
  static KeyValueConfig parse(std::istream& in, const std::string& source = "<stream>");
  static KeyValueConfig load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  /// Comma-separated list of numbers.
  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const;

  void set(const std::string& key, const std::string& value) { values_[key] = {value, 0}; }
  /// Throws on any key outside `allowed`.
  void require_known(const std::vector<std::string>& allowed) const;
  const std::string& source() const { return source_; }

 private:
  struct Entry {
    std::string value;
    int line;
  };
  std::string where(const std::string& key) const;

  std::map<std::string, Entry> values_;
  std::string source_;
};

std::vector<double> parse_numbers(const std::string& text, const std::string& what);

}  // namespace gsp
