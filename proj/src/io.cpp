#include "gsp/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace gsp {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_comment(const std::string& s) {
  const auto hash = s.find('#');
  return trim(hash == std::string::npos ? s : s.substr(0, hash));
}

[[noreturn]] void fail(const std::string& source, int line, const std::string& what) {
  throw validation_error(source + ":" + std::to_string(line) + ": " + what);
}

bool parse_double(const std::string& s, double& v) {
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  return res.ec == std::errc() && res.ptr == end;
}

bool parse_index(const std::string& s, std::size_t& v) {
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  return res.ec == std::errc() && res.ptr == end;
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open " + path.string());
  return in;
}

}  // namespace

void write_edge_list(std::ostream& out, const Graph& g) {
  out << "n=" << g.order() << '\n';
  for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

GraphPtr read_edge_list(std::istream& in, const std::string& source) {
  std::string raw;
  int line = 0;
  std::optional<std::size_t> n;
  std::vector<Graph::Edge> edges;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = strip_comment(raw);
    if (s.empty()) continue;
    if (!n) {
      std::size_t v = 0;
      if (s.rfind("n=", 0) != 0 || !parse_index(trim(s.substr(2)), v) || v == 0) {
        fail(source, line, "expected header 'n=<count>'");
      }
      n = v;
      continue;
    }
    const auto tok = split_ws(s);
    std::size_t i = 0, j = 0;
    if (tok.size() != 2 || !parse_index(tok[0], i) || !parse_index(tok[1], j)) {
      fail(source, line, "expected 'i j', got '" + s + "'");
    }
    if (i >= *n || j >= *n) fail(source, line, "vertex index out of range");
    if (i >= j) fail(source, line, "edges must be listed with i < j");
    edges.emplace_back(i, j);
  }
  if (!n) fail(source, line, "missing header 'n=<count>'");
  try {
    return std::make_shared<const Graph>(*n, std::move(edges));
  } catch (const validation_error& e) {
    throw validation_error(source + ": " + e.what());
  }
}

void write_coordinates(std::ostream& out, const std::vector<std::array<double, 2>>& coords) {
  std::ostringstream buf;
  buf.precision(17);
  for (std::size_t i = 0; i < coords.size(); ++i) buf << i << ' ' << coords[i][0] << ' ' << coords[i][1] << '\n';
  out << buf.str();
}

std::vector<std::array<double, 2>> read_coordinates(std::istream& in, const std::string& source) {
  std::string raw;
  int line = 0;
  std::vector<std::array<double, 2>> coords;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = strip_comment(raw);
    if (s.empty()) continue;
    const auto tok = split_ws(s);
    std::size_t i = 0;
    std::array<double, 2> c{};
    if (tok.size() != 3 || !parse_index(tok[0], i) || !parse_double(tok[1], c[0]) || !parse_double(tok[2], c[1])) {
      fail(source, line, "expected 'i x y'");
    }
    if (i != coords.size()) fail(source, line, "vertex ids must be consecutive from 0");
    coords.push_back(c);
  }
  return coords;
}

void write_signal(std::ostream& out, const Signal& x, bool header) {
  std::ostringstream buf;
  buf.precision(17);
  if (header) buf << "# n=" << x.size() << '\n';
  for (double v : x) buf << v << '\n';
  out << buf.str();
}

Signal read_signal(std::istream& in, const std::string& source) {
  std::string raw;
  int line = 0;
  std::optional<std::size_t> declared;
  std::vector<double> values;
  while (std::getline(in, raw)) {
    ++line;
    const std::string t = trim(raw);
    if (t.rfind("# n=", 0) == 0 && values.empty() && !declared) {
      std::size_t n = 0;
      if (!parse_index(trim(t.substr(4)), n)) fail(source, line, "bad header");
      declared = n;
      continue;
    }
    const std::string s = strip_comment(raw);
    if (s.empty()) continue;
    double v = 0.0;
    if (!parse_double(s, v)) fail(source, line, "cannot parse value '" + s + "'");
    values.push_back(v);
  }
  if (declared && *declared != values.size()) {
    fail(source, line, "header declares " + std::to_string(*declared) + " values, found " + std::to_string(values.size()));
  }
  return Eigen::Map<const Signal>(values.data(), static_cast<Eigen::Index>(values.size()));
}

void write_signal_file(const std::filesystem::path& path, const Signal& x) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write " + path.string());
  write_signal(out, x);
}

Signal read_signal_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_signal(in, path.string());
}

GraphPtr read_edge_list_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_edge_list(in, path.string());
}

KeyValueConfig KeyValueConfig::parse(std::istream& in, const std::string& source) {
  KeyValueConfig cfg;
  cfg.source_ = source;
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = strip_comment(raw);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail(source, line, "expected 'key = value'");
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    if (key.empty()) fail(source, line, "empty key");
    if (cfg.values_.count(key)) fail(source, line, "duplicate key '" + key + "'");
    cfg.values_[key] = {value, line};
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
  auto in = open_in(path);
  return parse(in, path.string());
}

std::string KeyValueConfig::where(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end() || it->second.line == 0) return source_ + ": key '" + key + "'";
  return source_ + ":" + std::to_string(it->second.line) + ": key '" + key + "'";
}

std::optional<std::string> KeyValueConfig::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second.value;
}

std::string KeyValueConfig::get_or(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  double out = 0.0;
  if (!parse_double(*v, out)) throw validation_error(where(key) + ": expected a number, got '" + *v + "'");
  return out;
}

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  long long out = 0;
  const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
  if (res.ec != std::errc() || res.ptr != v->data() + v->size()) {
    throw validation_error(where(key) + ": expected an integer, got '" + *v + "'");
  }
  return out;
}

std::vector<double> KeyValueConfig::get_list(const std::string& key, const std::vector<double>& fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  try {
    return parse_numbers(*v, key);
  } catch (const validation_error& e) {
    throw validation_error(where(key) + ": " + e.what());
  }
}

void KeyValueConfig::require_known(const std::vector<std::string>& allowed) const {
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, entry] : values_) {
    if (!ok.count(key)) throw validation_error(where(key) + ": unknown key");
  }
}

std::vector<double> parse_numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item = trim(item);
    double v = 0.0;
    if (item.empty() || !parse_double(item, v)) throw validation_error(what + ": cannot parse list entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw validation_error(what + ": empty list");
  return out;
}

}  // namespace gsp
