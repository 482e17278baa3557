#include "oujump/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include "oujump/errors.hpp"

namespace oujump {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

[[noreturn]] void bad(const std::string& msg) {
  throw Error(ErrorKind::BadConfig, msg);
}

double parse_double(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double d = std::strtod(v.c_str(), &end);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE) {
    bad("key '" + key + "': cannot parse number from '" + v + "'");
  }
  return d;
}

std::int64_t parse_int(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const long long n = std::strtoll(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE) {
    bad("key '" + key + "': cannot parse integer from '" + v + "'");
  }
  return static_cast<std::int64_t>(n);
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const unsigned long long n = std::strtoull(v.c_str(), &end, 10);
  if (end == v.c_str() || *end != '\0' || errno == ERANGE || v.find('-') == 0) {
    bad("key '" + key + "': cannot parse unsigned integer from '" + v + "'");
  }
  return static_cast<std::uint64_t>(n);
}

std::vector<double> parse_array(const std::string& key, const std::string& v) {
  if (v.size() < 2 || v.front() != '[' || v.back() != ']') {
    bad("key '" + key + "': array literal must look like [a, b, c]");
  }
  const std::string inner = trim(v.substr(1, v.size() - 2));
  std::vector<double> out;
  if (inner.empty()) return out;
  std::size_t pos = 0;
  while (pos <= inner.size()) {
    const std::size_t comma = inner.find(',', pos);
    const std::string item =
        trim(comma == std::string::npos ? inner.substr(pos)
                                        : inner.substr(pos, comma - pos));
    if (item.empty()) bad("key '" + key + "': empty array element");
    out.push_back(parse_double(key, item));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += fmt(v[i]);
  }
  return s + "]";
}

/// Lines to parse: inside [config]...[/config] when that section exists
/// (result documents), otherwise the whole text.
std::vector<std::string> config_lines(const std::string& text) {
  std::vector<std::string> all;
  std::istringstream in(text);
  std::string line;
  bool has_section = false;
  while (std::getline(in, line)) {
    if (trim(line) == "[config]") has_section = true;
    all.push_back(line);
  }
  std::vector<std::string> out;
  bool inside = !has_section;
  for (const std::string& raw : all) {
    const std::string t = trim(raw);
    if (has_section) {
      if (t == "[config]") {
        inside = true;
        continue;
      }
      if (t == "[/config]") {
        inside = false;
        continue;
      }
    }
    if (inside) out.push_back(raw);
  }
  return out;
}

}  // namespace

RunSpec parse_runspec(const std::string& text) {
  RunSpec rs;
  for (const std::string& raw : config_lines(text)) {
    std::string line = raw;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.find('=') == std::string::npos) {
      bad("unexpected section marker '" + line + "' in config input");
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      bad("expected 'key = value', got '" + line + "'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));

    if (key == "kappa") rs.kappa = parse_double(key, val);
    else if (key == "lambda") rs.lambda = parse_double(key, val);
    else if (key == "p") rs.p = parse_double(key, val);
    else if (key == "alphas") rs.alphas = parse_array(key, val);
    else if (key == "mus") rs.mus = parse_array(key, val);
    else if (key == "betas") rs.betas = parse_array(key, val);
    else if (key == "nus") rs.nus = parse_array(key, val);
    else if (key == "x") rs.x = parse_double(key, val);
    else if (key == "level") rs.level = parse_double(key, val);
    else if (key == "zeta") rs.zeta = parse_double(key, val);
    else if (key == "zeta_grid") rs.zeta_grid = parse_array(key, val);
    else if (key == "command") rs.command = val;
    else if (key == "tol") rs.tol = parse_double(key, val);
    else if (key == "seed") rs.seed = parse_uint(key, val);
    else if (key == "paths") rs.paths = parse_int(key, val);
    else if (key == "horizon") rs.horizon = parse_double(key, val);
    else if (key == "upper_barrier") rs.upper_barrier = parse_double(key, val);
    else if (key == "z_re") rs.z_re = parse_double(key, val);
    else if (key == "z_im") rs.z_im = parse_double(key, val);
    else if (key == "grid") rs.grid = static_cast<int>(parse_int(key, val));
    else if (key == "sweep_var") rs.sweep_var = val;
    else if (key == "sweep_from") rs.sweep_from = parse_double(key, val);
    else if (key == "sweep_to") rs.sweep_to = parse_double(key, val);
    else if (key == "sweep_points")
      rs.sweep_points = static_cast<int>(parse_int(key, val));
    else if (key == "format") rs.format = val;
    else if (key == "out") rs.out = val;
    else bad("unknown key '" + key + "'");
  }
  if (rs.alphas.size() != rs.mus.size()) {
    bad("alphas and mus must have the same length");
  }
  if (rs.betas.size() != rs.nus.size()) {
    bad("betas and nus must have the same length");
  }
  if (rs.format != "document" && rs.format != "table") {
    bad("format must be 'document' or 'table'");
  }
  return rs;
}

std::string emit_runspec(const RunSpec& rs) {
  std::ostringstream out;
  out << "kappa = " << fmt(rs.kappa) << "\n";
  out << "lambda = " << fmt(rs.lambda) << "\n";
  out << "p = " << fmt(rs.p) << "\n";
  out << "alphas = " << fmt(rs.alphas) << "\n";
  out << "mus = " << fmt(rs.mus) << "\n";
  out << "betas = " << fmt(rs.betas) << "\n";
  out << "nus = " << fmt(rs.nus) << "\n";
  out << "x = " << fmt(rs.x) << "\n";
  out << "level = " << fmt(rs.level) << "\n";
  out << "zeta = " << fmt(rs.zeta) << "\n";
  if (!rs.zeta_grid.empty()) out << "zeta_grid = " << fmt(rs.zeta_grid) << "\n";
  if (!rs.command.empty()) out << "command = " << rs.command << "\n";
  out << "tol = " << fmt(rs.tol) << "\n";
  out << "seed = " << rs.seed << "\n";
  out << "paths = " << rs.paths << "\n";
  out << "horizon = " << fmt(rs.horizon) << "\n";
  out << "upper_barrier = " << fmt(rs.upper_barrier) << "\n";
  out << "z_re = " << fmt(rs.z_re) << "\n";
  out << "z_im = " << fmt(rs.z_im) << "\n";
  out << "grid = " << rs.grid << "\n";
  if (!rs.sweep_var.empty()) {
    out << "sweep_var = " << rs.sweep_var << "\n";
    out << "sweep_from = " << fmt(rs.sweep_from) << "\n";
    out << "sweep_to = " << fmt(rs.sweep_to) << "\n";
    out << "sweep_points = " << rs.sweep_points << "\n";
  }
  out << "format = " << rs.format << "\n";
  if (!rs.out.empty()) out << "out = " << rs.out << "\n";
  return out.str();
}

std::vector<double> parse_number_list(const std::string& text) {
  const std::string t = trim(text);
  if (!t.empty() && t.front() == '[') return parse_array("list", t);
  return parse_array("list", "[" + t + "]");
}

OUModel make_model(const RunSpec& rs) {
  return validate_model(rs.kappa, rs.lambda, rs.p, rs.alphas, rs.mus, rs.betas,
                        rs.nus);
}

Query make_query(const RunSpec& rs) { return Query{rs.x, rs.level, rs.zeta}; }

QuadratureConfig make_quadrature(const RunSpec& rs) {
  QuadratureConfig q;
  if (!(rs.tol > 0.0) || rs.tol > 1e-2) {
    bad("tol must lie in (0, 1e-2]");
  }
  q.rel_tol = rs.tol;
  return q;
}

PathConfig make_paths(const RunSpec& rs) {
  PathConfig c;
  c.horizon = rs.horizon;
  c.upper_barrier = rs.upper_barrier;
  c.seed = rs.seed;
  c.n_paths = rs.paths;
  return c;
}

}  // namespace oujump
