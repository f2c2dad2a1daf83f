#include "thinorbit/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "thinorbit/fixtures.hpp"
#include "thinorbit/repr.hpp"

namespace thinorbit {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::int64_t parse_i64(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    std::int64_t r = std::stoll(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return r;
  } catch (const std::exception&) {
    throw config_error("config key '" + key + "' needs an integer, got '" +
                       value + "'");
  }
}

std::uint64_t parse_u64(const std::string& value, const std::string& key) {
  std::int64_t r = parse_i64(value, key);
  if (r < 0)
    throw config_error("config key '" + key + "' must be non-negative");
  return (std::uint64_t)r;
}

double parse_f64(const std::string& value, const std::string& key) {
  try {
    std::size_t pos = 0;
    double r = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return r;
  } catch (const std::exception&) {
    throw config_error("config key '" + key + "' needs a number, got '" +
                       value + "'");
  }
}

bool parse_flag(const std::string& value, const std::string& key) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw config_error("config key '" + key + "' needs 0/1/true/false, got '" +
                     value + "'");
}

std::array<std::int64_t, 2> parse_pair(const std::string& value,
                                       const std::string& key) {
  std::size_t comma = value.find(',');
  if (comma == std::string::npos)
    throw config_error("config key '" + key + "' needs 'x,y', got '" + value +
                       "'");
  return {parse_i64(trim(value.substr(0, comma)), key),
          parse_i64(trim(value.substr(comma + 1)), key)};
}

std::vector<Mat2> parse_generators(const std::string& value) {
  std::vector<Mat2> out;
  std::stringstream stream(value);
  std::string quad;
  while (std::getline(stream, quad, ';')) {
    quad = trim(quad);
    if (quad.empty()) continue;
    std::int64_t e[4];
    std::stringstream qs(quad);
    std::string item;
    int i = 0;
    while (std::getline(qs, item, ',')) {
      if (i >= 4) break;
      e[i++] = parse_i64(trim(item), "generators");
    }
    if (i != 4 || qs.rdbuf()->in_avail() != 0)
      throw config_error("generator '" + quad + "' is not an a,b,c,d quad");
    out.push_back(Mat2::make(e[0], e[1], e[2], e[3]));
  }
  return out;
}

std::string fmt_f64(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_pair(const std::array<std::int64_t, 2>& p) {
  return std::to_string(p[0]) + "," + std::to_string(p[1]);
}

std::string fmt_generators(const std::vector<Mat2>& gens) {
  std::string out;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (i) out += ";";
    out += mat_to_string(gens[i]);
  }
  return out;
}

Rational rational_approx(double x) {
  return Rational((long long)std::llround(x * 1'000'000.0), 1'000'000);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  RunConfig c;
  std::stringstream stream(text);
  std::string line;
  int lineno = 0;
  while (std::getline(stream, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw config_error("config line " + std::to_string(lineno) +
                         " is not 'key = value': " + t);
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (key == "fixture") c.fixture = value;
    else if (key == "generators") c.generators = parse_generators(value);
    else if (key == "J") c.J = parse_i64(value, key);
    else if (key == "v") c.v = parse_pair(value, key);
    else if (key == "w") c.w = parse_pair(value, key);
    else if (key == "prune_factor") c.prune_factor = parse_f64(value, key);
    else if (key == "angular_denom") c.angular_denom = parse_i64(value, key);
    else if (key == "N") c.N = parse_f64(value, key);
    else if (key == "T") c.T = parse_f64(value, key);
    else if (key == "T_exponent") c.T_exponent = parse_f64(value, key);
    else if (key == "eps0") c.eps0 = parse_f64(value, key);
    else if (key == "eps1") c.eps1 = parse_f64(value, key);
    else if (key == "Q0") c.Q0 = parse_f64(value, key);
    else if (key == "K0") c.K0 = parse_f64(value, key);
    else if (key == "delta") c.delta = parse_f64(value, key);
    else if (key == "threads") c.threads = (int)parse_i64(value, key);
    else if (key == "state_cap") c.state_cap = parse_u64(value, key);
    else if (key == "quotient_cap") c.quotient_cap = parse_u64(value, key);
    else if (key == "seed") c.seed = parse_u64(value, key);
    else if (key == "minor_arcs") c.minor_arcs = parse_flag(value, key);
    else if (key == "oracle") c.oracle = parse_flag(value, key);
    else if (key == "free_tree") c.free_tree = parse_flag(value, key);
    else if (key == "asum") {
      if (value != "full" && value != "coprime")
        throw config_error("config key 'asum' needs full|coprime, got '" +
                           value + "'");
      c.asum = value;
    } else if (key == "prime_bound") c.prime_bound = parse_i64(value, key);
    else if (key == "power_bound") c.power_bound = (int)parse_i64(value, key);
    else
      throw config_error("unknown config key '" + key + "' on line " +
                         std::to_string(lineno));
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  auto put = [&](const std::string& key, const std::string& value) {
    out += key + " = " + value + "\n";
  };
  if (!c.fixture.empty()) put("fixture", c.fixture);
  if (!c.generators.empty()) put("generators", fmt_generators(c.generators));
  put("J", std::to_string(c.J));
  put("v", fmt_pair(c.v));
  put("w", fmt_pair(c.w));
  if (c.prune_factor) put("prune_factor", fmt_f64(*c.prune_factor));
  put("angular_denom", std::to_string(c.angular_denom));
  put("N", fmt_f64(c.N));
  if (c.T) put("T", fmt_f64(*c.T));
  put("T_exponent", fmt_f64(c.T_exponent));
  put("eps0", fmt_f64(c.eps0));
  put("eps1", fmt_f64(c.eps1));
  if (c.Q0) put("Q0", fmt_f64(*c.Q0));
  if (c.K0) put("K0", fmt_f64(*c.K0));
  put("delta", fmt_f64(c.delta));
  put("threads", std::to_string(c.threads));
  put("state_cap", std::to_string(c.state_cap));
  put("quotient_cap", std::to_string(c.quotient_cap));
  put("seed", std::to_string(c.seed));
  put("minor_arcs", c.minor_arcs ? "1" : "0");
  put("oracle", c.oracle ? "1" : "0");
  put("free_tree", c.free_tree ? "1" : "0");
  put("asum", c.asum);
  put("prime_bound", std::to_string(c.prime_bound));
  put("power_bound", std::to_string(c.power_bound));
  return out;
}

GroupSpec RunConfig::group() const {
  if (!fixture.empty()) {
    if (!generators.empty())
      throw config_error("config sets both fixture and generators");
    return fixture_spec(fixture);
  }
  if (generators.empty())
    throw config_error("config needs either fixture or generators");
  GroupSpec g =
      GroupSpec::create(generators, J, v, w, prune_factor, angular_denom);
  return g.positioned() ? g : precompose_fix(g);
}

double RunConfig::resolved_T() const {
  if (T) return *T;
  return std::pow(N, T_exponent);
}

double RunConfig::resolved_Q0() const { return Q0 ? *Q0 : 6.0; }

double RunConfig::resolved_K0() const { return K0 ? *K0 : 8.0; }

CircleParams RunConfig::params() const {
  return explicit_params(N, resolved_T(), resolved_Q0(), resolved_K0(), eps0,
                         eps1, rational_approx(delta));
}

BallOptions RunConfig::ball_options() const {
  BallOptions opt;
  opt.state_cap = state_cap;
  opt.threads = threads;
  opt.free_tree = free_tree;
  return opt;
}

}  // namespace thinorbit
