#include "elid/app/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace elid::app {

namespace {

std::string trim(std::string_view s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return std::string(s.substr(a, b - a));
}

const ConfigKey* find_key(std::string_view key) {
  for (const auto& k : config_schema())
    if (k.key == key) return &k;
  return nullptr;
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  if (trim(v).empty()) return out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

}  // namespace

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"n", "2", "spatial dimension (2 or 3)"},
      {"seed", "1", "seed for every random draw"},
      {"domain.kind", "ball", "ball | rectangle | star-polygon | annulus"},
      {"domain.radius", "1", "ball radius"},
      {"domain.center", "", "ball center, comma list (default origin)"},
      {"domain.lo", "", "rectangle lower corner, comma list"},
      {"domain.hi", "", "rectangle upper corner, comma list"},
      {"domain.vertices", "", "star polygon vertices x,y;x,y;..."},
      {"domain.r_in", "0.5", "annulus inner radius"},
      {"domain.r_out", "1", "annulus outer radius"},
      {"moduli.kind", "isotropic", "isotropic | laplacian | tensor"},
      {"moduli.mu", "1", "shear modulus (exact rational or decimal)"},
      {"moduli.lambda", "0", "Lame lambda"},
      {"moduli.scale", "1", "laplacian moduli factor"},
      {"moduli.entries", "", "tensor entries i,k,j,l=value;... (1-based)"},
      {"potential.kind", "zero", "zero | quadratic | power | polynomial | table"},
      {"potential.kappa", "1", "quadratic: F = kappa |s|^2 / 2"},
      {"potential.c", "1", "power: F = c |s|^p"},
      {"potential.p", "2", "power exponent (>= 2)"},
      {"potential.terms", "", "polynomial terms coef:e1,e2,...;..."},
      {"potential.table", "", "CSV file with columns r,F,dF (radial table)"},
      {"coupling.kind", "bilinear", "zero | bilinear | dot-power"},
      {"coupling.c", "1", "H = c u.v or c (u.v)^m"},
      {"coupling.m", "1", "dot-power exponent"},
      {"identity.a", "1", "weight of u in the coupled dilation"},
      {"identity.b", "1", "weight of v in the coupled dilation"},
      {"grid.h", "1/16", "comma list of grid spacings, coarse to fine"},
      {"static.mode", "eigen", "eigen | manufactured | solve"},
      {"static.scheme", "auto", "auto | staircase | shortley-weller"},
      {"static.tol_res", "0", "residual tolerance (0 selects 1e-8 * scale)"},
      {"static.max_iter", "0", "iteration cap (0 selects 10 * unknowns)"},
      {"static.runs", "0", "certify: seeded solves after the certificate"},
      {"static.init_amplitude", "0.01", "max-norm of the seeded initial guesses"},
      {"static.zero_tol", "1e-8", "certify: max-norm counted as the zero solution"},
      {"manufactured.amplitude", "1", "amplitude of the sine-product solution"},
      {"dynamic.dt_factors", "1/4", "comma list; dt = factor * h for each run"},
      {"dynamic.horizon", "0.5", "final sample time"},
      {"dynamic.cfl", "0.5", "stability safety factor"},
      {"dynamic.samples", "16", "number of sample times in (0, horizon]"},
      {"dynamic.freespace", "false", "drop the boundary term and enforce the contact window"},
      {"dynamic.init", "eigenmode", "eigenmode | bump | file"},
      {"init.center", "", "bump center (default origin)"},
      {"init.width", "0.75", "bump support radius"},
      {"init.amplitude", "0.5", "bump or eigenmode amplitude"},
      {"init.direction", "", "bump polarization (default first axis)"},
      {"init.file", "", "CSV of node values for dynamic.init = file"},
      {"verify.identity", "", "pohozhaev | pohozhaev-generalized | morawetz | hamiltonian"},
      {"verify.threshold", "0.05", "relative gap allowed at the coarsest level"},
      {"verify.order_min", "1", "minimum observed order in h"},
      {"verify.dt_order_min", "2", "minimum observed order in dt"},
      {"verify.require_star_shaped", "false", "reject domains that are not star-shaped"},
      {"certificate.samples", "4000", "random points for the deficit clause"},
      {"certificate.mesh_h", "0", "boundary mesh spacing for the star-shape clause (0 = automatic)"},
      {"output.dir", "", "output directory (default: $ELID_OUTPUT_DIR, else elid-out)"},
  };
  return schema;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text, const std::string& origin) {
  ExperimentConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto eq = t.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    if (cfg.is_set(key)) throw ConfigError(where + ": duplicate key '" + key + "'");
    try {
      cfg.set(key, trim(std::string_view(t).substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  if (!find_key(key)) throw ConfigError("unknown key '" + key + "'");
  values_[key] = trim(value);
}

void ExperimentConfig::set_assignment(const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  set(trim(std::string_view(assignment).substr(0, eq)), assignment.substr(eq + 1));
}

std::string ExperimentConfig::get(const std::string& key) const {
  const ConfigKey* k = find_key(key);
  if (!k) throw std::logic_error("key '" + key + "' is not in the schema");
  auto it = values_.find(key);
  return it != values_.end() ? it->second : std::string(k->fallback);
}

double ExperimentConfig::get_double(const std::string& key) const {
  const std::string v = get(key);
  try {
    if (v.find('/') != std::string::npos) return get_rational(key).get_d();
    std::size_t used = 0;
    double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + v + "'");
  }
}

long ExperimentConfig::get_int(const std::string& key) const {
  const std::string v = get(key);
  try {
    std::size_t used = 0;
    long i = std::stol(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + v + "'");
  }
}

std::uint64_t ExperimentConfig::get_seed() const {
  const std::string v = get("seed");
  try {
    std::size_t used = 0;
    auto s = std::stoull(v, &used);
    if (used != v.size() || v.front() == '-') throw std::invalid_argument(v);
    return s;
  } catch (const std::exception&) {
    throw ConfigError("seed: not an unsigned integer: '" + v + "'");
  }
}

bool ExperimentConfig::get_bool(const std::string& key) const {
  std::string v = get(key);
  std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": not a boolean: '" + v + "'");
}

sym::Rational ExperimentConfig::get_rational(const std::string& key) const {
  const std::string v = get(key);
  try {
    return sym::parse_rational(v);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a rational: '" + v + "'");
  }
}

std::vector<double> ExperimentConfig::get_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& q : get_rational_list(key)) out.push_back(q.get_d());
  return out;
}

std::vector<sym::Rational> ExperimentConfig::get_rational_list(const std::string& key) const {
  std::vector<sym::Rational> out;
  for (const auto& item : split_list(get(key))) {
    try {
      out.push_back(sym::parse_rational(item));
    } catch (const std::exception&) {
      throw ConfigError(key + ": not a number: '" + item + "'");
    }
  }
  return out;
}

std::string ExperimentConfig::echo() const {
  std::vector<std::string> keys;
  for (const auto& k : config_schema()) keys.emplace_back(k.key);
  std::sort(keys.begin(), keys.end());
  std::ostringstream os;
  for (const auto& k : keys) os << k << " = " << get(k) << "\n";
  return os.str();
}

}  // namespace elid::app
