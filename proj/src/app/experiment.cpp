#include "elid/app/experiment.hpp"

#include <gmp.h>

#include <Eigen/Core>
#include <boost/version.hpp>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "elid/app/selftest.hpp"
#include "elid/io/csv.hpp"
#include "elid/models/certificate.hpp"
#include "elid/statics/manufactured.hpp"
#include "elid/verify/identity.hpp"

namespace elid::app {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep))
    if (!trim(item).empty()) out.push_back(trim(item));
  return out;
}

sym::Rational rational(const std::string& text, const std::string& key) {
  try {
    return sym::parse_rational(text);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + text + "'");
  }
}

Point point_of(const ExperimentConfig& cfg, const std::string& key, int n, bool required) {
  Point p = cfg.get_list(key);
  if (p.empty() && !required) return Point(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(p.size()) != n) throw ConfigError(key + ": expected " + std::to_string(n) + " coordinates");
  return p;
}

int dimension(const ExperimentConfig& cfg) {
  long n = cfg.get_int("n");
  if (n != 2 && n != 3) throw ConfigError("n: only dimensions 2 and 3 are supported");
  return static_cast<int>(n);
}

std::vector<double> positive_list(const ExperimentConfig& cfg, const std::string& key) {
  auto v = cfg.get_list(key);
  if (v.empty()) throw ConfigError(key + ": at least one value is required");
  for (double x : v)
    if (!(x > 0)) throw ConfigError(key + ": values must be positive");
  return v;
}

std::string static_identity(const ExperimentConfig& cfg) {
  std::string id = cfg.get("verify.identity");
  if (id.empty()) id = cfg.get("static.mode") == "manufactured" ? "pohozhaev-generalized" : "pohozhaev";
  if (id != "pohozhaev" && id != "pohozhaev-generalized")
    throw ConfigError("verify.identity: verify-static checks pohozhaev or pohozhaev-generalized, not '" + id + "'");
  return id;
}

std::string dynamic_identity(const ExperimentConfig& cfg) {
  std::string id = cfg.get("verify.identity");
  if (id.empty()) id = "morawetz";
  if (id != "morawetz" && id != "hamiltonian")
    throw ConfigError("verify.identity: verify-dynamic checks morawetz or hamiltonian, not '" + id + "'");
  return id;
}

std::string hex64(std::uint64_t h) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

/// Files produced by one command, written together with the manifest.
struct Outputs {
  std::vector<std::pair<std::string, std::string>> files;
  std::string derivation;
  std::string error;

  void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }
};

std::string manifest_text(std::string_view command, const ExperimentConfig& cfg, const Outputs& o, int code) {
  std::ostringstream os;
  os << "elid " << kVersion << "\n";
  os << "command: " << command << "\n";
  os << "exit code: " << code << "\n";
  os << "compiler: " << __VERSION__ << "\n";
  os << "gmp: " << gmp_version << "\n";
  os << "eigen: " << EIGEN_WORLD_VERSION << "." << EIGEN_MAJOR_VERSION << "." << EIGEN_MINOR_VERSION << "\n";
  os << "boost: " << BOOST_LIB_VERSION << "\n";
  os << "derivation log fnv1a64: " << (o.derivation.empty() ? std::string("none") : hex64(fnv1a64(o.derivation))) << "\n";
  for (const auto& [name, content] : o.files) os << "output: " << name << " fnv1a64 " << hex64(fnv1a64(content)) << "\n";
  if (!o.error.empty()) os << "error: " << o.error << "\n";
  os << "# effective configuration\n" << cfg.echo();
  return os.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
}

/// Runs a command body, maps exceptions to exit codes and writes every output plus the manifest.
int guarded(std::string_view command, const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& err,
            const std::function<int(Outputs&)>& body) {
  Outputs o;
  int code = kPass;
  try {
    code = body(o);
  } catch (const ConfigError& e) {
    o.error = std::string("input error: ") + e.what();
    code = kInputError;
  } catch (const SolverFailure& e) {
    o.error = std::string("solver failure: ") + e.what();
    code = kSolverFailure;
  } catch (const std::invalid_argument& e) {
    o.error = std::string("input error: ") + e.what();
    code = kInputError;
  } catch (const std::out_of_range& e) {
    o.error = std::string("input error: ") + e.what();
    code = kInputError;
  } catch (const std::exception& e) {
    o.error = std::string("solver failure: ") + e.what();
    code = kSolverFailure;
  }
  if (!o.error.empty()) err << o.error << "\n";
  try {
    std::filesystem::create_directories(out_dir);
    for (const auto& [name, content] : o.files) write_file(std::filesystem::path(out_dir) / name, content);
    write_file(std::filesystem::path(out_dir) / "config.effective", cfg.echo());
    write_file(std::filesystem::path(out_dir) / "manifest.txt", manifest_text(command, cfg, o, code));
  } catch (const std::exception& e) {
    err << "cannot write outputs to '" << out_dir << "': " << e.what() << "\n";
    if (code == kPass) code = kInputError;
  }
  return code;
}

Scheme pick_scheme(const ExperimentConfig& cfg, const DomainSpec& dom, double h, bool linear) {
  const std::string s = cfg.get("static.scheme");
  if (s == "staircase") return Scheme::Staircase;
  if (s == "shortley-weller") return Scheme::ShortleyWeller;
  if (s != "auto") throw ConfigError("static.scheme: expected auto, staircase or shortley-weller");
  return linear && !dom.aligned_with(h) ? Scheme::ShortleyWeller : Scheme::Staircase;
}

GridField seeded_field(const GridPtr& g, int comps, std::uint64_t seed, double amplitude) {
  GridField u(g, comps);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (long node : g->inside_nodes())
    for (int c = 0; c < comps; ++c) u.at(node, c) = amplitude * unif(rng);
  return u;
}

SolveOptions solve_options(const ExperimentConfig& cfg) {
  SolveOptions o;
  o.tol_res = cfg.get_double("static.tol_res");
  o.max_iter = cfg.get_int("static.max_iter");
  return o;
}

/// Row-per-node initial data: x_1..x_n followed by u, u_t (and v, v_t) components.
struct InitTable {
  std::vector<Point> x;
  std::vector<std::vector<double>> values;
};

InitTable read_init_file(const std::string& path, int n, int value_count) {
  std::ifstream in(path);
  if (!in) throw ConfigError("init.file: cannot read '" + path + "'");
  InitTable t;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto cells = split(line, ',');
    if (cells.empty() || cells[0][0] == '#') continue;
    if (lineno == 1 && !(std::isdigit(static_cast<unsigned char>(cells[0][0])) || cells[0][0] == '-' || cells[0][0] == '.'))
      continue;
    if (static_cast<int>(cells.size()) != n + value_count)
      throw ConfigError("init.file:" + std::to_string(lineno) + ": expected " + std::to_string(n + value_count) + " columns");
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(rational(c, "init.file").get_d());
    t.x.emplace_back(row.begin(), row.begin() + n);
    t.values.emplace_back(row.begin() + n, row.end());
  }
  return t;
}

}  // namespace

DomainSpec build_domain(const ExperimentConfig& cfg) {
  const int n = dimension(cfg);
  const std::string kind = cfg.get("domain.kind");
  try {
    if (kind == "ball") return DomainSpec::ball(n, cfg.get_double("domain.radius"), point_of(cfg, "domain.center", n, false));
    if (kind == "rectangle")
      return DomainSpec::rectangle(point_of(cfg, "domain.lo", n, true), point_of(cfg, "domain.hi", n, true));
    if (kind == "annulus") return DomainSpec::annulus(n, cfg.get_double("domain.r_in"), cfg.get_double("domain.r_out"));
    if (kind == "star-polygon") {
      if (n != 2) throw ConfigError("domain.kind: star polygons are planar (n = 2)");
      std::vector<std::array<double, 2>> verts;
      for (const auto& v : split(cfg.get("domain.vertices"), ';')) {
        auto xy = split(v, ',');
        if (xy.size() != 2) throw ConfigError("domain.vertices: expected x,y pairs separated by ';'");
        verts.push_back({rational(xy[0], "domain.vertices").get_d(), rational(xy[1], "domain.vertices").get_d()});
      }
      return DomainSpec::star_polygon(std::move(verts));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
  throw ConfigError("domain.kind: expected ball, rectangle, star-polygon or annulus, not '" + kind + "'");
}

ElasticModuli build_moduli(const ExperimentConfig& cfg, std::optional<IsotropicModuli>* iso) {
  const int n = dimension(cfg);
  const std::string kind = cfg.get("moduli.kind");
  if (iso) iso->reset();
  if (kind == "isotropic") {
    IsotropicModuli lame{cfg.get_rational("moduli.mu"), cfg.get_rational("moduli.lambda")};
    if (!(lame.mu > 0)) throw ConfigError("moduli.mu: the shear modulus must be positive");
    if (!(lame.mu + lame.lame_lambda > 0)) throw ConfigError("moduli: mu + lambda must be positive");
    if (iso) *iso = lame;
    return moduli_from_lame(lame, n);
  }
  if (kind == "laplacian") {
    auto s = cfg.get_rational("moduli.scale");
    if (!(s > 0)) throw ConfigError("moduli.scale: must be positive");
    return laplacian_moduli(n, s);
  }
  if (kind == "tensor") {
    ElasticModuli C(n);
    for (const auto& entry : split(cfg.get("moduli.entries"), ';')) {
      auto eq = entry.find('=');
      auto idx = split(entry.substr(0, eq), ',');
      if (eq == std::string::npos || idx.size() != 4) throw ConfigError("moduli.entries: expected i,k,j,l=value");
      int ik[4];
      for (int a = 0; a < 4; ++a) {
        ik[a] = static_cast<int>(rational(idx[static_cast<std::size_t>(a)], "moduli.entries").get_d());
        if (ik[a] < 1 || ik[a] > n) throw ConfigError("moduli.entries: index out of range in '" + entry + "'");
      }
      C.set(ik[0], ik[1], ik[2], ik[3], rational(entry.substr(eq + 1), "moduli.entries"));
    }
    if (!has_major_symmetry(C)) throw ConfigError("moduli.entries: the tensor lacks the major symmetry C(i,k,j,l) = C(j,l,i,k)");
    auto lh = check_legendre_hadamard(C);
    if (!lh.pass) throw ConfigError("moduli.entries: Legendre-Hadamard condition fails (" + lh.detail + ")");
    return C;
  }
  throw ConfigError("moduli.kind: expected isotropic, laplacian or tensor, not '" + kind + "'");
}

BodyForcePotential build_potential(const ExperimentConfig& cfg) {
  const int n = dimension(cfg);
  const std::string kind = cfg.get("potential.kind");
  try {
    if (kind == "zero") return BodyForcePotential::zero();
    if (kind == "quadratic") return BodyForcePotential::quadratic(cfg.get_rational("potential.kappa"));
    if (kind == "power") return BodyForcePotential::power(cfg.get_rational("potential.c"), cfg.get_rational("potential.p"));
    if (kind == "polynomial") {
      std::vector<PolyTerm> terms;
      for (const auto& t : split(cfg.get("potential.terms"), ';')) {
        auto colon = t.find(':');
        if (colon == std::string::npos) throw ConfigError("potential.terms: expected coef:e1,...,en");
        PolyTerm term{rational(t.substr(0, colon), "potential.terms"), {}};
        for (const auto& e : split(t.substr(colon + 1), ',')) term.exponents.push_back(static_cast<int>(rational(e, "potential.terms").get_d()));
        if (static_cast<int>(term.exponents.size()) != n) throw ConfigError("potential.terms: need n exponents per term");
        terms.push_back(std::move(term));
      }
      return BodyForcePotential::polynomial(std::move(terms));
    }
    if (kind == "table") {
      const std::string path = cfg.get("potential.table");
      std::ifstream in(path);
      if (!in) throw ConfigError("potential.table: cannot read '" + path + "'");
      RadialTable tab;
      std::string line;
      while (std::getline(in, line)) {
        auto cells = split(line, ',');
        if (cells.empty() || !(std::isdigit(static_cast<unsigned char>(cells[0][0])) || cells[0][0] == '.' || cells[0][0] == '-'))
          continue;
        if (cells.size() != 3) throw ConfigError("potential.table: expected r,F,dF rows");
        tab.r.push_back(rational(cells[0], "potential.table").get_d());
        tab.value.push_back(rational(cells[1], "potential.table").get_d());
        tab.slope.push_back(rational(cells[2], "potential.table").get_d());
      }
      return BodyForcePotential::tabulated(std::move(tab));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("potential: ") + e.what());
  }
  throw ConfigError("potential.kind: expected zero, quadratic, power, polynomial or table, not '" + kind + "'");
}

CouplingPotential build_coupling(const ExperimentConfig& cfg) {
  const std::string kind = cfg.get("coupling.kind");
  try {
    if (kind == "zero") return CouplingPotential::zero();
    if (kind == "bilinear") return CouplingPotential::bilinear(cfg.get_rational("coupling.c"));
    if (kind == "dot-power") return CouplingPotential::dot_power(cfg.get_rational("coupling.c"), static_cast<int>(cfg.get_int("coupling.m")));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("coupling: ") + e.what());
  }
  throw ConfigError("coupling.kind: expected zero, bilinear or dot-power, not '" + kind + "'");
}

void check_admissible(const ExperimentConfig& cfg, std::string_view command) {
  const int n = dimension(cfg);
  (void)cfg.get_seed();
  const bool derive = command == "derive";
  std::string id;
  if (derive) {
    id = cfg.get("verify.identity").empty() ? "pohozhaev" : cfg.get("verify.identity");
    if (id != "pohozhaev" && id != "pohozhaev-generalized" && id != "morawetz" && id != "hamiltonian")
      throw ConfigError("verify.identity: unknown identity '" + id + "'");
  } else if (command == "verify-static") {
    id = static_identity(cfg);
  } else if (command == "verify-dynamic") {
    id = dynamic_identity(cfg);
  }
  if (id == "hamiltonian") {
    auto a = cfg.get_rational("identity.a"), b = cfg.get_rational("identity.b");
    if (a + b != 2) throw ConfigError("identity: the coupled identity needs a + b = 2, got a + b = " + sym::to_string(sym::Rational(a + b)));
    if (n % 2 != 0) throw ConfigError("n: the coupled system is posed in even dimensions only");
  }
  build_moduli(cfg);
  if (derive || command == "selftest") return;

  DomainSpec dom = build_domain(cfg);
  if (dom.n != n) throw ConfigError("domain: dimension differs from n");
  build_potential(cfg);
  positive_list(cfg, "grid.h");
  if (command == "verify-dynamic") {
    build_coupling(cfg);
    auto f = positive_list(cfg, "dynamic.dt_factors");
    if (!(cfg.get_double("dynamic.horizon") > 0)) throw ConfigError("dynamic.horizon: must be positive");
    if (cfg.get_int("dynamic.samples") < 1) throw ConfigError("dynamic.samples: at least one sample is required");
    if (!(cfg.get_double("dynamic.cfl") > 0)) throw ConfigError("dynamic.cfl: must be positive");
    if (f.size() >= 3) {
      auto q = cfg.get_rational_list("dynamic.dt_factors");
      if (!(q[0] / q[1] == q[1] / q[2]) || !(q[0] > q[1]))
        throw ConfigError("dynamic.dt_factors: the first three factors must decrease by a constant ratio");
    }
  }
  if (command == "verify-static" && cfg.get_bool("verify.require_star_shaped")) {
    auto star = is_star_shaped(dom);
    if (!star.star_shaped)
      throw ConfigError("domain is not star-shaped about the origin (min (x, nu) = " + format_double(star.min_x_dot_nu) + ")");
  }
}

std::vector<sym::Derivation> derivations_for(const std::string& identity, int n, const sym::Rational& a, const sym::Rational& b,
                                             sym::ModuliSymmetry symmetry) {
  if (identity == "pohozhaev") return {sym::derive_static(n, symmetry)};
  if (identity == "pohozhaev-generalized") return {sym::derive_static_forced(n, symmetry)};
  if (identity == "morawetz") return {sym::derive_dynamic(n, symmetry)};
  if (identity == "hamiltonian") return {sym::derive_coupled(n, a, b, false, symmetry), sym::derive_coupled(n, a, b, true, symmetry)};
  throw ConfigError("unknown identity '" + identity + "'");
}

std::string derivation_text(const std::vector<sym::Derivation>& ds) {
  std::string out;
  for (std::size_t k = 0; k < ds.size(); ++k) {
    if (k) out += "\n";
    out += sym::derivation_log(ds[k]);
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string resolve_output_dir(const ExperimentConfig& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (!cfg.get("output.dir").empty()) return cfg.get("output.dir");
  if (const char* env = std::getenv("ELID_OUTPUT_DIR"); env && *env) return env;
  return "elid-out";
}

int cmd_derive(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  return guarded("derive", cfg, out_dir, err, [&](Outputs& o) {
    check_admissible(cfg, "derive");
    const int n = dimension(cfg);
    const std::string id = cfg.get("verify.identity").empty() ? "pohozhaev" : cfg.get("verify.identity");
    auto ds = derivations_for(id, n, cfg.get_rational("identity.a"), cfg.get_rational("identity.b"),
                              build_moduli(cfg).symmetry_class());
    o.derivation = derivation_text(ds);
    o.add("derivation.log", o.derivation);
    // The summary stops before the coefficient tables, which live in the log file.
    for (const auto& d : ds) {
      std::string log = sym::derivation_log(d);
      const auto cut = log.find("\ntable: ");
      out << (cut == std::string::npos ? log : log.substr(0, cut + 1));
      for (const auto& t : d.tables) out << "table: " << t.title << (t.agrees() ? " [agree]" : " [differ]") << "\n";
      out << "\n";
    }
    out << "coefficient tables: " << (std::filesystem::path(out_dir) / "derivation.log").string() << "\n";
    return kPass;
  });
}

int cmd_verify_static(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  return guarded("verify-static", cfg, out_dir, err, [&](Outputs& o) {
    check_admissible(cfg, "verify-static");
    const int n = dimension(cfg);
    const std::string id = static_identity(cfg);
    const std::string mode = cfg.get("static.mode");
    if (mode != "eigen" && mode != "manufactured" && mode != "solve")
      throw ConfigError("static.mode: expected eigen, manufactured or solve");
    if (mode == "manufactured" && id != "pohozhaev-generalized")
      throw ConfigError("verify.identity: a manufactured solution carries a source; use pohozhaev-generalized");
    const DomainSpec dom = build_domain(cfg);
    std::optional<IsotropicModuli> iso;
    const ElasticModuli C = build_moduli(cfg, &iso);
    const BodyForcePotential F = build_potential(cfg);
    if (mode == "manufactured") {
      bool unit = dom.kind == DomainKind::Rectangle;
      for (int d = 0; d < n && unit; ++d) unit = dom.lo[static_cast<std::size_t>(d)] == 0.0 && dom.hi[static_cast<std::size_t>(d)] == 1.0;
      if (!unit) throw ConfigError("static.mode: the manufactured solution vanishes on the boundary of the unit cube only");
    }
    o.derivation = derivation_text(derivations_for(id, n, 1, 1, C.symmetry_class()));
    const auto hs = positive_list(cfg, "grid.h");
    const SolveOptions sopts = solve_options(cfg);
    const std::uint64_t seed = cfg.get_seed();
    const double init_amp = cfg.get_double("static.init_amplitude");
    const double man_amp = cfg.get_double("manufactured.amplitude");

    auto level = [&](double h) {
      StaticProblem p;
      p.grid = Grid::make(dom, h);
      p.C = C;
      StaticSolution sol;
      if (mode == "eigen") {
        p.scheme = pick_scheme(cfg, dom, h, true);
        const double tol = 1e-10;
        auto ep = smallest_eigenpair(p, tol);
        if (!(ep.residual <= tol * std::max(1.0, std::abs(ep.kappa))))
          throw SolverFailure("inverse iteration stalled at h = " + format_double(h) + ", residual " + format_double(ep.residual));
        p.F = BodyForcePotential::quadratic(sym::Rational(ep.kappa));
        sol.u = ep.u;
        sol.converged = true;
        sol.iterations = ep.iterations;
        sol.residual_norm = residual_max_norm(p, ep.u);
      } else {
        p.F = F;
        p.scheme = pick_scheme(cfg, dom, h, F.is_linear());
        if (mode == "manufactured") p.source = manufactured_source(C, F, ManufacturedSolution::unit_cube_mode(n, man_amp));
        GridField init = mode == "solve" ? seeded_field(p.grid, n, seed, init_amp) : GridField(p.grid, n);
        sol = solve_static(p, init, sopts);
        if (!sol.converged)
          throw SolverFailure("static solve at h = " + format_double(h) + " did not converge: " + sol.status);
      }
      IdentityReport r = id == "pohozhaev-generalized" ? verify_pohozhaev_generalized(sol, p)
                         : iso                        ? verify_pohozhaev_isotropic(sol, p, *iso)
                                                      : verify_pohozhaev(sol, p);
      r.notes.push_back(std::string("scheme ") + (p.scheme == Scheme::ShortleyWeller ? "shortley-weller" : "staircase") +
                        ", " + std::to_string(sol.iterations) + " iterations, residual " + format_double(sol.residual_norm));
      return r;
    };
    std::vector<std::future<IdentityReport>> jobs;
    for (double h : hs) jobs.push_back(std::async(std::launch::async, level, h));
    std::vector<IdentityReport> levels;
    for (auto& j : jobs) levels.push_back(j.get());

    RefinementStudy study = h_refinement(levels);
    const double threshold = cfg.get_double("verify.threshold");
    const double order_min = cfg.get_double("verify.order_min");
    const bool pass = study.pass(threshold) && study.order >= order_min;
    std::ostringstream rep;
    rep << study.text();
    rep << "verdict: " << (pass ? "PASS" : "FAIL") << " (coarsest relative gap " << levels.front().relative_gap
        << " vs " << threshold << ", " << (study.monotone() ? "monotone" : "not monotone") << " over "
        << levels.size() << " levels, order " << study.order << " vs " << order_min << ")\n";
    o.add("refinement.csv", study.csv());
    o.add("report.txt", rep.str());
    out << rep.str();
    return pass ? kPass : kIdentityFail;
  });
}

int cmd_verify_dynamic(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  return guarded("verify-dynamic", cfg, out_dir, err, [&](Outputs& o) {
    check_admissible(cfg, "verify-dynamic");
    const int n = dimension(cfg);
    const std::string id = dynamic_identity(cfg);
    const DomainSpec dom = build_domain(cfg);
    const ElasticModuli C = build_moduli(cfg);
    const sym::Rational a = cfg.get_rational("identity.a"), b = cfg.get_rational("identity.b");
    const DynamicModel model = id == "hamiltonian" ? DynamicModel::hamiltonian(C, build_coupling(cfg), a, b)
                                                   : DynamicModel::potential(C, build_potential(cfg));
    o.derivation = derivation_text(derivations_for(id, n, a, b, C.symmetry_class()));

    TrajectoryOptions base;
    base.horizon = cfg.get_double("dynamic.horizon");
    base.samples = static_cast<int>(cfg.get_int("dynamic.samples"));
    base.cfl = cfg.get_double("dynamic.cfl");
    base.freespace = cfg.get_bool("dynamic.freespace");

    const std::string init = cfg.get("dynamic.init");
    std::function<DynamicState(const Integrator&)> init_fn;
    const double amp = cfg.get_double("init.amplitude");
    if (init == "eigenmode") {
      init_fn = [amp](const Integrator& i) { return eigenmode_state(i, amp); };
    } else if (init == "bump" || init == "gaussian-bump") {
      BumpData bump{point_of(cfg, "init.center", n, false), cfg.get_double("init.width"), amp, cfg.get_list("init.direction")};
      if (!bump.direction.empty() && static_cast<int>(bump.direction.size()) != n)
        throw ConfigError("init.direction: expected " + std::to_string(n) + " components");
      if (base.freespace) {
        base.contact_time = contact_time(dom, bump, C);
        if (base.horizon > base.contact_time)
          throw ConfigError("dynamic.horizon " + format_double(base.horizon) + " passes the wave-contact time " +
                            format_double(base.contact_time));
      }
      init_fn = [bump](const Integrator& i) { return bump_state(i, bump); };
    } else if (init == "file") {
      const int per = model.coupled() ? 4 * n : 2 * n;
      auto table = std::make_shared<InitTable>(read_init_file(cfg.get("init.file"), n, per));
      init_fn = [table, n](const Integrator& integ) {
        DynamicState s = integ.zero_state();
        const Grid& g = *integ.grid();
        for (std::size_t r = 0; r < table->x.size(); ++r) {
          long node = g.find_node(table->x[r]);
          if (node < 0 || g.flag(node) != NodeFlag::Inside)
            throw ConfigError("init.file: row " + std::to_string(r + 1) + " is not at an interior grid node");
          GridField* f[] = {&s.u, &s.u_t, &s.v, &s.v_t};
          for (std::size_t c = 0; c < table->values[r].size(); ++c) f[c / static_cast<std::size_t>(n)]->at(node, static_cast<int>(c % static_cast<std::size_t>(n))) = table->values[r][c];
        }
        return s;
      };
    } else {
      throw ConfigError("dynamic.init: expected eigenmode, bump or file");
    }
    if (base.freespace && init != "bump" && init != "gaussian-bump")
      throw ConfigError("dynamic.freespace: the contact window is defined for bump data only");

    const auto hs = positive_list(cfg, "grid.h");
    const auto factors = positive_list(cfg, "dynamic.dt_factors");
    struct Run {
      Trajectory tr;
      IdentityReport rep;
    };
    auto run = [&](double h, double factor) {
      TrajectoryOptions opts = base;
      opts.dt = factor * h;
      Trajectory tr;
      try {
        tr = run_trajectory(Grid::make(dom, h), model, init_fn, opts);
      } catch (const IntegrationError& e) {
        if (e.step() < 0) throw ConfigError(std::string("dynamic.dt_factors: ") + e.what());
        throw SolverFailure(std::string(e.what()) + " at step " + std::to_string(e.step()));
      }
      IdentityReport r = model.coupled() ? verify_hamiltonian_conformal(tr, model) : verify_morawetz(tr, model);
      return Run{std::move(tr), std::move(r)};
    };
    // Runs at the first dt factor for every h, then the remaining factors at the finest h.
    std::vector<std::pair<std::size_t, std::size_t>> plan;
    for (std::size_t i = 0; i < hs.size(); ++i) plan.emplace_back(i, 0);
    for (std::size_t j = 1; j < factors.size(); ++j) plan.emplace_back(hs.size() - 1, j);
    std::vector<std::future<Run>> jobs;
    for (auto [i, j] : plan) jobs.push_back(std::async(std::launch::async, run, hs[i], factors[j]));
    std::vector<Run> runs;
    for (auto& f : jobs) runs.push_back(f.get());
    for (std::size_t k = 0; k < runs.size(); ++k)
      o.add("series_h" + std::to_string(plan[k].first) + "_dt" + std::to_string(plan[k].second) + ".csv", runs[k].tr.csv());

    const double threshold = cfg.get_double("verify.threshold");
    const double coarse = runs.front().rep.relative_gap;
    bool pass = coarse <= threshold;
    bool any_study = false;
    std::ostringstream rep;
    if (hs.size() >= 3) {
      std::vector<IdentityReport> levels;
      for (std::size_t i = 0; i < hs.size(); ++i) levels.push_back(runs[i].rep);
      RefinementStudy hstudy = h_refinement(levels);
      const double order_min = cfg.get_double("verify.order_min");
      const bool ok = hstudy.monotone() && hstudy.order >= order_min;
      rep << "h refinement at dt = " << factors[0] << " h\n" << hstudy.text();
      rep << "h study: " << (ok ? "pass" : "FAIL") << " (order " << hstudy.order << " vs " << order_min << ")\n";
      o.add("refinement_h.csv", hstudy.csv());
      pass = pass && ok;
      any_study = true;
    }
    if (factors.size() >= 3) {
      RefinementStudy dstudy;
      std::vector<Trajectory> trs;
      dstudy.levels.push_back(runs[hs.size() - 1].rep);
      trs.push_back(runs[hs.size() - 1].tr);
      for (std::size_t j = 1; j < 3; ++j) {
        dstudy.levels.push_back(runs[hs.size() - 1 + j].rep);
        trs.push_back(runs[hs.size() - 1 + j].tr);
      }
      dstudy.order = richardson_dt_order(trs, base.freespace);
      dstudy.order_label = "dt (Richardson)";
      const double order_min = cfg.get_double("verify.dt_order_min");
      const bool ok = dstudy.order >= order_min;
      rep << "dt refinement at h = " << hs.back() << "\n" << dstudy.text();
      rep << "dt study: " << (ok ? "pass" : "FAIL") << " (order " << dstudy.order << " vs " << order_min << ")\n";
      o.add("refinement_dt.csv", dstudy.csv());
      pass = pass && ok;
      any_study = true;
    }
    if (!any_study) rep << "no refinement study: give three grid.h values or three dynamic.dt_factors\n";
    pass = pass && any_study;
    rep << "verdict: " << (pass ? "PASS" : "FAIL") << " (coarsest relative gap " << coarse << " vs "
        << threshold << ")\n";
    o.add("report.txt", rep.str());
    out << rep.str();
    return pass ? kPass : kIdentityFail;
  });
}

int cmd_certify(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  return guarded("certify", cfg, out_dir, err, [&](Outputs& o) {
    check_admissible(cfg, "certify");
    const int n = dimension(cfg);
    const DomainSpec dom = build_domain(cfg);
    const ElasticModuli C = build_moduli(cfg);
    const BodyForcePotential F = build_potential(cfg);
    o.derivation = derivation_text(derivations_for("pohozhaev", n, 1, 1, C.symmetry_class()));
    CertificateOptions copts;
    copts.samples = static_cast<int>(cfg.get_int("certificate.samples"));
    copts.seed = cfg.get_seed();
    copts.mesh_h = cfg.get_double("certificate.mesh_h");
    CertificateReport cert = nonexistence_certificate(F, C, dom, copts);
    std::ostringstream rep;
    rep << cert.str();
    int code = cert.pass() ? kPass : kIdentityFail;

    const long runs = cfg.get_int("static.runs");
    if (runs > 0 && cert.pass()) {
      const double h = positive_list(cfg, "grid.h").front();
      StaticProblem p;
      p.grid = Grid::make(dom, h);
      p.C = C;
      p.F = F;
      p.scheme = pick_scheme(cfg, dom, h, F.is_linear());
      const double zero_tol = cfg.get_double("static.zero_tol");
      const double amp = cfg.get_double("static.init_amplitude");
      CsvTable table({"run", "seed", "iterations", "residual", "energy", "max_abs"});
      rep << "seeded solves at h = " << h << ":\n";
      for (long r = 0; r < runs; ++r) {
        const std::uint64_t seed = cfg.get_seed() + static_cast<std::uint64_t>(r);
        auto sol = solve_static(p, seeded_field(p.grid, n, seed, amp), solve_options(cfg));
        const double m = sol.u.max_abs();
        table.add_row(std::vector<std::string>{std::to_string(r), std::to_string(seed), std::to_string(sol.iterations),
                                               format_double(sol.residual_norm), format_double(sol.energy), format_double(m)});
        const bool collapsed = sol.converged && m <= zero_tol;
        rep << "  run " << r << ": " << sol.status << ", max |u| = " << m << (collapsed ? " (zero)" : "") << "\n";
        if (!sol.converged && !sol.unbounded && code == kPass) code = kSolverFailure;
        if (sol.converged && !collapsed) code = kIdentityFail;
        if (sol.unbounded) code = kIdentityFail;
      }
      o.add("solves.csv", table.str());
    }
    o.add("certificate.txt", rep.str());
    out << rep.str();
    return code;
  });
}

int cmd_selftest(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out, std::ostream& err) {
  return guarded("selftest", cfg, out_dir, err, [&](Outputs& o) {
    check_admissible(cfg, "selftest");
    bool all = true;
    std::ostringstream rep;
    for (const auto& c : run_selftest(cfg.get_seed())) {
      rep << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
      all = all && c.pass;
    }
    o.add("selftest.txt", rep.str());
    out << rep.str();
    return all ? kPass : kIdentityFail;
  });
}

int run_command(const std::string& command, const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& out,
                std::ostream& err) {
  if (command == "derive") return cmd_derive(cfg, out_dir, out, err);
  if (command == "verify-static") return cmd_verify_static(cfg, out_dir, out, err);
  if (command == "verify-dynamic") return cmd_verify_dynamic(cfg, out_dir, out, err);
  if (command == "certify") return cmd_certify(cfg, out_dir, out, err);
  if (command == "selftest") return cmd_selftest(cfg, out_dir, out, err);
  err << "unknown command '" << command << "'\n";
  return kInputError;
}

}  // namespace elid::app
