// One PASS/FAIL line per acceptance criterion. Exit status is the number of failures.
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "elid/app/experiment.hpp"
#include "elid/app/selftest.hpp"
#include "elid/dynamics/functionals.hpp"
#include "elid/symbolic/derivations.hpp"
#include "elid/symbolic/random_expr.hpp"

using namespace elid;
using namespace elid::app;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = ELID_SOURCE_DIR;
fs::path g_scratch;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sci(double x) {
  std::ostringstream os;
  os << std::setprecision(3) << x;
  return os.str();
}

struct Outcome {
  bool pass{true};
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [x]");
  }
};

struct Run {
  int code;
  fs::path dir;
};

Run run(const std::string& command, const std::string& config_file, const std::vector<std::string>& overrides,
        const std::string& tag) {
  ExperimentConfig cfg = ExperimentConfig::load((kSource / "configs" / config_file).string());
  for (const auto& o : overrides) cfg.set_assignment(o);
  Run r{0, g_scratch / tag};
  fs::remove_all(r.dir);
  std::ostringstream out, err;
  r.code = run_command(command, cfg, r.dir.string(), out, err);
  return r;
}

/// Rows of a refinement CSV as (h, dt, relative_gap, order).
struct Level {
  double h, dt, rel, order;
};

std::vector<Level> read_refinement(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<Level> out;
  while (std::getline(in, line)) {
    std::vector<std::string> c;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) c.push_back(cell);
    if (c.size() != 8) continue;
    out.push_back({std::stod(c[1]), std::stod(c[2]), std::stod(c[6]), std::stod(c[7])});
  }
  return out;
}

bool strictly_decreasing(const std::vector<Level>& ls) {
  for (std::size_t i = 1; i < ls.size(); ++i)
    if (!(ls[i].rel < ls[i - 1].rel)) return false;
  return ls.size() >= 2;
}

bool near(double a, double b) { return std::abs(a - b) <= 1e-12 * std::abs(b); }

Outcome ac1() {
  Outcome o;
  using namespace sym;
  int zero = 0, total = 0;
  for (int n : {2, 3}) {
    std::mt19937_64 rng(2024 + static_cast<unsigned>(n));
    const JetSpace spaces[] = {{n, false, 1}, {n, true, 1}, {n, true, 2}};
    for (int trial = 0; trial < 100; ++trial) {
      const JetSpace& sp = spaces[trial % 3];
      VectorFieldGenerator v = random_generator(rng, sp);
      DiffExpr L = random_lagrangian(rng, sp);
      zero += noether_residual(v, L).is_zero() ? 1 : 0;
      ++total;
    }
  }
  o.require(zero == total, "random pairs " + std::to_string(zero) + "/" + std::to_string(total) + " exact zero");
  bool fixed = true;
  for (int n : {2, 3}) {
    fixed = fixed && noether_residual(static_dilation(n), static_lagrangian(n, symbolic_moduli())).is_zero();
    fixed = fixed && noether_residual(dynamic_dilation(n), dynamic_lagrangian(n, symbolic_moduli())).is_zero();
  }
  for (auto [a, b] : {std::pair{frac(1), frac(1)}, std::pair{frac(1, 2), frac(3, 2)}})
    fixed = fixed && noether_residual(hamiltonian_dilation(2, a, b), coupled_lagrangian_quoted(2, symbolic_moduli())).is_zero();
  o.require(fixed, "static, dynamic and coupled scaling pairs exact zero");
  return o;
}

Outcome ac2() {
  Outcome o;
  using namespace sym;
  for (int n : {2, 3}) {
    o.require(derive_static(n).interior() == reference::static_interior(n), "static interior n=" + std::to_string(n));
    o.require(derive_dynamic(n).interior() == reference::dynamic_interior(n), "dynamic interior n=" + std::to_string(n));
  }
  for (auto [a, b] : {std::pair{frac(1), frac(1)}, std::pair{frac(1, 2), frac(3, 2)}}) {
    const DiffExpr diff = derive_coupled(2, a, b).interior() - reference::coupled_interior(2, a, b);
    std::ostringstream what;
    what << "coupled interior n=2 a=" << a << " b=" << b;
    if (!diff.is_zero()) what << " (machine minus printed: " << diff.str() << ")";
    o.require(diff.is_zero(), what.str());
  }
  return o;
}

Outcome ac3() {
  Outcome o;
  int agree = 0, total = 0;
  for (int n : {2, 3})
    for (auto [mu, lam] : {std::pair{1, 0}, std::pair{1, 1}, std::pair{2, -1}}) {
      sym::JetSpace sp{n, false, 1};
      const ElasticModuli C = moduli_from_lame({mu, lam}, n);
      const sym::DiffExpr strain = sym::frac(1, 2) * sym::strain_form(n, C.symbolic());
      const sym::DiffExpr lame = sym::lame_energy(n, mu, lam);
      for (int i = 1; i <= n; ++i) {
        agree += sym::euler_operator(strain, sym::Field::U, i, sp) == sym::euler_operator(lame, sym::Field::U, i, sp) ? 1 : 0;
        ++total;
      }
    }
  o.require(agree == total, "Euler expressions equal " + std::to_string(agree) + "/" + std::to_string(total));
  return o;
}

Outcome ac4() {
  Outcome o;
  Run r = run("verify-static", "disk-eigen.cfg", {}, "ac4");
  o.require(r.code == kPass, "exit " + std::to_string(r.code));
  auto ls = read_refinement(r.dir / "refinement.csv");
  const bool grids = ls.size() == 3 && near(ls[0].h, 1.0 / 32) && near(ls[1].h, 1.0 / 64) && near(ls[2].h, 1.0 / 128);
  o.require(grids, "h = 1/32, 1/64, 1/128");
  if (!grids) return o;
  o.require(ls[1].rel <= 5e-2, "rel gap at 1/64 " + sci(ls[1].rel) + " <= 5e-2");
  o.require(strictly_decreasing(ls), "monotone " + sci(ls[0].rel) + " > " + sci(ls[1].rel) + " > " + sci(ls[2].rel));
  o.require(ls[0].order >= 1, "order " + sci(ls[0].order) + " >= 1");
  return o;
}

Outcome ac5() {
  Outcome o;
  Run r = run("verify-static", "square-manufactured.cfg", {"grid.h=1/16, 1/32, 1/64, 1/128"}, "ac5");
  o.require(r.code == kPass, "exit " + std::to_string(r.code));
  auto ls = read_refinement(r.dir / "refinement.csv");
  const bool grids = ls.size() == 4 && near(ls.back().h, 1.0 / 128);
  o.require(grids, "4 levels to h = 1/128");
  if (!grids) return o;
  o.require(ls.back().rel <= 1e-2, "rel gap at 1/128 " + sci(ls.back().rel) + " <= 1e-2");
  o.require(ls[0].order >= 1.5, "order over 3 refinements " + sci(ls[0].order) + " >= 1.5");
  return o;
}

Outcome ac6() {
  Outcome o;
  Run r = run("certify", "ball-p8.cfg", {}, "ac6");
  o.require(r.code == kPass, "exit " + std::to_string(r.code));
  o.require(slurp(r.dir / "certificate.txt").rfind("certificate: PASS", 0) == 0, "four clauses pass");
  std::ifstream in(r.dir / "solves.csv");
  std::string line;
  std::getline(in, line);
  int runs = 0, zero = 0;
  double worst = 0;
  while (std::getline(in, line)) {
    const double m = std::stod(line.substr(line.rfind(',') + 1));
    worst = std::max(worst, m);
    ++runs;
    zero += m <= 1e-8 ? 1 : 0;
  }
  o.require(runs == 5 && zero == 5, std::to_string(zero) + "/5 seeded solves with max|u| " + sci(worst) + " <= 1e-8");
  Run p2 = run("certify", "ball-p8.cfg", {"potential.p=2", "static.runs=0"}, "ac6-p2");
  o.require(p2.code == kIdentityFail && slurp(p2.dir / "certificate.txt").rfind("certificate: FAIL (clause ii)", 0) == 0,
            "|s|^2 control fails clause ii");
  Run ann = run("certify", "annulus.cfg", {}, "ac6-annulus");
  o.require(ann.code == kIdentityFail && slurp(ann.dir / "certificate.txt").rfind("certificate: FAIL (clause iv)", 0) == 0,
            "annulus control fails clause iv");
  return o;
}

/// Shared by the two dynamic identities: coarsest rel gap at dt = h/4 and the dt order.
void dynamic_checks(Outcome& o, const Run& r, double h) {
  o.require(r.code == kPass, "exit " + std::to_string(r.code));
  auto ls = read_refinement(r.dir / "refinement_dt.csv");
  const bool plan = ls.size() == 3 && near(ls[0].h, h) && near(ls[0].dt, h / 4);
  o.require(plan, "dt = h/4, h/8, h/16 at h = 1/" + std::to_string(static_cast<int>(std::lround(1 / h))));
  if (!plan) return;
  o.require(ls[0].rel <= 1e-2, "max window gap " + sci(ls[0].rel) + " <= 1e-2");
  o.require(ls[0].order >= 2, "dt order (Richardson) " + sci(ls[0].order) + " >= 2");
}

Outcome ac7() {
  Outcome o;
  Run r = run("verify-dynamic", "bump-freespace.cfg", {}, "ac7");
  dynamic_checks(o, r, 1.0 / 128);
  const std::string rep = slurp(r.dir / "report.txt");
  o.require(rep.find("before contact at") != std::string::npos, "run stops inside the contact window");
  return o;
}

Outcome ac8() {
  Outcome o;
  Run r = run("verify-dynamic", "square-hamiltonian.cfg", {"grid.h=1/128"}, "ac8");
  dynamic_checks(o, r, 1.0 / 128);
  Run ab = run("verify-dynamic", "square-hamiltonian.cfg", {"identity.a=1/2"}, "ac8-ab");
  o.require(ab.code == kInputError, "a+b != 2 rejected");
  Run n3 = run("verify-dynamic", "square-hamiltonian.cfg",
               {"n=3", "domain.lo=0, 0, 0", "domain.hi=1, 1, 1", "grid.h=1/8"}, "ac8-n3");
  o.require(n3.code == kInputError, "n = 3 rejected");
  return o;
}

Outcome ac9() {
  Outcome o;
  const fs::path golden = kSource / "tests" / "golden";
  const std::string m1 = derivation_text(derivations_for("morawetz", 2, 1, 1, sym::ModuliSymmetry::Full));
  const std::string v5 = derivation_text(derivations_for("hamiltonian", 2, 1, 1, sym::ModuliSymmetry::Full));
  o.require(m1 == slurp(golden / "morawetz_n2.log"), "dilational log matches golden");
  o.require(v5 == slurp(golden / "hamiltonian_n2_a1_b1.log"), "coupled log matches golden");
  for (const std::string* log : {&m1, &v5})
    o.require(log->find("\nflux:\n") != std::string::npos && log->find("\ntable: ") != std::string::npos &&
                  log->find("reference") != std::string::npos,
              "flux coefficients and printed-vs-derived table present");

  const ElasticModuli C = moduli_from_lame({1, 0}, 2);
  GridPtr g = Grid::make(DomainSpec::rectangle({0, 0}, {1, 1}), 1.0 / 8);
  const MorawetzFunctionals fm(g, DynamicModel::potential(C, BodyForcePotential::zero()));
  const sym::Derivation& dm = fm.derivation();
  const sym::Derivation machine_m = sym::derive_dynamic(2, C.symmetry_class());
  o.require(dm.interior() == machine_m.interior() && dm.density == machine_m.density && dm.boundary == machine_m.boundary,
            "dilational functionals use the machine derivation");
  const MorawetzFunctionals fh(g, DynamicModel::hamiltonian(C, CouplingPotential::bilinear(1)));
  const sym::Derivation& dh = fh.derivation();
  const sym::Derivation machine_h = sym::derive_coupled(2, 1, 1, false, C.symmetry_class());
  o.require(dh.interior() == machine_h.interior() && dh.density == machine_h.density && dh.boundary == machine_h.boundary &&
                dh.euler_sign == -1,
            "coupled functionals use the machine derivation");
  return o;
}

Outcome ac10() {
  Outcome o;
  for (const auto& c : run_selftest()) o.require(c.pass, c.name + ": " + c.detail);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  g_scratch = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "elid-acceptance";
  fs::create_directories(g_scratch);
  struct Criterion {
    const char* id;
    double budget;  ///< seconds; 0 means no runtime bound
    std::function<Outcome()> body;
  };
  const Criterion criteria[] = {
      {"AC-1", 10, ac1}, {"AC-2", 5, ac2},    {"AC-3", 5, ac3},   {"AC-4", 60, ac4},  {"AC-5", 60, ac5},
      {"AC-6", 120, ac6}, {"AC-7", 120, ac7}, {"AC-8", 120, ac8}, {"AC-9", 0, ac9}, {"AC-10", 30, ac10},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.body();
    } catch (const std::exception& e) {
      o.require(false, std::string("threw: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.budget > 0) o.require(secs < c.budget, "runtime " + sci(secs) + " s < " + sci(c.budget) + " s");
    failures += o.pass ? 0 : 1;
    std::cout << c.id << " " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail << std::endl;
  }
  std::cout << (10 - failures) << "/10 criteria pass" << std::endl;
  return failures;
}
