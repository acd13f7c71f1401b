#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "elid/app/experiment.hpp"
#include "elid/app/selftest.hpp"

using namespace elid;
using namespace elid::app;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("elid-test-" + name);
  fs::remove_all(p);
  return p;
}

struct Run {
  int code;
  std::string out, err;
  fs::path dir;
};

Run run(const std::string& command, const std::string& config, const std::string& name) {
  Run r;
  r.dir = scratch(name);
  std::ostringstream out, err;
  r.code = run_command(command, ExperimentConfig::parse(config), r.dir.string(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

const char* kAnnulus = "n = 3\ndomain.kind = annulus\npotential.kind = power\npotential.p = 8\ngrid.h = 1/8\n";

}  // namespace

TEST_CASE("config parsing") {
  auto cfg = ExperimentConfig::parse("# comment\n\n  n = 3 \ndomain.kind=ball\nmoduli.lambda = 1/2\ngrid.h = 1/8, 0.0625\n");
  CHECK(cfg.get_int("n") == 3);
  CHECK(cfg.get("domain.kind") == "ball");
  CHECK(cfg.get_rational("moduli.lambda") == sym::frac(1, 2));
  CHECK(cfg.get_list("grid.h") == std::vector<double>{0.125, 0.0625});
  CHECK(cfg.get("moduli.mu") == "1");
  CHECK_FALSE(cfg.get_bool("dynamic.freespace"));
  CHECK_THROWS_AS(ExperimentConfig::parse("moduli.nu = 1\n"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::parse("n = 2\nn = 3\n"), ConfigError);
  CHECK_THROWS_WITH_AS(ExperimentConfig::parse("n = 2\nnonsense\n", "x.cfg"), "x.cfg:2: expected key = value", ConfigError);
  CHECK_THROWS_AS((void)ExperimentConfig::parse("n = two\n").get_int("n"), ConfigError);
  CHECK_THROWS_AS((void)ExperimentConfig::parse("dynamic.freespace = maybe\n").get_bool("dynamic.freespace"), ConfigError);
  CHECK_THROWS_AS((void)ExperimentConfig::parse("seed = -3\n").get_seed(), ConfigError);
}

TEST_CASE("overrides and echo round trip") {
  auto cfg = ExperimentConfig::parse("n = 3\n");
  cfg.set_assignment("n=2");
  cfg.set("verify.identity", "morawetz");
  CHECK(cfg.get_int("n") == 2);
  CHECK_THROWS_AS(cfg.set_assignment("n"), ConfigError);
  CHECK_THROWS_AS(cfg.set("bogus", "1"), ConfigError);
  auto again = ExperimentConfig::parse(cfg.echo());
  CHECK(again.echo() == cfg.echo());
  CHECK(again.get("verify.identity") == "morawetz");
}

TEST_CASE("schema document lists every key") {
  const std::string doc = slurp(fs::path(ELID_SOURCE_DIR) / "docs" / "config-schema.md");
  for (const auto& k : config_schema()) CHECK_MESSAGE(doc.find("`" + std::string(k.key) + "`") != std::string::npos, k.key);
}

TEST_CASE("model builders enforce admissibility") {
  CHECK_THROWS_AS(build_moduli(ExperimentConfig::parse("moduli.mu = 0\n")), ConfigError);
  CHECK_THROWS_AS(build_moduli(ExperimentConfig::parse("moduli.mu = 1\nmoduli.lambda = -1\n")), ConfigError);
  std::optional<IsotropicModuli> iso;
  build_moduli(ExperimentConfig::parse("moduli.mu = 2\nmoduli.lambda = -1\n"), &iso);
  REQUIRE(iso);
  CHECK(iso->mu == 2);
  // Only one of the two major-symmetric entries is set.
  CHECK_THROWS_AS(build_moduli(ExperimentConfig::parse("moduli.kind = tensor\nmoduli.entries = 1,1,1,1=1; 1,1,2,2=1\n")), ConfigError);
  auto C = build_moduli(ExperimentConfig::parse(
      "moduli.kind = tensor\nmoduli.entries = 1,1,1,1=1; 1,2,1,2=1; 2,1,2,1=1; 2,2,2,2=1\n"));
  CHECK(C.at(1, 2, 1, 2) == 1);
  CHECK(C.at(1, 2, 2, 1) == 0);
  CHECK_THROWS_AS(build_domain(ExperimentConfig::parse("n = 3\ndomain.kind = star-polygon\n")), ConfigError);
  CHECK_THROWS_AS(build_domain(ExperimentConfig::parse("domain.kind = rectangle\ndomain.lo = 0, 0\n")), ConfigError);
  CHECK_THROWS_AS(build_domain(ExperimentConfig::parse("domain.kind = ball\ndomain.radius = -1\n")), ConfigError);
  CHECK(build_domain(ExperimentConfig::parse("domain.kind = star-polygon\ndomain.vertices = 1,0; 0,1; -1,0; 0,-1\n")).vertices.size() == 4);
  auto P = build_potential(ExperimentConfig::parse("potential.kind = polynomial\npotential.terms = 2:2,0; -1/3:0,4\n"));
  CHECK(P.value({1.0, 1.0}) == doctest::Approx(2.0 - 1.0 / 3));
  CHECK_THROWS_AS(build_potential(ExperimentConfig::parse("potential.kind = polynomial\npotential.terms = 1:2\n")), ConfigError);
  CHECK_THROWS_AS(build_potential(ExperimentConfig::parse("potential.kind = sine\n")), ConfigError);
  CHECK_THROWS_AS(check_admissible(ExperimentConfig::parse("verify.identity = hamiltonian\nidentity.a = 1/2\n"), "derive"), ConfigError);
  CHECK_THROWS_AS(check_admissible(ExperimentConfig::parse("verify.identity = hamiltonian\nn = 3\n"), "derive"), ConfigError);
  CHECK_NOTHROW(check_admissible(ExperimentConfig::parse("verify.identity = hamiltonian\nidentity.a = 1/2\nidentity.b = 3/2\n"), "derive"));
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ull);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cull);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ull);
}

TEST_CASE("output directory precedence") {
  ::unsetenv("ELID_OUTPUT_DIR");
  ExperimentConfig cfg;
  CHECK(resolve_output_dir(cfg) == "elid-out");
  ::setenv("ELID_OUTPUT_DIR", "from-env", 1);
  CHECK(resolve_output_dir(cfg) == "from-env");
  cfg.set("output.dir", "from-config");
  CHECK(resolve_output_dir(cfg) == "from-config");
  CHECK(resolve_output_dir(cfg, "from-flag") == "from-flag");
  ::unsetenv("ELID_OUTPUT_DIR");
}

TEST_CASE("derive prints the interior densities") {
  auto r = run("derive", "verify.identity = pohozhaev\nn = 3\n", "derive-static");
  CHECK(r.code == kPass);
  CHECK(r.out.find("interior: 1/2*u1*F_u1 + 1/2*u2*F_u2 + 1/2*u3*F_u3 - 3*F\n") != std::string::npos);
  const std::string log = slurp(r.dir / "derivation.log");
  CHECK(slurp(r.dir / "manifest.txt").find("derivation log fnv1a64: " + [&] {
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << fnv1a64(log);
    return os.str();
  }()) != std::string::npos);
  CHECK(run("derive", "verify.identity = morawetz\n", "derive-dyn").out.find("interior: 1/2*u1*F_u1 + 1/2*u2*F_u2 - 3*F\n") !=
        std::string::npos);
  CHECK(run("derive", "verify.identity = hamiltonian\nn = 3\n", "derive-odd").code == kInputError);
  CHECK(run("derive", "verify.identity = noether\n", "derive-bad").code == kInputError);
}

TEST_CASE("derivation logs match the golden files") {
  const fs::path golden = fs::path(ELID_SOURCE_DIR) / "tests" / "golden";
  CHECK(derivation_text(derivations_for("morawetz", 2, 1, 1, sym::ModuliSymmetry::Full)) == slurp(golden / "morawetz_n2.log"));
  CHECK(derivation_text(derivations_for("hamiltonian", 2, 1, 1, sym::ModuliSymmetry::Full)) ==
        slurp(golden / "hamiltonian_n2_a1_b1.log"));
}

TEST_CASE("certify exit codes name the failing clause") {
  auto bad_p = run("certify", "n = 3\npotential.kind = power\npotential.p = 2\n", "cert-p2");
  CHECK(bad_p.code == kIdentityFail);
  CHECK(bad_p.out.find("FAIL (clause ii)") != std::string::npos);
  auto annulus = run("certify", kAnnulus, "cert-annulus");
  CHECK(annulus.code == kIdentityFail);
  CHECK(annulus.out.find("FAIL (clause iv)") != std::string::npos);
  auto good = run("certify", "n = 3\npotential.kind = power\npotential.p = 8\ngrid.h = 1/8\nstatic.runs = 2\n", "cert-p8");
  CHECK(good.code == kPass);
  CHECK(slurp(good.dir / "solves.csv").rfind("run,seed,iterations,residual,energy,max_abs\n", 0) == 0);
}

TEST_CASE("verify-static exit codes") {
  CHECK(run("verify-static", std::string(kAnnulus) + "verify.require_star_shaped = true\n", "vs-annulus").code == kInputError);
  CHECK(run("verify-static", "moduli.mu = -1\n", "vs-mu").code == kInputError);
  auto man = run("verify-static",
                 "domain.kind = rectangle\ndomain.lo = 0, 0\ndomain.hi = 1, 1\nstatic.mode = manufactured\ngrid.h = 1/8, 1/16, 1/32\n",
                 "vs-man");
  CHECK(man.code == kPass);
  CHECK(slurp(man.dir / "refinement.csv").rfind("identity,h,dt,lhs,rhs,gap,relative_gap,order\npohozhaev-generalized,", 0) == 0);
  auto off_cube = run("verify-static", "domain.kind = ball\nstatic.mode = manufactured\n", "vs-offcube");
  CHECK(off_cube.code == kInputError);
  // Two levels cannot show a monotone trend.
  auto two = run("verify-static", "static.mode = eigen\ngrid.h = 1/8, 1/16\n", "vs-two");
  CHECK(two.code == kIdentityFail);
  auto stalled = run("verify-static", "static.mode = solve\npotential.kind = power\npotential.p = 4\nstatic.max_iter = 2\ngrid.h = 1/8\n",
                     "vs-stall");
  CHECK(stalled.code == kSolverFailure);
}

TEST_CASE("verify-dynamic exit codes and reproducibility") {
  const std::string ham =
      "domain.kind = rectangle\ndomain.lo = 0, 0\ndomain.hi = 1, 1\nverify.identity = hamiltonian\ndynamic.horizon = 0.25\n"
      "dynamic.samples = 4\ngrid.h = 1/32\n";
  const std::string factors = "dynamic.dt_factors = 1/4, 1/8, 1/16\n";
  auto a = run("verify-dynamic", ham + factors, "vd-a");
  auto b = run("verify-dynamic", ham + factors, "vd-b");
  CHECK(a.code == kPass);
  for (const auto& e : fs::directory_iterator(a.dir)) CHECK(slurp(e.path()) == slurp(b.dir / e.path().filename()));
  CHECK(fs::exists(a.dir / "series_h0_dt2.csv"));
  CHECK(run("verify-dynamic", ham + factors + "identity.a = 1/2\n", "vd-ab").code == kInputError);
  CHECK(run("verify-dynamic", "domain.kind = rectangle\ndomain.lo = -1, -1\ndomain.hi = 1, 1\ndynamic.init = bump\n"
                              "dynamic.freespace = true\ndynamic.horizon = 2\n",
            "vd-window")
            .code == kInputError);
  CHECK(run("verify-dynamic", ham + "dynamic.dt_factors = 4\n", "vd-cfl").code == kInputError);
  CHECK(run("verify-dynamic", "dynamic.init = noise\n", "vd-init").code == kInputError);
}

TEST_CASE("initial data from a file") {
  fs::path dir = scratch("init-file");
  fs::create_directories(dir);
  std::ofstream(dir / "init.csv") << "x1,x2,u1,u2,ut1,ut2\n0.5,0.5,0.1,0,0,0\n0.25,0.5,0.05,0,0,0\n";
  auto r = run("verify-dynamic",
               "domain.kind = rectangle\ndomain.lo = 0, 0\ndomain.hi = 1, 1\ndynamic.init = file\ninit.file = " + (dir / "init.csv").string() +
                   "\ndynamic.horizon = 0.125\ndynamic.samples = 2\ngrid.h = 1/8, 1/16, 1/32\n",
               "vd-file");
  CHECK(r.code != kInputError);
  CHECK(fs::exists(r.dir / "refinement_h.csv"));
  std::ofstream(dir / "bad.csv") << "0.3,0.5,0.1,0,0,0\n";
  CHECK(run("verify-dynamic", "dynamic.init = file\ninit.file = " + (dir / "bad.csv").string() + "\n", "vd-badfile").code == kInputError);
}

TEST_CASE("selftest command") {
  auto r = run("selftest", "seed = 3\n", "selftest");
  CHECK(r.code == kPass);
  CHECK(r.out.find("PASS euler operator annihilates divergences: 100/100") != std::string::npos);
}
