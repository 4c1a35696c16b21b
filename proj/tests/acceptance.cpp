// Acceptance harness: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "qtl/io.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace qtl;
using namespace qtl::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

std::uint64_t g_seed = 0;  // offset added to every suite seed

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(2) << v;
  return os.str();
}

std::string fix(double v, int p = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(p) << v;
  return os.str();
}

Outcome example_reproduction() {
  Outcome o;
  const auto t0 = Clock::now();
  const QTensor a = io::read_tensor(fs::path(QTL_DATA_DIR) / "example1_A.qt");
  const QTensor e = io::read_tensor(fs::path(QTL_DATA_DIR) / "example1_E.qt");
  const PerturbReport r = compute_bounds(a, e);
  const double elapsed = seconds_since(t0);
  const auto& b = *r.bounds;

  struct Row {
    const char* name;
    double got;
    double want;
  };
  const Row rows[] = {
      {"||A^D E||", r.norms.ad_e, 0.4433},  {"||A^D||", r.norms.ad, 0.3938},
      {"||B^D||", r.norms.bd, 0.5150},      {"||B^D-A^D||", r.norms.diff, 0.1737},
      {"lower", b.lower, 0.2728},           {"upper", b.upper, 0.7073},
      {"rel err", b.relative_error, 0.4412}, {"first bound", b.rel_bound, 0.7964},
      {"kappa bound", b.kappa_bound.value_or(-1.0), 1.0047},
  };
  double worst = 0.0;
  for (const auto& row : rows) {
    const double d = std::abs(row.got - row.want);
    worst = std::max(worst, d);
    if (d > 5e-3) {
      o.pass = false;
      o.detail += std::string(row.name) + "=" + fix(row.got) + " (want " + fix(row.want) + ") ";
    }
  }
  if (r.index != 1) {
    o.pass = false;
    o.detail += "index=" + std::to_string(r.index) + " ";
  }
  if (elapsed >= 1.0) o.pass = false;
  o.detail += "max |diff| " + sci(worst) + ", index " + std::to_string(r.index) + ", " +
              fix(elapsed, 3) + " s";
  return o;
}

Outcome homomorphism() {
  Outcome o;
  Rng rng(1001 + g_seed);
  const auto t0 = Clock::now();
  double prod = 0.0, adj = 0.0, pw = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Index n1 = uniform_int(rng, 1, 4), n2 = uniform_int(rng, 1, 4);
    const Index n4 = uniform_int(rng, 1, 4), n3 = uniform_int(rng, 1, 5);
    const QTensor a = random_tensor(rng, n1, n2, n3);
    const QTensor b = random_tensor(rng, n2, n4, n3);
    prod = std::max(prod, rel_residual((a * b).bcirc_z(), a.bcirc_z() * b.bcirc_z()));
    adj = std::max(adj, rel_residual(qt_transpose(a).bcirc_z(), a.bcirc_z().adjoint()));
    const QTensor s = random_tensor(rng, n1, n1, n3);
    const int k = uniform_int(rng, 0, 4);
    pw = std::max(pw, rel_residual(qt_power(s, k).bcirc_z(), power(s.bcirc_z(), k)));
  }
  const double elapsed = seconds_since(t0);
  o.pass = prod <= 1e-10 && adj <= 1e-12 && pw <= 1e-9 && elapsed < 30.0;
  o.detail = "product " + sci(prod) + ", adjoint " + sci(adj) + ", power " + sci(pw) + ", " +
             fix(elapsed, 2) + " s";
  return o;
}

Outcome generalized_inverses() {
  Outcome o;
  Rng rng(1002 + g_seed);
  double mp = 0.0, dz = 0.0, routes = 0.0;
  for (int i = 0; i < 100; ++i) {
    const PlantedTensor p = random_planted(rng, i % 3);
    mp = std::max(mp, pinv_residuals(p.a, qt_pinv(p.a)).max());
    const QTensor x = qt_drazin(p.a);
    dz = std::max(dz, drazin_residuals(p.a, x, p.index).max());
    const DrazinRoutes r = qt_drazin_routes(p.a);
    routes = std::max(routes, tensor_distance(r.tensor_formula, r.per_block) /
                                  std::max(1.0, r.tensor_formula.frobenius_norm()));
  }
  o.pass = mp <= 1e-8 && dz <= 1e-7 && routes <= 1e-7;
  o.detail = "Penrose " + sci(mp) + ", Drazin " + sci(dz) + ", routes " + sci(routes);
  return o;
}

Outcome planted_index() {
  Outcome o;
  Rng rng(1003 + g_seed);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const PlantedTensor p = random_planted(rng, i % 3);
    const Index blocks = qt_index(p.a, SpectralOptions{false});
    const Index stab = qt_index_by_rank_stabilization(p.a);
    if (blocks != p.index || stab != p.index) ++mismatches;
  }
  o.pass = mismatches == 0;
  o.detail = std::to_string(mismatches) + " mismatches in 200 cases";
  return o;
}

Outcome l_invariance() {
  Outcome o;
  Rng rng(1004 + g_seed);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const PlantedTensor p = random_planted(rng, i % 3);
    const int k = p.index;
    const QTensor x0 = qt_drazin(p.a, k);
    const QTensor x1 = qt_drazin(p.a, k + 1);
    const QTensor x2 = qt_drazin(p.a, k + 2);
    const double s = std::max(1.0, x0.frobenius_norm());
    worst = std::max({worst, tensor_distance(x0, x1) / s, tensor_distance(x0, x2) / s,
                      tensor_distance(x1, x2) / s});
  }
  o.pass = worst <= 1e-7;
  o.detail = "max relative difference " + sci(worst);
  return o;
}

Outcome perturbation_suite() {
  Outcome o;
  Rng rng(1005 + g_seed);
  double worst = 0.0;
  int delta_cases = 0, escapes = 0, unverified = 0;
  for (int i = 0; i < 50; ++i) {
    PlantedTensor p;
    do {
      p = random_planted(rng, 1 + i % 2);
    } while (p.drazin.frobenius_norm() < 1e-3);
    const QTensor e = core_perturbation(rng, p.a, qt_drazin(p.a), uniform_real(rng, 0.1, 0.9));
    const PerturbReport r = perturb_report(p.a, e);
    if (!r.identities_verified) ++unverified;
    worst = std::max({worst, r.projector_residual, r.diff_residual_left, r.diff_residual_right,
                      r.resolvent_residual_left, r.resolvent_residual_right});
    if (r.bounds && r.bounds->delta_holds) {
      ++delta_cases;
      if (!r.bounds->norm_bounds_hold) ++escapes;
    }
  }
  o.pass = unverified == 0 && worst <= 1e-6 && escapes == 0;
  o.detail = "max identity residual " + sci(worst) + ", Delta held in " +
             std::to_string(delta_cases) + "/50, bound escapes " + std::to_string(escapes);
  return o;
}

Outcome norm_radius() {
  Outcome o;
  Rng rng(1006 + g_seed);
  const SpectralOptions fast{false};
  int radius = 0, submult = 0, spectrum = 0;
  for (int i = 0; i < 200; ++i) {
    const Index n1 = uniform_int(rng, 1, 4), n2 = uniform_int(rng, 1, 4);
    const Index n3 = uniform_int(rng, 1, 5);
    const QTensor a = random_tensor(rng, n1, n2, n3);
    const QTensor b = random_tensor(rng, n2, n1, n3);
    const QTensor ab = a * b;
    const QTensor ba = b * a;
    const double na = qt_spectral_norm(a, fast), nb = qt_spectral_norm(b, fast);
    const double nab = qt_spectral_norm(ab, fast);
    if (qt_spectral_radius(ab, fast) > nab * (1 + 1e-12)) ++radius;
    if (nab > na * nb * (1 + 1e-12)) ++submult;
    if (!same_nonzero_spectrum(chi_eigenvalues(ab.bcirc_z()), chi_eigenvalues(ba.bcirc_z()),
                               na * nb, 1e-8)) {
      ++spectrum;
    }
  }
  o.pass = radius == 0 && submult == 0 && spectrum == 0;
  o.detail = "violations: radius " + std::to_string(radius) + ", submultiplicativity " +
             std::to_string(submult) + ", spectrum " + std::to_string(spectrum);
  return o;
}

int run(const std::string& cmd) {
  const int status = std::system((cmd + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_end_to_end() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / ("qtl_acceptance_" + std::to_string(getpid()));
  fs::create_directories(dir);
  const std::string cli = QTL_CLI_PATH;
  const std::string a = (fs::path(QTL_DATA_DIR) / "example1_A.qt").string();
  const std::string e = (fs::path(QTL_DATA_DIR) / "example1_E.qt").string();
  const std::string ad = (dir / "AD.qt").string();

  const int drazin = run(cli + " drazin " + a + " -o " + ad);
  const int verify = run(cli + " verify " + a + " " + ad + " --as drazin");
  std::string runs[4];
  int perturb = 0;
  for (int i = 0; i < 4; ++i) {
    const fs::path out = dir / ("report" + std::to_string(i));
    const char* fmt = i < 2 ? "json" : "text";
    perturb = std::max(perturb, run(cli + " --reproducible perturb " + a + " " + e +
                                    " --format " + fmt + " -o " + out.string()));
    runs[i] = slurp(out);
  }
  const int inverse = run(cli + " inverse " + a + " -o " + (dir / "inv.qt").string());

  double ad_norm = -1.0;
  try {
    ad_norm = nlohmann::json::parse(runs[0]).at("norm.AD").get<double>();
  } catch (const std::exception&) {
  }
  const bool same = runs[0] == runs[1] && runs[2] == runs[3] && !runs[0].empty();
  fs::remove_all(dir);

  o.pass = drazin == 0 && verify == 0 && perturb == 0 && inverse == 3 &&
           std::abs(ad_norm - 0.3938) <= 5e-3 && same;
  o.detail = "drazin " + std::to_string(drazin) + ", verify " + std::to_string(verify) +
             ", perturb " + std::to_string(perturb) + " (||A^D||_s " + fix(ad_norm) +
             "), inverse " + std::to_string(inverse) + ", reproducible " + (same ? "yes" : "no");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) g_seed = std::stoull(argv[1]);
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 example reproduction", example_reproduction},
      {"2 homomorphism suite", homomorphism},
      {"3 generalized-inverse axioms", generalized_inverses},
      {"4 index from planted blocks", planted_index},
      {"5 l-invariance", l_invariance},
      {"6 perturbation identities and bounds", perturbation_suite},
      {"7 norm and radius properties", norm_radius},
      {"8 cli end-to-end", cli_end_to_end},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
