// qtl: command-line front end for quaternion tensor algebra.

#include <chrono>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "qtl/errors.hpp"
#include "qtl/io.hpp"
#include "qtl/perturb.hpp"
#include "qtl/spectral.hpp"

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kInput = 2, kHypothesis = 3, kInconsistent = 4 };

struct Globals {
  double atol = 1e-10;
  double rtol = 1e-7;
  bool paranoid = false;
  std::uint64_t seed = 20240601;
  bool reproducible = false;
};

qtl::SpectralOptions spectral(const Globals& g) { return qtl::SpectralOptions{g.paranoid}; }

void emit(const qtl::QTensor& t, const std::string& out) {
  if (out.empty()) {
    std::cout << qtl::io::format_tensor(t);
  } else {
    qtl::io::write_tensor(t, out);
  }
}

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

std::string sci(double v) {
  std::ostringstream os;
  os << std::scientific << std::setprecision(3) << v;
  return os.str();
}

int cmd_info(const Globals& g, const std::string& path) {
  const auto a = qtl::io::read_tensor(path);
  const auto opts = spectral(g);
  const auto rk = qtl::qt_rank(a, opts);
  std::cout << "dims: [" << a.n1() << ", " << a.n2() << ", " << a.n3() << "]\n";
  std::cout << "tubal_rank: " << rk.tubal_rank << "\n";
  std::cout << "bcirc_rank: " << rk.bcirc_rank << "\n";
  if (a.has_square_slices()) {
    std::cout << "qt_index: " << qtl::qt_index(a, opts) << "\n";
  }
  std::cout << "spectral_norm: " << std::setprecision(17) << qtl::qt_spectral_norm(a, opts) << "\n";
  if (a.has_square_slices()) {
    std::cout << "spectral_radius: " << qtl::qt_spectral_radius(a, opts) << "\n";
  }
  return kOk;
}

int cmd_verify(const Globals& g, const std::string& a_path, const std::string& x_path,
               const std::string& as) {
  const auto a = qtl::io::read_tensor(a_path);
  const auto x = qtl::io::read_tensor(x_path);
  const double limit = g.atol + g.rtol;
  double worst = 0.0;
  if (as == "pinv") {
    const auto r = qtl::pinv_residuals(a, x);
    std::cout << "AXA=A: " << sci(r.axa) << "\n"
              << "XAX=X: " << sci(r.xax) << "\n"
              << "(AX)*=AX: " << sci(r.ax_sym) << "\n"
              << "(XA)*=XA: " << sci(r.xa_sym) << "\n";
    worst = r.max();
  } else {
    const int k = static_cast<int>(qtl::qt_index(a, spectral(g)));
    const auto r = qtl::drazin_residuals(a, x, k);
    std::cout << "k: " << k << "\n"
              << "A^kXA=A^k: " << sci(r.akxa) << "\n"
              << "XAX=X: " << sci(r.xax) << "\n"
              << "AX=XA: " << sci(r.commute) << "\n";
    worst = r.max();
  }
  std::cout << "max: " << sci(worst) << "\n";
  if (worst > limit) {
    std::cerr << "qtl: verify: residual " << sci(worst) << " exceeds " << sci(limit) << "\n";
    return kHypothesis;
  }
  return kOk;
}

int perturb_exit(const qtl::PerturbReport& r) {
  if (r.failed_hypothesis == "evaluation") return kInconsistent;
  if (!r.hypotheses_hold) return kHypothesis;
  if (r.identities_computed && !r.identities_verified) return kInconsistent;
  if (r.trivial) return kOk;
  if (!r.identities_computed) return kInconsistent;
  if (!r.bounds) return kHypothesis;
  if (r.bounds->delta_holds && !(r.bounds->norm_bounds_hold && r.bounds->relative_chain_holds)) {
    return kInconsistent;
  }
  return kOk;
}

int cmd_perturb(const Globals& g, const std::string& a_path, const std::string& e_path,
                const std::string& format, const std::string& out) {
  const auto a = qtl::io::read_tensor(a_path);
  const auto e = qtl::io::read_tensor(e_path);
  qtl::PerturbOptions opts;
  opts.spectral = spectral(g);
  const auto report = qtl::perturb_report(a, e, opts);

  qtl::io::ReportMeta meta;
  meta.input_digests["A"] = qtl::io::file_digest(a_path);
  meta.input_digests["E"] = qtl::io::file_digest(e_path);
  meta.tolerances["atol"] = g.atol;
  meta.tolerances["rtol"] = g.rtol;
  if (!g.reproducible) meta.timestamp = utc_now();

  const std::string text = format == "json" ? qtl::io::render_report_json(report, meta)
                                            : qtl::io::render_report_text(report, meta);
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out, std::ios::binary);
    if (!f) throw qtl::Error("cannot write " + out);
    f << text;
  }
  const int code = perturb_exit(report);
  if (code != kOk) {
    for (const auto& n : report.notes) std::cerr << "qtl: perturb: " << n << "\n";
  }
  return code;
}

qtl::QTensor random_tensor(std::mt19937_64& rng, qtl::Index n1, qtl::Index n2, qtl::Index n3) {
  std::normal_distribution<double> nd;
  std::vector<qtl::QMat> slices;
  for (qtl::Index t = 0; t < n3; ++t) {
    qtl::QMat m(n1, n2);
    for (qtl::Index r = 0; r < n1; ++r) {
      for (qtl::Index c = 0; c < n2; ++c) m.set(r, c, qtl::Quat(nd(rng), nd(rng), nd(rng), nd(rng)));
    }
    slices.push_back(std::move(m));
  }
  return qtl::QTensor(std::move(slices));
}

int cmd_selftest(const Globals& g, int cases) {
  std::mt19937_64 rng(g.seed);
  std::uniform_int_distribution<int> dim(1, 4);
  std::uniform_int_distribution<int> tubes(1, 5);
  double hom = 0.0;
  double mp = 0.0;
  for (int i = 0; i < cases; ++i) {
    const qtl::Index n1 = dim(rng), n2 = dim(rng), n4 = dim(rng), n3 = tubes(rng);
    const auto a = random_tensor(rng, n1, n2, n3);
    const auto b = random_tensor(rng, n2, n4, n3);
    const auto lhs = (a * b).bcirc_z();
    const auto rhs = a.bcirc_z() * b.bcirc_z();
    hom = std::max(hom, (lhs - rhs).frobenius_norm() / std::max(1.0, rhs.frobenius_norm()));
    mp = std::max(mp, qtl::pinv_residuals(a, qtl::qt_pinv(a, spectral(g))).max());
  }
  std::cout << "cases: " << cases << "\nseed: " << g.seed << "\n"
            << "homomorphism: " << sci(hom) << "\npinv: " << sci(mp) << "\n";
  return hom <= 1e-10 && mp <= 1e-8 ? kOk : kInconsistent;
}

int guarded(const std::function<int()>& fn) {
  try {
    return fn();
  } catch (const qtl::ParseError& ex) {
    std::cerr << "qtl: parse error: " << ex.what() << "\n";
    return kInput;
  } catch (const qtl::ShapeError& ex) {
    std::cerr << "qtl: shape error: " << ex.what() << "\n";
    return kInput;
  } catch (const qtl::DimensionError& ex) {
    std::cerr << "qtl: dimension error: " << ex.what() << "\n";
    return kInput;
  } catch (const qtl::SingularError& ex) {
    std::cerr << "qtl: singular: " << ex.what() << "\n";
    return kHypothesis;
  } catch (const qtl::BoundInapplicableError& ex) {
    std::cerr << "qtl: bound inapplicable: " << ex.what() << "\n";
    return kHypothesis;
  } catch (const qtl::HypothesisError& ex) {
    std::cerr << "qtl: hypothesis '" << ex.which() << "' fails: " << ex.what() << "\n";
    return kHypothesis;
  } catch (const qtl::PreconditionError& ex) {
    std::cerr << "qtl: precondition: " << ex.what() << "\n";
    return kHypothesis;
  } catch (const qtl::InconsistencyError& ex) {
    std::cerr << "qtl: internal inconsistency: " << ex.what() << "\n";
    return kInconsistent;
  } catch (const qtl::Error& ex) {
    std::cerr << "qtl: " << ex.what() << "\n";
    return kInput;
  } catch (const std::exception& ex) {
    std::cerr << "qtl: unexpected: " << ex.what() << "\n";
    return kInconsistent;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quaternion tensor algebra under the QT-product"};
  app.set_version_flag("--version", QTL_VERSION);
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--atol", g.atol, "Absolute tolerance for verification")->capture_default_str();
  app.add_option("--rtol", g.rtol, "Relative tolerance for verification")->capture_default_str();
  app.add_flag("--paranoid", g.paranoid, "Cross-check every dual-route computation");
  app.add_option("--seed", g.seed, "Seed for randomized self-tests")->capture_default_str();
  app.add_flag("--reproducible", g.reproducible, "Omit timestamps from reports");

  std::function<int()> action;
  std::string a_path, b_path, out, prefix, as = "drazin", format = "text";
  int k = 1;
  std::optional<int> l;
  int cases = 50;

  auto* info = app.add_subcommand("info", "Dimensions, ranks, index, norm and radius");
  info->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  info->callback([&] { action = [&] { return cmd_info(g, a_path); }; });

  auto* product = app.add_subcommand("product", "QT-product A * B");
  product->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  product->add_option("B", b_path)->required()->check(CLI::ExistingFile);
  product->add_option("-o,--output", out);
  product->callback([&] {
    action = [&] {
      emit(qtl::io::read_tensor(a_path) * qtl::io::read_tensor(b_path), out);
      return kOk;
    };
  });

  auto* transpose = app.add_subcommand("transpose", "Conjugate transpose A^*");
  transpose->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  transpose->add_option("-o,--output", out);
  transpose->callback([&] {
    action = [&] {
      emit(qtl::qt_transpose(qtl::io::read_tensor(a_path)), out);
      return kOk;
    };
  });

  auto* power = app.add_subcommand("power", "Tensor power A^K");
  power->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  power->add_option("K", k)->required()->check(CLI::NonNegativeNumber);
  power->add_option("-o,--output", out);
  power->callback([&] {
    action = [&] {
      emit(qtl::qt_power(qtl::io::read_tensor(a_path), k), out);
      return kOk;
    };
  });

  auto* inverse = app.add_subcommand("inverse", "Inverse of a nonsingular tensor");
  inverse->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  inverse->add_option("-o,--output", out);
  inverse->callback([&] {
    action = [&] {
      emit(qtl::qt_inverse(qtl::io::read_tensor(a_path), spectral(g)), out);
      return kOk;
    };
  });

  auto* pinv = app.add_subcommand("pinv", "Moore-Penrose inverse");
  pinv->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  pinv->add_option("-o,--output", out);
  pinv->callback([&] {
    action = [&] {
      emit(qtl::qt_pinv(qtl::io::read_tensor(a_path), spectral(g)), out);
      return kOk;
    };
  });

  auto* drazin = app.add_subcommand("drazin", "Drazin inverse");
  drazin->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  drazin->add_option("--l", l, "Exponent, at least the index (default: the index)");
  drazin->add_option("-o,--output", out);
  drazin->callback([&] {
    action = [&] {
      emit(qtl::qt_drazin(qtl::io::read_tensor(a_path), l, spectral(g)), out);
      return kOk;
    };
  });

  auto* svd = app.add_subcommand("svd", "QT-SVD, writes PREFIXU.qt, PREFIXS.qt, PREFIXV.qt");
  svd->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  svd->add_option("--prefix", prefix)->required();
  svd->callback([&] {
    action = [&] {
      const auto f = qtl::qt_svd(qtl::io::read_tensor(a_path), spectral(g));
      qtl::io::write_tensor(f.u, prefix + "U.qt");
      qtl::io::write_tensor(f.s, prefix + "S.qt");
      qtl::io::write_tensor(f.v, prefix + "V.qt");
      return kOk;
    };
  });

  auto* bcirc = app.add_subcommand("bcirc", "z-block circulant matrix as an n1n3 x n2n3 x 1 tensor");
  bcirc->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  bcirc->add_option("-o,--output", out);
  bcirc->callback([&] {
    action = [&] {
      emit(qtl::QTensor({qtl::io::read_tensor(a_path).bcirc_z()}), out);
      return kOk;
    };
  });

  auto* verify = app.add_subcommand("verify", "Residuals of the defining equations of X");
  verify->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  verify->add_option("X", b_path)->required()->check(CLI::ExistingFile);
  verify->add_option("--as", as)->required()->check(CLI::IsMember({"pinv", "drazin"}));
  verify->callback([&] { action = [&] { return cmd_verify(g, a_path, b_path, as); }; });

  auto* perturb = app.add_subcommand("perturb", "Drazin perturbation report for B = A + E");
  perturb->add_option("A", a_path)->required()->check(CLI::ExistingFile);
  perturb->add_option("E", b_path)->required()->check(CLI::ExistingFile);
  perturb->add_option("--format", format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();
  perturb->add_option("-o,--output", out);
  perturb->callback([&] { action = [&] { return cmd_perturb(g, a_path, b_path, format, out); }; });

  auto* selftest = app.add_subcommand("selftest", "Randomized homomorphism and Penrose checks");
  selftest->add_option("--cases", cases)->check(CLI::PositiveNumber)->capture_default_str();
  selftest->callback([&] { action = [&] { return cmd_selftest(g, cases); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex);
    return code == 0 ? kOk : kUsage;
  }
  return guarded(action);
}
