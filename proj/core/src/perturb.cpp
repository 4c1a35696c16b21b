#include "qtl/perturb.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qtl/errors.hpp"

namespace qtl {

namespace {

void require_pair(const QTensor& a, const QTensor& e, const char* op) {
  if (!a.has_square_slices()) {
    throw DimensionError(std::string(op) + ": A must have square frontal slices");
  }
  if (a.n1() != e.n1() || a.n2() != e.n2() || a.n3() != e.n3()) {
    throw DimensionError(std::string(op) + ": A and E must have the same shape");
  }
}

// Slack for comparing a measured norm against a bound.
double slack(double v) { return 1e-9 * std::max(1.0, std::abs(v)); }

struct Stage {
  QTensor ad;
  QTensor bd;
};

CoreCheck core_check(const QTensor& a, const QTensor& ad, const QTensor& e, double tol,
                     const SpectralOptions& opts) {
  const QTensor proj = a * ad;
  const QTensor image = proj * e * proj;
  CoreCheck out;
  out.residual = qt_spectral_norm(e - image, opts) /
                 std::max(1.0, qt_spectral_norm(e, opts));
  out.holds = out.residual <= tol;
  return out;
}

void evaluate_hypotheses(PerturbReport& r, const QTensor& a, const QTensor& e, Stage& st) {
  const auto& sopt = r.options.spectral;
  r.index = qt_index(a, sopt);
  st.ad = qt_drazin(a, std::nullopt, sopt);

  r.trivial = e.frobenius_norm() == 0.0;
  const CoreCheck core = core_check(a, st.ad, e, r.options.core_tol, sopt);
  r.cond_core_residual = core.residual;
  r.core_holds = core.holds;

  const QTensor ad_e = st.ad * e;
  const QTensor e_ad = e * st.ad;
  r.rho_value = qt_spectral_radius(ad_e, sopt);
  r.rho_swap = qt_spectral_radius(e_ad, sopt);
  r.norm_value = qt_spectral_norm(ad_e, sopt);

  r.norms.a = qt_spectral_norm(a, sopt);
  r.norms.ad = qt_spectral_norm(st.ad, sopt);
  r.norms.e = qt_spectral_norm(e, sopt);
  r.norms.ad_e = r.norm_value;
  r.norms.e_ad = qt_spectral_norm(e_ad, sopt);
  r.norms.a_ad = qt_spectral_norm(a * st.ad, sopt);

  const double zero_tol = 1e-12 * std::max(1.0, r.norms.ad * r.norms.e);
  const bool rho_ok = r.trivial || (r.rho_value > zero_tol && r.rho_value < 1.0);
  r.failed_hypothesis = !r.core_holds ? "core" : (!rho_ok ? "rho" : "");
  r.hypotheses_hold = r.failed_hypothesis.empty();
}

void evaluate_identities(PerturbReport& r, const QTensor& a, const QTensor& e, Stage& st) {
  const auto& sopt = r.options.spectral;
  const QTensor b = a + e;
  st.bd = qt_drazin(b, std::nullopt, sopt);
  const QTensor& ad = st.ad;
  const QTensor& bd = st.bd;
  const QTensor id = identity_tensor(a.n1(), a.n3());

  r.norms.bd = qt_spectral_norm(bd, sopt);
  const QTensor diff = bd - ad;
  r.norms.diff = qt_spectral_norm(diff, sopt);

  r.projector_residual = qt_spectral_norm(a * ad - b * bd, sopt);
  r.diff_residual_left = qt_spectral_norm(diff + bd * e * ad, sopt);
  r.diff_residual_right = qt_spectral_norm(diff + ad * e * bd, sopt);
  r.resolvent_residual_left = qt_spectral_norm(bd - qt_inverse(id + ad * e, sopt) * ad, sopt);
  r.resolvent_residual_right = qt_spectral_norm(bd - ad * qt_inverse(id + e * ad, sopt), sopt);

  r.identity_scale = std::max({1.0, r.norms.a_ad, r.norms.ad, r.norms.bd,
                               r.norms.ad * r.norms.e * r.norms.bd});
  const double limit = r.options.identity_tol * r.identity_scale;
  r.identities_computed = true;
  r.identities_verified = r.projector_residual <= limit && r.diff_residual_left <= limit &&
                          r.diff_residual_right <= limit &&
                          r.resolvent_residual_left <= limit &&
                          r.resolvent_residual_right <= limit;
}

std::optional<double> ratio_if_positive(double num, double den) {
  if (den > 0.0) return num / den;
  return std::nullopt;
}

PerturbBounds evaluate_bounds(const PerturbReport& r, const QTensor& a, const QTensor& e,
                              const Stage& st) {
  const auto& n = r.norms;
  const auto& sopt = r.options.spectral;
  PerturbBounds b;
  const QTensor id = identity_tensor(a.n1(), a.n3());
  b.delta_lhs = qt_spectral_norm(qt_inverse(id + st.ad * e, sopt), sopt);
  b.delta_rhs = 1.0 / (1.0 - n.ad_e);
  b.delta_holds = b.delta_lhs <= b.delta_rhs + slack(b.delta_rhs);

  b.lower = n.ad / (1.0 + n.ad_e);
  b.upper = n.ad / (1.0 - n.ad_e);
  b.lower_alt = n.ad / (1.0 + n.e_ad);
  b.upper_alt = ratio_if_positive(n.ad, 1.0 - n.e_ad);

  b.relative_error = n.ad > 0.0 ? n.diff / n.ad : 0.0;
  b.rel_bound = n.ad_e / (1.0 - n.ad_e);
  b.rel_bound_mixed = ratio_if_positive(n.ad_e, 1.0 - n.e_ad);
  b.rel_bound_alt = ratio_if_positive(n.e_ad, 1.0 - n.e_ad);
  b.rel_bound_alt_mixed = n.e_ad / (1.0 - n.ad_e);

  b.kappa = n.a * n.ad;
  const double t = n.a > 0.0 ? b.kappa * n.e / n.a : 0.0;
  b.kappa_bound = ratio_if_positive(t, 1.0 - t);

  b.norm_bounds_hold = b.lower - slack(b.lower) <= n.bd && n.bd <= b.upper + slack(b.upper);
  b.relative_chain_holds = b.relative_error <= b.rel_bound + slack(b.rel_bound) &&
                           (!b.kappa_bound || b.rel_bound <= *b.kappa_bound + slack(b.rel_bound));
  b.mixed_bound_holds =
      b.rel_bound_mixed && b.relative_error <= *b.rel_bound_mixed + slack(*b.rel_bound_mixed);
  b.alt_bound_holds =
      b.rel_bound_alt && b.relative_error <= *b.rel_bound_alt + slack(*b.rel_bound_alt);
  b.alt_mixed_bound_holds =
      b.relative_error <= b.rel_bound_alt_mixed + slack(b.rel_bound_alt_mixed);
  return b;
}

}  // namespace

CoreCheck check_core_perturbation(const QTensor& a, const QTensor& e, double tol,
                                  const SpectralOptions& opts) {
  require_pair(a, e, "check_core_perturbation");
  return core_check(a, qt_drazin(a, std::nullopt, opts), e, tol, opts);
}

PerturbReport verify_identities(const QTensor& a, const QTensor& e, const PerturbOptions& opts) {
  require_pair(a, e, "verify_identities");
  PerturbReport r;
  r.options = opts;
  Stage st;
  evaluate_hypotheses(r, a, e, st);
  if (!r.hypotheses_hold) {
    const std::string what =
        r.failed_hypothesis == "core"
            ? "E does not satisfy E = A A^D E A A^D (residual " +
                  std::to_string(r.cond_core_residual) + ")"
            : "rho_QT(A^D * E) = " + std::to_string(r.rho_value) + " is not in (0, 1)";
    throw HypothesisError(r.failed_hypothesis, what);
  }
  evaluate_identities(r, a, e, st);
  return r;
}

PerturbReport compute_bounds(const QTensor& a, const QTensor& e, const PerturbOptions& opts) {
  require_pair(a, e, "compute_bounds");
  PerturbReport r;
  r.options = opts;
  Stage st;
  evaluate_hypotheses(r, a, e, st);
  if (!r.hypotheses_hold) {
    throw HypothesisError(r.failed_hypothesis,
                          "perturbation hypothesis '" + r.failed_hypothesis + "' fails");
  }
  evaluate_identities(r, a, e, st);
  if (r.norm_value >= 1.0) {
    throw BoundInapplicableError("||A^D * E||_s = " + std::to_string(r.norm_value) +
                                 " >= 1; norm bounds do not apply");
  }
  r.bounds = evaluate_bounds(r, a, e, st);
  if (r.bounds->delta_holds &&
      !(r.bounds->norm_bounds_hold && r.bounds->relative_chain_holds)) {
    throw InconsistencyError("condition Delta holds but a measured norm escapes its bound");
  }
  return r;
}

PerturbReport perturb_report(const QTensor& a, const QTensor& e, const PerturbOptions& opts) {
  require_pair(a, e, "perturb_report");
  PerturbReport r;
  r.options = opts;
  Stage st;
  try {
    evaluate_hypotheses(r, a, e, st);
  } catch (const Error& ex) {
    r.failed_hypothesis = "evaluation";
    r.notes.push_back(std::string("hypothesis evaluation failed: ") + ex.what());
    return r;
  }
  if (r.trivial) r.notes.push_back("trivial perturbation: E = 0");
  if (!r.hypotheses_hold) {
    r.notes.push_back("hypothesis '" + r.failed_hypothesis +
                      "' fails; identities and bounds omitted");
    return r;
  }
  try {
    evaluate_identities(r, a, e, st);
  } catch (const Error& ex) {
    r.notes.push_back(std::string("identity evaluation failed: ") + ex.what());
    return r;
  }
  if (r.norm_value >= 1.0) {
    r.notes.push_back("||A^D * E||_s >= 1; norm bounds do not apply");
    return r;
  }
  try {
    r.bounds = evaluate_bounds(r, a, e, st);
  } catch (const Error& ex) {
    r.notes.push_back(std::string("bound evaluation failed: ") + ex.what());
  }
  if (r.bounds && r.bounds->delta_holds &&
      !(r.bounds->norm_bounds_hold && r.bounds->relative_chain_holds)) {
    r.notes.push_back("condition Delta holds but a measured norm escapes its bound");
  }
  return r;
}

}  // namespace qtl
