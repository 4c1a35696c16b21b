#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qtl/spectral.hpp"

namespace qtl {

struct PerturbOptions {
  double core_tol = 1e-8;      ///< relative residual allowed in the core condition
  double identity_tol = 1e-6;  ///< relative residual allowed in each identity
  SpectralOptions spectral{};
};

struct CoreCheck {
  bool holds = false;
  /// ||E - A A^D E A A^D||_s / max(1, ||E||_s)
  double residual = 0.0;
};

/// Tests E = A *_Q A^D *_Q E *_Q A *_Q A^D.
CoreCheck check_core_perturbation(const QTensor& a, const QTensor& e, double tol = 1e-8,
                                  const SpectralOptions& opts = {});

struct PerturbNorms {
  double a = 0.0;        ///< ||A||_s
  double ad = 0.0;       ///< ||A^D||_s
  double bd = 0.0;       ///< ||B^D||_s
  double diff = 0.0;     ///< ||B^D - A^D||_s
  double ad_e = 0.0;     ///< ||A^D * E||_s
  double e_ad = 0.0;     ///< ||E * A^D||_s
  double e = 0.0;        ///< ||E||_s
  double a_ad = 0.0;     ///< ||A * A^D||_s
};

/// Norm bounds on the perturbed Drazin inverse. Quantities whose
/// denominators are not positive are left empty.
struct PerturbBounds {
  double delta_lhs = 0.0;  ///< ||(I + A^D E)^{-1}||_s
  double delta_rhs = 0.0;  ///< 1 / (1 - ||A^D E||_s)
  bool delta_holds = false;

  double lower = 0.0;      ///< ||A^D|| / (1 + ||A^D E||)
  double upper = 0.0;      ///< ||A^D|| / (1 - ||A^D E||)
  double lower_alt = 0.0;  ///< ||A^D|| / (1 + ||E A^D||)
  std::optional<double> upper_alt;  ///< ||A^D|| / (1 - ||E A^D||)

  double relative_error = 0.0;  ///< ||B^D - A^D|| / ||A^D||
  double rel_bound = 0.0;       ///< ||A^D E|| / (1 - ||A^D E||)
  std::optional<double> rel_bound_mixed;      ///< ||A^D E|| / (1 - ||E A^D||)
  std::optional<double> rel_bound_alt;        ///< ||E A^D|| / (1 - ||E A^D||)
  double rel_bound_alt_mixed = 0.0;           ///< ||E A^D|| / (1 - ||A^D E||)

  double kappa = 0.0;  ///< ||A||_s ||A^D||_s
  std::optional<double> kappa_bound;  ///< t / (1 - t), t = kappa ||E|| / ||A||

  bool norm_bounds_hold = false;  ///< lower <= ||B^D|| <= upper
  bool relative_chain_holds = false;
  bool mixed_bound_holds = false;
  bool alt_bound_holds = false;
  bool alt_mixed_bound_holds = false;
};

struct PerturbReport {
  Index index = 0;  ///< Ind_QT(A)

  double cond_core_residual = 0.0;
  bool core_holds = false;
  double rho_value = 0.0;  ///< rho_QT(A^D * E)
  double rho_swap = 0.0;   ///< rho_QT(E * A^D)
  double norm_value = 0.0; ///< ||A^D * E||_s
  bool trivial = false;    ///< E = 0
  bool hypotheses_hold = false;
  std::string failed_hypothesis;  ///< "core", "rho" or "" when all hold

  double projector_residual = 0.0;
  double diff_residual_left = 0.0;
  double diff_residual_right = 0.0;
  double resolvent_residual_left = 0.0;
  double resolvent_residual_right = 0.0;
  double identity_scale = 1.0;
  bool identities_computed = false;
  bool identities_verified = false;

  PerturbNorms norms;
  std::optional<PerturbBounds> bounds;

  /// Free-form notes on stages that failed or were skipped.
  std::vector<std::string> notes;

  PerturbOptions options;
};

/// Checks the hypotheses, then evaluates the five identities linking B^D to
/// A^D. Throws HypothesisError naming the failed hypothesis.
PerturbReport verify_identities(const QTensor& a, const QTensor& e,
                                const PerturbOptions& opts = {});

/// verify_identities plus the norm bound chain. Throws
/// BoundInapplicableError when ||A^D * E||_s >= 1 and InconsistencyError
/// when condition Δ holds but a measured value escapes its bound.
PerturbReport compute_bounds(const QTensor& a, const QTensor& e,
                             const PerturbOptions& opts = {});

/// Runs every stage, recording failures in the report instead of throwing.
/// Only errors unrelated to the hypotheses (shape mismatch) propagate.
PerturbReport perturb_report(const QTensor& a, const QTensor& e,
                             const PerturbOptions& opts = {});

}  // namespace qtl
