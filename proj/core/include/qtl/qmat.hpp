#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "qtl/quat.hpp"

namespace qtl {

using Index = Eigen::Index;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

/// Complex adjoint image of a quaternion matrix, shape 2m x 2n, block form
/// [[D, conj(C)], [-C, conj(D)]].
using ChiMat = Eigen::MatrixXcd;

/// Dense quaternion matrix Q = D + j C with complex D, C of equal shape.
///
/// The j sits on the left, so entrywise Q(r,c) = merge({D(r,c), C(r,c)}).
/// Products follow from j c = conj(c) j:
///   (D1 + jC1)(D2 + jC2) = (D1 D2 - conj(C1) C2) + j (conj(D1) C2 + C1 D2).
class QMat {
 public:
  QMat() = default;
  QMat(Index rows, Index cols);
  QMat(CMat d, CMat c);

  static QMat zero(Index rows, Index cols) { return QMat(rows, cols); }
  static QMat identity(Index n);
  static QMat from_real(const Eigen::MatrixXd& real);
  static QMat from_complex(const CMat& d);

  Index rows() const { return d_.rows(); }
  Index cols() const { return d_.cols(); }
  bool is_square() const { return rows() == cols(); }

  const CMat& d() const { return d_; }
  const CMat& c() const { return c_; }

  Quat operator()(Index r, Index c) const;
  void set(Index r, Index c, const Quat& q);

  /// Conjugate transpose Q^*: D' = D^H, C' = -C^T.
  QMat adjoint() const;

  /// Sum of squared moduli of all entries, square-rooted.
  double frobenius_norm() const;

  QMat& operator+=(const QMat& o);
  QMat& operator-=(const QMat& o);

  friend QMat operator+(QMat a, const QMat& b) { return a += b; }
  friend QMat operator-(QMat a, const QMat& b) { return a -= b; }
  friend QMat operator-(const QMat& a);
  friend QMat operator*(double s, const QMat& a);
  friend QMat operator*(const QMat& a, const QMat& b);

 private:
  CMat d_;
  CMat c_;
};

inline QMat qmat_mul(const QMat& a, const QMat& b) { return a * b; }

/// Complex adjoint (chi) map. A ring homomorphism with chi(A^*) = chi(A)^H.
ChiMat chi(const QMat& a);

/// Projects M onto quaternionic structure and reads back the quaternion
/// matrix. Throws StructureError when M is farther than 1e-8 ||M|| from it.
QMat chi_inverse(const ChiMat& m);

/// Distance of M from the structured subspace J conj(M) J^T = M.
double chi_structure_defect(const ChiMat& m);

struct QSvd {
  QMat u;  ///< rows x rows, unitary
  RVec s;  ///< min(rows, cols) singular values, nonincreasing
  QMat v;  ///< cols x cols, unitary
};

/// Full quaternion SVD A = U diag(s) V^*.
QSvd svd(const QMat& a);

/// Singular values of chi(A); each quaternion singular value appears twice.
RVec chi_singular_values(const QMat& a);

/// Tolerance max(2m, 2n) * eps * sigma_max used for every rank decision.
double rank_tolerance(const QMat& a, double sigma_max);

/// Threshold for rank decisions on the k-th power of a matrix of norm
/// `norm`: max(2m, 2n) * eps * norm^k.
double power_rank_tolerance(Index rows, Index cols, double norm, int k);

/// Moore-Penrose inverse; singular values at or below `tol` (default: the
/// rank tolerance of A) are treated as zero.
QMat pinv(const QMat& a, std::optional<double> tol = std::nullopt);
Index rank(const QMat& a, std::optional<double> tol = std::nullopt);
QMat power(const QMat& a, int k);

/// Smallest k >= 0 with rank(A^{k+1}) = rank(A^k), A^0 = I.
Index index(const QMat& a);

/// A^l pinv(A^{2l+1}) A^l with l = index(A).
QMat drazin(const QMat& a);

/// Throws SingularError when the smallest singular value is at or below
/// `tol` (default: the rank tolerance).
QMat inverse(const QMat& a, std::optional<double> tol = std::nullopt);

/// Standard right eigenvalues: one representative per conjugate pair of
/// chi eigenvalues, with nonnegative imaginary part.
std::vector<cplx> right_spectrum(const QMat& a);

/// Eigenvalues of chi(A), all 2n of them.
std::vector<cplx> chi_eigenvalues(const QMat& a);

double right_spectral_radius(const QMat& a);
double norm2(const QMat& a);

}  // namespace qtl
