#pragma once

#include <memory>
#include <mutex>
#include <vector>

#include "qtl/qmat.hpp"

namespace qtl {

/// The n3 x n3 permutation that fixes the first index and reverses the rest.
/// Applied on the right of bcirc(A_c) it turns the circulant pattern of the
/// j-part into the "sum-index" pattern that j c = conj(c) j requires.
struct PermP {
  Index n3 = 1;

  /// Image of the zero-based index t.
  Index operator()(Index t) const { return t == 0 ? 0 : n3 - t; }

  Eigen::MatrixXd matrix() const;
};

/// Third-order quaternion tensor n1 x n2 x n3 stored as n3 frontal slices.
///
/// Tensors are immutable once constructed; bcirc_z() is materialized on first
/// use and shared between copies.
class QTensor {
 public:
  QTensor() = default;
  explicit QTensor(std::vector<QMat> slices);
  QTensor(Index n1, Index n2, Index n3);  ///< zero tensor

  static QTensor zero(Index n1, Index n2, Index n3) { return QTensor(n1, n2, n3); }
  static QTensor identity(Index n, Index n3);

  Index n1() const { return n1_; }
  Index n2() const { return n2_; }
  Index n3() const { return static_cast<Index>(slices_.size()); }
  bool has_square_slices() const { return n1_ == n2_; }

  const std::vector<QMat>& slices() const { return slices_; }
  const QMat& slice(Index t) const { return slices_.at(static_cast<std::size_t>(t)); }
  Quat operator()(Index r, Index c, Index t) const { return slice(t)(r, c); }

  /// bcirc(A_d) + j bcirc(A_c) (P ⊗ I_{n2}), shape n1 n3 x n2 n3.
  const QMat& bcirc_z() const;

  /// Frobenius norm over all entries.
  double frobenius_norm() const;

  friend QTensor operator+(const QTensor& a, const QTensor& b);
  friend QTensor operator-(const QTensor& a, const QTensor& b);
  friend QTensor operator-(const QTensor& a);
  friend QTensor operator*(double s, const QTensor& a);

 private:
  struct Cache {
    std::once_flag once;
    QMat bcirc_z;
  };

  Index n1_ = 0;
  Index n2_ = 0;
  std::vector<QMat> slices_;
  std::shared_ptr<Cache> cache_ = std::make_shared<Cache>();
};

/// Block column [A^(1); ...; A^(n3)].
QMat unfold(const QTensor& a);
QTensor fold(const QMat& m, Index n1, Index n3);

inline QMat bcirc_z(const QTensor& a) { return a.bcirc_z(); }

/// Recovers a tensor from the first block column of a z-block circulant matrix.
/// With `verify`, rebuilds bcirc_z of the result and throws NotZCirculantError
/// when it differs from M by more than 1e-9 ||M||.
QTensor tensor_from_bcirc_z(const QMat& m, Index n1, Index n3, bool verify = false);

/// QT-product fold(bcirc_z(A) unfold(B)).
QTensor qt_product(const QTensor& a, const QTensor& b);
inline QTensor operator*(const QTensor& a, const QTensor& b) { return qt_product(a, b); }

/// Conjugate transpose A^*, shape n2 x n1 x n3.
QTensor qt_transpose(const QTensor& a);

QTensor identity_tensor(Index n, Index n3);

QTensor qt_power(const QTensor& a, int k);

/// Distance ||X - Y||_F over all entries of the slices.
double tensor_distance(const QTensor& x, const QTensor& y);

struct Tolerance {
  double atol = 1e-10;
  double rtol = 1e-8;
};

/// ||X - Y||_s <= atol + rtol ||Y||_s.
bool approx_equal(const QTensor& x, const QTensor& y, const Tolerance& tol = {});

}  // namespace qtl
