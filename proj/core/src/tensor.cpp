#include "qtl/tensor.hpp"

#include <cmath>
#include <string>

#include "qtl/errors.hpp"

namespace qtl {

namespace {

std::string shape_str(const QTensor& a) {
  return std::to_string(a.n1()) + "x" + std::to_string(a.n2()) + "x" + std::to_string(a.n3());
}

void require_same_shape(const QTensor& a, const QTensor& b, const char* op) {
  if (a.n1() != b.n1() || a.n2() != b.n2() || a.n3() != b.n3()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a) + " vs " +
                         shape_str(b));
  }
}

Index wrap(Index t, Index n3) { return ((t % n3) + n3) % n3; }

}  // namespace

Eigen::MatrixXd PermP::matrix() const {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n3, n3);
  for (Index t = 0; t < n3; ++t) p((*this)(t), t) = 1.0;
  return p;
}

QTensor::QTensor(std::vector<QMat> slices) : slices_(std::move(slices)) {
  if (slices_.empty()) throw DimensionError("QTensor: need at least one frontal slice");
  n1_ = slices_.front().rows();
  n2_ = slices_.front().cols();
  for (const auto& s : slices_) {
    if (s.rows() != n1_ || s.cols() != n2_) {
      throw DimensionError("QTensor: frontal slices must share shape");
    }
  }
}

QTensor::QTensor(Index n1, Index n2, Index n3)
    : n1_(n1), n2_(n2), slices_(static_cast<std::size_t>(n3), QMat::zero(n1, n2)) {
  if (n3 < 1) throw DimensionError("QTensor: n3 must be positive");
}

QTensor QTensor::identity(Index n, Index n3) {
  QTensor out(n, n, n3);
  out.slices_[0] = QMat::identity(n);
  return out;
}

const QMat& QTensor::bcirc_z() const {
  std::call_once(cache_->once, [this] {
    const Index n3 = this->n3();
    const PermP perm{n3};
    CMat d(n1_ * n3, n2_ * n3);
    CMat circ_c(n1_ * n3, n2_ * n3);
    for (Index r = 0; r < n3; ++r) {
      for (Index c = 0; c < n3; ++c) {
        const auto& s = slices_[static_cast<std::size_t>(wrap(r - c, n3))];
        d.block(r * n1_, c * n2_, n1_, n2_) = s.d();
        circ_c.block(r * n1_, c * n2_, n1_, n2_) = s.c();
      }
    }
    // bcirc(A_c) (P ⊗ I): column block c of the product is column block P(c).
    CMat c_part(n1_ * n3, n2_ * n3);
    for (Index c = 0; c < n3; ++c) {
      c_part.middleCols(c * n2_, n2_) = circ_c.middleCols(perm(c) * n2_, n2_);
    }
    cache_->bcirc_z = QMat(std::move(d), std::move(c_part));
  });
  return cache_->bcirc_z;
}

double QTensor::frobenius_norm() const {
  double sq = 0.0;
  for (const auto& s : slices_) sq += s.d().squaredNorm() + s.c().squaredNorm();
  return std::sqrt(sq);
}

QTensor operator+(const QTensor& a, const QTensor& b) {
  require_same_shape(a, b, "QTensor +");
  std::vector<QMat> out;
  out.reserve(a.slices().size());
  for (std::size_t t = 0; t < a.slices().size(); ++t) out.push_back(a.slices()[t] + b.slices()[t]);
  return QTensor(std::move(out));
}

QTensor operator-(const QTensor& a, const QTensor& b) {
  require_same_shape(a, b, "QTensor -");
  std::vector<QMat> out;
  out.reserve(a.slices().size());
  for (std::size_t t = 0; t < a.slices().size(); ++t) out.push_back(a.slices()[t] - b.slices()[t]);
  return QTensor(std::move(out));
}

QTensor operator-(const QTensor& a) { return -1.0 * a; }

QTensor operator*(double s, const QTensor& a) {
  std::vector<QMat> out;
  out.reserve(a.slices().size());
  for (const auto& m : a.slices()) out.push_back(s * m);
  return QTensor(std::move(out));
}

QMat unfold(const QTensor& a) {
  const Index n1 = a.n1();
  const Index n3 = a.n3();
  CMat d(n1 * n3, a.n2());
  CMat c(n1 * n3, a.n2());
  for (Index t = 0; t < n3; ++t) {
    d.middleRows(t * n1, n1) = a.slice(t).d();
    c.middleRows(t * n1, n1) = a.slice(t).c();
  }
  return QMat(std::move(d), std::move(c));
}

QTensor fold(const QMat& m, Index n1, Index n3) {
  if (n1 < 1 || n3 < 1 || m.rows() != n1 * n3) {
    throw DimensionError("fold: expected " + std::to_string(n1 * n3) + " rows, got " +
                         std::to_string(m.rows()));
  }
  std::vector<QMat> slices;
  slices.reserve(static_cast<std::size_t>(n3));
  for (Index t = 0; t < n3; ++t) {
    slices.emplace_back(m.d().middleRows(t * n1, n1), m.c().middleRows(t * n1, n1));
  }
  return QTensor(std::move(slices));
}

QTensor tensor_from_bcirc_z(const QMat& m, Index n1, Index n3, bool verify) {
  if (n1 < 1 || n3 < 1 || m.rows() != n1 * n3 || m.cols() % n3 != 0) {
    throw DimensionError("tensor_from_bcirc_z: matrix " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + " is not (n1 n3) x (n2 n3) with n1=" +
                         std::to_string(n1) + ", n3=" + std::to_string(n3));
  }
  const Index n2 = m.cols() / n3;
  QTensor out = fold(QMat(m.d().leftCols(n2), m.c().leftCols(n2)), n1, n3);
  if (verify) {
    const QMat diff = out.bcirc_z() - m;
    const double err = diff.frobenius_norm();
    if (err > 1e-9 * m.frobenius_norm()) {
      throw NotZCirculantError("matrix is not z-block circulant (deviation " +
                               std::to_string(err) + ")");
    }
  }
  return out;
}

QTensor qt_product(const QTensor& a, const QTensor& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3()) {
    throw DimensionError("qt_product: cannot multiply " + shape_str(a) + " by " + shape_str(b));
  }
  return fold(a.bcirc_z() * unfold(b), a.n1(), a.n3());
}

QTensor qt_transpose(const QTensor& a) {
  const PermP perm{a.n3()};
  std::vector<QMat> out;
  out.reserve(a.slices().size());
  for (Index t = 0; t < a.n3(); ++t) {
    out.emplace_back(a.slice(perm(t)).d().adjoint(), -a.slice(t).c().transpose());
  }
  return QTensor(std::move(out));
}

QTensor identity_tensor(Index n, Index n3) { return QTensor::identity(n, n3); }

QTensor qt_power(const QTensor& a, int k) {
  if (!a.has_square_slices()) {
    throw DimensionError("qt_power: slices must be square, got " + shape_str(a));
  }
  if (k < 0) throw PreconditionError("qt_power: exponent must be nonnegative");
  QTensor out = identity_tensor(a.n1(), a.n3());
  for (int i = 0; i < k; ++i) out = qt_product(out, a);
  return out;
}

double tensor_distance(const QTensor& x, const QTensor& y) { return (x - y).frobenius_norm(); }

bool approx_equal(const QTensor& x, const QTensor& y, const Tolerance& tol) {
  if (x.n1() != y.n1() || x.n2() != y.n2() || x.n3() != y.n3()) return false;
  return norm2((x - y).bcirc_z()) <= tol.atol + tol.rtol * norm2(y.bcirc_z());
}

}  // namespace qtl
