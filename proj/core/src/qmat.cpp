#include "qtl/qmat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qtl/errors.hpp"

namespace qtl {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_same_shape(const QMat& a, const QMat& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) +
                         "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                         "x" + std::to_string(b.cols()));
  }
}

void require_square(const QMat& a, const char* op) {
  if (!a.is_square()) {
    throw DimensionError(std::string(op) + ": matrix must be square, got " +
                         std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

// J conj(w) for w = (w1; w2): the partner of a chi vector.
CVec partner(const CVec& w) {
  const Index h = w.size() / 2;
  CVec p(w.size());
  p.head(h) = w.tail(h).conjugate();
  p.tail(h) = -w.head(h).conjugate();
  return p;
}

CVec project_out(CVec v, const std::vector<CVec>& basis) {
  // Two passes of classical Gram-Schmidt.
  for (int pass = 0; pass < 2; ++pass) {
    for (const auto& b : basis) v -= b * b.dot(v);
  }
  return v;
}

// Orthonormal basis closed under the partner map. `basis` holds the vectors
// already fixed (already pair-closed); `kept` receives one vector per pair.
class SymplecticBasis {
 public:
  explicit SymplecticBasis(Index dim) : dim_(dim) {}

  Index size() const { return static_cast<Index>(basis_.size()); }
  const std::vector<CVec>& kept() const { return kept_; }

  // Adds w (after orthogonalization) and its partner.
  bool add(const CVec& w, double min_norm) {
    CVec r = project_out(w, basis_);
    const double nr = r.norm();
    if (nr <= min_norm) return false;
    r /= nr;
    CVec p = project_out(partner(r), basis_);
    p -= r * r.dot(p);
    p.normalize();
    basis_.push_back(r);
    basis_.push_back(p);
    kept_.push_back(r);
    return true;
  }

  // Greedily completes the basis from candidate columns, taking the candidate
  // with the largest residual first.
  void complete_from(const CMat& candidates) {
    std::vector<bool> used(candidates.cols(), false);
    while (size() < dim_) {
      Index best = -1;
      double best_norm = 0.0;
      for (Index j = 0; j < candidates.cols(); ++j) {
        if (used[j]) continue;
        const double nr = project_out(candidates.col(j), basis_).norm();
        if (nr > best_norm) {
          best_norm = nr;
          best = j;
        }
      }
      if (best < 0 || best_norm < 1e-6) {
        throw InconsistencyError("symplectic basis completion stalled");
      }
      used[best] = true;
      add(candidates.col(best), 0.0);
    }
  }

 private:
  Index dim_;
  std::vector<CVec> basis_;
  std::vector<CVec> kept_;
};

// Quaternion column w1 - j w2 for each kept chi vector w = (w1; w2).
QMat columns_to_qmat(const std::vector<CVec>& cols, Index rows) {
  CMat d(rows, static_cast<Index>(cols.size()));
  CMat c(rows, static_cast<Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    d.col(static_cast<Index>(k)) = cols[k].head(rows);
    c.col(static_cast<Index>(k)) = -cols[k].tail(rows);
  }
  return QMat(std::move(d), std::move(c));
}

Eigen::JacobiSVD<CMat> chi_svd(const QMat& a, int options) { return Eigen::JacobiSVD<CMat>(chi(a), options); }

}  // namespace

QMat::QMat(Index rows, Index cols)
    : d_(CMat::Zero(rows, cols)), c_(CMat::Zero(rows, cols)) {}

QMat::QMat(CMat d, CMat c) : d_(std::move(d)), c_(std::move(c)) {
  if (d_.rows() != c_.rows() || d_.cols() != c_.cols()) {
    throw DimensionError("QMat: D and C must share shape");
  }
}

QMat QMat::identity(Index n) { return QMat(CMat::Identity(n, n), CMat::Zero(n, n)); }

QMat QMat::from_real(const Eigen::MatrixXd& real) {
  return QMat(real.cast<cplx>(), CMat::Zero(real.rows(), real.cols()));
}

QMat QMat::from_complex(const CMat& d) { return QMat(d, CMat::Zero(d.rows(), d.cols())); }

Quat QMat::operator()(Index r, Index c) const { return merge({d_(r, c), c_(r, c)}); }

void QMat::set(Index r, Index c, const Quat& q) {
  const auto p = split(q);
  d_(r, c) = p.c1;
  c_(r, c) = p.c2;
}

QMat QMat::adjoint() const { return QMat(d_.adjoint(), -c_.transpose()); }

double QMat::frobenius_norm() const {
  return std::sqrt(d_.squaredNorm() + c_.squaredNorm());
}

QMat& QMat::operator+=(const QMat& o) {
  require_same_shape(*this, o, "QMat +");
  d_ += o.d_;
  c_ += o.c_;
  return *this;
}

QMat& QMat::operator-=(const QMat& o) {
  require_same_shape(*this, o, "QMat -");
  d_ -= o.d_;
  c_ -= o.c_;
  return *this;
}

QMat operator-(const QMat& a) { return QMat(-a.d_, -a.c_); }

QMat operator*(double s, const QMat& a) { return QMat(s * a.d_, s * a.c_); }

QMat operator*(const QMat& a, const QMat& b) {
  if (a.cols() != b.rows()) {
    throw DimensionError("QMat *: inner dimensions differ (" + std::to_string(a.cols()) +
                         " vs " + std::to_string(b.rows()) + ")");
  }
  CMat d = a.d_ * b.d_ - a.c_.conjugate() * b.c_;
  CMat c = a.d_.conjugate() * b.c_ + a.c_ * b.d_;
  return QMat(std::move(d), std::move(c));
}

ChiMat chi(const QMat& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  ChiMat out(2 * m, 2 * n);
  out.topLeftCorner(m, n) = a.d();
  out.topRightCorner(m, n) = a.c().conjugate();
  out.bottomLeftCorner(m, n) = -a.c();
  out.bottomRightCorner(m, n) = a.d().conjugate();
  return out;
}

namespace {

// 0.5 (M + J conj(M) J^T) for M = [[P, Q], [R, S]].
ChiMat structured_projection(const ChiMat& m) {
  const Index h = m.rows() / 2;
  const Index w = m.cols() / 2;
  ChiMat t(m.rows(), m.cols());
  t.topLeftCorner(h, w) = m.bottomRightCorner(h, w).conjugate();
  t.topRightCorner(h, w) = -m.bottomLeftCorner(h, w).conjugate();
  t.bottomLeftCorner(h, w) = -m.topRightCorner(h, w).conjugate();
  t.bottomRightCorner(h, w) = m.topLeftCorner(h, w).conjugate();
  return 0.5 * (m + t);
}

void require_even(const ChiMat& m) {
  if (m.rows() % 2 != 0 || m.cols() % 2 != 0) {
    throw StructureError("chi_inverse: dimensions must be even, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

}  // namespace

double chi_structure_defect(const ChiMat& m) {
  require_even(m);
  return 2.0 * (m - structured_projection(m)).norm();
}

QMat chi_inverse(const ChiMat& m) {
  require_even(m);
  const ChiMat p = structured_projection(m);
  const double defect = 2.0 * (m - p).norm();
  if (defect > 1e-8 * m.norm()) {
    throw StructureError("chi_inverse: matrix lacks quaternionic structure (defect " +
                         std::to_string(defect) + ")");
  }
  const Index h = m.rows() / 2;
  const Index w = m.cols() / 2;
  return QMat(p.topLeftCorner(h, w), -p.bottomLeftCorner(h, w));
}

RVec chi_singular_values(const QMat& a) {
  return chi_svd(a, 0).singularValues();
}

double rank_tolerance(const QMat& a, double sigma_max) {
  return static_cast<double>(2 * std::max(a.rows(), a.cols())) * kEps * sigma_max;
}

QSvd svd(const QMat& a) {
  const Index m = a.rows();
  const Index n = a.cols();
  const ChiMat x = chi(a);
  Eigen::JacobiSVD<CMat> csvd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& sv = csvd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double tol = rank_tolerance(a, smax);

  SymplecticBasis right(2 * n);
  right.complete_from(csvd.matrixV());

  struct Item {
    CVec v;
    double sigma;
  };
  std::vector<Item> items;
  for (const auto& v : right.kept()) items.push_back({v, (x * v).norm()});
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& p, const Item& q) { return p.sigma > q.sigma; });

  SymplecticBasis left(2 * m);
  for (const auto& it : items) {
    if (left.size() >= 2 * m || it.sigma <= tol) break;
    left.add(x * it.v / it.sigma, 0.0);
  }
  left.complete_from(csvd.matrixU());

  std::vector<CVec> vcols;
  for (const auto& it : items) vcols.push_back(it.v);

  QSvd out;
  out.u = columns_to_qmat(left.kept(), m);
  out.v = columns_to_qmat(vcols, n);
  const Index k = std::min(m, n);
  out.s.resize(k);
  for (Index i = 0; i < k; ++i) out.s(i) = items[static_cast<std::size_t>(i)].sigma;
  return out;
}

double power_rank_tolerance(Index rows, Index cols, double norm, int k) {
  return static_cast<double>(2 * std::max(rows, cols)) * kEps * std::pow(norm, k);
}

QMat pinv(const QMat& a, std::optional<double> tol_opt) {
  Eigen::JacobiSVD<CMat> csvd(chi(a), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVec& sv = csvd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double tol = tol_opt.value_or(rank_tolerance(a, smax));
  RVec inv = RVec::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) inv(i) = 1.0 / sv(i);
  }
  const CMat x = csvd.matrixV() * inv.asDiagonal() * csvd.matrixU().adjoint();
  return chi_inverse(x);
}

Index rank(const QMat& a, std::optional<double> tol_opt) {
  const RVec sv = chi_singular_values(a);
  if (sv.size() == 0) return 0;
  const double tol = tol_opt.value_or(rank_tolerance(a, sv(0)));
  Index count = 0;
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > tol) ++count;
  }
  return (count + 1) / 2;
}

QMat power(const QMat& a, int k) {
  require_square(a, "power");
  if (k < 0) throw PreconditionError("power: exponent must be nonnegative");
  QMat out = QMat::identity(a.rows());
  for (int i = 0; i < k; ++i) out = out * a;
  return out;
}

Index index(const QMat& a) {
  require_square(a, "index");
  const Index n = a.rows();
  const double na = norm2(a);
  QMat p = QMat::identity(n);
  Index prev = n;
  for (int k = 0; k <= n; ++k) {
    p = p * a;
    const Index next = rank(p, power_rank_tolerance(n, n, na, k + 1));
    if (next == prev) return k;
    prev = next;
  }
  return n;
}

QMat drazin(const QMat& a) {
  require_square(a, "drazin");
  const int l = static_cast<int>(index(a));
  const QMat al = power(a, l);
  const double tol = power_rank_tolerance(a.rows(), a.cols(), norm2(a), 2 * l + 1);
  return al * pinv(power(a, 2 * l + 1), tol) * al;
}

QMat inverse(const QMat& a, std::optional<double> tol_opt) {
  require_square(a, "inverse");
  Eigen::JacobiSVD<CMat> csvd(chi(a), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RVec& sv = csvd.singularValues();
  if (sv.size() == 0) return QMat(0, 0);
  const double tol = tol_opt.value_or(rank_tolerance(a, sv(0)));
  if (sv(sv.size() - 1) <= tol) {
    throw SingularError("inverse: matrix is numerically singular (sigma_min = " +
                        std::to_string(sv(sv.size() - 1)) + ")");
  }
  const CMat x = csvd.matrixV() * sv.cwiseInverse().asDiagonal() * csvd.matrixU().adjoint();
  return chi_inverse(x);
}

std::vector<cplx> chi_eigenvalues(const QMat& a) {
  require_square(a, "eigenvalues");
  Eigen::ComplexEigenSolver<CMat> es(chi(a), false);
  const CVec& ev = es.eigenvalues();
  return std::vector<cplx>(ev.data(), ev.data() + ev.size());
}

std::vector<cplx> right_spectrum(const QMat& a) {
  const std::vector<cplx> ev = chi_eigenvalues(a);
  double scale = 0.0;
  for (const auto& e : ev) scale = std::max(scale, std::abs(e));
  const double tol = 1e-10 * std::max(scale, 1.0);

  std::vector<cplx> upper;
  std::vector<double> reals;
  for (const auto& e : ev) {
    if (e.imag() > tol) {
      upper.push_back(e);
    } else if (std::abs(e.imag()) <= tol) {
      reals.push_back(e.real());
    }
  }
  std::sort(reals.begin(), reals.end());
  for (std::size_t i = 0; i < reals.size(); i += 2) upper.emplace_back(reals[i], 0.0);

  const auto n = static_cast<std::size_t>(a.rows());
  if (upper.size() != n) {
    // Fallback for ill-separated near-real pairs: top half by imaginary part.
    std::vector<cplx> sorted = ev;
    std::sort(sorted.begin(), sorted.end(),
              [](const cplx& p, const cplx& q) { return p.imag() > q.imag(); });
    sorted.resize(n);
    for (auto& e : sorted) e = cplx(e.real(), std::abs(e.imag()));
    upper = std::move(sorted);
  }
  std::sort(upper.begin(), upper.end(), [](const cplx& p, const cplx& q) {
    return std::abs(p) != std::abs(q) ? std::abs(p) > std::abs(q) : p.imag() > q.imag();
  });
  return upper;
}

double right_spectral_radius(const QMat& a) {
  double r = 0.0;
  for (const auto& e : chi_eigenvalues(a)) r = std::max(r, std::abs(e));
  return r;
}

double norm2(const QMat& a) {
  const RVec sv = chi_singular_values(a);
  return sv.size() > 0 ? sv(0) : 0.0;
}

}  // namespace qtl
