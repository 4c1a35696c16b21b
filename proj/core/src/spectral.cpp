#include "qtl/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qtl/errors.hpp"

namespace qtl {

namespace {

CMat kron_identity(const CMat& f, Index n) {
  CMat out = CMat::Zero(f.rows() * n, f.cols() * n);
  for (Index s = 0; s < f.rows(); ++s) {
    for (Index t = 0; t < f.cols(); ++t) {
      out.block(s * n, t * n, n, n).diagonal().setConstant(f(s, t));
    }
  }
  return out;
}

void require_square_slices(const QTensor& a, const char* op) {
  if (!a.has_square_slices()) {
    throw DimensionError(std::string(op) + ": frontal slices must be square, got " +
                         std::to_string(a.n1()) + "x" + std::to_string(a.n2()));
  }
}

// Rank threshold for bcirc_z(A^k) given ||A||_s, shared by every block.
double tensor_power_tolerance(const QTensor& a, double norm_s, int k) {
  return power_rank_tolerance(a.n1() * a.n3(), a.n2() * a.n3(), norm_s, k);
}

double block_norm_max(const BlockDiag& b) {
  double m = 0.0;
  for (const auto& blk : b.blocks) m = std::max(m, norm2(blk));
  return m;
}

BlockDiag map_blocks(const BlockDiag& b, Index rows, Index cols,
                     const auto& fn) {
  BlockDiag out{rows, cols, {}};
  out.blocks.reserve(b.blocks.size());
  for (const auto& blk : b.blocks) out.blocks.push_back(fn(blk));
  return out;
}

QTensor pinv_with_tolerance(const QTensor& a, double tol, const SpectralOptions& opts) {
  const BlockDiag bd = block_diagonalize(a, opts);
  const QTensor x = block_reassemble(
      map_blocks(bd, a.n2(), a.n1(), [tol](const QMat& m) { return pinv(m, tol); }), opts);
  if (opts.paranoid) {
    const QTensor whole = tensor_from_bcirc_z(pinv(a.bcirc_z(), tol), a.n2(), a.n3());
    const double diff = tensor_distance(x, whole);
    if (diff > 1e-7 * std::max(1.0, x.frobenius_norm())) {
      throw InconsistencyError("qt_pinv: per-block and whole-matrix routes differ by " +
                               std::to_string(diff));
    }
  }
  return x;
}

}  // namespace

CMat dft_matrix(Index n3) {
  CMat f(n3, n3);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n3));
  for (Index s = 0; s < n3; ++s) {
    for (Index t = 0; t < n3; ++t) {
      const double angle =
          -2.0 * std::numbers::pi * static_cast<double>((s * t) % n3) / static_cast<double>(n3);
      f(s, t) = std::polar(scale, angle);
    }
  }
  return f;
}

namespace {

// exp(-2 pi i k / n3) for k = 0..n3-1.
std::vector<cplx> roots(Index n3) {
  std::vector<cplx> w(static_cast<std::size_t>(n3));
  for (Index k = 0; k < n3; ++k) {
    w[static_cast<std::size_t>(k)] =
        std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n3));
  }
  return w;
}

// D-hat_s = sum_t w^{st} D^(t) and C-hat_s = sum_t w^{-st} C^(t).
BlockDiag dft_blocks(const QTensor& a) {
  const Index n3 = a.n3();
  const auto w = roots(n3);
  BlockDiag out{a.n1(), a.n2(), {}};
  out.blocks.reserve(static_cast<std::size_t>(n3));
  for (Index s = 0; s < n3; ++s) {
    CMat d = CMat::Zero(a.n1(), a.n2());
    CMat c = CMat::Zero(a.n1(), a.n2());
    for (Index t = 0; t < n3; ++t) {
      const Index k = (s * t) % n3;
      d += w[static_cast<std::size_t>(k)] * a.slice(t).d();
      c += w[static_cast<std::size_t>((n3 - k) % n3)] * a.slice(t).c();
    }
    out.blocks.emplace_back(std::move(d), std::move(c));
  }
  return out;
}

// Inverse of dft_blocks: D^(t) = n3^{-1} sum_s w^{-st} D-hat_s, C^(t) likewise with w^{st}.
QTensor inverse_dft(const BlockDiag& b) {
  const Index n3 = b.n3();
  const auto w = roots(n3);
  const double scale = 1.0 / static_cast<double>(n3);
  std::vector<QMat> slices;
  slices.reserve(static_cast<std::size_t>(n3));
  for (Index t = 0; t < n3; ++t) {
    CMat d = CMat::Zero(b.rows, b.cols);
    CMat c = CMat::Zero(b.rows, b.cols);
    for (Index s = 0; s < n3; ++s) {
      const Index k = (s * t) % n3;
      const QMat& blk = b.blocks[static_cast<std::size_t>(s)];
      d += w[static_cast<std::size_t>((n3 - k) % n3)] * blk.d();
      c += w[static_cast<std::size_t>(k)] * blk.c();
    }
    slices.emplace_back(scale * d, scale * c);
  }
  return QTensor(std::move(slices));
}

// (F ⊗ I)(M_D + j M_C)(F^* ⊗ I) = F' M_D F'^* + j conj(F') M_C F'^*, checked
// for off-diagonal leakage.
BlockDiag dense_blocks(const QTensor& a) {
  const Index n1 = a.n1();
  const Index n2 = a.n2();
  const Index n3 = a.n3();
  const QMat& m = a.bcirc_z();
  const CMat f = dft_matrix(n3);
  const CMat left = kron_identity(f, n1);
  const CMat right = kron_identity(f.adjoint(), n2);
  const CMat d = left * m.d() * right;
  const CMat c = left.conjugate() * m.c() * right;

  BlockDiag out{n1, n2, {}};
  CMat off_d = d;
  CMat off_c = c;
  for (Index s = 0; s < n3; ++s) {
    out.blocks.emplace_back(d.block(s * n1, s * n2, n1, n2), c.block(s * n1, s * n2, n1, n2));
    off_d.block(s * n1, s * n2, n1, n2).setZero();
    off_c.block(s * n1, s * n2, n1, n2).setZero();
  }
  const double leakage = std::sqrt(off_d.squaredNorm() + off_c.squaredNorm());
  if (leakage > 1e-9 * m.frobenius_norm()) {
    throw InconsistencyError("block_diagonalize: off-diagonal leakage " +
                             std::to_string(leakage));
  }
  return out;
}

// (F^* ⊗ I)(B_D + j B_C)(F ⊗ I) = F'^* B_D F' + j conj(F'^*) B_C F', and
// conj(F^*) = F because F is symmetric.
QTensor dense_reassemble(const BlockDiag& b) {
  const Index n3 = b.n3();
  const Index r = b.rows;
  const Index c = b.cols;
  CMat d = CMat::Zero(r * n3, c * n3);
  CMat cc = CMat::Zero(r * n3, c * n3);
  for (Index s = 0; s < n3; ++s) {
    const QMat& blk = b.blocks[static_cast<std::size_t>(s)];
    d.block(s * r, s * c, r, c) = blk.d();
    cc.block(s * r, s * c, r, c) = blk.c();
  }
  const CMat f = dft_matrix(n3);
  const CMat right = kron_identity(f, c);
  QMat m(kron_identity(f.adjoint(), r) * d * right, kron_identity(f, r) * cc * right);
  return tensor_from_bcirc_z(m, r, n3, /*verify=*/true);
}

double blocks_distance(const BlockDiag& x, const BlockDiag& y) {
  double sq = 0.0;
  for (std::size_t s = 0; s < x.blocks.size(); ++s) {
    const double d = (x.blocks[s] - y.blocks[s]).frobenius_norm();
    sq += d * d;
  }
  return std::sqrt(sq);
}

}  // namespace

BlockDiag block_diagonalize(const QTensor& a, const SpectralOptions& opts) {
  BlockDiag out = dft_blocks(a);
  if (opts.paranoid) {
    const BlockDiag dense = dense_blocks(a);
    const double diff = blocks_distance(out, dense);
    if (diff > 1e-9 * std::max(1.0, a.bcirc_z().frobenius_norm())) {
      throw InconsistencyError("block_diagonalize: slice DFT and dense conjugation differ by " +
                               std::to_string(diff));
    }
  }
  return out;
}

QTensor block_reassemble(const BlockDiag& b, const SpectralOptions& opts) {
  if (b.n3() < 1) throw DimensionError("block_reassemble: no blocks");
  for (const auto& blk : b.blocks) {
    if (blk.rows() != b.rows || blk.cols() != b.cols) {
      throw DimensionError("block_reassemble: blocks must share shape");
    }
  }
  QTensor out = inverse_dft(b);
  if (opts.paranoid) {
    const QTensor dense = dense_reassemble(b);
    const double diff = tensor_distance(out, dense);
    if (diff > 1e-9 * std::max(1.0, dense.frobenius_norm())) {
      throw InconsistencyError("block_reassemble: inverse DFT and dense route differ by " +
                               std::to_string(diff));
    }
  }
  return out;
}

TensorSvd qt_svd(const QTensor& a, const SpectralOptions& opts) {
  const BlockDiag bd = block_diagonalize(a, opts);
  BlockDiag u{a.n1(), a.n1(), {}};
  BlockDiag s{a.n1(), a.n2(), {}};
  BlockDiag v{a.n2(), a.n2(), {}};
  for (const auto& blk : bd.blocks) {
    QSvd f = svd(blk);
    Eigen::MatrixXd sd = Eigen::MatrixXd::Zero(a.n1(), a.n2());
    for (Index i = 0; i < f.s.size(); ++i) sd(i, i) = f.s(i);
    u.blocks.push_back(std::move(f.u));
    s.blocks.push_back(QMat::from_real(sd));
    v.blocks.push_back(std::move(f.v));
  }
  return {block_reassemble(u, opts), block_reassemble(s, opts), block_reassemble(v, opts)};
}

std::vector<double> singular_tubes(const QTensor& s) {
  const Index m = std::min(s.n1(), s.n2());
  std::vector<double> out(static_cast<std::size_t>(m), 0.0);
  for (Index i = 0; i < m; ++i) {
    double sq = 0.0;
    for (const auto& sl : s.slices()) sq += std::norm(sl.d()(i, i)) + std::norm(sl.c()(i, i));
    out[static_cast<std::size_t>(i)] = std::sqrt(sq);
  }
  return out;
}

QTensor qt_pinv(const QTensor& a, const SpectralOptions& opts) {
  const BlockDiag bd = block_diagonalize(a, opts);
  const double tol = rank_tolerance(a.bcirc_z(), block_norm_max(bd));
  return pinv_with_tolerance(a, tol, opts);
}

QtRank qt_rank(const QTensor& a, const SpectralOptions& opts) {
  const BlockDiag bd = block_diagonalize(a, opts);
  const double smax = block_norm_max(bd);
  const double tol = rank_tolerance(a.bcirc_z(), smax);
  QtRank out;
  for (const auto& blk : bd.blocks) out.bcirc_rank += rank(blk, tol);

  const std::vector<double> tubes = singular_tubes(qt_svd(a, opts).s);
  if (!tubes.empty()) {
    const double tube_tol = static_cast<double>(std::max(a.n1(), a.n2()) * a.n3()) *
                            std::numeric_limits<double>::epsilon() * tubes.front();
    for (double t : tubes) {
      if (t > tube_tol) ++out.tubal_rank;
    }
  }
  return out;
}

Index qt_index_by_rank_stabilization(const QTensor& a) {
  require_square_slices(a, "qt_index");
  const double na = norm2(a.bcirc_z());
  const Index dim = a.n1() * a.n3();
  QTensor p = identity_tensor(a.n1(), a.n3());
  Index prev = dim;
  for (int k = 0; k <= a.n1(); ++k) {
    p = qt_product(p, a);
    const Index next = rank(p.bcirc_z(), tensor_power_tolerance(a, na, k + 1));
    if (next == prev) return k;
    prev = next;
  }
  return a.n1();
}

Index qt_index(const QTensor& a, const SpectralOptions& opts) {
  require_square_slices(a, "qt_index");
  const BlockDiag bd = block_diagonalize(a, opts);
  const double na = block_norm_max(bd);
  const Index n = a.n1();

  Index result = 0;
  for (const auto& blk : bd.blocks) {
    QMat p = QMat::identity(n);
    Index prev = n;
    Index idx = n;
    for (int k = 0; k <= n; ++k) {
      p = p * blk;
      const Index next = rank(p, tensor_power_tolerance(a, na, k + 1));
      if (next == prev) {
        idx = k;
        break;
      }
      prev = next;
    }
    result = std::max(result, idx);
  }

  if (opts.paranoid) {
    const Index other = qt_index_by_rank_stabilization(a);
    if (other != result) {
      throw InconsistencyError("qt_index: block route gives " + std::to_string(result) +
                               ", rank-stabilization route gives " + std::to_string(other));
    }
  }
  return result;
}

namespace {

Index checked_exponent(const QTensor& a, std::optional<int> l_opt, const SpectralOptions& opts) {
  require_square_slices(a, "qt_drazin");
  const Index k = qt_index(a, opts);
  if (l_opt && *l_opt < k) {
    throw PreconditionError("qt_drazin: l = " + std::to_string(*l_opt) +
                            " is below the QT-index " + std::to_string(k));
  }
  return l_opt.value_or(static_cast<int>(k));
}

double drazin_tolerance(const QTensor& a, int l) {
  return tensor_power_tolerance(a, block_norm_max(dft_blocks(a)), 2 * l + 1);
}

QTensor drazin_tensor_route(const QTensor& a, int l, double tol, const SpectralOptions& opts) {
  const QTensor al = qt_power(a, l);
  return al * pinv_with_tolerance(qt_power(a, 2 * l + 1), tol, opts) * al;
}

QTensor drazin_block_route(const QTensor& a, int l, double tol, const SpectralOptions& opts) {
  const BlockDiag bd = block_diagonalize(a, opts);
  return block_reassemble(map_blocks(bd, a.n1(), a.n1(), [&](const QMat& m) {
    const QMat ml = power(m, l);
    return ml * pinv(power(m, 2 * l + 1), tol) * ml;
  }), opts);
}

}  // namespace

QTensor qt_drazin(const QTensor& a, std::optional<int> l_opt, const SpectralOptions& opts) {
  const int l = static_cast<int>(checked_exponent(a, l_opt, opts));
  const double tol = drazin_tolerance(a, l);
  const QTensor x = drazin_tensor_route(a, l, tol, opts);
  if (opts.paranoid) {
    const QTensor y = drazin_block_route(a, l, tol, opts);
    const double diff = tensor_distance(x, y);
    if (diff > 1e-7 * std::max(1.0, x.frobenius_norm())) {
      throw InconsistencyError("qt_drazin: tensor formula and per-block routes differ by " +
                               std::to_string(diff));
    }
  }
  return x;
}

DrazinRoutes qt_drazin_routes(const QTensor& a, std::optional<int> l_opt) {
  const SpectralOptions fast{false};
  const int l = static_cast<int>(checked_exponent(a, l_opt, fast));
  const double tol = drazin_tolerance(a, l);
  return {l, drazin_tensor_route(a, l, tol, fast), drazin_block_route(a, l, tol, fast)};
}

QTensor qt_inverse(const QTensor& a, const SpectralOptions& opts) {
  require_square_slices(a, "qt_inverse");
  const BlockDiag bd = block_diagonalize(a, opts);
  const double tol = rank_tolerance(a.bcirc_z(), block_norm_max(bd));
  return block_reassemble(
      map_blocks(bd, a.n1(), a.n1(), [tol](const QMat& m) { return inverse(m, tol); }), opts);
}

double qt_spectral_norm(const QTensor& a, const SpectralOptions& opts) {
  const double blocks = block_norm_max(block_diagonalize(a, opts));
  if (opts.paranoid) {
    const double whole = norm2(a.bcirc_z());
    if (std::abs(whole - blocks) > 1e-9 * std::max(1.0, whole)) {
      throw InconsistencyError("qt_spectral_norm: block route " + std::to_string(blocks) +
                               " vs whole-matrix route " + std::to_string(whole));
    }
  }
  return blocks;
}

double qt_spectral_radius(const QTensor& a, const SpectralOptions& opts) {
  require_square_slices(a, "qt_spectral_radius");
  const BlockDiag bd = block_diagonalize(a, opts);
  double blocks = 0.0;
  for (const auto& blk : bd.blocks) blocks = std::max(blocks, right_spectral_radius(blk));
  if (opts.paranoid) {
    const double whole = right_spectral_radius(a.bcirc_z());
    // Absolute term for defective eigenvalues.
    const double tol = 1e-9 * std::max(whole, blocks) + 1e-7 * block_norm_max(bd);
    if (std::abs(whole - blocks) > tol) {
      throw InconsistencyError("qt_spectral_radius: block route " + std::to_string(blocks) +
                               " vs whole-matrix route " + std::to_string(whole));
    }
  }
  return blocks;
}

namespace {

double scaled(const QTensor& lhs, const QTensor& rhs) {
  const SpectralOptions fast{false};
  return qt_spectral_norm(lhs - rhs, fast) / std::max(1.0, qt_spectral_norm(rhs, fast));
}

}  // namespace

double PenroseResiduals::max() const { return std::max({axa, xax, ax_sym, xa_sym}); }

PenroseResiduals pinv_residuals(const QTensor& a, const QTensor& x) {
  const QTensor ax = a * x;
  const QTensor xa = x * a;
  PenroseResiduals r;
  r.axa = scaled(ax * a, a);
  r.xax = scaled(x * ax, x);
  r.ax_sym = scaled(qt_transpose(ax), ax);
  r.xa_sym = scaled(qt_transpose(xa), xa);
  return r;
}

double DrazinResiduals::max() const { return std::max({akxa, xax, commute}); }

DrazinResiduals drazin_residuals(const QTensor& a, const QTensor& x, int k) {
  if (!a.has_square_slices()) throw DimensionError("drazin_residuals: slices must be square");
  const QTensor ak = qt_power(a, k);
  const QTensor ax = a * x;
  DrazinResiduals r;
  r.k = k;
  r.akxa = scaled(ak * x * a, ak);
  r.xax = scaled(x * ax, x);
  r.commute = scaled(x * a, ax);
  return r;
}

}  // namespace qtl
