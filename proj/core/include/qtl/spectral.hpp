#pragma once

#include <optional>
#include <vector>

#include "qtl/tensor.hpp"

namespace qtl {

/// Controls the dual-route cross-checks. With `paranoid` set, every operation
/// that has both a per-block and a whole-matrix (or tensor-formula) route
/// evaluates both and throws InconsistencyError when they disagree.
struct SpectralOptions {
  bool paranoid = true;
};

/// Normalized DFT matrix, [F]_{st} = n3^{-1/2} w^{st}, w = exp(-2 pi i / n3).
CMat dft_matrix(Index n3);

/// The n3 quaternion blocks of (F ⊗ I) bcirc_z(A) (F^* ⊗ I).
struct BlockDiag {
  Index rows = 0;
  Index cols = 0;
  std::vector<QMat> blocks;

  Index n3() const { return static_cast<Index>(blocks.size()); }
};

/// Blocks from a DFT along the tubes: D-hat_s = sum_t w^{st} D^(t) and
/// C-hat_s = sum_t w^{-st} C^(t). In paranoid mode the dense conjugation of
/// bcirc_z(A) by F ⊗ I is evaluated too; off-diagonal leakage above
/// 1e-9 ||bcirc_z(A)||_F, or disagreement, throws InconsistencyError.
BlockDiag block_diagonalize(const QTensor& a, const SpectralOptions& opts = {});

/// Inverse transform. In paranoid mode also reassembles densely and verifies
/// the z-block circulant structure of the result.
QTensor block_reassemble(const BlockDiag& b, const SpectralOptions& opts = {});

struct TensorSvd {
  QTensor u;  ///< n1 x n1 x n3, unitary
  QTensor s;  ///< n1 x n2 x n3, f-diagonal
  QTensor v;  ///< n2 x n2 x n3, unitary
};

TensorSvd qt_svd(const QTensor& a, const SpectralOptions& opts = {});

/// sigma_i = ||S(i,i,:)||_F for i < min(n1, n2).
std::vector<double> singular_tubes(const QTensor& s);

QTensor qt_pinv(const QTensor& a, const SpectralOptions& opts = {});

struct QtRank {
  Index bcirc_rank = 0;  ///< sum of block ranks, the rank of bcirc_z(A)
  Index tubal_rank = 0;  ///< number of nonzero singular tubes
};

QtRank qt_rank(const QTensor& a, const SpectralOptions& opts = {});

/// Max over blocks of the matrix index; in paranoid mode also the minimal k
/// with rank(bcirc_z(A^{k+1})) = rank(bcirc_z(A^k)).
Index qt_index(const QTensor& a, const SpectralOptions& opts = {});

/// Rank-stabilization route alone, on whole bcirc_z matrices of tensor powers.
Index qt_index_by_rank_stabilization(const QTensor& a);

/// A^l * (A^{2l+1})^† * A^l with l defaulting to the QT-index.
QTensor qt_drazin(const QTensor& a, std::optional<int> l = std::nullopt,
                  const SpectralOptions& opts = {});

/// Both evaluations of the Drazin formula, without cross-checking.
struct DrazinRoutes {
  int l = 0;
  QTensor tensor_formula;  ///< A^l * (A^{2l+1})^† * A^l in tensor arithmetic
  QTensor per_block;       ///< B^l pinv(B^{2l+1}) B^l on each DFT block
};

DrazinRoutes qt_drazin_routes(const QTensor& a, std::optional<int> l = std::nullopt);

QTensor qt_inverse(const QTensor& a, const SpectralOptions& opts = {});

/// Scaled residuals of the four Penrose equations, each divided by
/// max(1, ||reference term||_s).
struct PenroseResiduals {
  double axa = 0.0;     ///< A X A = A
  double xax = 0.0;     ///< X A X = X
  double ax_sym = 0.0;  ///< (A X)^* = A X
  double xa_sym = 0.0;  ///< (X A)^* = X A

  double max() const;
};

PenroseResiduals pinv_residuals(const QTensor& a, const QTensor& x);

/// Scaled residuals of the three Drazin equations for index bound k.
struct DrazinResiduals {
  int k = 0;
  double akxa = 0.0;     ///< A^k X A = A^k
  double xax = 0.0;      ///< X A X = X
  double commute = 0.0;  ///< A X = X A

  double max() const;
};

DrazinResiduals drazin_residuals(const QTensor& a, const QTensor& x, int k);

double qt_spectral_norm(const QTensor& a, const SpectralOptions& opts = {});
double qt_spectral_radius(const QTensor& a, const SpectralOptions& opts = {});

}  // namespace qtl
