#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "qtl/perturb.hpp"
#include "qtl/spectral.hpp"

namespace qtl::testing {

using Rng = std::mt19937_64;

inline Quat random_quat(Rng& rng) {
  std::normal_distribution<double> nd;
  return Quat(nd(rng), nd(rng), nd(rng), nd(rng));
}

inline QMat random_qmat(Rng& rng, Index m, Index n) {
  QMat out(m, n);
  for (Index r = 0; r < m; ++r) {
    for (Index c = 0; c < n; ++c) out.set(r, c, random_quat(rng));
  }
  return out;
}

inline QTensor random_tensor(Rng& rng, Index n1, Index n2, Index n3) {
  std::vector<QMat> slices;
  for (Index t = 0; t < n3; ++t) slices.push_back(random_qmat(rng, n1, n2));
  return QTensor(std::move(slices));
}

inline int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline double uniform_real(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline QMat random_unitary(Rng& rng, Index n) { return svd(random_qmat(rng, n, n)).u; }

/// U diag(s) V^* with singular values drawn from [0.5, 2].
inline QMat well_conditioned(Rng& rng, Index n) {
  QMat s(n, n);
  for (Index i = 0; i < n; ++i) s.set(i, i, Quat(uniform_real(rng, 0.5, 2.0)));
  return random_unitary(rng, n) * s * random_unitary(rng, n).adjoint();
}

/// Block P diag(M, N) P^* with N a nilpotent of the requested index and its
/// Drazin inverse P diag(M^{-1}, 0) P^*.
struct PlantedBlock {
  QMat block;
  QMat drazin;
  int index = 0;
};

/// `nil` fixes the size of the nilpotent part (random when negative).
inline PlantedBlock planted_block(Rng& rng, Index n, int nu, Index nil = -1) {
  if (nu == 0) {
    nil = 0;
  } else if (nil < nu) {
    nil = uniform_int(rng, nu, static_cast<int>(n));
  }
  const Index core = n - nil;
  QMat mid(n, n);
  QMat mid_d(n, n);
  if (core > 0) {
    const QMat m = well_conditioned(rng, core);
    const QMat mi = inverse(m);
    for (Index r = 0; r < core; ++r) {
      for (Index c = 0; c < core; ++c) {
        mid.set(r, c, m(r, c));
        mid_d.set(r, c, mi(r, c));
      }
    }
  }
  // Jordan chain of length nu inside the nilpotent part, zeros elsewhere.
  for (Index i = 0; i + 1 < nu; ++i) mid.set(core + i, core + i + 1, Quat(1.0));
  const QMat p = random_unitary(rng, n);
  return {p * mid * p.adjoint(), p * mid_d * p.adjoint(), nu};
}

struct PlantedTensor {
  QTensor a;
  QTensor drazin;
  int index = 0;
  std::vector<int> block_indices;
};

/// Tensor whose DFT blocks have the given indices (one per block).
inline PlantedTensor planted_tensor(Rng& rng, Index n, const std::vector<int>& indices,
                                    bool nilpotent = false) {
  BlockDiag b{n, n, {}};
  BlockDiag d{n, n, {}};
  for (int nu : indices) {
    auto pb = planted_block(rng, n, nu, nilpotent ? n : -1);
    b.blocks.push_back(std::move(pb.block));
    d.blocks.push_back(std::move(pb.drazin));
  }
  return {block_reassemble(b), block_reassemble(d),
          *std::max_element(indices.begin(), indices.end()), indices};
}

/// Random planted tensor with block indices in [0, max_index] and at least
/// one block attaining max_index.
inline PlantedTensor random_planted(Rng& rng, int max_index) {
  const Index n = uniform_int(rng, std::max(2, max_index), 4);
  const Index n3 = uniform_int(rng, 1, 4);
  std::vector<int> idx;
  for (Index t = 0; t < n3; ++t) idx.push_back(uniform_int(rng, 0, max_index));
  idx[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(n3) - 1))] = max_index;
  return planted_tensor(rng, n, idx);
}

/// E = (A A^D) E0 (A A^D), scaled so that ||A^D * E||_s equals `target`.
inline QTensor core_perturbation(Rng& rng, const QTensor& a, const QTensor& ad, double target) {
  const SpectralOptions fast{false};
  const QTensor proj = a * ad;
  const QTensor e0 = proj * random_tensor(rng, a.n1(), a.n2(), a.n3()) * proj;
  const double s = qt_spectral_norm(ad * e0, fast);
  return (target / s) * e0;
}

inline double rel_residual(const QMat& x, const QMat& y) {
  return (x - y).frobenius_norm() / std::max(1.0, y.frobenius_norm());
}

/// Greedy matching of the nonzero parts of two eigenvalue multisets.
inline bool same_nonzero_spectrum(std::vector<cplx> x, std::vector<cplx> y, double scale,
                                  double tol) {
  auto nonzero = [&](std::vector<cplx>& v) {
    v.erase(std::remove_if(v.begin(), v.end(),
                           [&](const cplx& z) { return std::abs(z) <= 1e-7 * scale; }),
            v.end());
    std::sort(v.begin(), v.end(), [](const cplx& p, const cplx& q) { return std::abs(p) < std::abs(q); });
  };
  nonzero(x);
  nonzero(y);
  if (x.size() != y.size()) return false;
  std::vector<bool> used(y.size(), false);
  for (const auto& z : x) {
    std::size_t best = y.size();
    double dist = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (used[i]) continue;
      const double d = std::abs(z - y[i]);
      if (best == y.size() || d < dist) {
        best = i;
        dist = d;
      }
    }
    if (dist > tol * std::max(1.0, scale)) return false;
    used[best] = true;
  }
  return true;
}

}  // namespace qtl::testing
