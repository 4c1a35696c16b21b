#include <gtest/gtest.h>

#include "qtl/errors.hpp"
#include "support.hpp"

using namespace qtl;
using namespace qtl::testing;

namespace {

QMat scalar(const Quat& q) {
  QMat m(1, 1);
  m.set(0, 0, q);
  return m;
}

QMat loop_product(const QMat& a, const QMat& b) {
  QMat out(a.rows(), b.cols());
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < b.cols(); ++c) {
      Quat acc;
      for (Index k = 0; k < a.cols(); ++k) acc = acc + a(r, k) * b(k, c);
      out.set(r, c, acc);
    }
  }
  return out;
}

QMat nilpotent2() {
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(2, 2);
  n(0, 1) = 1.0;
  return QMat::from_real(n);
}

double dist(const QMat& a, const QMat& b) { return (a - b).frobenius_norm(); }

}  // namespace

TEST(QMat, EntryAccessUsesSplit) {
  QMat m(2, 3);
  const Quat q(1.0, 2.0, 3.0, 4.0);
  m.set(1, 2, q);
  EXPECT_EQ(m(1, 2), q);
  EXPECT_EQ(m.d()(1, 2), cplx(1.0, 2.0));
  EXPECT_EQ(m.c()(1, 2), cplx(3.0, -4.0));
}

TEST(QMat, MismatchedPartsRejected) {
  EXPECT_THROW(QMat(CMat::Zero(2, 2), CMat::Zero(2, 3)), DimensionError);
}

TEST(QMat, JTimesJ) {
  const QMat j = scalar(Quat::j());
  const QMat p = j * j;
  EXPECT_EQ(p(0, 0), Quat(-1.0));
}

TEST(QMat, IdentityIsNeutral) {
  Rng rng(11);
  const QMat b = random_qmat(rng, 3, 2);
  EXPECT_LT(dist(QMat::identity(3) * b, b), 1e-15);
  EXPECT_LT(dist(b * QMat::identity(2), b), 1e-15);
}

TEST(QMat, ProductMatchesEntrywiseOracle) {
  Rng rng(12);
  for (int n = 0; n < 20; ++n) {
    const QMat a = random_qmat(rng, 3, 3), b = random_qmat(rng, 3, 3);
    EXPECT_LT(dist(a * b, loop_product(a, b)), 1e-12);
  }
  const QMat a = random_qmat(rng, 2, 4), b = random_qmat(rng, 4, 3);
  EXPECT_LT(dist(a * b, loop_product(a, b)), 1e-12);
}

TEST(QMat, ProductShapeMismatch) {
  EXPECT_THROW(QMat(2, 3) * QMat(2, 3), DimensionError);
  QMat a(2, 2);
  EXPECT_THROW(a += QMat(2, 3), DimensionError);
}

TEST(QMat, Adjoint) {
  EXPECT_EQ(scalar(Quat::j()).adjoint()(0, 0), -Quat::j());
  Rng rng(13);
  const QMat a = random_qmat(rng, 3, 4);
  EXPECT_EQ(dist(a.adjoint().adjoint(), a), 0.0);
  for (Index r = 0; r < 3; ++r) {
    for (Index c = 0; c < 4; ++c) EXPECT_EQ(a.adjoint()(c, r), conj(a(r, c)));
  }
  Eigen::MatrixXd s(2, 2);
  s << 1.0, 2.0, 2.0, -3.0;
  const QMat sym = QMat::from_real(s);
  EXPECT_EQ(dist(sym.adjoint(), sym), 0.0);
  const QMat b = random_qmat(rng, 4, 2);
  EXPECT_LT(dist((a * b).adjoint(), b.adjoint() * a.adjoint()), 1e-12);
}

TEST(QMat, ChiOfJ) {
  const ChiMat m = chi(scalar(Quat::j()));
  ChiMat want(2, 2);
  want << 0.0, 1.0, -1.0, 0.0;
  EXPECT_LT((m - want).norm(), 1e-15);
}

TEST(QMat, ChiIsHomomorphism) {
  Rng rng(14);
  for (int n = 0; n < 10; ++n) {
    const QMat a = random_qmat(rng, 4, 4), b = random_qmat(rng, 4, 4);
    EXPECT_LT((chi(a * b) - chi(a) * chi(b)).norm(), 1e-11);
    EXPECT_LT((chi(a.adjoint()) - chi(a).adjoint()).norm(), 1e-15);
  }
}

TEST(QMat, ChiRoundTrip) {
  Rng rng(15);
  const QMat a = random_qmat(rng, 3, 5);
  EXPECT_EQ(dist(chi_inverse(chi(a)), a), 0.0);
  EXPECT_LT(chi_structure_defect(chi(a)), 1e-15);
}

TEST(QMat, ChiInverseRejectsUnstructured) {
  ChiMat m = ChiMat::Zero(2, 2);
  m(0, 0) = 1.0;
  EXPECT_THROW(chi_inverse(m), StructureError);
  EXPECT_THROW(chi_inverse(ChiMat::Zero(3, 2)), StructureError);
}

TEST(QMat, SvdBasicCases) {
  const QSvd id = svd(QMat::identity(3));
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(id.s(i), 1.0, 1e-14);

  const QMat twoj = scalar(2.0 * Quat::j());
  const QSvd f = svd(twoj);
  EXPECT_NEAR(f.s(0), 2.0, 1e-14);
  QMat s(1, 1);
  s.set(0, 0, Quat(f.s(0)));
  EXPECT_LT(dist(f.u * s * f.v.adjoint(), twoj), 1e-10);
}

TEST(QMat, SvdReconstructsAndIsUnitary) {
  Rng rng(16);
  const std::pair<Index, Index> shapes[] = {{3, 2}, {2, 3}, {4, 4}, {1, 3}, {3, 1}};
  for (const auto& [m, n] : shapes) {
    const QMat a = random_qmat(rng, m, n);
    const QSvd f = svd(a);
    QMat s(m, n);
    for (Index i = 0; i < f.s.size(); ++i) s.set(i, i, Quat(f.s(i)));
    EXPECT_LT(norm2(a - f.u * s * f.v.adjoint()), 1e-10 * f.s(0));
    EXPECT_LT(dist(f.u.adjoint() * f.u, QMat::identity(m)), 1e-12);
    EXPECT_LT(dist(f.v.adjoint() * f.v, QMat::identity(n)), 1e-12);
    for (Index i = 1; i < f.s.size(); ++i) EXPECT_GE(f.s(i - 1), f.s(i));
  }
}

TEST(QMat, SvdOfRankDeficient) {
  Rng rng(17);
  const QMat a = random_qmat(rng, 4, 2) * random_qmat(rng, 2, 4);
  const QSvd f = svd(a);
  QMat s(4, 4);
  for (Index i = 0; i < 4; ++i) s.set(i, i, Quat(f.s(i)));
  EXPECT_LT(norm2(a - f.u * s * f.v.adjoint()), 1e-10 * f.s(0));
  EXPECT_LT(dist(f.u.adjoint() * f.u, QMat::identity(4)), 1e-12);
  EXPECT_LT(f.s(2), 1e-12 * f.s(0));
}

TEST(QMat, ChiSingularValuesComeInPairs) {
  Rng rng(18);
  const RVec s = chi_singular_values(random_qmat(rng, 3, 3));
  ASSERT_EQ(s.size(), 6);
  for (Index i = 0; i < 6; i += 2) EXPECT_NEAR(s(i), s(i + 1), 1e-12 * s(0));
}

TEST(QMat, PinvBasicCases) {
  EXPECT_LT(dist(pinv(QMat::identity(3)), QMat::identity(3)), 1e-14);
  const QMat z = pinv(QMat(2, 3));
  EXPECT_EQ(z.rows(), 3);
  EXPECT_EQ(z.cols(), 2);
  EXPECT_EQ(z.frobenius_norm(), 0.0);
}

TEST(QMat, PinvPenroseConditions) {
  Rng rng(19);
  const QMat cases[] = {random_qmat(rng, 3, 1) * random_qmat(rng, 1, 3), random_qmat(rng, 3, 2),
                        random_qmat(rng, 2, 4)};
  for (const QMat& a : cases) {
    const QMat x = pinv(a);
    EXPECT_LT(dist(a * x * a, a), 1e-10);
    EXPECT_LT(dist(x * a * x, x), 1e-10);
    EXPECT_LT(dist((a * x).adjoint(), a * x), 1e-10);
    EXPECT_LT(dist((x * a).adjoint(), x * a), 1e-10);
  }
}

TEST(QMat, Rank) {
  EXPECT_EQ(rank(QMat::identity(4)), 4);
  EXPECT_EQ(rank(QMat(3, 3)), 0);
  Rng rng(20);
  EXPECT_EQ(rank(random_qmat(rng, 4, 1) * random_qmat(rng, 1, 3)), 1);
  EXPECT_EQ(rank(random_qmat(rng, 4, 2) * random_qmat(rng, 2, 4)), 2);
  EXPECT_EQ(rank(random_qmat(rng, 3, 5)), 3);
}

TEST(QMat, Index) {
  Rng rng(21);
  EXPECT_EQ(qtl::index(well_conditioned(rng, 3)), 0);
  EXPECT_EQ(qtl::index(nilpotent2()), 2);
  EXPECT_EQ(qtl::index(QMat(3, 3)), 1);
  for (int nu = 0; nu <= 3; ++nu) EXPECT_EQ(qtl::index(planted_block(rng, 4, nu).block), nu);
  EXPECT_THROW(qtl::index(QMat(2, 3)), DimensionError);
}

TEST(QMat, Power) {
  Rng rng(22);
  const QMat a = random_qmat(rng, 3, 3);
  EXPECT_LT(dist(power(a, 0), QMat::identity(3)), 1e-15);
  EXPECT_LT(dist(power(a, 3), a * a * a), 1e-12);
  EXPECT_THROW(power(QMat(2, 3), 2), DimensionError);
}

TEST(QMat, Drazin) {
  Rng rng(23);
  const QMat a = well_conditioned(rng, 3);
  EXPECT_LT(dist(a * drazin(a), QMat::identity(3)), 1e-9);
  EXPECT_LT(drazin(nilpotent2()).frobenius_norm(), 1e-12);
  for (int nu = 1; nu <= 2; ++nu) {
    for (int n = 0; n < 10; ++n) {
      const PlantedBlock p = planted_block(rng, 4, nu);
      EXPECT_LT(dist(drazin(p.block), p.drazin), 1e-8 * std::max(1.0, p.drazin.frobenius_norm()));
    }
  }
  EXPECT_THROW(drazin(QMat(2, 3)), DimensionError);
}

TEST(QMat, Inverse) {
  Rng rng(24);
  const QMat a = well_conditioned(rng, 4);
  EXPECT_LT(dist(a * inverse(a), QMat::identity(4)), 1e-12);
  EXPECT_THROW(inverse(nilpotent2()), SingularError);
  EXPECT_THROW(inverse(QMat(2, 3)), DimensionError);
}

TEST(QMat, SpectralRadius) {
  EXPECT_NEAR(right_spectral_radius(QMat::identity(3)), 1.0, 1e-14);
  EXPECT_NEAR(right_spectral_radius(scalar(Quat::j())), 1.0, 1e-14);
  EXPECT_EQ(right_spectral_radius(QMat(2, 2)), 0.0);
  EXPECT_THROW(right_spectral_radius(QMat(2, 3)), DimensionError);
}

TEST(QMat, RightSpectrumOfScalar) {
  const auto s = right_spectrum(scalar(Quat(1.0, 0.0, 3.0, 4.0)));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s[0].real(), 1.0, 1e-14);
  EXPECT_NEAR(s[0].imag(), 5.0, 1e-14);
}

TEST(QMat, RightSpectrumIsSimilarityInvariant) {
  Rng rng(25);
  const QMat a = random_qmat(rng, 3, 3);
  const QMat p = random_unitary(rng, 3);
  const auto s1 = right_spectrum(a);
  const auto s2 = right_spectrum(p * a * p.adjoint());
  ASSERT_EQ(s1.size(), 3u);
  ASSERT_EQ(s2.size(), 3u);
  for (const auto& z : s1) EXPECT_GE(z.imag(), 0.0);
  EXPECT_TRUE(same_nonzero_spectrum(s1, s2, norm2(a), 1e-10));
}

TEST(QMat, Norm2) {
  EXPECT_NEAR(norm2(QMat::identity(4)), 1.0, 1e-14);
  const QMat two_j = 2.0 * (scalar(Quat::j()) * QMat::identity(1));
  EXPECT_NEAR(norm2(two_j), 2.0, 1e-14);
  EXPECT_EQ(norm2(QMat(2, 3)), 0.0);
}
