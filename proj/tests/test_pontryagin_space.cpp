#include <gtest/gtest.h>

#include <random>

#include "lab_fixtures.hpp"
#include "sslab/errors.hpp"
#include "sslab/pontryagin_space.hpp"

using namespace sslab;

namespace {

PontryaginSpace small_space(int k, std::vector<double> targets) {
  ModelConfig cfg;
  cfg.k = k;
  cfg.N = 6;
  return PontryaginSpace(build_model(cfg), targets);
}

CVector unit(Eigen::Index dim, Eigen::Index at) {
  CVector v = CVector::Zero(dim);
  v(at) = 1.0;
  return v;
}

}  // namespace

TEST(Product, RegularPartIsEuclidean) {
  const PontryaginSpace space = small_space(2, {-1.0, 0.3});
  CVector v = CVector::Zero(space.dim());
  v.tail(space.dim_h()) = CVector::LinSpaced(space.dim_h(), Complex(1.0, 0.5), Complex(-2.0, 1.0));
  const CVector phi = v.tail(space.dim_h());
  EXPECT_NEAR(std::abs(space.product(v, v) - phi.squaredNorm()), 0.0, 1e-13);
}

TEST(Product, SingularBlockExamples) {
  const PontryaginSpace half = small_space(2, {-1.0, 0.5});
  const PontryaginVector gamma_only{CVector::Ones(1), CVector::Zero(1), CVector::Zero(half.dim_h())};
  EXPECT_NEAR(half.product(gamma_only, gamma_only).real(), 0.5, 1e-15);

  const PontryaginSpace flat = small_space(2, {-1.0, 0.0});
  const PontryaginVector both{CVector::Ones(1), CVector::Ones(1), CVector::Zero(flat.dim_h())};
  EXPECT_NEAR(flat.product(both, both).real(), -2.0, 1e-15);
}

TEST(Product, GramIsHermitianWithMNegatives) {
  for (int k = 1; k <= 5; ++k) {
    const PontryaginSpace space(fixtures::default_law_model(k, 16), fixtures::targets(k));
    EXPECT_LT(hermitian_defect(space.gram()), 1e-15);
    const CMatrix block = space.gram().topLeftCorner(2 * space.m(), 2 * space.m());
    if (space.m() > 0) EXPECT_EQ(negative_squares(block), space.m()) << "k = " << k;
    EXPECT_EQ(negative_squares(space.gram()), space.m()) << "k = " << k;
  }
}

TEST(Embed, Examples) {
  const PontryaginSpace space = small_space(2, {-1.0, 0.2});
  const int h = space.dim_h();
  const CVector psi = CVector::LinSpaced(h, 1.0, 2.0);
  const RVector& lam = space.model().eigenvalues;
  const RVector& chi = space.model().amplitudes;
  const CVector w = (chi.array() / lam.array()).matrix().cast<Complex>();
  // With c = 0 the regular part passes through and rho_1 = (T^{-1} chi, psi).
  const PontryaginVector zero_c = space.embed(CVector::Zero(2), psi);
  EXPECT_EQ(zero_c.gamma.norm(), 0.0);
  EXPECT_NEAR(std::abs(zero_c.rho(0) - w.dot(psi)), 0.0, 1e-14);
  EXPECT_EQ((zero_c.phi - psi).norm(), 0.0);
  const CVector orthogonal = psi - w * (w.dot(psi) / w.squaredNorm());
  const PontryaginVector pure = space.embed(CVector::Zero(2), orthogonal);
  EXPECT_LT(pure.rho.norm(), 1e-14);
  EXPECT_EQ((pure.phi - orthogonal).norm(), 0.0);

  const PontryaginVector first = space.embed(unit(2, 0), CVector::Zero(h));
  EXPECT_DOUBLE_EQ(first.gamma(0).real(), -1.0);
  EXPECT_EQ(first.rho(0), Complex(0.0));
  EXPECT_EQ(first.phi.norm(), 0.0);

  const PontryaginVector second = space.embed(unit(2, 1), CVector::Zero(h));
  const SpectralModel& model = space.model();
  EXPECT_EQ(second.gamma(0), Complex(0.0));
  EXPECT_NEAR(second.rho(0).real(), space.g_reg(3), 1e-15);
  const RVector expect = (model.amplitudes.array() / model.eigenvalues.array().square()).matrix();
  EXPECT_LT((second.phi - expect.cast<Complex>()).norm(), 1e-15);
}

TEST(Signature, CountertermFormExamples) {
  RVector z2(2);
  z2 << 0.7, -0.4;
  EXPECT_EQ(negative_squares(counterterm_form(z2, 2)), 1);

  RVector z3(3);
  z3 << 0.1, 0.8, -0.5;
  const CMatrix f3 = counterterm_form(z3, 3);
  ASSERT_EQ(f3.rows(), 2);
  EXPECT_DOUBLE_EQ(f3(0, 0).real(), 0.8);
  EXPECT_DOUBLE_EQ(f3(0, 1).real(), -0.5);
  EXPECT_DOUBLE_EQ(f3(1, 1).real(), 0.0);
  const Inertia in = inertia(f3);
  EXPECT_EQ(in.negative, 1);
  EXPECT_EQ(in.positive, 1);
}

TEST(Signature, RandomOrderFour) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    RVector z(4);
    for (int i = 0; i < 4; ++i) z(i) = normal(rng);
    z(3) = -std::abs(z(3)) - 0.05;
    const CMatrix form = counterterm_form(z, 4);
    const ReductionCount red = counterterm_form_reduction(z, 4);
    EXPECT_EQ(negative_squares(form), 2);
    EXPECT_EQ(negative_squares_by_congruence(form), 2);
    EXPECT_EQ(red.negative, 2);
    EXPECT_LT(red.reconstruction_defect, 1e-10);
  }
}

TEST(NegativeSubspace, EmptyForOrderOne) {
  const PontryaginSpace space = small_space(1, {-1.0});
  EXPECT_EQ(space.negative_basis().cols(), 0);
  const CVector v = CVector::LinSpaced(space.dim(), 0.5, 1.5);
  EXPECT_NEAR(space.majorant_norm(v), v.norm(), 1e-14);
}

TEST(NegativeSubspace, FlatBlockDirection) {
  const PontryaginSpace space = small_space(2, {-1.0, 0.0});
  const CMatrix& e = space.negative_basis();
  ASSERT_EQ(e.cols(), 1);
  EXPECT_NEAR((e.adjoint() * space.gram() * e)(0, 0).real(), -1.0, 1e-14);
  EXPECT_NEAR(std::abs(e(0, 0)), std::abs(e(1, 0)), 1e-14);
  EXPECT_EQ(e.bottomRows(space.dim_h()).norm(), 0.0);
}

TEST(NegativeSubspace, GramIsMinusIdentity) {
  for (int k : {2, 3, 4, 5}) {
    const PontryaginSpace space(fixtures::default_law_model(k, 12), fixtures::targets(k));
    const CMatrix& e = space.negative_basis();
    const CMatrix g = e.adjoint() * space.gram() * e;
    EXPECT_LT((g + CMatrix::Identity(space.m(), space.m())).norm(), 1e-12) << "k = " << k;
  }
}

TEST(Majorant, SignFlipOnNegativeSubspace) {
  const PontryaginSpace space(fixtures::default_law_model(4, 10), fixtures::targets(4));
  const CMatrix& e = space.negative_basis();
  for (int c = 0; c < e.cols(); ++c) EXPECT_NEAR(space.majorant_norm(CVector(e.col(c))), 1.0, 1e-12);
  CVector phi = CVector::Zero(space.dim());
  phi(space.dim() - 1) = Complex(0.0, 2.0);
  EXPECT_NEAR(space.majorant_norm(phi), 2.0, 1e-12);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(space.majorant().matrix());
  EXPECT_GT(eig.eigenvalues().minCoeff(), 0.0);
}

TEST(Majorant, AlternativeBasisIsEquivalent) {
  const PontryaginSpace space(fixtures::default_law_model(2, 10), fixtures::targets(2));
  CMatrix other = space.negative_basis();
  other(space.dim() - 1, 0) = 0.3;
  const double self = (other.adjoint() * space.gram() * other)(0, 0).real();
  other /= std::sqrt(-self);
  const PontryaginSpace alt = space.with_negative_basis(other);
  const CVector v = CVector::LinSpaced(space.dim(), 1.0, -1.0);
  const double a = space.majorant_norm(v);
  const double b = alt.majorant_norm(v);
  EXPECT_GT(a, 0.0);
  EXPECT_GT(b, 0.0);
  EXPECT_THROW(space.with_negative_basis(2.0 * other), Error);
}

TEST(Norm1, Examples) {
  const PontryaginVector zero{CVector::Zero(1), CVector::Zero(1), CVector::Zero(3)};
  EXPECT_EQ(norm1(zero), 0.0);
  CVector phi = CVector::Zero(3);
  phi(1) = 1.0;
  const PontryaginVector v{CVector::Constant(1, 2.0), CVector::Constant(1, -3.0), phi};
  EXPECT_DOUBLE_EQ(norm1(v), 3.0);
}

TEST(Inertia, CongruenceAgreesWithEigenvalues) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    CMatrix a(7, 7);
    for (int i = 0; i < 7; ++i)
      for (int j = 0; j < 7; ++j) a(i, j) = Complex(normal(rng), normal(rng));
    a = (a + a.adjoint()).eval();
    const Inertia e = inertia(a);
    const Inertia c = inertia_by_congruence(a);
    EXPECT_EQ(e.negative, c.negative);
    EXPECT_EQ(e.positive, c.positive);
  }
}
