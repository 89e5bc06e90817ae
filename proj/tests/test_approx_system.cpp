#include <gtest/gtest.h>

#include <cmath>

#include "lab_fixtures.hpp"
#include "sslab/approx_system.hpp"
#include "sslab/errors.hpp"

using namespace sslab;

namespace {

ApproxSpace default_approx(int k, int n, int N = 24) {
  const SpectralModel model = fixtures::default_law_model(k, N);
  return ApproxSpace(make_family(model, fixtures::family(k), n), model);
}

ErrorKind construction_error(const RegularizedFamily& fam, const SpectralModel& model) {
  try {
    ApproxSpace s(fam, model);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "construction succeeded";
  return ErrorKind::ConfigParse;
}

}  // namespace

TEST(BuildSpace, RankOneGenerator) {
  const SpectralModel model = fixtures::default_law_model(1, 16);
  const RegularizedFamily fam = make_family(model, fixtures::family(1), 8);
  const ApproxSpace s(fam, model);
  ASSERT_EQ(s.dim(), 16);
  const RVector& chi = fam.chi_n;
  const CMatrix expect = (RMatrix(model.eigenvalues.asDiagonal()) + chi * chi.transpose() / fam.z(0)).cast<Complex>();
  EXPECT_LT((s.generator() - expect).norm(), 1e-13 * expect.norm());
}

TEST(BuildSpace, ScalarOrderTwoByHand) {
  ModelConfig cfg;
  cfg.k = 2;
  cfg.eigenvalues = {3.0};
  cfg.amplitudes = {2.0};
  const SpectralModel model = build_model(cfg);
  const RegularizedFamily fam = make_family(model, fixtures::family(2), 4);
  const ApproxSpace s(fam, model);
  const double x = fam.chi_n(0), z0 = fam.z(0), z1 = fam.z(1);
  ASSERT_EQ(s.generator().rows(), 2);
  EXPECT_NEAR(std::abs(s.generator()(0, 0) - (-z0 / z1)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.generator()(0, 1) - x / z1), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.generator()(1, 0) - x), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(s.generator()(1, 1) - 3.0), 0.0, 1e-14);
  EXPECT_NEAR(s.z_matrix()(0, 0).real(), z1, 1e-15);
  EXPECT_NEAR(s.gram()(0, 0).real(), z1, 1e-15);
}

TEST(BuildSpace, SignatureOfProduct) {
  for (int k = 1; k <= 5; ++k) {
    for (int n : {4, 64}) {
      const ApproxSpace s = default_approx(k, n, 12);
      EXPECT_EQ(negative_squares(s.gram()), k / 2) << "k = " << k << ", n = " << n;
    }
  }
}

TEST(BuildSpace, DegenerateInputsRaise) {
  const SpectralModel model = fixtures::default_law_model(2, 8);
  RegularizedFamily fam = make_family(model, fixtures::family(2), 4);
  RegularizedFamily no_coupling = fam;
  fam.z(1) = 0.0;
  EXPECT_EQ(construction_error(fam, model), ErrorKind::DegenerateGenerator);
  no_coupling.chi_n.setZero();
  EXPECT_EQ(construction_error(no_coupling, model), ErrorKind::DegenerateProjection);
}

TEST(Projection, ZeroAndRankOne) {
  const ApproxSpace even = default_approx(2, 8);
  EXPECT_EQ(even.project(CVector::Zero(even.limit_dim())).norm(), 0.0);
  const ApproxSpace one = default_approx(1, 8);
  std::mt19937_64 rng(1);
  const CVector phi = fixtures::random_complex(one.limit_dim(), rng);
  EXPECT_EQ((one.project(phi) - phi).norm(), 0.0);
  EXPECT_EQ((one.lift(phi) - phi).norm(), 0.0);
}

TEST(Projection, EvenOrderRelationsHold) {
  // P_n enforces the gamma and rho rows exactly, so only the phi part of Q_n P_n v moves.
  for (int k : {2, 4}) {
    const ApproxSpace s = default_approx(k, 16);
    const int m = k / 2;
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 5; ++trial) {
      const CVector v = fixtures::random_complex(s.limit_dim(), rng);
      const CVector back = s.lift(s.project(v));
      EXPECT_LT((back.head(2 * m) - v.head(2 * m)).norm(), 1e-9 * v.norm()) << "k = " << k;
    }
  }
}

TEST(Projection, ScalarOrderTwoByHand) {
  ModelConfig cfg;
  cfg.k = 2;
  cfg.eigenvalues = {2.0};
  cfg.amplitudes = {1.0};
  const SpectralModel model = build_model(cfg);
  const RegularizedFamily fam = make_family(model, fixtures::family(2), 2);
  const ApproxSpace s(fam, model);
  const PontryaginVector v{CVector::Constant(1, 0.7), CVector::Constant(1, -0.4), CVector::Constant(1, 1.3)};
  const ApproxVector p = s.project(v);
  const double w = fam.chi_n(0) / 2.0;
  // The one-mode adjustment replaces phi by rho / w.
  const double phi_n = -0.4 / w;
  EXPECT_NEAR(std::abs(p.c(0) - 0.7), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(p.psi(0) - (-0.7 * w + phi_n)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(w * (p.psi(0) + p.c(0) * w) - (-0.4)), 0.0, 1e-14);
}

TEST(Projection, OddOrderIsExactInverse) {
  for (int k : {3, 5}) {
    const ApproxSpace s = default_approx(k, 32);
    const CMatrix qp = s.lift_matrix() * s.projection_matrix();
    EXPECT_LT((qp - CMatrix::Identity(s.limit_dim(), s.limit_dim())).cwiseAbs().maxCoeff(), 1e-12) << "k = " << k;
  }
}

TEST(Lift, IsometryOntoAuxiliaryProduct) {
  for (int k : {2, 3, 4, 5}) {
    const ApproxSpace s = default_approx(k, 16, 12);
    const CMatrix q = s.lift_matrix();
    const CMatrix pulled = q.adjoint() * s.auxiliary_gram() * q;
    EXPECT_LT((pulled - s.gram()).norm(), 1e-10 * std::max(1.0, s.gram().norm())) << "k = " << k;
  }
}

TEST(Resolvent, DirectInverseAndIntertwining) {
  for (int k : {2, 3}) {
    const ApproxSpace s = default_approx(k, 16);
    const CMatrix id = CMatrix::Identity(s.dim(), s.dim());
    for (double l : {0.5, 1.0, 2.0}) {
      const CMatrix r = s.resolvent_direct(l);
      EXPECT_LT(((s.generator() + l * id) * r - id).norm(), 1e-10);
      const CMatrix defect = s.lift_matrix() * r - s.resolvent_closed_form(l) * s.lift_matrix();
      EXPECT_LT(defect.norm(), 1e-8 * std::max(1.0, s.lift_matrix().norm())) << "k = " << k << ", l = " << l;
    }
  }
}

TEST(Resolvent, RankOneShermanMorrison) {
  const SpectralModel model = fixtures::default_law_model(1, 16);
  const RegularizedFamily fam = make_family(model, fixtures::family(1), 8);
  const ApproxSpace s(fam, model);
  const double l = 0.75;
  const RVector d = (model.eigenvalues.array() + l).inverse().matrix();
  const RVector dchi = d.cwiseProduct(fam.chi_n);
  const RMatrix expect = RMatrix(d.asDiagonal()) - dchi * dchi.transpose() / (fam.z(0) + fam.chi_n.dot(dchi));
  EXPECT_LT((s.resolvent_direct(l) - expect.cast<Complex>()).norm(), 1e-12);
  EXPECT_LT((s.resolvent_closed_form(l) - expect.cast<Complex>()).norm(), 1e-12);
}

TEST(Evolution, IdentityAtTimeZeroAndConservation) {
  for (int k : {1, 2, 3}) {
    const ApproxSpace s = default_approx(k, 16);
    std::mt19937_64 rng(3);
    const ApproxVector v = ApproxVector::from_flat(k, fixtures::random_complex(s.dim(), rng));
    EXPECT_LT((s.evolve_schrodinger(0.0, v).flat() - v.flat()).norm(), 1e-15);
    EXPECT_LT((s.evolve_parabolic(0.0, v).flat() - v.flat()).norm(), 1e-15);
    const auto [pos, rate] = s.evolve_hyperbolic(0.0, v, v);
    EXPECT_LT((pos.flat() - v.flat()).norm(), 1e-15);
    EXPECT_LT((rate.flat() - v.flat()).norm(), 1e-15);
    const Complex start = s.product(v.flat(), v.flat());
    for (double t : {0.5, 1.0}) {
      const CVector u = s.evolve_schrodinger(t, v).flat();
      EXPECT_LE(std::abs(s.product(u, u) - start), 1e-8) << "k = " << k;
    }
  }
}

TEST(Majorant, TransportedSubspaceIsNegative) {
  const SpectralModel model = fixtures::ladder_model(2);
  const PontryaginSpace limit(model, fixtures::targets(2));
  const Hamiltonian h = build_hamiltonian(limit);
  const ApproxSpace s(make_family(model, fixtures::family(2), 16), model);
  const ApproxMajorant maj = approx_majorant(s, h.matrix, limit.negative_basis(), 1.0);
  EXPECT_TRUE(maj.transported);
  EXPECT_TRUE(is_negative_definite(s.gram(), transported_subspace(s, h.matrix, limit.negative_basis(), 1.0)));
  std::mt19937_64 rng(8);
  const CVector v = fixtures::random_complex(s.dim(), rng);
  EXPECT_GE(maj.metric.norm(v) * maj.metric.norm(v), std::abs(s.product(v, v)) * (1.0 - 1e-10));
}
