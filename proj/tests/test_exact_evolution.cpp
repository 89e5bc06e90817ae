#include <gtest/gtest.h>

#include <cmath>

#include "lab_fixtures.hpp"
#include "sslab/errors.hpp"
#include "sslab/exact_evolution.hpp"
#include "sslab/matrix_functions.hpp"

using namespace sslab;

namespace {

PontryaginSpace default_space(int k, int N = 24) {
  return PontryaginSpace(fixtures::default_law_model(k, N), fixtures::targets(k));
}

}  // namespace

TEST(ScaledA, AtZeroEqualsFirstTarget) {
  for (int k : {1, 2, 3}) {
    const PontryaginSpace space = default_space(k);
    EXPECT_NEAR(a_limit(space, 0.0), -1.0, 1e-14) << "k = " << k;
  }
}

TEST(ScaledA, RankOneFormula) {
  const PontryaginSpace space = default_space(1);
  const RVector& lam = space.model().eigenvalues;
  const RVector& chi = space.model().amplitudes;
  const double expect = -1.0 - (chi.array().square() / (lam.array() * (lam.array() + 1.0))).sum();
  EXPECT_NEAR(a_limit(space, 1.0), expect, 1e-13);
}

TEST(ScaledA, ScanFindsAdmissiblePoint) {
  const PontryaginSpace space = default_space(2);
  const double l0 = default_lambda0(space);
  EXPECT_FALSE(resolvent_is_singular(limit_resolvent_data(space), l0));
}

TEST(Resolvent, SingularPointRaises) {
  // m = 0, one mode mu = 1, x = 2, g_1 = 1: a(lambda) = 1 - 4 lambda / (1 + lambda) vanishes at 1/3.
  ModelConfig cfg;
  cfg.k = 1;
  cfg.eigenvalues = {1.0};
  cfg.amplitudes = {2.0};
  const PontryaginSpace space(build_model(cfg), {1.0});
  const double root = 1.0 / 3.0;
  EXPECT_NEAR(a_limit(space, root), 0.0, 1e-15);
  try {
    resolvent_exact(space, root);
    FAIL() << "expected singular-resolvent";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularResolvent);
  }
}

TEST(Resolvent, ZeroMatchesComponentFormulas) {
  for (int k : {2, 3, 4, 5}) {
    const PontryaginSpace space = default_space(k);
    const CMatrix r0 = resolvent_exact(space, 0.0).matrix;
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 5; ++trial) {
      const CVector v = fixtures::random_complex(space.dim(), rng);
      EXPECT_LT((r0 * v - fixtures::inverse_by_components(space, v)).norm(), 1e-10 * v.norm()) << "k = " << k;
    }
  }
}

TEST(Resolvent, RankOneClosedForm) {
  const PontryaginSpace space = default_space(1);
  const RVector& lam = space.model().eigenvalues;
  const RVector& chi = space.model().amplitudes;
  const CVector w = (chi.array() / lam.array()).matrix().cast<Complex>();
  const CMatrix expect = CMatrix(lam.cwiseInverse().cast<Complex>().asDiagonal()) + w * w.adjoint();
  EXPECT_LT((resolvent_exact(space, 0.0).matrix - expect).norm(), 1e-13);
}

TEST(Resolvent, SatisfiesDefiningSystem) {
  for (int k : {1, 2, 3}) {
    const PontryaginSpace space = default_space(k);
    const Hamiltonian h = build_hamiltonian(space);
    for (double l : {0.5, 3.0}) {
      const CMatrix r = resolvent_exact(space, l).matrix;
      const CMatrix id = CMatrix::Identity(space.dim(), space.dim());
      EXPECT_LT(((h.matrix + l * id) * r - id).norm(), 1e-9) << "k = " << k;
    }
  }
}

TEST(Resolvent, PseudoresolventIdentity) {
  const PontryaginSpace space = default_space(2);
  const CMatrix a = resolvent_exact(space, 0.5).matrix;
  const CMatrix b = resolvent_exact(space, 2.0).matrix;
  EXPECT_LT((a - b - (2.0 - 0.5) * a * b).norm(), 1e-10);
  EXPECT_LT((a - a - 0.0 * a * a).norm(), 1e-15);
}

TEST(Hamiltonian, ScalarRankOne) {
  ModelConfig cfg;
  cfg.k = 1;
  cfg.eigenvalues = {2.0};
  cfg.amplitudes = {1.0};
  const PontryaginSpace space(build_model(cfg), {-1.0});
  const Hamiltonian h = build_hamiltonian(space);
  ASSERT_EQ(h.matrix.rows(), 1);
  EXPECT_NEAR(h.matrix(0, 0).real(), 4.0 / 3.0, 1e-14);
  EXPECT_NEAR(h.matrix(0, 0).imag(), 0.0, 1e-15);
}

TEST(Hamiltonian, IndependentOfConstructionPoint) {
  for (int k : {1, 2, 3}) {
    const PontryaginSpace space = default_space(k);
    const CMatrix a = build_hamiltonian(space, 0.0).matrix;
    const CMatrix b = build_hamiltonian(space, 2.0).matrix;
    EXPECT_LT((a - b).norm(), 1e-8 * a.norm()) << "k = " << k;
  }
}

TEST(Hamiltonian, DefinitionAndJSelfAdjointness) {
  for (int k : {1, 2, 3}) {
    const PontryaginSpace space = default_space(k);
    const Hamiltonian h = build_hamiltonian(space, 1.0);
    const CMatrix r = resolvent_exact(space, 1.0).matrix;
    const CMatrix id = CMatrix::Identity(space.dim(), space.dim());
    EXPECT_LT((h.matrix * r + 1.0 * r - id).norm(), 1e-10);
    EXPECT_LE(j_self_adjointness_defect(space.gram(), h.matrix), 1e-9) << "k = " << k;
  }
}

TEST(Hamiltonian, EvenOrderWithoutTailIsIllConditioned) {
  ModelConfig cfg;
  cfg.d = 5;
  cfg.N = 16;
  cfg.tail_moment = 0.0;
  const PontryaginSpace space(build_model(cfg), fixtures::targets(2));
  try {
    build_hamiltonian(space, 1.0);
    FAIL() << "expected ill-conditioned-construction";
  } catch (const Error& e) {
    EXPECT_TRUE(e.kind() == ErrorKind::IllConditioned || e.kind() == ErrorKind::SingularResolvent);
  }
}

TEST(Evolution, IdentityAtTimeZero) {
  const PontryaginSpace space = default_space(2);
  const Hamiltonian h = build_hamiltonian(space);
  std::mt19937_64 rng(2);
  const PontryaginVector v = PontryaginVector::from_flat(1, fixtures::random_complex(space.dim(), rng));
  EXPECT_LT((evolve_schrodinger(h, 0.0, v).flat() - v.flat()).norm(), 1e-15);
  EXPECT_LT((evolve_parabolic(h, 0.0, v).flat() - v.flat()).norm(), 1e-15);
  const auto [pos, rate] = evolve_hyperbolic(h, 0.0, v, v);
  EXPECT_LT((pos.flat() - v.flat()).norm(), 1e-15);
  EXPECT_LT((rate.flat() - v.flat()).norm(), 1e-15);
}

TEST(Evolution, ConservesIndefiniteProduct) {
  for (int k : {1, 2, 3}) {
    const PontryaginSpace space = default_space(k);
    const Hamiltonian h = build_hamiltonian(space);
    std::mt19937_64 rng(9);
    const CVector v = fixtures::random_complex(space.dim(), rng);
    const Complex start = space.product(v, v);
    for (double t : {0.25, 0.5, 1.0}) {
      const CVector u = schrodinger_propagator(h.matrix, t) * v;
      EXPECT_LE(std::abs(space.product(u, u) - start), 1e-8) << "k = " << k << ", t = " << t;
    }
  }
}

TEST(Evolution, GroupAndSemigroupLaws) {
  const PontryaginSpace space = default_space(3);
  const Hamiltonian h = build_hamiltonian(space);
  const CMatrix u = schrodinger_propagator(h.matrix, 0.7);
  const CMatrix uu = schrodinger_propagator(h.matrix, 0.3) * schrodinger_propagator(h.matrix, 0.4);
  EXPECT_LT((u - uu).norm(), 1e-9 * u.norm());
  const CMatrix p = parabolic_propagator(h.matrix, 0.7);
  const CMatrix pp = parabolic_propagator(h.matrix, 0.3) * parabolic_propagator(h.matrix, 0.4);
  EXPECT_LT((p - pp).norm(), 1e-9 * p.norm());
}

TEST(Evolution, HyperbolicFiniteDifferenceResidual) {
  const PontryaginSpace space = default_space(2, 12);
  const Hamiltonian h = build_hamiltonian(space);
  std::mt19937_64 rng(4);
  // A state in the domain of H^2, so the h^2 truncation term stays small.
  const CMatrix r = resolvent_exact(space, 1.0).matrix;
  CVector v = r * (r * fixtures::random_complex(space.dim(), rng));
  v /= v.norm();
  const PontryaginVector start = PontryaginVector::from_flat(1, v);
  const PontryaginVector zero = PontryaginVector::from_flat(1, CVector::Zero(space.dim()));
  const double t = 0.5, step = 1e-3;
  const CVector a = evolve_hyperbolic(h, t - step, start, zero).first.flat();
  const CVector b = evolve_hyperbolic(h, t, start, zero).first.flat();
  const CVector c = evolve_hyperbolic(h, t + step, start, zero).first.flat();
  EXPECT_LE(((a - 2.0 * b + c) / (step * step) + h.matrix * b).norm(), 1e-5);
}

TEST(MatrixFunctions, ScalarCosineFamily) {
  const double omega = 1.7;
  CMatrix a(1, 1);
  a(0, 0) = omega * omega;
  for (double t : {0.0, 0.3, 1.0, 2.5}) {
    const CosineFamily f = cosine_family(a, t);
    EXPECT_NEAR(std::abs(f.cosine(0, 0) - std::cos(omega * t)), 0.0, 1e-10);
    EXPECT_NEAR(std::abs(f.sine(0, 0) - std::sin(omega * t) / omega), 0.0, 1e-10);
    const auto spectral = cosine_family_spectral(a, t);
    ASSERT_TRUE(spectral.has_value());
    EXPECT_NEAR(std::abs(spectral->cosine(0, 0) - std::cos(omega * t)), 0.0, 1e-12);
  }
}

TEST(MatrixFunctions, NonFiniteInputRaises) {
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 1) = std::numeric_limits<double>::infinity();
  try {
    expm(a);
    FAIL() << "expected numeric-overflow";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NumericOverflow);
  }
}

TEST(Spectrum, SummaryCountsNonreal) {
  CMatrix a = CMatrix::Zero(3, 3);
  a(0, 0) = 2.0;
  a(1, 2) = 1.0;
  a(2, 1) = -1.0;
  const SpectralSummary s = spectral_summary(a);
  EXPECT_EQ(s.nonreal, 2);
  EXPECT_NEAR(s.max_abs_imag, 1.0, 1e-12);
  EXPECT_NEAR(s.max_real, 2.0, 1e-12);
}
