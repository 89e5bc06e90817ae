#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "sslab/convergence_lab.hpp"
#include "sslab/pontryagin_space.hpp"
#include "sslab/spectral_model.hpp"

namespace sslab::fixtures {

// Log-spaced box [1, 100] whose H^{-k} mass grows on every log shell, so the
// regularized systems keep changing across the whole n ladder.
inline SpectralModel ladder_model(int k, int N = 100) {
  ModelConfig cfg;
  cfg.k = k;
  cfg.N = N;
  cfg.eigenvalue_law.kind = EigenvalueLaw::Kind::LogSpaced;
  cfg.eigenvalue_law.lower = 1.0;
  cfg.eigenvalue_law.upper = 100.0;
  cfg.amplitude_law.kind = AmplitudeLaw::Kind::LogShell;
  cfg.amplitude_law.excess = 2.0;
  return build_model(cfg);
}

// Default law lambda_j = 1 + j^{2/d}, flat amplitudes, d = 2k + 1.
inline SpectralModel default_law_model(int k, int N = 64) {
  ModelConfig cfg;
  cfg.d = 2 * k + 1;
  cfg.N = N;
  return build_model(cfg);
}

inline std::vector<double> targets(int k) {
  std::vector<double> g{-1.0, 0.2, 0.1, 0.05, 0.02};
  g.resize(static_cast<size_t>(k));
  return g;
}

inline FamilySpec family(int k) {
  FamilySpec f;
  f.g_targets = targets(k);
  return f;
}

inline const std::vector<int>& ladder() {
  static const std::vector<int> ns{4, 8, 16, 32, 64, 128, 256};
  return ns;
}

inline CVector random_complex(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(normal(rng), normal(rng));
  return v;
}

// Action of R(0) on (gamma, rho, phi) written out component by component,
// independently of the resolvent solver. Needs m >= 1.
inline CVector inverse_by_components(const PontryaginSpace& space, const CVector& v) {
  const int m = space.m();
  const int h = space.dim_h();
  const RVector& lam = space.model().eigenvalues;
  const RVector& chi = space.model().amplitudes;
  const CVector gamma = v.head(m), rho = v.segment(m, m), phi = v.tail(h);
  CVector out(v.size());
  const CVector w = (chi.array() / lam.array().pow(m + 1)).matrix().cast<Complex>();
  Complex sum = 0.0;
  for (int s = 1; s <= m; ++s) sum += space.g_reg(s + 1) * gamma(s - 1);
  out(0) = (rho(0) - sum) / space.g_reg(1);
  for (int s = 1; s < m; ++s) out(s) = gamma(s - 1);
  for (int s = 1; s < m; ++s) out(m + s - 1) = -space.g_reg(m + s + 1) * gamma(m - 1) + rho(s);
  out(2 * m - 1) = -space.g_reg(2 * m + 1) * gamma(m - 1) + w.dot(phi);
  out.tail(h) = -gamma(m - 1) * w + (phi.array() / lam.array().cast<Complex>()).matrix();
  return out;
}

// R(0) for m = 0: T^{-1} + alpha T^{-1} chi (T^{-1} chi, .), alpha = -1/g_1.
inline CMatrix rank_one_inverse(const PontryaginSpace& space) {
  const RVector& lam = space.model().eigenvalues;
  const RVector& chi = space.model().amplitudes;
  const double alpha = -1.0 / space.g_reg(1);
  const CVector w = (chi.array() / lam.array()).matrix().cast<Complex>();
  return CMatrix(lam.cwiseInverse().cast<Complex>().asDiagonal()) + alpha * w * w.adjoint();
}

}  // namespace sslab::fixtures
