#pragma once

#include <utility>

#include "sslab/exact_evolution.hpp"
#include "sslab/linalg.hpp"
#include "sslab/pontryagin_space.hpp"
#include "sslab/spectral_model.hpp"

namespace sslab {

// (c^0..c^{k-2}, psi). The scalar c^l stands for i^l d^l c / dt^l of the
// auxiliary amplitude c(t) of the higher-order system.
struct ApproxVector {
  CVector c;
  CVector psi;

  CVector flat() const;
  static ApproxVector from_flat(int k, const CVector& flat);
};

// The n-th approximating system: space C^{k-1} + H with the counterterm
// product, generators Z and H_n, and the maps to and from the limit space.
class ApproxSpace {
 public:
  ApproxSpace(const RegularizedFamily& family, const SpectralModel& model);

  int n() const { return family_.n; }
  int k() const { return family_.k; }
  int m() const { return family_.k / 2; }
  int dim_h() const { return static_cast<int>(lambda_.size()); }
  int dim() const { return family_.k - 1 + dim_h(); }
  int limit_dim() const { return 2 * m() + dim_h(); }
  const RegularizedFamily& family() const { return family_; }
  const RVector& eigenvalues() const { return lambda_; }

  const CMatrix& z_matrix() const { return z_; }
  const CMatrix& h_matrix() const { return h_; }
  // Z^{-1} H_n; for k = 1 this is T + chi_n (chi_n, .) / z_0.
  const CMatrix& generator() const { return generator_; }
  const CMatrix& gram() const { return gram_; }
  Complex product(const CVector& a, const CVector& b) const;

  // P_n from the limit space.
  CVector project(const CVector& limit_flat) const;
  ApproxVector project(const PontryaginVector& v) const;
  const CMatrix& projection_matrix() const { return projection_; }

  // Q_n into the limit space.
  CVector lift(const CVector& flat) const;
  PontryaginVector lift(const ApproxVector& v) const;
  const CMatrix& lift_matrix() const { return lift_; }

  // Product on the limit coordinates built from the n-th moments g^{(n)}.
  CMatrix auxiliary_gram() const;

  ResolventData resolvent_data() const;
  double scaled_a_n(double lambda) const;
  // (Z^{-1} H_n + lambda)^{-1} by dense factorization.
  CMatrix resolvent_direct(double lambda) const;
  // The closed-form resolvent on the limit coordinates with n-th data.
  CMatrix resolvent_closed_form(double lambda) const;

  ApproxVector evolve_schrodinger(double t, const ApproxVector& v) const;
  ApproxVector evolve_parabolic(double t, const ApproxVector& v) const;
  std::pair<ApproxVector, ApproxVector> evolve_hyperbolic(double t, const ApproxVector& v, const ApproxVector& rate) const;

 private:
  RVector power_chi(int p) const;  // T^{-p} chi_n

  RegularizedFamily family_;
  RVector lambda_;
  CMatrix z_, h_, generator_, gram_, projection_, lift_;
};

ApproxSpace build_space(const RegularizedFamily& family, const SpectralModel& model);

// (A_n + lambda)^{-1} P_n (H + lambda) L.
CMatrix transported_subspace(const ApproxSpace& space, const CMatrix& hamiltonian, const CMatrix& limit_negative,
                             double lambda);

// True when basis^* gram basis is negative definite (cutoff relative to its spectral radius).
bool is_negative_definite(const CMatrix& gram, const CMatrix& basis);

// Majorant on the n-th space. Uses the transported subspace when it is
// negative definite, otherwise the Gram's own most negative eigenvectors.
struct ApproxMajorant {
  MajorantMetric metric;
  double lambda = 0.0;
  bool transported = true;
};
ApproxMajorant approx_majorant(const ApproxSpace& space, const CMatrix& hamiltonian, const CMatrix& limit_negative,
                               double lambda);

}  // namespace sslab
