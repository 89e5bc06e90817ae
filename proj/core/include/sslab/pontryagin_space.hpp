#pragma once

#include <vector>

#include "sslab/linalg.hpp"
#include "sslab/spectral_model.hpp"

namespace sslab {

// (gamma, rho, phi) with gamma, rho in C^m and phi in the surrogate H.
struct PontryaginVector {
  CVector gamma;
  CVector rho;
  CVector phi;

  // Layout: gamma, then rho, then phi.
  CVector flat() const;
  static PontryaginVector from_flat(int m, const CVector& flat);
};

// Eigenvalue count of negative squares.
int negative_squares(const CMatrix& gram);
// Cross-check by symmetric elimination (completion of squares).
int negative_squares_by_congruence(const CMatrix& gram);

// Hankel form sum_{j,s=0}^{k-2} c^j* c^s z_{j+s+1}, with z_l = 0 for l >= k.
CMatrix counterterm_form(const RVector& z, int k);

// Signs of the squares produced by the explicit pairing reduction of the
// counterterm form: split c into (x, y) blocks, diagonalize the x-block and
// complete squares pair by pair; for even k the middle variable is
// eliminated first. The reconstruction defect compares the sum of weighted
// squares with the original form.
struct ReductionCount {
  int negative = 0;
  int positive = 0;
  double reconstruction_defect = 0.0;
};
ReductionCount counterterm_form_reduction(const RVector& z, int k);

// m orthonormal-in-the-product directions spanning a negative subspace of the
// (gamma, rho) block: the eigenvectors of the m most negative eigenvalues,
// rescaled and re-orthogonalized so that their Gram is -I.
CMatrix choose_negative_subspace(const CMatrix& gram, int m);

class PontryaginSpace {
 public:
  PontryaginSpace(const SpectralModel& model, const std::vector<double>& g_targets);

  int m() const { return m_; }
  int dim_h() const { return model_.dim(); }
  int dim() const { return 2 * m_ + model_.dim(); }
  const SpectralModel& model() const { return model_; }
  const std::vector<double>& g_targets() const { return g_targets_; }

  // (chi, T^{-s} chi)_reg.
  double g_reg(int s) const;

  const CMatrix& gram() const { return gram_; }
  Complex product(const CVector& a, const CVector& b) const;
  Complex product(const PontryaginVector& a, const PontryaginVector& b) const;

  // The map (c_1..c_2m, psi_reg) -> (gamma, rho, phi).
  PontryaginVector embed(const CVector& c, const CVector& psi_reg) const;

  const CMatrix& negative_basis() const { return negative_; }
  const MajorantMetric& majorant() const { return majorant_; }
  double majorant_norm(const CVector& v) const { return majorant_.norm(v); }
  double majorant_norm(const PontryaginVector& v) const { return majorant_.norm(v.flat()); }

  // Copy of this space using another negative subspace (columns must have Gram -I).
  PontryaginSpace with_negative_basis(const CMatrix& basis) const;

 private:
  SpectralModel model_;
  std::vector<double> g_targets_;
  std::vector<double> g_;
  int m_ = 0;
  CMatrix gram_;
  CMatrix negative_;
  MajorantMetric majorant_;
};

// max over |gamma_s|, |rho_s| and ||phi||.
double norm1(const PontryaginVector& v);

}  // namespace sslab
