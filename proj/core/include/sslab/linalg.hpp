#pragma once

#include <complex>

#include <Eigen/Dense>

namespace sslab {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;
using RMatrix = Eigen::MatrixXd;

struct Inertia {
  int negative = 0;
  int zero = 0;
  int positive = 0;
  bool operator==(const Inertia&) const = default;
};

// Largest entry of |A - A^*| relative to max(1, max|A|).
double hermitian_defect(const CMatrix& a);

// Throws NonHermitian when hermitian_defect exceeds tol.
void require_hermitian(const CMatrix& a, double tol = 1e-10);

// Eigenvalue count. An eigenvalue is treated as zero when its magnitude is
// below rel_tol times the spectral radius.
Inertia inertia(const CMatrix& gram, double rel_tol = 1e-10);

// Independent count by symmetric elimination with 1x1 and 2x2 pivots
// (completion of squares). Never forms eigenvalues of the full matrix.
Inertia inertia_by_congruence(const CMatrix& gram, double rel_tol = 1e-10);

// Hilbert metric obtained from an indefinite Gram by flipping the sign of the
// product on a negative-definite subspace spanned by the columns of `negative`.
class MajorantMetric {
 public:
  MajorantMetric() = default;
  MajorantMetric(const CMatrix& gram, const CMatrix& negative);

  Eigen::Index dim() const { return metric_.rows(); }
  const CMatrix& matrix() const { return metric_; }
  double norm(const CVector& v) const;
  // Norm of op viewed as a map from `domain` into this metric.
  double operator_norm(const CMatrix& op, const MajorantMetric& domain) const;

 private:
  CMatrix metric_;
  CMatrix upper_;  // metric = upper^* upper
};

// Largest singular value.
double spectral_norm(const CMatrix& a);

}  // namespace sslab
