#include "sslab/matrix_functions.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "sslab/errors.hpp"

namespace sslab {

namespace {

double norm1(const CMatrix& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

// Parlett-Reinsch diagonal balancing with powers of two: returns d such that
// diag(d)^{-1} a diag(d) has comparable row and column sums.
RVector balancing_scales(const CMatrix& a) {
  const Eigen::Index n = a.rows();
  RVector d = RVector::Ones(n);
  CMatrix b = a;
  for (bool converged = false; !converged;) {
    converged = true;
    for (Eigen::Index i = 0; i < n; ++i) {
      double col = 0.0, row = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        col += std::abs(b(j, i));
        row += std::abs(b(i, j));
      }
      if (col == 0.0 || row == 0.0) continue;
      const double before = col + row;
      double f = 1.0;
      while (col < row / 2.0) {
        col *= 2.0;
        row /= 2.0;
        f *= 2.0;
      }
      while (col >= row * 2.0) {
        col /= 2.0;
        row *= 2.0;
        f /= 2.0;
      }
      if (col + row < 0.95 * before) {
        converged = false;
        d(i) *= f;
        b.col(i) *= f;
        b.row(i) /= f;
      }
    }
  }
  return d;
}

}  // namespace

CMatrix expm(const CMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "expm needs a square matrix");
  if (!a.allFinite()) throw Error(ErrorKind::NumericOverflow, "expm input has non-finite entries");
  // Scaling and squaring loses accuracy with the norm; balance first when that lowers it.
  const RVector d = balancing_scales(a);
  const CMatrix balanced = d.cwiseInverse().cast<Complex>().asDiagonal() * a * d.cast<Complex>().asDiagonal();
  CMatrix out;
  if (norm1(balanced) < norm1(a)) {
    out = d.cast<Complex>().asDiagonal() * balanced.exp() * d.cwiseInverse().cast<Complex>().asDiagonal();
  } else {
    out = a.exp();
  }
  if (!out.allFinite()) throw Error(ErrorKind::NumericOverflow, "matrix exponential overflowed");
  return out;
}

CosineFamily cosine_family(const CMatrix& a, double t) {
  const Eigen::Index n = a.rows();
  CMatrix block = CMatrix::Zero(2 * n, 2 * n);
  block.topRightCorner(n, n).setIdentity();
  block.bottomLeftCorner(n, n) = -a;
  const CMatrix e = expm(t * block);
  return {e.topLeftCorner(n, n), e.topRightCorner(n, n), e.bottomLeftCorner(n, n), e.bottomRightCorner(n, n)};
}

std::optional<SpectralCosine> cosine_family_spectral(const CMatrix& a, double t, std::string* reason,
                                                     double cond_limit) {
  auto fail = [&](const char* why) -> std::optional<SpectralCosine> {
    if (reason) *reason = why;
    return std::nullopt;
  };
  Eigen::ComplexEigenSolver<CMatrix> solver(a);
  if (solver.info() != Eigen::Success) return fail("eigensolver did not converge");
  const CMatrix& vecs = solver.eigenvectors();
  Eigen::JacobiSVD<CMatrix> svd(vecs);
  const auto& sv = svd.singularValues();
  const double smallest = sv(sv.size() - 1);
  if (smallest <= 0.0 || sv(0) / smallest > cond_limit) return fail("eigenvector basis ill-conditioned");
  const CVector& ev = solver.eigenvalues();
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  CVector c(ev.size()), s(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const Complex mu = ev(i);
    if (mu.real() < 0.0 && std::abs(mu.imag()) <= 1e-10 * scale) return fail("eigenvalue on the square-root branch cut");
    const Complex root = std::sqrt(mu);
    c(i) = std::cos(root * t);
    s(i) = std::abs(root) < 1e-300 ? Complex(t) : std::sin(root * t) / root;
  }
  const CMatrix inv = vecs.inverse();
  return SpectralCosine{vecs * c.asDiagonal() * inv, vecs * s.asDiagonal() * inv};
}

CVector sorted_eigenvalues(const CMatrix& a) {
  Eigen::ComplexEigenSolver<CMatrix> solver(a, false);
  std::vector<Complex> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](const Complex& x, const Complex& y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  return Eigen::Map<CVector>(ev.data(), static_cast<Eigen::Index>(ev.size()));
}

}  // namespace sslab
