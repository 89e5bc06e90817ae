#include "sslab/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "sslab/errors.hpp"

namespace sslab {

double hermitian_defect(const CMatrix& a) {
  if (a.rows() != a.cols()) throw Error(ErrorKind::DimensionMismatch, "Gram matrix must be square");
  if (a.size() == 0) return 0.0;
  const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

void require_hermitian(const CMatrix& a, double tol) {
  const double defect = hermitian_defect(a);
  if (defect > tol) {
    throw Error(ErrorKind::NonHermitian, "matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  }
}

Inertia inertia(const CMatrix& gram, double rel_tol) {
  require_hermitian(gram);
  Inertia out;
  if (gram.size() == 0) return out;
  const CMatrix h = 0.5 * (gram + gram.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h, Eigen::EigenvaluesOnly);
  const RVector& ev = solver.eigenvalues();
  const double cutoff = rel_tol * ev.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (ev(i) < -cutoff) ++out.negative;
    else if (ev(i) > cutoff) ++out.positive;
    else ++out.zero;
  }
  return out;
}

namespace {

void count_scalar(double value, double cutoff, Inertia& out) {
  if (value < -cutoff) ++out.negative;
  else if (value > cutoff) ++out.positive;
  else ++out.zero;
}

}  // namespace

Inertia inertia_by_congruence(const CMatrix& gram, double rel_tol) {
  require_hermitian(gram);
  Inertia out;
  CMatrix s = 0.5 * (gram + gram.adjoint());
  if (s.size() == 0) return out;
  const double cutoff = rel_tol * std::max(s.cwiseAbs().maxCoeff(), 1e-300);
  // Bunch-Kaufman growth constant.
  const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;

  while (s.rows() > 0) {
    const Eigen::Index n = s.rows();
    Eigen::Index pd = 0;
    const double max_diag = s.diagonal().cwiseAbs().maxCoeff(&pd);
    double max_off = 0.0;
    Eigen::Index pi = 0, pj = 0;
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j + 1; i < n; ++i)
        if (std::abs(s(i, j)) > max_off) { max_off = std::abs(s(i, j)); pi = i; pj = j; }

    if (max_diag <= cutoff && max_off <= cutoff) {
      out.zero += static_cast<int>(n);
      break;
    }

    std::vector<Eigen::Index> pivots;
    if (max_diag >= alpha * max_off) {
      pivots = {pd};
    } else {
      pivots = {pj, pi};
    }
    std::vector<Eigen::Index> rest;
    for (Eigen::Index i = 0; i < n; ++i)
      if (std::find(pivots.begin(), pivots.end(), i) == pivots.end()) rest.push_back(i);

    const auto p = static_cast<Eigen::Index>(pivots.size());
    const auto r = static_cast<Eigen::Index>(rest.size());
    CMatrix d(p, p), b(r, p), c(r, r);
    for (Eigen::Index a = 0; a < p; ++a)
      for (Eigen::Index bb = 0; bb < p; ++bb) d(a, bb) = s(pivots[a], pivots[bb]);
    for (Eigen::Index a = 0; a < r; ++a) {
      for (Eigen::Index bb = 0; bb < p; ++bb) b(a, bb) = s(rest[a], pivots[bb]);
      for (Eigen::Index bb = 0; bb < r; ++bb) c(a, bb) = s(rest[a], rest[bb]);
    }

    if (p == 1) {
      count_scalar(d(0, 0).real(), cutoff, out);
    } else {
      // 2x2 Hermitian block [[a, b], [b*, c]]: closed-form eigenvalues.
      const double a0 = d(0, 0).real(), c0 = d(1, 1).real();
      const double off = std::abs(d(1, 0));
      const double mean = 0.5 * (a0 + c0);
      const double rad = std::hypot(0.5 * (a0 - c0), off);
      count_scalar(mean + rad, cutoff, out);
      count_scalar(mean - rad, cutoff, out);
    }
    // Schur complement: the completed square removes the pivot variables.
    s = c - b * d.inverse() * b.adjoint();
    s = 0.5 * (s + s.adjoint()).eval();
  }
  return out;
}

MajorantMetric::MajorantMetric(const CMatrix& gram, const CMatrix& negative) {
  require_hermitian(gram);
  if (negative.rows() != gram.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "negative basis does not match Gram dimension");
  }
  const CMatrix h = 0.5 * (gram + gram.adjoint());
  if (negative.cols() == 0) {
    metric_ = h;
  } else {
    const CMatrix ge = h * negative;
    const CMatrix small = negative.adjoint() * ge;
    const CMatrix hs = 0.5 * (small + small.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> check(hs, Eigen::EigenvaluesOnly);
    if (check.eigenvalues().maxCoeff() >= 0.0) {
      throw Error(ErrorKind::InconsistentGram, "subspace is not negative definite");
    }
    metric_ = h - 2.0 * ge * hs.ldlt().solve(ge.adjoint());
    metric_ = 0.5 * (metric_ + metric_.adjoint()).eval();
  }
  Eigen::LLT<CMatrix> llt(metric_);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorKind::InconsistentGram, "majorant metric is not positive definite");
  }
  upper_ = llt.matrixU();
}

double MajorantMetric::norm(const CVector& v) const {
  if (v.size() != upper_.cols()) throw Error(ErrorKind::DimensionMismatch, "vector does not match metric");
  return (upper_.triangularView<Eigen::Upper>() * v).norm();
}

double MajorantMetric::operator_norm(const CMatrix& op, const MajorantMetric& domain) const {
  if (op.rows() != dim() || op.cols() != domain.dim()) {
    throw Error(ErrorKind::DimensionMismatch, "operator does not match metrics");
  }
  const CMatrix left = upper_.triangularView<Eigen::Upper>() * op;
  // left * domain.upper^{-1}, via a triangular solve on the adjoint.
  const CMatrix right = domain.upper_.adjoint().triangularView<Eigen::Lower>().solve(left.adjoint());
  return spectral_norm(right);
}

double spectral_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace sslab
