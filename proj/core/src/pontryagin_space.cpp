#include "sslab/pontryagin_space.hpp"

#include <algorithm>
#include <cmath>

#include "sslab/errors.hpp"

namespace sslab {

CVector PontryaginVector::flat() const {
  CVector out(gamma.size() + rho.size() + phi.size());
  out << gamma, rho, phi;
  return out;
}

PontryaginVector PontryaginVector::from_flat(int m, const CVector& flat) {
  if (flat.size() < 2 * m) throw Error(ErrorKind::DimensionMismatch, "vector shorter than 2m");
  return {flat.head(m), flat.segment(m, m), flat.tail(flat.size() - 2 * m)};
}

int negative_squares(const CMatrix& gram) { return inertia(gram).negative; }

int negative_squares_by_congruence(const CMatrix& gram) { return inertia_by_congruence(gram).negative; }

CMatrix counterterm_form(const RVector& z, int k) {
  if (z.size() < k) throw Error(ErrorKind::DimensionMismatch, "need z_0..z_{k-1}");
  const int n = std::max(k - 1, 0);
  CMatrix f = CMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int s = 0; s < n; ++s) {
      const int l = j + s + 1;
      f(j, s) = l < k ? z(l) : 0.0;
    }
  return f;
}

namespace {

// A weighted square w * |l . v|^2 over the real coefficient row l.
struct Square {
  double weight;
  RVector row;
};

// Squares for x^* A x + y^* B x + x^* B y with A, B real symmetric and B
// invertible; x and y are given as index lists into the full variable vector.
void pair_squares(const RMatrix& a, const RMatrix& b, const std::vector<int>& xs, const std::vector<int>& ys,
                  int total, std::vector<Square>& out) {
  const int m = static_cast<int>(xs.size());
  if (m == 0) return;
  Eigen::FullPivLU<RMatrix> lu(b);
  if (!lu.isInvertible()) throw Error(ErrorKind::InconsistentGram, "pairing block is singular");
  Eigen::SelfAdjointEigenSolver<RMatrix> eig(a);
  const RMatrix& u = eig.eigenvectors();
  const RVector& alpha = eig.eigenvalues();
  const double tol = 1e-14 * std::max(1.0, alpha.cwiseAbs().maxCoeff());
  // xi = U^T x, eta = U^T B y, as rows over the full variable vector.
  const RMatrix ut_b = u.transpose() * b;
  for (int s = 0; s < m; ++s) {
    RVector xi = RVector::Zero(total), eta = RVector::Zero(total);
    for (int i = 0; i < m; ++i) {
      xi(xs[i]) = u(i, s);
      eta(ys[i]) = ut_b(s, i);
    }
    if (std::abs(alpha(s)) > tol) {
      out.push_back({alpha(s), xi + eta / alpha(s)});
      out.push_back({-1.0 / alpha(s), eta});
    } else {
      out.push_back({0.5, xi + eta});
      out.push_back({-0.5, xi - eta});
    }
  }
}

}  // namespace

ReductionCount counterterm_form_reduction(const RVector& z, int k) {
  if (k < 1) throw Error(ErrorKind::InvalidModel, "k must be >= 1");
  const int total = k - 1;
  const int m = k / 2;
  auto zz = [&](int l) { return (l >= 0 && l < k) ? z(l) : 0.0; };
  std::vector<Square> squares;

  if (k % 2 == 1) {
    RMatrix a(m, m), b(m, m);
    std::vector<int> xs, ys;
    for (int i = 1; i <= m; ++i) {
      xs.push_back(i - 1);
      ys.push_back(m + i - 1);
      for (int j = 1; j <= m; ++j) {
        a(i - 1, j - 1) = zz(i + j - 1);
        b(i - 1, j - 1) = zz(m + i + j - 1);
      }
    }
    pair_squares(a, b, xs, ys, total, squares);
  } else {
    const double pivot = zz(2 * m - 1);
    if (pivot == 0.0) throw Error(ErrorKind::InconsistentGram, "z_{k-1} vanishes");
    const int mm = m - 1;
    RMatrix a(mm, mm), b(mm, mm);
    std::vector<int> xs, ys;
    for (int i = 1; i <= mm; ++i) {
      xs.push_back(i - 1);
      ys.push_back(m + i - 1);
      for (int j = 1; j <= mm; ++j) {
        a(i - 1, j - 1) = zz(i + j - 1) - zz(i + m - 1) * zz(m + j - 1) / pivot;
        b(i - 1, j - 1) = zz(m + i + j - 1);
      }
    }
    RVector sigma = RVector::Zero(total);
    sigma(m - 1) = 1.0;
    for (int s = 1; s <= mm; ++s) sigma(s - 1) = zz(m + s - 1) / pivot;
    squares.push_back({pivot, sigma});
    pair_squares(a, b, xs, ys, total, squares);
  }

  ReductionCount out;
  RMatrix rebuilt = RMatrix::Zero(total, total);
  for (const auto& sq : squares) {
    if (sq.weight < 0.0) ++out.negative;
    else if (sq.weight > 0.0) ++out.positive;
    rebuilt += sq.weight * sq.row * sq.row.transpose();
  }
  if (total > 0) {
    const CMatrix form = counterterm_form(z, k);
    const double scale = std::max(1.0, form.cwiseAbs().maxCoeff());
    out.reconstruction_defect = (rebuilt.cast<Complex>() - form).cwiseAbs().maxCoeff() / scale;
  }
  return out;
}

CMatrix choose_negative_subspace(const CMatrix& gram, int m) {
  CMatrix basis = CMatrix::Zero(gram.rows(), m);
  if (m == 0) return basis;
  require_hermitian(gram);
  const CMatrix block = gram.topLeftCorner(2 * m, 2 * m);
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (block + block.adjoint()));
  const RVector& mu = eig.eigenvalues();
  const double cutoff = 1e-10 * mu.cwiseAbs().maxCoeff();
  for (int i = 0; i < m; ++i) {
    if (!(mu(i) < -cutoff)) {
      throw Error(ErrorKind::InconsistentGram, "fewer than m negative directions in the (gamma, rho) block");
    }
    basis.col(i).head(2 * m) = eig.eigenvectors().col(i) / std::sqrt(-mu(i));
  }
  // Gram-Schmidt in the indefinite product, normalizing to <e,e> = -1.
  for (int i = 0; i < m; ++i) {
    CVector v = basis.col(i);
    for (int j = 0; j < i; ++j) {
      const Complex p = basis.col(j).dot(gram * v);
      v += p * basis.col(j);  // <e_j, e_j> = -1
    }
    const double self = v.dot(gram * v).real();
    if (!(self < 0.0)) throw Error(ErrorKind::InconsistentGram, "negative direction lost during orthogonalization");
    basis.col(i) = v / std::sqrt(-self);
  }
  return basis;
}

PontryaginSpace::PontryaginSpace(const SpectralModel& model, const std::vector<double>& g_targets)
    : model_(model), g_targets_(g_targets), m_(model.m()) {
  validate(model_);
  if (static_cast<int>(g_targets_.size()) != model_.k) {
    throw Error(ErrorKind::InvalidModel, "need exactly k renormalized targets");
  }
  if (g_targets_[0] == 0.0) throw Error(ErrorKind::InvalidModel, "g_1 must be nonzero");
  g_ = regularized_moments(model_, g_targets_, std::max(3 * m_, 2 * m_ + 1) + 1);
  const int n = dim();
  gram_ = CMatrix::Zero(n, n);
  for (int s = 0; s < m_; ++s) {
    for (int u = 0; u < m_; ++u) gram_(s, u) = g_[s + u + 2];
    gram_(s, m_ + s) = -1.0;
    gram_(m_ + s, s) = -1.0;
  }
  gram_.bottomRightCorner(model_.dim(), model_.dim()).setIdentity();
  negative_ = choose_negative_subspace(gram_, m_);
  majorant_ = MajorantMetric(gram_, negative_);
}

double PontryaginSpace::g_reg(int s) const {
  if (s < 0 || s >= static_cast<int>(g_.size())) throw Error(ErrorKind::DimensionMismatch, "moment index out of range");
  return g_[s];
}

Complex PontryaginSpace::product(const CVector& a, const CVector& b) const {
  if (a.size() != dim() || b.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "vector does not conform to the space");
  return a.dot(gram_ * b);
}

Complex PontryaginSpace::product(const PontryaginVector& a, const PontryaginVector& b) const {
  return product(a.flat(), b.flat());
}

PontryaginVector PontryaginSpace::embed(const CVector& c, const CVector& psi_reg) const {
  if (c.size() != 2 * m_ || psi_reg.size() != dim_h()) throw Error(ErrorKind::DimensionMismatch, "embed arguments");
  const RVector& lam = model_.eigenvalues;
  const RVector& chi = model_.amplitudes;
  PontryaginVector out{CVector::Zero(m_), CVector::Zero(m_), psi_reg};
  for (int i = 1; i <= m_; ++i) out.gamma(i - 1) = -c(i - 1);
  for (int l = m_ + 1; l <= 2 * m_; ++l) {
    out.phi += c(l - 1) * (chi.array() / lam.array().pow(l)).matrix().cast<Complex>();
  }
  for (int j = 1; j <= m_; ++j) {
    Complex r = 0.0;
    for (int l = m_ + 1; l <= 2 * m_; ++l) r += c(l - 1) * g_[l + j];
    const RVector w = (chi.array() / lam.array().pow(j)).matrix();
    r += w.cast<Complex>().dot(psi_reg);
    out.rho(j - 1) = r;
  }
  return out;
}

PontryaginSpace PontryaginSpace::with_negative_basis(const CMatrix& basis) const {
  if (basis.rows() != dim() || basis.cols() != m_) throw Error(ErrorKind::DimensionMismatch, "negative basis shape");
  const CMatrix g = basis.adjoint() * gram_ * basis;
  if (m_ > 0 && (g + CMatrix::Identity(m_, m_)).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error(ErrorKind::InconsistentGram, "basis Gram differs from -I");
  }
  PontryaginSpace copy = *this;
  copy.negative_ = basis;
  copy.majorant_ = MajorantMetric(gram_, basis);
  return copy;
}

double norm1(const PontryaginVector& v) {
  double out = v.phi.norm();
  for (Eigen::Index i = 0; i < v.gamma.size(); ++i) out = std::max(out, std::abs(v.gamma(i)));
  for (Eigen::Index i = 0; i < v.rho.size(); ++i) out = std::max(out, std::abs(v.rho(i)));
  return out;
}

}  // namespace sslab
