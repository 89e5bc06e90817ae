#include "sslab/approx_system.hpp"

#include <algorithm>
#include <cmath>

#include "sslab/errors.hpp"
#include "sslab/matrix_functions.hpp"

namespace sslab {

CVector ApproxVector::flat() const {
  CVector out(c.size() + psi.size());
  out << c, psi;
  return out;
}

ApproxVector ApproxVector::from_flat(int k, const CVector& flat) {
  const int nc = k - 1;
  if (flat.size() < nc) throw Error(ErrorKind::DimensionMismatch, "vector shorter than k-1");
  return {flat.head(nc), flat.tail(flat.size() - nc)};
}

ApproxSpace::ApproxSpace(const RegularizedFamily& family, const SpectralModel& model)
    : family_(family), lambda_(model.eigenvalues) {
  validate(model);
  if (family_.k != model.k) throw Error(ErrorKind::DimensionMismatch, "family and model disagree on k");
  if (family_.chi_n.size() != lambda_.size()) throw Error(ErrorKind::DimensionMismatch, "chi_n length");
  const int k = family_.k;
  const int nc = k - 1;
  const int nh = dim_h();
  const int d = dim();
  const double zlast = family_.z(k - 1);
  if (!(std::abs(zlast) > 1e-14 * std::max(1.0, family_.z.cwiseAbs().maxCoeff()))) {
    throw Error(ErrorKind::DegenerateGenerator, "z_{k-1,n} vanishes");
  }
  const CVector chi = family_.chi_n.cast<Complex>();

  z_ = CMatrix::Identity(d, d);
  h_ = CMatrix::Zero(d, d);
  h_.bottomRightCorner(nh, nh) = lambda_.cast<Complex>().asDiagonal();
  if (k == 1) {
    h_.bottomRightCorner(nh, nh) += chi * chi.transpose() / zlast;
  } else {
    z_(nc - 1, nc - 1) = zlast;
    for (int i = 0; i + 1 < nc; ++i) h_(i, i + 1) = 1.0;
    for (int i = 0; i < nc; ++i) h_(nc - 1, i) = -family_.z(i);
    h_.block(nc - 1, nc, 1, nh) = chi.transpose();
    h_.block(nc, 0, nh, 1) = chi;
  }
  generator_ = h_;
  if (k > 1) generator_.row(nc - 1) /= zlast;

  gram_ = CMatrix::Identity(d, d);
  if (nc > 0) gram_.topLeftCorner(nc, nc) = counterterm_form(family_.z, k);

  const int ld = limit_dim();
  projection_.resize(d, ld);
  CVector e = CVector::Zero(ld);
  for (int i = 0; i < ld; ++i) {
    e.setZero();
    e(i) = 1.0;
    projection_.col(i) = project(e);
  }
  lift_.resize(ld, d);
  CVector f = CVector::Zero(d);
  for (int i = 0; i < d; ++i) {
    f.setZero();
    f(i) = 1.0;
    lift_.col(i) = lift(f);
  }
}

RVector ApproxSpace::power_chi(int p) const {
  return (family_.chi_n.array() / lambda_.array().pow(p)).matrix();
}

Complex ApproxSpace::product(const CVector& a, const CVector& b) const {
  if (a.size() != dim() || b.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "vector does not conform to the space");
  return a.dot(gram_ * b);
}

CVector ApproxSpace::project(const CVector& limit_flat) const {
  const int m = this->m(), k = this->k(), nc = k - 1, nh = dim_h();
  if (limit_flat.size() != limit_dim()) throw Error(ErrorKind::DimensionMismatch, "vector does not conform to the limit space");
  const CVector gam = limit_flat.head(m), rho = limit_flat.segment(m, m);
  CVector phi = limit_flat.tail(nh);

  if (k % 2 == 0 && m > 0) {
    // Shift phi along T^{-m} chi_n so that the rho_m relation holds.
    const CVector w = power_chi(m).cast<Complex>();
    const double ww = w.squaredNorm();
    if (!(ww > 0.0)) throw Error(ErrorKind::DegenerateProjection, "T^{-m} chi_n vanishes");
    phi += w * ((rho(m - 1) - w.dot(phi)) / ww);
  }

  CVector c = CVector::Zero(nc);
  for (int i = 0; i < m; ++i) c(i) = gam(i);
  // Triangular back-substitution, one pivot unknown per rho row.
  const int top = k % 2 == 1 ? m : m - 1;
  for (int j = top; j >= 1; --j) {
    const int pivot = k % 2 == 1 ? 2 * m - j : 2 * m - j - 1;
    Complex r = power_chi(j).cast<Complex>().dot(phi) - rho(j - 1);
    for (int i = m; i < pivot; ++i) r -= family_.z_at(j + i) * c(i);
    c(pivot) = r / family_.z_at(j + pivot);
  }

  CVector psi = phi;
  for (int j = 0; j < m; ++j) psi -= gam(j) * power_chi(j + 1).cast<Complex>();
  CVector out(nc + nh);
  out << c, psi;
  return out;
}

ApproxVector ApproxSpace::project(const PontryaginVector& v) const {
  return ApproxVector::from_flat(k(), project(v.flat()));
}

CVector ApproxSpace::lift(const CVector& flat) const {
  const int m = this->m(), k = this->k(), nc = k - 1, nh = dim_h();
  if (flat.size() != dim()) throw Error(ErrorKind::DimensionMismatch, "vector does not conform to the space");
  const CVector c = flat.head(nc);
  CVector phi = flat.tail(nh);
  for (int j = 0; j < m; ++j) phi += c(j) * power_chi(j + 1).cast<Complex>();
  CVector out(limit_dim());
  for (int j = 0; j < m; ++j) out(j) = c(j);
  for (int j = 1; j <= m; ++j) {
    Complex r = power_chi(j).cast<Complex>().dot(phi);
    for (int i = m; i <= std::min(2 * m - j, k - 2); ++i) r -= family_.z_at(j + i) * c(i);
    out(m + j - 1) = r;
  }
  out.tail(nh) = phi;
  return out;
}

PontryaginVector ApproxSpace::lift(const ApproxVector& v) const {
  return PontryaginVector::from_flat(m(), lift(v.flat()));
}

CMatrix ApproxSpace::auxiliary_gram() const {
  const int m = this->m(), ld = limit_dim();
  CMatrix g = CMatrix::Identity(ld, ld);
  for (int s = 0; s < m; ++s) {
    for (int u = 0; u < m; ++u) g(s, u) = family_.g_n(s + u + 2);
    g(s, m + s) = -1.0;
    g(m + s, s) = -1.0;
    g(m + s, m + s) = 0.0;
  }
  return g;
}

ResolventData ApproxSpace::resolvent_data() const {
  ResolventData d;
  d.eigenvalues = lambda_;
  d.chi = family_.chi_n;
  d.m = m();
  d.g.assign(2 * d.m + 2, 0.0);
  for (int s = 1; s <= 2 * d.m + 1; ++s) d.g[s] = family_.g_n(s);
  return d;
}

double ApproxSpace::scaled_a_n(double lambda) const { return scaled_a(resolvent_data(), lambda); }

CMatrix ApproxSpace::resolvent_direct(double lambda) const {
  if (resolvent_is_singular(resolvent_data(), lambda)) {
    throw Error(ErrorKind::SingularResolvent, "a_n(lambda) vanishes at lambda = " + std::to_string(lambda));
  }
  const CMatrix shifted = generator_ + lambda * CMatrix::Identity(dim(), dim());
  Eigen::FullPivLU<CMatrix> lu(shifted);
  if (!lu.isInvertible() || lu.rcond() < 1e-14) {
    throw Error(ErrorKind::SingularResolvent, "generator plus lambda is singular");
  }
  return lu.inverse();
}

CMatrix ApproxSpace::resolvent_closed_form(double lambda) const { return resolvent_matrix(resolvent_data(), lambda); }

ApproxVector ApproxSpace::evolve_schrodinger(double t, const ApproxVector& v) const {
  return ApproxVector::from_flat(k(), schrodinger_propagator(generator_, t) * v.flat());
}

ApproxVector ApproxSpace::evolve_parabolic(double t, const ApproxVector& v) const {
  return ApproxVector::from_flat(k(), parabolic_propagator(generator_, t) * v.flat());
}

std::pair<ApproxVector, ApproxVector> ApproxSpace::evolve_hyperbolic(double t, const ApproxVector& v,
                                                                     const ApproxVector& rate) const {
  const CosineFamily f = cosine_family(generator_, t);
  const CVector u0 = v.flat(), v0 = rate.flat();
  return {ApproxVector::from_flat(k(), f.cosine * u0 + f.sine * v0),
          ApproxVector::from_flat(k(), f.cosine_rate * u0 + f.sine_rate * v0)};
}

ApproxSpace build_space(const RegularizedFamily& family, const SpectralModel& model) {
  return ApproxSpace(family, model);
}

CMatrix transported_subspace(const ApproxSpace& space, const CMatrix& hamiltonian, const CMatrix& limit_negative,
                             double lambda) {
  const CMatrix shifted_h = hamiltonian + lambda * CMatrix::Identity(hamiltonian.rows(), hamiltonian.cols());
  const CMatrix rhs = space.projection_matrix() * (shifted_h * limit_negative);
  const CMatrix shifted = space.generator() + lambda * CMatrix::Identity(space.dim(), space.dim());
  return shifted.partialPivLu().solve(rhs);
}

bool is_negative_definite(const CMatrix& gram, const CMatrix& basis) {
  if (basis.cols() == 0) return true;
  const CMatrix s = basis.adjoint() * gram * basis;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (s + s.adjoint()), Eigen::EigenvaluesOnly);
  const RVector& ev = eig.eigenvalues();
  return ev.maxCoeff() < -1e-10 * ev.cwiseAbs().maxCoeff();
}

ApproxMajorant approx_majorant(const ApproxSpace& space, const CMatrix& hamiltonian, const CMatrix& limit_negative,
                               double lambda) {
  ApproxMajorant out;
  out.lambda = lambda;
  const int m = space.m();
  if (m == 0) {
    out.metric = MajorantMetric(space.gram(), CMatrix::Zero(space.dim(), 0));
    return out;
  }
  const CMatrix e = transported_subspace(space, hamiltonian, limit_negative, lambda);
  if (e.allFinite() && is_negative_definite(space.gram(), e)) {
    out.metric = MajorantMetric(space.gram(), e);
    return out;
  }
  out.transported = false;
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(0.5 * (space.gram() + space.gram().adjoint()));
  CMatrix basis(space.dim(), m);
  for (int i = 0; i < m; ++i) {
    const double mu = eig.eigenvalues()(i);
    if (!(mu < 0.0)) throw Error(ErrorKind::InconsistentGram, "counterterm product has fewer than m negative squares");
    basis.col(i) = eig.eigenvectors().col(i) / std::sqrt(-mu);
  }
  out.metric = MajorantMetric(space.gram(), basis);
  return out;
}

}  // namespace sslab
