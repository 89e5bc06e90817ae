#include "sslab/exact_evolution.hpp"

#include <algorithm>
#include <cmath>

#include "sslab/errors.hpp"
#include "sslab/matrix_functions.hpp"

namespace sslab {

double ResolventData::max_abs_g() const {
  double out = 0.0;
  for (size_t s = 1; s < g.size(); ++s) out = std::max(out, std::abs(g[s]));
  return out;
}

ResolventData limit_resolvent_data(const PontryaginSpace& space) {
  ResolventData d;
  d.eigenvalues = space.model().eigenvalues;
  d.chi = space.model().amplitudes;
  d.m = space.m();
  d.g.assign(2 * d.m + 2, 0.0);
  for (int s = 1; s <= 2 * d.m + 1; ++s) d.g[s] = space.g_reg(s);
  return d;
}

namespace {

// (chi, T^{-p} (T + lambda)^{-1} chi)
double shifted_sum(const ResolventData& d, int p, double lambda) {
  double out = 0.0;
  for (Eigen::Index j = 0; j < d.chi.size(); ++j) {
    const double l = d.eigenvalues(j);
    out += d.chi(j) * d.chi(j) / (std::pow(l, p) * (l + lambda));
  }
  return out;
}

// Value affine in the unknown gamma~_1: base + slope * gamma~_1.
struct Affine {
  Complex base;
  Complex slope;
  Complex at(Complex y) const { return base + slope * y; }
};

void check_dims(const ResolventData& d, const CVector& v) {
  if (v.size() != 2 * d.m + d.chi.size()) throw Error(ErrorKind::DimensionMismatch, "vector does not conform to resolvent data");
}

}  // namespace

double scaled_a(const ResolventData& d, double lambda) {
  double poly = 0.0;
  for (int s = 1; s <= 2 * d.m + 1; ++s) poly += d.g[s] * std::pow(-lambda, s - 1);
  return poly - std::pow(lambda, 2 * d.m + 1) * shifted_sum(d, 2 * d.m + 1, lambda);
}

bool resolvent_is_singular(const ResolventData& d, double lambda) {
  return !(std::abs(scaled_a(d, lambda)) > 1e-6 * d.max_abs_g());
}

CVector apply_resolvent(const ResolventData& d, double lambda, const CVector& v) {
  check_dims(d, v);
  if (resolvent_is_singular(d, lambda)) {
    throw Error(ErrorKind::SingularResolvent, "a(lambda) vanishes at lambda = " + std::to_string(lambda));
  }
  const int m = d.m;
  const Eigen::Index n = d.chi.size();
  const CVector gam = v.head(m), rho = v.segment(m, m), phi = v.tail(n);
  const RVector shifted = (d.eigenvalues.array() + lambda).matrix();
  const CVector phi_res = (phi.array() / shifted.array().cast<Complex>()).matrix();
  CVector out(v.size());

  if (m == 0) {
    const RVector u = (d.chi.array() / shifted.array()).matrix();
    const double k_coef = d.g[1] - lambda * shifted_sum(d, 1, lambda);
    const Complex c = u.cast<Complex>().dot(phi) / k_coef;
    out = phi_res - c * u.cast<Complex>();
    return out;
  }

  // Shift chain: gamma~_{s+1} = gamma_s - lambda gamma~_s, c~ = gamma_m - lambda gamma~_m.
  std::vector<Affine> gt(m + 1);
  gt[1] = {0.0, 1.0};
  for (int s = 1; s < m; ++s) gt[s + 1] = {gam(s - 1) - lambda * gt[s].base, -lambda * gt[s].slope};
  const Affine c{gam(m - 1) - lambda * gt[m].base, -lambda * gt[m].slope};

  const RVector w = (d.chi.array() / (d.eigenvalues.array().pow(m) * shifted.array())).matrix();
  const double k_coef = d.g[2 * m + 1] - lambda * shifted_sum(d, 2 * m + 1, lambda);

  std::vector<Affine> rt(m + 1);
  rt[m] = {w.cast<Complex>().dot(phi) - c.base * k_coef, -c.slope * k_coef};
  for (int j = m; j >= 2; --j) {
    rt[j - 1] = {rho(j - 1) - lambda * rt[j].base - d.g[j + m] * c.base,
                 -lambda * rt[j].slope - d.g[j + m] * c.slope};
  }
  // First row closes the system for gamma~_1.
  Affine first{lambda * rt[1].base + d.g[m + 1] * c.base, lambda * rt[1].slope + d.g[m + 1] * c.slope};
  for (int s = 1; s <= m; ++s) {
    first.base += d.g[s] * gt[s].base;
    first.slope += d.g[s] * gt[s].slope;
  }
  if (std::abs(first.slope) == 0.0) throw Error(ErrorKind::SingularResolvent, "resolvent system is singular");
  const Complex y = (rho(0) - first.base) / first.slope;

  for (int s = 1; s <= m; ++s) out(s - 1) = gt[s].at(y);
  for (int j = 1; j <= m; ++j) out(m + j - 1) = rt[j].at(y);
  out.tail(n) = phi_res - c.at(y) * w.cast<Complex>();
  return out;
}

CMatrix resolvent_matrix(const ResolventData& d, double lambda) {
  const Eigen::Index dim = 2 * d.m + d.chi.size();
  CMatrix out(dim, dim);
  CVector e = CVector::Zero(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    e.setZero();
    e(i) = 1.0;
    out.col(i) = apply_resolvent(d, lambda, e);
  }
  return out;
}

double a_limit(const PontryaginSpace& space, double lambda) { return scaled_a(limit_resolvent_data(space), lambda); }

ResolventExact resolvent_exact(const PontryaginSpace& space, double lambda) {
  const ResolventData d = limit_resolvent_data(space);
  return {lambda, resolvent_matrix(d, lambda), scaled_a(d, lambda)};
}

const std::vector<double>& lambda_scan() {
  static const std::vector<double> scan{0.0, 1.0, 2.0, 5.0, 10.0};
  return scan;
}

double default_lambda0(const PontryaginSpace& space) {
  const ResolventData d = limit_resolvent_data(space);
  for (double l : lambda_scan())
    if (!resolvent_is_singular(d, l)) return l;
  throw Error(ErrorKind::SingularResolvent, "no admissible lambda0 in the scan");
}

Hamiltonian build_hamiltonian(const PontryaginSpace& space, std::optional<double> lambda0) {
  const double l0 = lambda0 ? *lambda0 : default_lambda0(space);
  const CMatrix r = resolvent_exact(space, l0).matrix;
  Eigen::BDCSVD<CMatrix> svd(r);
  const auto& sv = svd.singularValues();
  const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1) : INFINITY;
  if (!(cond <= 1e12)) {
    throw Error(ErrorKind::IllConditioned, "R(lambda0) is numerically singular (condition " + std::to_string(cond) + ")");
  }
  Hamiltonian h;
  h.lambda0 = l0;
  h.resolvent_condition = cond;
  h.matrix = r.partialPivLu().solve(CMatrix::Identity(r.rows(), r.cols())) - l0 * CMatrix::Identity(r.rows(), r.cols());
  return h;
}

double j_self_adjointness_defect(const CMatrix& gram, const CMatrix& op) {
  return (op.adjoint() * gram - gram * op).cwiseAbs().maxCoeff();
}

CMatrix schrodinger_propagator(const CMatrix& generator, double t) { return expm(Complex(0.0, -t) * generator); }

CMatrix parabolic_propagator(const CMatrix& generator, double t) { return expm(-t * generator); }

PontryaginVector evolve_schrodinger(const Hamiltonian& h, double t, const PontryaginVector& initial) {
  const int m = static_cast<int>(initial.gamma.size());
  return PontryaginVector::from_flat(m, schrodinger_propagator(h.matrix, t) * initial.flat());
}

PontryaginVector evolve_parabolic(const Hamiltonian& h, double t, const PontryaginVector& initial) {
  const int m = static_cast<int>(initial.gamma.size());
  return PontryaginVector::from_flat(m, parabolic_propagator(h.matrix, t) * initial.flat());
}

std::pair<PontryaginVector, PontryaginVector> evolve_hyperbolic(const Hamiltonian& h, double t,
                                                                const PontryaginVector& initial,
                                                                const PontryaginVector& initial_rate) {
  const int m = static_cast<int>(initial.gamma.size());
  const CosineFamily f = cosine_family(h.matrix, t);
  const CVector u0 = initial.flat(), v0 = initial_rate.flat();
  return {PontryaginVector::from_flat(m, f.cosine * u0 + f.sine * v0),
          PontryaginVector::from_flat(m, f.cosine_rate * u0 + f.sine_rate * v0)};
}

SpectralSummary spectral_summary(const CMatrix& op) {
  SpectralSummary s;
  s.eigenvalues = sorted_eigenvalues(op);
  if (s.eigenvalues.size() == 0) return s;
  const double scale = std::max(1.0, s.eigenvalues.cwiseAbs().maxCoeff());
  s.min_real = s.eigenvalues.real().minCoeff();
  s.max_real = s.eigenvalues.real().maxCoeff();
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
    const double im = std::abs(s.eigenvalues(i).imag());
    s.max_abs_imag = std::max(s.max_abs_imag, im);
    if (im > 1e-9 * scale) ++s.nonreal;
  }
  return s;
}

}  // namespace sslab
