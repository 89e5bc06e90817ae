#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sslab/linalg.hpp"
#include "sslab/pontryagin_space.hpp"

namespace sslab {

// Data of the closed-form resolvent system on C^{2m} + H: the spectrum of T,
// the coupling vector and the moments g_1..g_{2m+1}. The exact operator uses
// limit data; the n-th approximation uses chi_n and g^{(n)}.
struct ResolventData {
  RVector eigenvalues;
  RVector chi;
  std::vector<double> g;  // g[s] for s = 1..2m+1; g[0] unused
  int m = 0;

  double max_abs_g() const;
};

ResolventData limit_resolvent_data(const PontryaginSpace& space);

// (-lambda)^{2m} a(lambda): polynomial part plus the spectral sum.
double scaled_a(const ResolventData& data, double lambda);

// True when |scaled_a| is below the admissibility threshold 1e-6 * max|g_s|.
bool resolvent_is_singular(const ResolventData& data, double lambda);

// Solves the resolvent system for the flat vector v = (gamma, rho, phi).
CVector apply_resolvent(const ResolventData& data, double lambda, const CVector& v);
CMatrix resolvent_matrix(const ResolventData& data, double lambda);

struct ResolventExact {
  double lambda = 0.0;
  CMatrix matrix;
  double a_value = 0.0;  // scaled form
};

double a_limit(const PontryaginSpace& space, double lambda);
ResolventExact resolvent_exact(const PontryaginSpace& space, double lambda);

// Candidate construction points, scanned in order.
const std::vector<double>& lambda_scan();
double default_lambda0(const PontryaginSpace& space);

struct Hamiltonian {
  CMatrix matrix;
  double lambda0 = 0.0;
  double resolvent_condition = 0.0;
};

// H = R(lambda0)^{-1} - lambda0. Throws IllConditioned when R(lambda0) has
// condition number above 1e12.
Hamiltonian build_hamiltonian(const PontryaginSpace& space, std::optional<double> lambda0 = std::nullopt);

// max |<H e_i, e_j> - <e_i, H e_j>|.
double j_self_adjointness_defect(const CMatrix& gram, const CMatrix& op);

CMatrix schrodinger_propagator(const CMatrix& generator, double t);
CMatrix parabolic_propagator(const CMatrix& generator, double t);

PontryaginVector evolve_schrodinger(const Hamiltonian& h, double t, const PontryaginVector& initial);
PontryaginVector evolve_parabolic(const Hamiltonian& h, double t, const PontryaginVector& initial);
std::pair<PontryaginVector, PontryaginVector> evolve_hyperbolic(const Hamiltonian& h, double t,
                                                                const PontryaginVector& initial,
                                                                const PontryaginVector& initial_rate);

struct SpectralSummary {
  CVector eigenvalues;
  int nonreal = 0;
  double max_abs_imag = 0.0;
  double min_real = 0.0;
  double max_real = 0.0;
};
SpectralSummary spectral_summary(const CMatrix& op);

}  // namespace sslab
