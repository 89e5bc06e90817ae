#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sslab/linalg.hpp"

namespace sslab {

// Diagonal surrogate of (T, chi): T = diag(eigenvalues), chi = amplitudes.
struct SpectralModel {
  RVector eigenvalues;
  RVector amplitudes;
  int k = 1;              // singularity order: chi lies in H^{-k-1} but not H^{-k}
  double a_shift = 0.0;   // constant a in T = -Laplacian + a (informational)
  // Mass of the part of (chi, T^{-k-1} chi) carried by modes beyond the box.
  // It enters the limit data only; the regularized systems never see it.
  double tail_moment = 0.0;

  int dim() const { return static_cast<int>(eigenvalues.size()); }
  int m() const { return k / 2; }
};

struct EigenvalueLaw {
  enum class Kind { Power, LogSpaced };
  Kind kind = Kind::Power;
  // Power: lambda_j = shift + scale * j^exponent, j = 1..N.
  double shift = 1.0;
  double scale = 1.0;
  std::optional<double> exponent;  // default 2/d
  // LogSpaced: N points geometrically spaced in [lower, upper].
  double lower = 1.0;
  double upper = 100.0;
};

struct AmplitudeLaw {
  enum class Kind { Flat, Power, LogShell };
  Kind kind = Kind::Flat;
  double exponent = 0.0;  // Power: x_j = lambda_j^exponent
  double excess = 2.0;    // LogShell: x_j^2 = dlog(lambda) * lambda_j^(k + excess)
};

struct ModelConfig {
  std::optional<int> k;
  std::optional<int> d;  // spatial dimension; k = floor(d / 2)
  int N = 64;
  EigenvalueLaw eigenvalue_law;
  AmplitudeLaw amplitude_law;
  std::vector<double> eigenvalues;  // explicit spectrum overrides the law
  std::vector<double> amplitudes;   // explicit amplitudes override the law
  std::optional<double> tail_moment;  // default: 0.01 for even k, 0 for odd k
};

SpectralModel build_model(const ModelConfig& cfg);
void validate(const SpectralModel& model);

// Sum_j chi_j^2 / lambda_j^s.
double moment(const SpectralModel& model, const RVector& chi, int s);

// chi_n = exp(-T/n) chi.
RVector regularize(const SpectralModel& model, int n);
RVector regularize(const SpectralModel& model, const RVector& chi, int n);

// Exact scheme: z_{l-1} = g_l - (chi_n, T^{-l} chi_n), l = 1..k.
RVector counterterms(const SpectralModel& model, const RVector& chi_n, const std::vector<double>& g_targets);

// Limit data (chi, T^{-s} chi)_reg for s = 0..s_max: the renormalized g_s for
// 1 <= s <= k, the box sum (plus the tail at s = k+1) above k.
std::vector<double> regularized_moments(const SpectralModel& model, const std::vector<double>& g_targets, int s_max);

struct FamilySpec {
  enum class Scheme { Exact, Noisy };
  std::vector<double> g_targets;  // g_1..g_k, g_1 = -1/alpha
  Scheme scheme = Scheme::Exact;
  double noise = 0.0;             // Noisy: z gets noise * xi_l / n
  std::uint64_t seed = 0;

  double alpha() const { return -1.0 / g_targets.at(0); }
  static FamilySpec from_alpha(double alpha, const std::vector<double>& higher);
};

struct RegularizedFamily {
  int n = 1;
  int k = 1;
  RVector chi_n;
  RVector z;                       // z_0..z_{k-1}
  std::vector<double> g_targets;   // g_1..g_k
  double alpha = 0.0;
  RVector g_n_moments;             // g^{(n)}_l for l = 1..2m+1, stored at l-1

  // z_l, zero for l >= k.
  double z_at(int l) const { return (l >= 0 && l < k) ? z(l) : 0.0; }
  double g_n(int l) const { return g_n_moments(l - 1); }
};

RegularizedFamily make_family(const SpectralModel& model, const FamilySpec& spec, int n);

// Partial norms ||T^{-k/2} chi|| over growing truncations of the box.
struct SingularTrend {
  std::vector<int> truncations;
  std::vector<double> norms;
  bool strictly_increasing = false;
  double tail_share = 0.0;  // growth of the squared norm over the upper half of the ladder, relative to the total
  bool strongly_singular = false;
  std::string flag;         // empty when strongly singular
};
SingularTrend verify_singular_trend(const SpectralModel& model, const std::vector<int>& truncations,
                                    double min_tail_share = 0.05);
// Doubling truncations 1, 2, 4, ..., N.
std::vector<int> doubling_truncations(int N);

}  // namespace sslab
