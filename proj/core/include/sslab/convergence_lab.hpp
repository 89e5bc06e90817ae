#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sslab/approx_system.hpp"
#include "sslab/exact_evolution.hpp"
#include "sslab/pontryagin_space.hpp"
#include "sslab/spectral_model.hpp"

namespace sslab {

// Immutable context shared by every ladder: the model, the counterterm
// family, the limit space and the exact Hamiltonian.
class Experiment {
 public:
  Experiment(const SpectralModel& model, const FamilySpec& family, std::optional<double> lambda0 = std::nullopt);

  const SpectralModel& model() const { return model_; }
  const FamilySpec& family() const { return family_; }
  const PontryaginSpace& space() const { return space_; }
  const Hamiltonian& hamiltonian() const { return hamiltonian_; }
  int k() const { return model_.k; }
  int m() const { return model_.m(); }

  ApproxSpace approx(int n) const;
  // Same experiment with another admissible negative subspace of the limit space.
  Experiment with_negative_basis(const CMatrix& basis) const;

 private:
  SpectralModel model_;
  FamilySpec family_;
  PontryaginSpace space_;
  Hamiltonian hamiltonian_;
};

enum class LadderKind { Schrodinger, Parabolic, Hyperbolic, Resolvent };
const char* to_string(LadderKind kind);

struct LadderConfig {
  LadderKind kind = LadderKind::Schrodinger;
  std::vector<int> n_values;
  std::vector<double> t_values;       // evolution kinds
  std::vector<double> lambda_values;  // resolvent kind
  std::vector<CVector> probes;        // flat limit-space vectors
  int workers = 1;
  // Fixed transport point for the n-th majorants; selected by scan when empty.
  std::optional<double> transport_lambda;
};

struct ConvergenceRow {
  std::string check;
  int n = 0;
  double param = 0.0;  // t or lambda
  int probe = 0;
  double error = 0.0;            // majorant norm on the n-th space
  double error_euclidean = 0.0;  // raw coordinates
  double reference_norm = 0.0;   // majorant norm of P_n applied to the exact image
  std::string status = "ok";     // ok, skipped, failed
  std::string note;
};

struct TrendVerdict {
  std::string name;
  bool pass = false;
  double slope = 0.0;
  double drop = 0.0;
  bool monotone = false;
  std::string detail;
};

struct ConvergenceReport {
  std::string check;
  std::vector<ConvergenceRow> rows;
  std::vector<TrendVerdict> verdicts;
  std::map<std::string, double> constants;
  std::vector<std::string> notes;

  bool passed() const;
};

// 2m canonical (gamma, rho) directions, then `random_count` seeded smooth phi
// directions with coefficients N(0,1)/lambda_j, normalized.
std::vector<CVector> standard_probes(const PontryaginSpace& space, std::uint64_t seed, int random_count = 3);

// || P_n A v - A_n P_n v || in the given metric on the n-th space.
double pn_strong_error(const ApproxSpace& space, const MajorantMetric& metric, const CMatrix& a_n, const CMatrix& a,
                       const CVector& v);
// || u_n - P_n u ||.
double class_membership_error(const ApproxSpace& space, const MajorantMetric& metric, const CVector& u_n,
                              const CVector& u);

// Pass iff the least-squares slope of log(error) against log(n) is negative
// and error(n_max) <= error(n_min) / drop_threshold. All-zero series pass as exact.
TrendVerdict trend_verdict(const std::string& name, const std::vector<int>& ns, const std::vector<double>& errors,
                           double drop_threshold = 10.0, double zero_tol = 1e-12);

// Smallest lambda of the scan that is admissible for the limit data and gives
// a negative-definite transported subspace for every n.
std::optional<double> select_transport_lambda(const Experiment& exp, const std::vector<int>& ns);

ConvergenceReport run_theorem1(const Experiment& exp, const LadderConfig& cfg);
ConvergenceReport run_theorem2(const Experiment& exp, const LadderConfig& cfg);
ConvergenceReport run_theorem3(const Experiment& exp, const LadderConfig& cfg);
ConvergenceReport run_resolvent_convergence(const Experiment& exp, const LadderConfig& cfg);
ConvergenceReport run_ladder(const Experiment& exp, const LadderConfig& cfg);

// ||Q_n P_n v - v||: exact for odd k, a decreasing trend for even k.
ConvergenceReport run_projection_identity(const Experiment& exp, const std::vector<int>& ns,
                                          const std::vector<CVector>& probes);
// |<P_n v, P_n v> - <v, v>| along the ladder.
ConvergenceReport run_product_convergence(const Experiment& exp, const std::vector<int>& ns,
                                          const std::vector<CVector>& probes);
// Signature of the counterterm product by eigenvalues, elimination and the pairing reduction.
ConvergenceReport run_signature_audit(const Experiment& exp, const std::vector<int>& ns);
// Q_n (A_n + lambda)^{-1} - R~_n(lambda) Q_n on the probe images.
ConvergenceReport run_intertwining(const Experiment& exp, const std::vector<int>& ns,
                                   const std::vector<double>& lambdas, std::uint64_t seed, int samples = 20);
// k = 1: the first-order system against a direct spectral solution of the
// rank-one equation with coupling 1/z_0.
ConvergenceReport run_m0_reduction(const Experiment& exp, const std::vector<int>& ns, const std::vector<double>& ts,
                                   std::uint64_t seed);

}  // namespace sslab
