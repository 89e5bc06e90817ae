#include "sslab/convergence_lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <thread>

#include "sslab/errors.hpp"
#include "sslab/matrix_functions.hpp"

namespace sslab {

Experiment::Experiment(const SpectralModel& model, const FamilySpec& family, std::optional<double> lambda0)
    : model_(model),
      family_(family),
      space_(model, family.g_targets),
      hamiltonian_(build_hamiltonian(space_, lambda0)) {}

ApproxSpace Experiment::approx(int n) const { return ApproxSpace(make_family(model_, family_, n), model_); }

Experiment Experiment::with_negative_basis(const CMatrix& basis) const {
  Experiment copy = *this;
  copy.space_ = space_.with_negative_basis(basis);
  return copy;
}

const char* to_string(LadderKind kind) {
  switch (kind) {
    case LadderKind::Schrodinger: return "schrodinger";
    case LadderKind::Parabolic: return "parabolic";
    case LadderKind::Hyperbolic: return "hyperbolic";
    case LadderKind::Resolvent: return "resolvent";
  }
  return "unknown";
}

bool ConvergenceReport::passed() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  for (const auto& r : rows)
    if (r.status == "failed") return false;
  return true;
}

namespace {

// Runs task(i) for i in [0, count) on up to `workers` threads. The first
// exception is rethrown after all threads join.
void parallel_for(int count, int workers, const std::function<void(int)>& task) {
  workers = std::max(1, std::min(workers, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          task(i);
        } catch (...) {
          if (!failed.exchange(true)) first = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

void check_ladder(const Experiment& exp, const std::vector<int>& ns, const std::vector<CVector>& probes) {
  if (ns.empty()) throw Error(ErrorKind::InvalidModel, "ladder needs at least one n");
  for (size_t i = 0; i < ns.size(); ++i) {
    if (ns[i] < 1) throw Error(ErrorKind::InvalidModel, "ladder indices must be >= 1");
    if (i > 0 && ns[i] <= ns[i - 1]) throw Error(ErrorKind::InvalidModel, "ladder indices must be ascending");
  }
  for (const auto& p : probes)
    if (p.size() != exp.space().dim()) throw Error(ErrorKind::DimensionMismatch, "probe does not conform to the limit space");
}

// Worst probe per (check, param), one trend verdict per series.
void add_trend_verdicts(ConvergenceReport& report, const std::vector<int>& ns, double drop_threshold,
                        bool require_monotone) {
  std::map<std::pair<std::string, double>, std::vector<double>> worst;
  std::map<std::pair<std::string, double>, bool> failed;
  for (const auto& r : report.rows) {
    const auto key = std::make_pair(r.check, r.param);
    auto& series = worst[key];
    if (series.empty()) series.assign(ns.size(), 0.0);
    if (r.status == "failed") failed[key] = true;
    if (r.status != "ok") continue;
    const auto it = std::find(ns.begin(), ns.end(), r.n);
    if (it == ns.end()) continue;
    double& slot = series[static_cast<size_t>(it - ns.begin())];
    slot = std::max(slot, r.error);
  }
  for (const auto& [key, series] : worst) {
    char label[128];
    std::snprintf(label, sizeof label, "%s @ %.6g", key.first.c_str(), key.second);
    bool any_ok = false;
    for (const auto& r : report.rows)
      if (r.check == key.first && r.param == key.second && r.status == "ok") any_ok = true;
    if (!any_ok) {
      report.notes.push_back(std::string(label) + ": all rows skipped");
      continue;
    }
    TrendVerdict v = trend_verdict(label, ns, series, drop_threshold);
    if (require_monotone && v.detail != "exact" && !v.monotone) {
      v.pass = false;
      v.detail += "; not monotone";
    }
    if (failed.count(key)) {
      v.pass = false;
      v.detail += "; failed rows";
    }
    report.verdicts.push_back(v);
  }
}

struct ExactOps {
  double param;
  std::vector<std::pair<std::string, CMatrix>> ops;  // (check name, operator on the limit space)
  bool skipped = false;
  std::string note;
};

std::vector<std::pair<std::string, CMatrix>> approx_ops(const ApproxSpace& s, LadderKind kind, double param) {
  switch (kind) {
    case LadderKind::Schrodinger: return {{"theorem1", schrodinger_propagator(s.generator(), param)}};
    case LadderKind::Parabolic: return {{"theorem2", parabolic_propagator(s.generator(), param)}};
    case LadderKind::Hyperbolic: {
      CosineFamily f = cosine_family(s.generator(), param);
      return {{"theorem3_V", std::move(f.cosine)}, {"theorem3_W", std::move(f.sine)}};
    }
    case LadderKind::Resolvent: return {{"resolvent", s.resolvent_direct(param)}};
  }
  return {};
}

}  // namespace

std::vector<CVector> standard_probes(const PontryaginSpace& space, std::uint64_t seed, int random_count) {
  std::vector<CVector> out;
  const int d = space.dim(), m = space.m();
  for (int i = 0; i < 2 * m; ++i) {
    CVector e = CVector::Zero(d);
    e(i) = 1.0;
    out.push_back(e);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const RVector& lam = space.model().eigenvalues;
  for (int r = 0; r < random_count; ++r) {
    CVector v = CVector::Zero(d);
    for (int j = 0; j < space.dim_h(); ++j) v(2 * m + j) = normal(rng) / lam(j);
    v /= v.norm();
    out.push_back(v);
  }
  return out;
}

double pn_strong_error(const ApproxSpace& space, const MajorantMetric& metric, const CMatrix& a_n, const CMatrix& a,
                       const CVector& v) {
  const CMatrix& p = space.projection_matrix();
  return metric.norm(p * (a * v) - a_n * (p * v));
}

double class_membership_error(const ApproxSpace& space, const MajorantMetric& metric, const CVector& u_n,
                              const CVector& u) {
  return metric.norm(u_n - space.projection_matrix() * u);
}

TrendVerdict trend_verdict(const std::string& name, const std::vector<int>& ns, const std::vector<double>& errors,
                           double drop_threshold, double zero_tol) {
  TrendVerdict v;
  v.name = name;
  if (ns.size() != errors.size() || ns.empty()) throw Error(ErrorKind::DimensionMismatch, "trend series length");
  for (double e : errors) {
    if (!std::isfinite(e) || e < 0.0) {
      v.detail = "non-finite or negative error";
      return v;
    }
  }
  const double worst = *std::max_element(errors.begin(), errors.end());
  if (worst <= zero_tol) {
    v.pass = true;
    v.monotone = true;
    v.detail = "exact";
    return v;
  }
  if (ns.size() < 2) {
    v.detail = "ladder needs at least two indices";
    return v;
  }
  const double floor = 1e-300;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double cnt = static_cast<double>(ns.size());
  for (size_t i = 0; i < ns.size(); ++i) {
    const double x = std::log(static_cast<double>(ns[i]));
    const double y = std::log(std::max(errors[i], floor));
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  v.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  v.drop = errors.front() / std::max(errors.back(), floor);
  v.monotone = true;
  for (size_t i = 1; i < errors.size(); ++i)
    if (!(errors[i] < errors[i - 1])) v.monotone = false;
  v.pass = v.slope < 0.0 && errors.back() <= errors.front() / drop_threshold;
  char buf[160];
  std::snprintf(buf, sizeof buf, "slope %.4g, drop %.4g", v.slope, v.drop);
  v.detail = buf;
  return v;
}

std::optional<double> select_transport_lambda(const Experiment& exp, const std::vector<int>& ns) {
  if (exp.m() == 0) return exp.hamiltonian().lambda0;
  const ResolventData limit = limit_resolvent_data(exp.space());
  std::vector<ApproxSpace> spaces;
  for (int n : ns) spaces.push_back(exp.approx(n));
  for (double lambda : lambda_scan()) {
    if (resolvent_is_singular(limit, lambda)) continue;
    bool ok = true;
    for (const auto& s : spaces) {
      if (resolvent_is_singular(s.resolvent_data(), lambda)) { ok = false; break; }
      const CMatrix e = transported_subspace(s, exp.hamiltonian().matrix, exp.space().negative_basis(), lambda);
      if (!e.allFinite() || !is_negative_definite(s.gram(), e)) { ok = false; break; }
    }
    if (ok) return lambda;
  }
  return std::nullopt;
}

ConvergenceReport run_ladder(const Experiment& exp, const LadderConfig& cfg) {
  check_ladder(exp, cfg.n_values, cfg.probes);
  ConvergenceReport report;
  const bool resolvent = cfg.kind == LadderKind::Resolvent;
  report.check = resolvent ? "resolvent" : to_string(cfg.kind);
  const std::vector<double>& params = resolvent ? cfg.lambda_values : cfg.t_values;
  if (params.empty()) throw Error(ErrorKind::InvalidModel, "ladder needs parameter values");
  for (double p : params)
    if (!std::isfinite(p) || (!resolvent && p < 0.0)) throw Error(ErrorKind::InvalidModel, "bad ladder parameter");

  std::optional<double> transport = cfg.transport_lambda;
  if (!transport) transport = select_transport_lambda(exp, cfg.n_values);
  if (!transport) {
    transport = exp.hamiltonian().lambda0;
    report.notes.push_back("no scan value gives a negative-definite transported subspace on every n");
  }
  report.constants["transport_lambda"] = *transport;

  const CMatrix& h = exp.hamiltonian().matrix;
  const ResolventData limit = limit_resolvent_data(exp.space());
  std::vector<ExactOps> exact;
  for (double p : params) {
    ExactOps e{p, {}, false, ""};
    switch (cfg.kind) {
      case LadderKind::Schrodinger: e.ops = {{"theorem1", schrodinger_propagator(h, p)}}; break;
      case LadderKind::Parabolic: e.ops = {{"theorem2", parabolic_propagator(h, p)}}; break;
      case LadderKind::Hyperbolic: {
        CosineFamily f = cosine_family(h, p);
        e.ops = {{"theorem3_V", std::move(f.cosine)}, {"theorem3_W", std::move(f.sine)}};
        break;
      }
      case LadderKind::Resolvent:
        if (resolvent_is_singular(limit, p)) {
          e.skipped = true;
          e.note = "a(lambda) ~ 0";
          e.ops = {{"resolvent", CMatrix()}};
          char buf[96];
          std::snprintf(buf, sizeof buf, "lambda %.6g skipped: a(lambda) ~ 0 (scaled value %.3g)", p, scaled_a(limit, p));
          report.notes.push_back(buf);
        } else {
          e.ops = {{"resolvent", resolvent_matrix(limit, p)}};
        }
        break;
    }
    exact.push_back(std::move(e));
  }

  const int count = static_cast<int>(cfg.n_values.size());
  std::vector<std::vector<ConvergenceRow>> per_n(count);
  std::vector<double> pn_norm(count, 0.0), growth(count, -INFINITY);
  std::vector<int> fallback(count, 0);

  parallel_for(count, cfg.workers, [&](int idx) {
    const int n = cfg.n_values[idx];
    auto& rows = per_n[idx];
    try {
      const ApproxSpace s = exp.approx(n);
      const ApproxMajorant maj = approx_majorant(s, h, exp.space().negative_basis(), *transport);
      fallback[idx] = maj.transported ? 0 : 1;
      const CMatrix& p = s.projection_matrix();
      pn_norm[idx] = maj.metric.operator_norm(p, exp.space().majorant());
      for (const auto& e : exact) {
        std::vector<std::pair<std::string, CMatrix>> ops;
        std::string skip_note = e.note;
        bool skip = e.skipped;
        if (!skip) {
          try {
            ops = approx_ops(s, cfg.kind, e.param);
          } catch (const Error& err) {
            if (err.kind() != ErrorKind::SingularResolvent) throw;
            skip = true;
            skip_note = "a_n(lambda) ~ 0";
          }
        }
        for (size_t q = 0; q < e.ops.size(); ++q) {
          if (!skip && cfg.kind == LadderKind::Schrodinger && e.param > 0.0) {
            growth[idx] = std::max(growth[idx], std::log(maj.metric.operator_norm(ops[q].second, maj.metric)) / e.param);
          }
          for (size_t pr = 0; pr < cfg.probes.size(); ++pr) {
            ConvergenceRow row;
            row.check = e.ops[q].first;
            row.n = n;
            row.param = e.param;
            row.probe = static_cast<int>(pr);
            if (skip) {
              row.status = "skipped";
              row.note = skip_note;
            } else {
              const CVector& v = cfg.probes[pr];
              const CVector target = p * (e.ops[q].second * v);
              const CVector diff = target - ops[q].second * (p * v);
              row.error = maj.metric.norm(diff);
              row.error_euclidean = diff.norm();
              row.reference_norm = maj.metric.norm(target);
              if (!std::isfinite(row.error)) {
                row.status = "failed";
                row.note = "non-finite error";
              }
            }
            rows.push_back(std::move(row));
          }
        }
      }
    } catch (const Error& err) {
      rows.clear();
      for (const auto& e : exact)
        for (const auto& op : e.ops)
          for (size_t pr = 0; pr < cfg.probes.size(); ++pr) {
            ConvergenceRow row;
            row.check = op.first;
            row.n = n;
            row.param = e.param;
            row.probe = static_cast<int>(pr);
            row.status = "failed";
            row.note = err.what();
            rows.push_back(std::move(row));
          }
    }
  });

  for (auto& rows : per_n)
    for (auto& r : rows) report.rows.push_back(std::move(r));
  std::stable_sort(report.rows.begin(), report.rows.end(), [](const ConvergenceRow& a, const ConvergenceRow& b) {
    if (a.check != b.check) return a.check < b.check;
    if (a.n != b.n) return a.n < b.n;
    if (a.param != b.param) return a.param < b.param;
    return a.probe < b.probe;
  });
  report.constants["projection_norm_max"] = *std::max_element(pn_norm.begin(), pn_norm.end());
  const double g = *std::max_element(growth.begin(), growth.end());
  if (std::isfinite(g)) report.constants["growth_rate_max"] = g;
  int fallbacks = 0;
  for (int f : fallback) fallbacks += f;
  report.constants["majorant_fallbacks"] = fallbacks;
  add_trend_verdicts(report, cfg.n_values, 10.0, false);
  return report;
}

ConvergenceReport run_theorem1(const Experiment& exp, const LadderConfig& cfg) {
  LadderConfig c = cfg;
  c.kind = LadderKind::Schrodinger;
  return run_ladder(exp, c);
}

ConvergenceReport run_theorem2(const Experiment& exp, const LadderConfig& cfg) {
  LadderConfig c = cfg;
  c.kind = LadderKind::Parabolic;
  return run_ladder(exp, c);
}

ConvergenceReport run_theorem3(const Experiment& exp, const LadderConfig& cfg) {
  LadderConfig c = cfg;
  c.kind = LadderKind::Hyperbolic;
  return run_ladder(exp, c);
}

ConvergenceReport run_resolvent_convergence(const Experiment& exp, const LadderConfig& cfg) {
  LadderConfig c = cfg;
  c.kind = LadderKind::Resolvent;
  return run_ladder(exp, c);
}

ConvergenceReport run_projection_identity(const Experiment& exp, const std::vector<int>& ns,
                                          const std::vector<CVector>& probes) {
  check_ladder(exp, ns, probes);
  ConvergenceReport report;
  report.check = "projection_identity";
  std::vector<double> worst(ns.size(), 0.0);
  for (size_t i = 0; i < ns.size(); ++i) {
    const ApproxSpace s = exp.approx(ns[i]);
    const CMatrix qp = s.lift_matrix() * s.projection_matrix();
    for (size_t pr = 0; pr < probes.size(); ++pr) {
      ConvergenceRow row;
      row.check = report.check;
      row.n = ns[i];
      row.probe = static_cast<int>(pr);
      const CVector diff = qp * probes[pr] - probes[pr];
      row.error = diff.norm();
      row.error_euclidean = row.error;
      row.reference_norm = probes[pr].norm();
      worst[i] = std::max(worst[i], row.error);
      report.rows.push_back(row);
    }
  }
  if (exp.k() % 2 == 1) {
    TrendVerdict v;
    v.name = "projection_identity exact (odd k)";
    const double w = *std::max_element(worst.begin(), worst.end());
    v.pass = w <= 1e-12;
    v.monotone = true;
    char buf[64];
    std::snprintf(buf, sizeof buf, "max defect %.3g", w);
    v.detail = buf;
    report.verdicts.push_back(v);
  } else {
    TrendVerdict v = trend_verdict("projection_identity trend (even k)", ns, worst);
    if (v.detail != "exact" && !v.monotone) {
      v.pass = false;
      v.detail += "; not monotone";
    }
    report.verdicts.push_back(v);
  }
  return report;
}

ConvergenceReport run_product_convergence(const Experiment& exp, const std::vector<int>& ns,
                                          const std::vector<CVector>& probes) {
  check_ladder(exp, ns, probes);
  ConvergenceReport report;
  report.check = "product_convergence";
  for (int n : ns) {
    const ApproxSpace s = exp.approx(n);
    for (size_t pr = 0; pr < probes.size(); ++pr) {
      const CVector pv = s.projection_matrix() * probes[pr];
      ConvergenceRow row;
      row.check = report.check;
      row.n = n;
      row.probe = static_cast<int>(pr);
      const Complex limit = exp.space().product(probes[pr], probes[pr]);
      row.error = std::abs(s.product(pv, pv) - limit);
      row.error_euclidean = row.error;
      // Size of the summed terms |Pv|^T |G| |Pv|; the rounding floor scales with it.
      const RVector mag = pv.cwiseAbs();
      row.reference_norm = mag.dot(s.gram().cwiseAbs() * mag);
      report.rows.push_back(row);
    }
  }
  if (exp.k() % 2 == 1) {
    // The n-th moments used by the product equal the targets, so the defect is rounding only.
    TrendVerdict v;
    v.name = "product_convergence exact (odd k)";
    double worst = 0.0;
    for (const auto& r : report.rows) worst = std::max(worst, r.error / std::max(1.0, r.reference_norm));
    v.pass = worst <= 1e-12;
    v.monotone = true;
    char buf[96];
    std::snprintf(buf, sizeof buf, "max defect relative to term size %.3g", worst);
    v.detail = buf;
    report.verdicts.push_back(v);
  } else {
    add_trend_verdicts(report, ns, 10.0, false);
  }
  return report;
}

ConvergenceReport run_signature_audit(const Experiment& exp, const std::vector<int>& ns) {
  ConvergenceReport report;
  report.check = "signature";
  const int m = exp.m();
  TrendVerdict v;
  v.name = "signature";
  v.pass = true;
  const CMatrix block = exp.space().gram().topLeftCorner(2 * m, 2 * m);
  const Inertia limit = inertia(block);
  {
    ConvergenceRow row;
    row.check = report.check;
    row.n = 0;
    row.error = std::abs(limit.negative - m) + std::abs(limit.positive - m);
    row.note = "limit (gamma, rho) block";
    if (row.error != 0.0) v.pass = false;
    report.rows.push_back(row);
  }
  for (int n : ns) {
    const ApproxSpace s = exp.approx(n);
    ConvergenceRow row;
    row.check = report.check;
    row.n = n;
    const int eig = negative_squares(s.gram());
    const int cong = negative_squares_by_congruence(s.gram());
    const ReductionCount red = counterterm_form_reduction(s.family().z, s.k());
    row.error = std::abs(eig - m) + std::abs(cong - m) + std::abs(red.negative - m);
    char buf[128];
    std::snprintf(buf, sizeof buf, "eigen %d, elimination %d, reduction %d, z_{k-1} %.6g", eig, cong, red.negative,
                  s.family().z(s.k() - 1));
    row.note = buf;
    if (row.error != 0.0) v.pass = false;
    report.rows.push_back(row);
  }
  v.monotone = true;
  v.detail = v.pass ? "all counts equal m" : "count mismatch";
  report.verdicts.push_back(v);
  return report;
}

ConvergenceReport run_intertwining(const Experiment& exp, const std::vector<int>& ns,
                                   const std::vector<double>& lambdas, std::uint64_t seed, int samples) {
  ConvergenceReport report;
  report.check = "intertwining";
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  bool any = false;
  for (int n : ns) {
    const ApproxSpace s = exp.approx(n);
    for (double lambda : lambdas) {
      CMatrix direct, closed;
      bool skip = false;
      try {
        direct = s.resolvent_direct(lambda);
        closed = s.resolvent_closed_form(lambda);
      } catch (const Error& err) {
        if (err.kind() != ErrorKind::SingularResolvent) throw;
        skip = true;
      }
      for (int r = 0; r < samples; ++r) {
        CVector v(s.dim());
        for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(normal(rng), normal(rng));
        ConvergenceRow row;
        row.check = report.check;
        row.n = n;
        row.param = lambda;
        row.probe = r;
        if (skip) {
          row.status = "skipped";
          row.note = "a_n(lambda) ~ 0";
        } else {
          const CVector diff = s.lift_matrix() * (direct * v) - closed * (s.lift_matrix() * v);
          row.error = diff.norm() / v.norm();
          row.error_euclidean = row.error;
          row.reference_norm = v.norm();
          worst = std::max(worst, row.error);
          any = true;
        }
        report.rows.push_back(row);
      }
    }
  }
  TrendVerdict v;
  v.name = "intertwining";
  v.pass = any && worst <= 1e-8;
  v.monotone = true;
  char buf[64];
  std::snprintf(buf, sizeof buf, "max relative defect %.3g", worst);
  v.detail = buf;
  report.verdicts.push_back(v);
  return report;
}

ConvergenceReport run_m0_reduction(const Experiment& exp, const std::vector<int>& ns, const std::vector<double>& ts,
                                   std::uint64_t seed) {
  if (exp.k() != 1) throw Error(ErrorKind::InvalidModel, "rank-one reduction needs k = 1");
  ConvergenceReport report;
  report.check = "m0_reduction";
  const auto probes = standard_probes(exp.space(), seed, 3);
  double worst = 0.0;
  for (int n : ns) {
    const ApproxSpace s = exp.approx(n);
    const RegularizedFamily& fam = s.family();
    // Rank-one equation: i psi' = T psi + g_n chi_n (chi_n, psi), g_n = 1/z_0.
    const double coupling = 1.0 / fam.z(0);
    RMatrix a = s.eigenvalues().asDiagonal();
    a += coupling * fam.chi_n * fam.chi_n.transpose();
    Eigen::SelfAdjointEigenSolver<RMatrix> eig(a);
    const CMatrix vecs = eig.eigenvectors().cast<Complex>();
    for (double t : ts) {
      CVector phase(eig.eigenvalues().size());
      for (Eigen::Index i = 0; i < phase.size(); ++i) phase(i) = std::exp(Complex(0.0, -eig.eigenvalues()(i) * t));
      const CMatrix direct = vecs * phase.asDiagonal() * vecs.adjoint();
      const CMatrix system = schrodinger_propagator(s.generator(), t);
      for (size_t pr = 0; pr < probes.size(); ++pr) {
        ConvergenceRow row;
        row.check = report.check;
        row.n = n;
        row.param = t;
        row.probe = static_cast<int>(pr);
        const CVector diff = system * probes[pr] - direct * probes[pr];
        row.error = diff.norm();
        row.error_euclidean = row.error;
        row.reference_norm = probes[pr].norm();
        worst = std::max(worst, row.error);
        report.rows.push_back(row);
      }
    }
  }
  TrendVerdict v;
  v.name = "m0-reduction";
  v.pass = worst <= 1e-9;
  v.monotone = true;
  char buf[64];
  std::snprintf(buf, sizeof buf, "max deviation %.3g", worst);
  v.detail = buf;
  report.verdicts.push_back(v);
  return report;
}

}  // namespace sslab
