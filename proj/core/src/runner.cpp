#include "sslab/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>

#include <json.hpp>

#include "sslab/errors.hpp"
#include "sslab/exact_evolution.hpp"

namespace sslab {

using nlohmann::json;

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_text(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

bool wants(const LadderSection& l, const std::string& check) {
  return std::find(l.checks.begin(), l.checks.end(), check) != l.checks.end();
}

}  // namespace

const std::string& csv_header() {
  static const std::string header = "check,k,n,param,probe,error,error_euclidean,reference_norm,status,note";
  return header;
}

std::string format_csv(const std::vector<ConvergenceReport>& reports, int k) {
  std::string out = csv_header() + "\n";
  for (const auto& rep : reports) {
    for (const auto& r : rep.rows) {
      out += csv_text(r.check) + "," + std::to_string(k) + "," + std::to_string(r.n) + "," + fmt17(r.param) + "," +
             std::to_string(r.probe) + "," + fmt17(r.error) + "," + fmt17(r.error_euclidean) + "," +
             fmt17(r.reference_norm) + "," + r.status + "," + csv_text(r.note) + "\n";
    }
  }
  return out;
}

ScenarioResult run_scenario(const ExperimentConfig& config, int workers) {
  ScenarioResult result;
  const SpectralModel model = build_model(config.model);
  FamilySpec family = config.family;
  family.seed = config.seed;
  const Experiment exp(model, family, config.ladder.lambda0);
  const auto probes = standard_probes(exp.space(), config.seed, config.ladder.random_probes);
  const auto& ns = config.ladder.n_values;

  for (LadderKind kind : config.ladder.kinds) {
    LadderConfig lc;
    lc.kind = kind;
    lc.n_values = ns;
    lc.t_values = config.ladder.t_values;
    lc.lambda_values = config.ladder.lambda_values;
    lc.probes = probes;
    lc.workers = workers;
    result.reports.push_back(run_ladder(exp, lc));
  }
  if (wants(config.ladder, "signature")) result.reports.push_back(run_signature_audit(exp, ns));
  if (wants(config.ladder, "projection")) result.reports.push_back(run_projection_identity(exp, ns, probes));
  if (wants(config.ladder, "product")) result.reports.push_back(run_product_convergence(exp, ns, probes));
  if (wants(config.ladder, "intertwining")) {
    result.reports.push_back(run_intertwining(exp, ns, config.ladder.lambda_values, config.seed));
  }
  if (model.k == 1 || wants(config.ladder, "m0_reduction")) {
    if (model.k != 1) throw Error(ErrorKind::ConfigSemantic, "key 'ladder.checks' asks for m0_reduction with k != 1");
    result.reports.push_back(run_m0_reduction(exp, ns, config.ladder.t_values, config.seed));
  }

  result.csv = format_csv(result.reports, model.k);

  json summary;
  summary["model"] = {{"k", model.k}, {"m", model.m()}, {"N", model.dim()}, {"tail_moment", model.tail_moment},
                      {"seed", config.seed}};
  json verdicts = json::array();
  json constants = json::object();
  json aggregation = json::object();
  json notes = json::array();
  bool all_pass = true;
  for (const auto& rep : result.reports) {
    for (const auto& v : rep.verdicts) {
      verdicts.push_back({{"check", rep.check}, {"name", v.name}, {"pass", v.pass}, {"slope", number(v.slope)},
                          {"drop", number(v.drop)}, {"monotone", v.monotone}, {"detail", v.detail}});
      all_pass = all_pass && v.pass;
    }
    if (!rep.constants.empty()) {
      json c = json::object();
      for (const auto& [key, value] : rep.constants) c[key] = number(value);
      constants[rep.check] = c;
    }
    for (const auto& n : rep.notes) notes.push_back(rep.check + ": " + n);
    for (const auto& r : rep.rows) {
      json& slot = aggregation[r.check];
      if (slot.is_null()) slot = {{"rows", 0}, {"failed", 0}, {"skipped", 0}, {"max_error", 0.0}, {"max_error_by_n", json::object()}};
      slot["rows"] = slot["rows"].get<int>() + 1;
      if (r.status == "failed") {
        slot["failed"] = slot["failed"].get<int>() + 1;
        all_pass = false;
      }
      if (r.status == "skipped") slot["skipped"] = slot["skipped"].get<int>() + 1;
      if (r.status != "ok") continue;
      slot["max_error"] = std::max(slot["max_error"].get<double>(), r.error);
      json& by_n = slot["max_error_by_n"];
      const std::string key = std::to_string(r.n);
      by_n[key] = by_n.contains(key) ? std::max(by_n[key].get<double>(), r.error) : r.error;
    }
  }
  summary["verdicts"] = verdicts;
  summary["constants"] = constants;
  summary["aggregation"] = aggregation;
  summary["notes"] = notes;

  const PontryaginSpace& space = exp.space();
  json moments = json::array();
  for (int s = 1; s <= 2 * space.m() + 1; ++s) moments.push_back(space.g_reg(s));
  const CMatrix& basis = space.negative_basis();
  const double basis_defect =
      basis.cols() ? (basis.adjoint() * space.gram() * basis + CMatrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff()
                   : 0.0;
  const Inertia limit = inertia(space.gram());
  summary["gram_audit"] = {{"limit_negative", limit.negative}, {"limit_positive", limit.positive},
                           {"limit_zero", limit.zero}, {"negative_basis_defect", basis_defect},
                           {"regularized_moments", moments}};

  const Hamiltonian& h = exp.hamiltonian();
  const SpectralSummary spec = spectral_summary(h.matrix);
  json eig = json::array();
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i) eig.push_back({spec.eigenvalues(i).real(), spec.eigenvalues(i).imag()});
  summary["hamiltonian"] = {{"lambda0", h.lambda0},
                            {"resolvent_condition", h.resolvent_condition},
                            {"j_self_adjoint_defect", j_self_adjointness_defect(space.gram(), h.matrix)},
                            {"nonreal_eigenvalues", spec.nonreal},
                            {"max_abs_imag", spec.max_abs_imag},
                            {"eigenvalues", eig}};
  summary["passed"] = all_pass;
  result.exit_code = all_pass ? 0 : 1;
  result.json = summary.dump(2) + "\n";
  return result;
}

void write_artifacts(const ScenarioResult& result, const OutputSection& output) {
  auto write = [](const std::string& path, const std::string& text) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::ConfigSemantic, "cannot write '" + path + "'");
    out << text;
  };
  write(output.csv_path, result.csv);
  write(output.json_path, result.json);
}

const std::vector<CheckInfo>& acceptance_checks() {
  static const std::vector<CheckInfo> checks{
      {"signature", "Lemma 2.2 signature", "counterterm product has exactly m negative squares; eigen, elimination and pairing counts agree"},
      {"intertwining", "Lemma 3.7 intertwining", "Q_n (A_n + lambda)^-1 equals the closed-form resolvent after Q_n"},
      {"resolvent_identity", "Resolvent identity", "R(lambda) - R(mu) = (mu - lambda) R(lambda) R(mu); H independent of lambda0"},
      {"inverse_identification", "H^-1 identification", "R(0) reproduces the explicit inverse on the limit space; rank-one form for m = 0"},
      {"conservation", "Lemma 2.4 conservation", "Schrodinger groups preserve the indefinite products"},
      {"theorem1", "Theorem 1 ladder", "U_n(t) P_n -> P_n U(t) along the n ladder"},
      {"theorem2", "Theorem 2 ladder", "parabolic semigroups converge along the n ladder"},
      {"theorem3", "Theorem 3 ladder", "cosine and sine families V_n, W_n converge along the n ladder"},
      {"resolvent", "Lemma 3.15 resolvent ladder", "(A_n + lambda)^-1 P_n -> P_n (H + lambda)^-1"},
      {"m0_reduction", "m = 0 reduction", "k = 1 system equals the rank-one equation with coupling 1/z_0"},
      {"projection_identity", "Q_n P_n -> identity", "exact for odd k, decreasing for even k"},
      {"product_convergence", "Lemma 2.5 product convergence", "<P_n v, P_n v> -> <v, v>"},
      {"hyperbolic_residual", "Second-order residual", "finite-difference check of -u'' = A_n u; scalar cos/sin closed forms"},
      {"determinism", "Deterministic output", "same config and seed give byte-identical CSV"},
  };
  return checks;
}

std::string list_checks() {
  std::string out;
  for (const auto& c : acceptance_checks()) out += c.id + "\t" + c.anchor + "\t" + c.description + "\n";
  return out;
}

std::string dump_model(const ExperimentConfig& config) {
  const SpectralModel model = build_model(config.model);
  const PontryaginSpace space(model, config.family.g_targets);
  json out;
  out["k"] = model.k;
  out["m"] = model.m();
  out["N"] = model.dim();
  out["a_shift"] = model.a_shift;
  out["tail_moment"] = model.tail_moment;
  out["eigenvalues"] = std::vector<double>(model.eigenvalues.data(), model.eigenvalues.data() + model.dim());
  out["amplitudes"] = std::vector<double>(model.amplitudes.data(), model.amplitudes.data() + model.dim());
  out["g_targets"] = config.family.g_targets;
  json moments = json::array();
  for (int s = 1; s <= 2 * model.m() + 1; ++s) moments.push_back(space.g_reg(s));
  out["regularized_moments"] = moments;
  const SingularTrend trend = verify_singular_trend(model, doubling_truncations(model.dim()));
  out["singular_trend"] = {{"truncations", trend.truncations}, {"norms", trend.norms},
                           {"strongly_singular", trend.strongly_singular}, {"flag", trend.flag}};
  FamilySpec family = config.family;
  family.seed = config.seed;
  json ladder = json::array();
  for (int n : config.ladder.n_values) {
    const RegularizedFamily f = make_family(model, family, n);
    ladder.push_back({{"n", n},
                      {"z", std::vector<double>(f.z.data(), f.z.data() + f.z.size())},
                      {"g_n", std::vector<double>(f.g_n_moments.data(), f.g_n_moments.data() + f.g_n_moments.size())}});
  }
  out["ladder"] = ladder;
  return out.dump(2) + "\n";
}

int worker_count_from_env() {
  const char* v = std::getenv("SSLAB_WORKERS");
  if (!v) return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (end == v || *end != '\0' || n < 1) return 1;
  return static_cast<int>(std::min<long>(n, 256));
}

}  // namespace sslab
