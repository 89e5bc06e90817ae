#include "sslab/spectral_model.hpp"

#include <cmath>
#include <random>

#include "sslab/errors.hpp"

namespace sslab {

namespace {

int resolve_order(const ModelConfig& cfg) {
  if (cfg.d) {
    if (*cfg.d < 1) throw Error(ErrorKind::InvalidModel, "spatial dimension must be >= 1");
    const int from_d = *cfg.d / 2;
    if (cfg.k && *cfg.k != from_d) throw Error(ErrorKind::InvalidModel, "k disagrees with floor(d/2)");
    if (from_d < 1) throw Error(ErrorKind::InvalidModel, "floor(d/2) must be >= 1");
    return from_d;
  }
  if (!cfg.k) throw Error(ErrorKind::InvalidModel, "either k or d is required");
  if (*cfg.k < 1) throw Error(ErrorKind::InvalidModel, "k must be >= 1");
  return *cfg.k;
}

RVector law_eigenvalues(const ModelConfig& cfg, int k) {
  const int n = cfg.N;
  RVector ev(n);
  const auto& law = cfg.eigenvalue_law;
  if (law.kind == EigenvalueLaw::Kind::Power) {
    const double d = cfg.d ? *cfg.d : 2.0 * k + 1.0;
    const double p = law.exponent.value_or(2.0 / d);
    for (int j = 0; j < n; ++j) ev(j) = law.shift + law.scale * std::pow(j + 1.0, p);
  } else {
    if (!(law.lower > 0.0) || !(law.upper >= law.lower)) {
      throw Error(ErrorKind::InvalidModel, "log-spaced law needs 0 < lower <= upper");
    }
    const double span = std::log(law.upper / law.lower);
    for (int j = 0; j < n; ++j) ev(j) = n == 1 ? law.lower : law.lower * std::exp(span * j / (n - 1.0));
  }
  return ev;
}

RVector law_amplitudes(const ModelConfig& cfg, const RVector& ev, int k) {
  const Eigen::Index n = ev.size();
  RVector x(n);
  const auto& law = cfg.amplitude_law;
  switch (law.kind) {
    case AmplitudeLaw::Kind::Flat:
      x.setOnes();
      break;
    case AmplitudeLaw::Kind::Power:
      for (Eigen::Index j = 0; j < n; ++j) x(j) = std::pow(ev(j), law.exponent);
      break;
    case AmplitudeLaw::Kind::LogShell:
      for (Eigen::Index j = 0; j < n; ++j) {
        double width = 1.0;
        if (n > 1) {
          const Eigen::Index a = j + 1 < n ? j : j - 1;
          width = std::log(ev(a + 1) / ev(a));
        }
        x(j) = std::sqrt(width * std::pow(ev(j), k + law.excess));
      }
      break;
  }
  return x;
}

}  // namespace

void validate(const SpectralModel& model) {
  if (model.eigenvalues.size() == 0) throw Error(ErrorKind::InvalidModel, "N must be positive");
  if (model.amplitudes.size() != model.eigenvalues.size()) {
    throw Error(ErrorKind::InvalidModel, "eigenvalues and amplitudes differ in length");
  }
  if (model.k < 1) throw Error(ErrorKind::InvalidModel, "k must be >= 1");
  for (Eigen::Index j = 0; j < model.eigenvalues.size(); ++j) {
    const double l = model.eigenvalues(j);
    if (!std::isfinite(l) || l <= 0.0) throw Error(ErrorKind::InvalidModel, "eigenvalues must be finite and positive");
    if (j > 0 && l < model.eigenvalues(j - 1)) throw Error(ErrorKind::InvalidModel, "eigenvalues must be nondecreasing");
    if (!std::isfinite(model.amplitudes(j))) throw Error(ErrorKind::InvalidModel, "amplitudes must be finite");
  }
  if (!std::isfinite(model.tail_moment) || model.tail_moment < 0.0) {
    throw Error(ErrorKind::InvalidModel, "tail moment must be finite and nonnegative");
  }
}

SpectralModel build_model(const ModelConfig& cfg) {
  SpectralModel model;
  model.k = resolve_order(cfg);
  if (!cfg.eigenvalues.empty()) {
    model.eigenvalues = Eigen::Map<const RVector>(cfg.eigenvalues.data(), static_cast<Eigen::Index>(cfg.eigenvalues.size()));
  } else {
    if (cfg.N <= 0) throw Error(ErrorKind::InvalidModel, "N must be positive");
    model.eigenvalues = law_eigenvalues(cfg, model.k);
  }
  if (!cfg.amplitudes.empty()) {
    model.amplitudes = Eigen::Map<const RVector>(cfg.amplitudes.data(), static_cast<Eigen::Index>(cfg.amplitudes.size()));
  } else {
    model.amplitudes = law_amplitudes(cfg, model.eigenvalues, model.k);
  }
  model.a_shift = cfg.eigenvalue_law.kind == EigenvalueLaw::Kind::Power ? cfg.eigenvalue_law.shift : 0.0;
  model.tail_moment = cfg.tail_moment.value_or(model.k % 2 == 0 ? 0.01 : 0.0);
  validate(model);
  return model;
}

double moment(const SpectralModel& model, const RVector& chi, int s) {
  if (chi.size() != model.eigenvalues.size()) throw Error(ErrorKind::DimensionMismatch, "amplitude vector length");
  double sum = 0.0;
  for (Eigen::Index j = 0; j < chi.size(); ++j) sum += chi(j) * chi(j) / std::pow(model.eigenvalues(j), s);
  return sum;
}

RVector regularize(const SpectralModel& model, const RVector& chi, int n) {
  if (n < 1) throw Error(ErrorKind::InvalidModel, "regularization index must be >= 1");
  if (chi.size() != model.eigenvalues.size()) throw Error(ErrorKind::DimensionMismatch, "amplitude vector length");
  return (chi.array() * (-model.eigenvalues.array() / static_cast<double>(n)).exp()).matrix();
}

RVector regularize(const SpectralModel& model, int n) { return regularize(model, model.amplitudes, n); }

RVector counterterms(const SpectralModel& model, const RVector& chi_n, const std::vector<double>& g_targets) {
  if (static_cast<int>(g_targets.size()) != model.k) {
    throw Error(ErrorKind::InvalidModel, "need exactly k renormalized targets");
  }
  RVector z(model.k);
  for (int l = 1; l <= model.k; ++l) z(l - 1) = g_targets[l - 1] - moment(model, chi_n, l);
  return z;
}

std::vector<double> regularized_moments(const SpectralModel& model, const std::vector<double>& g_targets, int s_max) {
  if (static_cast<int>(g_targets.size()) != model.k) {
    throw Error(ErrorKind::InvalidModel, "need exactly k renormalized targets");
  }
  std::vector<double> g(static_cast<size_t>(s_max) + 1, 0.0);
  for (int s = 0; s <= s_max; ++s) {
    if (s >= 1 && s <= model.k) {
      g[s] = g_targets[s - 1];
    } else {
      g[s] = moment(model, model.amplitudes, s);
      if (s == model.k + 1) g[s] += model.tail_moment;
    }
  }
  return g;
}

FamilySpec FamilySpec::from_alpha(double alpha, const std::vector<double>& higher) {
  if (alpha == 0.0 || !std::isfinite(alpha)) throw Error(ErrorKind::InvalidModel, "alpha must be finite and nonzero");
  FamilySpec spec;
  spec.g_targets.push_back(-1.0 / alpha);
  spec.g_targets.insert(spec.g_targets.end(), higher.begin(), higher.end());
  return spec;
}

RegularizedFamily make_family(const SpectralModel& model, const FamilySpec& spec, int n) {
  if (spec.g_targets.empty() || spec.g_targets[0] == 0.0) {
    throw Error(ErrorKind::InvalidModel, "g_1 must be nonzero");
  }
  RegularizedFamily fam;
  fam.n = n;
  fam.k = model.k;
  fam.chi_n = regularize(model, n);
  fam.z = counterterms(model, fam.chi_n, spec.g_targets);
  if (spec.scheme == FamilySpec::Scheme::Noisy && spec.noise != 0.0) {
    // The draw depends on the seed and slot only, so the defect is exactly O(1/n).
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int l = 0; l < model.k; ++l) fam.z(l) += spec.noise * normal(rng) / n;
  }
  fam.g_targets = spec.g_targets;
  fam.alpha = spec.alpha();
  const int top = 2 * model.m() + 1;
  fam.g_n_moments.resize(top);
  for (int l = 1; l <= top; ++l) fam.g_n_moments(l - 1) = moment(model, fam.chi_n, l) + fam.z_at(l - 1);
  return fam;
}

std::vector<int> doubling_truncations(int N) {
  std::vector<int> out;
  for (int t = 1; t < N; t *= 2) out.push_back(t);
  out.push_back(N);
  return out;
}

SingularTrend verify_singular_trend(const SpectralModel& model, const std::vector<int>& truncations,
                                    double min_tail_share) {
  SingularTrend out;
  out.truncations = truncations;
  std::vector<double> squares;
  for (int t : truncations) {
    if (t < 1 || t > model.dim()) throw Error(ErrorKind::InvalidModel, "truncation outside the box");
    double s = 0.0;
    for (int j = 0; j < t; ++j) {
      const double x = model.amplitudes(j);
      s += x * x / std::pow(model.eigenvalues(j), model.k);
    }
    squares.push_back(s);
    out.norms.push_back(std::sqrt(s));
  }
  out.strictly_increasing = out.norms.size() >= 2;
  for (size_t i = 1; i < out.norms.size(); ++i) {
    if (!(out.norms[i] > out.norms[i - 1])) out.strictly_increasing = false;
  }
  if (!truncations.empty()) {
    const int last = truncations.back();
    long mid = -1;
    for (size_t i = 0; i < truncations.size(); ++i)
      if (2 * truncations[i] <= last) mid = static_cast<long>(i);
    if (mid >= 0 && squares.back() > 0.0) out.tail_share = (squares.back() - squares[mid]) / squares.back();
  }
  if (!out.strictly_increasing) {
    out.flag = "not strongly singular: partial norms do not grow";
  } else if (out.tail_share < min_tail_share) {
    out.flag = "not strongly singular: partial norms level off";
  }
  out.strongly_singular = out.flag.empty();
  return out;
}

}  // namespace sslab
