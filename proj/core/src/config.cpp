#include "sslab/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sslab/errors.hpp"

namespace sslab {

using nlohmann::json;

namespace {

[[noreturn]] void semantic(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::ConfigSemantic, "key '" + key + "' " + what);
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  if (!obj.is_object()) semantic(path, "must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) semantic(join(path, it.key()), "is not recognized");
}

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) semantic(key, "must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) semantic(key, "must be finite");
  return d;
}

long long as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) semantic(key, "must be an integer");
  return v.get<long long>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) semantic(key, "must be a string");
  return v.get<std::string>();
}

std::vector<double> as_doubles(const json& v, const std::string& key) {
  if (!v.is_array()) semantic(key, "must be an array of numbers");
  std::vector<double> out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(as_double(v[i], key + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> as_ints(const json& v, const std::string& key) {
  if (!v.is_array()) semantic(key, "must be an array of integers");
  std::vector<int> out;
  for (size_t i = 0; i < v.size(); ++i) out.push_back(static_cast<int>(as_int(v[i], key + "[" + std::to_string(i) + "]")));
  return out;
}

void parse_model(const json& j, ModelConfig& cfg) {
  const std::string p = "model";
  check_keys(j, p, {"k", "d", "N", "eigenvalue_law", "amplitude_law", "eigenvalues", "amplitudes", "tail_moment"});
  if (j.contains("k")) {
    const long long k = as_int(j["k"], "model.k");
    if (k < 1) semantic("model.k", "must be >= 1");
    cfg.k = static_cast<int>(k);
  }
  if (j.contains("d")) {
    const long long d = as_int(j["d"], "model.d");
    if (d < 2) semantic("model.d", "must be >= 2 so that floor(d/2) >= 1");
    cfg.d = static_cast<int>(d);
  }
  if (!cfg.k && !cfg.d) semantic("model.k", "or 'model.d' is required");
  if (cfg.k && cfg.d && *cfg.k != *cfg.d / 2) semantic("model.k", "disagrees with floor(model.d / 2)");
  if (j.contains("N")) {
    const long long n = as_int(j["N"], "model.N");
    if (n < 1) semantic("model.N", "must be >= 1");
    cfg.N = static_cast<int>(n);
  }
  if (j.contains("eigenvalue_law")) {
    const json& law = j["eigenvalue_law"];
    const std::string lp = "model.eigenvalue_law";
    check_keys(law, lp, {"kind", "shift", "scale", "exponent", "lower", "upper"});
    if (law.contains("kind")) {
      const std::string kind = as_string(law["kind"], lp + ".kind");
      if (kind == "power") cfg.eigenvalue_law.kind = EigenvalueLaw::Kind::Power;
      else if (kind == "log") cfg.eigenvalue_law.kind = EigenvalueLaw::Kind::LogSpaced;
      else semantic(lp + ".kind", "must be 'power' or 'log'");
    }
    if (law.contains("shift")) cfg.eigenvalue_law.shift = as_double(law["shift"], lp + ".shift");
    if (law.contains("scale")) cfg.eigenvalue_law.scale = as_double(law["scale"], lp + ".scale");
    if (law.contains("exponent")) cfg.eigenvalue_law.exponent = as_double(law["exponent"], lp + ".exponent");
    if (law.contains("lower")) cfg.eigenvalue_law.lower = as_double(law["lower"], lp + ".lower");
    if (law.contains("upper")) cfg.eigenvalue_law.upper = as_double(law["upper"], lp + ".upper");
  }
  if (j.contains("amplitude_law")) {
    const json& law = j["amplitude_law"];
    const std::string lp = "model.amplitude_law";
    check_keys(law, lp, {"kind", "exponent", "excess"});
    if (law.contains("kind")) {
      const std::string kind = as_string(law["kind"], lp + ".kind");
      if (kind == "flat") cfg.amplitude_law.kind = AmplitudeLaw::Kind::Flat;
      else if (kind == "power") cfg.amplitude_law.kind = AmplitudeLaw::Kind::Power;
      else if (kind == "log_shell") cfg.amplitude_law.kind = AmplitudeLaw::Kind::LogShell;
      else semantic(lp + ".kind", "must be 'flat', 'power' or 'log_shell'");
    }
    if (law.contains("exponent")) cfg.amplitude_law.exponent = as_double(law["exponent"], lp + ".exponent");
    if (law.contains("excess")) cfg.amplitude_law.excess = as_double(law["excess"], lp + ".excess");
  }
  if (j.contains("eigenvalues")) cfg.eigenvalues = as_doubles(j["eigenvalues"], "model.eigenvalues");
  if (j.contains("amplitudes")) cfg.amplitudes = as_doubles(j["amplitudes"], "model.amplitudes");
  if (!cfg.eigenvalues.empty() && !j.contains("N")) cfg.N = static_cast<int>(cfg.eigenvalues.size());
  if (!cfg.eigenvalues.empty() && cfg.N != static_cast<int>(cfg.eigenvalues.size())) {
    semantic("model.N", "disagrees with the length of model.eigenvalues");
  }
  const size_t expected = cfg.eigenvalues.empty() ? static_cast<size_t>(cfg.N) : cfg.eigenvalues.size();
  if (!cfg.amplitudes.empty() && cfg.amplitudes.size() != expected) {
    semantic("model.amplitudes", "must have N entries");
  }
  for (double l : cfg.eigenvalues)
    if (!(l > 0.0)) semantic("model.eigenvalues", "must be positive");
  if (j.contains("tail_moment")) {
    const double t = as_double(j["tail_moment"], "model.tail_moment");
    if (t < 0.0) semantic("model.tail_moment", "must be >= 0");
    cfg.tail_moment = t;
  }
}

void parse_family(const json& j, int k, FamilySpec& spec) {
  const std::string p = "family";
  check_keys(j, p, {"scheme", "alpha", "g_targets", "g_higher", "noise"});
  if (j.contains("g_targets") && (j.contains("alpha") || j.contains("g_higher"))) {
    semantic("family.g_targets", "cannot be combined with 'alpha' or 'g_higher'");
  }
  if (j.contains("g_targets")) {
    spec.g_targets = as_doubles(j["g_targets"], "family.g_targets");
    if (static_cast<int>(spec.g_targets.size()) != k) semantic("family.g_targets", "must have k entries");
    if (spec.g_targets[0] == 0.0) semantic("family.g_targets", "must have g_1 != 0 (alpha = 0 is excluded)");
  } else {
    double alpha = 1.0;
    if (j.contains("alpha")) alpha = as_double(j["alpha"], "family.alpha");
    if (alpha == 0.0) semantic("family.alpha", "must be nonzero");
    std::vector<double> higher(static_cast<size_t>(k - 1), 0.0);
    if (j.contains("g_higher")) {
      higher = as_doubles(j["g_higher"], "family.g_higher");
      if (static_cast<int>(higher.size()) != k - 1) semantic("family.g_higher", "must have k-1 entries");
    }
    spec.g_targets = FamilySpec::from_alpha(alpha, higher).g_targets;
  }
  if (j.contains("scheme")) {
    const std::string s = as_string(j["scheme"], "family.scheme");
    if (s == "exact") spec.scheme = FamilySpec::Scheme::Exact;
    else if (s == "noisy") spec.scheme = FamilySpec::Scheme::Noisy;
    else semantic("family.scheme", "must be 'exact' or 'noisy'");
  }
  if (j.contains("noise")) spec.noise = as_double(j["noise"], "family.noise");
}

void parse_ladder(const json& j, LadderSection& ladder) {
  const std::string p = "ladder";
  check_keys(j, p, {"n", "t", "lambda", "kinds", "random_probes", "lambda0", "checks"});
  if (j.contains("n")) ladder.n_values = as_ints(j["n"], "ladder.n");
  if (ladder.n_values.empty()) semantic("ladder.n", "must be nonempty");
  for (size_t i = 0; i < ladder.n_values.size(); ++i) {
    if (ladder.n_values[i] < 1) semantic("ladder.n", "entries must be >= 1");
    if (i > 0 && ladder.n_values[i] <= ladder.n_values[i - 1]) semantic("ladder.n", "must be strictly ascending");
  }
  if (j.contains("t")) ladder.t_values = as_doubles(j["t"], "ladder.t");
  for (double t : ladder.t_values)
    if (t < 0.0) semantic("ladder.t", "entries must be >= 0");
  if (j.contains("lambda")) ladder.lambda_values = as_doubles(j["lambda"], "ladder.lambda");
  if (j.contains("kinds")) {
    if (!j["kinds"].is_array()) semantic("ladder.kinds", "must be an array of strings");
    ladder.kinds.clear();
    for (const auto& v : j["kinds"]) {
      const std::string s = as_string(v, "ladder.kinds");
      if (s == "schrodinger") ladder.kinds.push_back(LadderKind::Schrodinger);
      else if (s == "parabolic") ladder.kinds.push_back(LadderKind::Parabolic);
      else if (s == "hyperbolic") ladder.kinds.push_back(LadderKind::Hyperbolic);
      else if (s == "resolvent") ladder.kinds.push_back(LadderKind::Resolvent);
      else semantic("ladder.kinds", "has unknown kind '" + s + "'");
    }
  }
  if (j.contains("random_probes")) {
    const long long r = as_int(j["random_probes"], "ladder.random_probes");
    if (r < 0) semantic("ladder.random_probes", "must be >= 0");
    ladder.random_probes = static_cast<int>(r);
  }
  if (j.contains("lambda0")) ladder.lambda0 = as_double(j["lambda0"], "ladder.lambda0");
  if (j.contains("checks")) {
    if (!j["checks"].is_array()) semantic("ladder.checks", "must be an array of strings");
    static const std::set<std::string> known{"signature", "projection", "product", "intertwining", "m0_reduction"};
    ladder.checks.clear();
    for (const auto& v : j["checks"]) {
      const std::string s = as_string(v, "ladder.checks");
      if (!known.count(s)) semantic("ladder.checks", "has unknown check '" + s + "'");
      ladder.checks.push_back(s);
    }
  }
}

struct DuplicateKey {
  std::string path;
};

}  // namespace

int ExperimentConfig::k() const { return model.d ? *model.d / 2 : model.k.value_or(0); }

ExperimentConfig parse_config(std::string_view text) {
  std::vector<std::set<std::string>> seen;
  std::vector<std::string> path;
  std::string last_key;
  json::parser_callback_t callback = [&](int, json::parse_event_t event, json& parsed) {
    switch (event) {
      case json::parse_event_t::object_start:
        seen.emplace_back();
        path.push_back(last_key);
        break;
      case json::parse_event_t::object_end:
        seen.pop_back();
        path.pop_back();
        break;
      case json::parse_event_t::key: {
        last_key = parsed.get<std::string>();
        if (!seen.back().insert(last_key).second) {
          std::string full;
          for (size_t i = 1; i < path.size(); ++i) full = join(full, path[i]);
          throw DuplicateKey{join(full, last_key)};
        }
        break;
      }
      default:
        break;
    }
    return true;
  };

  json doc;
  try {
    doc = json::parse(text.begin(), text.end(), callback);
  } catch (const DuplicateKey& dup) {
    throw Error(ErrorKind::ConfigParse, "duplicate key '" + dup.path + "'");
  } catch (const json::parse_error& err) {
    size_t line = 1, col = 1;
    const size_t stop = std::min<size_t>(err.byte > 0 ? err.byte - 1 : 0, text.size());
    for (size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
    throw Error(ErrorKind::ConfigParse, "line " + std::to_string(line) + ", column " + std::to_string(col) + ": " + err.what());
  }

  ExperimentConfig cfg;
  check_keys(doc, "", {"seed", "model", "family", "ladder", "output"});
  if (!doc.contains("model")) semantic("model", "is required");
  parse_model(doc["model"], cfg.model);
  const int k = cfg.k();
  if (doc.contains("family")) {
    parse_family(doc["family"], k, cfg.family);
  } else {
    cfg.family.g_targets = FamilySpec::from_alpha(1.0, std::vector<double>(static_cast<size_t>(k - 1), 0.0)).g_targets;
  }
  if (doc.contains("ladder")) parse_ladder(doc["ladder"], cfg.ladder);
  if (doc.contains("output")) {
    const json& out = doc["output"];
    check_keys(out, "output", {"csv", "json"});
    if (out.contains("csv")) cfg.output.csv_path = as_string(out["csv"], "output.csv");
    if (out.contains("json")) cfg.output.json_path = as_string(out["json"], "output.json");
  }
  if (doc.contains("seed")) {
    const long long s = as_int(doc["seed"], "seed");
    if (s < 0) semantic("seed", "must be >= 0");
    cfg.seed = static_cast<std::uint64_t>(s);
  }
  cfg.family.seed = cfg.seed;
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigParse, "cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace sslab
