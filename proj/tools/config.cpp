#include "config.hpp"

#include "rotobs/rng.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace rotobs::app {

namespace {

std::string where(const YAML::Node& n, const std::string& origin) {
  const YAML::Mark m = n.Mark();
  if (m.line < 0) return origin;
  return origin + ":" + std::to_string(m.line + 1);
}

/// A mapping whose keys must all be consumed; anything left over is an
/// unknown key.
class Section {
 public:
  Section(const YAML::Node& node, std::string path, const std::string& origin)
      : node_(node), path_(std::move(path)), origin_(origin) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      throw ConfigError(where(node_, origin_) + ": '" + path_ + "' must be a mapping");
    }
  }

  YAML::Node get(const std::string& key) {
    seen_.insert(key);
    if (!node_ || node_.IsNull()) return YAML::Node(YAML::NodeType::Undefined);
    // Const lookup: a non-const operator[] would insert the key.
    const YAML::Node& map = node_;
    return map[key];
  }

  std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const std::string& origin() const { return origin_; }

  void finish() const {
    if (!node_ || node_.IsNull()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) {
        throw ConfigError(where(kv.first, origin_) + ": unknown key '" + key_path(key) + "'");
      }
    }
  }

  template <class T>
  void read(const std::string& key, T& out) {
    const YAML::Node n = get(key);
    if (!n) return;
    try {
      out = n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where(n, origin_) + ": invalid value for '" + key_path(key) + "'");
    }
  }

  void read_double(const std::string& key, double& out) {
    read(key, out);
    if (get(key) && !std::isfinite(out)) {
      throw ConfigError(where(get(key), origin_) + ": '" + key_path(key) + "' must be finite");
    }
  }

  void read_vec3(const std::string& key, Vec3& out) {
    const YAML::Node n = get(key);
    if (!n) return;
    out = parse_vec3(n, key_path(key));
  }

  void read_mat3(const std::string& key, Mat3& out) {
    const YAML::Node n = get(key);
    if (!n) return;
    if (!n.IsSequence() || n.size() != 3) {
      throw ConfigError(where(n, origin_) + ": '" + key_path(key) + "' must be a 3x3 list of rows");
    }
    for (int r = 0; r < 3; ++r) out.row(r) = parse_vec3(n[r], key_path(key)).transpose();
  }

  std::vector<double> read_list(const std::string& key) {
    const YAML::Node n = get(key);
    if (!n) return {};
    if (!n.IsSequence() || n.size() == 0) {
      throw ConfigError(where(n, origin_) + ": '" + key_path(key) + "' must be a non-empty list");
    }
    std::vector<double> out;
    for (const auto& e : n) out.push_back(scalar<double>(e, key_path(key)));
    return out;
  }

  template <class T>
  T scalar(const YAML::Node& n, const std::string& name) const {
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError(where(n, origin_) + ": invalid value for '" + name + "'");
    }
  }

 private:
  Vec3 parse_vec3(const YAML::Node& n, const std::string& name) const {
    if (!n.IsSequence() || n.size() != 3) {
      throw ConfigError(where(n, origin_) + ": '" + name + "' must be a list of 3 numbers");
    }
    Vec3 v;
    for (int i = 0; i < 3; ++i) v(i) = scalar<double>(n[i], name);
    if (!v.allFinite()) throw ConfigError(where(n, origin_) + ": '" + name + "' must be finite");
    return v;
  }

  YAML::Node node_;
  std::string path_;
  std::string origin_;
  std::set<std::string> seen_;
};

template <class Enum>
Enum parse_enum(Section& s, const std::string& key, Enum fallback,
                const std::vector<std::pair<std::string, Enum>>& names) {
  const YAML::Node n = s.get(key);
  if (!n) return fallback;
  const std::string v = s.scalar<std::string>(n, s.key_path(key));
  for (const auto& [name, value] : names) {
    if (v == name) return value;
  }
  std::string allowed;
  for (const auto& [name, value] : names) allowed += (allowed.empty() ? "" : ", ") + name;
  throw ConfigError(where(n, s.origin()) + ": '" + s.key_path(key) + "' must be one of " +
                    allowed + " (got '" + v + "')");
}

void parse_scenario(Section& top, RunConfig& cfg) {
  Section s(top.get("scenario"), "scenario", top.origin());
  cfg.source = parse_enum(s, "source", cfg.source,
                          {{"paper", ScenarioSource::Paper},
                           {"sampled", ScenarioSource::Sampled},
                           {"explicit", ScenarioSource::Explicit}});
  if (const auto w = s.read_list("weights"); !w.empty()) cfg.weights = w;
  s.read("run", cfg.run);

  Section e(s.get("explicit"), "scenario.explicit", top.origin());
  ExplicitScenario& x = cfg.explicit_values;
  e.read_mat3("R0", x.r0);
  e.read_vec3("omega0", x.omega0);
  e.read_vec3("bias", x.bias);
  e.read_mat3("R_hat0", x.r_hat0);
  e.read_vec3("b_hat0", x.b_hat0);
  e.read_vec3("l_hat0", x.l_hat0);
  e.read_mat3("inertia", x.inertia);
  e.read_vec3("v1", x.v1);
  e.read_vec3("v2", x.v2);
  e.finish();
  s.finish();
}

void parse_observers(Section& top, RunConfig& cfg) {
  const YAML::Node n = top.get("observers");
  if (!n) return;
  try {
    if (n.IsScalar()) {
      cfg.observers = parse_observer_list(n.as<std::string>());
    } else if (n.IsSequence()) {
      cfg.observers.clear();
      for (const auto& e : n) {
        cfg.observers.push_back(variant_from_number(top.scalar<int>(e, "observers")));
      }
    } else {
      throw ConfigError("observers must be a number, a list or 'all'");
    }
  } catch (const InvalidConfig& ex) {
    throw ConfigError(where(n, top.origin()) + ": " + ex.what());
  } catch (const ConfigError& ex) {
    throw ConfigError(where(n, top.origin()) + ": " + ex.what());
  }
}

void parse_simulation(Section& top, RunConfig& cfg) {
  SimulationConfig& sim = cfg.sim;
  {
    Section g(top.get("gains"), "gains", top.origin());
    g.read_double("k_R", sim.gains.k_R);
    g.read_double("k_l", sim.gains.k_l);
    g.read_double("k_a", sim.gains.k_a);
    g.read_double("k_b", sim.gains.k_b);
    g.read_double("alpha", sim.gains.alpha);
    g.finish();
  }
  {
    Section n(top.get("noise"), "noise", top.origin());
    if (n.get("enabled")) {
      bool enabled = false;
      n.read("enabled", enabled);
      cfg.noise_enabled = enabled;
    }
    n.read_double("sigma", sim.noise.sigma);
    n.read_double("h_meas", sim.noise.h_meas);
    n.finish();
  }
  {
    Section i(top.get("integrator"), "integrator", top.origin());
    i.read_double("h_truth", sim.integrator.h_truth);
    i.read_double("h_obs", sim.integrator.h_obs);
    i.read_double("duration", sim.integrator.duration);
    i.finish();
  }
  sim.sampling = parse_enum(top, "sampling", sim.sampling,
                            {{"auto", SamplingMode::Auto},
                             {"continuous", SamplingMode::Continuous},
                             {"zoh", SamplingMode::ZeroOrderHold}});
  sim.attitude_reference =
      parse_enum(top, "attitude_reference", sim.attitude_reference,
                 {{"reconstructed", AttitudeReference::Reconstructed},
                  {"true", AttitudeReference::True}});
  if (const YAML::Node t = top.get("torque")) {
    if (t.IsSequence()) {
      Vec3 tau;
      top.read_vec3("torque", tau);
      sim.torque = TorqueProfile::constant(tau);
    } else {
      const std::string name = top.scalar<std::string>(t, "torque");
      if (name == "sinusoid") {
        sim.torque = TorqueProfile::sinusoid();
      } else if (name == "zero") {
        sim.torque = TorqueProfile::zero();
      } else {
        throw ConfigError(where(t, top.origin()) +
                          ": 'torque' must be sinusoid, zero or a list of 3 numbers");
      }
    }
  }
}

void parse_montecarlo(Section& top, RunConfig& cfg) {
  Section m(top.get("montecarlo"), "montecarlo", top.origin());
  m.read("runs", cfg.runs);
  m.read("threads", cfg.threads);
  m.finish();
}

void parse_linearize(Section& top, RunConfig& cfg) {
  Section l(top.get("linearize"), "linearize", top.origin());
  LinearizeSettings& s = cfg.linearize;
  if (auto a = l.read_list("alphas"); !a.empty()) s.alpha_grid = a;
  if (auto w = l.read_list("omegas"); !w.empty()) s.omega_grid = w;
  {
    Section g(l.get("omega_log"), "linearize.omega_log", top.origin());
    double lo = 1e-2;
    double hi = 1e3;
    int n = 200;
    const bool present = static_cast<bool>(l.get("omega_log"));
    g.read_double("min", lo);
    g.read_double("max", hi);
    g.read("n", n);
    g.finish();
    if (present) {
      if (!s.omega_grid.empty()) {
        throw ConfigError(where(l.get("omega_log"), top.origin()) +
                          ": give either linearize.omegas or linearize.omega_log, not both");
      }
      if (!(lo > 0.0 && hi > lo && n >= 2)) {
        throw ConfigError(where(l.get("omega_log"), top.origin()) +
                          ": linearize.omega_log needs 0 < min < max and n >= 2");
      }
      s.omega_grid = log_grid(lo, hi, n);
    }
  }
  l.read("channel", s.channel);
  if (s.channel < 0 || s.channel > 3) {
    throw ConfigError(where(l.get("channel"), top.origin()) +
                      ": linearize.channel must be 0 (gyro) or 1..3 (directions)");
  }
  if (const YAML::Node o = l.get("observer")) {
    const int v = l.scalar<int>(o, "linearize.observer");
    if (v != 3 && v != 4) {
      throw ConfigError(where(o, top.origin()) + ": linearize.observer must be 3 or 4");
    }
    s.variant = variant_from_number(v);
  }
  s.identity_attitude = parse_enum(l, "attitude", false, {{"initial", false}, {"identity", true}});
  l.finish();
  for (const double a : s.alpha_grid) {
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("linearize.alphas must lie in [0, 1]");
  }
  for (const double w : s.omega_grid) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ConfigError("linearize.omegas must be finite and non-negative");
    }
  }
}

void parse_verify(Section& top, RunConfig& cfg) {
  Section v(top.get("verify"), "verify", top.origin());
  VerifySettings& s = cfg.verify;
  if (v.get("c1")) {
    double c = 0.0;
    v.read_double("c1", c);
    s.c1 = c;
  }
  if (v.get("c2")) {
    double c = 0.0;
    v.read_double("c2", c);
    s.c2 = c;
  }
  v.read_double("eps_fraction", s.eps_fraction);
  v.read("gamma_samples", s.gamma_samples);
  v.read("ules_samples", s.ules_samples);
  v.read("eps1_samples", s.eps1_samples);
  v.read_double("eps_bar", s.eps_bar);
  v.finish();
  if ((s.c1 && !(*s.c1 > 0.0)) || (s.c2 && !(*s.c2 > 0.0))) {
    throw ConfigError("verify.c1 and verify.c2 must be positive");
  }
  if (!(s.eps_fraction > 0.0 && s.eps_fraction < 1.0)) {
    throw ConfigError("verify.eps_fraction must lie in (0, 1)");
  }
  if (!(s.eps_bar > 0.0)) throw ConfigError("verify.eps_bar must be positive");
}

}  // namespace

std::vector<ObserverVariant> parse_observer_list(const std::string& text) {
  if (text == "all") {
    return {ObserverVariant::AngularMomentum, ObserverVariant::Complementary,
            ObserverVariant::FusedTrueAttitude, ObserverVariant::Fused};
  }
  if (text.size() == 1 && text[0] >= '1' && text[0] <= '4') {
    return {variant_from_number(text[0] - '0')};
  }
  throw ConfigError("observer must be 1, 2, 3, 4 or all (got '" + text + "')");
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(origin + ":" + std::to_string(e.mark.line + 1) + ": " + e.msg);
  }
  RunConfig cfg;
  cfg.linearize.alpha_grid.clear();
  for (int k = 1; k <= 19; ++k) cfg.linearize.alpha_grid.push_back(0.05 * k);
  cfg.linearize.omega_grid = log_grid(1e-2, 1e3, 200);

  Section top(root, "", origin);
  parse_scenario(top, cfg);
  parse_observers(top, cfg);
  parse_simulation(top, cfg);
  top.read("seed", cfg.seed);
  parse_montecarlo(top, cfg);
  parse_linearize(top, cfg);
  parse_verify(top, cfg);
  {
    Section o(top.get("output"), "output", origin);
    o.read("dir", cfg.out_dir);
    o.finish();
  }
  top.finish();

  try {
    cfg.sim.noise.enabled = cfg.noise_enabled.value_or(false);
    cfg.sim.validate();
    for (const double w : cfg.weights) {
      if (!(w > 0.0)) throw InvalidConfig("scenario.weights must be positive");
    }
    if (cfg.weights.size() != 3) throw InvalidConfig("scenario.weights needs three entries");
  } catch (const InvalidConfig& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open configuration file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

Rng run_stream(const RunConfig& cfg) { return make_stream(cfg.seed, cfg.run); }

Scenario build_scenario(const RunConfig& cfg, Rng& rng) {
  try {
    switch (cfg.source) {
      case ScenarioSource::Paper:
        return paper_scenario(cfg.weights);
      case ScenarioSource::Sampled:
        return sample_scenario(rng, cfg.weights);
      case ScenarioSource::Explicit: {
        const ExplicitScenario& x = cfg.explicit_values;
        return Scenario{
            .truth0 = {rot_to_quat(RotationMatrix::nearest(x.r0)), x.omega0},
            .bias = x.bias,
            .q_hat0 = rot_to_quat(RotationMatrix::nearest(x.r_hat0)),
            .b_hat0 = x.b_hat0,
            .l_hat0 = x.l_hat0,
            .inertia = InertiaMatrix(x.inertia),
            .dirs = make_direction_set(x.v1, x.v2, cfg.weights),
        };
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
  throw ConfigError("scenario: unknown source");
}

}  // namespace rotobs::app
