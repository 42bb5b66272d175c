#include "aero/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "aero/errors.hpp"
#include "aero/io/format.hpp"
#include "aero/lqi.hpp"
#include "aero/model.hpp"
#include "aero/ppo/checkpoint.hpp"
#include "aero/ppo/policy_controller.hpp"

namespace aero {
namespace {

using nlohmann::json;

// Reads members of one JSON object and rejects anything left unread.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + "must be an object");
  }
  ~Section() noexcept(false) {
    if (std::uncaught_exceptions() > 0) return;
    for (const auto& [key, _] : j_.items())
      if (!seen_.count(key)) throw ConfigError("unknown config key '" + where() + key + "'");
  }

  template <typename T>
  void get(const char* key, T& out) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError("config key '" + where() + key + "': " + e.what());
    }
  }

  void get_deg(const char* key, double& rad) {
    double deg = rad_to_deg(rad);
    get(key, deg);
    rad = deg_to_rad(deg);
  }

  const json* sub(const char* key) {
    seen_.insert(key);
    return j_.contains(key) ? &j_.at(key) : nullptr;
  }
  std::string child(const char* key) const { return where() + key; }

 private:
  std::string where() const { return path_.empty() ? "" : path_ + "."; }
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_plant(const json& j, PlantConfig& p) {
  Section s(j, "plant");
  s.get("c_theta", p.params.c_theta);
  s.get("c_omega", p.params.c_omega);
  s.get("c_u", p.params.c_u);
  s.get("u_limit", p.params.u_limit);
  s.get_deg("theta_limit_deg", p.params.theta_limit);
  s.get("imbalance", p.params.imbalance);
  s.get_deg("safety_band_deg", p.params.safety_band);
  s.get("safety_voltage", p.params.safety_voltage);
  s.get("safety_enabled", p.safety_enabled);
  s.get("dt", p.dt);
  s.get_deg("noise_std_deg", p.noise_std);
  s.get("quantize", p.sensor.enabled);
  s.get_deg("quantization_deg", p.sensor.quantization_step);
}

void read_lqi(const json& j, LqiSettings& l) {
  Section s(j, "lqi");
  s.get("q", l.q);
  s.get("r", l.r);
  s.get("period", l.period);
  s.get("filter_tau", l.filter_tau);
}

void read_mpc(const json& j, mpc::MpcConfig& m) {
  Section s(j, "mpc");
  s.get("horizon", m.horizon);
  s.get("ts", m.ts);
  std::array<double, 2> q{m.q(0, 0), m.q(1, 1)};
  s.get("q", q);
  m.q = num::Matrix::diagonal({q[0], q[1]});
  s.get("r", m.r);
  s.get("u_limit", m.u_limit);
  s.get("observer_poles", m.observer_poles);
  s.get("qp_tol", m.qp_tol);
  s.get("qp_max_iter", m.qp_max_iter);
}

void read_ppo(const json& j, RunConfig& c) {
  Section s(j, "ppo");
  auto& p = c.ppo;
  s.get("gamma", p.gamma);
  s.get("gae_lambda", p.gae_lambda);
  s.get("clip_range", p.clip_range);
  s.get("learning_rate", p.learning_rate);
  s.get("n_steps", p.n_steps);
  s.get("batch_size", p.batch_size);
  s.get("n_epochs", p.n_epochs);
  s.get("vf_coef", p.vf_coef);
  s.get("ent_coef", p.ent_coef);
  s.get("max_grad_norm", p.max_grad_norm);
  s.get("adam_eps", p.adam_eps);
  s.get("log_std_init", p.log_std_init);
  s.get("total_steps", p.total_steps);
  s.get("eval_interval", p.eval_interval);
  std::string backend = p.backend == kernels::Backend::parallel ? "parallel" : "serial";
  s.get("backend", backend);
  if (backend == "serial") p.backend = kernels::Backend::serial;
  else if (backend == "parallel") p.backend = kernels::Backend::parallel;
  else throw ConfigError("ppo.backend must be 'serial' or 'parallel'");
  s.get("control_period", c.ppo_control_period);
  s.get("episode_steps", c.ppo_episode_steps);
  s.get("randomize_targets", c.ppo_randomize_targets);
  s.get("checkpoint", c.checkpoint);
}

void read_sysid(const json& j, RunConfig& c) {
  Section s(j, "sysid");
  s.get("amplitudes", c.sequence.amplitudes);
  s.get("segment_duration", c.sequence.segment_duration);
  s.get("sample_period", c.sequence.sample_period);
  s.get("quantize", c.sequence.quantize);
  s.get_deg("noise_std_deg", c.sequence.noise_std);
  s.get("restarts", c.fit.restarts);
  s.get("perturbation", c.fit.perturbation);
  s.get("max_evaluations", c.fit.max_evaluations);
  s.get("substeps", c.fit.substeps);
}

}  // namespace

void RunConfig::validate() const {
  plant.validate();
  mpc.validate();
  ppo.validate();
  env().validate();
  if (!(lqi.r > 0.0)) throw ConfigError("lqi.r must be positive");
  if (!(lqi.period > 0.0) || !(lqi.filter_tau > 0.0))
    throw ConfigError("lqi.period and lqi.filter_tau must be positive");
  for (double q : lqi.q)
    if (!(q >= 0.0)) throw ConfigError("lqi.q entries must be non-negative");
  for (double r : targets)
    if (r == 0.0 || deg_to_rad(std::abs(r)) > plant.params.theta_limit)
      throw ConfigError("step targets must be nonzero and within the pitch limit");
  make_scenario(scenario).validate(plant.params);
}

ppo::EnvConfig RunConfig::env() const {
  ppo::EnvConfig e;
  e.plant = plant;
  e.control_period = ppo_control_period;
  e.episode_steps = ppo_episode_steps;
  e.randomize_targets = ppo_randomize_targets;
  return e;
}

RunConfig parse_run_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  RunConfig c;
  {
    Section s(j, "");
    if (const json* p = s.sub("plant")) read_plant(*p, c.plant);
    if (const json* p = s.sub("lqi")) read_lqi(*p, c.lqi);
    if (const json* p = s.sub("mpc")) read_mpc(*p, c.mpc);
    if (const json* p = s.sub("ppo")) read_ppo(*p, c);
    if (const json* p = s.sub("sysid")) read_sysid(*p, c);
    s.get("controller", c.controller);
    s.get("controllers", c.controllers);
    s.get("scenario", c.scenario);
    s.get("targets", c.targets);
    s.get("seed", c.seed);
    std::string out = c.out.string();
    s.get("out", out);
    c.out = out;
    s.get("parallel", c.parallel);
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_run_config(ss.str());
}

bench::Scenario make_scenario(const std::string& spec) {
  if (spec == "sequence") return bench::sequence_scenario();
  if (spec.rfind("step:", 0) == 0) {
    const double target = io::parse_double(std::string_view(spec).substr(5));
    if (target == 0.0) throw ConfigError("step scenario needs a nonzero target");
    return bench::step_scenario(target);
  }
  throw ConfigError("unknown scenario '" + spec + "' (use 'sequence' or 'step:<deg>')");
}

bench::ControllerFactory controller_factory(const RunConfig& cfg, const std::string& name) {
  const LinearModel model = linearize(cfg.plant.params);
  const double u_limit = cfg.plant.params.u_limit;
  if (name == "lqi") {
    lqi::LqiGain gain = lqi::synthesize(
        model, num::Matrix::diagonal({cfg.lqi.q[0], cfg.lqi.q[1], cfg.lqi.q[2]}), cfg.lqi.r,
        cfg.lqi.period);
    const lqi::LqiOptions opts{cfg.lqi.filter_tau, u_limit};
    return [gain, opts] { return std::make_unique<lqi::LqiController>(gain, opts); };
  }
  if (name == "mpc") {
    mpc::MpcConfig mc = cfg.mpc;
    mc.u_limit = std::min(mc.u_limit, u_limit);
    // Synthesize once; the factory copies the solved problem into each instance.
    auto proto = std::make_shared<const mpc::MpcController>(model, mc);
    return [proto] {
      auto c = std::make_unique<mpc::MpcController>(*proto);
      c->reset();
      return c;
    };
  }
  if (name == "ppo") {
    if (cfg.checkpoint.empty()) throw ConfigError("controller 'ppo' needs a checkpoint (--checkpoint)");
    const ppo::ActorCritic ac = ppo::load_checkpoint(cfg.checkpoint);
    const double period = cfg.ppo_control_period;
    return [ac, period, u_limit] {
      return std::make_unique<ppo::PolicyController>(ac, period, u_limit);
    };
  }
  if (name == "zero") return [] { return std::make_unique<ZeroController>(0.01); };
  throw ConfigError("unknown controller '" + name + "' (use lqi, mpc, ppo or zero)");
}

}  // namespace aero
