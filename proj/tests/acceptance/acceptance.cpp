// Acceptance suite: one [PASS]/[FAIL] line per criterion.
//
// Usage: acceptance [--only ID]... [--allow-fail ID]...
//   --only ID        run just the listed criteria ("7" selects 7a and 7b)
//   --allow-fail ID  still report ID, but leave it out of the exit status
//
// Criterion 7b trains 3 seeds for 200k steps each. AERO_FULL_TRAINING=1
// switches to the 1M-step budget and its stricter threshold (tens of
// minutes per seed).

#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "aero/bench/report.hpp"
#include "aero/config.hpp"
#include "aero/lqi.hpp"
#include "aero/model.hpp"
#include "aero/mpc.hpp"
#include "aero/numerics/box_qp.hpp"
#include "aero/numerics/linalg.hpp"
#include "aero/numerics/riccati.hpp"
#include "aero/ppo/checkpoint.hpp"
#include "aero/ppo/gae.hpp"
#include "aero/ppo/policy_controller.hpp"
#include "aero/ppo/ppo.hpp"
#include "aero/sysid.hpp"
#include "aero/units.hpp"
#include "oracles/box_qp_enumeration.hpp"
#include "oracles/finite_difference.hpp"
#include "oracles/gae_direct.hpp"
#include "oracles/lq_recursion.hpp"

using namespace aero;

namespace {

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [violated: " << what << "]";
    }
  }
};

oracle::Mat to_oracle(const num::Matrix& m) {
  oracle::Mat o(m.rows(), oracle::Vec(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) o[i][j] = m(i, j);
  return o;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median3(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  return v[v.size() / 2];
}

// ---------------------------------------------------------------------------

void linearization(Verdict& v) {
  using C = std::complex<double>;
  const double h = 1e-30;
  const PlantParams p{};
  const auto dth = derivative<C>(C(0, h), C(0), C(0), p);
  const auto dom = derivative<C>(C(0), C(0, h), C(0), p);
  const auto du = derivative<C>(C(0), C(0), C(0, h), p);
  const double j10 = dth.domega.imag() / h, j11 = dom.domega.imag() / h, b1 = du.domega.imag() / h;
  const double err = std::max({std::abs(j10 + 0.8185), std::abs(j11 + 0.0503), std::abs(b1 - 0.0682),
                               std::abs(dth.dtheta.imag() / h), std::abs(dom.dtheta.imag() / h - 1.0),
                               std::abs(du.dtheta.imag() / h)});
  const LinearModel m = linearize(p);
  const double analytic = std::max({std::abs(m.a(1, 0) - j10), std::abs(m.a(1, 1) - j11),
                                    std::abs(m.b[1] - b1)});
  v.detail << "Jacobian (" << j10 << ", " << j11 << ", " << b1 << "), max error " << err;
  v.check(err <= 1e-12, "Jacobian entries to 1e-12");
  v.check(analytic <= 1e-12, "analytic linearization agrees");
}

void riccati(Verdict& v) {
  const LinearModel model = linearize(PlantParams{});
  const num::Matrix a = lqi::augmented_a(model);
  const num::Matrix b = num::Matrix::column(lqi::augmented_b(model));
  const auto care = num::solve_care(a, b, lqi::default_q(), num::Matrix{{lqi::kDefaultR}});
  double max_re = -1e300;
  for (const auto& z : num::eigenvalues(a - b * care.k)) max_re = std::max(max_re, z.real());

  const mpc::MpcProblem problem(discretize(model, 0.02), mpc::MpcConfig{});
  const DiscreteModel d = discretize(model, 0.02);
  const double rho = num::spectral_radius(d.ad - num::Matrix::column(d.bd) * problem.terminal_gain());

  v.detail << "CARE residual " << care.residual << ", max Re(eig) " << max_re << "; DARE residual "
           << problem.dare_residual() << ", spectral radius " << rho;
  v.check(care.residual < 1e-8, "CARE residual < 1e-8");
  v.check(max_re < 0.0, "LQI closed loop Hurwitz");
  v.check(problem.dare_residual() < 1e-10, "DARE residual < 1e-10");
  v.check(rho < 1.0, "MPC terminal loop Schur stable");
}

void qp_oracle(Verdict& v) {
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> g;
  std::uniform_int_distribution<int> dim(1, 3);
  std::uniform_real_distribution<double> width(0.2, 3.0);
  double worst = 0.0;
  int not_found = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = static_cast<std::size_t>(dim(rng));
    num::Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = g(rng);
    num::Matrix h = m.transposed() * m;
    for (std::size_t i = 0; i < n; ++i) h(i, i) += 0.05;
    num::Vector f(n), lo(n), hi(n);
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = 3.0 * g(rng);
      lo[i] = -width(rng);
      hi[i] = width(rng);
    }
    const num::BoxQp qp{h, f, lo, hi};
    const auto got = num::solve_box_qp(qp, {1e-11, 100000, std::nullopt});
    const auto ref = oracle::enumerate_box_qp(to_oracle(h), f.values(), lo.values(), hi.values());
    if (!ref.found) {
      ++not_found;
      continue;
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) sq += (got.z[i] - ref.z[i]) * (got.z[i] - ref.z[i]);
    worst = std::max(worst, std::sqrt(sq));
  }
  v.detail << "200 random QPs (n <= 3), worst solution distance " << worst;
  v.check(not_found == 0, "enumeration found every optimum");
  v.check(worst <= 1e-6, "solution distance <= 1e-6");
}

void mpc_vs_lq(Verdict& v) {
  const DiscreteModel d = discretize(linearize(PlantParams{}), 0.02);
  mpc::MpcConfig cfg;
  cfg.u_limit = 1e6;
  cfg.qp_tol = 1e-12;
  cfg.qp_max_iter = 200000;
  const mpc::MpcProblem problem(d, cfg);
  const auto k0 = oracle::lq_first_gain(to_oracle(d.ad), d.bd.values(), to_oracle(cfg.q), cfg.r,
                                        to_oracle(problem.terminal_cost()), cfg.horizon);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> th(-0.8, 0.8), om(-2.0, 2.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double t = th(rng), w = om(rng);
    const mpc::ObserverState obs{num::Vector{t, w, 0.0}, num::Vector(3)};
    const double u = mpc::mpc_step(obs, 0.0, problem).u;
    worst = std::max(worst, std::abs(u + (k0[0] * t + k0[1] * w)));
  }
  v.detail << "100 random states, bounds +/-1e6, worst |u_mpc - u_lq| " << worst << " V";
  v.check(worst <= 1e-5, "difference <= 1e-5");
}

void offset_free(Verdict& v) {
  RunConfig cfg;
  bench::Scenario s;
  s.name = "hold_20";
  s.profile.segments = {{0.0, 20.0}};
  s.duration = 30.0;
  s.imbalance = 0.05;
  const char* sep = "";
  for (const char* name : {"lqi", "mpc"}) {
    const auto c = controller_factory(cfg, name)();
    const auto run = bench::run_scenario(*c, s, cfg.plant, 0);
    double worst = 0.0;
    for (std::size_t i = 0; i < run.trace.size(); ++i)
      if (run.trace.t[i] >= 29.0) worst = std::max(worst, std::abs(run.trace.y[i] - 20.0));
    v.detail << std::exchange(sep, "; ") << name << " |theta - r| over 29-30 s <= " << worst << " deg";
    v.check(worst < 0.25, std::string(name) + " within 0.25 deg");
  }
}

// Shared by criteria 6, 7 and 9.
struct Shared {
  std::optional<ppo::ActorCritic> policy;  // best checkpoint of the median seed
  std::optional<bench::CompareResult> comparison;
  std::filesystem::path out = std::filesystem::temp_directory_path() / "aero_acceptance";
};

const bench::CompareResult& comparison(Shared& shared) {
  if (shared.comparison) return *shared.comparison;
  RunConfig cfg;
  std::vector<bench::NamedController> ctrls{{"lqi", controller_factory(cfg, "lqi")},
                                            {"mpc", controller_factory(cfg, "mpc")}};
  if (shared.policy) {
    const ppo::ActorCritic ac = *shared.policy;
    ctrls.push_back({"ppo", [ac] { return std::make_unique<ppo::PolicyController>(ac); }});
  }
  std::filesystem::remove_all(shared.out);
  bench::CompareOptions opt;
  opt.out_dir = shared.out;
  shared.comparison = bench::compare(ctrls, cfg.plant, 0, opt);
  return *shared.comparison;
}

void step_desk(Verdict& v, Shared& shared) {
  const auto& rep = comparison(shared).report;
  const auto* lqi = rep.find("lqi");
  const auto* mpc = rep.find("mpc");
  v.detail << "LQI t_r " << lqi->mean_t_r() << " s, |e_inf| " << lqi->mean_abs_e_inf() << " deg; MPC t_r "
           << mpc->mean_t_r() << " s, M_p " << mpc->mean_m_p() << " %";
  v.check(std::abs(lqi->mean_t_r() - 0.95) <= 0.5, "LQI t_r in 0.95 +/- 0.5 s");
  v.check(lqi->mean_abs_e_inf() <= 0.2, "LQI |e_inf| <= 0.2 deg");
  v.check(std::abs(mpc->mean_t_r() - 1.20) <= 0.5, "MPC t_r in 1.20 +/- 0.5 s");
  v.check(mpc->mean_m_p() <= 10.0, "MPC M_p <= 10 %");
}

void ppo_checks(Verdict& v) {
  // Gradient of the clipped loss against central differences.
  std::mt19937_64 rng(8);
  auto perturbed = [&](const ppo::ActorCritic& ac, double scale) {
    ppo::ActorCritic out = ac;
    std::normal_distribution<double> g(0.0, scale);
    for (auto& p : out.params()) p += g(rng);
    return out;
  };
  const ppo::ActorCritic behaviour = perturbed(ppo::ActorCritic(rng), 0.02);
  ppo::Trajectory traj;
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  std::normal_distribution<double> g;
  for (int i = 0; i < 32; ++i) {
    const ppo::Observation o{u(rng), 0.05 * u(rng), u(rng)};
    const auto a = ppo::sample_action(behaviour, o, rng);
    traj.steps.push_back({o, a.raw, a.log_prob, -std::abs(g(rng)), behaviour.value(o), i % 7 == 6});
  }
  traj.bootstrap_value = 0.3;
  const ppo::Batch batch = ppo::make_batch(traj, ppo::PpoConfig{});
  ppo::ActorCritic ac = perturbed(behaviour, 0.01);
  ac.set_log_std(behaviour.log_std() - 0.3);
  std::vector<std::size_t> idx(batch.size());
  std::iota(idx.begin(), idx.end(), 0);
  ppo::PpoConfig cfg;
  cfg.ent_coef = 0.01;
  std::vector<double> grad(ac.params().size()), scratch(grad.size());
  ppo::ppo_loss_gradient(ac, batch, idx, cfg, grad);
  const std::vector<double> p0(ac.params().begin(), ac.params().end());
  const auto fd = oracle::central_gradient(
      [&](const std::vector<double>& p) {
        ppo::ActorCritic probe = ac;
        std::copy(p.begin(), p.end(), probe.params().begin());
        return ppo::ppo_loss_gradient(probe, batch, idx, cfg, scratch).loss;
      },
      p0);
  double scale = 0.0, err = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    scale = std::max(scale, std::abs(fd[i]));
    err = std::max(err, std::abs(grad[i] - fd[i]));
  }
  const double rel = err / scale;

  // GAE against the direct sum.
  std::bernoulli_distribution end(0.05);
  double gae_err = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 500;
    std::vector<double> rewards(n), values(n + 1);
    std::vector<bool> dones(n);
    auto flags = std::make_unique<bool[]>(n);
    for (std::size_t i = 0; i < n; ++i) {
      rewards[i] = g(rng);
      values[i] = 3 * g(rng);
      dones[i] = flags[i] = end(rng);
    }
    values[n] = g(rng);
    const auto r = ppo::compute_gae(rewards, values, std::span<const bool>(flags.get(), n), 0.99, 0.95);
    const auto ref = oracle::gae_direct(rewards, values, dones, 0.99, 0.95);
    for (std::size_t i = 0; i < n; ++i) gae_err = std::max(gae_err, std::abs(r.advantages[i] - ref[i]));
  }
  v.detail << "loss gradient rel. error " << rel << ", GAE max error " << gae_err;
  v.check(rel < 1e-4, "gradient check < 1e-4");
  v.check(gae_err <= 1e-10, "GAE oracle 1e-10");
}

void ppo_training(Verdict& v, Shared& shared) {
  const bool full = std::getenv("AERO_FULL_TRAINING") != nullptr;
  ppo::PpoConfig cfg;
  cfg.total_steps = full ? 1'000'000 : 200'000;
  const double threshold = full ? -80.0 : -150.0;
  std::vector<double> best;
  std::vector<ppo::TrainResult> runs;
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto t0 = std::chrono::steady_clock::now();
    auto r = ppo::train(RunConfig{}.env(), cfg, seed);
    std::cerr << "  ppo seed " << seed << ": best " << r.best_reward << " at step " << r.best_step << " ("
              << seconds_since(t0) << " s)\n";
    best.push_back(r.best_reward);
    runs.push_back(std::move(r));
  }
  const double med = median3(best);
  const auto median_run = std::find(best.begin(), best.end(), med) - best.begin();
  shared.policy = runs[static_cast<std::size_t>(median_run)].best;
  std::filesystem::create_directories(shared.out);
  ppo::save_checkpoint(shared.out / "ppo_median_seed.ckpt", *shared.policy);

  v.detail << cfg.total_steps << " steps x 3 seeds, best rewards {" << best[0] << ", " << best[1] << ", "
           << best[2] << "}, median " << med << " (" << ppo::reward_to_mean_deviation_deg(med)
           << " deg), required >= " << threshold << "; reference point -53.1 (3.80 deg)";
  v.check(med >= threshold, "median best reward above threshold");
}

void sysid_recovery(Verdict& v) {
  const PlantParams truth{};
  PlantParams guess = truth;
  guess.c_theta *= 1.2;
  guess.c_omega *= 0.8;
  guess.c_u *= 1.2;
  const auto data = sysid::generate_test_sequence(truth, 0);
  const auto r = sysid::fit(data, guess);
  const double e_th = std::abs(r.params.c_theta / truth.c_theta - 1.0);
  const double e_om = std::abs(r.params.c_omega / truth.c_omega - 1.0);
  const double e_u = std::abs(r.params.c_u / truth.c_u - 1.0);
  v.detail << "relative errors c_theta " << e_th << ", c_omega " << e_om << ", c_u " << e_u;
  v.check(std::max({e_th, e_om, e_u}) <= 0.01, "all within 1 %");
}

void report_shape(Verdict& v, Shared& shared) {
  const auto& res = comparison(shared);
  const auto& rep = res.report;
  v.check(shared.policy.has_value(), "PPO policy available (criterion 7 ran)");
  v.check(rep.targets == standard_step_targets() && rep.targets.size() == 8, "eight step targets");
  std::ifstream md(shared.out / "report.md");
  std::stringstream ss;
  ss << md.rdbuf();
  const std::string text = ss.str();
  int t_r_lines = 0;
  for (std::size_t pos = 0; (pos = text.find("| t_r |", pos)) != std::string::npos; ++pos) ++t_r_lines;
  v.check(t_r_lines == 8, "report.md has one t_r line per target");
  for (const char* f : {"report.csv", "plotdata.csv", "report.md"})
    v.check(std::filesystem::exists(shared.out / f), std::string(f) + " written");

  for (const auto& row : rep.rows) {
    double sum = 0.0;
    int n = 0;
    for (const auto& m : row.steps)
      if (m && std::isfinite(m->t_r)) {
        sum += m->t_r;
        ++n;
      }
    v.check(n == 8 && std::abs(sum / n - row.mean_t_r()) < 1e-12, row.controller + " average recomputed");
    v.check(row.sequence_deviation.has_value(), row.controller + " sequence ran");
  }

  const auto* mpc = rep.find("mpc");
  const auto* lqi = rep.find("lqi");
  const auto* ppo = rep.find("ppo");
  v.detail << "per-step control time: MPC " << mpc->mean_control_us() << " us, LQI " << lqi->mean_control_us()
           << " us";
  if (ppo) v.detail << ", PPO " << ppo->mean_control_us() << " us";
  v.check(mpc->mean_control_us() > lqi->mean_control_us(), "MPC slower than LQI");
  v.check(ppo && mpc->mean_control_us() > ppo->mean_control_us(), "MPC slower than PPO");
}

struct Criterion {
  std::string id;
  const char* title;
  std::function<void(Verdict&, Shared&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  // Criteria are selected by number ("7" covers 7a and 7b) or by full label.
  std::set<std::string> only, allowed;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if ((a == "--only" || a == "--allow-fail") && i + 1 < argc) {
      (a == "--only" ? only : allowed).insert(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only ID]... [--allow-fail ID]...\n";
      return 2;
    }
  }
  auto listed = [](const std::set<std::string>& set, const std::string& id) {
    return set.count(id) || set.count(id.substr(0, id.find_first_not_of("0123456789")));
  };
  // Criterion 9 uses the policy trained in 7b.
  if (only.count("9")) only.insert("7b");

  const std::vector<Criterion> criteria{
      {"1", "linearization identity", [](Verdict& v, Shared&) { linearization(v); }},
      {"2", "Riccati residuals and stability", [](Verdict& v, Shared&) { riccati(v); }},
      {"3", "box QP vs active-set enumeration", [](Verdict& v, Shared&) { qp_oracle(v); }},
      {"4", "unconstrained MPC equals finite-horizon LQ", [](Verdict& v, Shared&) { mpc_vs_lq(v); }},
      {"5", "offset-free tracking under imbalance", [](Verdict& v, Shared&) { offset_free(v); }},
      {"7a", "PPO gradient and GAE oracles", [](Verdict& v, Shared&) { ppo_checks(v); }},
      {"7b", "PPO training reward", ppo_training},
      {"6", "step-response averages", step_desk},
      {"8", "system identification recovery", [](Verdict& v, Shared&) { sysid_recovery(v); }},
      {"9", "comparison report", report_shape},
  };

  Shared shared;
  std::vector<std::pair<std::string, std::string>> lines;
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !listed(only, c.id)) continue;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(v, shared);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "[exception: " << e.what() << "]";
    }
    std::ostringstream line;
    line << (v.pass ? "[PASS] " : "[FAIL] ") << c.id << ": " << c.title << " - " << v.detail.str() << " ("
         << seconds_since(t0) << " s)";
    if (!v.pass && listed(allowed, c.id)) line << " (known failure, not counted)";
    lines.emplace_back(c.id, line.str());
    std::cerr << line.str() << '\n';
    if (!v.pass && !listed(allowed, c.id)) ++failures;
  }

  std::sort(lines.begin(), lines.end());
  std::cout << "\nAcceptance summary\n";
  for (const auto& [id, l] : lines) std::cout << l << '\n';
  return failures == 0 ? 0 : 1;
}
