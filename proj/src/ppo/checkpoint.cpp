#include "aero/ppo/checkpoint.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "aero/errors.hpp"
#include "aero/io/format.hpp"

namespace aero::ppo {
namespace {

constexpr const char* kMagic = "aero-ppo-checkpoint v1";

void write_sizes(std::ostream& os, const char* tag, const Mlp& net) {
  os << tag;
  for (auto s : net.sizes()) os << ' ' << s;
  os << '\n';
}

std::vector<std::size_t> read_sizes(std::istream& is, const std::string& tag) {
  std::string line;
  if (!std::getline(is, line)) throw CheckpointError("checkpoint truncated before '" + tag + "'");
  std::istringstream ls(line);
  std::string word;
  ls >> word;
  if (word != tag) throw CheckpointError("checkpoint: expected '" + tag + "', got '" + word + "'");
  std::vector<std::size_t> sizes;
  std::size_t s;
  while (ls >> s) sizes.push_back(s);
  if (!ls.eof()) throw CheckpointError("checkpoint: malformed layer sizes for " + tag);
  return sizes;
}

std::string next_token(std::istream& is, const char* what) {
  std::string tok;
  if (!(is >> tok)) throw CheckpointError(std::string("checkpoint truncated reading ") + what);
  return tok;
}

double to_double(const std::string& tok) {
  try {
    return io::parse_double(tok);
  } catch (const ConfigError&) {
    throw CheckpointError("checkpoint: bad number '" + tok + "'");
  }
}

}  // namespace

void write_checkpoint(std::ostream& os, const ActorCritic& ac) {
  os << kMagic << '\n';
  write_sizes(os, "policy", ac.policy_net());
  write_sizes(os, "value", ac.value_net());
  os << "log_std " << io::format_exact(ac.log_std()) << '\n';
  const auto p = ac.params();
  os << "params " << p.size() << '\n';
  for (std::size_t i = 0; i < p.size(); ++i)
    os << io::format_exact(p[i]) << ((i + 1) % 8 == 0 || i + 1 == p.size() ? '\n' : ' ');
}

ActorCritic read_checkpoint(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kMagic)
    throw CheckpointError("not a PPO checkpoint (bad header)");
  ActorCritic ac;
  if (read_sizes(is, "policy") != ac.policy_net().sizes() ||
      read_sizes(is, "value") != ac.value_net().sizes())
    throw CheckpointError("checkpoint network shapes do not match 3-64-64-1");

  if (next_token(is, "log_std tag") != "log_std") throw CheckpointError("checkpoint: missing log_std");
  const double log_std = to_double(next_token(is, "log_std"));
  if (next_token(is, "params tag") != "params") throw CheckpointError("checkpoint: missing params");
  const std::string count_tok = next_token(is, "parameter count");
  if (count_tok != std::to_string(ac.params().size()))
    throw CheckpointError("checkpoint parameter count " + count_tok + " does not match network");

  auto p = ac.params();
  for (auto& v : p) {
    v = to_double(next_token(is, "parameters"));
    if (!std::isfinite(v)) throw CheckpointError("checkpoint contains non-finite parameters");
  }
  std::string extra;
  if (is >> extra) throw CheckpointError("checkpoint has trailing data");
  if (ac.log_std() != log_std) throw CheckpointError("checkpoint log_std disagrees with params");
  return ac;
}

void save_checkpoint(const std::filesystem::path& path, const ActorCritic& ac) {
  std::ofstream os(path);
  if (!os) throw CheckpointError("cannot write " + path.string());
  write_checkpoint(os, ac);
  if (!os) throw CheckpointError("error writing " + path.string());
}

ActorCritic load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw CheckpointError("cannot open " + path.string());
  return read_checkpoint(is);
}

void write_learning_curve(std::ostream& os, std::span<const CurvePoint> curve) {
  os << "step,eval_reward,mean_deviation_deg\n";
  for (const auto& p : curve)
    os << p.step << ',' << io::format_sig(p.eval_reward) << ','
       << io::format_sig(p.mean_deviation_deg) << '\n';
}

}  // namespace aero::ppo
