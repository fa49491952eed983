// simpleds: train, evaluate, serve and chat with dialogue policies.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "simpleds/config.hpp"
#include "simpleds/data_pack.hpp"
#include "simpleds/environment.hpp"
#include "simpleds/evaluation.hpp"
#include "simpleds/training.hpp"
#include "simpleds/transport.hpp"

namespace {

using namespace simpleds;

enum ExitCode { kOk = 0, kUsage = 1, kDataError = 2, kRuntimeFault = 3 };

// Setup failures (config, data, policy files) map to kDataError.
struct SetupError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> noise;
  std::optional<std::string> lang;
  std::optional<std::string> data_dir;
};

std::atomic<bool> g_interrupted{false};

extern "C" void on_signal(int) { g_interrupted.store(true); }

Config load_effective_config(const CommonOptions& common) {
  try {
    Config cfg = common.config_path.empty() ? Config{} : load_config(common.config_path);
    if (common.seed) cfg.seed = *common.seed;
    if (common.noise) cfg.env.noise.enabled = *common.noise == "on";
    if (common.lang) cfg.data.lang = *common.lang;
    if (common.data_dir) cfg.data.dir = *common.data_dir;
    cfg.validate();
    return cfg;
  } catch (const std::exception& e) {
    throw SetupError(std::string("config: ") + e.what());
  }
}

std::shared_ptr<const DataPack> load_data(const Config& cfg, bool require_demonstrations = true) {
  try {
    return std::make_shared<const DataPack>(
        load_data_pack(DataPaths::in_directory(cfg.data.dir, cfg.data.lang),
                       cfg.env.constraints.binarisation_threshold, require_demonstrations));
  } catch (const std::exception& e) {
    throw SetupError(std::string("data: ") + e.what());
  }
}

Policy load_matching_policy(const std::string& path, const DataPack& data) {
  Policy policy;
  try {
    policy = load_policy(path);
  } catch (const std::exception& e) {
    throw SetupError("policy " + path + ": " + e.what());
  }
  if (policy.vocabulary != data.vocab.words()) {
    throw SetupError("policy " + path + " was trained with a different vocabulary (" +
                     std::to_string(policy.vocabulary.size()) + " words) than the '" + data.lang +
                     "' data pack (" + std::to_string(data.vocab.size()) + " words)");
  }
  return policy;
}

double tail_mean(const std::vector<CurvePoint>& curve, std::size_t n) {
  const std::size_t k = std::min(n, curve.size());
  if (k == 0) return 0.0;
  double sum = 0.0;
  for (std::size_t i = curve.size() - k; i < curve.size(); ++i) sum += curve[i].total_reward;
  return sum / static_cast<double>(k);
}

struct TrainOptions {
  std::optional<long> steps;
  std::optional<long> episodes;
  std::string policy_out = "policy.bin";
  std::string curve_out = "curve.csv";
  std::string connect;  // host:port of a running server
};

int cmd_train(const CommonOptions& common, const TrainOptions& opt) {
  Config cfg = load_effective_config(common);
  if (opt.steps) cfg.learner.total_learning_steps = *opt.steps;
  if (opt.episodes) cfg.learner.max_episodes = *opt.episodes;
  try {
    cfg.learner.validate();
  } catch (const std::exception& e) {
    throw SetupError(std::string("config: ") + e.what());
  }

  std::unique_ptr<EnvironmentClient> env;
  if (opt.connect.empty()) {
    auto data = load_data(cfg);
    env = std::make_unique<LocalEnvironment>(DialogueEnvironment(data, cfg.env, make_rng(cfg.seed, 1)));
  } else {
    const auto colon = opt.connect.rfind(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--connect", "expected HOST:PORT");
    env = std::make_unique<TcpEnvironment>(opt.connect.substr(0, colon), std::stoi(opt.connect.substr(colon + 1)));
  }

  const TrainingResult result = run_training(*env, cfg.learner, make_rng(cfg.seed, 0));
  save_policy(opt.policy_out, Policy{result.pair.online, env->vocabulary()});
  write_curve_file(opt.curve_out, result.curve);
  std::cout << "steps: " << result.steps << '\n'
            << "episodes: " << result.curve.size() << '\n'
            << "final_100_episode_mean_reward: " << tail_mean(result.curve, 100) << '\n'
            << "policy: " << opt.policy_out << '\n'
            << "curve: " << opt.curve_out << '\n';
  return kOk;
}

struct EvalOptions {
  std::string policy;
  int episodes = 500;
  bool expert = false;
  int success_turns = 15;
  int show = 0;
};

int cmd_eval(const CommonOptions& common, const EvalOptions& opt) {
  const Config cfg = load_effective_config(common);
  auto data = load_data(cfg);
  std::optional<Policy> policy;
  if (!opt.expert) {
    if (opt.policy.empty()) throw CLI::RequiredError("--policy (or --expert)");
    policy = load_matching_policy(opt.policy, *data);
  }
  DialogueEnvironment env(data, cfg.env, make_rng(cfg.seed, 2));
  const Chooser choose = policy ? greedy_chooser(policy->net) : expert_chooser();
  int shown = 0;
  const EvalReport report = evaluate(env, choose, opt.episodes, opt.success_turns, [&](const DialogueEnvironment& e) {
    if (shown >= opt.show) return;
    std::cout << "# episode " << shown++ << '\n' << format_transcript(e.transcript(), e.state()) << '\n';
  });
  print_report(std::cout, report);
  return kOk;
}

struct ServeOptions {
  std::optional<int> port;
  std::optional<int> ws_port;
  std::string policy;
  std::string transcripts;
  std::optional<double> timeout_s;
};

int cmd_serve(const CommonOptions& common, const ServeOptions& opt) {
  Config cfg = load_effective_config(common);
  if (opt.port) cfg.server.port = *opt.port;
  if (opt.ws_port) cfg.server.ws_port = *opt.ws_port;
  if (opt.timeout_s) cfg.server.human_timeout_s = *opt.timeout_s;
  if (!opt.transcripts.empty()) cfg.server.transcript_dir = opt.transcripts;
  auto data = load_data(cfg);

  ServerOptions so;
  so.data = data;
  so.env = cfg.env;
  if (!opt.policy.empty()) so.policy = std::make_shared<const QNetwork>(load_matching_policy(opt.policy, *data).net);
  so.port = cfg.server.port;
  so.ws_port = cfg.server.ws_port == 0 ? -1 : cfg.server.ws_port;
  so.human_timeout_s = cfg.server.human_timeout_s;
  so.seed = cfg.seed;
  so.transcript_dir = cfg.server.transcript_dir;

  EnvironmentServer server(std::move(so));
  server.start();
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::cout << "listening on port " << server.port();
  if (server.ws_port() > 0) std::cout << " (websocket " << server.ws_port() << ")";
  std::cout << std::endl;
  server.wait(&g_interrupted);
  server.stop();
  return kOk;
}

struct ChatOptions {
  std::string policy;
  std::string transcript;
};

int cmd_chat(const CommonOptions& common, const ChatOptions& opt) {
  Config cfg = load_effective_config(common);
  cfg.env.noise.enabled = false;
  auto data = load_data(cfg);
  const Policy policy = load_matching_policy(opt.policy, *data);
  DialogueEnvironment env(data, cfg.env, make_rng(cfg.seed, 3));
  Observation obs = env.reset();
  while (!obs.terminal) {
    const int action = greedy_action(policy.net, obs.state, obs.valid_actions);
    const PendingTurn turn = env.begin_turn(action);
    std::cout << "system: " << join(turn.system_words) << std::endl;
    if (!turn.expects_user) {
      obs = env.finish_turn({});
      continue;
    }
    std::cout << "> " << std::flush;
    std::string line;
    if (!std::getline(std::cin, line)) {
      env.abort();
      std::cout << '\n';
      break;
    }
    obs = env.finish_turn_with_text(line);
  }
  if (!opt.transcript.empty()) {
    std::ofstream(opt.transcript) << format_transcript(env.transcript(), env.state());
  }
  return kOk;
}

struct ReplayOptions {
  int dialogues = 20;
  std::string output;
  bool quiet = false;
};

int cmd_replay(const CommonOptions& common, const ReplayOptions& opt) {
  const Config cfg = load_effective_config(common);
  // The demonstrations bootstrap the action model, so they must not need it.
  auto data = load_data(cfg, false);
  int index = 0;
  const DemonstrationCorpus corpus = generate_demonstrations(
      data, cfg.env, opt.dialogues, make_rng(cfg.seed, 4), [&](const DialogueEnvironment& env) {
        if (opt.quiet) return;
        std::cout << "# dialogue " << index++ << '\n' << format_transcript(env.transcript(), env.state()) << '\n';
      });
  if (!opt.output.empty()) {
    save_corpus(opt.output, corpus);
    std::cout << "wrote " << corpus.dialogues.size() << " dialogues (" << corpus.turn_count() << " turns) to "
              << opt.output << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dialogue policy learning with deep Q-networks"};
  app.require_subcommand(1);

  CommonOptions common;
  app.add_option("--config", common.config_path, "JSON configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", common.seed, "Seed for every random stream");
  app.add_option("--noise", common.noise, "Simulated recognition noise")->check(CLI::IsMember({"on", "off"}));
  app.add_option("--lang", common.lang, "Language of the data pack");
  app.add_option("--data-dir", common.data_dir, "Directory holding <lang>/ data packs");

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a policy against the simulator");
  train_cmd->add_option("--steps", train.steps, "Learning steps")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--episodes", train.episodes, "Maximum episodes")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--policy", train.policy_out, "Output policy file");
  train_cmd->add_option("--curve", train.curve_out, "Output learning-curve CSV");
  train_cmd->add_option("--connect", train.connect, "Train against a server at HOST:PORT");

  EvalOptions eval;
  auto* eval_cmd = app.add_subcommand("eval", "Greedy rollouts of a trained policy");
  eval_cmd->add_option("--policy", eval.policy, "Policy file")->check(CLI::ExistingFile);
  eval_cmd->add_flag("--expert", eval.expert, "Evaluate the hand-written policy instead");
  eval_cmd->add_option("--episodes", eval.episodes, "Episodes to run")->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--success-turns", eval.success_turns, "Turn limit for task success");
  eval_cmd->add_option("--show", eval.show, "Print transcripts of the first N episodes");

  ServeOptions serve;
  auto* serve_cmd = app.add_subcommand("serve", "Run the environment server");
  serve_cmd->add_option("--port", serve.port, "TCP port (0 picks one)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--ws-port", serve.ws_port, "WebSocket port (0 disables)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--policy", serve.policy, "Policy that drives interactive sessions")
      ->check(CLI::ExistingFile);
  serve_cmd->add_option("--transcripts", serve.transcripts, "Directory for session transcripts");
  serve_cmd->add_option("--timeout", serve.timeout_s, "Seconds to wait for a human turn");

  ChatOptions chat;
  auto* chat_cmd = app.add_subcommand("chat", "Talk to a policy in the terminal");
  chat_cmd->add_option("--policy", chat.policy, "Policy file")->required()->check(CLI::ExistingFile);
  chat_cmd->add_option("--transcript", chat.transcript, "Write the dialogue transcript here");

  ReplayOptions replay;
  auto* replay_cmd = app.add_subcommand("replay", "Run the hand-written policy and print transcripts");
  replay_cmd->add_option("--dialogues", replay.dialogues, "Dialogues to run")->check(CLI::NonNegativeNumber);
  replay_cmd->add_option("--output", replay.output, "Write the demonstration corpus here");
  replay_cmd->add_flag("--quiet", replay.quiet, "Do not print transcripts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*train_cmd) return cmd_train(common, train);
    if (*eval_cmd) return cmd_eval(common, eval);
    if (*serve_cmd) return cmd_serve(common, serve);
    if (*chat_cmd) return cmd_chat(common, chat);
    if (*replay_cmd) return cmd_replay(common, replay);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const SetupError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFault;
  }
  return kUsage;
}
