// ghzframe: seeded, reproducible runs of every verification and simulation.
//
//   ghzframe verify [--trials N] [--corrupt] [--tables]
//   ghzframe play   --strategy {classical-best,ghz,frame-free} [--adversary MODE] [--transcripts PATH]
//   ghzframe bound  --game {vaidman,apples}
//   ghzframe bell   [--drop-constraint K]
//   ghzframe tasks  --task {apples,apples-frame-free,secret-share} [--adversary MODE] [--eavesdropper MODE]
//
// Common flags: --seed, --trials, --format {json,csv,human}, --out PATH.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "ghzframe/commands.hpp"

namespace {

void add_common(CLI::App* cmd, ghzframe::RunConfig& config, std::string& format) {
  cmd->add_option("--seed", config.seed, "Base seed; trial i uses splitmix(seed, i)")->capture_default_str();
  cmd->add_option("--trials", config.trials, "Number of trials (0 = command default)");
  cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv", "human"}))
      ->capture_default_str();
  cmd->add_option("--out", config.out_path, "Write the report here instead of stdout");
}

bool write_file(const std::string& path, const std::string& contents) {
  std::ofstream f(path, std::ios::binary);
  f << contents;
  return static_cast<bool>(f);
}

}  // namespace

int main(int argc, char** argv) {
  ghzframe::RunConfig config;
  std::string format = "json";
  std::string adversary = "none";
  std::string strategy = "ghz";
  std::string eavesdropper = "off";
  int drop_constraint = 0;

  CLI::App app{"Reference-frame-free GHZ game simulator"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "Check state identities, constants and invariances");
  add_common(verify, config, format);
  verify->add_flag("--corrupt", config.corrupt, "Flip one sign in an identity (self-test; must fail)");
  verify->add_flag("--tables", config.tables, "Include the derived measurement tables in the report");

  auto* play = app.add_subcommand("play", "Play rounds of the parity game");
  add_common(play, config, format);
  play->add_option("--strategy", strategy)
      ->check(CLI::IsMember({"classical-best", "ghz", "frame-free"}))
      ->capture_default_str();
  play->add_option("--adversary", adversary)
      ->check(CLI::IsMember({"none", "scramble_one", "scramble_all", "scramble-one", "scramble-all"}))
      ->capture_default_str();
  play->add_option("--transcripts", config.transcripts_path, "Per-measurement CSV (frame-free only)");

  auto* bound = app.add_subcommand("bound", "Exact classical bound by exhaustive search");
  add_common(bound, config, format);
  bound->add_option("--game", config.game)->check(CLI::IsMember({"vaidman", "apples"}))->capture_default_str();

  auto* bell = app.add_subcommand("bell", "Predefined-values consistency check");
  add_common(bell, config, format);
  bell->add_option("--drop-constraint", drop_constraint, "Ignore constraint K (1..4: ZZZ, ZXX, XZX, XXZ)")
      ->check(CLI::Range(1, 4));

  auto* tasks = app.add_subcommand("tasks", "Apples parity task or secret sharing");
  add_common(tasks, config, format);
  tasks->add_option("--task", config.task)
      ->check(CLI::IsMember({"apples", "apples-frame-free", "secret-share"}))
      ->capture_default_str();
  tasks->add_option("--adversary", adversary)
      ->check(CLI::IsMember({"none", "scramble_one", "scramble_all", "scramble-one", "scramble-all"}))
      ->capture_default_str();
  tasks->add_option("--eavesdropper", eavesdropper)
      ->check(CLI::IsMember({"off", "intercept-resend", "intercept_resend"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : ghzframe::kExitUsage;
  }

  config.command = app.get_subcommands().front()->get_name();
  config.format = ghzframe::parse_format(format);
  config.adversary = ghzframe::parse_adversary(adversary);
  config.strategy = ghzframe::parse_strategy(strategy);
  config.eavesdropper = ghzframe::parse_eavesdropper(eavesdropper);
  if (drop_constraint != 0) config.drop_constraint = drop_constraint;

  ghzframe::CommandResult result;
  try {
    result = ghzframe::run_command(config);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return ghzframe::kExitCheckFailed;
  }

  if (result.exit_code == ghzframe::kExitUsage) {
    std::cerr << result.output;
    return result.exit_code;
  }
  for (const auto& [path, contents] : result.files) {
    if (!write_file(path, contents)) {
      std::cerr << "error: cannot write " << path << "\n";
      return ghzframe::kExitUsage;
    }
  }
  if (config.out_path.empty()) {
    std::cout << result.output;
  } else if (!write_file(config.out_path, result.output)) {
    std::cerr << "error: cannot write " << config.out_path << "\n";
    return ghzframe::kExitUsage;
  }
  return result.exit_code;
}
