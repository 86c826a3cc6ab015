#pragma once

// Subcommands of the ghzframe command-line tool. Each takes a RunConfig and
// returns the rendered report plus an exit code, so they can be driven
// in-process by tests; tools/ghzframe.cpp only parses flags and writes files.
//
// Exit codes: 0 success, 1 a check failed, 2 usage error.

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "ghzframe/games.hpp"
#include "ghzframe/report.hpp"
#include "ghzframe/states.hpp"
#include "ghzframe/tasks.hpp"

namespace ghzframe {

enum class OutputFormat : std::uint8_t { json, csv, human };

inline OutputFormat parse_format(std::string_view text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  if (text == "human") return OutputFormat::human;
  throw std::invalid_argument("unknown format: " + std::string(text));
}

inline constexpr std::uint64_t kDefaultSeed = 20031;

struct RunConfig {
  std::string command;
  std::uint64_t trials = 0;  // 0 selects the command's default
  std::uint64_t seed = kDefaultSeed;
  Adversary adversary = Adversary::none;
  OutputFormat format = OutputFormat::json;
  std::string out_path;

  // verify
  bool corrupt = false;
  bool tables = false;
  // play
  StrategyKind strategy = StrategyKind::ghz;
  std::string transcripts_path;
  // bound
  std::string game = "vaidman";
  // bell; 1-based, in the order ZZZ, ZXX, XZX, XXZ
  std::optional<int> drop_constraint;
  // tasks
  std::string task = "apples";
  Eavesdropper eavesdropper = Eavesdropper::off;
};

struct CommandResult {
  int exit_code = 0;
  std::string output;
  std::map<std::string, std::string> files;  // path -> contents
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

inline CommandResult usage_error(const std::string& message) { return {kExitUsage, "error: " + message + "\n", {}}; }

inline std::uint64_t trials_or(const RunConfig& c, std::uint64_t fallback) { return c.trials ? c.trials : fallback; }

}  // namespace detail

/// Every identity, constant and invariance check; exit 0 iff all pass.
inline CommandResult cmd_verify(const RunConfig& config) {
  if (config.format == OutputFormat::csv) return detail::usage_error("verify has no csv output");
  const std::uint64_t trials = detail::trials_or(config, 100);

  std::vector<std::pair<std::string, DecompositionReport>> groups = {
      {"decompositions", verify_decompositions(config.corrupt)},
      {"local_expansions", verify_local_expansions()},
      {"constants", verify_constants()},
      {"apples_rotations", verify_apples_rotations()},
  };
  std::vector<InvarianceReport> invariance;
  std::uint64_t stream = 0;
  for (auto name : {StateName::phi0, StateName::phi1, StateName::psi0, StateName::psi1}) {
    RngStream rng(trial_seed(config.seed, stream++));
    invariance.push_back(verify_u4_invariance(name, trials, rng));
  }
  {
    RngStream rng(trial_seed(config.seed, stream++));
    invariance.push_back(verify_psi12_invariance(trials, rng));
  }

  std::optional<std::string> first_failure;
  for (const auto& [group, report] : groups) {
    for (const auto& c : report.checks) {
      if (!c.passed && !first_failure) first_failure = c.name;
    }
  }
  for (const auto& r : invariance) {
    if (!r.passed() && !first_failure) first_failure = r.name;
  }
  const int code = first_failure ? kExitCheckFailed : kExitOk;

  if (config.format == OutputFormat::human) {
    std::ostringstream out;
    for (const auto& [group, report] : groups) {
      out << group << ":\n";
      for (const auto& c : report.checks) {
        out << "  " << (c.passed ? "PASS " : "FAIL ") << c.name << "  fidelity=" << c.fidelity << "\n";
      }
    }
    out << "invariance:\n";
    for (const auto& r : invariance) {
      out << "  " << (r.passed() ? "PASS " : "FAIL ") << r.name << "  min_fidelity=" << r.min_fidelity
          << " over " << r.trials << " draws\n";
    }
    out << (first_failure ? "FAILED: " + *first_failure : std::string("all checks passed")) << "\n";
    return {code, out.str(), {}};
  }

  json j;
  for (const auto& [group, report] : groups) j[group] = to_json(report);
  json inv = json::array();
  for (const auto& r : invariance) inv.push_back(to_json(r));
  j["invariance"] = inv;
  j["trials"] = trials;
  j["seed"] = config.seed;
  j["corrupted"] = config.corrupt;
  j["passed"] = !first_failure;
  j["first_failure"] = first_failure ? json(*first_failure) : json(nullptr);
  if (config.tables) {
    j["logical_z_table"] = to_json(LogicalZTable::standard());
    j["decision_tree"] = to_json(DecisionTree::standard());
  }
  return {code, detail::dump(j), {}};
}

/// n_trials rounds of the parity game with the chosen strategy.
inline CommandResult cmd_play(const RunConfig& config) {
  const std::uint64_t trials = detail::trials_or(config, 10'000);
  const bool want_records = config.format == OutputFormat::csv || !config.transcripts_path.empty();
  if (!config.transcripts_path.empty() && config.strategy != StrategyKind::frame_free) {
    return detail::usage_error("--transcripts needs --strategy frame-free");
  }
  const auto summary = run_games(config.strategy, config.adversary, trials, config.seed, want_records);

  CommandResult result;
  if (!config.transcripts_path.empty()) result.files[config.transcripts_path] = transcripts_csv(summary);
  switch (config.format) {
    case OutputFormat::json: result.output = detail::dump(to_json(summary)); break;
    case OutputFormat::csv: result.output = trials_csv(summary); break;
    case OutputFormat::human: {
      std::ostringstream out;
      out << to_string(summary.strategy) << " vs adversary " << to_string(summary.adversary) << ": "
          << summary.wins << "/" << summary.n_trials << " wins (" << summary.win_rate() << ")\n";
      result.output = out.str();
    } break;
  }
  return result;
}

/// Exact classical bounds by exhaustive search.
inline CommandResult cmd_bound(const RunConfig& config) {
  if (config.format == OutputFormat::csv) return detail::usage_error("bound has no csv output");
  json j;
  if (config.game == "vaidman") {
    j = to_json(classical_bound_bruteforce());
  } else if (config.game == "apples") {
    j = to_json(apples_classical_bound());
  } else {
    return detail::usage_error("unknown game " + config.game);
  }
  if (config.format == OutputFormat::human) {
    std::ostringstream out;
    out << config.game << " classical bound: " << j["bound"].get<std::string>() << "\n";
    return {kExitOk, out.str(), {}};
  }
  return {kExitOk, detail::dump(j), {}};
}

/// Predefined values for the six logical observables against the four parity
/// constraints.
inline CommandResult cmd_bell(const RunConfig& config) {
  std::optional<std::size_t> dropped;
  if (config.drop_constraint) {
    if (*config.drop_constraint < 1 || *config.drop_constraint > 4) {
      return detail::usage_error("--drop-constraint takes 1..4");
    }
    dropped = static_cast<std::size_t>(*config.drop_constraint - 1);
  }
  const auto report = hidden_variable_check(dropped);
  switch (config.format) {
    case OutputFormat::json: return {kExitOk, detail::dump(to_json(report)), {}};
    case OutputFormat::csv: {
      std::ostringstream out;
      out << "assignment,Z1,Z2,Z3,X1,X2,X3,ZZZ,ZXX,XZX,XXZ\n";
      for (unsigned a = 0; a < HiddenVariableReport::kAssignments; ++a) {
        out << a;
        for (int bit = 5; bit >= 0; --bit) out << ',' << (a >> bit & 1u);
        for (bool ok : report.matrix[a]) out << ',' << (ok ? 1 : 0);
        out << '\n';
      }
      return {kExitOk, out.str(), {}};
    }
    case OutputFormat::human: {
      std::ostringstream out;
      out << report.satisfying << " of " << HiddenVariableReport::kAssignments
          << " assignments satisfy every active constraint\n";
      return {kExitOk, out.str(), {}};
    }
  }
  return {kExitOk, {}, {}};
}

/// Apples (shared-frame or frame-free) or secret sharing.
inline CommandResult cmd_tasks(const RunConfig& config) {
  if (config.format == OutputFormat::csv) return detail::usage_error("tasks has no csv output");
  json j;
  if (config.task == "apples" || config.task == "apples-frame-free") {
    const bool frame_free = config.task == "apples-frame-free";
    if (!frame_free && config.adversary != Adversary::none) {
      return detail::usage_error("the shared-frame apples protocol has no adversary model");
    }
    j = to_json(run_apples(frame_free, config.adversary, detail::trials_or(config, 100), config.seed));
  } else if (config.task == "secret-share") {
    j = to_json(secret_share(detail::trials_or(config, 100'000), config.seed, config.adversary, config.eavesdropper));
  } else {
    return detail::usage_error("unknown task " + config.task);
  }
  if (config.format == OutputFormat::human) {
    std::ostringstream out;
    out << config.task << ": success_rate=" << j["success_rate"].get<double>();
    if (!j["qber"].is_null()) out << " qber=" << j["qber"].get<double>() << " sift_rate=" << j["sift_rate"].get<double>();
    out << "\n";
    return {kExitOk, out.str(), {}};
  }
  return {kExitOk, detail::dump(j), {}};
}

inline CommandResult run_command(const RunConfig& config) {
  try {
    if (config.command == "verify") return cmd_verify(config);
    if (config.command == "play") return cmd_play(config);
    if (config.command == "bound") return cmd_bound(config);
    if (config.command == "bell") return cmd_bell(config);
    if (config.command == "tasks") return cmd_tasks(config);
  } catch (const std::invalid_argument& e) {
    return detail::usage_error(e.what());
  }
  return detail::usage_error("unknown command " + config.command);
}

}  // namespace ghzframe
