#pragma once

// JSON and CSV renderings of the library's reports. JSON objects use
// nlohmann::json's sorted keys, so equal reports serialize to equal bytes.

#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "ghzframe/games.hpp"
#include "ghzframe/protocols.hpp"
#include "ghzframe/rng.hpp"
#include "ghzframe/states.hpp"
#include "ghzframe/tasks.hpp"

namespace ghzframe {

using nlohmann::json;

inline json to_json(const IdentityCheck& c) {
  return {{"name", c.name}, {"fidelity", c.fidelity}, {"passed", c.passed}};
}

inline json to_json(const DecompositionReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) checks.push_back(to_json(c));
  return {{"checks", checks}, {"passed", r.all_passed()}};
}

inline json to_json(const InvarianceReport& r) {
  return {{"name", r.name},           {"trials", r.trials}, {"min_fidelity", r.min_fidelity},
          {"tolerance", r.tolerance}, {"passed", r.passed()}, {"seed", r.seed},
          {"rng", RngStream::algorithm}};
}

inline std::string basis_string(BasisName b) { return std::string(1, basis_letter(b)); }

inline json to_json(const DecisionTree& tree) {
  json branches = json::array();
  for (int z = 0; z < 2; ++z) {
    for (int x = 0; x < 2; ++x) {
      json node = {{"qubit1_z", z}, {"qubit2_x", x}, {"qubit3_basis", basis_string(tree.third_basis(z, x))}};
      json leaves = json::array();
      for (int b3 = 0; b3 < 2; ++b3) {
        const auto fourth = tree.fourth_basis(z, x, b3);
        leaves.push_back({{"qubit3_outcome", b3},
                          {"qubit4_basis", basis_string(fourth)},
                          {"verdict_on_0", tree.verdict_for(z, x, b3, 0) == 0 ? "psi0" : "psi1"},
                          {"verdict_on_1", tree.verdict_for(z, x, b3, 1) == 0 ? "psi0" : "psi1"}});
      }
      node["leaves"] = leaves;
      branches.push_back(node);
    }
  }
  return {{"protocol", "logical X (psi0 vs psi1)"}, {"branches", branches}};
}

inline json to_json(const LogicalZTable& table) {
  json rows = json::array();
  for (std::size_t t = 0; t < 16; ++t) {
    const std::string bits = {char('0' + (t >> 3 & 1)), char('0' + (t >> 2 & 1)), char('0' + (t >> 1 & 1)),
                              char('0' + (t & 1))};
    rows.push_back({{"outcomes_zzxx", bits}, {"verdict", table.answer[t] == 0 ? "phi0" : "phi1"}});
  }
  return {{"protocol", "logical Z (phi0 vs phi1)"}, {"transcripts", rows}};
}

inline std::string answers_string(const Answers& a) {
  return {char('0' + a[0]), char('0' + a[1]), char('0' + a[2])};
}

inline json to_json(const GameSummary& s) {
  return {{"strategy", to_string(s.strategy)},
          {"adversary", to_string(s.adversary)},
          {"n_trials", s.n_trials},
          {"wins", s.wins},
          {"win_rate", s.win_rate()},
          {"seed", s.seed},
          {"rng", RngStream::algorithm}};
}

/// One row per trial: trial,seed,questions,answers,win
inline std::string trials_csv(const GameSummary& s) {
  std::ostringstream out;
  out << "trial,seed,questions,answers,win\n";
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const auto& r = s.records[i];
    out << i << ',' << r.seed << ',' << r.questions.str() << ',' << answers_string(r.answers) << ','
        << (r.win ? 1 : 0) << '\n';
  }
  return out.str();
}

/// One row per single-qubit measurement: trial,block,qubit,basis,outcome.
/// Blocks are numbered 1..3; qubits are global positions 1..12.
inline std::string transcripts_csv(const GameSummary& s) {
  std::ostringstream out;
  out << "trial,block,qubit,basis,outcome\n";
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const auto& r = s.records[i];
    for (std::size_t b = 0; b < r.transcripts.size(); ++b) {
      for (const auto& e : r.transcripts[b].transcript) {
        out << i << ',' << b + 1 << ',' << e.qubit << ',' << basis_letter(e.basis) << ',' << e.outcome << '\n';
      }
    }
  }
  return out.str();
}

inline json to_json(const ClassicalBound& b) {
  json list = json::array();
  for (const auto& s : b.maximizers) list.push_back({{"index", s.index()}, {"strategy", s.str()}});
  return {{"game", "vaidman"},
          {"bound", b.best.str()},
          {"bound_value", b.best.value()},
          {"maximizer_count", b.maximizers.size()},
          {"maximizers", list},
          {"strategies_searched", kClassicalStrategyCount}};
}

inline json to_json(const ApplesBound& b) {
  return {{"game", "apples"},
          {"bound", b.best.str()},
          {"bound_value", b.best.value()},
          {"allotments", b.allotments}};
}

inline json to_json(const HiddenVariableReport& r) {
  json active = json::array();
  for (std::size_t c = 0; c < 4; ++c)
    if (r.active[c]) active.push_back(kLegalQuestionSets[c].str());
  json per = json::object();
  for (std::size_t c = 0; c < 4; ++c) per[kLegalQuestionSets[c].str()] = r.per_constraint[c];
  json matrix = json::array();
  for (const auto& row : r.matrix) {
    std::string bits;
    for (bool b : row) bits += b ? '1' : '0';
    matrix.push_back(bits);
  }
  return {{"assignments", HiddenVariableReport::kAssignments},
          {"variable_order", "Z1 Z2 Z3 X1 X2 X3"},
          {"constraint_order", "ZZZ ZXX XZX XXZ"},
          {"active_constraints", active},
          {"satisfying", r.satisfying},
          {"satisfying_assignments", r.satisfying_assignments},
          {"per_constraint", per},
          {"matrix", matrix}};
}

inline json to_json(const ApplesSummary& s) {
  return {{"task", "apples"},
          {"variant", s.frame_free ? "frame-free" : "shared-frame"},
          {"adversary", to_string(s.adversary)},
          {"n_trials", s.n_trials},
          {"trials_per_allotment", s.trials_per_allotment},
          {"allotments_all_correct", s.allotments_all_correct},
          {"correct", s.correct},
          {"success_rate", s.success_rate()},
          {"qber", nullptr},
          {"sift_rate", nullptr},
          {"seed", s.seed},
          {"rng", RngStream::algorithm}};
}

inline json to_json(const SecretShareResult& r) {
  return {{"task", "secret-share"},
          {"variant", std::string("eavesdropper=") + std::string(to_string(r.eavesdropper))},
          {"adversary", to_string(r.adversary)},
          {"n_trials", r.n_rounds},
          {"kept", r.n_kept},
          {"sample_size", r.n_sample},
          {"sample_errors", r.sample_errors},
          {"success_rate", r.reconstruction_rate()},
          {"qber", r.qber()},
          {"sift_rate", r.sift_rate()},
          {"key_length", r.alice_key.size()},
          {"alice_key_hex", bits_to_hex(r.alice_key)},
          {"joint_key_hex", bits_to_hex(r.joint_key)},
          {"seed", r.seed},
          {"rng", RngStream::algorithm}};
}

}  // namespace ghzframe
