#pragma once

// Logical measurements on a four-qubit block using only single-qubit
// projective measurements.
//
//  * Logical Z (phi0 vs phi1): fixed bases z, z, x, x on the four qubits.
//  * Logical X (psi0 vs psi1): z on qubit 1 and x on qubit 2, then a basis on
//    qubit 3 chosen from those two results and a basis on qubit 4 chosen from
//    all three.
//
// Both classification tables are derived numerically from the states
// themselves when first used, never transcribed by hand.

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghzframe/core.hpp"
#include "ghzframe/rng.hpp"
#include "ghzframe/states.hpp"

namespace ghzframe {

enum class LogicalBasis : std::uint8_t { Z, X };

constexpr char logical_letter(LogicalBasis b) { return b == LogicalBasis::Z ? 'Z' : 'X'; }

/// Four qubit positions (1-based) forming one player's block.
using Block = std::array<std::size_t, 4>;

struct TranscriptEntry {
  std::size_t qubit;
  BasisName basis;
  int outcome;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

struct LogicalOutcome {
  int answer;                             // 0: phi0 / psi0, 1: phi1 / psi1
  std::vector<TranscriptEntry> transcript;  // empty for the collective oracle
};

struct LogicalMeasurement {
  LogicalOutcome outcome;
  StateVector post;
};

enum class RootOrder : std::uint8_t { z_first, x_first };

struct ProtocolOptions {
  /// Orientation of the measuring lab: every basis ket k is replaced by
  /// frame * k.
  Qubit1Unitary frame = Qubit1Unitary::identity();
  /// Order of the two non-adaptive measurements of the logical X protocol.
  RootOrder root_order = RootOrder::z_first;
};

namespace detail {

inline std::size_t local_index(std::span<const int> bits) {
  std::size_t idx = 0;
  for (int b : bits) idx = idx * 2 + static_cast<std::size_t>(b);
  return idx;
}

inline Complex product_amplitude(const StateVector& s, const std::array<BasisName, 4>& bases,
                                 const std::array<int, 4>& bits) {
  return inner_product(tensor(ket(bases[0], bits[0]), ket(bases[1], bits[1]), ket(bases[2], bits[2]),
                              ket(bases[3], bits[3])),
                       s);
}

}  // namespace detail

/// Answer of the fixed-basis logical Z protocol for each of the 16
/// transcripts (z, z, x, x), indexed by the outcome bits read as a binary
/// number with qubit 1 most significant.
struct LogicalZTable {
  std::array<int, 16> answer{};

  /// Assigns each transcript to the only one of {s0, s1} with nonzero
  /// amplitude on it. Throws std::logic_error if the bases do not separate
  /// the two states.
  static LogicalZTable derive(const StateVector& s0, const StateVector& s1) {
    constexpr std::array<BasisName, 4> bases = {BasisName::z, BasisName::z, BasisName::x, BasisName::x};
    LogicalZTable table;
    for (std::size_t t = 0; t < 16; ++t) {
      const std::array<int, 4> bits = {int(t >> 3 & 1), int(t >> 2 & 1), int(t >> 1 & 1), int(t & 1)};
      const bool in0 = std::abs(detail::product_amplitude(s0, bases, bits)) > kAccumulatedTol;
      const bool in1 = std::abs(detail::product_amplitude(s1, bases, bits)) > kAccumulatedTol;
      if (in0 == in1) throw std::logic_error("LogicalZTable: transcript " + std::to_string(t) + " not separated");
      table.answer[t] = in0 ? 0 : 1;
    }
    return table;
  }

  static const LogicalZTable& standard() {
    static const LogicalZTable t = derive(named(StateName::phi0), named(StateName::phi1));
    return t;
  }
};

/// The adaptive psi0/psi1 protocol. `root` = 2 * z_outcome + x_outcome.
struct DecisionTree {
  std::array<BasisName, 4> third{};    // by root
  std::array<BasisName, 8> fourth{};   // by 2 * root + third outcome
  std::array<int, 16> verdict{};       // by 2 * (2 * root + third) + fourth outcome

  BasisName third_basis(int z, int x) const { return third[2 * z + x]; }
  BasisName fourth_basis(int z, int x, int b3) const { return fourth[2 * (2 * z + x) + b3]; }
  int verdict_for(int z, int x, int b3, int b4) const { return verdict[2 * (2 * (2 * z + x) + b3) + b4]; }

  /// Searches the candidate bases for the unique assignment under which
  /// every complete transcript has nonzero amplitude in exactly one of
  /// {s0, s1}. Throws std::logic_error if none or more than one exists.
  static DecisionTree derive(const StateVector& s0, const StateVector& s1) {
    constexpr std::array<BasisName, 2> third_candidates = {BasisName::a, BasisName::b};
    constexpr std::array<BasisName, 4> fourth_candidates = {BasisName::c, BasisName::d, BasisName::e,
                                                            BasisName::f};
    DecisionTree tree;
    for (int z = 0; z < 2; ++z) {
      for (int x = 0; x < 2; ++x) {
        int found = 0;
        for (auto b3 : third_candidates) {
          std::array<BasisName, 2> leaves{};
          std::array<std::array<int, 2>, 2> verdicts{};
          bool ok = true;
          for (int o3 = 0; o3 < 2 && ok; ++o3) {
            int separating = 0;
            for (auto b4 : fourth_candidates) {
              std::array<int, 2> v{};
              bool separates = true;
              for (int o4 = 0; o4 < 2; ++o4) {
                const std::array<BasisName, 4> bases = {BasisName::z, BasisName::x, b3, b4};
                const std::array<int, 4> bits = {z, x, o3, o4};
                const bool in0 = std::abs(detail::product_amplitude(s0, bases, bits)) > kAccumulatedTol;
                const bool in1 = std::abs(detail::product_amplitude(s1, bases, bits)) > kAccumulatedTol;
                if (in0 == in1) separates = false;
                v[o4] = in0 ? 0 : 1;
              }
              if (separates) {
                ++separating;
                leaves[o3] = b4;
                verdicts[o3] = v;
              }
            }
            if (separating > 1) throw std::logic_error("DecisionTree: ambiguous fourth-qubit basis");
            ok = separating == 1;
          }
          if (!ok) continue;
          ++found;
          const int root = 2 * z + x;
          tree.third[root] = b3;
          for (int o3 = 0; o3 < 2; ++o3) {
            tree.fourth[2 * root + o3] = leaves[o3];
            for (int o4 = 0; o4 < 2; ++o4) tree.verdict[2 * (2 * root + o3) + o4] = verdicts[o3][o4];
          }
        }
        if (found != 1) throw std::logic_error("DecisionTree: no unique third-qubit basis");
      }
    }
    return tree;
  }

  static const DecisionTree& standard() {
    static const DecisionTree t = derive(named(StateName::psi0), named(StateName::psi1));
    return t;
  }
};

namespace detail {

inline std::pair<int, StateVector> measure_in_basis(StateVector state, std::size_t qubit, BasisName basis,
                                                    const Qubit1Unitary& frame, RngStream& rng) {
  const auto& pair = basis_pair(basis);
  if (frame.entries() == Qubit1Unitary::identity().entries()) {
    return measure_qubit(std::move(state), qubit, pair.ket0, pair.ket1, rng);
  }
  return measure_qubit(std::move(state), qubit, frame.apply(pair.ket0), frame.apply(pair.ket1), rng);
}

inline ProjectiveObservable logical_observable(const Block& block, LogicalBasis which) {
  const bool z = which == LogicalBasis::Z;
  return ProjectiveObservable::create(
      {block.begin(), block.end()},
      {Projector{z ? "phi0" : "psi0", {named(z ? StateName::phi0 : StateName::psi0)}},
       Projector{z ? "phi1" : "psi1", {named(z ? StateName::phi1 : StateName::psi1)}}});
}

}  // namespace detail

/// Weight of `state` outside span{phi0, phi1} on `block`.
inline double logical_leakage(const StateVector& state, const Block& block) {
  const auto probs = outcome_probabilities(state, detail::logical_observable(block, LogicalBasis::Z));
  return std::max(0.0, 1.0 - probs[0] - probs[1]);
}

namespace detail {

inline void require_logical(const StateVector& state, const Block& block, const char* who) {
  const double leak = logical_leakage(state, block);
  if (leak > kAccumulatedTol) {
    throw MalformedState(std::string(who) + ": block carries weight " + std::to_string(leak) +
                         " outside the logical subspace");
  }
}

}  // namespace detail

/// phi0 vs phi1 by measuring the block's qubits in z, z, x, x (in order).
/// Throws MalformedState if the block is not in span{phi0, phi1}.
inline LogicalMeasurement measure_logical_Z(StateVector state, const Block& block, RngStream& rng,
                                            const ProtocolOptions& options = {}) {
  detail::require_logical(state, block, "measure_logical_Z");
  constexpr std::array<BasisName, 4> bases = {BasisName::z, BasisName::z, BasisName::x, BasisName::x};
  LogicalOutcome outcome;
  std::array<int, 4> bits{};
  StateVector s = std::move(state);
  for (std::size_t k = 0; k < 4; ++k) {
    auto [bit, post] = detail::measure_in_basis(std::move(s), block[k], bases[k], options.frame, rng);
    bits[k] = bit;
    s = std::move(post);
    outcome.transcript.push_back({block[k], bases[k], bit});
  }
  outcome.answer = LogicalZTable::standard().answer[detail::local_index(bits)];
  return {std::move(outcome), std::move(s)};
}

/// psi0 vs psi1 with the adaptive protocol of DecisionTree::standard().
/// Throws MalformedState if the block is not in span{psi0, psi1}.
inline LogicalMeasurement measure_logical_X(StateVector state, const Block& block, RngStream& rng,
                                            const ProtocolOptions& options = {}) {
  detail::require_logical(state, block, "measure_logical_X");
  const auto& tree = DecisionTree::standard();
  LogicalOutcome outcome;
  StateVector s = std::move(state);
  auto step = [&](std::size_t k, BasisName basis) {
    auto [bit, post] = detail::measure_in_basis(std::move(s), block[k], basis, options.frame, rng);
    s = std::move(post);
    outcome.transcript.push_back({block[k], basis, bit});
    return bit;
  };
  int z = 0, x = 0;
  if (options.root_order == RootOrder::z_first) {
    z = step(0, BasisName::z);
    x = step(1, BasisName::x);
  } else {
    x = step(1, BasisName::x);
    z = step(0, BasisName::z);
  }
  const int b3 = step(2, tree.third_basis(z, x));
  const int b4 = step(3, tree.fourth_basis(z, x, b3));
  outcome.answer = tree.verdict_for(z, x, b3, b4);
  return {std::move(outcome), std::move(s)};
}

/// Collective two-projector measurement of logical Z or X on the block;
/// the reference the single-qubit protocols are tested against.
inline LogicalMeasurement measure_logical_oracle(const StateVector& state, const Block& block,
                                                 LogicalBasis which, RngStream& rng) {
  auto r = measure(state, detail::logical_observable(block, which), rng);
  return {LogicalOutcome{static_cast<int>(r.index), {}}, std::move(r.post)};
}

inline LogicalMeasurement measure_logical(StateVector state, const Block& block, LogicalBasis which,
                                          RngStream& rng, const ProtocolOptions& options = {}) {
  return which == LogicalBasis::Z ? measure_logical_Z(std::move(state), block, rng, options)
                                  : measure_logical_X(std::move(state), block, rng, options);
}

/// Recomputes the answer from a four-entry transcript of either protocol.
inline int answer_from_transcript(const std::vector<TranscriptEntry>& t) {
  if (t.size() != 4) throw std::invalid_argument("answer_from_transcript: expected 4 entries");
  if (t[2].basis == BasisName::x) {
    const std::array<int, 4> bits = {t[0].outcome, t[1].outcome, t[2].outcome, t[3].outcome};
    return LogicalZTable::standard().answer[detail::local_index(bits)];
  }
  // Only the logical Z protocol measures qubit 3 in x. Logical X transcripts
  // may list qubit 2 before qubit 1.
  int z = 0, x = 0;
  for (std::size_t k = 0; k < 2; ++k) (t[k].basis == BasisName::z ? z : x) = t[k].outcome;
  return DecisionTree::standard().verdict_for(z, x, t[2].outcome, t[3].outcome);
}

}  // namespace ghzframe
