#pragma once

// Three-player Z/X parity game: referee, classical and quantum strategies,
// a lab-disorienting adversary, the exact classical bound, and the
// predefined-values (hidden variable) consistency check.

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ghzframe/core.hpp"
#include "ghzframe/parallel.hpp"
#include "ghzframe/protocols.hpp"
#include "ghzframe/rng.hpp"
#include "ghzframe/states.hpp"

namespace ghzframe {

enum class Question : std::uint8_t { Z, X };

struct QuestionSet {
  std::array<Question, 3> q;

  std::string str() const {
    std::string s;
    for (auto x : q) s += x == Question::Z ? 'Z' : 'X';
    return s;
  }
  std::size_t z_count() const {
    return static_cast<std::size_t>(std::count(q.begin(), q.end(), Question::Z));
  }
  friend bool operator==(const QuestionSet&, const QuestionSet&) = default;
};

/// The referee only ever asks ZZZ, ZXX, XZX or XXZ.
inline constexpr std::array<QuestionSet, 4> kLegalQuestionSets = {{
    {{Question::Z, Question::Z, Question::Z}},
    {{Question::Z, Question::X, Question::X}},
    {{Question::X, Question::Z, Question::X}},
    {{Question::X, Question::X, Question::Z}},
}};

inline bool is_legal(const QuestionSet& qs) {
  return std::find(kLegalQuestionSets.begin(), kLegalQuestionSets.end(), qs) != kLegalQuestionSets.end();
}

inline QuestionSet parse_question_set(std::string_view text) {
  if (text.size() != 3) throw std::invalid_argument("question set must have 3 letters");
  QuestionSet qs{};
  for (std::size_t i = 0; i < 3; ++i) {
    if (text[i] != 'Z' && text[i] != 'X') throw std::invalid_argument("questions are Z or X");
    qs.q[i] = text[i] == 'Z' ? Question::Z : Question::X;
  }
  if (!is_legal(qs)) throw std::invalid_argument("illegal question set " + std::string(text));
  return qs;
}

using Answers = std::array<int, 3>;

/// ZZZ: odd number of 0 answers. One Z and two X: even number of 0 answers.
inline bool team_wins(const QuestionSet& qs, const Answers& answers) {
  if (!is_legal(qs)) throw std::invalid_argument("team_wins: illegal question set " + qs.str());
  const int zeros = static_cast<int>(std::count(answers.begin(), answers.end(), 0));
  return qs.z_count() == 3 ? zeros % 2 == 1 : zeros % 2 == 0;
}

/// Uniform over the four legal question sets.
inline QuestionSet referee_draw(RngStream& rng) { return kLegalQuestionSets[rng.below(4)]; }

// ---------------------------------------------------------------------------
// Classical strategies

struct ClassicalStrategy {
  std::array<std::array<int, 2>, 3> reply{};  // [player][0 = Z, 1 = X]

  int answer(std::size_t player, Question q) const { return reply[player][q == Question::Z ? 0 : 1]; }

  /// Bits 2p and 2p+1 of `index` are player p's answers to Z and X.
  static ClassicalStrategy from_index(unsigned index) {
    ClassicalStrategy s;
    for (std::size_t p = 0; p < 3; ++p) {
      s.reply[p][0] = static_cast<int>(index >> (2 * p) & 1u);
      s.reply[p][1] = static_cast<int>(index >> (2 * p + 1) & 1u);
    }
    return s;
  }

  unsigned index() const {
    unsigned idx = 0;
    for (std::size_t p = 0; p < 3; ++p) {
      idx |= static_cast<unsigned>(reply[p][0]) << (2 * p);
      idx |= static_cast<unsigned>(reply[p][1]) << (2 * p + 1);
    }
    return idx;
  }

  /// Everyone answers 1 to Z and 0 to X.
  static ClassicalStrategy simple() { return ClassicalStrategy{{{{1, 0}, {1, 0}, {1, 0}}}}; }

  /// e.g. "Z1X0 Z1X0 Z1X0"
  std::string str() const {
    std::string s;
    for (std::size_t p = 0; p < 3; ++p) {
      if (p) s += ' ';
      s += "Z" + std::to_string(reply[p][0]) + "X" + std::to_string(reply[p][1]);
    }
    return s;
  }
};

inline constexpr unsigned kClassicalStrategyCount = 64;

/// Number of the four legal question sets the strategy wins.
inline unsigned classical_wins(const ClassicalStrategy& s) {
  unsigned wins = 0;
  for (const auto& qs : kLegalQuestionSets) {
    Answers a{};
    for (std::size_t p = 0; p < 3; ++p) a[p] = s.answer(p, qs.q[p]);
    wins += team_wins(qs, a) ? 1 : 0;
  }
  return wins;
}

struct ExactFraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  static ExactFraction reduced(std::uint64_t n, std::uint64_t d) {
    const auto g = std::gcd(n, d);
    return g == 0 ? ExactFraction{0, 1} : ExactFraction{n / g, d / g};
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  friend bool operator==(const ExactFraction&, const ExactFraction&) = default;
};

struct ClassicalBound {
  ExactFraction best;
  std::vector<ClassicalStrategy> maximizers;
};

/// Exhausts the 64 deterministic joint strategies. Shared randomness mixes
/// deterministic strategies, so its win probability is an average of these
/// values and cannot exceed their maximum.
inline ClassicalBound classical_bound_bruteforce() {
  ClassicalBound bound;
  unsigned best = 0;
  for (unsigned i = 0; i < kClassicalStrategyCount; ++i) {
    const auto s = ClassicalStrategy::from_index(i);
    const unsigned w = classical_wins(s);
    if (w > best) {
      best = w;
      bound.maximizers.clear();
    }
    if (w == best) bound.maximizers.push_back(s);
  }
  bound.best = ExactFraction::reduced(best, kLegalQuestionSets.size());
  return bound;
}

// ---------------------------------------------------------------------------
// Adversary

enum class Adversary : std::uint8_t { none, scramble_one, scramble_all };

constexpr std::string_view to_string(Adversary a) {
  switch (a) {
    case Adversary::none: return "none";
    case Adversary::scramble_one: return "scramble_one";
    case Adversary::scramble_all: return "scramble_all";
  }
  return "?";
}

/// Accepts "scramble_one" and "scramble-one" alike.
inline Adversary parse_adversary(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), '-', '_');
  for (auto a : {Adversary::none, Adversary::scramble_one, Adversary::scramble_all}) {
    if (to_string(a) == s) return a;
  }
  throw std::invalid_argument("unknown adversary: " + std::string(text));
}

/// A rigid rotation of one player's lab: `u` acts on every qubit the player
/// holds.
struct Scramble {
  std::size_t player;  // 0-based
  Qubit1Unitary u;
};

/// scramble_one disorients one uniformly chosen player; scramble_all draws an
/// independent Haar unitary for each player.
inline std::vector<Scramble> draw_scrambles(Adversary adversary, RngStream& rng) {
  std::vector<Scramble> out;
  if (adversary == Adversary::scramble_one) {
    const auto player = static_cast<std::size_t>(rng.below(3));
    out.push_back({player, haar_random_unitary(rng)});
  } else if (adversary == Adversary::scramble_all) {
    for (std::size_t p = 0; p < 3; ++p) out.push_back({p, haar_random_unitary(rng)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Trials

enum class StrategyKind : std::uint8_t { classical_best, ghz, frame_free };

constexpr std::string_view to_string(StrategyKind s) {
  switch (s) {
    case StrategyKind::classical_best: return "classical-best";
    case StrategyKind::ghz: return "ghz";
    case StrategyKind::frame_free: return "frame-free";
  }
  return "?";
}

inline StrategyKind parse_strategy(std::string_view text) {
  for (auto s : {StrategyKind::classical_best, StrategyKind::ghz, StrategyKind::frame_free}) {
    if (to_string(s) == text) return s;
  }
  throw std::invalid_argument("unknown strategy: " + std::string(text));
}

struct TrialRecord {
  QuestionSet questions{};
  Answers answers{};
  bool win = false;
  StrategyKind strategy = StrategyKind::classical_best;
  Adversary adversary = Adversary::none;
  std::uint64_t seed = 0;
  std::vector<Scramble> scrambles;
  std::vector<LogicalOutcome> transcripts;  // per player, frame-free only
};

/// Classical players hold no quantum resources, so the adversary has nothing
/// to act on.
inline TrialRecord play_classical(const ClassicalStrategy& strategy, const QuestionSet& questions,
                                  RngStream& rng) {
  TrialRecord r;
  r.questions = questions;
  r.strategy = StrategyKind::classical_best;
  r.seed = rng.seed();
  for (std::size_t p = 0; p < 3; ++p) r.answers[p] = strategy.answer(p, questions.q[p]);
  r.win = team_wins(questions, r.answers);
  return r;
}

/// Shared GHZ triple; each player measures z or x on his qubit and answers
/// with the outcome bit.
inline TrialRecord play_ghz(const QuestionSet& questions, RngStream& rng, Adversary adversary) {
  TrialRecord r;
  r.questions = questions;
  r.strategy = StrategyKind::ghz;
  r.adversary = adversary;
  r.seed = rng.seed();
  r.scrambles = draw_scrambles(adversary, rng);

  StateVector state = named(StateName::ghz);
  for (const auto& s : r.scrambles) state = apply_local(std::move(state), s.u, s.player + 1);
  const auto identity = Qubit1Unitary::identity();
  for (std::size_t p = 0; p < 3; ++p) {
    const auto basis = questions.q[p] == Question::Z ? BasisName::z : BasisName::x;
    auto [bit, post] = detail::measure_in_basis(std::move(state), p + 1, basis, identity, rng);
    r.answers[p] = bit;
    state = std::move(post);
  }
  r.win = team_wins(questions, r.answers);
  return r;
}

/// Shared 12-qubit state; each player runs the logical Z or X protocol on his
/// four qubits. Works whatever rotation the adversary applied to each lab.
inline TrialRecord play_frame_free(const QuestionSet& questions, RngStream& rng, Adversary adversary) {
  TrialRecord r;
  r.questions = questions;
  r.strategy = StrategyKind::frame_free;
  r.adversary = adversary;
  r.seed = rng.seed();
  r.scrambles = draw_scrambles(adversary, rng);

  StateVector state = named(StateName::psi12);
  for (const auto& s : r.scrambles) state = apply_collective(std::move(state), s.u, kPlayerBlocks[s.player]);
  for (std::size_t p = 0; p < 3; ++p) {
    const auto which = questions.q[p] == Question::Z ? LogicalBasis::Z : LogicalBasis::X;
    auto m = measure_logical(std::move(state), kPlayerBlocks[p], which, rng);
    r.answers[p] = m.outcome.answer;
    r.transcripts.push_back(std::move(m.outcome));
    state = std::move(m.post);
  }
  r.win = team_wins(questions, r.answers);
  return r;
}

/// Trial `index` of a run seeded with `seed`: the referee's draw and the
/// strategy share the trial's private stream.
inline TrialRecord play_trial(StrategyKind strategy, Adversary adversary, std::uint64_t seed,
                              std::uint64_t index) {
  RngStream rng(trial_seed(seed, index));
  const auto questions = referee_draw(rng);
  switch (strategy) {
    case StrategyKind::classical_best: {
      auto r = play_classical(ClassicalStrategy::simple(), questions, rng);
      r.adversary = adversary;
      return r;
    }
    case StrategyKind::ghz: return play_ghz(questions, rng, adversary);
    case StrategyKind::frame_free: return play_frame_free(questions, rng, adversary);
  }
  throw std::logic_error("unreachable");
}

struct GameSummary {
  StrategyKind strategy;
  Adversary adversary;
  std::uint64_t n_trials = 0;
  std::uint64_t wins = 0;
  std::uint64_t seed = 0;
  std::vector<TrialRecord> records;  // filled only when requested

  double win_rate() const { return n_trials ? static_cast<double>(wins) / static_cast<double>(n_trials) : 0.0; }
};

inline GameSummary run_games(StrategyKind strategy, Adversary adversary, std::uint64_t n_trials,
                             std::uint64_t seed, bool keep_records = false) {
  auto records = parallel_map(n_trials, [&](std::size_t i) { return play_trial(strategy, adversary, seed, i); });
  GameSummary summary{strategy, adversary, n_trials, 0, seed, {}};
  for (const auto& r : records) summary.wins += r.win ? 1 : 0;
  if (keep_records) summary.records = std::move(records);
  return summary;
}

// ---------------------------------------------------------------------------
// Predefined values

/// Outcome of assigning fixed bits to (Z1, Z2, Z3, X1, X2, X3) and testing
/// them against the parity constraint of each legal question set.
struct HiddenVariableReport {
  static constexpr std::size_t kAssignments = 64;

  std::array<bool, 4> active{};  // constraints taken into account
  std::size_t satisfying = 0;
  std::vector<unsigned> satisfying_assignments;
  std::array<std::size_t, 4> per_constraint{};  // assignments satisfying each constraint alone
  std::array<std::array<bool, 4>, kAssignments> matrix{};  // [assignment][constraint]
};

/// Assignment bit layout, most significant first: Z1 Z2 Z3 X1 X2 X3.
inline int assigned_value(unsigned assignment, std::size_t player, Question q) {
  const unsigned shift = (q == Question::Z ? 5u : 2u) - static_cast<unsigned>(player);
  return static_cast<int>(assignment >> shift & 1u);
}

/// Counts assignments that satisfy every active constraint. `dropped` (0..3,
/// in the order ZZZ, ZXX, XZX, XXZ) removes one constraint.
inline HiddenVariableReport hidden_variable_check(std::optional<std::size_t> dropped = {}) {
  if (dropped && *dropped >= kLegalQuestionSets.size()) {
    throw std::out_of_range("hidden_variable_check: constraint index out of range");
  }
  HiddenVariableReport report;
  for (std::size_t c = 0; c < 4; ++c) report.active[c] = dropped != c;
  for (unsigned a = 0; a < HiddenVariableReport::kAssignments; ++a) {
    bool all = true;
    for (std::size_t c = 0; c < 4; ++c) {
      const auto& qs = kLegalQuestionSets[c];
      Answers ans{};
      for (std::size_t p = 0; p < 3; ++p) ans[p] = assigned_value(a, p, qs.q[p]);
      const bool ok = team_wins(qs, ans);
      report.matrix[a][c] = ok;
      report.per_constraint[c] += ok ? 1 : 0;
      if (report.active[c] && !ok) all = false;
    }
    if (all) {
      ++report.satisfying;
      report.satisfying_assignments.push_back(a);
    }
  }
  return report;
}

}  // namespace ghzframe
