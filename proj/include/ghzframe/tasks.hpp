#pragma once

// Applications of the shared three-party states beyond the parity game:
// the apples parity task (one bit of communication per helper) and logical
// secret sharing.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "ghzframe/core.hpp"
#include "ghzframe/games.hpp"
#include "ghzframe/parallel.hpp"
#include "ghzframe/protocols.hpp"
#include "ghzframe/rng.hpp"
#include "ghzframe/states.hpp"

namespace ghzframe {

// ---------------------------------------------------------------------------
// Apples

/// Apple counts in half-apple units: each player holds 0, 1/2, 1 or 3/2
/// apples and the total is an integer.
struct AppleAllotment {
  std::array<int, 3> halves{};

  static AppleAllotment make(int a, int b, int c) {
    const AppleAllotment x{{a, b, c}};
    if (!x.legal()) {
      throw std::invalid_argument("illegal apple allotment " + x.str());
    }
    return x;
  }

  bool legal() const {
    const bool in_range = std::all_of(halves.begin(), halves.end(), [](int h) { return h >= 0 && h <= 3; });
    return in_range && (halves[0] + halves[1] + halves[2]) % 2 == 0;
  }

  /// 0 if the total number of apples is even, 1 if odd.
  int parity() const { return ((halves[0] + halves[1] + halves[2]) / 2) % 2; }

  /// e.g. "1/2,1/2,1"
  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < 3; ++i) {
      if (i) s += ',';
      const int h = halves[i];
      s += h % 2 == 0 ? std::to_string(h / 2) : std::to_string(h) + "/2";
    }
    return s;
  }

  friend bool operator==(const AppleAllotment&, const AppleAllotment&) = default;
};

/// All 32 legal allotments in lexicographic order of half-units.
inline std::vector<AppleAllotment> all_allotments() {
  std::vector<AppleAllotment> out;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        if ((a + b + c) % 2 == 0) out.push_back(AppleAllotment{{a, b, c}});
  return out;
}

inline Complex apple_phase(int halves) {
  return std::polar(1.0, static_cast<double>(halves) * std::numbers::pi / 2.0);
}

/// |y0><y0| + e^{i n pi} |y1><y1| for n = halves / 2 apples.
inline Qubit1Unitary phase_rotation(int halves) {
  const auto& y0 = ket(BasisName::y, 0);
  const auto& y1 = ket(BasisName::y, 1);
  const Complex ph = apple_phase(halves);
  std::array<Complex, 4> m{};
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t c = 0; c < 2; ++c) m[2 * r + c] = y0[r] * std::conj(y0[c]) + ph * y1[r] * std::conj(y1[c]);
  return Qubit1Unitary::from_entries(m);
}

inline StateVector rotated_ghz(const AppleAllotment& allotment) {
  StateVector s = named(StateName::ghz);
  for (std::size_t p = 0; p < 3; ++p) s = apply_local(std::move(s), phase_rotation(allotment.halves[p]), p + 1);
  return s;
}

/// The rotated GHZ state is GHZ for an even total and GHZperp for an odd one;
/// one check per legal allotment, to fidelity 1 - 1e-12.
inline DecompositionReport verify_apples_rotations() {
  DecompositionReport report;
  for (const auto& a : all_allotments()) {
    const auto target = a.parity() == 0 ? StateName::ghz : StateName::ghz_perp;
    const double f = fidelity(named(target), rotated_ghz(a));
    report.checks.push_back({"R(" + a.str() + ")GHZ = " + std::string(to_string(target)), f, f >= 1.0 - kExactTol});
  }
  return report;
}

/// For each three-bit z outcome (qubit 1 most significant): 0 if it lies in
/// the support of GHZ, 1 if in the support of GHZperp. Derived from the two
/// states' amplitudes; throws if the supports overlap or miss a string.
inline const std::array<int, 8>& ghz_parity_table() {
  static const std::array<int, 8> table = [] {
    std::array<int, 8> t{};
    const auto& even = named(StateName::ghz);
    const auto& odd = named(StateName::ghz_perp);
    for (std::size_t i = 0; i < 8; ++i) {
      const bool in_even = std::abs(even[i]) > kAccumulatedTol;
      const bool in_odd = std::abs(odd[i]) > kAccumulatedTol;
      if (in_even == in_odd) throw std::logic_error("GHZ and GHZperp supports do not partition the outcomes");
      t[i] = in_even ? 0 : 1;
    }
    return t;
  }();
  return table;
}

inline int classify_parity(const std::array<int, 3>& bits) {
  return ghz_parity_table()[static_cast<std::size_t>(bits[0] * 4 + bits[1] * 2 + bits[2])];
}

struct ApplesTrial {
  AppleAllotment allotment;
  std::array<int, 3> bits{};  // z outcomes, or logical Z answers in the frame-free variant
  int guess = 0;
  bool correct = false;
  std::uint64_t seed = 0;
};

/// Each player rotates his GHZ qubit by phase_rotation(n_j) and measures z;
/// Bob and Charlie send their bits and Alice reads the parity off the three
/// bits.
inline ApplesTrial apples_quantum(const AppleAllotment& allotment, RngStream& rng) {
  if (!allotment.legal()) throw std::invalid_argument("illegal apple allotment " + allotment.str());
  ApplesTrial t{allotment, {}, 0, false, rng.seed()};
  StateVector s = rotated_ghz(allotment);
  const auto identity = Qubit1Unitary::identity();
  for (std::size_t p = 0; p < 3; ++p) {
    auto [bit, post] = detail::measure_in_basis(std::move(s), p + 1, BasisName::z, identity, rng);
    t.bits[p] = bit;
    s = std::move(post);
  }
  t.guess = classify_parity(t.bits);
  t.correct = t.guess == allotment.parity();
  return t;
}

/// Logical counterpart of phase_rotation on a four-qubit block:
/// |eta0><eta0| + e^{i n pi} |eta1><eta1| + identity off span{eta0, eta1}.
inline StateVector apply_logical_rotation(StateVector state, int halves, const Block& block) {
  return apply_rank_one_update(std::move(state), named(StateName::eta1), apple_phase(halves) - 1.0, block);
}

/// The same task on the 12-qubit state: logical rotations, then the
/// adversary's lab rotations, then logical Z on every block.
inline ApplesTrial apples_frame_free(const AppleAllotment& allotment, RngStream& rng, Adversary adversary) {
  if (!allotment.legal()) throw std::invalid_argument("illegal apple allotment " + allotment.str());
  ApplesTrial t{allotment, {}, 0, false, rng.seed()};
  StateVector s = named(StateName::psi12);
  for (std::size_t p = 0; p < 3; ++p) s = apply_logical_rotation(std::move(s), allotment.halves[p], kPlayerBlocks[p]);
  for (const auto& sc : draw_scrambles(adversary, rng)) s = apply_collective(std::move(s), sc.u, kPlayerBlocks[sc.player]);
  for (std::size_t p = 0; p < 3; ++p) {
    auto m = measure_logical_Z(std::move(s), kPlayerBlocks[p], rng);
    t.bits[p] = m.outcome.answer;
    s = std::move(m.post);
  }
  t.guess = classify_parity(t.bits);
  t.correct = t.guess == allotment.parity();
  return t;
}

struct ApplesSummary {
  bool frame_free = false;
  Adversary adversary = Adversary::none;
  std::uint64_t trials_per_allotment = 0;
  std::uint64_t n_trials = 0;
  std::uint64_t correct = 0;
  std::uint64_t allotments_all_correct = 0;
  std::uint64_t seed = 0;

  double success_rate() const { return n_trials ? static_cast<double>(correct) / static_cast<double>(n_trials) : 0.0; }
};

/// Runs every legal allotment `trials_per_allotment` times. Trial t of
/// allotment k uses seed index k * trials_per_allotment + t.
inline ApplesSummary run_apples(bool frame_free, Adversary adversary, std::uint64_t trials_per_allotment,
                                std::uint64_t seed) {
  const auto allotments = all_allotments();
  const std::uint64_t n = allotments.size() * trials_per_allotment;
  auto trials = parallel_map(n, [&](std::size_t i) {
    RngStream rng(trial_seed(seed, i));
    const auto& a = allotments[i / trials_per_allotment];
    return frame_free ? apples_frame_free(a, rng, adversary) : apples_quantum(a, rng);
  });
  ApplesSummary s{frame_free, adversary, trials_per_allotment, n, 0, 0, seed};
  for (std::size_t k = 0; k < allotments.size(); ++k) {
    bool all = true;
    for (std::uint64_t t = 0; t < trials_per_allotment; ++t) {
      const bool ok = trials[k * trials_per_allotment + t].correct;
      s.correct += ok ? 1 : 0;
      all = all && ok;
    }
    s.allotments_all_correct += all ? 1 : 0;
  }
  return s;
}

struct ApplesBound {
  ExactFraction best;
  std::uint64_t allotments = 0;
};

/// Best classical success probability when Bob and Charlie each send
/// `message_bits` bits that depend only on their own apples. For fixed
/// message functions, Alice's optimal guess in each (n_A, m_B, m_C) cell is
/// the majority parity of the allotments landing there, so only the message
/// functions are enumerated. `domain` lists the allowed half-unit counts.
inline ApplesBound apples_classical_bound(std::span<const int> domain, unsigned message_bits = 1) {
  std::vector<std::array<std::size_t, 3>> allotments;  // indices into domain
  std::vector<int> parities;
  for (std::size_t a = 0; a < domain.size(); ++a)
    for (std::size_t b = 0; b < domain.size(); ++b)
      for (std::size_t c = 0; c < domain.size(); ++c) {
        const int total = domain[a] + domain[b] + domain[c];
        if (total % 2 != 0) continue;
        allotments.push_back({a, b, c});
        parities.push_back((total / 2) % 2);
      }

  const std::size_t d = domain.size();
  const std::size_t messages = std::size_t{1} << message_bits;
  std::size_t functions = 1;
  for (std::size_t i = 0; i < d; ++i) functions *= messages;

  auto message = [&](std::size_t fn, std::size_t value) {
    for (std::size_t i = 0; i < value; ++i) fn /= messages;
    return fn % messages;
  };

  std::uint64_t best = 0;
  std::vector<std::array<std::uint64_t, 2>> cells(d * messages * messages);
  for (std::size_t fb = 0; fb < functions; ++fb) {
    for (std::size_t fc = 0; fc < functions; ++fc) {
      std::fill(cells.begin(), cells.end(), std::array<std::uint64_t, 2>{0, 0});
      for (std::size_t k = 0; k < allotments.size(); ++k) {
        const auto& [a, b, c] = allotments[k];
        const std::size_t cell = (a * messages + message(fb, b)) * messages + message(fc, c);
        ++cells[cell][static_cast<std::size_t>(parities[k])];
      }
      std::uint64_t correct = 0;
      for (const auto& cnt : cells) correct += std::max(cnt[0], cnt[1]);
      best = std::max(best, correct);
    }
  }
  return {ExactFraction::reduced(best, allotments.size()), allotments.size()};
}

inline constexpr std::array<int, 4> kAppleHalves = {0, 1, 2, 3};

inline ApplesBound apples_classical_bound() { return apples_classical_bound(kAppleHalves, 1); }

// ---------------------------------------------------------------------------
// Secret sharing

enum class Eavesdropper : std::uint8_t { off, intercept_resend };

constexpr std::string_view to_string(Eavesdropper e) {
  return e == Eavesdropper::off ? "off" : "intercept_resend";
}

inline Eavesdropper parse_eavesdropper(std::string_view text) {
  std::string s(text);
  std::replace(s.begin(), s.end(), '-', '_');
  if (s == "off") return Eavesdropper::off;
  if (s == "intercept_resend") return Eavesdropper::intercept_resend;
  throw std::invalid_argument("unknown eavesdropper: " + std::string(text));
}

struct SecretShareRound {
  std::uint64_t id = 0;
  std::array<LogicalBasis, 3> bases{};  // Alice, Bob, Charlie
  Answers answers{};
  bool kept = false;
  bool intercepted = false;
  LogicalBasis eve_basis = LogicalBasis::Z;
};

/// Alice's bit as Bob and Charlie reconstruct it together from their own
/// bits and the public basis choices of a kept round.
inline int infer_alice_bit(const std::array<LogicalBasis, 3>& bases, int bob, int charlie) {
  const bool all_z = std::all_of(bases.begin(), bases.end(), [](auto b) { return b == LogicalBasis::Z; });
  return bob ^ charlie ^ (all_z ? 0 : 1);
}

inline QuestionSet as_question_set(const std::array<LogicalBasis, 3>& bases) {
  QuestionSet qs{};
  for (std::size_t p = 0; p < 3; ++p) qs.q[p] = bases[p] == LogicalBasis::Z ? Question::Z : Question::X;
  return qs;
}

/// One round: share Psi12, let the adversary rotate labs and the
/// eavesdropper (if any) measure Alice's block collectively in a random
/// logical basis, then every party measures a uniformly chosen logical
/// observable with the single-qubit protocols.
inline SecretShareRound secret_share_round(std::uint64_t id, RngStream& rng, Adversary adversary,
                                           Eavesdropper eavesdropper) {
  SecretShareRound round;
  round.id = id;
  StateVector s = named(StateName::psi12);
  for (const auto& sc : draw_scrambles(adversary, rng)) s = apply_collective(std::move(s), sc.u, kPlayerBlocks[sc.player]);
  if (eavesdropper == Eavesdropper::intercept_resend) {
    round.intercepted = true;
    round.eve_basis = rng.bit() ? LogicalBasis::X : LogicalBasis::Z;
    s = measure_logical_oracle(s, kPlayerBlocks[0], round.eve_basis, rng).post;
  }
  for (std::size_t p = 0; p < 3; ++p) round.bases[p] = rng.bit() ? LogicalBasis::X : LogicalBasis::Z;
  for (std::size_t p = 0; p < 3; ++p) {
    auto m = measure_logical(std::move(s), kPlayerBlocks[p], round.bases[p], rng);
    round.answers[p] = m.outcome.answer;
    s = std::move(m.post);
  }
  round.kept = is_legal(as_question_set(round.bases));
  return round;
}

struct SecretShareResult {
  std::uint64_t n_rounds = 0;
  std::uint64_t n_kept = 0;
  std::uint64_t n_sample = 0;
  std::uint64_t sample_errors = 0;
  std::uint64_t key_matches = 0;
  std::uint64_t seed = 0;
  Adversary adversary = Adversary::none;
  Eavesdropper eavesdropper = Eavesdropper::off;
  std::vector<int> alice_key;     // kept rounds outside the check sample
  std::vector<int> bob_bits;      // Bob's raw bits on the same rounds
  std::vector<int> charlie_bits;  // Charlie's raw bits on the same rounds
  std::vector<int> joint_key;     // Bob + Charlie reconstruction
  std::vector<SecretShareRound> rounds;

  double sift_rate() const { return n_rounds ? static_cast<double>(n_kept) / static_cast<double>(n_rounds) : 0.0; }
  double qber() const { return n_sample ? static_cast<double>(sample_errors) / static_cast<double>(n_sample) : 0.0; }
  double reconstruction_rate() const {
    return alice_key.empty() ? 1.0 : static_cast<double>(key_matches) / static_cast<double>(alice_key.size());
  }
};

/// Fraction of kept rounds disclosed to estimate the error rate.
inline constexpr double kQberSampleFraction = 0.25;

/// Rounds are sifted to the four legal basis combinations. A random quarter
/// of the kept rounds (rounded up) is disclosed to estimate the QBER, the
/// disagreement between Alice's bit and the Bob + Charlie reconstruction;
/// the rest form the key. Round i uses seed index i; the sample is drawn
/// from seed index n_rounds.
inline SecretShareResult secret_share(std::uint64_t n_rounds, std::uint64_t seed, Adversary adversary,
                                      Eavesdropper eavesdropper, bool keep_rounds = false) {
  if (n_rounds == 0) throw std::invalid_argument("secret_share: need at least one round");
  auto rounds = parallel_map(n_rounds, [&](std::size_t i) {
    RngStream rng(trial_seed(seed, i));
    return secret_share_round(i, rng, adversary, eavesdropper);
  });

  SecretShareResult out;
  out.n_rounds = n_rounds;
  out.seed = seed;
  out.adversary = adversary;
  out.eavesdropper = eavesdropper;

  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < rounds.size(); ++i)
    if (rounds[i].kept) kept.push_back(i);
  out.n_kept = kept.size();

  RngStream sampler(trial_seed(seed, n_rounds));
  std::vector<std::size_t> order = kept;
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[sampler.below(i)]);
  const auto n_sample = static_cast<std::size_t>(std::ceil(kQberSampleFraction * static_cast<double>(kept.size())));
  std::vector<bool> in_sample(rounds.size(), false);
  for (std::size_t i = 0; i < n_sample; ++i) in_sample[order[i]] = true;
  out.n_sample = n_sample;

  for (auto i : kept) {
    const auto& r = rounds[i];
    const int joint = infer_alice_bit(r.bases, r.answers[1], r.answers[2]);
    if (in_sample[i]) {
      out.sample_errors += joint != r.answers[0] ? 1 : 0;
    } else {
      out.alice_key.push_back(r.answers[0]);
      out.bob_bits.push_back(r.answers[1]);
      out.charlie_bits.push_back(r.answers[2]);
      out.joint_key.push_back(joint);
      out.key_matches += joint == r.answers[0] ? 1 : 0;
    }
  }
  if (keep_rounds) out.rounds = std::move(rounds);
  return out;
}

/// Packs bits MSB-first into lowercase hex; the last nibble is zero-padded.
inline std::string bits_to_hex(const std::vector<int>& bits) {
  static constexpr char digits[] = "0123456789abcdef";
  std::string out;
  for (std::size_t i = 0; i < bits.size(); i += 4) {
    int nibble = 0;
    for (std::size_t j = 0; j < 4; ++j) nibble = nibble * 2 + (i + j < bits.size() ? bits[i + j] : 0);
    out += digits[nibble];
  }
  return out;
}

}  // namespace ghzframe
