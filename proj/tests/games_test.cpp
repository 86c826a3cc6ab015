#include <gtest/gtest.h>

#include <set>

#include "oracle.hpp"
#include "ghzframe/games.hpp"

using namespace ghzframe;

namespace {

// Win rule restated with +-1 values m = 1 - 2a: ZZZ needs product +1, a set
// with two X questions needs product -1.
bool oracle_wins(const std::string& qs, const Answers& a) {
  int product = 1;
  for (int x : a) product *= 1 - 2 * x;
  return qs == "ZZZ" ? product == 1 : product == -1;
}

}  // namespace

TEST(Rules, WinConditionTruthTable) {
  for (const auto& qs : kLegalQuestionSets) {
    for (int bits = 0; bits < 8; ++bits) {
      const Answers a = {bits >> 2 & 1, bits >> 1 & 1, bits & 1};
      EXPECT_EQ(team_wins(qs, a), oracle_wins(qs.str(), a)) << qs.str() << bits;
    }
  }
}

TEST(Rules, IllegalQuestionsRejected) {
  EXPECT_THROW(parse_question_set("XXX"), std::invalid_argument);
  EXPECT_THROW(parse_question_set("ZZX"), std::invalid_argument);
  EXPECT_THROW(team_wins(QuestionSet{{Question::X, Question::X, Question::X}}, {0, 0, 0}), std::invalid_argument);
  EXPECT_EQ(parse_question_set("XZX"), kLegalQuestionSets[2]);
}

TEST(Rules, RefereeIsUniform) {
  RngStream rng(400);
  std::vector<double> counts(4, 0.0);
  for (int i = 0; i < 20000; ++i) {
    const auto qs = referee_draw(rng);
    for (std::size_t k = 0; k < 4; ++k)
      if (qs == kLegalQuestionSets[k]) counts[k] += 1.0;
  }
  EXPECT_GT(oracle::goodness_of_fit(counts, {0.25, 0.25, 0.25, 0.25}), 1e-3);
}

TEST(ClassicalBound, ExactlyThreeQuarters) {
  const auto bound = classical_bound_bruteforce();
  EXPECT_EQ(bound.best.num, 3u);
  EXPECT_EQ(bound.best.den, 4u);
  EXPECT_EQ(bound.best.str(), "3/4");
}

TEST(ClassicalBound, MaximizersMatchIndependentEnumeration) {
  // Enumerate the 64 answer tables directly and rescore each one.
  std::set<unsigned> oracle_best;
  int best = 0;
  for (unsigned t = 0; t < 64; ++t) {
    int wins = 0;
    for (const std::string qs : {"ZZZ", "ZXX", "XZX", "XXZ"}) {
      Answers a{};
      for (int p = 0; p < 3; ++p) a[p] = static_cast<int>(t >> (2 * p + (qs[p] == 'Z' ? 0 : 1)) & 1u);
      wins += oracle_wins(qs, a) ? 1 : 0;
    }
    if (wins > best) {
      best = wins;
      oracle_best.clear();
    }
    if (wins == best) oracle_best.insert(t);
  }
  EXPECT_EQ(best, 3);
  const auto bound = classical_bound_bruteforce();
  std::set<unsigned> got;
  for (const auto& s : bound.maximizers) {
    got.insert(s.index());
    EXPECT_EQ(classical_wins(s), 3u);
    EXPECT_EQ(ClassicalStrategy::from_index(s.index()).str(), s.str());
  }
  EXPECT_EQ(got, oracle_best);
  EXPECT_EQ(classical_wins(ClassicalStrategy::simple()), 3u);
}

TEST(ClassicalPlay, WinRateNearThreeQuarters) {
  const auto s = run_games(StrategyKind::classical_best, Adversary::none, 20000, 401);
  const double sigma = std::sqrt(0.75 * 0.25 / 20000.0);
  EXPECT_NEAR(s.win_rate(), 0.75, 4 * sigma);
}

TEST(GhzPlay, PerfectWithoutAdversary) {
  const auto s = run_games(StrategyKind::ghz, Adversary::none, 4000, 402);
  EXPECT_EQ(s.wins, s.n_trials);
}

TEST(GhzPlay, BrokenByLabRotation) {
  const auto one = run_games(StrategyKind::ghz, Adversary::scramble_one, 4000, 403);
  const auto all = run_games(StrategyKind::ghz, Adversary::scramble_all, 4000, 404);
  EXPECT_LT(one.win_rate(), 0.9);
  EXPECT_LT(all.win_rate(), 0.9);
}

TEST(FrameFreePlay, PerfectUnderEveryAdversary) {
  for (auto adv : {Adversary::none, Adversary::scramble_one, Adversary::scramble_all}) {
    const auto s = run_games(StrategyKind::frame_free, adv, 400, 405);
    EXPECT_EQ(s.wins, s.n_trials) << to_string(adv);
  }
}

TEST(FrameFreePlay, AnswersAreIndividuallyUnbiased) {
  // Each player's answer alone is a fair coin for every question set.
  const auto s = run_games(StrategyKind::frame_free, Adversary::scramble_all, 2000, 406, true);
  std::array<double, 3> ones{};
  for (const auto& r : s.records)
    for (std::size_t p = 0; p < 3; ++p) ones[p] += r.answers[p];
  const double sigma = std::sqrt(0.25 / 2000.0);
  for (double o : ones) EXPECT_NEAR(o / 2000.0, 0.5, 4 * sigma);
}

TEST(FrameFreePlay, TranscriptsReplayAnswers) {
  const auto s = run_games(StrategyKind::frame_free, Adversary::scramble_all, 200, 407, true);
  for (const auto& r : s.records) {
    ASSERT_EQ(r.transcripts.size(), 3u);
    for (std::size_t p = 0; p < 3; ++p) {
      EXPECT_EQ(answer_from_transcript(r.transcripts[p].transcript), r.answers[p]);
      EXPECT_EQ(r.transcripts[p].transcript.front().qubit, kPlayerBlocks[p][0]);
    }
  }
}

TEST(Trials, ReplayFromSeed) {
  for (auto strategy : {StrategyKind::classical_best, StrategyKind::ghz, StrategyKind::frame_free}) {
    const auto a = play_trial(strategy, Adversary::scramble_all, 9, 17);
    const auto b = play_trial(strategy, Adversary::scramble_all, 9, 17);
    EXPECT_EQ(a.questions, b.questions);
    EXPECT_EQ(a.answers, b.answers);
    EXPECT_EQ(a.seed, trial_seed(9, 17));
  }
  const auto x = run_games(StrategyKind::frame_free, Adversary::scramble_one, 300, 11, true);
  const auto y = run_games(StrategyKind::frame_free, Adversary::scramble_one, 300, 11, true);
  for (std::size_t i = 0; i < x.records.size(); ++i) EXPECT_EQ(x.records[i].answers, y.records[i].answers);
}

TEST(Adversary, ScrambleShapes) {
  RngStream rng(408);
  EXPECT_TRUE(draw_scrambles(Adversary::none, rng).empty());
  std::array<int, 3> hits{};
  for (int i = 0; i < 3000; ++i) {
    const auto one = draw_scrambles(Adversary::scramble_one, rng);
    ASSERT_EQ(one.size(), 1u);
    ++hits[one[0].player];
  }
  EXPECT_GT(oracle::goodness_of_fit({double(hits[0]), double(hits[1]), double(hits[2])}, {1 / 3.0, 1 / 3.0, 1 / 3.0}),
            1e-3);
  EXPECT_EQ(draw_scrambles(Adversary::scramble_all, rng).size(), 3u);
  EXPECT_EQ(parse_adversary("scramble-all"), Adversary::scramble_all);
  EXPECT_THROW(parse_adversary("all"), std::invalid_argument);
}

TEST(HiddenVariables, NoAssignmentSatisfiesAllFour) {
  const auto r = hidden_variable_check();
  EXPECT_EQ(r.satisfying, 0u);
  for (std::size_t c = 0; c < 4; ++c) EXPECT_EQ(r.per_constraint[c], 32u);
}

TEST(HiddenVariables, DroppingOneConstraint) {
  // Oracle: each constraint is one linear equation over GF(2) in six
  // unknowns. Any three are independent, so 2^(6-3) = 8 solutions remain;
  // all four sum to 0 = 1 and are inconsistent.
  for (std::size_t dropped = 0; dropped < 4; ++dropped) {
    unsigned count = 0;
    for (unsigned a = 0; a < 64; ++a) {
      const int z1 = a >> 5 & 1, z2 = a >> 4 & 1, z3 = a >> 3 & 1, x1 = a >> 2 & 1, x2 = a >> 1 & 1, x3 = a & 1;
      // Parity of the answer bits required by each set.
      const std::array<bool, 4> ok = {(z1 ^ z2 ^ z3) == 0, (z1 ^ x2 ^ x3) == 1, (x1 ^ z2 ^ x3) == 1,
                                      (x1 ^ x2 ^ z3) == 1};
      bool all = true;
      for (std::size_t c = 0; c < 4; ++c)
        if (c != dropped && !ok[c]) all = false;
      count += all ? 1 : 0;
    }
    const auto r = hidden_variable_check(dropped);
    EXPECT_EQ(r.satisfying, count);
    EXPECT_EQ(r.satisfying, 8u);
    for (unsigned a : r.satisfying_assignments) EXPECT_FALSE(r.matrix[a][dropped]);
  }
  EXPECT_THROW(hidden_variable_check(4), std::out_of_range);
}
