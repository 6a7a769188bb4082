// Copyright 2026 The qlambda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "qlambda/analysis.hpp"
#include "qlambda/syntax.hpp"
#include "support.hpp"

using namespace qlambda;
using qt::Amps;
using qt::kS;
using qt::prog;
using qt::term;

namespace {

const char* kDelta = "(\\!x. meas(U[H] new, \\y. y, x !x))";
const char* kOmega = "(\\!x. x !x) !(\\!x. x !x)";
std::string coin() { return std::string(kDelta) + " !" + kDelta; }

// Brute force without any sharing: the largest snf mass over every schedule
// sequence of length at most d.
double brute_max_pr(const Engine& e, const MultiDistribution& m, std::size_t d, Mode mode) {
  double best = e.snf_mass(m);
  if (d == 0) return best;
  for (const auto& s : e.all_schedules(m, mode))
    best = std::max(best, brute_max_pr(e, e.lift_step(m, s, mode), d - 1, mode));
  return best;
}

bool contains(const std::vector<MultiDistribution>& set, const MultiDistribution& m) {
  return std::any_of(set.begin(), set.end(), [&](const MultiDistribution& x) { return mdist_eq(x, m); });
}

RedexOccurrence occurrence(const Engine& e, const Program& p, bool surface) {
  for (const auto& r : e.find_redexes(p))
    if (r.is_surface == surface) return r;
  throw std::runtime_error("no such redex");
}

}  // namespace

TEST(SnfMass, Examples) {
  Engine e;
  EXPECT_DOUBLE_EQ(snf_mass(e, MultiDistribution({{0.5, prog("\\y. y")}, {0.5, prog(coin())}})), 0.5);
  EXPECT_DOUBLE_EQ(snf_mass(e, MultiDistribution({{0.25, prog("\\y. y")}, {0.25, prog("\\y. y")},
                                                  {0.5, prog(coin())}})),
                   0.5);
  EXPECT_DOUBLE_EQ(snf_mass(e, MultiDistribution::singleton(prog(coin()))), 0.0);
}

TEST(SnfMass, CoinAfterTwoRounds) {
  Engine e;
  auto r = estimate_limit(e, prog(coin()), Mode::StrictSurface, 8, 1e-9, 100);
  EXPECT_NEAR(r.pr_curve.back().second, 0.75, 1e-12);
}

TEST(EstimateLimit, CoinApproachesOne) {
  Engine e;
  auto r = estimate_limit(e, prog(coin()), Mode::StrictSurface, 200);
  EXPECT_GE(r.limit_estimate, 1.0 - std::ldexp(1.0, -15));
  EXPECT_TRUE(r.stable);
  for (std::size_t k = 1; k < r.pr_curve.size(); ++k)
    EXPECT_GE(r.pr_curve[k].second, r.pr_curve[k - 1].second - 1e-9);
}

TEST(EstimateLimit, NormalFormIsConstantlyOne) {
  Engine e;
  for (Mode m : {Mode::General, Mode::Surface, Mode::StrictSurface}) {
    auto r = estimate_limit(e, prog("\\x. x"), m, 50);
    for (const auto& [step, pr] : r.pr_curve) EXPECT_EQ(pr, 1.0);
  }
}

TEST(EstimateLimit, LoopIsConstantlyZero) {
  Engine e;
  auto r = estimate_limit(e, prog(kOmega), Mode::StrictSurface, 50);
  for (const auto& [step, pr] : r.pr_curve) EXPECT_EQ(pr, 0.0);
  EXPECT_FALSE(r.stable);
  auto levels = oracle_tree(e, MultiDistribution::singleton(prog(kOmega)), 20, Mode::General);
  for (const auto& level : levels)
    for (const auto& m : level.distinct) EXPECT_EQ(e.snf_mass(m), 0.0);
}

TEST(EstimateLimit, CsvHasOneRowPerStep) {
  Engine e;
  auto r = estimate_limit(e, prog("(\\x. x) (\\y. y)"), Mode::StrictSurface, 10);
  EXPECT_EQ(pr_curve_csv(r), "step,pr\n0,0\n1,1\n");
}

TEST(Oracle, BothInterleavingsOfTwoAllocationsMeet) {
  Engine e;
  auto levels = oracle_tree(e, MultiDistribution::singleton(prog("<new, U[H] new>")), 3, Mode::Surface);
  ASSERT_EQ(levels.size(), 4u);
  EXPECT_EQ(levels[1].distinct.size(), 2u);
  ASSERT_EQ(levels[3].distinct.size(), 1u);
  Program expect(QuantumState(Amps{kS, kS, 0, 0}), term("<r0, r1>"));
  EXPECT_TRUE(mdist_eq(levels[3].distinct[0], MultiDistribution::singleton(expect)));
}

TEST(Oracle, NormalFormStaysASingleton) {
  Engine e;
  for (Mode m : {Mode::General, Mode::Surface, Mode::StrictSurface}) {
    auto levels = oracle_tree(e, MultiDistribution::singleton(prog("\\x. x")), 5, m);
    for (const auto& level : levels) EXPECT_EQ(level.distinct.size(), 1u);
  }
}

TEST(Oracle, StrictCoinIsDeterministicAfterOneRound) {
  Engine e;
  auto levels = oracle_tree(e, MultiDistribution::singleton(prog(coin())), 4, Mode::StrictSurface);
  EXPECT_EQ(levels[1].distinct.size(), 2u);
  ASSERT_EQ(levels[4].distinct.size(), 1u);
  EXPECT_TRUE(mdist_eq(levels[4].distinct[0], MultiDistribution({{0.5, prog("\\y. y")}, {0.5, prog(coin())}})));
}

TEST(Oracle, GuardTrips) {
  Engine e;
  OracleGuard tight;
  tight.max_term_size = 10;
  EXPECT_THROW(oracle_tree(e, MultiDistribution::singleton(prog(coin())), 2, Mode::General, tight), GuardError);
  OracleGuard few;
  few.max_nodes = 1;
  EXPECT_THROW(oracle_tree(e, MultiDistribution::singleton(prog("<new, U[H] new>")), 2, Mode::Surface, few),
               GuardError);
}

TEST(Oracle, ContainsTheLeftmostStrictRun) {
  Engine e;
  for (std::uint64_t k = 0; k < 100; ++k) {
    Program p = gen_program(12, split_seed(81, k), Profile::Mixed);
    auto levels = oracle_tree(e, MultiDistribution::singleton(p), 5, Mode::StrictSurface);
    LeftmostScheduler s;
    Trace t = run(e, MultiDistribution::singleton(p), Mode::StrictSurface, s, StopRule{5, 1e-9, 100});
    for (const auto& step : t.steps) EXPECT_TRUE(contains(levels[step.step].distinct, step.mdist));
  }
}

TEST(Oracle, FrontierKeepsCopiesThatCoalescingWouldMerge) {
  Engine e;
  Program p = prog("<(\\x. x) a, (\\y. y) b>");
  MultiDistribution m({{0.5, p}, {0.5, p}});
  auto levels = oracle_tree(e, m, 1, Mode::StrictSurface);
  // Each copy picks one of two redexes: three distinct multisets.
  EXPECT_EQ(levels[1].frontier.size(), 3u);
  EXPECT_EQ(levels[1].distinct.size(), 3u);
  EXPECT_TRUE(mdist_same(m, MultiDistribution({{0.5, p}, {0.5, p}})));
  EXPECT_FALSE(mdist_same(m, MultiDistribution::singleton(p)));
}

TEST(PointedDiamond, TwoAllocations) {
  Engine e;
  PropertyVerdict v = check_pointed_diamond(e, prog("<new, U[H] new>"));
  EXPECT_EQ(v.passed, 1u);
  EXPECT_EQ(v.failed, 0u);
}

TEST(PointedDiamond, EntangledIntermediate) {
  Engine e;
  Program p(QuantumState::basis(1, 0),
            term("let <x, y> = U[CNOT] <U[H] r0, new> in meas(y, \\z. z, \\z. z) x"));
  ASSERT_EQ(e.surface_redexes(p).size(), 2u);
  EXPECT_EQ(check_pointed_diamond(e, p).passed, 1u);
}

TEST(PointedDiamond, TwoMeasurements) {
  Engine e;
  std::mt19937_64 rng(8);
  Program p(QuantumState(qt::random_amps(2, rng)), term("<meas(r0, a, b), meas(r1, c, d)>"));
  EXPECT_EQ(check_pointed_diamond(e, p).passed, 1u);
}

TEST(PointedDiamond, SingleRedexIsSkipped) {
  Engine e;
  PropertyVerdict v = check_pointed_diamond(e, prog("(\\x. x) z"));
  EXPECT_EQ(v.skipped, 1u);
  EXPECT_EQ(v.passed, 0u);
}

TEST(RandomDescent, Coin) {
  Engine e;
  EXPECT_EQ(check_random_descent(e, prog(coin()), 6).passed, 1u);
}

TEST(RandomDescent, TwoAllocations) {
  Engine e;
  EXPECT_EQ(check_random_descent(e, prog("<new, U[H] new>"), 3).passed, 1u);
}

TEST(RandomDescent, DeterministicChain) {
  Engine e;
  EXPECT_EQ(check_random_descent(e, prog("(\\x. x (\\y. y)) (\\z. z)"), 4).passed, 1u);
}

TEST(Factorization, NonSurfaceStepMovesBehindSurfaceStep) {
  Engine e;
  Program p = prog("(\\!f. !f) !((\\y. y) z)");
  MultiDistribution m = MultiDistribution::singleton(p);
  Schedule inner{occurrence(e, p, false)};
  MultiDistribution m1 = e.lift_step(m, inner, Mode::General);
  Schedule outer{occurrence(e, m1[0].program, true)};
  EXPECT_EQ(check_factorization_of(e, p, {inner, outer}).passed, 1u);
}

TEST(Factorization, NonSurfaceStepThatBecomesSurface) {
  Engine e;
  Program p = prog("(\\!f. f) !((\\y. y) z)");
  MultiDistribution m = MultiDistribution::singleton(p);
  Schedule inner{occurrence(e, p, false)};
  MultiDistribution m1 = e.lift_step(m, inner, Mode::General);
  Schedule outer{occurrence(e, m1[0].program, true)};
  EXPECT_EQ(check_factorization_of(e, p, {inner, outer}).passed, 1u);
}

TEST(Factorization, AllSurfaceSequence) {
  Engine e;
  LeftmostScheduler s;
  Trace t = run(e, MultiDistribution::singleton(prog(coin())), Mode::StrictSurface, s, StopRule{4, 1e-9, 100});
  std::vector<Schedule> seq;
  for (std::size_t k = 1; k < t.steps.size(); ++k) seq.push_back(t.steps[k].schedule);
  PropertyVerdict v = check_factorization_of(e, prog(coin()), seq);
  EXPECT_EQ(v.passed, 1u) << v.to_json().dump();
}

TEST(Factorization, QuantumStepCommutesWithBoxedBeta) {
  Engine e;
  Program p = prog("(\\!f. U[H] new) !((\\y. y) z)");
  MultiDistribution m = MultiDistribution::singleton(p);
  Schedule beta{occurrence(e, p, false)};
  MultiDistribution m1 = e.lift_step(m, beta, Mode::General);
  RedexOccurrence q;
  for (const auto& r : e.find_redexes(m1[0].program))
    if (r.kind == RedexKind::QNew) q = r;
  EXPECT_EQ(check_factorization_of(e, p, {beta, Schedule{q}}).passed, 1u);
}

TEST(Factorization, RandomSequencesFromGeneratedPrograms) {
  Engine e;
  PropertyVerdict total;
  for (std::uint64_t k = 0; k < 100; ++k)
    total.absorb(check_factorization(e, gen_program(12, split_seed(91, k), Profile::BetaHeavy), 4, k));
  EXPECT_EQ(total.failed, 0u) << total.to_json().dump();
  EXPECT_EQ(total.inconclusive, 0u);
}

TEST(Completeness, CoinValues) {
  Engine e;
  MultiDistribution m = MultiDistribution::singleton(prog(coin()));
  EXPECT_NEAR(brute_max_pr(e, m, 4, Mode::General), 0.5, 1e-12);
  auto strict = estimate_limit(e, prog(coin()), Mode::StrictSurface, 8, 1e-9, 100);
  EXPECT_NEAR(strict.limit_estimate, 0.75, 1e-12);
  PropertyVerdict v = check_asymptotic_completeness(e, m, 4, 8);
  EXPECT_EQ(v.passed, 1u);
}

TEST(Completeness, NormalForm) {
  Engine e;
  EXPECT_EQ(check_asymptotic_completeness(e, MultiDistribution::singleton(prog("\\x. x")), 3, 3).passed, 1u);
}

TEST(Completeness, LoopingMixture) {
  Engine e;
  MultiDistribution m({{0.5, prog("(\\x. x) new")}, {0.5, prog(kOmega)}});
  EXPECT_LE(brute_max_pr(e, m, 2, Mode::General), 0.5 + 1e-12);
  LeftmostScheduler s;
  Trace t = run(e, m, Mode::StrictSurface, s, StopRule{4, 1e-9, 100});
  EXPECT_NEAR(t.last_pr(), 0.5, 1e-12);
  EXPECT_EQ(check_asymptotic_completeness(e, m, 2, 4).passed, 1u);
}

TEST(Completeness, OracleMaximumMatchesBruteForce) {
  Engine e;
  for (std::uint64_t k = 0; k < 40; ++k) {
    MultiDistribution m = MultiDistribution::singleton(gen_program(10, split_seed(93, k), Profile::Mixed));
    double oracle = 0.0;
    for (const auto& level : oracle_tree(e, m, 3, Mode::General))
      for (const auto& n : level.distinct) oracle = std::max(oracle, e.snf_mass(n));
    EXPECT_NEAR(oracle, brute_max_pr(e, m, 3, Mode::General), 1e-12);
  }
}

TEST(Shrink, KeepsTheFailureAndGetsSmaller) {
  Engine e;
  Program p = prog("(\\x. x (\\a. \\b. b a)) ((\\y. y) (\\c. c (\\d. d)))");
  auto fails = [&](const Program& c) { return !e.is_snf(c); };
  Program s = shrink(p, fails);
  EXPECT_TRUE(fails(s));
  EXPECT_LT(s.term().size(), p.term().size());
  EXPECT_TRUE(validate(s.term()).ok());
}

TEST(Shrink, LeavesRegistersAlone) {
  Program p = prog("<r0, (\\x. x) (\\y. y)>", QuantumState::basis(1, 0));
  Program s = shrink(p, [](const Program&) { return true; });
  EXPECT_EQ(registers(s.term()).size(), 1u);
  EXPECT_EQ(s.state().qubits(), 1u);
}

TEST(Verdict, JsonShape) {
  PropertyVerdict a;
  a.property = "p";
  a.tried = a.passed = 1;
  PropertyVerdict b = a;
  b.absorb(a);
  nlohmann::json j = b.to_json();
  EXPECT_EQ(j["property"], "p");
  EXPECT_EQ(j["tried"], 2);
  EXPECT_EQ(j["failed"], 0);
  EXPECT_TRUE(j["counterexamples"].is_array());
  EXPECT_TRUE(j.contains("inconclusive"));
}

TEST(Suites, SmallRunsPass) {
  Engine e;
  SuiteConfig cfg;
  cfg.count = 60;
  cfg.seed = 4242;
  for (const auto& v : {diamond_suite(e, cfg), random_descent_suite(e, cfg, 4), factorization_suite(e, cfg),
                        completeness_suite(e, cfg)}) {
    EXPECT_EQ(v.tried, 60u) << v.property;
    EXPECT_EQ(v.failed, 0u) << v.to_json().dump();
  }
  for (const auto& v : invariant_suites(e, cfg)) EXPECT_EQ(v.failed, 0u) << v.to_json().dump();
}

TEST(PrMonotonicity, StrictRunsNeverLoseNormalMass) {
  Engine e;
  for (std::uint64_t k = 0; k < 300; ++k) {
    RandomScheduler s(k);
    Trace t = run(e, MultiDistribution::singleton(gen_program(12, split_seed(97, k), Profile::Mixed)),
                  Mode::StrictSurface, s, StopRule{30, 1e-9, 100});
    for (std::size_t i = 1; i < t.steps.size(); ++i) EXPECT_GE(t.steps[i].pr_snf, t.steps[i - 1].pr_snf - 1e-9);
  }
}
