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

// Termination probability, the exhaustive reduction oracle, and executable
// checks of the confluence, standardization and normalization properties.

#ifndef QLAMBDA_ANALYSIS_HPP
#define QLAMBDA_ANALYSIS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qlambda/generator.hpp"
#include "qlambda/program.hpp"
#include "qlambda/rewrite.hpp"

namespace qlambda {

double snf_mass(const Engine& engine, const MultiDistribution& m);

struct ConvergenceReport {
  std::vector<std::pair<std::size_t, double>> pr_curve;
  double limit_estimate = 0.0;
  bool stable = false;  // stopped by normalization or plateau, not by the step cap
  StopReason reason = StopReason::MaxSteps;
};

/// Runs the leftmost scheduler in `mode` and reports the Pr curve.
ConvergenceReport estimate_limit(const Engine& engine, const Program& p, Mode mode,
                                 std::size_t max_steps, double delta = 1e-9,
                                 std::size_t window = 8);
std::string pr_curve_csv(const ConvergenceReport& r);

struct OracleGuard {
  std::size_t max_nodes = 20000;       // per depth
  std::size_t max_schedules = 20000;   // per node
  std::size_t max_term_size = 64;
};

struct OracleLevel {
  std::vector<MultiDistribution> frontier;  // distinct as multisets, uncoalesced
  std::vector<MultiDistribution> distinct;  // coalesced, distinct under mdist_eq
};

/// Every multidistribution reachable in exactly k steps, for k = 0..depth.
/// Throws GuardError when a guard trips.
std::vector<OracleLevel> oracle_tree(const Engine& engine, const MultiDistribution& m0,
                                     std::size_t depth, Mode mode, const OracleGuard& guard = {});

/// Multiset equality without coalescing.
bool mdist_same(const MultiDistribution& a, const MultiDistribution& b);

struct PropertyVerdict {
  std::string property;
  std::size_t tried = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t inconclusive = 0;
  std::size_t skipped = 0;  // precondition unmet or guard tripped
  std::vector<nlohmann::json> counterexamples;

  void absorb(const PropertyVerdict& one);
  bool ok() const { return failed == 0; }
  nlohmann::json to_json() const;
};

PropertyVerdict check_pointed_diamond(const Engine& engine, const Program& p);
PropertyVerdict check_random_descent(const Engine& engine, const Program& p, std::size_t depth,
                                     const OracleGuard& guard = {});
/// Draws a random general sequence of `k` steps from `p` and searches, up to
/// 2k+4 steps, for surface steps followed by non-surface steps reaching the
/// same multidistribution.
PropertyVerdict check_factorization(const Engine& engine, const Program& p, std::size_t k,
                                    std::uint64_t seed, const OracleGuard& guard = {});
/// Same search for a given general sequence from `p`.
PropertyVerdict check_factorization_of(const Engine& engine, const Program& p,
                                       const std::vector<Schedule>& sequence,
                                       const OracleGuard& guard = {});
PropertyVerdict check_asymptotic_completeness(const Engine& engine, const MultiDistribution& m,
                                              std::size_t d, std::size_t D,
                                              const OracleGuard& guard = {});

/// Replaces closed register-free subterms by smaller ones while `fails`
/// keeps holding.
Program shrink(const Program& p, const std::function<bool(const Program&)>& fails);

struct SuiteConfig {
  std::size_t count = 100;
  std::size_t size = 12;
  std::uint64_t seed = 1;
  Profile profile = Profile::Mixed;
};

PropertyVerdict diamond_suite(const Engine& engine, const SuiteConfig& cfg);
PropertyVerdict random_descent_suite(const Engine& engine, const SuiteConfig& cfg,
                                     std::size_t depth = 6);
PropertyVerdict factorization_suite(const Engine& engine, const SuiteConfig& cfg,
                                    std::size_t max_k = 4);
PropertyVerdict completeness_suite(const Engine& engine, const SuiteConfig& cfg,
                                   std::size_t d = 3, std::size_t D = 9);

PropertyVerdict norm_suite(const Engine& engine, const SuiteConfig& cfg);
PropertyVerdict mass_suite(const Engine& engine, const SuiteConfig& cfg);
PropertyVerdict validity_suite(const Engine& engine, const SuiteConfig& cfg);
PropertyVerdict nonsurface_state_suite(const Engine& engine, const SuiteConfig& cfg);
PropertyVerdict shape_suite(const Engine& engine, const SuiteConfig& cfg);
PropertyVerdict substitutivity_suite(const Engine& engine, const SuiteConfig& cfg);
/// The thirteen commutation identities between qubit creation, gates,
/// projections and outcome probabilities, on random states of at most five
/// qubits.
PropertyVerdict commutation_suite(const SuiteConfig& cfg);
std::vector<PropertyVerdict> invariant_suites(const Engine& engine, const SuiteConfig& cfg);

}  // namespace qlambda

#endif  // QLAMBDA_ANALYSIS_HPP
