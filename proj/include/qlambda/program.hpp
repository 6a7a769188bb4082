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

#ifndef QLAMBDA_PROGRAM_HPP
#define QLAMBDA_PROGRAM_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlambda/quantum.hpp"
#include "qlambda/term.hpp"

namespace qlambda {

class ProgramError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A (memory, term) pair modulo register re-indexing, stored as its
/// canonical representative: register k is the k-th register met in
/// preorder, and the memory is permuted to match.
class Program {
 public:
  /// Validates and canonicalizes. Throws ProgramError when the term is
  /// invalid or its registers are not exactly {0..n-1} for an n-qubit state.
  Program(QuantumState state, Term term);

  /// Skips the validity check of the term (registers are still checked).
  /// Used by the engine, whose steps preserve validity.
  static Program trusted(QuantumState state, Term term);

  const QuantumState& state() const { return state_; }
  const Term& term() const { return term_; }

 private:
  struct Canonical {};
  Program(QuantumState state, Term term, Canonical);
  static Program canonical_form(QuantumState state, Term term);

  QuantumState state_;
  Term term_;
};

/// The canonical representative of (state, term).
Program canonicalize(const QuantumState& state, const Term& term);

/// Same canonical term and entrywise-equal state within kTolerance.
bool program_eq(const Program& a, const Program& b);

struct WeightedProgram {
  double weight = 0.0;
  Program program;
};

/// Finite multiset of weighted programs with total mass at most 1.
class MultiDistribution {
 public:
  MultiDistribution() = default;
  explicit MultiDistribution(std::vector<WeightedProgram> entries);

  static MultiDistribution singleton(Program p);

  const std::vector<WeightedProgram>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const WeightedProgram& operator[](std::size_t k) const { return entries_[k]; }

  double mass() const;

  /// Appends `scale * other`.
  void add_scaled(double scale, const MultiDistribution& other);
  void add(double weight, Program p);

 private:
  std::vector<WeightedProgram> entries_;
};

/// Merges entries holding program_eq programs, summing their weights.
MultiDistribution coalesce(const MultiDistribution& m);

/// Multiset equality after coalescing both sides, weights within kTolerance.
bool mdist_eq(const MultiDistribution& a, const MultiDistribution& b);

/// Hash invariant under coalescing and re-ordering (depends on terms only).
std::size_t mdist_bucket(const MultiDistribution& m);

}  // namespace qlambda

#endif  // QLAMBDA_PROGRAM_HPP
