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

#include "qlambda/program.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qlambda/syntax.hpp"

namespace qlambda {

Program::Program(QuantumState state, Term term, Canonical)
    : state_(std::move(state)), term_(std::move(term)) {}

Program Program::canonical_form(QuantumState state, Term term) {
  auto regs = register_occurrences(term);
  std::size_t n = state.qubits();
  if (regs.size() != n)
    throw ProgramError("program has " + std::to_string(regs.size()) + " register occurrences for " +
                       std::to_string(n) + " qubits");
  std::vector<std::size_t> order(regs.begin(), regs.end());
  std::vector<std::uint32_t> rename(n, 0);
  std::vector<bool> seen(n, false);
  bool identity = true;
  for (std::size_t k = 0; k < n; ++k) {
    if (order[k] >= n || seen[order[k]])
      throw ProgramError("registers must be exactly r0..r" + std::to_string(n == 0 ? 0 : n - 1) +
                         ", each once");
    seen[order[k]] = true;
    rename[order[k]] = static_cast<std::uint32_t>(k);
    identity = identity && order[k] == k;
  }
  if (identity) return Program(std::move(state), std::move(term), Canonical{});
  Term renamed = map_registers(term, [&](std::uint32_t r) { return rename[r]; });
  QuantumState permuted = permute_state(state, Permutation(std::move(order)));
  return Program(std::move(permuted), std::move(renamed), Canonical{});
}

Program::Program(QuantumState state, Term term) : Program(trusted(std::move(state), term)) {
  ValidityReport report = validate(term_);
  if (!report.ok()) throw ProgramError("invalid term: " + report.violations.front().message);
}

Program Program::trusted(QuantumState state, Term term) {
  if (term.empty()) throw ProgramError("program without a term");
  return canonical_form(std::move(state), std::move(term));
}

Program canonicalize(const QuantumState& state, const Term& term) { return Program(state, term); }

bool program_eq(const Program& a, const Program& b) {
  return a.term() == b.term() && a.state().approx_equal(b.state(), kTolerance);
}

MultiDistribution::MultiDistribution(std::vector<WeightedProgram> entries)
    : entries_(std::move(entries)) {
  for (const auto& e : entries_)
    if (!(e.weight > 0.0) || e.weight > 1.0 + kTolerance)
      throw std::invalid_argument("multidistribution weights must lie in (0,1]");
  if (mass() > 1.0 + kTolerance) throw std::invalid_argument("multidistribution mass exceeds 1");
}

MultiDistribution MultiDistribution::singleton(Program p) {
  return MultiDistribution({WeightedProgram{1.0, std::move(p)}});
}

double MultiDistribution::mass() const {
  double s = 0.0;
  for (const auto& e : entries_) s += e.weight;
  return s;
}

void MultiDistribution::add_scaled(double scale, const MultiDistribution& other) {
  for (const auto& e : other.entries_) entries_.push_back({scale * e.weight, e.program});
}

void MultiDistribution::add(double weight, Program p) { entries_.push_back({weight, std::move(p)}); }

MultiDistribution coalesce(const MultiDistribution& m) {
  std::vector<WeightedProgram> out;
  for (const auto& e : m.entries()) {
    bool merged = false;
    for (auto& o : out) {
      if (program_eq(o.program, e.program)) {
        o.weight += e.weight;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(e);
  }
  MultiDistribution r;
  for (auto& e : out) r.add(e.weight, std::move(e.program));
  return r;
}

bool mdist_eq(const MultiDistribution& a, const MultiDistribution& b) {
  MultiDistribution ca = coalesce(a), cb = coalesce(b);
  if (ca.size() != cb.size()) return false;
  std::vector<bool> used(cb.size(), false);
  for (const auto& e : ca.entries()) {
    bool matched = false;
    for (std::size_t k = 0; k < cb.size(); ++k) {
      if (used[k]) continue;
      if (std::abs(cb[k].weight - e.weight) <= kTolerance && program_eq(cb[k].program, e.program)) {
        used[k] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

std::size_t mdist_bucket(const MultiDistribution& m) {
  std::set<std::size_t> hashes;
  for (const auto& e : m.entries()) hashes.insert(e.program.term().hash());
  std::size_t h = 0xcbf29ce484222325ULL;
  for (std::size_t v : hashes) h = (h ^ v) * 0x100000001b3ULL;
  return h;
}

}  // namespace qlambda
