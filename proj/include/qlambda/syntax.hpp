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

#ifndef QLAMBDA_SYNTAX_HPP
#define QLAMBDA_SYNTAX_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qlambda/term.hpp"

namespace qlambda {

/// A surface position never enters a Bang body nor a Meas branch.
bool is_surface_path(const Position& pos);

struct Occurrence {
  Position pos;
  Term sub;
  bool is_surface = true;
};

/// Every subterm in preorder: fun before arg, subject before branches.
std::vector<Occurrence> enumerate_occurrences(const Term& t);

/// Throws std::out_of_range when the path leaves the AST.
const Term& subterm_at(const Term& t, const Position& pos);
bool is_valid_position(const Term& t, const Position& pos);

/// Rebuilds `t` with the subterm at `pos` replaced by `replacement`.
Term replace_at(const Term& t, const Position& pos, const Term& replacement);

std::set<std::string> free_vars(const Term& t);
std::map<std::string, std::size_t> free_var_counts(const Term& t);

/// Register identifiers in preorder, with multiplicity.
std::vector<std::uint32_t> register_occurrences(const Term& t);
std::set<std::uint32_t> registers(const Term& t);

/// True when some Var index escapes every enclosing binder of `t`.
bool has_loose_vars(const Term& t);

Term shift(const Term& t, int delta, std::uint32_t cutoff = 0);

/// Replaces the variable bound by the (removed) enclosing binder of `body`
/// with `arg`. This is the substitution step of both beta rules.
Term instantiate(const Term& body, const Term& arg);

/// Capture-avoiding substitution of the free variable `var`.
Term subst(const Term& body, const std::string& var, const Term& arg);

Term map_registers(const Term& t, const std::function<std::uint32_t(std::uint32_t)>& f);

/// <a, b> is encoded as \f. f a b with a fresh linear f.
Term make_pair(const Term& a, const Term& b);
std::optional<std::pair<Term, Term>> match_pair(const Term& t);
/// <t1, ..., tn> nests to the right: <t1, <t2, ...>>.
Term make_tuple(const std::vector<Term>& items);

/// let <x,y> = bound in body, encoded as bound (\x.\y.body).
Term make_let_pair(const std::string& x, const std::string& y, const Term& bound,
                   const Term& body);

enum class ViolationKind {
  DuplicateRegister,
  NonSurfaceRegister,
  LinearUnused,
  LinearDuplicated,
  LinearNonSurface,
};

const char* violation_name(ViolationKind k);

struct Violation {
  ViolationKind kind;
  Position pos;
  std::string message;
};

struct ValidityReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

ValidityReport validate(const Term& t);
inline bool is_valid(const Term& t) { return validate(t).ok(); }

}  // namespace qlambda

#endif  // QLAMBDA_SYNTAX_HPP
