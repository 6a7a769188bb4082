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

#ifndef QLAMBDA_TERM_HPP
#define QLAMBDA_TERM_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace qlambda {

enum class TermKind : std::uint8_t {
  Var,      // bound variable, de Bruijn index
  FreeVar,  // free variable, by name
  Bang,
  LinLam,
  BangLam,
  App,
  Reg,
  Gate,
  New,
  Meas,
};

const char* kind_name(TermKind k);

/// Child selector used to address subterms from the root.
/// `Body` is a lambda body; `Boxed` is the body of a Bang.
enum class Step : std::uint8_t { Body, Fun, Arg, Subject, Branch0, Branch1, Boxed };

using Position = std::vector<Step>;

std::string to_string(const Position& pos);

struct Node;

/// Immutable, structurally shared lambda term.
///
/// Bound variables are de Bruijn indices, so two alpha-equivalent terms
/// compare equal with `operator==`. Binder names are kept only as printing
/// hints and never take part in equality or hashing.
class Term {
 public:
  Term() = default;

  static Term var(std::uint32_t index, std::string hint = {});
  static Term free_var(std::string name);
  static Term bang(Term body);
  static Term lin_lam(std::string hint, Term body);
  static Term bang_lam(std::string hint, Term body);
  static Term app(Term fun, Term arg);
  static Term reg(std::uint32_t index);
  static Term gate(std::string name, int arity);
  static Term make_new();
  static Term meas(Term subject, Term branch0, Term branch1);

  /// Builders over named variables: occurrences of the free variable `name`
  /// in `body` become bound by the new binder.
  static Term lin_lam_named(const std::string& name, const Term& body);
  static Term bang_lam_named(const std::string& name, const Term& body);

  bool empty() const { return node_ == nullptr; }
  TermKind kind() const;
  bool is(TermKind k) const { return node_ != nullptr && kind() == k; }

  /// De Bruijn index of a Var, identifier of a Reg.
  std::uint32_t index() const;
  /// FreeVar name, gate name, or binder hint (Var, LinLam, BangLam).
  const std::string& name() const;
  int arity() const;

  const Term& body() const;
  const Term& fun() const;
  const Term& arg() const;
  const Term& subject() const;
  const Term& branch0() const;
  const Term& branch1() const;

  /// Child addressed by `s`; throws std::out_of_range if absent.
  const Term& child(Step s) const;
  /// Steps to the children of this node, in preorder.
  std::vector<Step> child_steps() const;

  std::size_t size() const;
  std::size_t hash() const;

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Term make(Node n);

  std::shared_ptr<const Node> node_;
};

struct Node {
  TermKind kind = TermKind::New;
  std::uint32_t index = 0;
  int arity = 0;
  std::string name;
  std::array<Term, 3> kids;
  std::size_t size = 1;
  std::size_t hash = 0;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

}  // namespace qlambda

#endif  // QLAMBDA_TERM_HPP
