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

#include "qlambda/term.hpp"

#include <functional>
#include <stdexcept>

namespace qlambda {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

int child_count(TermKind k) {
  switch (k) {
    case TermKind::Bang:
    case TermKind::LinLam:
    case TermKind::BangLam:
      return 1;
    case TermKind::App:
      return 2;
    case TermKind::Meas:
      return 3;
    default:
      return 0;
  }
}

Term abstract_name(const Term& t, const std::string& name, std::uint32_t depth) {
  switch (t.kind()) {
    case TermKind::FreeVar:
      return t.name() == name ? Term::var(depth, name) : t;
    case TermKind::Bang:
      return Term::bang(abstract_name(t.body(), name, depth));
    case TermKind::LinLam:
      return Term::lin_lam(t.name(), abstract_name(t.body(), name, depth + 1));
    case TermKind::BangLam:
      return Term::bang_lam(t.name(), abstract_name(t.body(), name, depth + 1));
    case TermKind::App:
      return Term::app(abstract_name(t.fun(), name, depth), abstract_name(t.arg(), name, depth));
    case TermKind::Meas:
      return Term::meas(abstract_name(t.subject(), name, depth),
                        abstract_name(t.branch0(), name, depth),
                        abstract_name(t.branch1(), name, depth));
    default:
      return t;
  }
}

}  // namespace

const char* kind_name(TermKind k) {
  switch (k) {
    case TermKind::Var: return "Var";
    case TermKind::FreeVar: return "FreeVar";
    case TermKind::Bang: return "Bang";
    case TermKind::LinLam: return "LinLam";
    case TermKind::BangLam: return "BangLam";
    case TermKind::App: return "App";
    case TermKind::Reg: return "Reg";
    case TermKind::Gate: return "Gate";
    case TermKind::New: return "New";
    case TermKind::Meas: return "Meas";
  }
  return "?";
}

std::string to_string(const Position& pos) {
  static const char* names[] = {"body", "fun", "arg", "subject", "branch0", "branch1", "boxed"};
  std::string out = "[";
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (i) out += ",";
    out += names[static_cast<int>(pos[i])];
  }
  return out + "]";
}

Term Term::make(Node n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 0x100000001b3ULL;
  switch (n.kind) {
    case TermKind::Var:
    case TermKind::Reg:
      h = mix(h, n.index);
      break;
    case TermKind::FreeVar:
    case TermKind::Gate:
      h = mix(h, std::hash<std::string>{}(n.name));
      break;
    default:
      break;
  }
  for (int i = 0; i < child_count(n.kind); ++i) {
    if (n.kids[i].empty()) throw std::invalid_argument("term: missing child");
    n.size += n.kids[i].size();
    h = mix(h, n.kids[i].hash());
  }
  n.hash = h;
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::var(std::uint32_t index, std::string hint) {
  Node n;
  n.kind = TermKind::Var;
  n.index = index;
  n.name = std::move(hint);
  return make(std::move(n));
}

Term Term::free_var(std::string name) {
  Node n;
  n.kind = TermKind::FreeVar;
  n.name = std::move(name);
  return make(std::move(n));
}

Term Term::bang(Term body) {
  Node n;
  n.kind = TermKind::Bang;
  n.kids[0] = std::move(body);
  return make(std::move(n));
}

Term Term::lin_lam(std::string hint, Term body) {
  Node n;
  n.kind = TermKind::LinLam;
  n.name = std::move(hint);
  n.kids[0] = std::move(body);
  return make(std::move(n));
}

Term Term::bang_lam(std::string hint, Term body) {
  Node n;
  n.kind = TermKind::BangLam;
  n.name = std::move(hint);
  n.kids[0] = std::move(body);
  return make(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  Node n;
  n.kind = TermKind::App;
  n.kids[0] = std::move(fun);
  n.kids[1] = std::move(arg);
  return make(std::move(n));
}

Term Term::reg(std::uint32_t index) {
  Node n;
  n.kind = TermKind::Reg;
  n.index = index;
  return make(std::move(n));
}

Term Term::gate(std::string name, int arity) {
  Node n;
  n.kind = TermKind::Gate;
  n.name = std::move(name);
  n.arity = arity;
  return make(std::move(n));
}

Term Term::make_new() {
  Node n;
  n.kind = TermKind::New;
  return make(std::move(n));
}

Term Term::meas(Term subject, Term branch0, Term branch1) {
  Node n;
  n.kind = TermKind::Meas;
  n.kids[0] = std::move(subject);
  n.kids[1] = std::move(branch0);
  n.kids[2] = std::move(branch1);
  return make(std::move(n));
}

Term Term::lin_lam_named(const std::string& name, const Term& body) {
  return lin_lam(name, abstract_name(body, name, 0));
}

Term Term::bang_lam_named(const std::string& name, const Term& body) {
  return bang_lam(name, abstract_name(body, name, 0));
}

TermKind Term::kind() const { return node_->kind; }
std::uint32_t Term::index() const { return node_->index; }
const std::string& Term::name() const { return node_->name; }
int Term::arity() const { return node_->arity; }

const Term& Term::body() const { return node_->kids[0]; }
const Term& Term::fun() const { return node_->kids[0]; }
const Term& Term::arg() const { return node_->kids[1]; }
const Term& Term::subject() const { return node_->kids[0]; }
const Term& Term::branch0() const { return node_->kids[1]; }
const Term& Term::branch1() const { return node_->kids[2]; }

const Term& Term::child(Step s) const {
  switch (kind()) {
    case TermKind::Bang:
      if (s == Step::Boxed) return body();
      break;
    case TermKind::LinLam:
    case TermKind::BangLam:
      if (s == Step::Body) return body();
      break;
    case TermKind::App:
      if (s == Step::Fun) return fun();
      if (s == Step::Arg) return arg();
      break;
    case TermKind::Meas:
      if (s == Step::Subject) return subject();
      if (s == Step::Branch0) return branch0();
      if (s == Step::Branch1) return branch1();
      break;
    default:
      break;
  }
  throw std::out_of_range(std::string("term: no such child of ") + kind_name(kind()));
}

std::vector<Step> Term::child_steps() const {
  switch (kind()) {
    case TermKind::Bang:
      return {Step::Boxed};
    case TermKind::LinLam:
    case TermKind::BangLam:
      return {Step::Body};
    case TermKind::App:
      return {Step::Fun, Step::Arg};
    case TermKind::Meas:
      return {Step::Subject, Step::Branch0, Step::Branch1};
    default:
      return {};
  }
}

std::size_t Term::size() const { return node_ ? node_->size : 0; }
std::size_t Term::hash() const { return node_ ? node_->hash : 0; }

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.hash != y.hash || x.size != y.size || x.kind != y.kind) return false;
  switch (x.kind) {
    case TermKind::Var:
    case TermKind::Reg:
      return x.index == y.index;
    case TermKind::FreeVar:
    case TermKind::Gate:
      return x.name == y.name;
    default:
      break;
  }
  for (int i = 0; i < child_count(x.kind); ++i) {
    if (x.kids[i] != y.kids[i]) return false;
  }
  return true;
}

}  // namespace qlambda
