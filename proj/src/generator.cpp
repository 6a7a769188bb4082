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

#include "qlambda/generator.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>
#include <vector>

#include "qlambda/syntax.hpp"

namespace qlambda {

namespace {

enum class Shape { LinRedex, BangRedex, LinLam, BangLam, Bang, App, Meas, Gate1, Gate2, New };
constexpr std::size_t kShapes = 10;

std::array<double, kShapes> weights_for(Profile p) {
  //                 LinRedex BangRedex LinLam BangLam Bang App Meas Gate1 Gate2 New
  switch (p) {
    case Profile::QuantumHeavy: return {2.0, 1.0, 0.5, 0.3, 0.4, 0.6, 4.0, 2.5, 1.5, 2.5};
    case Profile::BetaHeavy: return {3.0, 3.0, 0.8, 0.5, 1.5, 1.0, 0.6, 0.6, 0.3, 0.6};
    case Profile::Balanced:
    case Profile::Mixed: break;
  }
  return {3.0, 2.0, 0.8, 0.5, 0.8, 1.0, 1.5, 1.5, 0.8, 1.2};
}

struct Obligation {
  bool is_register;
  std::uint32_t value;  // register id, or binder level for linear variables
};

class Builder {
 public:
  Builder(std::mt19937_64& rng, Profile profile) : rng_(rng), weights_(weights_for(profile)) {}

  Term gen(int budget, std::vector<Obligation> obl) {
    if (budget <= 1 || budget < static_cast<int>(obl.size()) * 2) return discharge(obl);

    std::array<double, kShapes> w = weights_;
    if (!obl.empty()) {
      w[static_cast<int>(Shape::Bang)] = 0.0;
      w[static_cast<int>(Shape::New)] = 0.0;
    }
    if (budget < 3) w[static_cast<int>(Shape::BangRedex)] = 0.0;
    if (budget < 7) w[static_cast<int>(Shape::Gate2)] = 0.0;
    if (budget < 2) w[static_cast<int>(Shape::LinRedex)] = 0.0;
    std::discrete_distribution<int> pick(w.begin(), w.end());
    auto shape = static_cast<Shape>(pick(rng_));

    switch (shape) {
      case Shape::LinRedex: {
        auto [a, b] = split(obl);
        auto [bb, ab] = split_budget(budget - 2);
        Term body = under_binder(false, bb, a);
        Term lam = Term::lin_lam("x", body);
        return Term::app(lam, gen(ab, b));
      }
      case Shape::BangRedex: {
        auto [bb, ab] = split_budget(budget - 3);
        Term body = under_binder(true, bb, obl);
        return Term::app(Term::bang_lam("f", body), Term::bang(gen(ab, {})));
      }
      case Shape::LinLam:
        return Term::lin_lam("x", under_binder(false, budget - 1, obl));
      case Shape::BangLam:
        return Term::bang_lam("f", under_binder(true, budget - 1, obl));
      case Shape::Bang:
        return Term::bang(gen(budget - 1, {}));
      case Shape::App: {
        auto [a, b] = split(obl);
        auto [fb, ab] = split_budget(budget - 1);
        Term f = gen(fb, a);
        return Term::app(f, gen(ab, b));
      }
      case Shape::Meas: {
        int rest = budget - 1;
        int subject = std::max(1, rest / 2);
        auto [b0, b1] = split_budget(std::max(2, rest - subject));
        Term s = subject_term(subject, obl);
        Term m0 = gen(b0, {});
        return Term::meas(s, m0, gen(b1, {}));
      }
      case Shape::Gate1: {
        const char* name = coin(0.8) ? "H" : "NOT";
        return Term::app(Term::gate(name, 1), gen(budget - 2, obl));
      }
      case Shape::Gate2: {
        auto [a, b] = split(obl);
        auto [lb, rb] = split_budget(budget - 6);
        Term l = gen(lb, a);
        return Term::app(Term::gate("CNOT", 2), make_pair(l, gen(rb, b)));
      }
      case Shape::New:
        return Term::make_new();
    }
    return discharge(obl);
  }

 private:
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }

  std::uint32_t depth() const { return static_cast<std::uint32_t>(binders_.size()); }

  Term atom(const Obligation& o) const {
    if (o.is_register) return Term::reg(o.value);
    return Term::var(depth() - 1 - o.value, "x");
  }

  // Uses every obligation exactly once in a small term.
  Term discharge(const std::vector<Obligation>& obl) {
    if (obl.empty()) return leaf();
    Term acc = atom(obl[0]);
    for (std::size_t k = 1; k < obl.size(); ++k) acc = Term::app(acc, atom(obl[k]));
    return acc;
  }

  Term leaf() {
    std::vector<std::uint32_t> bangs;
    for (std::uint32_t l = 0; l < depth(); ++l)
      if (binders_[l]) bangs.push_back(l);
    if (!bangs.empty() && coin(0.6)) {
      std::uint32_t l = bangs[std::uniform_int_distribution<std::size_t>(0, bangs.size() - 1)(rng_)];
      return Term::var(depth() - 1 - l, "f");
    }
    if (coin(weights_[static_cast<int>(Shape::New)] / 4.0)) return Term::make_new();
    return Term::free_var("z");
  }

  // Measurement subjects that end up on a register more often than not.
  Term subject_term(int budget, const std::vector<Obligation>& obl) {
    if (obl.empty() && coin(0.5)) {
      return coin(0.6) ? Term::app(Term::gate("H", 1), Term::make_new()) : Term::make_new();
    }
    if (obl.size() == 1 && obl[0].is_register && coin(0.5)) return atom(obl[0]);
    return gen(budget, obl);
  }

  Term under_binder(bool bang, int budget, std::vector<Obligation> obl) {
    binders_.push_back(bang);
    if (!bang) obl.push_back({false, depth() - 1});
    std::shuffle(obl.begin(), obl.end(), rng_);
    Term body = gen(budget, obl);
    binders_.pop_back();
    return body;
  }

  std::pair<std::vector<Obligation>, std::vector<Obligation>> split(const std::vector<Obligation>& obl) {
    std::vector<Obligation> a, b;
    for (const auto& o : obl) (coin(0.5) ? a : b).push_back(o);
    return {a, b};
  }

  std::pair<int, int> split_budget(int total) {
    if (total < 2) return {1, 1};
    int a = std::uniform_int_distribution<int>(1, total - 1)(rng_);
    return {a, total - a};
  }

  std::mt19937_64& rng_;
  std::array<double, kShapes> weights_;
  std::vector<bool> binders_;  // per level: bound by a bang lambda
};

}  // namespace

Profile parse_profile(const std::string& s) {
  if (s == "balanced" || s == "default") return Profile::Balanced;
  if (s == "quantum-heavy") return Profile::QuantumHeavy;
  if (s == "beta-heavy") return Profile::BetaHeavy;
  if (s == "mixed") return Profile::Mixed;
  throw std::invalid_argument("unknown profile '" + s + "'");
}

const char* profile_name(Profile p) {
  switch (p) {
    case Profile::Balanced: return "balanced";
    case Profile::QuantumHeavy: return "quantum-heavy";
    case Profile::BetaHeavy: return "beta-heavy";
    case Profile::Mixed: return "mixed";
  }
  return "?";
}

QuantumState random_state(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Complex> amp(std::size_t{1} << n);
  for (auto& a : amp) a = Complex(gauss(rng), gauss(rng));
  return QuantumState::normalized(std::move(amp));
}

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Program gen_program(std::size_t size, std::uint64_t seed, Profile profile) {
  if (profile == Profile::Mixed) profile = static_cast<Profile>(split_seed(seed, 7) % 3);
  std::mt19937_64 rng(seed);
  if (size == 0) size = 1;
  std::size_t reg_cap = 0;
  switch (profile) {
    case Profile::Balanced: reg_cap = std::min<std::size_t>(2, size / 4); break;
    case Profile::QuantumHeavy: reg_cap = std::min<std::size_t>(3, size / 3); break;
    case Profile::BetaHeavy: reg_cap = std::min<std::size_t>(1, size / 4); break;
    case Profile::Mixed: break;
  }
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::size_t nreg = std::uniform_int_distribution<std::size_t>(0, reg_cap)(rng);
    std::vector<Obligation> obl;
    for (std::uint32_t r = 0; r < nreg; ++r) obl.push_back({true, r});
    std::shuffle(obl.begin(), obl.end(), rng);
    Builder b(rng, profile);
    Term t = b.gen(static_cast<int>(size), obl);
    if (t.size() > size) continue;
    if (!validate(t).ok()) throw std::logic_error("generator produced an invalid term");
    return Program(random_state(nreg, rng), t);
  }
  return Program(QuantumState(), Term::lin_lam("x", Term::var(0, "x")));
}

}  // namespace qlambda
