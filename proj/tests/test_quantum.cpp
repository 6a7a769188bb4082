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

#include "qlambda/analysis.hpp"
#include "qlambda/quantum.hpp"
#include "support.hpp"

using namespace qlambda;
using qt::Amps;
using qt::kS;

namespace {

const Matrix& H() {
  static const Matrix h = GateTable::builtin().at("H").matrix;
  return h;
}
const Matrix& CNOT() {
  static const Matrix c = GateTable::builtin().at("CNOT").matrix;
  return c;
}

const qt::M2 kH = {{{kS, kS}, {kS, -kS}}};
const qt::M4 kCnot = {{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}}};

}  // namespace

TEST(Gates, BuiltinMatricesAreTheTextbookOnes) {
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) EXPECT_NEAR(std::abs(H()(r, c) - kH[r][c]), 0.0, 1e-15);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) EXPECT_EQ(CNOT()(r, c), kCnot[r][c]);
  const Matrix x = GateTable::builtin().at("NOT").matrix;
  EXPECT_EQ(x(0, 1), Complex(1.0));
  EXPECT_EQ(x(0, 0), Complex(0.0));
  EXPECT_EQ(GateTable::builtin().at("CNOT").arity, 2);
}

TEST(Gates, NonUnitaryMatricesAreRejected) {
  GateTable t;
  EXPECT_THROW(t.add("BAD", Matrix(2, {1, 1, 0, 1})), std::invalid_argument);
  EXPECT_THROW(t.add("ODD", Matrix::identity(3)), std::invalid_argument);
  t.add("S", Matrix(2, {1, 0, 0, Complex(0, 1)}));
  EXPECT_EQ(t.at("S").arity, 1);
  EXPECT_TRUE(t.contains("S"));
}

TEST(State, EmptyMemoryIsTheScalarOne) {
  QuantumState q;
  EXPECT_EQ(q.qubits(), 0u);
  EXPECT_EQ(q.dimension(), 1u);
  EXPECT_EQ(q[0], Complex(1.0));
}

TEST(State, ConstructorChecksNormAndLength) {
  EXPECT_THROW(QuantumState(Amps{1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(QuantumState(Amps{1.0, 0.0, 0.0}), std::invalid_argument);
  EXPECT_NO_THROW(QuantumState(Amps{kS, kS}));
}

TEST(NewQubit, Examples) {
  EXPECT_TRUE(new_qubit(QuantumState()).approx_equal(QuantumState::basis(1, 0)));
  EXPECT_TRUE(new_qubit(QuantumState::basis(1, 0)).approx_equal(QuantumState::basis(2, 0)));
  QuantumState plus(Amps{kS, kS});
  EXPECT_TRUE(new_qubit(plus).approx_equal(QuantumState(Amps{kS, 0, kS, 0})));
}

TEST(NewQubit, CapacityIsEnforced) {
  QuantumState q = QuantumState::basis(3, 0);
  EXPECT_THROW(new_qubit(q, 3), CapacityError);
  EXPECT_EQ(new_qubit(q, 4).qubits(), 4u);
}

TEST(Permute, Examples) {
  const Complex a(0.1, 0.2), b(0.3, -0.1), c(-0.4, 0.5), d(0.2, 0.0);
  double n = std::sqrt(std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d));
  QuantumState q(Amps{a / n, b / n, c / n, d / n});
  EXPECT_TRUE(permute_state(q, Permutation::identity(2)).bitwise_equal(q));
  QuantumState s = permute_state(q, Permutation::swap(2, 0, 1));
  EXPECT_TRUE(s.approx_equal(QuantumState(Amps{a / n, c / n, b / n, d / n})));
  EXPECT_TRUE(permute_state(s, Permutation::swap(2, 0, 1)).approx_equal(q));
}

TEST(Permute, RejectsNonBijections) {
  EXPECT_THROW(Permutation({0, 0}), std::invalid_argument);
  EXPECT_THROW(Permutation({0, 2}), std::invalid_argument);
  EXPECT_THROW(permute_state(QuantumState::basis(2, 0), Permutation::identity(3)), std::exception);
}

TEST(Permute, MatchesReferenceOnRandomStates) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + trial % 4;
    Amps v = qt::random_amps(n, rng);
    std::vector<std::size_t> sigma(n);
    for (std::size_t k = 0; k < n; ++k) sigma[k] = k;
    std::shuffle(sigma.begin(), sigma.end(), rng);
    QuantumState got = permute_state(QuantumState(v), Permutation(sigma));
    EXPECT_TRUE(qt::near(got.amplitudes(), qt::ref_permute(v, sigma)));
    EXPECT_TRUE(permute_state(got, Permutation(sigma).inverse()).approx_equal(QuantumState(v)));
  }
}

TEST(Permute, ReindexIsTheInverseAction) {
  std::mt19937_64 rng(23);
  QuantumState q(qt::random_amps(3, rng));
  Permutation sigma({2, 0, 1});
  EXPECT_TRUE(reindex_state(q, sigma).approx_equal(permute_state(q, sigma.inverse())));
  EXPECT_TRUE(permute_state(reindex_state(q, sigma), sigma).approx_equal(q));
}

TEST(Unary, Examples) {
  QuantumState plus = apply_unary(QuantumState::basis(1, 0), H(), 0);
  EXPECT_TRUE(plus.approx_equal(QuantumState(Amps{kS, kS})));
  std::mt19937_64 rng(3);
  QuantumState q(qt::random_amps(3, rng));
  EXPECT_TRUE(apply_unary(q, Matrix::identity(2), 1).approx_equal(q));
  EXPECT_TRUE(apply_unary(apply_unary(q, H(), 2), H(), 2).approx_equal(q));
  EXPECT_THROW(apply_unary(q, H(), 3), std::out_of_range);
}

TEST(Unary, MatchesReferenceAtEveryIndex) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + trial % 4;
    Amps v = qt::random_amps(n, rng);
    qt::M2 a = qt::random_m2(rng);
    for (std::size_t i = 0; i < n; ++i) {
      QuantumState got = apply_unary(QuantumState(v), qt::to_matrix(a), i);
      EXPECT_TRUE(qt::near(got.amplitudes(), qt::ref_unary(v, a, i)));
      EXPECT_NEAR(got.norm(), 1.0, 1e-9);
    }
  }
}

TEST(Binary, Examples) {
  QuantumState q(Amps{kS, 0, kS, 0});
  EXPECT_TRUE(apply_binary(q, CNOT(), 0, 1).approx_equal(QuantumState(Amps{kS, 0, 0, kS})));
  EXPECT_TRUE(apply_binary(q, Matrix::identity(4), 0, 1).approx_equal(q));
  // Control on qubit 1: |01> becomes |11>.
  EXPECT_TRUE(apply_binary(QuantumState::basis(2, 1), CNOT(), 1, 0)
                  .approx_equal(QuantumState::basis(2, 3)));
  EXPECT_THROW(apply_binary(q, CNOT(), 1, 1), std::invalid_argument);
  EXPECT_THROW(apply_binary(q, CNOT(), 0, 2), std::out_of_range);
}

TEST(Binary, MatchesReferenceOnEveryPair) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 2 + trial % 3;
    Amps v = qt::random_amps(n, rng);
    qt::M4 a = qt::random_m4(rng);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        QuantumState got = apply_binary(QuantumState(v), qt::to_matrix(a), i, j);
        EXPECT_TRUE(qt::near(got.amplitudes(), qt::ref_binary(v, a, i, j)));
      }
  }
}

TEST(Binary, TensorWithIdentityActsAsUnary) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    std::size_t n = 2 + trial % 3;
    QuantumState q(qt::random_amps(n, rng));
    Matrix a = qt::to_matrix(qt::random_m2(rng));
    Matrix ai = Matrix::kron(a, Matrix::identity(2));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) {
          EXPECT_TRUE(apply_binary(q, ai, i, j).approx_equal(apply_unary(q, a, i)));
        }
  }
}

TEST(Measure, Examples) {
  auto plus = measure(QuantumState(Amps{kS, kS}), 0);
  ASSERT_EQ(plus.size(), 2u);
  EXPECT_EQ(plus[0].bit, 0);
  EXPECT_NEAR(plus[0].probability, 0.5, 1e-12);
  EXPECT_NEAR(plus[1].probability, 0.5, 1e-12);
  EXPECT_EQ(plus[0].post.qubits(), 0u);

  auto zero = measure(QuantumState::basis(1, 0), 0);
  ASSERT_EQ(zero.size(), 1u);
  EXPECT_EQ(zero[0].bit, 0);
  EXPECT_NEAR(zero[0].probability, 1.0, 1e-12);

  auto bell = measure(QuantumState(Amps{kS, 0, 0, kS}), 1);
  ASSERT_EQ(bell.size(), 2u);
  EXPECT_TRUE(bell[0].post.approx_equal(QuantumState::basis(1, 0)));
  EXPECT_TRUE(bell[1].post.approx_equal(QuantumState::basis(1, 1)));
}

TEST(Measure, DropsNegligibleOutcomes) {
  double tiny = 1e-7;  // probability 1e-14, below the drop threshold
  QuantumState q(Amps{std::sqrt(1 - tiny * tiny), tiny});
  auto out = measure(q, 0);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out[0].bit, 0);
}

TEST(Measure, MatchesReference) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t n = 1 + trial % 4;
    Amps v = qt::random_amps(n, rng);
    for (std::size_t i = 0; i < n; ++i) {
      auto out = measure(QuantumState(v), i);
      double total = 0.0;
      for (const auto& o : out) {
        total += o.probability;
        EXPECT_NEAR(o.probability, qt::ref_prob(v, i, o.bit), 1e-12);
        EXPECT_TRUE(qt::near(o.post.amplitudes(), qt::ref_project(v, i, o.bit)));
        EXPECT_NEAR(o.post.norm(), 1.0, 1e-9);
      }
      EXPECT_NEAR(total, 1.0, 1e-9);
    }
  }
}

// The thirteen exchange laws between creation, gates, projections and
// outcome probabilities, evaluated with the reference model only.
TEST(Commutation, ReferenceModelSatisfiesAllThirteen) {
  std::mt19937_64 rng(17);
  auto after = [](std::size_t i, std::size_t gone) { return i > gone ? i - 1 : i; };
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 4 + trial % 2;
    Amps q = qt::random_amps(n, rng);
    std::vector<std::size_t> idx{0, 1, 2, 3};
    std::shuffle(idx.begin(), idx.end(), rng);
    std::size_t i = idx[0], j = idx[1], k = idx[2], l = idx[3];
    int b = static_cast<int>(rng() & 1), c = static_cast<int>(rng() & 1);
    qt::M2 A = qt::random_m2(rng), B = qt::random_m2(rng);
    qt::M4 A2 = qt::random_m4(rng), B2 = qt::random_m4(rng);
    using qt::near;
    using namespace qt;
    EXPECT_TRUE(near(ref_new(ref_unary(q, A, i)), ref_unary(ref_new(q), A, i)));
    EXPECT_TRUE(near(ref_new(ref_binary(q, A2, i, j)), ref_binary(ref_new(q), A2, i, j)));
    EXPECT_TRUE(near(ref_new(ref_project(q, i, b)), ref_project(ref_new(q), i, b)));
    EXPECT_TRUE(near(ref_unary(ref_unary(q, B, j), A, i), ref_unary(ref_unary(q, A, i), B, j)));
    EXPECT_TRUE(near(ref_unary(ref_binary(q, B2, i, j), A, k), ref_binary(ref_unary(q, A, k), B2, i, j)));
    EXPECT_TRUE(near(ref_binary(ref_binary(q, B2, i, j), A2, k, l),
                     ref_binary(ref_binary(q, A2, k, l), B2, i, j)));
    EXPECT_TRUE(near(ref_unary(ref_project(q, j, b), A, after(i, j)), ref_project(ref_unary(q, A, i), j, b)));
    EXPECT_TRUE(near(ref_binary(ref_project(q, j, b), A2, after(k, j), after(l, j)),
                     ref_project(ref_binary(q, A2, k, l), j, b)));
    EXPECT_TRUE(near(ref_project(ref_project(q, j, c), after(i, j), b),
                     ref_project(ref_project(q, i, b), after(j, i), c)));
    EXPECT_NEAR(ref_prob(ref_new(q), i, b), ref_prob(q, i, b), 1e-9);
    EXPECT_NEAR(ref_prob(ref_unary(q, A, j), i, b), ref_prob(q, i, b), 1e-9);
    EXPECT_NEAR(ref_prob(ref_binary(q, A2, j, k), i, b), ref_prob(q, i, b), 1e-9);
    EXPECT_NEAR(ref_prob(q, j, c) * ref_prob(ref_project(q, j, c), after(i, j), b),
                ref_prob(ref_project(q, i, b), after(j, i), c) * ref_prob(q, i, b), 1e-9);
  }
}

TEST(Commutation, LibrarySuitePasses) {
  SuiteConfig cfg;
  cfg.count = 300;
  cfg.seed = 99;
  PropertyVerdict v = commutation_suite(cfg);
  EXPECT_EQ(v.tried, 300u);
  EXPECT_EQ(v.failed, 0u) << v.to_json().dump();
}

TEST(Norm, PreservedByEveryOperation) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 2 + trial % 3;
    QuantumState q(qt::random_amps(n, rng));
    EXPECT_NEAR(new_qubit(q).norm(), 1.0, 1e-9);
    EXPECT_NEAR(apply_unary(q, qt::to_matrix(qt::random_m2(rng)), 0).norm(), 1.0, 1e-9);
    EXPECT_NEAR(apply_binary(q, qt::to_matrix(qt::random_m4(rng)), 1, 0).norm(), 1.0, 1e-9);
    for (const auto& o : measure(q, n - 1)) EXPECT_NEAR(o.post.norm(), 1.0, 1e-9);
  }
}
