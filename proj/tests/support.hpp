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

// Shared helpers for the unit tests, including a reference state-vector
// model that works on explicit basis bits and shares no code with the
// library's operators.

#ifndef QLAMBDA_TESTS_SUPPORT_HPP
#define QLAMBDA_TESTS_SUPPORT_HPP

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <string_view>
#include <vector>

#include "qlambda/gates.hpp"
#include "qlambda/parser.hpp"
#include "qlambda/program.hpp"
#include "qlambda/quantum.hpp"

namespace qt {

using qlambda::Complex;
using Amps = std::vector<Complex>;
using M2 = std::array<std::array<Complex, 2>, 2>;
using M4 = std::array<std::array<Complex, 4>, 4>;

inline const double kS = 1.0 / std::sqrt(2.0);

inline qlambda::Term term(std::string_view s) {
  return qlambda::parse_term(s, qlambda::GateTable::builtin());
}

inline qlambda::Program prog(std::string_view s, qlambda::QuantumState q = {}) {
  return qlambda::Program(std::move(q), term(s));
}

inline qlambda::QuantumState state(Amps a) { return qlambda::QuantumState(std::move(a)); }

inline std::size_t qubits_of(const Amps& v) {
  std::size_t n = 0;
  while ((std::size_t{1} << n) < v.size()) ++n;
  return n;
}

// Bit of qubit q (0 is the most significant) in basis index k.
inline int bit(std::size_t k, std::size_t n, std::size_t q) {
  return static_cast<int>((k >> (n - 1 - q)) & 1);
}

inline std::size_t with_bit(std::size_t k, std::size_t n, std::size_t q, int b) {
  std::size_t mask = std::size_t{1} << (n - 1 - q);
  return b ? (k | mask) : (k & ~mask);
}

inline Amps random_amps(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Amps v(std::size_t{1} << n);
  double norm = 0.0;
  for (auto& a : v) {
    a = Complex(g(rng), g(rng));
    norm += std::norm(a);
  }
  for (auto& a : v) a /= std::sqrt(norm);
  return v;
}

inline M2 random_m2(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 6.283185307179586);
  double t = u(rng), a = u(rng), b = u(rng), c = u(rng);
  Complex pa = std::polar(1.0, a), pb = std::polar(1.0, b), pc = std::polar(1.0, c);
  return {{{pa * pb * std::cos(t), pa * pc * std::sin(t)},
           {-pa * std::conj(pc) * std::sin(t), pa * std::conj(pb) * std::cos(t)}}};
}

// A random two-qubit unitary: local gates around a CNOT.
inline M4 random_m4(std::mt19937_64& rng) {
  auto kron = [](const M2& x, const M2& y) {
    M4 r{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) r[i][j] = x[i >> 1][j >> 1] * y[i & 1][j & 1];
    return r;
  };
  auto mul = [](const M4& x, const M4& y) {
    M4 r{};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) r[i][j] += x[i][k] * y[k][j];
    return r;
  };
  M4 cnot{};
  cnot[0][0] = cnot[1][1] = cnot[2][3] = cnot[3][2] = 1.0;
  return mul(kron(random_m2(rng), random_m2(rng)), mul(cnot, kron(random_m2(rng), random_m2(rng))));
}

inline qlambda::Matrix to_matrix(const M2& m) {
  return qlambda::Matrix(2, {m[0][0], m[0][1], m[1][0], m[1][1]});
}

inline qlambda::Matrix to_matrix(const M4& m) {
  std::vector<Complex> d;
  for (const auto& row : m)
    for (const auto& x : row) d.push_back(x);
  return qlambda::Matrix(4, d);
}

// Full 2^n x 2^n action: <out|U|in> = A[out_i][in_i] when the other bits agree.
inline Amps ref_unary(const Amps& v, const M2& a, std::size_t i) {
  std::size_t n = qubits_of(v);
  Amps out(v.size());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (with_bit(r, n, i, 0) != with_bit(c, n, i, 0)) continue;
      out[r] += a[bit(r, n, i)][bit(c, n, i)] * v[c];
    }
  return out;
}

inline Amps ref_binary(const Amps& v, const M4& a, std::size_t i, std::size_t j) {
  std::size_t n = qubits_of(v);
  Amps out(v.size());
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) {
      if (with_bit(with_bit(r, n, i, 0), n, j, 0) != with_bit(with_bit(c, n, i, 0), n, j, 0))
        continue;
      int ro = 2 * bit(r, n, i) + bit(r, n, j);
      int co = 2 * bit(c, n, i) + bit(c, n, j);
      out[r] += a[ro][co] * v[c];
    }
  return out;
}

inline Amps ref_new(const Amps& v) {
  Amps out(v.size() * 2);
  for (std::size_t k = 0; k < v.size(); ++k) out[2 * k] = v[k];
  return out;
}

inline double ref_prob(const Amps& v, std::size_t i, int b) {
  std::size_t n = qubits_of(v);
  double p = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (bit(k, n, i) == b) p += std::norm(v[k]);
  return p;
}

// Keeps the basis states with qubit i = b, drops that qubit, renormalizes.
inline Amps ref_project(const Amps& v, std::size_t i, int b) {
  std::size_t n = qubits_of(v);
  Amps out(v.size() / 2);
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (bit(k, n, i) != b) continue;
    std::size_t idx = 0;
    for (std::size_t q = 0; q < n; ++q)
      if (q != i) idx = idx * 2 + static_cast<std::size_t>(bit(k, n, q));
    out[idx] = v[k];
  }
  double s = std::sqrt(ref_prob(v, i, b));
  for (auto& a : out) a /= s;
  return out;
}

// New qubit k carries old qubit sigma[k].
inline Amps ref_permute(const Amps& v, const std::vector<std::size_t>& sigma) {
  std::size_t n = qubits_of(v);
  Amps out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    std::size_t idx = 0;
    for (std::size_t q = 0; q < n; ++q) idx = idx * 2 + static_cast<std::size_t>(bit(k, n, sigma[q]));
    out[idx] = v[k];
  }
  return out;
}

inline bool near(const Amps& a, const Amps& b, double tol = 1e-9) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > tol) return false;
  return true;
}

}  // namespace qt

#endif  // QLAMBDA_TESTS_SUPPORT_HPP
