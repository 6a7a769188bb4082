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

#ifndef QLAMBDA_QUANTUM_HPP
#define QLAMBDA_QUANTUM_HPP

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qlambda {

using Complex = std::complex<double>;

/// Equality and normalization tolerance for amplitudes and weights.
inline constexpr double kTolerance = 1e-9;
/// Measurement outcomes below this probability are dropped.
inline constexpr double kDropThreshold = 1e-12;
inline constexpr std::size_t kDefaultMaxQubits = 12;

class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense square complex matrix, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t dim, std::vector<Complex> data);

  static Matrix identity(std::size_t dim);
  static Matrix kron(const Matrix& a, const Matrix& b);

  std::size_t dim() const { return dim_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }

  Matrix adjoint() const;
  Matrix operator*(const Matrix& other) const;
  std::vector<Complex> apply(const std::vector<Complex>& v) const;

  /// max |(U^dagger U - I)_{rc}|
  double unitarity_defect() const;
  bool is_unitary(double tol = kTolerance) const { return unitarity_defect() <= tol; }

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

/// Bijection on {0..n-1}.
class Permutation {
 public:
  explicit Permutation(std::vector<std::size_t> map);

  static Permutation identity(std::size_t n);
  static Permutation swap(std::size_t n, std::size_t i, std::size_t j);
  /// Swaps i with 0.
  static Permutation to_front(std::size_t n, std::size_t i);
  /// Re-indexing map sending i to 0 and j to 1; the displaced indices take
  /// the freed slots.
  static Permutation to_front2(std::size_t n, std::size_t i, std::size_t j);
  /// Swaps i with the last index.
  static Permutation to_back(std::size_t n, std::size_t i);

  std::size_t size() const { return map_.size(); }
  std::size_t operator()(std::size_t k) const { return map_[k]; }
  Permutation inverse() const;
  bool is_identity() const;
  const std::vector<std::size_t>& map() const { return map_; }

 private:
  std::vector<std::size_t> map_;
};

/// Normalized state of n qubits. Basis index bits read b0...b_{n-1} with b0
/// the most significant bit, so qubit i is bit (n-1-i) of the index.
class QuantumState {
 public:
  /// The empty memory: zero qubits, scalar amplitude 1.
  QuantumState();
  /// Throws std::invalid_argument unless the length is a power of two and
  /// the vector has unit norm within tolerance.
  explicit QuantumState(std::vector<Complex> amplitudes);

  static QuantumState basis(std::size_t n, std::size_t index);
  static QuantumState normalized(std::vector<Complex> amplitudes);

  std::size_t qubits() const { return qubits_; }
  std::size_t dimension() const { return amp_.size(); }
  const std::vector<Complex>& amplitudes() const { return amp_; }
  const Complex& operator[](std::size_t k) const { return amp_[k]; }
  double norm() const;

  bool approx_equal(const QuantumState& other, double tol = kTolerance) const;
  bool bitwise_equal(const QuantumState& other) const;

  std::string to_string() const;

 private:
  struct Unchecked {};
  QuantumState(std::vector<Complex> amplitudes, Unchecked);
  friend QuantumState make_unchecked(std::vector<Complex> amp);

  std::size_t qubits_ = 0;
  std::vector<Complex> amp_;
};

/// q tensor |0>.
QuantumState new_qubit(const QuantumState& q, std::size_t max_qubits = kDefaultMaxQubits);

/// Moves old qubit s(k) to position k: the amplitude of |b0...b_{n-1}>
/// lands on |b_{s(0)}...b_{s(n-1)}>.
QuantumState permute_state(const QuantumState& q, const Permutation& s);

/// State half of a register re-indexing r_i -> r_{sigma(i)}: old qubit i
/// ends up at position sigma(i).
QuantumState reindex_state(const QuantumState& q, const Permutation& sigma);

QuantumState apply_unary(const QuantumState& q, const Matrix& gate, std::size_t i);
/// `gate` acts on |b_i b_j> with qubit i as the high bit.
QuantumState apply_binary(const QuantumState& q, const Matrix& gate, std::size_t i, std::size_t j);

/// Probability of reading `bit` on qubit i.
double outcome_probability(const QuantumState& q, std::size_t i, int bit);
/// Post-measurement state for `bit`, qubit i removed, renormalized.
QuantumState project(const QuantumState& q, std::size_t i, int bit);

struct MeasureOutcome {
  int bit = 0;
  double probability = 0.0;
  QuantumState post;
};

/// Both outcomes of measuring qubit i; those below kDropThreshold are omitted.
std::vector<MeasureOutcome> measure(const QuantumState& q, std::size_t i);

}  // namespace qlambda

#endif  // QLAMBDA_QUANTUM_HPP
