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

#include "qlambda/quantum.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace qlambda {

QuantumState make_unchecked(std::vector<Complex> amp);

namespace {

std::size_t log2_exact(std::size_t n) {
  std::size_t k = 0;
  while ((std::size_t{1} << k) < n) ++k;
  if ((std::size_t{1} << k) != n) throw std::invalid_argument("state length is not a power of two");
  return k;
}

std::size_t bit_mask(std::size_t n, std::size_t qubit) { return std::size_t{1} << (n - 1 - qubit); }

void check_index(const QuantumState& q, std::size_t i) {
  if (i >= q.qubits())
    throw std::out_of_range("qubit index " + std::to_string(i) + " out of range for " +
                            std::to_string(q.qubits()) + " qubits");
}

// Removes bit at `mask` from `index`, closing the gap.
std::size_t drop_bit(std::size_t index, std::size_t mask) {
  std::size_t low = index & (mask - 1);
  std::size_t high = (index >> 1) & ~(mask - 1);
  return high | low;
}

}  // namespace

QuantumState make_unchecked(std::vector<Complex> amp) {
  return QuantumState(std::move(amp), QuantumState::Unchecked{});
}

// ---- Matrix ----------------------------------------------------------------

Matrix::Matrix(std::size_t dim, std::vector<Complex> data) : dim_(dim), data_(std::move(data)) {
  if (data_.size() != dim_ * dim_) throw std::invalid_argument("matrix data size mismatch");
}

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim, std::vector<Complex>(dim * dim));
  for (std::size_t k = 0; k < dim; ++k) m(k, k) = 1.0;
  return m;
}

Matrix Matrix::kron(const Matrix& a, const Matrix& b) {
  std::size_t d = a.dim() * b.dim();
  Matrix m(d, std::vector<Complex>(d * d));
  for (std::size_t r1 = 0; r1 < a.dim(); ++r1)
    for (std::size_t c1 = 0; c1 < a.dim(); ++c1)
      for (std::size_t r2 = 0; r2 < b.dim(); ++r2)
        for (std::size_t c2 = 0; c2 < b.dim(); ++c2)
          m(r1 * b.dim() + r2, c1 * b.dim() + c2) = a(r1, c1) * b(r2, c2);
  return m;
}

Matrix Matrix::adjoint() const {
  Matrix m(dim_, std::vector<Complex>(dim_ * dim_));
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(c, r) = std::conj((*this)(r, c));
  return m;
}

Matrix Matrix::operator*(const Matrix& other) const {
  if (other.dim_ != dim_) throw std::invalid_argument("matrix dimension mismatch");
  Matrix m(dim_, std::vector<Complex>(dim_ * dim_));
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t k = 0; k < dim_; ++k)
      for (std::size_t c = 0; c < dim_; ++c) m(r, c) += (*this)(r, k) * other(k, c);
  return m;
}

std::vector<Complex> Matrix::apply(const std::vector<Complex>& v) const {
  if (v.size() != dim_) throw std::invalid_argument("matrix/vector dimension mismatch");
  std::vector<Complex> out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out[r] += (*this)(r, c) * v[c];
  return out;
}

double Matrix::unitarity_defect() const {
  Matrix p = adjoint() * (*this);
  double worst = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c)
      worst = std::max(worst, std::abs(p(r, c) - (r == c ? Complex(1.0) : Complex(0.0))));
  return worst;
}

// ---- Permutation -------------------------------------------------------------

Permutation::Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
  std::vector<bool> hit(map_.size(), false);
  for (std::size_t v : map_) {
    if (v >= map_.size() || hit[v]) throw std::invalid_argument("permutation is not a bijection");
    hit[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> m(n);
  for (std::size_t k = 0; k < n; ++k) m[k] = k;
  return Permutation(std::move(m));
}

Permutation Permutation::swap(std::size_t n, std::size_t i, std::size_t j) {
  auto m = identity(n).map_;
  std::swap(m.at(i), m.at(j));
  return Permutation(std::move(m));
}

Permutation Permutation::to_front(std::size_t n, std::size_t i) { return swap(n, 0, i); }

Permutation Permutation::to_front2(std::size_t n, std::size_t i, std::size_t j) {
  if (i == j || i >= n || j >= n || n < 2) throw std::invalid_argument("to_front2: bad indices");
  // Swap i into 0 first, then whatever now sits where j went into 1.
  auto m = identity(n).map_;
  std::swap(m[0], m[i]);
  std::size_t where_j = 0;
  for (std::size_t k = 0; k < n; ++k)
    if (m[k] == j) where_j = k;
  std::swap(m[1], m[where_j]);
  // m[k] is the old index placed at position k; the permutation maps old to new.
  std::vector<std::size_t> sigma(n);
  for (std::size_t k = 0; k < n; ++k) sigma[m[k]] = k;
  return Permutation(std::move(sigma));
}

Permutation Permutation::to_back(std::size_t n, std::size_t i) { return swap(n, i, n - 1); }

Permutation Permutation::inverse() const {
  std::vector<std::size_t> inv(map_.size());
  for (std::size_t k = 0; k < map_.size(); ++k) inv[map_[k]] = k;
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const {
  for (std::size_t k = 0; k < map_.size(); ++k)
    if (map_[k] != k) return false;
  return true;
}

// ---- QuantumState -------------------------------------------------------------

QuantumState::QuantumState() : qubits_(0), amp_{Complex(1.0)} {}

QuantumState::QuantumState(std::vector<Complex> amplitudes, Unchecked)
    : qubits_(log2_exact(amplitudes.size())), amp_(std::move(amplitudes)) {}

QuantumState::QuantumState(std::vector<Complex> amplitudes)
    : qubits_(log2_exact(amplitudes.size())), amp_(std::move(amplitudes)) {
  if (std::abs(norm() - 1.0) > kTolerance)
    throw std::invalid_argument("state is not normalized (norm " + std::to_string(norm()) + ")");
}

QuantumState QuantumState::basis(std::size_t n, std::size_t index) {
  std::vector<Complex> amp(std::size_t{1} << n);
  amp.at(index) = 1.0;
  return make_unchecked(std::move(amp));
}

QuantumState QuantumState::normalized(std::vector<Complex> amplitudes) {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  if (s <= 0.0) throw std::invalid_argument("cannot normalize the zero vector");
  double inv = 1.0 / std::sqrt(s);
  for (auto& a : amplitudes) a *= inv;
  return make_unchecked(std::move(amplitudes));
}

double QuantumState::norm() const {
  double s = 0.0;
  for (const auto& a : amp_) s += std::norm(a);
  return std::sqrt(s);
}

bool QuantumState::approx_equal(const QuantumState& other, double tol) const {
  if (qubits_ != other.qubits_) return false;
  for (std::size_t k = 0; k < amp_.size(); ++k)
    if (std::abs(amp_[k] - other.amp_[k]) > tol) return false;
  return true;
}

bool QuantumState::bitwise_equal(const QuantumState& other) const {
  return qubits_ == other.qubits_ && amp_ == other.amp_;
}

std::string QuantumState::to_string() const {
  if (qubits_ == 0) return "|>";
  std::ostringstream os;
  os << std::setprecision(6);
  bool first = true;
  for (std::size_t k = 0; k < amp_.size(); ++k) {
    if (std::abs(amp_[k]) < 1e-12) continue;
    if (!first) os << " + ";
    first = false;
    os << "(" << amp_[k].real();
    if (amp_[k].imag() != 0.0) os << (amp_[k].imag() < 0 ? "" : "+") << amp_[k].imag() << "i";
    os << ")|";
    for (std::size_t q = 0; q < qubits_; ++q) os << ((k & bit_mask(qubits_, q)) ? '1' : '0');
    os << ">";
  }
  return os.str();
}

// ---- operations -----------------------------------------------------------

QuantumState new_qubit(const QuantumState& q, std::size_t max_qubits) {
  if (q.qubits() + 1 > max_qubits)
    throw CapacityError("qubit capacity exceeded (max " + std::to_string(max_qubits) + ")");
  std::vector<Complex> amp(q.dimension() * 2);
  for (std::size_t k = 0; k < q.dimension(); ++k) amp[2 * k] = q[k];
  return make_unchecked(std::move(amp));
}

QuantumState permute_state(const QuantumState& q, const Permutation& s) {
  std::size_t n = q.qubits();
  if (s.size() != n) throw std::invalid_argument("permutation size does not match the state");
  if (s.is_identity()) return q;
  std::vector<Complex> amp(q.dimension());
  for (std::size_t x = 0; x < q.dimension(); ++x) {
    std::size_t y = 0;
    for (std::size_t k = 0; k < n; ++k)
      if (x & bit_mask(n, s(k))) y |= bit_mask(n, k);
    amp[y] = q[x];
  }
  return make_unchecked(std::move(amp));
}

QuantumState reindex_state(const QuantumState& q, const Permutation& sigma) {
  return permute_state(q, sigma.inverse());
}

QuantumState apply_unary(const QuantumState& q, const Matrix& gate, std::size_t i) {
  check_index(q, i);
  if (gate.dim() != 2) throw std::invalid_argument("unary gate must be 2x2");
  std::size_t m = bit_mask(q.qubits(), i);
  std::vector<Complex> amp = q.amplitudes();
  for (std::size_t x = 0; x < amp.size(); ++x) {
    if (x & m) continue;
    Complex a0 = q[x], a1 = q[x | m];
    amp[x] = gate(0, 0) * a0 + gate(0, 1) * a1;
    amp[x | m] = gate(1, 0) * a0 + gate(1, 1) * a1;
  }
  return make_unchecked(std::move(amp));
}

QuantumState apply_binary(const QuantumState& q, const Matrix& gate, std::size_t i, std::size_t j) {
  check_index(q, i);
  check_index(q, j);
  if (i == j) throw std::invalid_argument("binary gate needs two distinct qubits");
  if (gate.dim() != 4) throw std::invalid_argument("binary gate must be 4x4");
  std::size_t mi = bit_mask(q.qubits(), i), mj = bit_mask(q.qubits(), j);
  std::vector<Complex> amp = q.amplitudes();
  for (std::size_t x = 0; x < amp.size(); ++x) {
    if (x & (mi | mj)) continue;
    const std::size_t idx[4] = {x, x | mj, x | mi, x | mi | mj};
    Complex in[4];
    for (int k = 0; k < 4; ++k) in[k] = q[idx[k]];
    for (int r = 0; r < 4; ++r) {
      Complex s = 0.0;
      for (int c = 0; c < 4; ++c) s += gate(r, c) * in[c];
      amp[idx[r]] = s;
    }
  }
  return make_unchecked(std::move(amp));
}

double outcome_probability(const QuantumState& q, std::size_t i, int bit) {
  check_index(q, i);
  std::size_t m = bit_mask(q.qubits(), i);
  double p = 0.0;
  for (std::size_t x = 0; x < q.dimension(); ++x)
    if (((x & m) != 0) == (bit != 0)) p += std::norm(q[x]);
  return p;
}

QuantumState project(const QuantumState& q, std::size_t i, int bit) {
  double p = outcome_probability(q, i, bit);
  if (p < kDropThreshold) throw std::domain_error("projection onto a zero-probability outcome");
  std::size_t m = bit_mask(q.qubits(), i);
  std::vector<Complex> amp(q.dimension() / 2);
  double scale = 1.0 / std::sqrt(p);
  for (std::size_t x = 0; x < q.dimension(); ++x)
    if (((x & m) != 0) == (bit != 0)) amp[drop_bit(x, m)] = q[x] * scale;
  return make_unchecked(std::move(amp));
}

std::vector<MeasureOutcome> measure(const QuantumState& q, std::size_t i) {
  check_index(q, i);
  std::vector<MeasureOutcome> out;
  for (int b = 0; b < 2; ++b) {
    double p = outcome_probability(q, i, b);
    if (p < kDropThreshold) continue;
    out.push_back({b, p, project(q, i, b)});
  }
  return out;
}

}  // namespace qlambda
