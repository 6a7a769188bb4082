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

#ifndef QLAMBDA_GATES_HPP
#define QLAMBDA_GATES_HPP

#include <map>
#include <string>
#include <vector>

#include "qlambda/quantum.hpp"

namespace qlambda {

struct GateDef {
  int arity = 1;
  Matrix matrix;
};

/// Named unitary gates of arity 1 or 2.
class GateTable {
 public:
  GateTable() = default;

  /// H, CNOT and NOT.
  static GateTable builtin();

  /// Arity is read off the matrix dimension (2 or 4). Throws
  /// std::invalid_argument for other sizes or non-unitary matrices.
  void add(const std::string& name, Matrix matrix);

  const GateDef* find(const std::string& name) const;
  const GateDef& at(const std::string& name) const;
  bool contains(const std::string& name) const { return find(name) != nullptr; }
  std::vector<std::string> names() const;

 private:
  std::map<std::string, GateDef> gates_;
};

}  // namespace qlambda

#endif  // QLAMBDA_GATES_HPP
