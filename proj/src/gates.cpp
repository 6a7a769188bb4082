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

#include "qlambda/gates.hpp"

#include <cmath>
#include <stdexcept>

namespace qlambda {

GateTable GateTable::builtin() {
  GateTable t;
  const double h = 1.0 / std::sqrt(2.0);
  t.add("H", Matrix(2, {h, h, h, -h}));
  t.add("NOT", Matrix(2, {0.0, 1.0, 1.0, 0.0}));
  t.add("CNOT", Matrix(4, {1.0, 0.0, 0.0, 0.0,
                           0.0, 1.0, 0.0, 0.0,
                           0.0, 0.0, 0.0, 1.0,
                           0.0, 0.0, 1.0, 0.0}));
  return t;
}

void GateTable::add(const std::string& name, Matrix matrix) {
  int arity = 0;
  if (matrix.dim() == 2) {
    arity = 1;
  } else if (matrix.dim() == 4) {
    arity = 2;
  } else {
    throw std::invalid_argument("gate " + name + ": only 2x2 and 4x4 matrices are supported");
  }
  double defect = matrix.unitarity_defect();
  if (defect > kTolerance)
    throw std::invalid_argument("gate " + name + " is not unitary (defect " +
                                std::to_string(defect) + ")");
  gates_[name] = GateDef{arity, std::move(matrix)};
}

const GateDef* GateTable::find(const std::string& name) const {
  auto it = gates_.find(name);
  return it == gates_.end() ? nullptr : &it->second;
}

const GateDef& GateTable::at(const std::string& name) const {
  const GateDef* g = find(name);
  if (!g) throw std::out_of_range("unknown gate " + name);
  return *g;
}

std::vector<std::string> GateTable::names() const {
  std::vector<std::string> out;
  for (const auto& [name, def] : gates_) out.push_back(name);
  return out;
}

}  // namespace qlambda
