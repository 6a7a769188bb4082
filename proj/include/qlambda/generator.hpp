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

#ifndef QLAMBDA_GENERATOR_HPP
#define QLAMBDA_GENERATOR_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>

#include "qlambda/program.hpp"

namespace qlambda {

enum class Profile {
  Balanced,
  QuantumHeavy,  // favors new, gates and measurement
  BetaHeavy,     // favors redexes, including redexes under bangs
  Mixed,         // one of the above, picked by the seed
};

Profile parse_profile(const std::string& s);
const char* profile_name(Profile p);

/// Random valid program whose term has at most `size` nodes.
///
/// Validity holds by construction: linear binders and registers are
/// threaded as obligations that are discharged exactly once along surface
/// paths, bang and branch bodies never receive obligations, and the memory
/// is a random complex Gaussian vector, normalized, over the registers.
Program gen_program(std::size_t size, std::uint64_t seed, Profile profile = Profile::Balanced);

/// Random normalized state on n qubits.
QuantumState random_state(std::size_t n, std::mt19937_64& rng);

/// Deterministic per-instance seed derived from a suite seed.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace qlambda

#endif  // QLAMBDA_GENERATOR_HPP
