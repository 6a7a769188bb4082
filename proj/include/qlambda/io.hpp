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

// Program files, JSON export of programs and traces, and gate tables.

#ifndef QLAMBDA_IO_HPP
#define QLAMBDA_IO_HPP

#include <string>
#include <string_view>

#include "json.hpp"
#include "qlambda/gates.hpp"
#include "qlambda/program.hpp"
#include "qlambda/rewrite.hpp"

namespace qlambda {

/// `[re,im; re,im; ...]`. Throws ParseError on malformed text and
/// ProgramError when the vector is not a normalized state.
QuantumState parse_state_literal(std::string_view text);

struct ProgramText {
  QuantumState state;
  Term term;
};

/// An optional `state:` line followed by one term, parsed but not validated.
/// Line numbers in parse errors refer to the whole text.
ProgramText parse_program_text(std::string_view text, const GateTable& gates);
Program parse_program(std::string_view text, const GateTable& gates);
Program load_program_file(const std::string& path, const GateTable& gates);

nlohmann::json state_to_json(const QuantumState& q);
nlohmann::json program_to_json(const Program& p);
nlohmann::json choice_to_json(const Choice& c);
nlohmann::json schedule_to_json(const Schedule& s);

/// Inverses of the exports above, so that a trace's schedules replay.
Position parse_position(std::string_view text);
RedexKind parse_redex_kind(std::string_view name);
Choice choice_from_json(const nlohmann::json& j);
Schedule schedule_from_json(const nlohmann::json& j);

/// One JSONL record of a trace.
nlohmann::json trace_record(const Engine& engine, const TraceStep& step, Mode mode);

/// `p1 (state, term) + p2 (...)`, for humans.
std::string format_program(const Program& p);
std::string format_mdist(const MultiDistribution& m);

/// Object mapping gate names to row-major matrices of [re, im] pairs.
/// Entries are added to `table`; non-unitary matrices are rejected.
void add_gates_from_json(const nlohmann::json& j, GateTable& table);
GateTable load_gates_file(const std::string& path);

}  // namespace qlambda

#endif  // QLAMBDA_IO_HPP
