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

#include "qlambda/io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "qlambda/parser.hpp"
#include "qlambda/syntax.hpp"

namespace qlambda {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

// Parses the literal starting at `pos` in `text`; returns the offset one past
// the closing bracket.
std::size_t parse_state_at(std::string_view text, std::size_t pos, std::vector<Complex>& out) {
  auto fail = [&](const std::string& msg, std::size_t at) -> void {
    auto [l, c] = line_col(text, at);
    throw ParseError(msg, l, c);
  };
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto number = [&]() -> double {
    skip_ws();
    std::string buf;
    std::size_t start = pos;
    while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                                 std::string_view("+-.eE").find(text[pos]) != std::string_view::npos))
      buf.push_back(text[pos++]);
    char* end = nullptr;
    double v = std::strtod(buf.c_str(), &end);
    if (buf.empty() || end != buf.c_str() + buf.size()) fail("expected a number", start);
    return v;
  };
  auto expect = [&](char ch) {
    skip_ws();
    if (pos >= text.size() || text[pos] != ch) fail(std::string("expected '") + ch + "'", pos);
    ++pos;
  };

  expect('[');
  skip_ws();
  if (pos < text.size() && text[pos] == ']') fail("empty state literal", pos);
  while (true) {
    double re = number();
    expect(',');
    double im = number();
    out.emplace_back(re, im);
    skip_ws();
    if (pos < text.size() && text[pos] == ';') {
      ++pos;
      continue;
    }
    expect(']');
    return pos;
  }
}

QuantumState make_state(std::vector<Complex> amp) {
  try {
    return QuantumState(std::move(amp));
  } catch (const std::invalid_argument& e) {
    throw ProgramError(e.what());
  }
}

json complex_pair(const Complex& c) { return json::array({c.real(), c.imag()}); }

}  // namespace

QuantumState parse_state_literal(std::string_view text) {
  std::vector<Complex> amp;
  std::size_t end = parse_state_at(text, 0, amp);
  for (; end < text.size(); ++end)
    if (!std::isspace(static_cast<unsigned char>(text[end]))) {
      auto [l, c] = line_col(text, end);
      throw ParseError("trailing text after state literal", l, c);
    }
  return make_state(std::move(amp));
}

ProgramText parse_program_text(std::string_view text, const GateTable& gates) {
  std::string term_text(text);
  QuantumState state;

  // Find the first significant line; only it may carry the state.
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::size_t k = pos;
    while (k < eol && std::isspace(static_cast<unsigned char>(text[k]))) ++k;
    if (k == eol || text[k] == '#') {
      pos = eol + 1;
      continue;
    }
    if (text.substr(k, 6) == "state:") {
      std::vector<Complex> amp;
      std::size_t end = parse_state_at(text, k + 6, amp);
      for (std::size_t b = k; b < end; ++b)
        if (term_text[b] != '\n') term_text[b] = ' ';
      state = make_state(std::move(amp));
    }
    break;
  }

  Term t = parse_term(term_text, gates);
  return {std::move(state), std::move(t)};
}

Program parse_program(std::string_view text, const GateTable& gates) {
  ProgramText pt = parse_program_text(text, gates);
  return Program(std::move(pt.state), std::move(pt.term));
}

Program load_program_file(const std::string& path, const GateTable& gates) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_program(ss.str(), gates);
}

json state_to_json(const QuantumState& q) {
  json arr = json::array();
  for (const auto& a : q.amplitudes()) arr.push_back(complex_pair(a));
  return arr;
}

json program_to_json(const Program& p) {
  return json{{"state", state_to_json(p.state())}, {"term", print_term(p.term())}};
}

json choice_to_json(const Choice& c) {
  if (!c) return nullptr;
  return json{{"pos", to_string(c->pos)}, {"kind", redex_name(c->kind)}, {"surface", c->is_surface}};
}

json schedule_to_json(const Schedule& s) {
  json arr = json::array();
  for (const auto& c : s) arr.push_back(choice_to_json(c));
  return arr;
}

Position parse_position(std::string_view text) {
  static const std::pair<std::string_view, Step> names[] = {
      {"body", Step::Body},       {"fun", Step::Fun},         {"arg", Step::Arg},
      {"subject", Step::Subject}, {"branch0", Step::Branch0}, {"branch1", Step::Branch1},
      {"boxed", Step::Boxed}};
  auto trim = [](std::string_view v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.remove_prefix(1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.remove_suffix(1);
    return v;
  };
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']')
    throw std::invalid_argument("position must look like [fun,arg]");
  text = trim(text.substr(1, text.size() - 2));
  Position pos;
  while (!text.empty()) {
    std::size_t comma = text.find(',');
    std::string_view item = trim(text.substr(0, comma));
    auto it = std::find_if(std::begin(names), std::end(names),
                           [&](const auto& n) { return n.first == item; });
    if (it == std::end(names)) throw std::invalid_argument("unknown position step '" + std::string(item) + "'");
    pos.push_back(it->second);
    if (comma == std::string_view::npos) break;
    text = text.substr(comma + 1);
  }
  return pos;
}

RedexKind parse_redex_kind(std::string_view name) {
  for (auto k : {RedexKind::BetaLin, RedexKind::BetaBang, RedexKind::QNew, RedexKind::QUnary,
                 RedexKind::QBinary, RedexKind::QMeas})
    if (name == redex_name(k)) return k;
  throw std::invalid_argument("unknown redex kind '" + std::string(name) + "'");
}

Choice choice_from_json(const json& j) {
  if (j.is_null()) return std::nullopt;
  RedexOccurrence r;
  r.pos = parse_position(j.at("pos").get<std::string>());
  r.kind = parse_redex_kind(j.at("kind").get<std::string>());
  r.is_surface = j.contains("surface") ? j.at("surface").get<bool>() : is_surface_path(r.pos);
  return r;
}

Schedule schedule_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("a schedule is an array of choices");
  Schedule s;
  for (const auto& c : j) s.push_back(choice_from_json(c));
  return s;
}

json trace_record(const Engine& engine, const TraceStep& step, Mode mode) {
  json entries = json::array();
  for (const auto& e : step.mdist.entries()) {
    entries.push_back(json{{"weight", e.weight},
                           {"state", state_to_json(e.program.state())},
                           {"term", print_term(e.program.term())},
                           {"snf", engine.is_snf(e.program)}});
  }
  return json{{"step", step.step},
              {"mode", mode_name(mode)},
              {"schedule", step.step == 0 ? json(nullptr) : schedule_to_json(step.schedule)},
              {"entries", entries},
              {"pr_snf", step.pr_snf}};
}

std::string format_program(const Program& p) {
  return "(" + p.state().to_string() + ", " + print_term(p.term()) + ")";
}

std::string format_mdist(const MultiDistribution& m) {
  std::ostringstream os;
  os << std::setprecision(9);
  os << "[";
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k) os << ", ";
    os << m[k].weight << " " << format_program(m[k].program);
  }
  os << "]";
  return os.str();
}

void add_gates_from_json(const json& j, GateTable& table) {
  if (!j.is_object()) throw std::invalid_argument("gate table must be a JSON object");
  for (const auto& [name, rows] : j.items()) {
    if (!rows.is_array() || rows.empty())
      throw std::invalid_argument("gate '" + name + "': expected an array of rows");
    std::size_t dim = rows.size();
    std::vector<Complex> data;
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != dim)
        throw std::invalid_argument("gate '" + name + "': matrix is not square");
      for (const auto& cell : row) {
        if (cell.is_number()) {
          data.emplace_back(cell.get<double>(), 0.0);
        } else if (cell.is_array() && cell.size() == 2) {
          data.emplace_back(cell[0].get<double>(), cell[1].get<double>());
        } else {
          throw std::invalid_argument("gate '" + name + "': entries are numbers or [re, im]");
        }
      }
    }
    table.add(name, Matrix(dim, std::move(data)));
  }
}

GateTable load_gates_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  GateTable table = GateTable::builtin();
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("gate file: ") + e.what());
  }
  add_gates_from_json(j, table);
  return table;
}

}  // namespace qlambda
