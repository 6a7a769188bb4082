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

#ifndef QLAMBDA_PARSER_HPP
#define QLAMBDA_PARSER_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

#include "qlambda/gates.hpp"
#include "qlambda/term.hpp"

namespace qlambda {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Concrete syntax:
///   x   !T   \x. T   \!x. T   \x !y z. T   T T   rN   U[NAME]   new
///   meas(T, T, T)   <T, T, ...>   let <x,y> = T in T   (T)
/// Application is left-associative, lambda bodies extend as far right as
/// possible and `!` binds the following atom. `#` starts a comment.
Term parse_term(std::string_view text, const GateTable& gates);

/// Prints in the syntax accepted by parse_term, re-sugaring pairs.
std::string print_term(const Term& t);

}  // namespace qlambda

#endif  // QLAMBDA_PARSER_HPP
