// Copyright 2026 The VPE Authors
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

#pragma once

#include <string_view>
#include <variant>

#include "vpe/lang/ast.hpp"
#include "vpe/lang/error.hpp"

namespace vpe::lang {

/// Name of the optional wrapper function whose body becomes the program.
inline constexpr std::string_view kEntryPoint = "execute_command";

/// Maximum nesting of blocks plus expressions accepted by the parser.
inline constexpr int kMaxNestingDepth = 100;

/// Maximum height of a single expression tree.
inline constexpr int kMaxExpressionHeight = 200;

/// Parses a VPL program. Accepts either a bare statement sequence or a
/// single `def execute_command(...)` wrapper. Anything outside the grammar
/// (imports, while-loops, comprehensions, lambdas, string formatting, other
/// function definitions, ...) is a ParseError carrying line and column.
std::variant<Program, VplError> parse(std::string_view source);

/// Throwing variant of `parse`; raises VplException.
Program parse_or_throw(std::string_view source);

}  // namespace vpe::lang
