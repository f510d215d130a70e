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

#include <string>
#include <string_view>
#include <vector>

#include "vpe/lang/ast.hpp"

namespace vpe::lang::detail {

enum class TokenKind { Name, Keyword, Int, Float, String, Op, Newline, Indent, Dedent, End };

struct Token {
  TokenKind kind;
  std::string text;  // identifier, keyword, operator, or raw number text
  LiteralValue literal;
  Span span;
};

/// Splits source into tokens, synthesizing Newline/Indent/Dedent from
/// layout. Throws VplException(ParseError).
std::vector<Token> tokenize(std::string_view source);

bool is_keyword(std::string_view word);

/// For keywords outside the grammar, the construct name used in the
/// "construct not allowed" message; empty for allowed keywords.
std::string_view forbidden_construct(std::string_view keyword);

}  // namespace vpe::lang::detail
