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

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace vpe::lang {

/// 1-based source position.
struct Span {
  int line = 0;
  int column = 0;
  friend bool operator==(const Span&, const Span&) = default;
};

enum class UnaryOp { Neg, Not };
enum class BinaryOp { Add, Sub, Mul, Div, FloorDiv, Mod, Pow };
enum class CompareOp { Eq, Ne, Lt, Le, Gt, Ge };
enum class BoolOp { And, Or };

const char* symbol(UnaryOp op);
const char* symbol(BinaryOp op);
const char* symbol(CompareOp op);
const char* symbol(BoolOp op);

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

struct NoneLit {
  friend bool operator==(NoneLit, NoneLit) { return true; }
};
using LiteralValue = std::variant<NoneLit, bool, std::int64_t, double, std::string>;

namespace expr {
struct Literal {
  LiteralValue value;
};
struct List {
  std::vector<ExprPtr> items;
};
struct Name {
  std::string id;
};
struct Attribute {
  ExprPtr object;
  std::string attr;
};
struct Index {
  ExprPtr object;
  ExprPtr index;
};
/// Any bound may be null.
struct Slice {
  ExprPtr object;
  ExprPtr lower;
  ExprPtr upper;
  ExprPtr step;
};
struct Keyword {
  std::string name;
  ExprPtr value;
};
struct Call {
  ExprPtr callee;
  std::vector<ExprPtr> args;
  std::vector<Keyword> kwargs;
};
struct Unary {
  UnaryOp op;
  ExprPtr operand;
};
struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
/// Chained comparison `a < b <= c`.
struct Compare {
  ExprPtr first;
  std::vector<std::pair<CompareOp, ExprPtr>> rest;
};
struct Bool {
  BoolOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};
}  // namespace expr

struct Expr {
  using Node = std::variant<expr::Literal, expr::List, expr::Name, expr::Attribute,
                            expr::Index, expr::Slice, expr::Call, expr::Unary,
                            expr::Binary, expr::Compare, expr::Bool>;
  Node node;
  Span span;
  int height = 1;  // longest path to a leaf, bounded by the parser
};

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

namespace stmt {
struct Assign {
  std::string target;
  ExprPtr value;
};
struct IfBranch {
  ExprPtr condition;
  Block body;
};
struct If {
  std::vector<IfBranch> branches;  // if + elifs
  Block orelse;
};
struct For {
  std::string var;
  ExprPtr iterable;
  Block body;
};
struct Return {
  ExprPtr value;  // may be null
};
struct ExprStmt {
  ExprPtr value;
};
struct Pass {};
}  // namespace stmt

struct Stmt {
  using Node = std::variant<stmt::Assign, stmt::If, stmt::For, stmt::Return,
                            stmt::ExprStmt, stmt::Pass>;
  Node node;
  Span span;
};

/// A parsed visual program. When the source used the
/// `def execute_command(...)` wrapper, `params` holds its parameter names.
struct Program {
  std::string source;
  std::optional<std::vector<std::string>> params;
  Span def_span;
  Block body;
};

/// Structural equality, ignoring spans and source text.
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Block& a, const Block& b);
bool structurally_equal(const Program& a, const Program& b);

/// Canonical source text for the AST; parsing it yields a structurally
/// equal program.
std::string to_source(const Program& p);
std::string to_source(const Expr& e);

/// Python-style literal rendering of a float (`3.0`, `0.1`, `1e+20`).
std::string format_float(double v);
std::string quote_string(const std::string& s);

}  // namespace vpe::lang
