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

#include "vpe/lang/parser.hpp"

#include <algorithm>
#include <utility>

#include "lexer.hpp"

namespace vpe::lang {

namespace {

using detail::Token;
using detail::TokenKind;

[[noreturn]] void fail(std::string message, Span span) {
  throw VplException(VplError::parse(std::move(message), span));
}

int height_of(const ExprPtr& e) { return e ? e->height : 0; }

int child_height(const Expr::Node& node) {
  return std::visit(
      [](const auto& n) -> int {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, expr::Literal> || std::is_same_v<T, expr::Name>) {
          return 0;
        } else if constexpr (std::is_same_v<T, expr::List>) {
          int h = 0;
          for (const auto& i : n.items) h = std::max(h, height_of(i));
          return h;
        } else if constexpr (std::is_same_v<T, expr::Attribute>) {
          return height_of(n.object);
        } else if constexpr (std::is_same_v<T, expr::Index>) {
          return std::max(height_of(n.object), height_of(n.index));
        } else if constexpr (std::is_same_v<T, expr::Slice>) {
          return std::max({height_of(n.object), height_of(n.lower), height_of(n.upper),
                           height_of(n.step)});
        } else if constexpr (std::is_same_v<T, expr::Call>) {
          int h = height_of(n.callee);
          for (const auto& a : n.args) h = std::max(h, height_of(a));
          for (const auto& k : n.kwargs) h = std::max(h, height_of(k.value));
          return h;
        } else if constexpr (std::is_same_v<T, expr::Unary>) {
          return height_of(n.operand);
        } else if constexpr (std::is_same_v<T, expr::Compare>) {
          int h = height_of(n.first);
          for (const auto& r : n.rest) h = std::max(h, height_of(r.second));
          return h;
        } else {
          return std::max(height_of(n.lhs), height_of(n.rhs));
        }
      },
      node);
}

template <typename T>
ExprPtr make_expr(T node, Span span) {
  auto e = std::make_unique<Expr>(Expr{std::move(node), span});
  e->height = child_height(e->node) + 1;
  if (e->height > kMaxExpressionHeight) fail("expression too deeply nested", span);
  return e;
}

template <typename T>
StmtPtr make_stmt(T node, Span span) {
  return std::make_unique<Stmt>(Stmt{std::move(node), span});
}

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Program parse_program(std::string_view source) {
    Program prog;
    prog.source = std::string(source);
    Block top;
    std::optional<std::size_t> wrapper_index;
    while (!at(TokenKind::End)) {
      if (at_keyword("def")) {
        if (wrapper_index) {
          fail("construct not allowed: function definition", cur().span);
        }
        wrapper_index = top.size();
        parse_wrapper(prog);
        top.push_back(nullptr);  // placeholder keeps statement order
        continue;
      }
      top.push_back(parse_statement());
    }
    if (!wrapper_index) {
      prog.body = std::move(top);
      return prog;
    }
    // Only docstrings may accompany the wrapper at top level.
    for (auto& s : top) {
      if (!s) continue;
      const auto* es = std::get_if<stmt::ExprStmt>(&s->node);
      const auto* lit =
          es ? std::get_if<expr::Literal>(&es->value->node) : nullptr;
      if (!lit || !std::holds_alternative<std::string>(lit->value)) {
        fail("construct not allowed: statements outside " +
                 std::string(kEntryPoint),
             s->span);
      }
    }
    return prog;
  }

 private:
  // --- token helpers ---
  const Token& cur() const { return toks_[pos_]; }
  const Token& peek_tok(std::size_t ahead = 1) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  bool at(TokenKind k) const { return cur().kind == k; }
  bool at_op(std::string_view op) const {
    return cur().kind == TokenKind::Op && cur().text == op;
  }
  bool at_keyword(std::string_view kw) const {
    return cur().kind == TokenKind::Keyword && cur().text == kw;
  }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  std::string describe(const Token& t) const {
    switch (t.kind) {
      case TokenKind::Name: return "name '" + t.text + "'";
      case TokenKind::Keyword: return "keyword '" + t.text + "'";
      case TokenKind::Int:
      case TokenKind::Float: return "number " + t.text;
      case TokenKind::String: return "string literal";
      case TokenKind::Op: return "'" + t.text + "'";
      case TokenKind::Newline: return "end of line";
      case TokenKind::Indent: return "indent";
      case TokenKind::Dedent: return "dedent";
      case TokenKind::End: return "end of input";
    }
    return "token";
  }

  [[noreturn]] void unexpected(std::string_view expected) {
    const Token& t = cur();
    if (t.kind == TokenKind::Keyword) {
      auto construct = detail::forbidden_construct(t.text);
      if (!construct.empty()) {
        fail("construct not allowed: " + std::string(construct), t.span);
      }
      if (t.text == "if") fail("construct not allowed: conditional expression", t.span);
      if (t.text == "for") fail("construct not allowed: comprehension", t.span);
      if (t.text == "in") fail("construct not allowed: membership test", t.span);
    }
    if (t.kind == TokenKind::Op && t.text == ",") {
      fail("construct not allowed: tuple", t.span);
    }
    if (t.kind == TokenKind::Op && t.text == "->") {
      fail("unexpected '->'", t.span);
    }
    fail("expected " + std::string(expected) + ", found " + describe(t), t.span);
  }

  void expect_op(std::string_view op) {
    if (!at_op(op)) unexpected("'" + std::string(op) + "'");
    take();
  }

  std::string expect_name() {
    if (!at(TokenKind::Name)) unexpected("a name");
    return take().text;
  }

  void expect_newline() {
    if (at(TokenKind::Newline)) {
      take();
      return;
    }
    if (at(TokenKind::End) || at(TokenKind::Dedent)) return;
    unexpected("end of line");
  }

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& parser, Span span) : p(parser) {
      if (++p.depth_ > kMaxNestingDepth) fail("nesting too deep", span);
    }
    ~DepthGuard() { --p.depth_; }
  };

  // --- statements ---
  void parse_wrapper(Program& prog) {
    const Span span = take().span;  // def
    const std::string name = expect_name();
    if (name != kEntryPoint || depth_ > 0) {
      fail("construct not allowed: function definition", span);
    }
    expect_op("(");
    std::vector<std::string> params;
    while (!at_op(")")) {
      params.push_back(expect_name());
      if (at_op(":")) {
        take();
        (void)parse_expr();  // annotation, discarded
      }
      if (at_op("=")) fail("construct not allowed: default argument", cur().span);
      if (!at_op(",")) break;
      take();
    }
    expect_op(")");
    if (params.empty() || params.size() > 3) {
      fail(std::string(kEntryPoint) + " takes between 1 and 3 parameters", span);
    }
    if (at_op("->")) {
      take();
      (void)parse_expr();
    }
    expect_op(":");
    prog.params = std::move(params);
    prog.def_span = span;
    prog.body = parse_suite(span);
  }

  Block parse_suite(Span owner) {
    DepthGuard guard(*this, owner);
    Block body;
    if (!at(TokenKind::Newline)) {
      if (at_keyword("if") || at_keyword("for")) {
        fail("compound statement must start on its own line", cur().span);
      }
      body.push_back(parse_simple_statement());
      return body;
    }
    take();
    if (!at(TokenKind::Indent)) unexpected("an indented block");
    take();
    while (!at(TokenKind::Dedent) && !at(TokenKind::End)) {
      if (at_keyword("def")) fail("construct not allowed: function definition", cur().span);
      body.push_back(parse_statement());
    }
    if (at(TokenKind::Dedent)) take();
    return body;
  }

  StmtPtr parse_statement() {
    if (at(TokenKind::Indent)) fail("unexpected indent", cur().span);
    if (at_keyword("if")) return parse_if();
    if (at_keyword("for")) return parse_for();
    return parse_simple_statement();
  }

  StmtPtr parse_if() {
    const Span span = take().span;
    stmt::If node;
    ExprPtr cond = parse_expr();
    expect_op(":");
    node.branches.push_back({std::move(cond), parse_suite(span)});
    while (at_keyword("elif")) {
      const Span s = take().span;
      ExprPtr c = parse_expr();
      expect_op(":");
      node.branches.push_back({std::move(c), parse_suite(s)});
    }
    if (at_keyword("else")) {
      const Span s = take().span;
      expect_op(":");
      node.orelse = parse_suite(s);
    }
    return make_stmt(std::move(node), span);
  }

  StmtPtr parse_for() {
    const Span span = take().span;
    std::string var = expect_name();
    if (at_op(",")) fail("construct not allowed: tuple unpacking", cur().span);
    if (!at_keyword("in")) unexpected("'in'");
    take();
    ExprPtr iterable = parse_expr();
    if (at_op(",")) fail("construct not allowed: tuple", cur().span);
    expect_op(":");
    Block body = parse_suite(span);
    return make_stmt(stmt::For{std::move(var), std::move(iterable), std::move(body)},
                     span);
  }

  StmtPtr parse_simple_statement() {
    const Span span = cur().span;
    if (at(TokenKind::Keyword)) {
      auto construct = detail::forbidden_construct(cur().text);
      if (!construct.empty()) fail("construct not allowed: " + std::string(construct), span);
      if (cur().text == "return") {
        take();
        ExprPtr value;
        if (!at(TokenKind::Newline) && !at(TokenKind::End) && !at(TokenKind::Dedent)) {
          value = parse_expr();
        }
        expect_newline();
        return make_stmt(stmt::Return{std::move(value)}, span);
      }
      if (cur().text == "pass") {
        take();
        expect_newline();
        return make_stmt(stmt::Pass{}, span);
      }
      if (cur().text == "elif" || cur().text == "else") {
        fail("'" + cur().text + "' without matching 'if'", span);
      }
    }
    ExprPtr target = parse_expr();
    if (at_op("=")) {
      take();
      std::string name = assignment_target(*target);
      ExprPtr value = parse_expr();
      if (at_op("=")) fail("construct not allowed: chained assignment", cur().span);
      expect_newline();
      return make_stmt(stmt::Assign{std::move(name), std::move(value)}, span);
    }
    static constexpr std::pair<std::string_view, BinaryOp> kAug[] = {
        {"+=", BinaryOp::Add}, {"-=", BinaryOp::Sub}, {"*=", BinaryOp::Mul},
        {"/=", BinaryOp::Div}, {"%=", BinaryOp::Mod}};
    for (const auto& [op, bin] : kAug) {
      if (at_op(op)) {
        take();
        std::string name = assignment_target(*target);
        ExprPtr rhs = parse_expr();
        expect_newline();
        ExprPtr value = make_expr(
            expr::Binary{bin, make_expr(expr::Name{name}, target->span), std::move(rhs)},
            target->span);
        return make_stmt(stmt::Assign{std::move(name), std::move(value)}, span);
      }
    }
    expect_newline();
    return make_stmt(stmt::ExprStmt{std::move(target)}, span);
  }

  std::string assignment_target(const Expr& target) {
    if (const auto* n = std::get_if<expr::Name>(&target.node)) return n->id;
    if (std::holds_alternative<expr::Attribute>(target.node)) {
      fail("construct not allowed: attribute assignment", target.span);
    }
    if (std::holds_alternative<expr::Index>(target.node) ||
        std::holds_alternative<expr::Slice>(target.node)) {
      fail("construct not allowed: index assignment", target.span);
    }
    fail("invalid assignment target", target.span);
  }

  // --- expressions ---
  ExprPtr parse_expr() {
    DepthGuard guard(*this, cur().span);
    return parse_or();
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    while (at_keyword("or")) {
      const Span span = take().span;
      lhs = make_expr(expr::Bool{BoolOp::Or, std::move(lhs), parse_and()}, span);
    }
    return lhs;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    while (at_keyword("and")) {
      const Span span = take().span;
      lhs = make_expr(expr::Bool{BoolOp::And, std::move(lhs), parse_not()}, span);
    }
    return lhs;
  }

  ExprPtr parse_not() {
    if (at_keyword("not")) {
      const Span span = take().span;
      DepthGuard guard(*this, span);
      return make_expr(expr::Unary{UnaryOp::Not, parse_not()}, span);
    }
    return parse_comparison();
  }

  std::optional<CompareOp> compare_op() const {
    if (cur().kind != TokenKind::Op) return std::nullopt;
    const auto& t = cur().text;
    if (t == "==") return CompareOp::Eq;
    if (t == "!=") return CompareOp::Ne;
    if (t == "<") return CompareOp::Lt;
    if (t == "<=") return CompareOp::Le;
    if (t == ">") return CompareOp::Gt;
    if (t == ">=") return CompareOp::Ge;
    return std::nullopt;
  }

  ExprPtr parse_comparison() {
    ExprPtr first = parse_arith();
    expr::Compare node;
    const Span span = first->span;
    while (true) {
      if (at_keyword("in") || (at_keyword("not") && peek_tok().text == "in")) {
        fail("construct not allowed: membership test", cur().span);
      }
      if (at_keyword("is")) fail("construct not allowed: identity comparison", cur().span);
      auto op = compare_op();
      if (!op) break;
      take();
      node.rest.emplace_back(*op, parse_arith());
    }
    if (node.rest.empty()) return first;
    node.first = std::move(first);
    return make_expr(std::move(node), span);
  }

  ExprPtr parse_arith() {
    ExprPtr lhs = parse_term();
    while (at_op("+") || at_op("-")) {
      const Token& t = take();
      const BinaryOp op = t.text == "+" ? BinaryOp::Add : BinaryOp::Sub;
      lhs = make_expr(expr::Binary{op, std::move(lhs), parse_term()}, t.span);
    }
    return lhs;
  }

  ExprPtr parse_term() {
    ExprPtr lhs = parse_factor();
    while (at_op("*") || at_op("/") || at_op("//") || at_op("%")) {
      const Token& t = take();
      BinaryOp op = BinaryOp::Mul;
      if (t.text == "/") op = BinaryOp::Div;
      if (t.text == "//") op = BinaryOp::FloorDiv;
      if (t.text == "%") {
        op = BinaryOp::Mod;
        const auto* lit = std::get_if<expr::Literal>(&lhs->node);
        if (lit && std::holds_alternative<std::string>(lit->value)) {
          fail("construct not allowed: string formatting", t.span);
        }
      }
      lhs = make_expr(expr::Binary{op, std::move(lhs), parse_factor()}, t.span);
    }
    return lhs;
  }

  ExprPtr parse_factor() {
    if (at_op("-")) {
      const Span span = take().span;
      DepthGuard guard(*this, span);
      return make_expr(expr::Unary{UnaryOp::Neg, parse_factor()}, span);
    }
    if (at_op("+")) fail("construct not allowed: unary plus", cur().span);
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_postfix();
    if (at_op("**")) {
      const Span span = take().span;
      DepthGuard guard(*this, span);
      return make_expr(expr::Binary{BinaryOp::Pow, std::move(base), parse_factor()}, span);
    }
    return base;
  }

  ExprPtr parse_postfix() {
    ExprPtr e = parse_atom();
    int chain = 0;
    while (true) {
      if (++chain > kMaxNestingDepth) fail("nesting too deep", cur().span);
      if (at_op("(")) {
        const Span span = take().span;
        expr::Call call{std::move(e), {}, {}};
        parse_call_args(call);
        e = make_expr(std::move(call), span);
      } else if (at_op("[")) {
        const Span span = take().span;
        e = parse_subscript(std::move(e), span);
      } else if (at_op(".")) {
        const Span span = take().span;
        std::string attr = expect_name();
        if (attr == "format" && at_op("(")) {
          fail("construct not allowed: string formatting", span);
        }
        e = make_expr(expr::Attribute{std::move(e), std::move(attr)}, span);
      } else {
        return e;
      }
    }
  }

  void parse_call_args(expr::Call& call) {
    while (!at_op(")")) {
      if (at_op("*") || at_op("**")) {
        fail("construct not allowed: argument unpacking", cur().span);
      }
      if (at(TokenKind::Name) && peek_tok().kind == TokenKind::Op &&
          peek_tok().text == "=") {
        std::string name = take().text;
        take();
        call.kwargs.push_back({std::move(name), parse_expr()});
      } else {
        if (!call.kwargs.empty()) {
          fail("positional argument follows keyword argument", cur().span);
        }
        call.args.push_back(parse_expr());
      }
      if (at_keyword("for")) fail("construct not allowed: comprehension", cur().span);
      if (!at_op(",")) break;
      take();
    }
    expect_op(")");
  }

  ExprPtr parse_subscript(ExprPtr object, Span span) {
    ExprPtr parts[3];
    int colons = 0;
    if (!at_op(":")) parts[0] = parse_expr();
    while (at_op(":") && colons < 2) {
      take();
      ++colons;
      if (!at_op(":") && !at_op("]")) parts[colons] = parse_expr();
    }
    if (at_op(",")) fail("construct not allowed: tuple index", cur().span);
    expect_op("]");
    if (colons == 0) {
      return make_expr(expr::Index{std::move(object), std::move(parts[0])}, span);
    }
    return make_expr(expr::Slice{std::move(object), std::move(parts[0]),
                                 std::move(parts[1]), std::move(parts[2])},
                     span);
  }

  ExprPtr parse_atom() {
    const Token& t = cur();
    const Span span = t.span;
    switch (t.kind) {
      case TokenKind::Name:
        take();
        return make_expr(expr::Name{t.text}, span);
      case TokenKind::Int:
      case TokenKind::Float:
      case TokenKind::String:
        take();
        return make_expr(expr::Literal{t.literal}, span);
      case TokenKind::Keyword:
        if (t.text == "True" || t.text == "False" || t.text == "None") {
          take();
          return make_expr(expr::Literal{t.literal}, span);
        }
        unexpected("an expression");
      case TokenKind::Op:
        if (t.text == "(") {
          take();
          if (at_op(")")) fail("construct not allowed: tuple", span);
          ExprPtr inner = parse_expr();
          if (at_keyword("for")) fail("construct not allowed: comprehension", cur().span);
          if (at_op(",")) fail("construct not allowed: tuple", cur().span);
          expect_op(")");
          return inner;
        }
        if (t.text == "[") {
          take();
          expr::List list;
          while (!at_op("]")) {
            list.items.push_back(parse_expr());
            if (at_keyword("for")) fail("construct not allowed: comprehension", cur().span);
            if (!at_op(",")) break;
            take();
          }
          expect_op("]");
          return make_expr(std::move(list), span);
        }
        unexpected("an expression");
      default:
        unexpected("an expression");
    }
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

std::variant<Program, VplError> parse(std::string_view source) {
  try {
    return parse_or_throw(source);
  } catch (const VplException& e) {
    return e.error();
  }
}

Program parse_or_throw(std::string_view source) {
  Parser parser(detail::tokenize(source));
  return parser.parse_program(source);
}

}  // namespace vpe::lang
