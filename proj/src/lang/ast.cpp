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

#include "vpe/lang/ast.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace vpe::lang {

const char* symbol(UnaryOp op) { return op == UnaryOp::Neg ? "-" : "not "; }

const char* symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::FloorDiv: return "//";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Pow: return "**";
  }
  return "?";
}

const char* symbol(CompareOp op) {
  switch (op) {
    case CompareOp::Eq: return "==";
    case CompareOp::Ne: return "!=";
    case CompareOp::Lt: return "<";
    case CompareOp::Le: return "<=";
    case CompareOp::Gt: return ">";
    case CompareOp::Ge: return ">=";
  }
  return "?";
}

const char* symbol(BoolOp op) { return op == BoolOp::And ? "and" : "or"; }

// ---------------------------------------------------------------------------
// Structural equality

namespace {

bool eq(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}

bool eq_literal(const LiteralValue& a, const LiteralValue& b) {
  if (a.index() != b.index()) return false;
  if (const auto* da = std::get_if<double>(&a)) {
    const double db = std::get<double>(b);
    return *da == db || (std::isnan(*da) && std::isnan(db));
  }
  return a == b;
}

struct ExprEq {
  const Expr::Node& other;

  bool operator()(const expr::Literal& a) const {
    return eq_literal(a.value, std::get<expr::Literal>(other).value);
  }
  bool operator()(const expr::List& a) const {
    const auto& b = std::get<expr::List>(other);
    if (a.items.size() != b.items.size()) return false;
    for (std::size_t i = 0; i < a.items.size(); ++i)
      if (!eq(a.items[i], b.items[i])) return false;
    return true;
  }
  bool operator()(const expr::Name& a) const {
    return a.id == std::get<expr::Name>(other).id;
  }
  bool operator()(const expr::Attribute& a) const {
    const auto& b = std::get<expr::Attribute>(other);
    return a.attr == b.attr && eq(a.object, b.object);
  }
  bool operator()(const expr::Index& a) const {
    const auto& b = std::get<expr::Index>(other);
    return eq(a.object, b.object) && eq(a.index, b.index);
  }
  bool operator()(const expr::Slice& a) const {
    const auto& b = std::get<expr::Slice>(other);
    return eq(a.object, b.object) && eq(a.lower, b.lower) && eq(a.upper, b.upper) &&
           eq(a.step, b.step);
  }
  bool operator()(const expr::Call& a) const {
    const auto& b = std::get<expr::Call>(other);
    if (!eq(a.callee, b.callee) || a.args.size() != b.args.size() ||
        a.kwargs.size() != b.kwargs.size())
      return false;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (!eq(a.args[i], b.args[i])) return false;
    for (std::size_t i = 0; i < a.kwargs.size(); ++i)
      if (a.kwargs[i].name != b.kwargs[i].name || !eq(a.kwargs[i].value, b.kwargs[i].value))
        return false;
    return true;
  }
  bool operator()(const expr::Unary& a) const {
    const auto& b = std::get<expr::Unary>(other);
    return a.op == b.op && eq(a.operand, b.operand);
  }
  bool operator()(const expr::Binary& a) const {
    const auto& b = std::get<expr::Binary>(other);
    return a.op == b.op && eq(a.lhs, b.lhs) && eq(a.rhs, b.rhs);
  }
  bool operator()(const expr::Compare& a) const {
    const auto& b = std::get<expr::Compare>(other);
    if (!eq(a.first, b.first) || a.rest.size() != b.rest.size()) return false;
    for (std::size_t i = 0; i < a.rest.size(); ++i)
      if (a.rest[i].first != b.rest[i].first || !eq(a.rest[i].second, b.rest[i].second))
        return false;
    return true;
  }
  bool operator()(const expr::Bool& a) const {
    const auto& b = std::get<expr::Bool>(other);
    return a.op == b.op && eq(a.lhs, b.lhs) && eq(a.rhs, b.rhs);
  }
};

bool stmt_equal(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, stmt::Assign>) {
          return x.target == y.target && eq(x.value, y.value);
        } else if constexpr (std::is_same_v<T, stmt::If>) {
          if (x.branches.size() != y.branches.size()) return false;
          for (std::size_t i = 0; i < x.branches.size(); ++i) {
            if (!eq(x.branches[i].condition, y.branches[i].condition) ||
                !structurally_equal(x.branches[i].body, y.branches[i].body))
              return false;
          }
          return structurally_equal(x.orelse, y.orelse);
        } else if constexpr (std::is_same_v<T, stmt::For>) {
          return x.var == y.var && eq(x.iterable, y.iterable) &&
                 structurally_equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, stmt::Return>) {
          return eq(x.value, y.value);
        } else if constexpr (std::is_same_v<T, stmt::ExprStmt>) {
          return eq(x.value, y.value);
        } else {
          return true;
        }
      },
      a.node);
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(ExprEq{b.node}, a.node);
}

bool structurally_equal(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!stmt_equal(*a[i], *b[i])) return false;
  return true;
}

bool structurally_equal(const Program& a, const Program& b) {
  return a.params == b.params && structurally_equal(a.body, b.body);
}

// ---------------------------------------------------------------------------
// Source rendering

std::string format_float(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, end);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string quote_string(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\'': out += "\\'"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20 || c == 0x7f) {
          static const char* hex = "0123456789abcdef";
          out += "\\x";
          out.push_back(hex[(static_cast<unsigned char>(c) >> 4) & 0xf]);
          out.push_back(hex[static_cast<unsigned char>(c) & 0xf]);
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back('\'');
  return out;
}

namespace {

bool needs_parens(const Expr& e) {
  return std::holds_alternative<expr::Unary>(e.node) ||
         std::holds_alternative<expr::Binary>(e.node) ||
         std::holds_alternative<expr::Compare>(e.node) ||
         std::holds_alternative<expr::Bool>(e.node);
}

std::string wrap(const Expr& e) {
  std::string s = to_source(e);
  return needs_parens(e) ? "(" + s + ")" : s;
}

// Receivers of `.attr`, `[...]`, `(...)` must render as a primary.
std::string primary(const Expr& e) {
  if (const auto* lit = std::get_if<expr::Literal>(&e.node)) {
    if (std::holds_alternative<std::int64_t>(lit->value) ||
        std::holds_alternative<double>(lit->value)) {
      return "(" + to_source(e) + ")";
    }
  }
  return wrap(e);
}

struct ExprPrinter {
  std::string operator()(const expr::Literal& l) const {
    return std::visit(
        [](const auto& v) -> std::string {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, NoneLit>) return "None";
          else if constexpr (std::is_same_v<T, bool>) return v ? "True" : "False";
          else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
          else if constexpr (std::is_same_v<T, double>) return format_float(v);
          else return quote_string(v);
        },
        l.value);
  }
  std::string operator()(const expr::List& l) const {
    std::string out = "[";
    for (std::size_t i = 0; i < l.items.size(); ++i) {
      if (i) out += ", ";
      out += to_source(*l.items[i]);
    }
    return out + "]";
  }
  std::string operator()(const expr::Name& n) const { return n.id; }
  std::string operator()(const expr::Attribute& a) const {
    return primary(*a.object) + "." + a.attr;
  }
  std::string operator()(const expr::Index& i) const {
    return primary(*i.object) + "[" + to_source(*i.index) + "]";
  }
  std::string operator()(const expr::Slice& s) const {
    std::string out = primary(*s.object) + "[";
    if (s.lower) out += to_source(*s.lower);
    out += ":";
    if (s.upper) out += to_source(*s.upper);
    if (s.step) out += ":" + to_source(*s.step);
    return out + "]";
  }
  std::string operator()(const expr::Call& c) const {
    std::string out = primary(*c.callee) + "(";
    bool first = true;
    for (const auto& a : c.args) {
      if (!first) out += ", ";
      first = false;
      out += to_source(*a);
    }
    for (const auto& k : c.kwargs) {
      if (!first) out += ", ";
      first = false;
      out += k.name + "=" + to_source(*k.value);
    }
    return out + ")";
  }
  std::string operator()(const expr::Unary& u) const {
    return std::string(symbol(u.op)) + wrap(*u.operand);
  }
  std::string operator()(const expr::Binary& b) const {
    return wrap(*b.lhs) + " " + symbol(b.op) + " " + wrap(*b.rhs);
  }
  std::string operator()(const expr::Compare& c) const {
    std::string out = wrap(*c.first);
    for (const auto& [op, e] : c.rest) out += std::string(" ") + symbol(op) + " " + wrap(*e);
    return out;
  }
  std::string operator()(const expr::Bool& b) const {
    return wrap(*b.lhs) + " " + symbol(b.op) + " " + wrap(*b.rhs);
  }
};

void render_block(const Block& block, int indent, std::ostringstream& os);

void render_stmt(const Stmt& s, int indent, std::ostringstream& os) {
  const std::string pad(static_cast<std::size_t>(indent) * 4, ' ');
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, stmt::Assign>) {
          os << pad << n.target << " = " << to_source(*n.value) << '\n';
        } else if constexpr (std::is_same_v<T, stmt::If>) {
          for (std::size_t i = 0; i < n.branches.size(); ++i) {
            os << pad << (i == 0 ? "if " : "elif ") << to_source(*n.branches[i].condition)
               << ":\n";
            render_block(n.branches[i].body, indent + 1, os);
          }
          if (!n.orelse.empty()) {
            os << pad << "else:\n";
            render_block(n.orelse, indent + 1, os);
          }
        } else if constexpr (std::is_same_v<T, stmt::For>) {
          os << pad << "for " << n.var << " in " << to_source(*n.iterable) << ":\n";
          render_block(n.body, indent + 1, os);
        } else if constexpr (std::is_same_v<T, stmt::Return>) {
          os << pad << "return";
          if (n.value) os << ' ' << to_source(*n.value);
          os << '\n';
        } else if constexpr (std::is_same_v<T, stmt::ExprStmt>) {
          os << pad << to_source(*n.value) << '\n';
        } else {
          os << pad << "pass\n";
        }
      },
      s.node);
}

void render_block(const Block& block, int indent, std::ostringstream& os) {
  for (const auto& s : block) render_stmt(*s, indent, os);
}

}  // namespace

std::string to_source(const Expr& e) { return std::visit(ExprPrinter{}, e.node); }

std::string to_source(const Program& p) {
  std::ostringstream os;
  if (p.params) {
    os << "def execute_command(";
    for (std::size_t i = 0; i < p.params->size(); ++i) {
      if (i) os << ", ";
      os << (*p.params)[i];
    }
    os << "):\n";
    render_block(p.body, 1, os);
  } else {
    render_block(p.body, 0, os);
  }
  return os.str();
}

}  // namespace vpe::lang
