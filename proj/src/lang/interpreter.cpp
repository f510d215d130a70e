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

#include "vpe/lang/interpreter.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>
#include <new>
#include <unordered_map>

#include "vpe/lang/parser.hpp"
#include "vpe/text.hpp"

namespace vpe::lang {

namespace {

constexpr std::array<std::string_view, 8> kBuiltins{"len", "abs", "min", "max",
                                                    "range", "round", "str", "int"};
constexpr std::string_view kFloatBuiltin = "float";

bool is_builtin(std::string_view name) {
  return name == kFloatBuiltin ||
         std::find(kBuiltins.begin(), kBuiltins.end(), name) != kBuiltins.end();
}

[[noreturn]] void raise(VplError e) { throw VplException(std::move(e)); }

// Python-style floor division and modulo on integers.
std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t floor_mod(std::int64_t a, std::int64_t b) {
  std::int64_t r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

double float_mod(double a, double b) {
  double r = std::fmod(a, b);
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

double round_half_even(double x) {
  const double r = std::round(x);
  if (std::fabs(x - std::trunc(x)) == 0.5) return 2.0 * std::round(x / 2.0);
  return r;
}

// Clamps slice bounds the way CPython's PySlice_AdjustIndices does.
struct SliceIndices {
  std::int64_t start, stop, step, length;
};

SliceIndices adjust_slice(std::int64_t len, std::optional<std::int64_t> lo,
                          std::optional<std::int64_t> hi, std::int64_t step) {
  auto clamp_bound = [&](std::optional<std::int64_t> v, bool is_start) {
    if (!v) {
      if (step > 0) return is_start ? std::int64_t{0} : len;
      return is_start ? len - 1 : std::int64_t{-1};
    }
    std::int64_t x = *v;
    if (x < 0) {
      x += len;
      if (x < 0) x = step < 0 ? -1 : 0;
    } else if (x >= len) {
      x = step < 0 ? len - 1 : len;
    }
    return x;
  };
  const std::int64_t start = clamp_bound(lo, true);
  const std::int64_t stop = clamp_bound(hi, false);
  std::int64_t length = 0;
  if (step > 0 && start < stop) length = (stop - start - 1) / step + 1;
  if (step < 0 && stop < start) length = (start - stop - 1) / (-step) + 1;
  return {start, stop, step, length};
}

class Interpreter {
 public:
  Interpreter(const DispatchTable& tools, const ExecutionLimits& limits)
      : tools_(tools),
        limits_(limits),
        deadline_(std::chrono::steady_clock::now() + limits.wall_clock) {}

  Value run(const Program& program, const ExecutionInput& input) {
    bind_inputs(program, input);
    exec_block(program.body);
    if (!returned_) raise(VplError::return_type(input.expected_kind, "none"));
    return std::move(result_);
  }

 private:
  void bind_inputs(const Program& program, const ExecutionInput& input) {
    Value media = std::visit([](const auto& m) { return Value(m); }, input.media);
    List options;
    for (const auto& o : input.options) options.emplace_back(o);
    if (program.params) {
      const auto& params = *program.params;
      env_[params[0]] = media;
      if (params.size() > 1) env_[params[1]] = Value(input.question);
      if (params.size() > 2) env_[params[2]] = Value(std::move(options));
      return;
    }
    const bool video = std::holds_alternative<VideoSegment>(input.media);
    env_[video ? "video" : "image"] = media;
    env_["question"] = Value(input.question);
    if (!input.options.empty()) env_["possible_answers"] = Value(std::move(options));
  }

  void tick(const Span& span) {
    if (++steps_ > limits_.max_steps) {
      raise(VplError::limit("step limit exceeded (" + std::to_string(limits_.max_steps) + ")",
                            span));
    }
    if ((steps_ & 63) == 0) check_clock(span);
  }

  void check_clock(const Span& span) {
    if (std::chrono::steady_clock::now() > deadline_) {
      raise(VplError::limit("wall-clock budget exhausted", span));
    }
  }

  void check_length(std::int64_t n, const Span& span) {
    if (n > limits_.max_collection_length) {
      raise(VplError::limit("collection length limit exceeded (" +
                                std::to_string(limits_.max_collection_length) + ")",
                            span));
    }
  }

  // --- statements ---
  void exec_block(const Block& block) {
    for (const auto& s : block) {
      exec(*s);
      if (returned_) return;
    }
  }

  void exec(const Stmt& s) {
    tick(s.span);
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, stmt::Assign>) {
            if (append_in_place(n)) return;
            env_[n.target] = eval(*n.value);
          } else if constexpr (std::is_same_v<T, stmt::If>) {
            for (const auto& branch : n.branches) {
              if (truthy(eval(*branch.condition))) {
                exec_block(branch.body);
                return;
              }
            }
            exec_block(n.orelse);
          } else if constexpr (std::is_same_v<T, stmt::For>) {
            exec_for(n, s.span);
          } else if constexpr (std::is_same_v<T, stmt::Return>) {
            result_ = n.value ? eval(*n.value) : Value();
            returned_ = true;
          } else if constexpr (std::is_same_v<T, stmt::ExprStmt>) {
            (void)eval(*n.value);
          }
        },
        s.node);
  }

  // `x = x + [...]` and `x += [...]` extend the list in place when `x` holds
  // the only reference to it. Expressions cannot rebind names, so the result
  // and the step count match the general path.
  bool append_in_place(const stmt::Assign& n) {
    const auto* bin = std::get_if<expr::Binary>(&n.value->node);
    if (!bin || bin->op != BinaryOp::Add) return false;
    const auto* lhs = std::get_if<expr::Name>(&bin->lhs->node);
    if (!lhs || lhs->id != n.target) return false;
    if (auto it = env_.find(n.target); it == env_.end() || !it->second.is<ListPtr>()) return false;
    tick(n.value->span);
    tick(bin->lhs->span);
    const Value rhs = eval(*bin->rhs);
    Value& target = env_.at(n.target);
    const ListPtr& list = target.as<ListPtr>();
    if (!rhs.is<ListPtr>() || list.use_count() != 1) {
      target = binary(BinaryOp::Add, Value(target), rhs, n.value->span);
      return true;
    }
    const List& extra = rhs.list();
    check_length(static_cast<std::int64_t>(list->size() + extra.size()), n.value->span);
    // The list was allocated non-const by Value(List) and nothing else sees it.
    auto& items = const_cast<List&>(*list);
    items.insert(items.end(), extra.begin(), extra.end());
    return true;
  }

  void exec_for(const stmt::For& loop, const Span& span) {
    const Value iterable = eval(*loop.iterable);
    std::int64_t iterations = 0;
    auto body = [&](Value item) {
      if (++iterations > limits_.max_loop_iterations) {
        raise(VplError::limit("loop iteration limit exceeded (" +
                                  std::to_string(limits_.max_loop_iterations) + ")",
                              span));
      }
      env_[loop.var] = std::move(item);
      exec_block(loop.body);
    };
    if (const auto* r = iterable.get_if<RangeValue>()) {
      const std::int64_t n = r->size();
      for (std::int64_t i = 0; i < n && !returned_; ++i) body(Value(r->at(i)));
    } else if (const auto* l = iterable.get_if<ListPtr>()) {
      const ListPtr keep = *l;
      for (std::size_t i = 0; i < keep->size() && !returned_; ++i) body((*keep)[i]);
    } else if (const auto* str = iterable.get_if<std::string>()) {
      const std::string keep = *str;
      for (std::size_t i = 0; i < keep.size() && !returned_; ++i) {
        body(Value(std::string(1, keep[i])));
      }
    } else {
      raise(VplError::type("cannot iterate over " + type_name(iterable), span));
    }
  }

  // --- expressions ---
  Value eval(const Expr& e) {
    tick(e.span);
    return std::visit([&](const auto& n) { return eval_node(n, e.span); }, e.node);
  }

  Value eval_node(const expr::Literal& n, const Span&) {
    return std::visit(
        [](const auto& v) -> Value {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, NoneLit>) return Value();
          else return Value(v);
        },
        n.value);
  }

  Value eval_node(const expr::List& n, const Span& span) {
    check_length(static_cast<std::int64_t>(n.items.size()), span);
    List items;
    items.reserve(n.items.size());
    for (const auto& item : n.items) items.push_back(eval(*item));
    return Value(std::move(items));
  }

  Value eval_node(const expr::Name& n, const Span& span) {
    auto it = env_.find(n.id);
    if (it != env_.end()) return it->second;
    if (is_builtin(n.id) || tools_.contains(n.id)) {
      raise(VplError::type("function '" + n.id + "' cannot be used as a value", span));
    }
    raise(VplError::name("name '" + n.id + "' is not defined", span));
  }

  Value eval_node(const expr::Attribute& n, const Span& span) {
    const Value obj = eval(*n.object);
    if (const auto* p = obj.get_if<ImagePatch>()) {
      const std::string& a = n.attr;
      if (a == "left") return Value(p->left());
      if (a == "right") return Value(p->right());
      if (a == "upper") return Value(p->upper());
      if (a == "lower") return Value(p->lower());
      if (a == "width") return Value(p->width());
      if (a == "height") return Value(p->height());
      if (a == "horizontal_center") return Value(p->horizontal_center());
      if (a == "vertical_center") return Value(p->vertical_center());
    }
    if (const auto* s = obj.get_if<VideoSegment>()) {
      if (n.attr == "start_frame") return Value(std::int64_t{s->start_frame()});
      if (n.attr == "end_frame") return Value(std::int64_t{s->end_frame()});
      if (n.attr == "num_frames") return Value(std::int64_t{s->num_frames()});
    }
    raise(VplError::name("'" + type_name(obj) + "' object has no attribute '" + n.attr + "'",
                         span));
  }

  std::int64_t to_index(const Value& v, const Span& span) {
    if (const auto* i = v.get_if<std::int64_t>()) return *i;
    raise(VplError::type("indices must be integers, not " + type_name(v), span));
  }

  Value eval_node(const expr::Index& n, const Span& span) {
    const Value obj = eval(*n.object);
    const Value idx = eval(*n.index);
    std::int64_t len = 0;
    if (const auto* l = obj.get_if<ListPtr>()) {
      len = static_cast<std::int64_t>((*l)->size());
    } else if (const auto* s = obj.get_if<std::string>()) {
      len = static_cast<std::int64_t>(s->size());
    } else if (const auto* r = obj.get_if<RangeValue>()) {
      len = r->size();
    } else {
      raise(VplError::type("'" + type_name(obj) + "' object is not subscriptable", span));
    }
    std::int64_t i = to_index(idx, span);
    if (i < 0) i += len;
    if (i < 0 || i >= len) {
      raise(VplError::index(type_name(obj) + " index " + std::to_string(to_index(idx, span)) +
                                " out of range for length " + std::to_string(len),
                            span));
    }
    if (const auto* l = obj.get_if<ListPtr>()) return (**l)[static_cast<std::size_t>(i)];
    if (const auto* s = obj.get_if<std::string>()) {
      return Value(std::string(1, (*s)[static_cast<std::size_t>(i)]));
    }
    return Value(obj.as<RangeValue>().at(i));
  }

  Value eval_node(const expr::Slice& n, const Span& span) {
    const Value obj = eval(*n.object);
    auto bound = [&](const ExprPtr& e) -> std::optional<std::int64_t> {
      if (!e) return std::nullopt;
      Value v = eval(*e);
      if (v.is_none()) return std::nullopt;
      return to_index(v, span);
    };
    const auto lo = bound(n.lower);
    const auto hi = bound(n.upper);
    const std::int64_t step = bound(n.step).value_or(1);
    if (step == 0) raise(VplError::type("slice step cannot be zero", span));

    std::int64_t len = 0;
    if (const auto* l = obj.get_if<ListPtr>()) len = static_cast<std::int64_t>((*l)->size());
    else if (const auto* s = obj.get_if<std::string>()) len = static_cast<std::int64_t>(s->size());
    else if (const auto* r = obj.get_if<RangeValue>()) len = r->size();
    else raise(VplError::type("'" + type_name(obj) + "' object is not subscriptable", span));

    const SliceIndices si = adjust_slice(len, lo, hi, step);
    check_length(si.length, span);
    if (const auto* s = obj.get_if<std::string>()) {
      std::string out;
      for (std::int64_t k = 0; k < si.length; ++k) {
        out.push_back((*s)[static_cast<std::size_t>(si.start + k * step)]);
      }
      return Value(std::move(out));
    }
    List out;
    out.reserve(static_cast<std::size_t>(si.length));
    for (std::int64_t k = 0; k < si.length; ++k) {
      const std::int64_t i = si.start + k * step;
      if (const auto* l = obj.get_if<ListPtr>()) {
        out.push_back((**l)[static_cast<std::size_t>(i)]);
      } else {
        out.emplace_back(obj.as<RangeValue>().at(i));
      }
    }
    return Value(std::move(out));
  }

  Value eval_node(const expr::Unary& n, const Span& span) {
    const Value v = eval(*n.operand);
    if (n.op == UnaryOp::Not) return Value(!truthy(v));
    if (const auto* i = v.get_if<std::int64_t>()) {
      if (*i == std::numeric_limits<std::int64_t>::min()) {
        raise(VplError::limit("integer overflow", span));
      }
      return Value(-*i);
    }
    if (const auto* d = v.get_if<double>()) return Value(-*d);
    raise(VplError::type("bad operand type for unary -: " + type_name(v), span));
  }

  Value eval_node(const expr::Binary& n, const Span& span) {
    const Value lhs = eval(*n.lhs);
    const Value rhs = eval(*n.rhs);
    return binary(n.op, lhs, rhs, span);
  }

  Value binary(BinaryOp op, const Value& a, const Value& b, const Span& span) {
    if (op == BinaryOp::Add) {
      if (const auto* sa = a.get_if<std::string>()) {
        if (const auto* sb = b.get_if<std::string>()) {
          check_length(static_cast<std::int64_t>(sa->size() + sb->size()), span);
          return Value(*sa + *sb);
        }
      }
      if (const auto* la = a.get_if<ListPtr>()) {
        if (const auto* lb = b.get_if<ListPtr>()) {
          check_length(static_cast<std::int64_t>((*la)->size() + (*lb)->size()), span);
          List out(**la);
          out.insert(out.end(), (*lb)->begin(), (*lb)->end());
          return Value(std::move(out));
        }
      }
    }
    if (!a.is_number() || !b.is_number()) {
      raise(VplError::type(std::string("unsupported operand types for ") + symbol(op) + ": " +
                               type_name(a) + " and " + type_name(b),
                           span));
    }
    if (a.is<std::int64_t>() && b.is<std::int64_t>() && op != BinaryOp::Div) {
      return int_binary(op, a.as<std::int64_t>(), b.as<std::int64_t>(), span);
    }
    const double x = a.as_double();
    const double y = b.as_double();
    switch (op) {
      case BinaryOp::Add: return Value(x + y);
      case BinaryOp::Sub: return Value(x - y);
      case BinaryOp::Mul: return Value(x * y);
      case BinaryOp::Div:
        if (y == 0) raise(VplError::type("division by zero", span));
        return Value(x / y);
      case BinaryOp::FloorDiv:
        if (y == 0) raise(VplError::type("division by zero", span));
        return Value(std::floor(x / y));
      case BinaryOp::Mod:
        if (y == 0) raise(VplError::type("modulo by zero", span));
        return Value(float_mod(x, y));
      case BinaryOp::Pow: {
        if (x == 0 && y < 0) raise(VplError::type("zero to a negative power", span));
        if (x < 0 && std::trunc(y) != y) {
          raise(VplError::type("negative number to a fractional power", span));
        }
        return Value(std::pow(x, y));
      }
    }
    raise(VplError::type("unknown operator", span));
  }

  Value int_binary(BinaryOp op, std::int64_t x, std::int64_t y, const Span& span) {
    std::int64_t r = 0;
    auto overflow = [&] { raise(VplError::limit("integer overflow", span)); };
    switch (op) {
      case BinaryOp::Add:
        if (__builtin_add_overflow(x, y, &r)) overflow();
        return Value(r);
      case BinaryOp::Sub:
        if (__builtin_sub_overflow(x, y, &r)) overflow();
        return Value(r);
      case BinaryOp::Mul:
        if (__builtin_mul_overflow(x, y, &r)) overflow();
        return Value(r);
      case BinaryOp::FloorDiv:
        if (y == 0) raise(VplError::type("division by zero", span));
        if (x == std::numeric_limits<std::int64_t>::min() && y == -1) overflow();
        return Value(floor_div(x, y));
      case BinaryOp::Mod:
        if (y == 0) raise(VplError::type("modulo by zero", span));
        if (y == -1) return Value(std::int64_t{0});
        return Value(floor_mod(x, y));
      case BinaryOp::Pow: {
        if (y < 0) {
          if (x == 0) raise(VplError::type("zero to a negative power", span));
          return Value(std::pow(static_cast<double>(x), static_cast<double>(y)));
        }
        std::int64_t result = 1;
        std::int64_t base = x;
        std::int64_t e = y;
        while (e > 0) {
          if (e & 1) {
            if (__builtin_mul_overflow(result, base, &result)) overflow();
          }
          e >>= 1;
          if (e > 0 && __builtin_mul_overflow(base, base, &base)) overflow();
        }
        return Value(result);
      }
      case BinaryOp::Div:
        break;
    }
    raise(VplError::type("unknown operator", span));
  }

  bool compare(CompareOp op, const Value& a, const Value& b, const Span& span) {
    if (op == CompareOp::Eq) return values_equal(a, b);
    if (op == CompareOp::Ne) return !values_equal(a, b);
    if (!a.is_number() || !b.is_number()) {
      raise(VplError::type(std::string("'") + symbol(op) + "' not supported between " +
                               type_name(a) + " and " + type_name(b),
                           span));
    }
    if (a.is<std::int64_t>() && b.is<std::int64_t>()) {
      const auto x = a.as<std::int64_t>();
      const auto y = b.as<std::int64_t>();
      switch (op) {
        case CompareOp::Lt: return x < y;
        case CompareOp::Le: return x <= y;
        case CompareOp::Gt: return x > y;
        default: return x >= y;
      }
    }
    const double x = a.as_double();
    const double y = b.as_double();
    switch (op) {
      case CompareOp::Lt: return x < y;
      case CompareOp::Le: return x <= y;
      case CompareOp::Gt: return x > y;
      default: return x >= y;
    }
  }

  Value eval_node(const expr::Compare& n, const Span& span) {
    Value left = eval(*n.first);
    for (const auto& [op, rhs] : n.rest) {
      Value right = eval(*rhs);
      if (!compare(op, left, right, span)) return Value(false);
      left = std::move(right);
    }
    return Value(true);
  }

  Value eval_node(const expr::Bool& n, const Span&) {
    Value lhs = eval(*n.lhs);
    const bool t = truthy(lhs);
    if (n.op == BoolOp::And ? !t : t) return lhs;
    return eval(*n.rhs);
  }

  // --- calls ---
  Value eval_node(const expr::Call& n, const Span& span) {
    if (const auto* attr = std::get_if<expr::Attribute>(&n.callee->node)) {
      Value receiver = eval(*attr->object);
      std::vector<Value> args{std::move(receiver)};
      for (const auto& a : n.args) args.push_back(eval(*a));
      return call_method(attr->attr, std::move(args), n.kwargs, span);
    }
    const auto* name = std::get_if<expr::Name>(&n.callee->node);
    if (!name) raise(VplError::type("expression is not callable", span));
    if (env_.count(name->id)) {
      raise(VplError::type("'" + type_name(env_.at(name->id)) + "' object is not callable",
                           span));
    }
    std::vector<Value> args;
    args.reserve(n.args.size());
    for (const auto& a : n.args) args.push_back(eval(*a));
    if (is_builtin(name->id)) {
      if (!n.kwargs.empty()) {
        raise(VplError::type(name->id + "() takes no keyword arguments", span));
      }
      return call_builtin(name->id, args, span);
    }
    if (const auto* entry = tools_.find(name->id)) {
      return call_tool(*entry, std::move(args), n.kwargs, span);
    }
    raise(VplError::name("name '" + name->id + "' is not defined", span));
  }

  Value call_method(const std::string& method, std::vector<Value> args,
                    const std::vector<expr::Keyword>& kwargs, const Span& span) {
    const Value& receiver = args.front();
    if (const auto* seg = receiver.get_if<VideoSegment>()) {
      if (method == "frame_iterator") {
        if (args.size() != 1 || !kwargs.empty()) {
          raise(VplError::type("frame_iterator() takes no arguments", span));
        }
        check_length(seg->num_frames(), span);
        List frames;
        for (auto& f : seg->frames()) frames.emplace_back(std::move(f));
        return Value(std::move(frames));
      }
    }
    const bool media = receiver.is<ImagePatch>() || receiver.is<VideoSegment>();
    if (media) {
      if (const auto* entry = tools_.find(method)) {
        return call_tool(*entry, std::move(args), kwargs, span);
      }
    }
    raise(VplError::name("'" + type_name(receiver) + "' object has no attribute '" + method +
                             "'",
                         span));
  }

  Value call_tool(const DispatchTable::Entry& entry, std::vector<Value> args,
                  const std::vector<expr::Keyword>& kwargs, const Span& span) {
    std::vector<std::optional<Value>> bound(entry.params.size());
    if (args.size() > entry.params.size()) {
      raise(VplError::type(entry.name + "() takes at most " +
                               std::to_string(entry.params.size()) + " arguments (" +
                               std::to_string(args.size()) + " given)",
                           span));
    }
    for (std::size_t i = 0; i < args.size(); ++i) bound[i] = std::move(args[i]);
    for (const auto& kw : kwargs) {
      auto it = std::find(entry.params.begin(), entry.params.end(), kw.name);
      if (it == entry.params.end()) {
        raise(VplError::type(entry.name + "() got an unexpected keyword argument '" +
                                 kw.name + "'",
                             span));
      }
      auto& slot = bound[static_cast<std::size_t>(it - entry.params.begin())];
      if (slot) {
        raise(VplError::type(entry.name + "() got multiple values for argument '" + kw.name +
                                 "'",
                             span));
      }
      slot = eval(*kw.value);
    }
    std::vector<Value> final_args;
    final_args.reserve(bound.size());
    for (std::size_t i = 0; i < bound.size(); ++i) {
      if (!bound[i]) {
        if (i < entry.required) {
          raise(VplError::type(entry.name + "() missing required argument '" +
                                   entry.params[i] + "'",
                               span));
        }
        final_args.emplace_back();
      } else {
        final_args.push_back(std::move(*bound[i]));
      }
    }
    Value result;
    try {
      result = entry.fn(final_args);
    } catch (VplException& e) {
      if (!e.error().span) e.error().span = span;
      throw;
    } catch (const std::bad_alloc&) {
      throw;
    } catch (const std::exception& e) {
      VplError err = VplError::tool_error(entry.name, e.what(), false);
      err.span = span;
      raise(std::move(err));
    }
    check_clock(span);
    if (const auto* l = result.get_if<ListPtr>()) {
      check_length(static_cast<std::int64_t>((*l)->size()), span);
    }
    return result;
  }

  void expect_args(std::string_view name, const std::vector<Value>& args, std::size_t lo,
                   std::size_t hi, const Span& span) {
    if (args.size() < lo || args.size() > hi) {
      const std::string want = lo == hi ? std::to_string(lo)
                                        : std::to_string(lo) + " to " + std::to_string(hi);
      raise(VplError::type(std::string(name) + "() takes " + want + " arguments (" +
                               std::to_string(args.size()) + " given)",
                           span));
    }
  }

  Value call_builtin(const std::string& name, const std::vector<Value>& args,
                     const Span& span) {
    if (name == "len") {
      expect_args(name, args, 1, 1, span);
      const Value& v = args[0];
      if (const auto* s = v.get_if<std::string>()) return Value(static_cast<std::int64_t>(s->size()));
      if (const auto* l = v.get_if<ListPtr>()) return Value(static_cast<std::int64_t>((*l)->size()));
      if (const auto* r = v.get_if<RangeValue>()) return Value(r->size());
      raise(VplError::type("object of type " + type_name(v) + " has no len()", span));
    }
    if (name == "abs") {
      expect_args(name, args, 1, 1, span);
      if (const auto* i = args[0].get_if<std::int64_t>()) {
        if (*i == std::numeric_limits<std::int64_t>::min()) {
          raise(VplError::limit("integer overflow", span));
        }
        return Value(*i < 0 ? -*i : *i);
      }
      if (const auto* d = args[0].get_if<double>()) return Value(std::fabs(*d));
      raise(VplError::type("bad operand type for abs(): " + type_name(args[0]), span));
    }
    if (name == "min" || name == "max") return min_max(name == "max", args, span);
    if (name == "range") {
      expect_args(name, args, 1, 3, span);
      std::array<std::int64_t, 3> v{0, 0, 1};
      for (std::size_t i = 0; i < args.size(); ++i) {
        const auto* x = args[i].get_if<std::int64_t>();
        if (!x) raise(VplError::type("range() arguments must be integers", span));
        v[i] = *x;
      }
      RangeValue r = args.size() == 1 ? RangeValue{0, v[0], 1} : RangeValue{v[0], v[1], v[2]};
      if (r.step == 0) raise(VplError::type("range() step must not be zero", span));
      return Value(r);
    }
    if (name == "round") {
      expect_args(name, args, 1, 2, span);
      if (!args[0].is_number()) {
        raise(VplError::type("round() needs a number, not " + type_name(args[0]), span));
      }
      if (args.size() == 1) {
        if (args[0].is<std::int64_t>()) return args[0];
        const double r = round_half_even(args[0].as<double>());
        return Value(double_to_int(r, span));
      }
      const auto* digits = args[1].get_if<std::int64_t>();
      if (!digits) raise(VplError::type("round() digits must be an integer", span));
      if (args[0].is<std::int64_t>() && *digits >= 0) return args[0];
      const double scale = std::pow(10.0, static_cast<double>(std::clamp<std::int64_t>(*digits, -308, 308)));
      return Value(round_half_even(args[0].as_double() * scale) / scale);
    }
    if (name == "str") {
      expect_args(name, args, 0, 1, span);
      if (args.empty()) return Value(std::string());
      std::string s = to_display(args[0]);
      check_length(static_cast<std::int64_t>(s.size()), span);
      return Value(std::move(s));
    }
    if (name == "int") {
      expect_args(name, args, 0, 1, span);
      if (args.empty()) return Value(std::int64_t{0});
      const Value& v = args[0];
      if (v.is<std::int64_t>()) return v;
      if (const auto* b = v.get_if<bool>()) return Value(std::int64_t{*b ? 1 : 0});
      if (const auto* d = v.get_if<double>()) return Value(double_to_int(std::trunc(*d), span));
      if (const auto* s = v.get_if<std::string>()) {
        const std::string t = text::normalize(*s);
        std::int64_t out = 0;
        const char* first = t.data();
        if (!t.empty() && t[0] == '+') ++first;
        auto [p, ec] = std::from_chars(first, t.data() + t.size(), out);
        if (t.empty() || ec != std::errc() || p != t.data() + t.size()) {
          raise(VplError::type("invalid literal for int(): " + quote_string(*s), span));
        }
        return Value(out);
      }
      raise(VplError::type("int() argument must be a number or text, not " + type_name(v),
                           span));
    }
    // float
    expect_args(name, args, 0, 1, span);
    if (args.empty()) return Value(0.0);
    const Value& v = args[0];
    if (v.is_number()) return Value(v.as_double());
    if (const auto* b = v.get_if<bool>()) return Value(*b ? 1.0 : 0.0);
    if (const auto* s = v.get_if<std::string>()) {
      const std::string t = text::normalize(*s);
      double out = 0;
      auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
      if (t.empty() || ec != std::errc() || p != t.data() + t.size()) {
        raise(VplError::type("could not convert text to float: " + quote_string(*s), span));
      }
      return Value(out);
    }
    raise(VplError::type("float() argument must be a number or text, not " + type_name(v),
                         span));
  }

  std::int64_t double_to_int(double d, const Span& span) {
    if (!std::isfinite(d)) raise(VplError::type("cannot convert non-finite float to int", span));
    if (d >= 9.2233720368547758e18 || d < -9.2233720368547758e18) {
      raise(VplError::limit("integer overflow", span));
    }
    return static_cast<std::int64_t>(d);
  }

  Value min_max(bool is_max, const std::vector<Value>& args, const Span& span) {
    const char* fname = is_max ? "max" : "min";
    std::vector<Value> items;
    if (args.size() == 1) {
      const Value& v = args[0];
      if (const auto* l = v.get_if<ListPtr>()) {
        items.assign((*l)->begin(), (*l)->end());
      } else if (const auto* r = v.get_if<RangeValue>()) {
        const std::int64_t n = r->size();
        if (n > 0) {
          const std::int64_t a = r->at(0);
          const std::int64_t b = r->at(n - 1);
          return Value(is_max ? std::max(a, b) : std::min(a, b));
        }
      } else {
        raise(VplError::type(std::string(fname) + "() argument must be a list", span));
      }
    } else {
      items = args;
    }
    if (items.empty()) raise(VplError::type(std::string(fname) + "() arg is an empty sequence", span));
    std::size_t best = 0;
    for (std::size_t i = 1; i < items.size(); ++i) {
      const bool better = is_max ? compare(CompareOp::Gt, items[i], items[best], span)
                                 : compare(CompareOp::Lt, items[i], items[best], span);
      if (better) best = i;
    }
    if (items.size() == 1 && !items[0].is_number()) {
      raise(VplError::type(std::string(fname) + "() needs numbers, not " + type_name(items[0]),
                           span));
    }
    return items[best];
  }

  const DispatchTable& tools_;
  ExecutionLimits limits_;
  std::chrono::steady_clock::time_point deadline_;
  std::int64_t steps_ = 0;
  std::unordered_map<std::string, Value> env_;
  bool returned_ = false;
  Value result_;
};

}  // namespace

std::span<const std::string_view> builtin_names() {
  static const std::array<std::string_view, 9> names{"len", "abs", "min", "max", "range",
                                                     "round", "str", "int", "float"};
  return names;
}

ExecutionOutcome execute(const Program& program, const ExecutionInput& input,
                         const DispatchTable& tools, const ExecutionLimits& limits) {
  try {
    Interpreter interp(tools, limits);
    return ExecutionOutcome::success(interp.run(program, input));
  } catch (const VplException& e) {
    return ExecutionOutcome::failure(e.error());
  } catch (const std::bad_alloc&) {
    return ExecutionOutcome::failure(VplError::limit("out of memory"));
  } catch (const std::exception& e) {
    return ExecutionOutcome::failure(VplError::type(std::string("internal error: ") + e.what()));
  }
}

ExecutionOutcome run_source(std::string_view source, const ExecutionInput& input,
                            const DispatchTable& tools, const ExecutionLimits& limits) {
  auto parsed = parse(source);
  if (auto* err = std::get_if<VplError>(&parsed)) return ExecutionOutcome::failure(*err);
  return execute(std::get<Program>(parsed), input, tools, limits);
}

std::string expected_kind_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::Grounding: return "bounding-box";
    case TaskKind::Vqa: return "text";
    case TaskKind::VideoMcq: return "option";
  }
  return "value";
}

std::variant<Value, VplError> check_return_type(const Value& value, TaskKind kind,
                                                std::span<const std::string> options) {
  const std::string expected = expected_kind_name(kind);
  switch (kind) {
    case TaskKind::Grounding: {
      if (value.is<ImagePatch>()) return value;
      if (const auto* l = value.get_if<ListPtr>()) {
        if ((*l)->size() == 1 && (**l)[0].is<ImagePatch>()) return (**l)[0];
        return VplError::return_type(expected, "list of length " + std::to_string((*l)->size()));
      }
      return VplError::return_type(expected, type_name(value));
    }
    case TaskKind::Vqa: {
      if (value.is<std::string>()) return value;
      if (value.is_number()) return Value(to_display(value));
      if (const auto* b = value.get_if<bool>()) return Value(std::string(*b ? "yes" : "no"));
      return VplError::return_type(expected, type_name(value));
    }
    case TaskKind::VideoMcq: {
      if (const auto* i = value.get_if<std::int64_t>()) {
        if (*i >= 0 && static_cast<std::size_t>(*i) < options.size()) return value;
        return VplError::return_type(expected, "index " + std::to_string(*i) + " out of range");
      }
      if (const auto* s = value.get_if<std::string>()) {
        const std::string wanted = text::normalize(*s);
        for (std::size_t k = 0; k < options.size(); ++k) {
          if (text::normalize(options[k]) == wanted) {
            return Value(static_cast<std::int64_t>(k));
          }
        }
        return VplError::return_type(expected, "text matching no option");
      }
      return VplError::return_type(expected, type_name(value));
    }
  }
  return VplError::return_type(expected, type_name(value));
}

}  // namespace vpe::lang
