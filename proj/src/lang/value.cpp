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

#include "vpe/lang/value.hpp"

#include <sstream>

#include "vpe/lang/ast.hpp"

namespace vpe::lang {

std::int64_t RangeValue::size() const {
  if (step > 0) {
    if (stop <= start) return 0;
    // Widen to avoid overflow on extreme bounds.
    const __int128 span = static_cast<__int128>(stop) - start;
    return static_cast<std::int64_t>((span + step - 1) / step);
  }
  if (stop >= start) return 0;
  const __int128 span = static_cast<__int128>(start) - stop;
  const __int128 s = -static_cast<__int128>(step);
  return static_cast<std::int64_t>((span + s - 1) / s);
}

std::string type_name(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NoneValue>) return "none";
        else if constexpr (std::is_same_v<T, bool>) return "bool";
        else if constexpr (std::is_same_v<T, std::int64_t>) return "int";
        else if constexpr (std::is_same_v<T, double>) return "float";
        else if constexpr (std::is_same_v<T, std::string>) return "text";
        else if constexpr (std::is_same_v<T, ListPtr>) return "list";
        else if constexpr (std::is_same_v<T, RangeValue>) return "range";
        else if constexpr (std::is_same_v<T, ImagePatch>) return "patch";
        else return "video segment";
      },
      v.data());
}

bool truthy(const Value& v) {
  return std::visit(
      [](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NoneValue>) return false;
        else if constexpr (std::is_same_v<T, bool>) return x;
        else if constexpr (std::is_same_v<T, std::int64_t>) return x != 0;
        else if constexpr (std::is_same_v<T, double>) return x != 0.0;
        else if constexpr (std::is_same_v<T, std::string>) return !x.empty();
        else if constexpr (std::is_same_v<T, ListPtr>) return !x->empty();
        else if constexpr (std::is_same_v<T, RangeValue>) return x.size() > 0;
        else return true;
      },
      v.data());
}

bool values_equal(const Value& a, const Value& b) {
  if (a.is_number() && b.is_number()) {
    if (a.is<std::int64_t>() && b.is<std::int64_t>()) {
      return a.as<std::int64_t>() == b.as<std::int64_t>();
    }
    return a.as_double() == b.as_double();
  }
  if (a.data().index() != b.data().index()) return false;
  if (const auto* la = a.get_if<ListPtr>()) {
    const auto& lb = b.as<ListPtr>();
    if ((*la)->size() != lb->size()) return false;
    for (std::size_t i = 0; i < lb->size(); ++i) {
      if (!values_equal((**la)[i], (*lb)[i])) return false;
    }
    return true;
  }
  return a.data() == b.data();
}

std::string to_repr(const Value& v) {
  if (const auto* s = v.get_if<std::string>()) return quote_string(*s);
  return to_display(v);
}

std::string to_display(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NoneValue>) {
          return "None";
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "True" : "False";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(x);
        } else if constexpr (std::is_same_v<T, double>) {
          return format_float(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else if constexpr (std::is_same_v<T, ListPtr>) {
          std::string out = "[";
          for (std::size_t i = 0; i < x->size(); ++i) {
            if (i) out += ", ";
            out += to_repr((*x)[i]);
          }
          return out + "]";
        } else if constexpr (std::is_same_v<T, RangeValue>) {
          std::string out = "range(" + std::to_string(x.start) + ", " + std::to_string(x.stop);
          if (x.step != 1) out += ", " + std::to_string(x.step);
          return out + ")";
        } else if constexpr (std::is_same_v<T, ImagePatch>) {
          return "ImagePatch(" + x.scene_id + ", " + to_string(x.box) + ")";
        } else {
          return "VideoSegment(" + x.video_id() + ", " + std::to_string(x.start_frame()) +
                 ", " + std::to_string(x.end_frame()) + ")";
        }
      },
      v.data());
}

}  // namespace vpe::lang
