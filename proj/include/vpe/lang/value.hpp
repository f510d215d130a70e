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
#include <string>
#include <variant>
#include <vector>

#include "vpe/scene.hpp"

namespace vpe::lang {

struct NoneValue {
  friend bool operator==(NoneValue, NoneValue) { return true; }
};

/// Lazy `range(start, stop, step)`; step is never zero.
struct RangeValue {
  std::int64_t start = 0;
  std::int64_t stop = 0;
  std::int64_t step = 1;

  std::int64_t size() const;
  std::int64_t at(std::int64_t i) const { return start + i * step; }
  friend bool operator==(const RangeValue&, const RangeValue&) = default;
};

class Value;
using List = std::vector<Value>;
using ListPtr = std::shared_ptr<const List>;

/// Runtime value of a VPL program. Lists are immutable and shared.
class Value {
 public:
  using Storage = std::variant<NoneValue, bool, std::int64_t, double, std::string,
                               ListPtr, RangeValue, ImagePatch, VideoSegment>;

  Value() : data_(NoneValue{}) {}
  Value(bool b) : data_(b) {}
  Value(std::int64_t i) : data_(i) {}
  Value(int i) : data_(static_cast<std::int64_t>(i)) {}
  Value(double d) : data_(d) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(List items) : data_(std::shared_ptr<const List>(std::make_shared<List>(std::move(items)))) {}
  Value(ListPtr items) : data_(std::move(items)) {}
  Value(RangeValue r) : data_(r) {}
  Value(ImagePatch p) : data_(std::move(p)) {}
  Value(VideoSegment s) : data_(std::move(s)) {}

  const Storage& data() const { return data_; }

  template <typename T>
  bool is() const { return std::holds_alternative<T>(data_); }
  template <typename T>
  const T& as() const { return std::get<T>(data_); }
  template <typename T>
  const T* get_if() const { return std::get_if<T>(&data_); }

  bool is_none() const { return is<NoneValue>(); }
  bool is_number() const { return is<std::int64_t>() || is<double>(); }
  double as_double() const {
    return is<std::int64_t>() ? static_cast<double>(as<std::int64_t>()) : as<double>();
  }
  const List& list() const { return *as<ListPtr>(); }

 private:
  Storage data_;
};

/// Kind name used in error messages: none, bool, int, float, text, list,
/// range, patch, video segment.
std::string type_name(const Value& v);

bool truthy(const Value& v);

/// `==` semantics: numbers compare across int/float, lists elementwise,
/// patches by scene and box; different kinds are unequal.
bool values_equal(const Value& a, const Value& b);

/// `str(v)`.
std::string to_display(const Value& v);

/// `repr(v)`, as used inside list rendering.
std::string to_repr(const Value& v);

}  // namespace vpe::lang
