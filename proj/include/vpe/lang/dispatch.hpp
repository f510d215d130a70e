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

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vpe/lang/value.hpp"

namespace vpe::lang {

/// Name -> callable table through which programs reach tools and abstract
/// routines. Entries receive arguments already bound to their declared
/// parameter order; omitted optional trailing parameters arrive as None.
class DispatchTable {
 public:
  using Fn = std::function<Value(std::span<const Value>)>;

  struct Entry {
    std::string name;
    std::vector<std::string> params;
    std::size_t required = 0;
    Fn fn;
  };

  /// `required` defaults to all parameters.
  void add(std::string name, std::vector<std::string> params, Fn fn);
  void add(std::string name, std::vector<std::string> params, std::size_t required, Fn fn);

  const Entry* find(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name) != nullptr; }
  std::vector<std::string> names() const;

 private:
  std::map<std::string, Entry, std::less<>> entries_;
};

}  // namespace vpe::lang
