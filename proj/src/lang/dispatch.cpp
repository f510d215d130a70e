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

#include "vpe/lang/dispatch.hpp"

namespace vpe::lang {

void DispatchTable::add(std::string name, std::vector<std::string> params, Fn fn) {
  const std::size_t required = params.size();
  add(std::move(name), std::move(params), required, std::move(fn));
}

void DispatchTable::add(std::string name, std::vector<std::string> params,
                        std::size_t required, Fn fn) {
  Entry e{name, std::move(params), required, std::move(fn)};
  entries_.insert_or_assign(std::move(name), std::move(e));
}

const DispatchTable::Entry* DispatchTable::find(std::string_view name) const {
  auto it = entries_.find(name);
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> DispatchTable::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& [name, _] : entries_) out.push_back(name);
  return out;
}

}  // namespace vpe::lang
