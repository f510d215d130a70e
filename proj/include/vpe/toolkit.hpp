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

#include <optional>
#include <string>
#include <string_view>

#include "vpe/lang/dispatch.hpp"
#include "vpe/tools.hpp"

namespace vpe {

/// Which routines a program may call: the raw tools only, or the tools plus
/// the spatial/temporal abstractions.
enum class ApiVariant { ViperGptStyle, Abstract };

const char* to_string(ApiVariant v);
std::optional<ApiVariant> api_variant_from_string(std::string_view s);

/// Binds the tools (and, for the abstract variant, the abstract routines)
/// to `backend` under `config`. The backend must outlive the table.
lang::DispatchTable make_dispatch_table(const ToolBackend& backend, const ToolConfig& config,
                                        ApiVariant variant);

}  // namespace vpe
