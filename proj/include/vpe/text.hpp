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

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace vpe::text {

/// Lowercase, trim, and collapse internal whitespace runs to one space.
std::string normalize(std::string_view s);

/// Object-name normalization used by detection: `normalize` followed by a
/// single trailing-'s' plural fold.
std::string normalize_name(std::string_view s);

/// Lowercased alphanumeric word set.
std::set<std::string> word_set(std::string_view s);

/// Size of the intersection of the two word sets.
std::size_t token_overlap(std::string_view a, std::string_view b);

/// Index of the candidate with the highest token overlap against
/// `reference`; ties resolve to the lowest index. `candidates` must be
/// nonempty.
std::size_t best_overlap_index(const std::vector<std::string>& candidates,
                               std::string_view reference);

/// VQA answer normalization: lowercase, strip punctuation and the articles
/// a/an/the, collapse whitespace.
std::string normalize_answer(std::string_view s);

std::vector<std::string> split(std::string_view s, char sep);

}  // namespace vpe::text
