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

#include "vpe/text.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace vpe::text {

namespace {

char lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)); }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)); }

}  // namespace

std::string normalize(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(lower(c));
  }
  return out;
}

std::string normalize_name(std::string_view s) {
  std::string out = normalize(s);
  if (out.size() > 1 && out.back() == 's') out.pop_back();
  return out;
}

std::set<std::string> word_set(std::string_view s) {
  std::set<std::string> words;
  std::string cur;
  for (char c : s) {
    if (is_alnum(c)) {
      cur.push_back(lower(c));
    } else if (!cur.empty()) {
      words.insert(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) words.insert(std::move(cur));
  return words;
}

std::size_t token_overlap(std::string_view a, std::string_view b) {
  const auto wa = word_set(a);
  const auto wb = word_set(b);
  std::size_t n = 0;
  for (const auto& w : wa) n += wb.count(w);
  return n;
}

std::size_t best_overlap_index(const std::vector<std::string>& candidates,
                               std::string_view reference) {
  std::size_t best = 0;
  std::size_t best_score = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const std::size_t score = token_overlap(candidates[i], reference);
    if (score > best_score) {
      best = i;
      best_score = score;
    }
  }
  return best;
}

std::string normalize_answer(std::string_view s) {
  std::string cleaned;
  cleaned.reserve(s.size());
  for (char c : s) cleaned.push_back(is_alnum(c) || is_space(c) ? lower(c) : ' ');
  std::istringstream in(cleaned);
  std::string word;
  std::string out;
  while (in >> word) {
    if (word == "a" || word == "an" || word == "the") continue;
    if (!out.empty()) out.push_back(' ');
    out += word;
  }
  return out;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    parts.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

}  // namespace vpe::text
