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

#include "vpe/lang/error.hpp"

#include <array>

namespace vpe::lang {

namespace {

constexpr std::array<std::pair<ErrorClass, const char*>, 7> kClassNames{{
    {ErrorClass::ParseError, "ParseError"},
    {ErrorClass::NameError, "NameError"},
    {ErrorClass::TypeError, "TypeError"},
    {ErrorClass::IndexError, "IndexError"},
    {ErrorClass::ToolError, "ToolError"},
    {ErrorClass::ReturnTypeError, "ReturnTypeError"},
    {ErrorClass::LimitExceeded, "LimitExceeded"},
}};

constexpr std::array<std::pair<ErrorBucket, const char*>, 3> kBucketNames{{
    {ErrorBucket::ObjDet, "ObjDet"},
    {ErrorBucket::RetType, "RetType"},
    {ErrorBucket::Other, "Other"},
}};

}  // namespace

const char* to_string(ErrorClass c) {
  for (const auto& [k, n] : kClassNames)
    if (k == c) return n;
  return "?";
}

const char* to_string(ErrorBucket b) {
  for (const auto& [k, n] : kBucketNames)
    if (k == b) return n;
  return "?";
}

std::optional<ErrorClass> error_class_from_string(std::string_view s) {
  for (const auto& [k, n] : kClassNames)
    if (s == n) return k;
  return std::nullopt;
}

std::optional<ErrorBucket> bucket_from_string(std::string_view s) {
  for (const auto& [k, n] : kBucketNames)
    if (s == n) return k;
  return std::nullopt;
}

VplError VplError::parse(std::string message, Span span) {
  return {ErrorClass::ParseError, std::move(message), span, {}, false, {}, {}};
}

VplError VplError::name(std::string message, std::optional<Span> span) {
  return {ErrorClass::NameError, std::move(message), span, {}, false, {}, {}};
}

VplError VplError::type(std::string message, std::optional<Span> span) {
  return {ErrorClass::TypeError, std::move(message), span, {}, false, {}, {}};
}

VplError VplError::index(std::string message, std::optional<Span> span) {
  return {ErrorClass::IndexError, std::move(message), span, {}, false, {}, {}};
}

VplError VplError::tool_error(std::string tool, std::string detail,
                              bool retryable) {
  return {ErrorClass::ToolError, std::move(detail), std::nullopt, std::move(tool),
          retryable, {}, {}};
}

VplError VplError::return_type(std::string expected, std::string actual) {
  std::string msg = "expected " + expected + ", got " + actual;
  return {ErrorClass::ReturnTypeError, std::move(msg), std::nullopt, {}, false,
          std::move(expected), std::move(actual)};
}

VplError VplError::limit(std::string message, std::optional<Span> span) {
  return {ErrorClass::LimitExceeded, std::move(message), span, {}, false, {}, {}};
}

std::string VplError::describe() const {
  std::string out = to_string(cls);
  if (cls == ErrorClass::ToolError && !tool.empty()) out += "(" + tool + ")";
  out += ": " + message;
  if (span) {
    out += " (line " + std::to_string(span->line) + ", column " +
           std::to_string(span->column) + ")";
  }
  return out;
}

ErrorBucket classify_error(const VplError& e) {
  switch (e.cls) {
    case ErrorClass::ToolError:
      if (e.retryable && (e.tool == "find" || e.tool == "exists")) {
        return ErrorBucket::ObjDet;
      }
      return ErrorBucket::Other;
    case ErrorClass::ReturnTypeError:
      return ErrorBucket::RetType;
    default:
      return ErrorBucket::Other;
  }
}

}  // namespace vpe::lang
