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

#include <exception>
#include <optional>
#include <string>
#include <string_view>

#include "vpe/lang/ast.hpp"

namespace vpe::lang {

enum class ErrorClass {
  ParseError,
  NameError,
  TypeError,
  IndexError,
  ToolError,
  ReturnTypeError,
  LimitExceeded,
};

/// Buckets used by the error analysis: detector failure, wrong result kind,
/// everything else.
enum class ErrorBucket { ObjDet, RetType, Other };

const char* to_string(ErrorClass c);
const char* to_string(ErrorBucket b);
std::optional<ErrorClass> error_class_from_string(std::string_view s);
std::optional<ErrorBucket> bucket_from_string(std::string_view s);

struct VplError {
  ErrorClass cls = ErrorClass::TypeError;
  std::string message;
  std::optional<Span> span;
  // ToolError only.
  std::string tool;
  bool retryable = false;
  // ReturnTypeError only.
  std::string expected;
  std::string actual;

  static VplError parse(std::string message, Span span);
  static VplError name(std::string message, std::optional<Span> span = {});
  static VplError type(std::string message, std::optional<Span> span = {});
  static VplError index(std::string message, std::optional<Span> span = {});
  static VplError tool_error(std::string tool, std::string detail, bool retryable);
  static VplError return_type(std::string expected, std::string actual);
  static VplError limit(std::string message, std::optional<Span> span = {});

  /// One-line rendering, e.g. `ToolError(find): no detections above threshold`.
  std::string describe() const;

  friend bool operator==(const VplError&, const VplError&) = default;
};

/// Carrier used to unwind the interpreter and tool calls.
class VplException : public std::exception {
 public:
  explicit VplException(VplError error)
      : error_(std::move(error)), what_(error_.describe()) {}
  const VplError& error() const noexcept { return error_; }
  VplError& error() noexcept { return error_; }
  const char* what() const noexcept override { return what_.c_str(); }

 private:
  VplError error_;
  std::string what_;
};

/// Total: every error lands in exactly one bucket. Retryable ToolErrors
/// raised by the detection tools (`find`, `exists`) are detector failures.
ErrorBucket classify_error(const VplError& e);

}  // namespace vpe::lang
