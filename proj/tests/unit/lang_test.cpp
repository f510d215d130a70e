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

#include <string>
#include <variant>

#include "doctest.h"
#include "vpe/lang/parser.hpp"

using namespace vpe::lang;

namespace {

Program parse_ok(const std::string& src) {
  auto r = parse(src);
  if (auto* e = std::get_if<VplError>(&r)) FAIL("unexpected parse error: " << e->describe());
  return std::move(std::get<Program>(r));
}

VplError parse_err(const std::string& src) {
  auto r = parse(src);
  REQUIRE(std::holds_alternative<VplError>(r));
  return std::get<VplError>(r);
}

const char* kRunningExample = R"(def execute_command(image):
    persons = image.find("person")
    people = sort_patches_left_to_right(persons)
    second = people[1]
    jacket = second.find("jacket")[0]
    return jacket.simple_query("What color is the jacket?")
)";

// Canonical rendering of the running example, reviewed by hand.
const char* kRunningExampleCanonical = R"(def execute_command(image):
    persons = image.find('person')
    people = sort_patches_left_to_right(persons)
    second = people[1]
    jacket = second.find('jacket')[0]
    return jacket.simple_query('What color is the jacket?')
)";

}  // namespace

TEST_CASE("single return statement") {
  const Program p = parse_ok("return find(image, 'cat')");
  CHECK_FALSE(p.params.has_value());
  REQUIRE(p.body.size() == 1);
  CHECK(std::holds_alternative<stmt::Return>(p.body[0]->node));
}

TEST_CASE("running example parses to five statements") {
  const Program p = parse_ok(kRunningExample);
  REQUIRE(p.params.has_value());
  CHECK(*p.params == std::vector<std::string>{"image"});
  REQUIRE(p.body.size() == 5);
  for (int i = 0; i < 4; ++i) CHECK(std::holds_alternative<stmt::Assign>(p.body[i]->node));
  CHECK(std::holds_alternative<stmt::Return>(p.body[4]->node));
  CHECK(std::get<stmt::Assign>(p.body[0]->node).target == "persons");
  CHECK(to_source(p) == kRunningExampleCanonical);
}

TEST_CASE("forbidden constructs are parse errors with positions") {
  struct Case {
    const char* src;
    const char* construct;
    int line;
  };
  const Case cases[] = {
      {"import os", "import", 1},
      {"from os import path", "import", 1},
      {"x = 1\nwhile x:\n    x = 0", "while-loop", 2},
      {"def helper(a):\n    return a", "function definition", 1},
      {"f = lambda x: x", "lambda", 1},
      {"xs = [i for i in range(3)]", "comprehension", 1},
      {"s = f\"{image}\"", "string formatting", 1},
      {"s = \"%d\" % 3", "string formatting", 1},
      {"s = \"{}\".format(3)", "string formatting", 1},
      {"class A:\n    pass", "class definition", 1},
      {"try:\n    x = 1\nexcept:\n    pass", "exception handling", 1},
      {"d = {}", "dict or set literal", 1},
      {"a, b = 1, 2", "tuple", 1},
      {"image.x = 3", "attribute assignment", 1},
      {"for i in range(3):\n    break", "loop control", 2},
      {"x = 1; y = 2", "semicolon", 1},
      {"with open('f') as f:\n    pass", "with-statement", 1},
      {"x = 1 if True else 2", "conditional expression", 1},
  };
  for (const auto& c : cases) {
    CAPTURE(std::string(c.src));
    const VplError e = parse_err(c.src);
    CHECK(e.cls == ErrorClass::ParseError);
    CAPTURE(e.message);
    CHECK(e.message.find(std::string("construct not allowed: ") + c.construct) !=
          std::string::npos);
    REQUIRE(e.span.has_value());
    CHECK(e.span->line == c.line);
  }
  CHECK(parse_err("import os").message == "construct not allowed: import");
}

TEST_CASE("wrapper accepts only execute_command") {
  CHECK(parse_err("def main(image):\n    return 1").cls == ErrorClass::ParseError);
  CHECK(parse_err("def execute_command(image):\n    return 1\nx = 2").cls ==
        ErrorClass::ParseError);
  const Program p = parse_ok("def execute_command(video, question, possible_answers):\n"
                             "    return 0\n");
  CHECK(p.params->size() == 3);
}

TEST_CASE("syntax errors carry line and column") {
  const VplError e = parse_err("x = 1\ny = (2 +\n");
  CHECK(e.cls == ErrorClass::ParseError);
  REQUIRE(e.span.has_value());
  CHECK(e.span->line >= 2);
  CHECK(parse_err("x = 1\n  y = 2\n").cls == ErrorClass::ParseError);
  CHECK(parse_err("return 'abc").cls == ErrorClass::ParseError);
}

TEST_CASE("tabs and wider indentation open blocks") {
  const Program p = parse_ok("for x in [1, 2]:\n\ty = x\n\tif y > 1:\n\t\treturn y\nreturn 0");
  CHECK(p.body.size() == 2);
  const Program q = parse_ok("if True:\n      x = 1\nelse:\n  x = 2\nreturn x");
  CHECK(q.body.size() == 2);
}

TEST_CASE("operators and precedence") {
  const Program p = parse_ok("return 1 + 2 * 3 ** 2 - -4 // 3");
  const Program q = parse_ok(to_source(p));
  CHECK(structurally_equal(p, q));
  CHECK(to_source(*std::get<stmt::Return>(p.body[0]->node).value) ==
        "(1 + (2 * (3 ** 2))) - ((-4) // 3)");
  const Program c = parse_ok("return 1 < 2 <= 3 and not 4 == 5 or x[-1:2]");
  CHECK(structurally_equal(c, parse_ok(to_source(c))));
}

TEST_CASE("round-trip preserves structure for a corpus") {
  const char* corpus[] = {
      kRunningExample,
      "x = [1, 2.5, 'a', None, True]\nreturn x[::-1]",
      "total = 0\nfor i in range(10):\n    if i % 2 == 0:\n        total += i\n    elif i > 7:\n"
      "        total -= 1\n    else:\n        pass\nreturn total",
      "return image.simple_query(question=\"what is this?\")",
      "a = 1e20\nb = 0.1\nc = 'it\\'s \"q\"\\n'\nreturn [a, b, c]",
      "if not (x and y) or z:\n    return -(1 + 2) ** -1\nreturn min(abs(-3), max([1, 2]))",
  };
  for (const char* src : corpus) {
    CAPTURE(src);
    const Program p = parse_ok(src);
    const std::string once = to_source(p);
    const Program q = parse_ok(once);
    CHECK(structurally_equal(p, q));
    CHECK(to_source(q) == once);
  }
}

TEST_CASE("nesting and expression height limits") {
  std::string deep = "return ";
  for (int i = 0; i < 300; ++i) deep += "(";
  deep += "1";
  for (int i = 0; i < 300; ++i) deep += ")";
  CHECK(parse_err(deep).cls == ErrorClass::ParseError);

  std::string chain = "return 1";
  for (int i = 0; i < 250; ++i) chain += " + 1";
  CHECK(parse_err(chain).cls == ErrorClass::ParseError);

  std::string blocks;
  for (int i = 0; i < 120; ++i) blocks += std::string(i * 4, ' ') + "if True:\n";
  blocks += std::string(120 * 4, ' ') + "pass\n";
  CHECK(parse_err(blocks).cls == ErrorClass::ParseError);
}

TEST_CASE("format_float renders python-style literals") {
  CHECK(format_float(3.0) == "3.0");
  CHECK(format_float(0.1) == "0.1");
  CHECK(format_float(-2.5) == "-2.5");
  CHECK(quote_string("a'b") == "'a\\'b'");
}
