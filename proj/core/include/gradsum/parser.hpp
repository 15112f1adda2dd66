#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gradsum/syntax.hpp"

namespace gradsum {

class ParseError : public std::runtime_error {
 public:
  ParseError(SourcePos pos, std::vector<std::string> expected, std::string found);

  SourcePos pos() const { return pos_; }
  const std::vector<std::string>& expected() const { return expected_; }
  const std::string& found() const { return found_; }

 private:
  SourcePos pos_;
  std::vector<std::string> expected_;
  std::string found_;
};

// Surface grammar (source):
//   expr  ::= fn x => expr
//           | case expr of inj1 x => expr [ '|' inj2 x => expr ]
//           | case expr of inj2 x => expr
//           | app
//   app   ::= pre { pre }
//   pre   ::= inj1 pre | inj2 pre | atom
//   atom  ::= () | x | ( expr ) | ( expr : type )
//   type  ::= sum [ -> type ]          sum ::= tatom { SUM tatom }
//   tatom ::= Unit | ( type )
// `--` starts a line comment.
ExprRef parse_expr(std::string_view text);
TypeRef parse_type(std::string_view text);
/// Comma-separated `x : A` bindings; the empty string is the empty context.
Ctx parse_ctx(std::string_view text);

// Target grammar: as above without annotations, plus
//   fn (x : T) => M,  <p => p>pre,  matchfail,  [] (coercion hole).
TermRef parse_target(std::string_view text);
TargetTypeRef parse_target_type(std::string_view text);

}  // namespace gradsum
