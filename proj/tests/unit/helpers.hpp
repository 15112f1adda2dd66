#pragma once

#include <string>

#include "gradsum/elaborate.hpp"
#include "gradsum/harness.hpp"
#include "gradsum/parser.hpp"
#include "gradsum/printer.hpp"
#include "gradsum/relations.hpp"
#include "gradsum/target.hpp"
#include "gradsum/typecheck.hpp"

namespace gs_test {

using namespace gradsum;

inline TypeRef T(const std::string& s) { return parse_type(s); }
inline ExprRef E(const std::string& s) { return parse_expr(s); }
inline Ctx G(const std::string& s) { return parse_ctx(s); }
inline TermRef M(const std::string& s) { return parse_target(s); }
inline TargetTypeRef TT(const std::string& s) { return parse_target_type(s); }

inline std::string P(const TermRef& m) { return print_target(*m); }
inline std::string P(const TargetTypeRef& t) { return print_target_type(*t); }
inline std::string P(const TypeRef& t) { return print_type(*t); }

}  // namespace gs_test
