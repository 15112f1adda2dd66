#pragma once

#include <string>

#include "gradsum/syntax.hpp"

namespace gradsum {

std::string print_type(const Type& t);
std::string print_expr(const Expr& e);
std::string print_ctx(const Ctx& g);

std::string print_target_type(const TargetType& t);
std::string print_target(const TargetTerm& m);

}  // namespace gradsum
