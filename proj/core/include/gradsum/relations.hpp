#pragma once

// Decision procedures for the relations on sum constructors, types,
// contexts and expressions, plus the target-side subsumption and the
// cast classification used by term precision.

#include <array>
#include <string_view>
#include <utility>
#include <vector>

#include "gradsum/syntax.hpp"

namespace gradsum {

/// An 8x8 relation on sum constructors: table[a][b] holds iff a R b.
using SumRelTable = std::array<std::array<bool, kSumConCount>, kSumConCount>;
using SumEdge = std::pair<SumCon, SumCon>;

/// Covering edges of subsum. The edge +? <= + is redundant given
/// +? <= +*i <= +; `with_direct_dyn_edge` chooses whether it is listed.
std::vector<SumEdge> subsum_edges(bool with_direct_dyn_edge = true);
std::vector<SumEdge> sum_precision_edges();

/// Reflexive-transitive closure of an edge list.
SumRelTable reflexive_transitive_closure(const std::vector<SumEdge>& edges);

const SumRelTable& subsum_table();
const SumRelTable& sum_precision_table();
/// Composition (precision)^-1 ; subsum ; precision.
const SumRelTable& dcons_sum_table();

bool subsum(SumCon d1, SumCon d2);
bool sum_precision(SumCon d1, SumCon d2);
bool dcons_sum(SumCon d1, SumCon d2);

bool subtype(const Type& a1, const Type& a2);
bool type_precision(const Type& a1, const Type& a2);
bool ctx_precision(const Ctx& g1, const Ctx& g2);
/// e1 is at most as imprecise as e2: identical structure and binders,
/// annotation types related pointwise by type_precision.
bool expr_precision(const Expr& e1, const Expr& e2);

/// Directed consistency a1 ~> a2, computed structurally.
bool dcons(const Type& a1, const Type& a2);

/// The sum-synthesis judgment d => goal; goal must be +*1, +*2 or +.
/// Throws std::invalid_argument for any other goal.
bool sum_synth(SumCon d, SumCon goal);

// --- target side -------------------------------------------------------------

bool target_subsum(TargetSum p1, TargetSum p2);
/// Structural subtyping, contravariant in arrow domains; Bottom is below
/// every type.
bool target_subtype(const TargetType& t1, const TargetType& t2);

enum class CastClass { Safe, Backward, MatchCast };

std::string_view to_string(CastClass c);
CastClass cast_class(TargetSum from, TargetSum to);

struct CastPair {
  TargetSum from;
  TargetSum to;

  friend bool operator==(const CastPair&, const CastPair&) = default;
};

/// Name of the first cast-precision rule relating c1 below c2, or an empty
/// view if none applies.
std::string_view cast_precision_rule(CastPair c1, CastPair c2);
bool cast_precision(CastPair c1, CastPair c2);

}  // namespace gradsum
