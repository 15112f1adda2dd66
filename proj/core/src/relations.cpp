#include "gradsum/relations.hpp"

#include <stdexcept>
#include <string>

namespace gradsum {

namespace {

using S = SumCon;

SumRelTable compose(const SumRelTable& r1, const SumRelTable& r2) {
  SumRelTable out{};
  for (std::size_t a = 0; a < kSumConCount; ++a)
    for (std::size_t b = 0; b < kSumConCount; ++b)
      for (std::size_t c = 0; c < kSumConCount; ++c)
        if (r1[a][b] && r2[b][c]) out[a][c] = true;
  return out;
}

SumRelTable converse(const SumRelTable& r) {
  SumRelTable out{};
  for (std::size_t a = 0; a < kSumConCount; ++a)
    for (std::size_t b = 0; b < kSumConCount; ++b) out[b][a] = r[a][b];
  return out;
}

using NamePairs = std::vector<std::pair<std::string_view, std::string_view>>;

bool bound_same(const NamePairs& env, std::string_view x, std::string_view y) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    bool hx = it->first == x;
    bool hy = it->second == y;
    if (hx || hy) return hx && hy;
  }
  return x == y;
}

bool expr_prec(const Expr& a, const Expr& b, NamePairs& env) {
  if (a.kind != b.kind) return false;
  auto under = [&](std::string_view x, std::string_view y, const Expr& p, const Expr& q) {
    env.emplace_back(x, y);
    bool r = expr_prec(p, q, env);
    env.pop_back();
    return r;
  };
  switch (a.kind) {
    case ExprKind::Unit:
      return true;
    case ExprKind::Var:
      return bound_same(env, a.name, b.name);
    case ExprKind::Lam:
      return under(a.name, b.name, *a.a, *b.a);
    case ExprKind::App:
      return expr_prec(*a.a, *b.a, env) && expr_prec(*a.b, *b.b, env);
    case ExprKind::Inj:
      return a.index == b.index && expr_prec(*a.a, *b.a, env);
    case ExprKind::Anno:
      return type_precision(*a.type, *b.type) && expr_prec(*a.a, *b.a, env);
    case ExprKind::CaseTwo:
      return expr_prec(*a.a, *b.a, env) && under(a.name, b.name, *a.b, *b.b) &&
             under(a.name2, b.name2, *a.c, *b.c);
    case ExprKind::CaseOne:
      return a.index == b.index && expr_prec(*a.a, *b.a, env) &&
             under(a.name, b.name, *a.b, *b.b);
  }
  return false;
}

}  // namespace

std::vector<SumEdge> subsum_edges(bool with_direct_dyn_edge) {
  std::vector<SumEdge> edges = {
      {S::PlusQ1, S::Plus1},     {S::PlusQ2, S::Plus2},     {S::PlusQ1, S::PlusQ},
      {S::PlusQ2, S::PlusQ},     {S::Plus1, S::PlusStar1},  {S::Plus2, S::PlusStar2},
      {S::PlusQ, S::PlusStar1},  {S::PlusQ, S::PlusStar2},  {S::PlusStar1, S::Plus},
      {S::PlusStar2, S::Plus},
  };
  if (with_direct_dyn_edge) edges.emplace_back(S::PlusQ, S::Plus);
  return edges;
}

std::vector<SumEdge> sum_precision_edges() {
  // No edge between +?i and +*i.
  return {
      {S::Plus1, S::PlusQ1},    {S::Plus1, S::PlusStar1}, {S::Plus2, S::PlusQ2},
      {S::Plus2, S::PlusStar2}, {S::Plus, S::PlusQ},      {S::PlusQ1, S::PlusQ},
      {S::PlusStar1, S::PlusQ}, {S::PlusQ2, S::PlusQ},    {S::PlusStar2, S::PlusQ},
  };
}

SumRelTable reflexive_transitive_closure(const std::vector<SumEdge>& edges) {
  SumRelTable t{};
  for (std::size_t a = 0; a < kSumConCount; ++a) t[a][a] = true;
  for (auto [from, to] : edges) t[ordinal(from)][ordinal(to)] = true;
  for (std::size_t k = 0; k < kSumConCount; ++k)
    for (std::size_t i = 0; i < kSumConCount; ++i)
      for (std::size_t j = 0; j < kSumConCount; ++j)
        if (t[i][k] && t[k][j]) t[i][j] = true;
  return t;
}

const SumRelTable& subsum_table() {
  static const SumRelTable table = reflexive_transitive_closure(subsum_edges());
  return table;
}

const SumRelTable& sum_precision_table() {
  static const SumRelTable table = reflexive_transitive_closure(sum_precision_edges());
  return table;
}

const SumRelTable& dcons_sum_table() {
  static const SumRelTable table =
      compose(compose(converse(sum_precision_table()), subsum_table()), sum_precision_table());
  return table;
}

bool subsum(SumCon d1, SumCon d2) { return subsum_table()[ordinal(d1)][ordinal(d2)]; }

bool sum_precision(SumCon d1, SumCon d2) {
  return sum_precision_table()[ordinal(d1)][ordinal(d2)];
}

bool dcons_sum(SumCon d1, SumCon d2) { return dcons_sum_table()[ordinal(d1)][ordinal(d2)]; }

bool subtype(const Type& a1, const Type& a2) {
  if (a1.kind != a2.kind) return false;
  switch (a1.kind) {
    case TypeKind::Unit:
      return true;
    case TypeKind::Sum:
      return subsum(a1.con, a2.con) && subtype(*a1.left, *a2.left) &&
             subtype(*a1.right, *a2.right);
    case TypeKind::Arrow:
      return subtype(*a2.left, *a1.left) && subtype(*a1.right, *a2.right);
  }
  return false;
}

bool type_precision(const Type& a1, const Type& a2) {
  if (a1.kind != a2.kind) return false;
  switch (a1.kind) {
    case TypeKind::Unit:
      return true;
    case TypeKind::Sum:
      return sum_precision(a1.con, a2.con) && type_precision(*a1.left, *a2.left) &&
             type_precision(*a1.right, *a2.right);
    case TypeKind::Arrow:
      return type_precision(*a1.left, *a2.left) && type_precision(*a1.right, *a2.right);
  }
  return false;
}

bool ctx_precision(const Ctx& g1, const Ctx& g2) {
  auto b1 = g1.bindings();
  auto b2 = g2.bindings();
  if (b1.size() != b2.size()) return false;
  for (auto it1 = b1.begin(), it2 = b2.begin(); it1 != b1.end(); ++it1, ++it2) {
    if (it1->first != it2->first) return false;
    if (!type_precision(*it1->second, *it2->second)) return false;
  }
  return true;
}

bool expr_precision(const Expr& e1, const Expr& e2) {
  NamePairs env;
  return expr_prec(e1, e2, env);
}

bool dcons(const Type& a1, const Type& a2) {
  if (a1.kind != a2.kind) return false;
  switch (a1.kind) {
    case TypeKind::Unit:
      return true;
    case TypeKind::Arrow:
      return dcons(*a2.left, *a1.left) && dcons(*a1.right, *a2.right);
    case TypeKind::Sum:
      return dcons_sum(a1.con, a2.con) && dcons(*a1.left, *a2.left) &&
             dcons(*a1.right, *a2.right);
  }
  return false;
}

bool sum_synth(SumCon d, SumCon goal) {
  switch (goal) {
    case S::Plus:
      return true;
    case S::PlusStar1:
      return d == S::PlusQ1 || d == S::Plus1 || d == S::PlusQ || d == S::PlusStar1;
    case S::PlusStar2:
      return d == S::PlusQ2 || d == S::Plus2 || d == S::PlusQ || d == S::PlusStar2;
    default:
      throw std::invalid_argument("sum_synth: goal must be +*1, +*2 or +, got " +
                                  std::string(to_string(goal)));
  }
}

bool target_subsum(TargetSum p1, TargetSum p2) { return p1 == p2 || p2 == TargetSum::Plus; }

bool target_subtype(const TargetType& t1, const TargetType& t2) {
  if (t1.is_bottom()) return true;
  if (t1.kind != t2.kind) return false;
  switch (t1.kind) {
    case TargetTypeKind::Unit:
    case TargetTypeKind::Bottom:
      return true;
    case TargetTypeKind::Sum:
      return target_subsum(t1.con, t2.con) && target_subtype(*t1.left, *t2.left) &&
             target_subtype(*t1.right, *t2.right);
    case TargetTypeKind::Arrow:
      return target_subtype(*t2.left, *t1.left) && target_subtype(*t1.right, *t2.right);
  }
  return false;
}

std::string_view to_string(CastClass c) {
  switch (c) {
    case CastClass::Safe:
      return "sc";
    case CastClass::Backward:
      return "bc";
    case CastClass::MatchCast:
      return "mc";
  }
  return "?";
}

CastClass cast_class(TargetSum from, TargetSum to) {
  if (target_subsum(from, to)) return CastClass::Safe;
  if (from == TargetSum::Plus) return CastClass::Backward;
  return CastClass::MatchCast;
}

namespace {

std::string_view direct_cast_rule(CastPair c1, CastPair c2) {
  if (c1 == c2) return "TprecastRefl";
  CastClass k1 = cast_class(c1.from, c1.to);
  CastClass k2 = cast_class(c2.from, c2.to);
  if (k1 == CastClass::MatchCast && k2 == CastClass::Backward) return "TprecastMB";
  if (k1 == CastClass::Backward && k2 == CastClass::Safe) return "TprecastBS";
  if (k1 == CastClass::MatchCast && k2 == CastClass::Safe) return "TprecastMS";
  // <+ => +> below <+i => +>
  if (c1 == CastPair{TargetSum::Plus, TargetSum::Plus} && c2.to == TargetSum::Plus &&
      c2.from != TargetSum::Plus)
    return "TprecastPlusSub";
  // Each endpoint kept or widened from +i to +: the image of source
  // precision under translation. Needed by Saturating elaboration.
  auto widens = [](TargetSum a, TargetSum b) { return a == b || b == TargetSum::Plus; };
  if (widens(c1.from, c2.from) && widens(c1.to, c2.to)) return "TprecastWiden";
  return {};
}

std::size_t cast_ordinal(CastPair c) { return ordinal(c.from) * 3 + ordinal(c.to); }

// Closure of the direct rules over the nine casts.
const std::array<std::array<bool, 9>, 9>& cast_closure() {
  static const auto table = [] {
    std::array<std::array<bool, 9>, 9> t{};
    std::array<CastPair, 9> all{};
    for (TargetSum a : kAllTargetSums)
      for (TargetSum b : kAllTargetSums) all[cast_ordinal({a, b})] = {a, b};
    for (const auto& x : all)
      for (const auto& y : all) t[cast_ordinal(x)][cast_ordinal(y)] = !direct_cast_rule(x, y).empty();
    for (std::size_t k = 0; k < 9; ++k)
      for (std::size_t i = 0; i < 9; ++i)
        for (std::size_t j = 0; j < 9; ++j)
          if (t[i][k] && t[k][j]) t[i][j] = true;
    return t;
  }();
  return table;
}

}  // namespace

std::string_view cast_precision_rule(CastPair c1, CastPair c2) {
  auto r = direct_cast_rule(c1, c2);
  if (!r.empty()) return r;
  return cast_closure()[cast_ordinal(c1)][cast_ordinal(c2)] ? "TprecastTrans" : "";
}

bool cast_precision(CastPair c1, CastPair c2) { return !cast_precision_rule(c1, c2).empty(); }

}  // namespace gradsum
