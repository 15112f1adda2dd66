#include "gradsum/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <utility>

namespace gradsum {

namespace {

constexpr std::array<std::string_view, kSumConCount> kSumConNames = {"+",  "+1",  "+2",  "+?",
                                                                    "+?1", "+?2", "+*1", "+*2"};
constexpr std::array<std::string_view, 3> kTargetSumNames = {"+", "+1", "+2"};

constexpr std::array<std::string_view, 7> kReserved = {"fn",   "case", "of",       "inj1",
                                                       "inj2", "Unit", "matchfail"};

// Binder correspondence for alpha-equivalence: pairs of names bound at the
// same depth on either side.
using BinderStack = std::vector<std::pair<std::string_view, std::string_view>>;

bool same_var(const BinderStack& env, std::string_view x, std::string_view y) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    bool hx = it->first == x;
    bool hy = it->second == y;
    if (hx || hy) return hx && hy;
  }
  return x == y;
}

template <class Fn>
bool under(BinderStack& env, std::string_view x, std::string_view y, Fn&& fn) {
  env.emplace_back(x, y);
  bool r = fn();
  env.pop_back();
  return r;
}

bool aeq(const Expr& a, const Expr& b, BinderStack& env) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprKind::Unit:
      return true;
    case ExprKind::Var:
      return same_var(env, a.name, b.name);
    case ExprKind::Lam:
      return under(env, a.name, b.name, [&] { return aeq(*a.a, *b.a, env); });
    case ExprKind::App:
      return aeq(*a.a, *b.a, env) && aeq(*a.b, *b.b, env);
    case ExprKind::Inj:
      return a.index == b.index && aeq(*a.a, *b.a, env);
    case ExprKind::Anno:
      return *a.type == *b.type && aeq(*a.a, *b.a, env);
    case ExprKind::CaseTwo:
      return aeq(*a.a, *b.a, env) &&
             under(env, a.name, b.name, [&] { return aeq(*a.b, *b.b, env); }) &&
             under(env, a.name2, b.name2, [&] { return aeq(*a.c, *b.c, env); });
    case ExprKind::CaseOne:
      return a.index == b.index && aeq(*a.a, *b.a, env) &&
             under(env, a.name, b.name, [&] { return aeq(*a.b, *b.b, env); });
  }
  return false;
}

bool aeq(const TargetTerm& a, const TargetTerm& b, BinderStack& env) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TermKind::Unit:
    case TermKind::Matchfail:
    case TermKind::Hole:
      return true;
    case TermKind::Var:
      return same_var(env, a.name, b.name);
    case TermKind::Lam:
      return *a.dom == *b.dom &&
             under(env, a.name, b.name, [&] { return aeq(*a.a, *b.a, env); });
    case TermKind::App:
      return aeq(*a.a, *b.a, env) && aeq(*a.b, *b.b, env);
    case TermKind::Inj:
      return a.index == b.index && aeq(*a.a, *b.a, env);
    case TermKind::CaseTwo:
      return aeq(*a.a, *b.a, env) &&
             under(env, a.name, b.name, [&] { return aeq(*a.b, *b.b, env); }) &&
             under(env, a.name2, b.name2, [&] { return aeq(*a.c, *b.c, env); });
    case TermKind::CaseOne:
      return a.index == b.index && aeq(*a.a, *b.a, env) &&
             under(env, a.name, b.name, [&] { return aeq(*a.b, *b.b, env); });
    case TermKind::Cast:
      return a.from == b.from && a.to == b.to && aeq(*a.a, *b.a, env);
  }
  return false;
}

void collect_free(const Expr& e, std::vector<std::string>& bound, std::set<std::string>& out) {
  auto with = [&](const std::string& x, const Expr& body) {
    bound.push_back(x);
    collect_free(body, bound, out);
    bound.pop_back();
  };
  switch (e.kind) {
    case ExprKind::Unit:
      return;
    case ExprKind::Var:
      if (std::find(bound.begin(), bound.end(), e.name) == bound.end()) out.insert(e.name);
      return;
    case ExprKind::Lam:
      with(e.name, *e.a);
      return;
    case ExprKind::App:
      collect_free(*e.a, bound, out);
      collect_free(*e.b, bound, out);
      return;
    case ExprKind::Inj:
    case ExprKind::Anno:
      collect_free(*e.a, bound, out);
      return;
    case ExprKind::CaseTwo:
      collect_free(*e.a, bound, out);
      with(e.name, *e.b);
      with(e.name2, *e.c);
      return;
    case ExprKind::CaseOne:
      collect_free(*e.a, bound, out);
      with(e.name, *e.b);
      return;
  }
}

void collect_free(const TargetTerm& m, std::vector<std::string>& bound,
                  std::set<std::string>& out) {
  auto with = [&](const std::string& x, const TargetTerm& body) {
    bound.push_back(x);
    collect_free(body, bound, out);
    bound.pop_back();
  };
  switch (m.kind) {
    case TermKind::Unit:
    case TermKind::Matchfail:
    case TermKind::Hole:
      return;
    case TermKind::Var:
      if (std::find(bound.begin(), bound.end(), m.name) == bound.end()) out.insert(m.name);
      return;
    case TermKind::Lam:
      with(m.name, *m.a);
      return;
    case TermKind::App:
      collect_free(*m.a, bound, out);
      collect_free(*m.b, bound, out);
      return;
    case TermKind::Inj:
    case TermKind::Cast:
      collect_free(*m.a, bound, out);
      return;
    case TermKind::CaseTwo:
      collect_free(*m.a, bound, out);
      with(m.name, *m.b);
      with(m.name2, *m.c);
      return;
    case TermKind::CaseOne:
      collect_free(*m.a, bound, out);
      with(m.name, *m.b);
      return;
  }
}

bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

TermRef with_children(const TargetTerm& m, TermRef a, TermRef b, TermRef c) {
  auto out = std::make_shared<TargetTerm>(m);
  out->a = std::move(a);
  out->b = std::move(b);
  out->c = std::move(c);
  return out;
}

struct Substituter {
  const std::string& x;
  const TermRef& value;
  std::vector<std::string> value_fv;

  // Substitutes under binder y in body, renaming y when it would capture.
  std::pair<std::string, TermRef> under_binder(const std::string& y, const TermRef& body) {
    if (y == x) return {y, body};
    if (!contains(value_fv, y)) return {y, run(body)};
    std::vector<std::string> avoid = value_fv;
    auto body_fv = free_vars(*body);
    avoid.insert(avoid.end(), body_fv.begin(), body_fv.end());
    avoid.push_back(x);
    std::string z = fresh_name(y, avoid);
    TermRef renamed = substitute(body, y, t_var(z));
    return {z, run(renamed)};
  }

  TermRef run(const TermRef& m) {
    switch (m->kind) {
      case TermKind::Unit:
      case TermKind::Matchfail:
      case TermKind::Hole:
        return m;
      case TermKind::Var:
        return m->name == x ? value : m;
      case TermKind::Lam: {
        auto [y, body] = under_binder(m->name, m->a);
        auto out = std::make_shared<TargetTerm>(*m);
        out->name = y;
        out->a = body;
        return out;
      }
      case TermKind::App:
        return with_children(*m, run(m->a), run(m->b), nullptr);
      case TermKind::Inj:
      case TermKind::Cast:
        return with_children(*m, run(m->a), nullptr, nullptr);
      case TermKind::CaseTwo: {
        auto scrut = run(m->a);
        auto [y1, arm1] = under_binder(m->name, m->b);
        auto [y2, arm2] = under_binder(m->name2, m->c);
        return t_case_two(scrut, y1, arm1, y2, arm2);
      }
      case TermKind::CaseOne: {
        auto scrut = run(m->a);
        auto [y, arm] = under_binder(m->name, m->b);
        return t_case_one(scrut, m->index, y, arm);
      }
    }
    return m;
  }
};

}  // namespace

std::string_view to_string(SumCon d) { return kSumConNames[ordinal(d)]; }

std::optional<SumCon> sum_con_from_token(std::string_view tok) {
  for (SumCon d : kAllSumCons)
    if (kSumConNames[ordinal(d)] == tok) return d;
  return std::nullopt;
}

std::string_view to_string(TargetSum p) { return kTargetSumNames[ordinal(p)]; }

std::optional<TargetSum> target_sum_from_token(std::string_view tok) {
  for (TargetSum p : kAllTargetSums)
    if (kTargetSumNames[ordinal(p)] == tok) return p;
  return std::nullopt;
}

bool is_reserved_word(std::string_view ident) {
  return std::find(kReserved.begin(), kReserved.end(), ident) != kReserved.end();
}

// --- source types -----------------------------------------------------------

TypeRef unit_type() {
  static const TypeRef unit = std::make_shared<const Type>();
  return unit;
}

TypeRef sum_type(TypeRef left, SumCon con, TypeRef right) {
  return std::make_shared<const Type>(Type{TypeKind::Sum, con, std::move(left), std::move(right)});
}

TypeRef arrow_type(TypeRef dom, TypeRef cod) {
  return std::make_shared<const Type>(
      Type{TypeKind::Arrow, SumCon::Plus, std::move(dom), std::move(cod)});
}

bool operator==(const Type& a, const Type& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TypeKind::Unit:
      return true;
    case TypeKind::Sum:
      return a.con == b.con && *a.left == *b.left && *a.right == *b.right;
    case TypeKind::Arrow:
      return *a.left == *b.left && *a.right == *b.right;
  }
  return false;
}

bool type_equal(const TypeRef& a, const TypeRef& b) { return *a == *b; }

bool same_shape(const Type& a, const Type& b) {
  if (a.kind != b.kind) return false;
  if (a.is_unit()) return true;
  return same_shape(*a.left, *b.left) && same_shape(*a.right, *b.right);
}

int type_depth(const Type& t) {
  if (t.is_unit()) return 0;
  return 1 + std::max(type_depth(*t.left), type_depth(*t.right));
}

// --- expressions ------------------------------------------------------------

namespace {
std::shared_ptr<Expr> make_expr(ExprKind k, SourcePos pos) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->pos = pos;
  return e;
}
}  // namespace

ExprRef e_unit(SourcePos pos) { return make_expr(ExprKind::Unit, pos); }

ExprRef e_var(std::string name, SourcePos pos) {
  auto e = make_expr(ExprKind::Var, pos);
  e->name = std::move(name);
  return e;
}

ExprRef e_lam(std::string bound, ExprRef body, SourcePos pos) {
  auto e = make_expr(ExprKind::Lam, pos);
  e->name = std::move(bound);
  e->a = std::move(body);
  return e;
}

ExprRef e_app(ExprRef fn, ExprRef arg, SourcePos pos) {
  auto e = make_expr(ExprKind::App, pos);
  e->a = std::move(fn);
  e->b = std::move(arg);
  return e;
}

ExprRef e_inj(Index i, ExprRef payload, SourcePos pos) {
  auto e = make_expr(ExprKind::Inj, pos);
  e->index = i;
  e->a = std::move(payload);
  return e;
}

ExprRef e_anno(ExprRef inner, TypeRef type, SourcePos pos) {
  auto e = make_expr(ExprKind::Anno, pos);
  e->a = std::move(inner);
  e->type = std::move(type);
  return e;
}

ExprRef e_case_two(ExprRef scrut, std::string x1, ExprRef arm1, std::string x2, ExprRef arm2,
                   SourcePos pos) {
  auto e = make_expr(ExprKind::CaseTwo, pos);
  e->a = std::move(scrut);
  e->name = std::move(x1);
  e->b = std::move(arm1);
  e->name2 = std::move(x2);
  e->c = std::move(arm2);
  return e;
}

ExprRef e_case_one(ExprRef scrut, Index i, std::string x, ExprRef arm, SourcePos pos) {
  auto e = make_expr(ExprKind::CaseOne, pos);
  e->a = std::move(scrut);
  e->index = i;
  e->name = std::move(x);
  e->b = std::move(arm);
  return e;
}

std::size_t expr_size(const Expr& e) {
  std::size_t n = 1;
  for (const ExprRef* child : {&e.a, &e.b, &e.c})
    if (*child) n += expr_size(**child);
  return n;
}

bool alpha_equal(const Expr& a, const Expr& b) {
  BinderStack env;
  return aeq(a, b, env);
}

std::vector<std::string> free_vars(const Expr& e) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(e, bound, out);
  return {out.begin(), out.end()};
}

// --- target types -----------------------------------------------------------

TargetTypeRef t_unit_type() {
  static const TargetTypeRef unit = std::make_shared<const TargetType>();
  return unit;
}

TargetTypeRef t_bottom() {
  static const TargetTypeRef bot =
      std::make_shared<const TargetType>(TargetType{TargetTypeKind::Bottom, {}, {}, {}});
  return bot;
}

TargetTypeRef t_sum_type(TargetTypeRef left, TargetSum con, TargetTypeRef right) {
  return std::make_shared<const TargetType>(
      TargetType{TargetTypeKind::Sum, con, std::move(left), std::move(right)});
}

TargetTypeRef t_arrow_type(TargetTypeRef dom, TargetTypeRef cod) {
  return std::make_shared<const TargetType>(
      TargetType{TargetTypeKind::Arrow, TargetSum::Plus, std::move(dom), std::move(cod)});
}

bool operator==(const TargetType& a, const TargetType& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TargetTypeKind::Unit:
    case TargetTypeKind::Bottom:
      return true;
    case TargetTypeKind::Sum:
      return a.con == b.con && *a.left == *b.left && *a.right == *b.right;
    case TargetTypeKind::Arrow:
      return *a.left == *b.left && *a.right == *b.right;
  }
  return false;
}

bool target_type_equal(const TargetTypeRef& a, const TargetTypeRef& b) { return *a == *b; }

bool contains_bottom(const TargetType& t) {
  switch (t.kind) {
    case TargetTypeKind::Bottom:
      return true;
    case TargetTypeKind::Unit:
      return false;
    default:
      return contains_bottom(*t.left) || contains_bottom(*t.right);
  }
}

TargetTypeRef default_free_components(const TargetTypeRef& t) {
  switch (t->kind) {
    case TargetTypeKind::Bottom:
      return t_unit_type();
    case TargetTypeKind::Unit:
      return t;
    case TargetTypeKind::Sum:
      return t_sum_type(default_free_components(t->left), t->con,
                        default_free_components(t->right));
    case TargetTypeKind::Arrow:
      return t_arrow_type(default_free_components(t->left), default_free_components(t->right));
  }
  return t;
}

// --- target terms -----------------------------------------------------------

namespace {
std::shared_ptr<TargetTerm> make_term(TermKind k) {
  auto m = std::make_shared<TargetTerm>();
  m->kind = k;
  return m;
}
}  // namespace

TermRef t_unit() {
  static const TermRef unit = make_term(TermKind::Unit);
  return unit;
}

TermRef t_var(std::string name) {
  auto m = make_term(TermKind::Var);
  m->name = std::move(name);
  return m;
}

TermRef t_lam(std::string bound, TargetTypeRef dom, TermRef body) {
  assert(dom);
  auto m = make_term(TermKind::Lam);
  m->name = std::move(bound);
  m->dom = std::move(dom);
  m->a = std::move(body);
  return m;
}

TermRef t_app(TermRef fn, TermRef arg) {
  auto m = make_term(TermKind::App);
  m->a = std::move(fn);
  m->b = std::move(arg);
  return m;
}

TermRef t_inj(Index i, TermRef payload) {
  auto m = make_term(TermKind::Inj);
  m->index = i;
  m->a = std::move(payload);
  return m;
}

TermRef t_case_two(TermRef scrut, std::string x1, TermRef arm1, std::string x2, TermRef arm2) {
  auto m = make_term(TermKind::CaseTwo);
  m->a = std::move(scrut);
  m->name = std::move(x1);
  m->b = std::move(arm1);
  m->name2 = std::move(x2);
  m->c = std::move(arm2);
  return m;
}

TermRef t_case_one(TermRef scrut, Index i, std::string x, TermRef arm) {
  auto m = make_term(TermKind::CaseOne);
  m->a = std::move(scrut);
  m->index = i;
  m->name = std::move(x);
  m->b = std::move(arm);
  return m;
}

TermRef t_cast(TargetSum from, TargetSum to, TermRef inner) {
  auto m = make_term(TermKind::Cast);
  m->from = from;
  m->to = to;
  m->a = std::move(inner);
  return m;
}

TermRef t_matchfail() {
  static const TermRef mf = make_term(TermKind::Matchfail);
  return mf;
}

TermRef t_hole() {
  static const TermRef hole = make_term(TermKind::Hole);
  return hole;
}

std::size_t term_size(const TargetTerm& m) {
  std::size_t n = 1;
  for (const TermRef* child : {&m.a, &m.b, &m.c})
    if (*child) n += term_size(**child);
  return n;
}

bool alpha_equal(const TargetTerm& a, const TargetTerm& b) {
  BinderStack env;
  return aeq(a, b, env);
}

std::vector<std::string> free_vars(const TargetTerm& m) {
  std::vector<std::string> bound;
  std::set<std::string> out;
  collect_free(m, bound, out);
  return {out.begin(), out.end()};
}

std::size_t count_holes(const TargetTerm& m) {
  if (m.kind == TermKind::Hole) return 1;
  std::size_t n = 0;
  for (const TermRef* child : {&m.a, &m.b, &m.c})
    if (*child) n += count_holes(**child);
  return n;
}

TermRef substitute(const TermRef& body, const std::string& x, const TermRef& value) {
  Substituter s{x, value, free_vars(*value)};
  return s.run(body);
}

std::string fresh_name(const std::string& base, const std::vector<std::string>& avoid) {
  std::string stem = base.substr(0, base.find('\''));
  for (int n = 1;; ++n) {
    std::string candidate = stem + "'" + std::to_string(n);
    if (!contains(avoid, candidate)) return candidate;
  }
}

}  // namespace gradsum
