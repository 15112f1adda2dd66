#include "gradsum/typecheck.hpp"

#include <stdexcept>

#include "gradsum/printer.hpp"
#include "gradsum/relations.hpp"

namespace gradsum {

std::string_view to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::NotASubsum: return "NotASubsum";
    case ErrorKind::NoDcons: return "NoDcons";
    case ErrorKind::NotAFunction: return "NotAFunction";
    case ErrorKind::NeedsAnnotation: return "NeedsAnnotation";
    case ErrorKind::WrongInjection: return "WrongInjection";
    case ErrorKind::DoomedOneArmedCase: return "DoomedOneArmedCase";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::UnboundVariable: return "UnboundVariable";
    case ErrorKind::FragmentViolation: return "FragmentViolation";
  }
  return "?";
}

std::string TypeError::describe() const {
  std::string out = std::to_string(pos.line) + ":" + std::to_string(pos.column) + ": " +
                    std::string(to_string(kind)) + ": " + message;
  if (expected) out += "\n  expected: " + print_type(*expected);
  if (actual) out += "\n  actual:   " + print_type(*actual);
  return out;
}

std::string_view to_string(BiRule r) {
  switch (r) {
    case BiRule::SynVar: return "SynVar";
    case BiRule::ChkCSub: return "ChkCSub";
    case BiRule::SynAnno: return "SynAnno";
    case BiRule::ChkUnitIntro: return "ChkUnitIntro";
    case BiRule::ChkFunIntro: return "ChkFunIntro";
    case BiRule::SynFunElim: return "SynFunElim";
    case BiRule::ChkSumIntro: return "ChkSumIntro";
    case BiRule::ChkSumElimOne: return "ChkSumElimOne";
    case BiRule::ChkSumElimTwo: return "ChkSumElimTwo";
  }
  return "?";
}

std::string_view to_string(Direction d) { return d == Direction::Check ? "check" : "synth"; }

std::string_view to_string(TARule r) {
  switch (r) {
    case TARule::SVar: return "SVar";
    case TARule::SCSub: return "SCSub";
    case TARule::SAnno: return "SAnno";
    case TARule::SUnitIntro: return "SUnitIntro";
    case TARule::SFunIntro: return "SFunIntro";
    case TARule::SFunElim: return "SFunElim";
    case TARule::SSumIntro: return "SSumIntro";
    case TARule::SSumElimOne: return "SSumElimOne";
    case TARule::SSumElimTwo: return "SSumElimTwo";
  }
  return "?";
}

namespace {

TypeError err(ErrorKind k, const Expr& e, std::string msg, TypeRef expected = nullptr,
              TypeRef actual = nullptr) {
  return TypeError{k, e.pos, std::move(msg), std::move(expected), std::move(actual)};
}

// Per-system side conditions.

bool intro_ok(System s, Index i, SumCon d) {
  switch (s) {
    case System::Full: return subsum(innate_sum(i), d);
    case System::Static: return subsum(subscript_sum(i), d);
    case System::Dynamic: return d == SumCon::PlusQ;
  }
  return false;
}

SumCon intro_source(System s, Index i) {
  switch (s) {
    case System::Full: return innate_sum(i);
    case System::Static: return subscript_sum(i);
    case System::Dynamic: return SumCon::PlusQ;
  }
  return SumCon::PlusQ;
}

bool elim_one_ok(System s, Index i, SumCon d) {
  switch (s) {
    case System::Full: return sum_synth(d, star_sum(i));
    case System::Static: return d == subscript_sum(i);
    case System::Dynamic: return d == SumCon::PlusQ;
  }
  return false;
}

SumCon elim_one_goal(System s, Index i) {
  switch (s) {
    case System::Full: return star_sum(i);
    case System::Static: return subscript_sum(i);
    case System::Dynamic: return SumCon::PlusQ;
  }
  return SumCon::PlusQ;
}

bool elim_two_ok(System s, SumCon d) {
  switch (s) {
    case System::Full: return sum_synth(d, SumCon::Plus);
    case System::Static: return d == SumCon::Plus || d == SumCon::Plus1 || d == SumCon::Plus2;
    case System::Dynamic: return d == SumCon::PlusQ;
  }
  return false;
}

SumCon elim_two_goal(System s, SumCon d) {
  switch (s) {
    case System::Full: return SumCon::Plus;
    case System::Static: return SumCon::Plus;
    case System::Dynamic: return d;
  }
  return d;
}

bool subsumption_ok(System s, const Type& from, const Type& to) {
  switch (s) {
    case System::Full: return dcons(from, to);
    case System::Static: return subtype(from, to);
    case System::Dynamic: return from == to;
  }
  return false;
}

class Checker {
 public:
  explicit Checker(System s) : sys_(s) {}

  Outcome<BiRef> check(const Ctx& g, const ExprRef& e, const TypeRef& a) const {
    const Expr& ex = *e;
    auto node = [&](BiRule r, std::vector<BiRef> kids) {
      auto d = std::make_shared<BiDerivation>();
      d->rule = r;
      d->system = sys_;
      d->ctx = g;
      d->expr = e;
      d->dir = Direction::Check;
      d->type = a;
      d->children = std::move(kids);
      return d;
    };
    switch (ex.kind) {
      case ExprKind::Unit: {
        if (!a->is_unit()) return err(ErrorKind::ShapeMismatch, ex, "unit checked against a non-Unit type", a);
        return BiRef(node(BiRule::ChkUnitIntro, {}));
      }
      case ExprKind::Lam: {
        if (!a->is_arrow())
          return err(ErrorKind::ShapeMismatch, ex, "function checked against a non-arrow type", a);
        auto body = check(g.extend(ex.name, a->left), ex.a, a->right);
        if (!body) return body;
        return BiRef(node(BiRule::ChkFunIntro, {body.value()}));
      }
      case ExprKind::Inj: {
        if (!a->is_sum())
          return err(ErrorKind::ShapeMismatch, ex, "injection checked against a non-sum type", a);
        if (!intro_ok(sys_, ex.index, a->con))
          return err(ErrorKind::WrongInjection, ex,
                     "inj" + std::to_string(to_int(ex.index)) + " cannot produce sum " +
                         std::string(to_string(a->con)),
                     a);
        auto payload = check(g, ex.a, a->component(ex.index));
        if (!payload) return payload;
        auto d = node(BiRule::ChkSumIntro, {payload.value()});
        d->sum_fact = {intro_source(sys_, ex.index), a->con};
        return BiRef(d);
      }
      case ExprKind::CaseOne: {
        auto scrut = synth(g, ex.a);
        if (!scrut) return scrut;
        const TypeRef& s = scrut.value()->type;
        if (!s->is_sum())
          return err(ErrorKind::ShapeMismatch, *ex.a, "case scrutinee is not a sum", nullptr, s);
        if (!elim_one_ok(sys_, ex.index, s->con))
          return err(ErrorKind::DoomedOneArmedCase, ex,
                     "one-armed inj" + std::to_string(to_int(ex.index)) +
                         " case cannot eliminate sum " + std::string(to_string(s->con)),
                     nullptr, s);
        auto arm = check(g.extend(ex.name, s->component(ex.index)), ex.b, a);
        if (!arm) return arm;
        auto d = node(BiRule::ChkSumElimOne, {scrut.value(), arm.value()});
        d->sum_fact = {s->con, elim_one_goal(sys_, ex.index)};
        return BiRef(d);
      }
      case ExprKind::CaseTwo: {
        auto scrut = synth(g, ex.a);
        if (!scrut) return scrut;
        const TypeRef& s = scrut.value()->type;
        if (!s->is_sum())
          return err(ErrorKind::ShapeMismatch, *ex.a, "case scrutinee is not a sum", nullptr, s);
        if (!elim_two_ok(sys_, s->con))
          return err(ErrorKind::FragmentViolation, ex, "sum outside the fragment", nullptr, s);
        auto arm1 = check(g.extend(ex.name, s->left), ex.b, a);
        if (!arm1) return arm1;
        auto arm2 = check(g.extend(ex.name2, s->right), ex.c, a);
        if (!arm2) return arm2;
        auto d = node(BiRule::ChkSumElimTwo, {scrut.value(), arm1.value(), arm2.value()});
        d->sum_fact = {s->con, elim_two_goal(sys_, s->con)};
        return BiRef(d);
      }
      case ExprKind::Var:
      case ExprKind::App:
      case ExprKind::Anno: {
        auto inner = synth(g, e);
        if (!inner) return inner;
        const TypeRef& from = inner.value()->type;
        if (!subsumption_ok(sys_, *from, *a)) {
          auto kind = sys_ == System::Static ? ErrorKind::NotASubsum : ErrorKind::NoDcons;
          return err(kind, ex, "synthesized type does not convert to the expected type", a, from);
        }
        auto d = node(BiRule::ChkCSub, {inner.value()});
        d->sub_from = from;
        return BiRef(d);
      }
    }
    return err(ErrorKind::ShapeMismatch, ex, "unknown expression form");
  }

  Outcome<BiRef> synth(const Ctx& g, const ExprRef& e) const {
    const Expr& ex = *e;
    auto node = [&](BiRule r, TypeRef t, std::vector<BiRef> kids) {
      auto d = std::make_shared<BiDerivation>();
      d->rule = r;
      d->system = sys_;
      d->ctx = g;
      d->expr = e;
      d->dir = Direction::Synth;
      d->type = std::move(t);
      d->children = std::move(kids);
      return BiRef(d);
    };
    switch (ex.kind) {
      case ExprKind::Var: {
        const TypeRef* t = g.lookup(ex.name);
        if (t == nullptr) return err(ErrorKind::UnboundVariable, ex, "unbound variable " + ex.name);
        return node(BiRule::SynVar, *t, {});
      }
      case ExprKind::Anno: {
        auto inner = check(g, ex.a, ex.type);
        if (!inner) return inner;
        return node(BiRule::SynAnno, ex.type, {inner.value()});
      }
      case ExprKind::App: {
        auto fn = synth(g, ex.a);
        if (!fn) return fn;
        const TypeRef& ft = fn.value()->type;
        if (!ft->is_arrow())
          return err(ErrorKind::NotAFunction, *ex.a, "applied expression is not a function",
                     nullptr, ft);
        auto arg = check(g, ex.b, ft->left);
        if (!arg) return arg;
        return node(BiRule::SynFunElim, ft->right, {fn.value(), arg.value()});
      }
      case ExprKind::Unit:
      case ExprKind::Lam:
      case ExprKind::Inj:
      case ExprKind::CaseOne:
      case ExprKind::CaseTwo:
        return err(ErrorKind::NeedsAnnotation, ex,
                   "this form only checks; add a type annotation");
    }
    return err(ErrorKind::ShapeMismatch, ex, "unknown expression form");
  }

 private:
  System sys_;
};

// --- fragment membership -----------------------------------------------------

bool in_fragment(System s, SumCon d) {
  if (s == System::Static) return d == SumCon::Plus || d == SumCon::Plus1 || d == SumCon::Plus2;
  if (s == System::Dynamic) return d == SumCon::PlusQ;
  return true;
}

bool type_in(System s, const Type& a) {
  switch (a.kind) {
    case TypeKind::Unit: return true;
    case TypeKind::Arrow: return type_in(s, *a.left) && type_in(s, *a.right);
    case TypeKind::Sum:
      return in_fragment(s, a.con) && type_in(s, *a.left) && type_in(s, *a.right);
  }
  return false;
}

// First annotation outside the fragment, or null.
const Expr* expr_violation(System s, const Expr& e) {
  if (e.kind == ExprKind::Anno && !type_in(s, *e.type)) return &e;
  for (const ExprRef* k : {&e.a, &e.b, &e.c})
    if (*k)
      if (const Expr* bad = expr_violation(s, **k)) return bad;
  return nullptr;
}

bool ctx_in(System s, const Ctx& g) {
  for (const auto& [x, a] : g.bindings())
    if (!type_in(s, *a)) return false;
  return true;
}

std::optional<TypeError> fragment_guard(System s, const Ctx& g, const Expr& e, const Type* a) {
  const char* name = s == System::Static ? "static" : "dynamic";
  if (!ctx_in(s, g))
    return err(ErrorKind::FragmentViolation, e,
               std::string("context uses a sum outside the ") + name + " fragment");
  if (a && !type_in(s, *a))
    return err(ErrorKind::FragmentViolation, e,
               std::string("expected type uses a sum outside the ") + name + " fragment");
  if (const Expr* bad = expr_violation(s, e))
    return err(ErrorKind::FragmentViolation, *bad,
               std::string("annotation uses a sum outside the ") + name + " fragment", nullptr,
               bad->type);
  return std::nullopt;
}

// --- validation helpers --------------------------------------------------------

bool ctx_equal(const Ctx& g1, const Ctx& g2) {
  auto b1 = g1.bindings();
  auto b2 = g2.bindings();
  if (b1.size() != b2.size()) return false;
  for (auto i1 = b1.begin(), i2 = b2.begin(); i1 != b1.end(); ++i1, ++i2)
    if (i1->first != i2->first || !(*i1->second == *i2->second)) return false;
  return true;
}

bool ctx_extends(const Ctx& child, const Ctx& parent, const std::string& x, const TypeRef& a) {
  return ctx_equal(child, parent.extend(x, a));
}

class BiValidator {
 public:
  std::optional<std::string> run(const BiDerivation& d) {
    auto fail = [&](const std::string& why) -> std::optional<std::string> {
      return std::string(to_string(d.rule)) + " at " + print_expr(*d.expr) + ": " + why;
    };
    const Expr& e = *d.expr;
    const auto& k = d.children;
    auto arity = [&](std::size_t n) { return k.size() == n; };
    auto dir_is = [&](Direction want) { return d.dir == want; };
    auto kid_ok = [&](std::size_t i, const ExprRef& ex, Direction dir, const Ctx& g) {
      return k[i] && k[i]->expr == ex && k[i]->dir == dir && k[i]->system == d.system &&
             ctx_equal(k[i]->ctx, g);
    };
    switch (d.rule) {
      case BiRule::SynVar: {
        if (e.kind != ExprKind::Var || !dir_is(Direction::Synth) || !arity(0)) return fail("shape");
        const TypeRef* t = d.ctx.lookup(e.name);
        if (!t || !(**t == *d.type)) return fail("type differs from context");
        return std::nullopt;
      }
      case BiRule::ChkCSub: {
        if (!dir_is(Direction::Check) || !arity(1)) return fail("shape");
        if (!kid_ok(0, d.expr, Direction::Synth, d.ctx)) return fail("premise mismatch");
        if (!d.sub_from || !(*d.sub_from == *k[0]->type)) return fail("side type mismatch");
        if (!subsumption_ok(d.system, *d.sub_from, *d.type)) return fail("conversion fails");
        break;
      }
      case BiRule::SynAnno: {
        if (e.kind != ExprKind::Anno || !dir_is(Direction::Synth) || !arity(1)) return fail("shape");
        if (!(*d.type == *e.type)) return fail("type differs from annotation");
        if (!kid_ok(0, e.a, Direction::Check, d.ctx) || !(*k[0]->type == *e.type))
          return fail("premise mismatch");
        break;
      }
      case BiRule::ChkUnitIntro:
        if (e.kind != ExprKind::Unit || !dir_is(Direction::Check) || !arity(0) ||
            !d.type->is_unit())
          return fail("shape");
        return std::nullopt;
      case BiRule::ChkFunIntro: {
        if (e.kind != ExprKind::Lam || !dir_is(Direction::Check) || !arity(1) ||
            !d.type->is_arrow())
          return fail("shape");
        if (!k[0] || k[0]->expr != e.a || k[0]->dir != Direction::Check ||
            !ctx_extends(k[0]->ctx, d.ctx, e.name, d.type->left) ||
            !(*k[0]->type == *d.type->right))
          return fail("premise mismatch");
        break;
      }
      case BiRule::SynFunElim: {
        if (e.kind != ExprKind::App || !dir_is(Direction::Synth) || !arity(2)) return fail("shape");
        if (!kid_ok(0, e.a, Direction::Synth, d.ctx) || !kid_ok(1, e.b, Direction::Check, d.ctx))
          return fail("premise mismatch");
        const TypeRef& ft = k[0]->type;
        if (!ft->is_arrow() || !(*ft->right == *d.type) || !(*ft->left == *k[1]->type))
          return fail("types do not line up");
        break;
      }
      case BiRule::ChkSumIntro: {
        if (e.kind != ExprKind::Inj || !dir_is(Direction::Check) || !arity(1) ||
            !d.type->is_sum())
          return fail("shape");
        if (!d.sum_fact || d.sum_fact->first != intro_source(d.system, e.index) ||
            d.sum_fact->second != d.type->con || !intro_ok(d.system, e.index, d.type->con))
          return fail("injection not allowed into this sum");
        if (!kid_ok(0, e.a, Direction::Check, d.ctx) ||
            !(*k[0]->type == *d.type->component(e.index)))
          return fail("premise mismatch");
        break;
      }
      case BiRule::ChkSumElimOne: {
        if (e.kind != ExprKind::CaseOne || !dir_is(Direction::Check) || !arity(2))
          return fail("shape");
        if (!kid_ok(0, e.a, Direction::Synth, d.ctx)) return fail("scrutinee premise mismatch");
        const TypeRef& s = k[0]->type;
        if (!s->is_sum() || !elim_one_ok(d.system, e.index, s->con) || !d.sum_fact ||
            d.sum_fact->first != s->con || d.sum_fact->second != elim_one_goal(d.system, e.index))
          return fail("scrutinee sum not eliminable");
        if (!k[1] || k[1]->expr != e.b || k[1]->dir != Direction::Check ||
            !ctx_extends(k[1]->ctx, d.ctx, e.name, s->component(e.index)) ||
            !(*k[1]->type == *d.type))
          return fail("arm premise mismatch");
        break;
      }
      case BiRule::ChkSumElimTwo: {
        if (e.kind != ExprKind::CaseTwo || !dir_is(Direction::Check) || !arity(3))
          return fail("shape");
        if (!kid_ok(0, e.a, Direction::Synth, d.ctx)) return fail("scrutinee premise mismatch");
        const TypeRef& s = k[0]->type;
        if (!s->is_sum() || !elim_two_ok(d.system, s->con) || !d.sum_fact ||
            d.sum_fact->first != s->con || d.sum_fact->second != elim_two_goal(d.system, s->con))
          return fail("scrutinee sum not eliminable");
        for (int arm = 1; arm <= 2; ++arm) {
          const BiRef& c = k[arm];
          const ExprRef& body = arm == 1 ? e.b : e.c;
          const std::string& x = arm == 1 ? e.name : e.name2;
          const TypeRef& xt = arm == 1 ? s->left : s->right;
          if (!c || c->expr != body || c->dir != Direction::Check ||
              !ctx_extends(c->ctx, d.ctx, x, xt) || !(*c->type == *d.type))
            return fail("arm premise mismatch");
        }
        break;
      }
    }
    for (const auto& c : k)
      if (auto bad = run(*c)) return bad;
    return std::nullopt;
  }
};

// --- type assignment -----------------------------------------------------------

TARef ta_node(TARule r, const Ctx& g, const ExprRef& e, TypeRef t, std::vector<TARef> kids) {
  auto d = std::make_shared<TADerivation>();
  d->rule = r;
  d->ctx = g;
  d->expr = e;
  d->type = std::move(t);
  d->children = std::move(kids);
  return d;
}

TARef subsume(const TARef& d, const TypeRef& to) {
  return ta_node(TARule::SCSub, d->ctx, d->expr, to, {d});
}

// Raises a scrutinee derivation to the given sum constructor when needed.
TARef raise_sum(const TARef& d, SumCon goal) {
  const TypeRef& s = d->type;
  if (s->con == goal) return d;
  return subsume(d, sum_type(s->left, goal, s->right));
}

// Premises normally share the parent's subterm; hand-built ones may not.
bool same_expr(const ExprRef& a, const ExprRef& b) { return a == b || alpha_equal(*a, *b); }

class TAValidator {
 public:
  std::optional<ValidationFailure> run(const TADerivation& d) {
    auto fail = [&](std::string why) -> std::optional<ValidationFailure> {
      return ValidationFailure{&d, std::string(to_string(d.rule)) + " at " +
                                       print_expr(*d.expr) + ": " + std::move(why)};
    };
    const Expr& e = *d.expr;
    const auto& k = d.children;
    auto arity = [&](std::size_t n) {
      if (k.size() != n) return false;
      for (const auto& c : k)
        if (!c) return false;
      return true;
    };
    auto same_ctx = [&](std::size_t i, const ExprRef& ex) {
      return same_expr(k[i]->expr, ex) && ctx_equal(k[i]->ctx, d.ctx);
    };
    switch (d.rule) {
      case TARule::SVar: {
        if (e.kind != ExprKind::Var || !arity(0)) return fail("shape");
        const TypeRef* t = d.ctx.lookup(e.name);
        if (!t || !(**t == *d.type)) return fail("type differs from context");
        return std::nullopt;
      }
      case TARule::SCSub:
        if (!arity(1) || !same_ctx(0, d.expr)) return fail("premise mismatch");
        if (!dcons(*k[0]->type, *d.type))
          return fail("no directed consistency from " + print_type(*k[0]->type) + " to " +
                      print_type(*d.type));
        break;
      case TARule::SAnno:
        if (e.kind != ExprKind::Anno || !arity(1) || !same_ctx(0, e.a)) return fail("shape");
        if (!(*d.type == *e.type) || !(*k[0]->type == *e.type))
          return fail("type differs from annotation");
        break;
      case TARule::SUnitIntro:
        if (e.kind != ExprKind::Unit || !arity(0) || !d.type->is_unit()) return fail("shape");
        return std::nullopt;
      case TARule::SFunIntro:
        if (e.kind != ExprKind::Lam || !arity(1) || !d.type->is_arrow()) return fail("shape");
        if (!same_expr(k[0]->expr, e.a) || !ctx_extends(k[0]->ctx, d.ctx, e.name, d.type->left) ||
            !(*k[0]->type == *d.type->right))
          return fail("premise mismatch");
        break;
      case TARule::SFunElim: {
        if (e.kind != ExprKind::App || !arity(2) || !same_ctx(0, e.a) || !same_ctx(1, e.b))
          return fail("shape");
        const TypeRef& ft = k[0]->type;
        if (!ft->is_arrow() || !(*ft->left == *k[1]->type) || !(*ft->right == *d.type))
          return fail("types do not line up");
        break;
      }
      case TARule::SSumIntro:
        if (e.kind != ExprKind::Inj || !arity(1) || !same_ctx(0, e.a)) return fail("shape");
        if (!d.type->is_sum() || d.type->con != innate_sum(e.index))
          return fail("conclusion must be an innate sum +?" + std::to_string(to_int(e.index)));
        if (!(*k[0]->type == *d.type->component(e.index))) return fail("payload type mismatch");
        break;
      case TARule::SSumElimOne: {
        if (e.kind != ExprKind::CaseOne || !arity(2) || !same_ctx(0, e.a)) return fail("shape");
        const TypeRef& s = k[0]->type;
        if (!s->is_sum() || s->con != star_sum(e.index))
          return fail("scrutinee must have sum +*" + std::to_string(to_int(e.index)));
        if (!same_expr(k[1]->expr, e.b) || !ctx_extends(k[1]->ctx, d.ctx, e.name, s->component(e.index)) ||
            !(*k[1]->type == *d.type))
          return fail("arm premise mismatch");
        break;
      }
      case TARule::SSumElimTwo: {
        if (e.kind != ExprKind::CaseTwo || !arity(3) || !same_ctx(0, e.a)) return fail("shape");
        const TypeRef& s = k[0]->type;
        if (!s->is_sum() || s->con != SumCon::Plus) return fail("scrutinee must have sum +");
        if (!same_expr(k[1]->expr, e.b) || !ctx_extends(k[1]->ctx, d.ctx, e.name, s->left) ||
            !(*k[1]->type == *d.type) || !same_expr(k[2]->expr, e.c) ||
            !ctx_extends(k[2]->ctx, d.ctx, e.name2, s->right) || !(*k[2]->type == *d.type))
          return fail("arm premise mismatch");
        break;
      }
    }
    for (const auto& c : k)
      if (auto bad = run(*c)) return bad;
    return std::nullopt;
  }
};

// Annotation builder: each node returns an expression in synthesizing form
// (variable, application or annotation) that synthesizes the node's type.
ExprRef annotate_expr(const TADerivation& d) {
  const Expr& e = *d.expr;
  const auto& k = d.children;
  auto need = [&](bool ok) {
    if (!ok) throw std::logic_error("annotate: invalid derivation at " + print_expr(e));
  };
  switch (d.rule) {
    case TARule::SVar:
      need(e.kind == ExprKind::Var);
      return d.expr;
    case TARule::SCSub:
      need(k.size() == 1);
      return e_anno(annotate_expr(*k[0]), d.type, e.pos);
    case TARule::SAnno:
      need(e.kind == ExprKind::Anno && k.size() == 1);
      return e_anno(annotate_expr(*k[0]), e.type, e.pos);
    case TARule::SUnitIntro:
      need(e.kind == ExprKind::Unit);
      return e_anno(d.expr, d.type, e.pos);
    case TARule::SFunIntro:
      need(e.kind == ExprKind::Lam && k.size() == 1);
      return e_anno(e_lam(e.name, annotate_expr(*k[0]), e.pos), d.type, e.pos);
    case TARule::SFunElim:
      need(e.kind == ExprKind::App && k.size() == 2);
      return e_app(annotate_expr(*k[0]), annotate_expr(*k[1]), e.pos);
    case TARule::SSumIntro:
      need(e.kind == ExprKind::Inj && k.size() == 1);
      return e_anno(e_inj(e.index, annotate_expr(*k[0]), e.pos), d.type, e.pos);
    case TARule::SSumElimOne:
      need(e.kind == ExprKind::CaseOne && k.size() == 2);
      return e_anno(e_case_one(annotate_expr(*k[0]), e.index, e.name, annotate_expr(*k[1]), e.pos),
                    d.type, e.pos);
    case TARule::SSumElimTwo:
      need(e.kind == ExprKind::CaseTwo && k.size() == 3);
      return e_anno(e_case_two(annotate_expr(*k[0]), e.name, annotate_expr(*k[1]), e.name2,
                               annotate_expr(*k[2]), e.pos),
                    d.type, e.pos);
  }
  throw std::logic_error("annotate: unknown rule");
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

bool anno_le(const Expr& a, const Expr& b, NamePairs& env) {
  // Extra annotation on the right: strip it and retry.
  if (b.kind == ExprKind::Anno && anno_le(a, *b.a, env)) return true;
  if (a.kind != b.kind) return false;
  auto under = [&](std::string_view x, std::string_view y, const Expr& p, const Expr& q) {
    env.emplace_back(x, y);
    bool r = anno_le(p, q, env);
    env.pop_back();
    return r;
  };
  switch (a.kind) {
    case ExprKind::Unit: return true;
    case ExprKind::Var: return bound_same(env, a.name, b.name);
    case ExprKind::Lam: return under(a.name, b.name, *a.a, *b.a);
    case ExprKind::App: return anno_le(*a.a, *b.a, env) && anno_le(*a.b, *b.b, env);
    case ExprKind::Inj: return a.index == b.index && anno_le(*a.a, *b.a, env);
    case ExprKind::Anno: return *a.type == *b.type && anno_le(*a.a, *b.a, env);
    case ExprKind::CaseTwo:
      return anno_le(*a.a, *b.a, env) && under(a.name, b.name, *a.b, *b.b) &&
             under(a.name2, b.name2, *a.c, *b.c);
    case ExprKind::CaseOne:
      return a.index == b.index && anno_le(*a.a, *b.a, env) &&
             under(a.name, b.name, *a.b, *b.b);
  }
  return false;
}

}  // namespace

Outcome<BiRef> check(const Ctx& g, const ExprRef& e, const TypeRef& a) {
  return Checker(System::Full).check(g, e, a);
}

Outcome<BiRef> synth(const Ctx& g, const ExprRef& e) { return Checker(System::Full).synth(g, e); }

Outcome<BiRef> static_check(const Ctx& g, const ExprRef& e, const TypeRef& a) {
  if (auto bad = fragment_guard(System::Static, g, *e, a.get())) return *bad;
  return Checker(System::Static).check(g, e, a);
}

Outcome<BiRef> static_synth(const Ctx& g, const ExprRef& e) {
  if (auto bad = fragment_guard(System::Static, g, *e, nullptr)) return *bad;
  return Checker(System::Static).synth(g, e);
}

Outcome<BiRef> dyn_check(const Ctx& g, const ExprRef& e, const TypeRef& a) {
  if (auto bad = fragment_guard(System::Dynamic, g, *e, a.get())) return *bad;
  return Checker(System::Dynamic).check(g, e, a);
}

Outcome<BiRef> dyn_synth(const Ctx& g, const ExprRef& e) {
  if (auto bad = fragment_guard(System::Dynamic, g, *e, nullptr)) return *bad;
  return Checker(System::Dynamic).synth(g, e);
}

bool is_static(const Type& a) { return type_in(System::Static, a); }
bool is_static(const Expr& e) { return expr_violation(System::Static, e) == nullptr; }
bool is_static(const Ctx& g) { return ctx_in(System::Static, g); }
bool is_dynamic(const Type& a) { return type_in(System::Dynamic, a); }
bool is_dynamic(const Expr& e) { return expr_violation(System::Dynamic, e) == nullptr; }
bool is_dynamic(const Ctx& g) { return ctx_in(System::Dynamic, g); }

std::size_t derivation_size(const BiDerivation& d) {
  std::size_t n = 1;
  for (const auto& c : d.children) n += derivation_size(*c);
  return n;
}

std::optional<std::string> validate_bidirectional(const BiDerivation& d) {
  return BiValidator().run(d);
}

std::optional<ValidationFailure> validate_assignment(const TADerivation& d) {
  return TAValidator().run(d);
}

TARef embed(const BiRef& d) {
  const BiDerivation& b = *d;
  const auto& k = b.children;
  switch (b.rule) {
    case BiRule::SynVar:
      return ta_node(TARule::SVar, b.ctx, b.expr, b.type, {});
    case BiRule::ChkCSub:
      return subsume(embed(k[0]), b.type);
    case BiRule::SynAnno:
      return ta_node(TARule::SAnno, b.ctx, b.expr, b.type, {embed(k[0])});
    case BiRule::ChkUnitIntro:
      return ta_node(TARule::SUnitIntro, b.ctx, b.expr, b.type, {});
    case BiRule::ChkFunIntro:
      return ta_node(TARule::SFunIntro, b.ctx, b.expr, b.type, {embed(k[0])});
    case BiRule::SynFunElim:
      return ta_node(TARule::SFunElim, b.ctx, b.expr, b.type, {embed(k[0]), embed(k[1])});
    case BiRule::ChkSumIntro: {
      Index i = b.expr->index;
      auto innate = sum_type(b.type->left, innate_sum(i), b.type->right);
      auto intro = ta_node(TARule::SSumIntro, b.ctx, b.expr, innate, {embed(k[0])});
      return subsume(intro, b.type);
    }
    case BiRule::ChkSumElimOne: {
      auto scrut = raise_sum(embed(k[0]), star_sum(b.expr->index));
      return ta_node(TARule::SSumElimOne, b.ctx, b.expr, b.type, {scrut, embed(k[1])});
    }
    case BiRule::ChkSumElimTwo: {
      auto scrut = raise_sum(embed(k[0]), SumCon::Plus);
      return ta_node(TARule::SSumElimTwo, b.ctx, b.expr, b.type,
                     {scrut, embed(k[1]), embed(k[2])});
    }
  }
  throw std::logic_error("embed: unknown rule");
}

Annotated annotate(const TARef& d) {
  if (auto bad = validate_assignment(*d)) throw std::logic_error("annotate: " + bad->reason);
  ExprRef out = annotate_expr(*d);
  auto res = synth(d->ctx, out);
  if (!res) throw std::logic_error("annotate: result does not synthesize: " + res.error().describe());
  return {out, res.value()};
}

bool eq_anno(const Expr& e1, const Expr& e2) {
  NamePairs env;
  return anno_le(e1, e2, env);
}

}  // namespace gradsum
