#include "gradsum/target.hpp"

#include <stdexcept>

#include "gradsum/printer.hpp"
#include "gradsum/relations.hpp"

namespace gradsum {

std::string TargetTypeError::describe() const {
  return reason + (node ? " in " + print_target(*node) : std::string());
}

// --- joins and meets -----------------------------------------------------------

std::optional<TargetTypeRef> target_join(const TargetTypeRef& a, const TargetTypeRef& b) {
  if (a->is_bottom()) return b;
  if (b->is_bottom()) return a;
  if (a->kind != b->kind) return std::nullopt;
  switch (a->kind) {
    case TargetTypeKind::Unit:
    case TargetTypeKind::Bottom:
      return a;
    case TargetTypeKind::Sum: {
      auto l = target_join(a->left, b->left);
      auto r = target_join(a->right, b->right);
      if (!l || !r) return std::nullopt;
      TargetSum p = a->con == b->con ? a->con : TargetSum::Plus;
      return t_sum_type(*l, p, *r);
    }
    case TargetTypeKind::Arrow: {
      auto cod = target_join(a->right, b->right);
      if (!cod) return std::nullopt;
      return t_arrow_type(target_meet(a->left, b->left), *cod);
    }
  }
  return std::nullopt;
}

TargetTypeRef target_meet(const TargetTypeRef& a, const TargetTypeRef& b) {
  if (a->is_bottom() || b->is_bottom() || a->kind != b->kind) return t_bottom();
  switch (a->kind) {
    case TargetTypeKind::Unit:
    case TargetTypeKind::Bottom:
      return a;
    case TargetTypeKind::Sum: {
      TargetSum p;
      if (a->con == b->con || b->con == TargetSum::Plus) p = a->con;
      else if (a->con == TargetSum::Plus) p = b->con;
      else return t_bottom();  // +1 against +2
      return t_sum_type(target_meet(a->left, b->left), p, target_meet(a->right, b->right));
    }
    case TargetTypeKind::Arrow: {
      auto dom = target_join(a->left, b->left);
      if (!dom) return t_bottom();
      return t_arrow_type(*dom, target_meet(a->right, b->right));
    }
  }
  return t_bottom();
}

// --- principal typing ------------------------------------------------------------

namespace {

using TypeOutcome = Outcome<TargetTypeRef, TargetTypeError>;

TypeOutcome ill(const TermRef& m, std::string why) { return TargetTypeError{std::move(why), m}; }

TypeOutcome principal(const TargetCtx& th, const TermRef& m) {
  switch (m->kind) {
    case TermKind::Unit:
      return t_unit_type();
    case TermKind::Matchfail:
      return t_bottom();
    case TermKind::Hole:
      return ill(m, "unfilled hole");
    case TermKind::Var: {
      const TargetTypeRef* t = th.lookup(m->name);
      if (!t) return ill(m, "unbound variable " + m->name);
      return *t;
    }
    case TermKind::Lam: {
      auto body = principal(th.extend(m->name, m->dom), m->a);
      if (!body) return body;
      return t_arrow_type(m->dom, body.value());
    }
    case TermKind::App: {
      auto fn = principal(th, m->a);
      if (!fn) return fn;
      auto arg = principal(th, m->b);
      if (!arg) return arg;
      const TargetTypeRef& ft = fn.value();
      if (ft->is_bottom()) return t_bottom();
      if (!ft->is_arrow()) return ill(m, "applying a non-function");
      if (!target_subtype(*arg.value(), *ft->left))
        return ill(m, "argument type " + print_target_type(*arg.value()) +
                          " is not below domain " + print_target_type(*ft->left));
      return ft->right;
    }
    case TermKind::Inj: {
      auto payload = principal(th, m->a);
      if (!payload) return payload;
      TargetSum p = target_subscript(m->index);
      if (m->index == Index::One) return t_sum_type(payload.value(), p, t_bottom());
      return t_sum_type(t_bottom(), p, payload.value());
    }
    case TermKind::Cast: {
      auto inner = principal(th, m->a);
      if (!inner) return inner;
      const TargetTypeRef& s = inner.value();
      if (s->is_bottom()) return t_sum_type(t_bottom(), m->to, t_bottom());
      if (!s->is_sum()) return ill(m, "cast of a non-sum");
      if (!target_subsum(s->con, m->from))
        return ill(m, "cast source " + std::string(to_string(m->from)) + " does not cover " +
                          std::string(to_string(s->con)));
      return t_sum_type(s->left, m->to, s->right);
    }
    case TermKind::CaseOne: {
      auto scrut = principal(th, m->a);
      if (!scrut) return scrut;
      const TargetTypeRef& s = scrut.value();
      TargetTypeRef xt;
      if (s->is_bottom()) {
        xt = t_bottom();
      } else {
        if (!s->is_sum()) return ill(m, "case on a non-sum");
        if (!target_subsum(s->con, target_subscript(m->index)))
          return ill(m, "one-armed case needs sum " +
                            std::string(to_string(target_subscript(m->index))));
        xt = s->component(m->index);
      }
      return principal(th.extend(m->name, xt), m->b);
    }
    case TermKind::CaseTwo: {
      auto scrut = principal(th, m->a);
      if (!scrut) return scrut;
      const TargetTypeRef& s = scrut.value();
      TargetTypeRef x1 = t_bottom(), x2 = t_bottom();
      if (!s->is_bottom()) {
        if (!s->is_sum()) return ill(m, "case on a non-sum");
        x1 = s->left;
        x2 = s->right;
      }
      auto arm1 = principal(th.extend(m->name, x1), m->b);
      if (!arm1) return arm1;
      auto arm2 = principal(th.extend(m->name2, x2), m->c);
      if (!arm2) return arm2;
      auto j = target_join(arm1.value(), arm2.value());
      if (!j)
        return ill(m, "JoinFailure: arms have types " + print_target_type(*arm1.value()) +
                          " and " + print_target_type(*arm2.value()));
      return *j;
    }
  }
  return ill(m, "unknown term");
}

}  // namespace

Outcome<TargetTypeRef, TargetTypeError> target_typecheck(const TargetCtx& th, const TermRef& m) {
  return principal(th, m);
}

// --- evaluation ----------------------------------------------------------------

std::string_view to_string(ReduceRule r) {
  switch (r) {
    case ReduceRule::Upcast: return "ReduceUpcast";
    case ReduceRule::CastSuccess: return "ReduceCastSuccess";
    case ReduceRule::CastFailure: return "ReduceCastFailure";
    case ReduceRule::CaseOne: return "ReduceCaseOne";
    case ReduceRule::CaseTwo: return "ReduceCaseTwo";
    case ReduceRule::Beta: return "ReduceBeta";
  }
  return "?";
}

std::string_view to_string(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Value: return "value";
    case Verdict::Kind::Matchfail: return "matchfail";
    case Verdict::Kind::BudgetExceeded: return "budget-exceeded";
    case Verdict::Kind::Stuck: return "stuck";
  }
  return "?";
}

bool is_value(const TargetTerm& m) {
  switch (m.kind) {
    case TermKind::Unit:
    case TermKind::Var:
    case TermKind::Lam:
      return true;
    case TermKind::Inj:
      return is_value(*m.a);
    default:
      return false;
  }
}

namespace {

bool none_of_kind(const TargetTerm& m, TermKind k) {
  if (m.kind == k) return false;
  for (const TermRef* c : {&m.a, &m.b, &m.c})
    if (*c && !none_of_kind(**c, k)) return false;
  return true;
}

}  // namespace

bool is_cast_free(const TargetTerm& m) { return none_of_kind(m, TermKind::Cast); }
bool is_matchfail_free(const TargetTerm& m) { return none_of_kind(m, TermKind::Matchfail); }

std::optional<Reduction> reduce(const TermRef& m) {
  switch (m->kind) {
    case TermKind::Cast: {
      const TermRef& w = m->a;
      if (!is_value(*w)) return std::nullopt;
      if (target_subsum(m->from, m->to)) return Reduction{w, ReduceRule::Upcast};
      if (w->kind != TermKind::Inj) return std::nullopt;
      if (m->to == target_subscript(w->index)) return Reduction{w, ReduceRule::CastSuccess};
      return Reduction{t_matchfail(), ReduceRule::CastFailure};
    }
    case TermKind::CaseOne: {
      const TermRef& w = m->a;
      if (w->kind != TermKind::Inj || !is_value(*w) || w->index != m->index) return std::nullopt;
      return Reduction{substitute(m->b, m->name, w->a), ReduceRule::CaseOne};
    }
    case TermKind::CaseTwo: {
      const TermRef& w = m->a;
      if (w->kind != TermKind::Inj || !is_value(*w)) return std::nullopt;
      if (w->index == Index::One)
        return Reduction{substitute(m->b, m->name, w->a), ReduceRule::CaseTwo};
      return Reduction{substitute(m->c, m->name2, w->a), ReduceRule::CaseTwo};
    }
    case TermKind::App: {
      if (m->a->kind != TermKind::Lam || !is_value(*m->b)) return std::nullopt;
      return Reduction{substitute(m->a->a, m->a->name, m->b), ReduceRule::Beta};
    }
    default:
      return std::nullopt;
  }
}

namespace {

// Rebuilds the frame `m` with its evaluation-position child replaced.
TermRef rebuild(const TargetTerm& m, int slot, TermRef child) {
  auto out = std::make_shared<TargetTerm>(m);
  (slot == 0 ? out->a : out->b) = std::move(child);
  return out;
}

Decomposition wrap(const TargetTerm& frame, int slot, Decomposition inner) {
  if (inner.kind == Decomposition::Kind::Matchfail) {
    inner.kind = Decomposition::Kind::MatchfailInContext;
    inner.context = t_hole();
    inner.focus = t_matchfail();
  }
  if (inner.context) inner.context = rebuild(frame, slot, inner.context);
  return inner;
}

}  // namespace

Decomposition decompose(const TermRef& m) {
  using K = Decomposition::Kind;
  switch (m->kind) {
    case TermKind::Unit:
    case TermKind::Var:
    case TermKind::Lam:
      return {K::Value, nullptr, nullptr};
    case TermKind::Matchfail:
      return {K::Matchfail, nullptr, nullptr};
    case TermKind::Hole:
      return {K::Stuck, nullptr, m};
    case TermKind::Inj: {
      auto inner = decompose(m->a);
      if (inner.kind == K::Value) return inner;
      return wrap(*m, 0, std::move(inner));
    }
    case TermKind::Cast:
    case TermKind::CaseOne:
    case TermKind::CaseTwo: {
      auto inner = decompose(m->a);
      if (inner.kind != K::Value) return wrap(*m, 0, std::move(inner));
      if (reduce(m)) return {K::Redex, t_hole(), m};
      return {K::Stuck, nullptr, m};
    }
    case TermKind::App: {
      auto fn = decompose(m->a);
      if (fn.kind != K::Value) return wrap(*m, 0, std::move(fn));
      auto arg = decompose(m->b);
      if (arg.kind != K::Value) return wrap(*m, 1, std::move(arg));
      if (reduce(m)) return {K::Redex, t_hole(), m};
      return {K::Stuck, nullptr, m};
    }
  }
  return {K::Stuck, nullptr, m};
}

TermRef plug(const TermRef& context, const TermRef& m) {
  if (context->kind == TermKind::Hole) return m;
  int slot = context->kind == TermKind::App && context->b && count_holes(*context->b) ? 1 : 0;
  const TermRef& child = slot == 0 ? context->a : context->b;
  return rebuild(*context, slot, plug(child, m));
}

namespace {

// Direct recursive stepping; agrees with decompose/plug but rebuilds only
// the spine above the redex.
struct Walk {
  enum class Kind { Value, Matchfail, Deep, Stepped, Stuck } kind;
  TermRef term;
  std::string_view rule;
};

Walk walk(const TermRef& m) {
  using K = Walk::Kind;
  auto into = [&](int slot, const TermRef& child) -> std::optional<Walk> {
    Walk w = walk(child);
    switch (w.kind) {
      case K::Value: return std::nullopt;
      case K::Matchfail:
      case K::Deep: return Walk{K::Deep, nullptr, {}};
      case K::Stepped: return Walk{K::Stepped, rebuild(*m, slot, w.term), w.rule};
      case K::Stuck: return w;
    }
    return w;
  };
  auto contract = [&]() {
    auto r = reduce(m);
    if (!r) return Walk{K::Stuck, nullptr, {}};
    return Walk{K::Stepped, r->result, to_string(r->rule)};
  };
  switch (m->kind) {
    case TermKind::Unit:
    case TermKind::Var:
    case TermKind::Lam:
      return {K::Value, nullptr, {}};
    case TermKind::Matchfail:
      return {K::Matchfail, nullptr, {}};
    case TermKind::Hole:
      return {K::Stuck, nullptr, {}};
    case TermKind::Inj:
      if (auto w = into(0, m->a)) return *w;
      return {K::Value, nullptr, {}};
    case TermKind::Cast:
    case TermKind::CaseOne:
    case TermKind::CaseTwo:
      if (auto w = into(0, m->a)) return *w;
      return contract();
    case TermKind::App:
      if (auto w = into(0, m->a)) return *w;
      if (auto w = into(1, m->b)) return *w;
      return contract();
  }
  return {K::Stuck, nullptr, {}};
}

}  // namespace

std::optional<Step> step(const TermRef& m) {
  Walk w = walk(m);
  switch (w.kind) {
    case Walk::Kind::Stepped:
      return Step{w.term, std::string(w.rule)};
    case Walk::Kind::Deep:
      return Step{t_matchfail(), "StepMatchfail"};
    default:
      return std::nullopt;
  }
}

Verdict evaluate(const TermRef& m, std::uint64_t budget, StepTrace* trace) {
  TermRef cur = m;
  if (trace) trace->emplace_back(cur, "start");
  for (std::uint64_t n = 0;; ++n) {
    if (cur->kind == TermKind::Matchfail) return {Verdict::Kind::Matchfail, cur, n};
    if (is_value(*cur)) return {Verdict::Kind::Value, cur, n};
    if (n >= budget) return {Verdict::Kind::BudgetExceeded, cur, n};
    auto s = step(cur);
    if (!s) return {Verdict::Kind::Stuck, cur, n};
    cur = s->result;
    if (trace) trace->emplace_back(cur, s->rule);
  }
}

// --- precision -------------------------------------------------------------------

namespace {

using NamePairs = std::vector<std::pair<std::string_view, std::string_view>>;

bool bound_same(const NamePairs& env, std::string_view x, std::string_view y) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    bool hx = it->first == x;
    bool hy = it->second == y;
    if (hx || hy) return hx && hy;
  }
  return x == y;
}

bool prec(const TargetTerm& a, const TargetTerm& b, NamePairs& env) {
  if (a.kind == TermKind::Matchfail) return true;
  auto under = [&](std::string_view x, std::string_view y, const TargetTerm& p,
                   const TargetTerm& q) {
    env.emplace_back(x, y);
    bool r = prec(p, q, env);
    env.pop_back();
    return r;
  };
  if (a.kind == TermKind::Cast) {
    if (b.kind == TermKind::Cast && cast_precision({a.from, a.to}, {b.from, b.to}) &&
        prec(*a.a, *b.a, env))
      return true;
    return prec(*a.a, b, env);
  }
  if (a.kind == TermKind::CaseOne && b.kind == TermKind::CaseTwo) {
    const TargetTerm& arm = a.index == Index::One ? *b.b : *b.c;
    const std::string& y = a.index == Index::One ? b.name : b.name2;
    return prec(*a.a, *b.a, env) && under(a.name, y, *a.b, arm);
  }
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case TermKind::Unit:
    case TermKind::Hole:
      return true;
    case TermKind::Var:
      return bound_same(env, a.name, b.name);
    case TermKind::Lam:
      return under(a.name, b.name, *a.a, *b.a);
    case TermKind::App:
      return prec(*a.a, *b.a, env) && prec(*a.b, *b.b, env);
    case TermKind::Inj:
      return a.index == b.index && prec(*a.a, *b.a, env);
    case TermKind::CaseOne:
      return a.index == b.index && prec(*a.a, *b.a, env) && under(a.name, b.name, *a.b, *b.b);
    case TermKind::CaseTwo:
      return prec(*a.a, *b.a, env) && under(a.name, b.name, *a.b, *b.b) &&
             under(a.name2, b.name2, *a.c, *b.c);
    default:
      return false;
  }
}

}  // namespace

bool term_precision(const TargetTerm& m1, const TargetTerm& m2) {
  NamePairs env;
  return prec(m1, m2, env);
}

}  // namespace gradsum
