#include "gradsum/elaborate.hpp"

#include <algorithm>
#include <stdexcept>

#include "gradsum/printer.hpp"
#include "gradsum/relations.hpp"

namespace gradsum {

namespace {

bool has_hole(const TermRef& m) { return m && count_holes(*m) > 0; }

bool mentions(const std::vector<std::string>& names, const std::string& x) {
  return std::find(names.begin(), names.end(), x) != names.end();
}

struct Filler {
  const TermRef& m;
  std::vector<std::string> fv;

  // Renames binder y in body if it would capture a free variable of m.
  std::pair<std::string, TermRef> guard(const std::string& y, const TermRef& body) {
    if (!mentions(fv, y)) return {y, run(body)};
    std::vector<std::string> avoid = fv;
    auto body_fv = free_vars(*body);
    avoid.insert(avoid.end(), body_fv.begin(), body_fv.end());
    std::string z = fresh_name(y, avoid);
    return {z, run(substitute(body, y, t_var(z)))};
  }

  TermRef run(const TermRef& c) {
    if (!has_hole(c)) return c;
    switch (c->kind) {
      case TermKind::Hole:
        return m;
      case TermKind::Lam: {
        auto [y, body] = guard(c->name, c->a);
        return t_lam(y, c->dom, body);
      }
      case TermKind::App:
        return t_app(run(c->a), run(c->b));
      case TermKind::Inj:
        return t_inj(c->index, run(c->a));
      case TermKind::Cast:
        return t_cast(c->from, c->to, run(c->a));
      case TermKind::CaseTwo: {
        if (has_hole(c->a)) return t_case_two(run(c->a), c->name, c->b, c->name2, c->c);
        if (has_hole(c->b)) {
          auto [y, arm] = guard(c->name, c->b);
          return t_case_two(c->a, y, arm, c->name2, c->c);
        }
        auto [y, arm] = guard(c->name2, c->c);
        return t_case_two(c->a, c->name, c->b, y, arm);
      }
      case TermKind::CaseOne: {
        if (has_hole(c->a)) return t_case_one(run(c->a), c->index, c->name, c->b);
        auto [y, arm] = guard(c->name, c->b);
        return t_case_one(c->a, c->index, y, arm);
      }
      case TermKind::Unit:
      case TermKind::Var:
      case TermKind::Matchfail:
        return c;
    }
    return c;
  }
};

}  // namespace

TermRef fill_hole(const TermRef& ctx, const TermRef& m) {
  Filler f{m, free_vars(*m)};
  return f.run(ctx);
}

Coercion::Coercion() : ctx_(t_hole()) {}

Coercion::Coercion(TermRef ctx) : ctx_(std::move(ctx)) {
  if (!ctx_ || count_holes(*ctx_) != 1)
    throw std::invalid_argument("coercion must contain exactly one hole");
}

bool Coercion::is_hole() const { return ctx_->kind == TermKind::Hole; }

TermRef Coercion::fill(const TermRef& m) const { return fill_hole(ctx_, m); }

Coercion Coercion::compose(const Coercion& inner) const {
  if (is_hole()) return inner;
  if (inner.is_hole()) return *this;
  return Coercion(fill_hole(ctx_, inner.ctx_));
}

TargetSum sum_trans(SumCon d) {
  switch (d) {
    case SumCon::Plus:
    case SumCon::PlusQ:
      return TargetSum::Plus;
    case SumCon::Plus1:
    case SumCon::PlusQ1:
    case SumCon::PlusStar1:
      return TargetSum::Plus1;
    case SumCon::Plus2:
    case SumCon::PlusQ2:
    case SumCon::PlusStar2:
      return TargetSum::Plus2;
  }
  return TargetSum::Plus;
}

TargetTypeRef ty_trans(const Type& a) {
  switch (a.kind) {
    case TypeKind::Unit:
      return t_unit_type();
    case TypeKind::Arrow:
      return t_arrow_type(ty_trans(*a.left), ty_trans(*a.right));
    case TypeKind::Sum:
      return t_sum_type(ty_trans(*a.left), sum_trans(a.con), ty_trans(*a.right));
  }
  return t_unit_type();
}

TargetCtx ctx_trans(const Ctx& g) {
  TargetCtx out;
  for (const auto& [x, a] : g.bindings()) out = out.extend(x, ty_trans(*a));
  return out;
}

Coercion coerce_sum(SumCon from, SumCon to, ElabMode mode) {
  TargetSum p1 = sum_trans(from);
  TargetSum p2 = sum_trans(to);
  if (mode == ElabMode::Standard && target_subsum(p1, p2)) return Coercion();
  return Coercion(t_cast(p1, p2, t_hole()));
}

Coercion coerce(const Type& from, const Type& to, ElabMode mode) {
  if (!dcons(from, to))
    throw std::invalid_argument("coerce: no directed consistency from " + print_type(from) +
                                " to " + print_type(to));
  switch (from.kind) {
    case TypeKind::Unit:
      return Coercion();
    case TypeKind::Arrow: {
      // fn (x : |A1|) => C2[[] C1[x]]
      Coercion c1 = coerce(*to.left, *from.left, mode);
      Coercion c2 = coerce(*from.right, *to.right, mode);
      TermRef body = c2.fill(t_app(t_hole(), c1.fill(t_var("x"))));
      return Coercion(t_lam("x", ty_trans(*to.left), body));
    }
    case TypeKind::Sum:
      break;
  }
  SumCon d1 = from.con;
  SumCon d2 = to.con;
  Coercion outer = coerce_sum(d1, d2, mode);
  auto arm_for = [&](Index i) {
    const std::string x = i == Index::One ? "x1" : "x2";
    Coercion ci = coerce(*from.component(i), *to.component(i), mode);
    return std::pair{x, t_inj(i, ci.fill(t_var(x)))};
  };
  for (Index i : kIndices) {
    if (d1 == innate_sum(i) || d1 == subscript_sum(i)) {
      auto [x, arm] = arm_for(i);
      if (mode == ElabMode::Saturating) arm = coerce_sum(innate_sum(i), d1, mode).fill(arm);
      return outer.compose(Coercion(t_case_one(t_hole(), i, x, arm)));
    }
  }
  auto [x1, arm1] = arm_for(Index::One);
  auto [x2, arm2] = arm_for(Index::Two);
  arm1 = coerce_sum(SumCon::PlusQ1, d1, mode).fill(arm1);
  arm2 = coerce_sum(SumCon::PlusQ2, d1, mode).fill(arm2);
  return outer.compose(Coercion(t_case_two(t_hole(), x1, arm1, x2, arm2)));
}

TermRef elaborate(const BiDerivation& d, ElabMode mode) {
  if (d.system != System::Full)
    throw std::invalid_argument("elaborate: only full-system derivations translate");
  const Expr& e = *d.expr;
  const auto& k = d.children;
  switch (d.rule) {
    case BiRule::SynVar:
      return t_var(e.name);
    case BiRule::SynAnno:
      return elaborate(*k[0], mode);
    case BiRule::ChkCSub:
      return coerce(*d.sub_from, *d.type, mode).fill(elaborate(*k[0], mode));
    case BiRule::ChkUnitIntro:
      return t_unit();
    case BiRule::ChkFunIntro:
      return t_lam(e.name, ty_trans(*d.type->left), elaborate(*k[0], mode));
    case BiRule::SynFunElim:
      return t_app(elaborate(*k[0], mode), elaborate(*k[1], mode));
    case BiRule::ChkSumIntro:
      return coerce_sum(innate_sum(e.index), d.type->con, mode)
          .fill(t_inj(e.index, elaborate(*k[0], mode)));
    case BiRule::ChkSumElimOne: {
      SumCon s = k[0]->type->con;
      TermRef scrut = coerce_sum(s, star_sum(e.index), mode).fill(elaborate(*k[0], mode));
      return t_case_one(scrut, e.index, e.name, elaborate(*k[1], mode));
    }
    case BiRule::ChkSumElimTwo: {
      SumCon s = k[0]->type->con;
      TermRef scrut = coerce_sum(s, SumCon::Plus, mode).fill(elaborate(*k[0], mode));
      return t_case_two(scrut, e.name, elaborate(*k[1], mode), e.name2, elaborate(*k[2], mode));
    }
  }
  throw std::logic_error("elaborate: unknown rule");
}

Outcome<TermRef> elab_check(const Ctx& g, const ExprRef& e, const TypeRef& a, ElabMode mode) {
  auto d = check(g, e, a);
  if (!d) return d.error();
  return elaborate(*d.value(), mode);
}

Outcome<Elaborated> elab_synth(const Ctx& g, const ExprRef& e, ElabMode mode) {
  auto d = synth(g, e);
  if (!d) return d.error();
  return Elaborated{d.value()->type, elaborate(*d.value(), mode)};
}

}  // namespace gradsum
