#pragma once

// Translation from the source language into the cast calculus.

#include "gradsum/outcome.hpp"
#include "gradsum/syntax.hpp"
#include "gradsum/typecheck.hpp"

namespace gradsum {

enum class ElabMode { Standard, Saturating };

/// A target term with exactly one hole.
class Coercion {
 public:
  /// The identity context [].
  Coercion();
  /// Throws std::invalid_argument unless `ctx` has exactly one hole.
  explicit Coercion(TermRef ctx);

  const TermRef& term() const { return ctx_; }
  bool is_hole() const;

  /// C[M]. Binders on the path to the hole that would capture a free
  /// variable of M are renamed first.
  TermRef fill(const TermRef& m) const;
  /// C[D[]] as a coercion.
  Coercion compose(const Coercion& inner) const;

 private:
  TermRef ctx_;
};

/// Capture-avoiding hole filling on any term with one hole.
TermRef fill_hole(const TermRef& ctx, const TermRef& m);

TargetTypeRef ty_trans(const Type& a);
TargetSum sum_trans(SumCon d);
TargetCtx ctx_trans(const Ctx& g);

Coercion coerce_sum(SumCon from, SumCon to, ElabMode mode);
/// Coercion from |from| to |to|; requires dcons(from, to), otherwise throws
/// std::invalid_argument.
Coercion coerce(const Type& from, const Type& to, ElabMode mode);

/// Translates a full-system derivation.
TermRef elaborate(const BiDerivation& d, ElabMode mode);

Outcome<TermRef> elab_check(const Ctx& g, const ExprRef& e, const TypeRef& a, ElabMode mode);

struct Elaborated {
  TypeRef type;
  TermRef term;
};
Outcome<Elaborated> elab_synth(const Ctx& g, const ExprRef& e, ElabMode mode);

}  // namespace gradsum
