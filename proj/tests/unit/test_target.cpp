#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace gs_test;

namespace {

std::string type_of(const std::string& m, const std::string& ctx = "") {
  TargetCtx th;
  if (!ctx.empty()) {
    for (const auto& [x, a] : G(ctx).bindings()) th = th.extend(x, ty_trans(*a));
  }
  auto r = target_typecheck(th, M(m));
  if (!r.ok()) return "error: " + r.error().reason;
  return P(default_free_components(r.value()));
}

Verdict run(const std::string& m, std::uint64_t budget = 1000) { return evaluate(M(m), budget); }

}  // namespace

TEST(TargetTyping, Examples) {
  EXPECT_TRUE(target_typecheck({}, M("matchfail")).value()->is_bottom());
  EXPECT_EQ(type_of("inj1 ()"), "Unit +1 Unit");
  EXPECT_EQ(type_of("<+ => +2>(inj1 ())"), "Unit +2 Unit");
  EXPECT_EQ(type_of("<+1 => +>(inj1 ())"), "Unit + Unit");
  EXPECT_EQ(type_of("fn (x : Unit + Unit) => case x of inj1 y => y | inj2 z => z"),
            "Unit + Unit -> Unit");
  EXPECT_EQ(type_of("(fn (x : Unit + Unit) => x) (inj2 ())"), "Unit + Unit");
  EXPECT_EQ(type_of("case x of inj2 y => y", "x : Unit +2 Unit"), "Unit");
}

TEST(TargetTyping, Rejections) {
  EXPECT_FALSE(target_typecheck({}, M("x")).ok());
  EXPECT_FALSE(target_typecheck({}, M("() ()")).ok());
  // The argument is a +2 value; the function wants +1.
  EXPECT_FALSE(target_typecheck({}, M("(fn (x : Unit +1 Unit) => x) (inj2 ())")).ok());
  // A one-armed case needs a scrutinee known to be on that side.
  EXPECT_FALSE(target_typecheck({}, M("case <+1 => +>(inj1 ()) of inj1 y => y")).ok());
  EXPECT_FALSE(target_typecheck({}, M("[]")).ok());
}

TEST(TargetTyping, JoinAndMeet) {
  auto a = TT("Unit +1 Unit"), b = TT("Unit +2 Unit"), top = TT("Unit + Unit");
  EXPECT_EQ(*target_join(a, b).value(), *top);
  EXPECT_FALSE(target_join(a, TT("Unit")).has_value());
  EXPECT_EQ(*target_join(a, top).value(), *top);
  EXPECT_EQ(*target_meet(a, top), *a);
  EXPECT_TRUE(target_meet(a, b)->is_bottom() || contains_bottom(*target_meet(a, b)));
  EXPECT_EQ(*target_join(t_bottom(), a).value(), *a);
}

TEST(Reduce, Rules) {
  auto r = reduce(M("<+1 => +>(inj1 ())"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->rule, ReduceRule::Upcast);
  EXPECT_EQ(P(r->result), "inj1 ()");

  r = reduce(M("<+ => +2>(inj2 ())"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->rule, ReduceRule::CastSuccess);
  EXPECT_EQ(P(r->result), "inj2 ()");

  r = reduce(M("<+ => +2>(inj1 ())"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->rule, ReduceRule::CastFailure);
  EXPECT_EQ(P(r->result), "matchfail");

  r = reduce(M("case inj2 () of inj2 y => y"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->rule, ReduceRule::CaseOne);
  EXPECT_EQ(P(r->result), "()");

  r = reduce(M("case inj1 () of inj1 a => inj2 a | inj2 b => b"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->rule, ReduceRule::CaseTwo);
  EXPECT_EQ(P(r->result), "inj2 ()");

  r = reduce(M("(fn (x : Unit) => inj1 x) ()"));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->rule, ReduceRule::Beta);
  EXPECT_EQ(P(r->result), "inj1 ()");

  EXPECT_FALSE(reduce(M("inj1 ()")));
  EXPECT_FALSE(reduce(M("(fn (x : Unit) => x) (case inj1 () of inj1 y => y)")));
}

TEST(Reduce, NamesAreDistinct) {
  std::set<std::string_view> names;
  for (ReduceRule r : {ReduceRule::Upcast, ReduceRule::CastSuccess, ReduceRule::CastFailure,
                       ReduceRule::CaseOne, ReduceRule::CaseTwo, ReduceRule::Beta})
    names.insert(to_string(r));
  EXPECT_EQ(names.size(), 6u);
}

TEST(Decompose, Shapes) {
  EXPECT_EQ(decompose(M("inj1 ()")).kind, Decomposition::Kind::Value);
  EXPECT_EQ(decompose(M("matchfail")).kind, Decomposition::Kind::Matchfail);
  auto d = decompose(M("inj1 ((fn (x : Unit) => x) ())"));
  ASSERT_EQ(d.kind, Decomposition::Kind::Redex);
  EXPECT_EQ(P(d.context), "inj1 []");
  EXPECT_EQ(P(plug(d.context, t_unit())), "inj1 ()");
  d = decompose(M("case matchfail of inj1 y => y"));
  EXPECT_EQ(d.kind, Decomposition::Kind::MatchfailInContext);
  // Free variables are values so open terms can run.
  EXPECT_EQ(decompose(M("x")).kind, Decomposition::Kind::Value);
  EXPECT_EQ(decompose(M("() ()")).kind, Decomposition::Kind::Stuck);
}

TEST(Decompose, LeftToRight) {
  // The function position is evaluated before the argument.
  auto d = decompose(M("(case inj1 (fn (x : Unit) => x) of inj1 f => f) (case inj2 () of inj2 y => y)"));
  ASSERT_EQ(d.kind, Decomposition::Kind::Redex);
  EXPECT_EQ(d.focus->kind, TermKind::CaseOne);
  EXPECT_EQ(d.focus->index, Index::One);
}

TEST(Step, MatchfailPropagates) {
  auto s = step(M("inj1 (case matchfail of inj1 y => y)"));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->rule, "StepMatchfail");
  EXPECT_EQ(P(s->result), "matchfail");
  EXPECT_FALSE(step(M("matchfail")));
  EXPECT_FALSE(step(M("()")));
}

TEST(Evaluate, Examples) {
  auto v = run("(fn (x : Unit + Unit) => case x of inj1 a => a | inj2 b => b) (<+2 => +>(inj2 ()))");
  EXPECT_EQ(v.kind, Verdict::Kind::Value);
  EXPECT_EQ(P(v.term), "()");
  EXPECT_EQ(v.steps, 3u);

  v = run("case <+ => +2>(<+1 => +>(inj1 ())) of inj2 y => y");
  EXPECT_EQ(v.kind, Verdict::Kind::Matchfail);
  EXPECT_EQ(v.steps, 3u);

  v = run("() ()");
  EXPECT_EQ(v.kind, Verdict::Kind::Stuck);

  // Self-application loops; the budget stops it.
  v = run("(fn (f : Unit -> Unit) => f ()) (fn (x : Unit) => (fn (y : Unit) => y) x)", 2);
  EXPECT_EQ(v.kind, Verdict::Kind::BudgetExceeded);
  EXPECT_EQ(v.steps, 2u);
}

TEST(Evaluate, TraceRecordsEachStep) {
  StepTrace trace;
  auto v = evaluate(M("<+1 => +>(case inj1 (inj1 ()) of inj1 y => y)"), 100, &trace);
  EXPECT_EQ(v.kind, Verdict::Kind::Value);
  ASSERT_EQ(trace.size(), 3u);
  EXPECT_EQ(trace[0].second, "start");
  EXPECT_EQ(trace[1].second, "ReduceCaseOne");
  EXPECT_EQ(trace[2].second, "ReduceUpcast");
  EXPECT_EQ(P(trace.back().first), "inj1 ()");
}

TEST(Evaluate, PreservationOnElaboratedPrograms) {
  GenConfig cfg;
  cfg.seed = 11;
  cfg.max_ctx_vars = 0;
  int values = 0;
  for (std::uint64_t i = 0; i < 300; ++i) {
    auto j = gen_welltyped(cfg, i);
    ASSERT_TRUE(j);
    if (!j->ctx.empty()) continue;
    auto d = j->dir == Direction::Check ? check(j->ctx, j->expr, j->type) : synth(j->ctx, j->expr);
    ASSERT_TRUE(d.ok());
    TermRef m = elaborate(*d.value(), ElabMode::Standard);
    auto t0 = target_typecheck({}, m);
    ASSERT_TRUE(t0.ok());
    for (int k = 0; k < 200; ++k) {
      auto s = step(m);
      if (!s) break;
      auto t = target_typecheck({}, s->result);
      ASSERT_TRUE(t.ok()) << P(m) << " -> " << P(s->result);
      EXPECT_TRUE(target_subtype(*t.value(), *t0.value())) << P(s->result);
      m = s->result;
    }
    if (is_value(*m)) ++values;
    else EXPECT_TRUE(m->kind == TermKind::Matchfail || step(m)) << P(m);
  }
  EXPECT_GT(values, 0);
}

TEST(Predicates, Examples) {
  EXPECT_TRUE(is_value(*M("fn (x : Unit) => matchfail")));
  EXPECT_TRUE(is_value(*M("inj2 (inj1 ())")));
  EXPECT_FALSE(is_value(*M("<+1 => +>(inj1 ())")));
  EXPECT_FALSE(is_value(*M("matchfail")));
  EXPECT_TRUE(is_cast_free(*M("case x of inj1 y => y")));
  EXPECT_FALSE(is_cast_free(*M("inj1 <+ => +1>(x)")));
  EXPECT_FALSE(is_matchfail_free(*M("fn (x : Unit) => matchfail")));
}

TEST(TermPrecision, Examples) {
  EXPECT_TRUE(term_precision(*M("matchfail"), *M("inj1 ()")));
  EXPECT_FALSE(term_precision(*M("inj1 ()"), *M("matchfail")));
  EXPECT_TRUE(term_precision(*M("<+1 => +1>(inj1 ())"), *M("<+1 => +>(inj1 ())")));
  EXPECT_TRUE(term_precision(*M("<+ => +2>(x)"), *M("x")));
  EXPECT_TRUE(term_precision(*M("case x of inj1 y => y"), *M("case x of inj1 y => y | inj2 z => z")));
  EXPECT_FALSE(term_precision(*M("case x of inj1 y => y | inj2 z => z"), *M("case x of inj1 y => y")));
  EXPECT_TRUE(term_precision(*M("fn (x : Unit) => x"), *M("fn (y : Unit) => y")));
  EXPECT_FALSE(term_precision(*M("inj1 ()"), *M("inj2 ()")));
}

TEST(TermPrecision, Reflexive) {
  GenConfig cfg;
  cfg.seed = 3;
  for (std::uint64_t i = 0; i < 300; ++i) {
    auto j = gen_welltyped(cfg, i);
    ASSERT_TRUE(j);
    auto d = j->dir == Direction::Check ? check(j->ctx, j->expr, j->type) : synth(j->ctx, j->expr);
    ASSERT_TRUE(d.ok());
    auto m = elaborate(*d.value(), ElabMode::Saturating);
    EXPECT_TRUE(term_precision(*m, *m)) << P(m);
  }
}
