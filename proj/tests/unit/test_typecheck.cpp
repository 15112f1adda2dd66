#include <gtest/gtest.h>

#include <functional>

#include "helpers.hpp"

using namespace gs_test;

namespace {

const BiDerivation* find_rule(const BiDerivation& d, BiRule r,
                              const std::function<bool(const BiDerivation&)>& pred = nullptr) {
  if (d.rule == r && (!pred || pred(d))) return &d;
  for (const auto& c : d.children)
    if (auto hit = find_rule(*c, r, pred)) return hit;
  return nullptr;
}

const TADerivation* find_rule(const TADerivation& d, TARule r,
                              const std::function<bool(const TADerivation&)>& pred = nullptr) {
  if (d.rule == r && (!pred || pred(d))) return &d;
  for (const auto& c : d.children)
    if (auto hit = find_rule(*c, r, pred)) return hit;
  return nullptr;
}

ErrorKind check_error(const std::string& ctx, const std::string& e, const std::string& t) {
  auto r = check(G(ctx), E(e), T(t));
  EXPECT_FALSE(r.ok()) << e;
  return r ? ErrorKind::FragmentViolation : r.error().kind;
}

TARef ta(TARule rule, Ctx g, ExprRef e, TypeRef t, std::vector<TARef> kids = {}) {
  return std::make_shared<TADerivation>(TADerivation{rule, std::move(g), std::move(e), std::move(t),
                                                     std::move(kids)});
}

}  // namespace

TEST(Check, MigrationExampleUsesConsistentSubsumption) {
  auto g = G("f : Unit +2 Unit -> Unit, x : Unit +? Unit");
  auto d = check(g, E("f x"), T("Unit"));
  ASSERT_TRUE(d.ok()) << d.error().describe();
  auto* sub = find_rule(*d.value(), BiRule::ChkCSub,
                        [](const BiDerivation& n) { return n.expr->kind == ExprKind::Var; });
  ASSERT_NE(sub, nullptr);
  EXPECT_EQ(*sub->sub_from, *T("Unit +? Unit"));
  EXPECT_EQ(*sub->type, *T("Unit +2 Unit"));
  EXPECT_FALSE(validate_bidirectional(*d.value()));
}

TEST(Check, Failures) {
  EXPECT_EQ(check_error("", "inj1 ()", "Unit +2 Unit"), ErrorKind::WrongInjection);
  EXPECT_EQ(check_error("x : Unit +?2 Unit", "case x of inj1 y => y", "Unit"),
            ErrorKind::DoomedOneArmedCase);
  EXPECT_EQ(check_error("x : Unit +1 Unit", "x", "Unit +2 Unit"), ErrorKind::NoDcons);
  EXPECT_EQ(check_error("", "fn x => x", "Unit"), ErrorKind::ShapeMismatch);
  EXPECT_EQ(check_error("", "y", "Unit"), ErrorKind::UnboundVariable);
  EXPECT_EQ(check_error("", "(fn x => x) ()", "Unit"), ErrorKind::NeedsAnnotation);
}

TEST(Check, InjectionIntoStarSum) {
  auto d = check(Ctx(), E("inj2 ()"), T("Unit +*2 Unit"));
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(d.value()->rule, BiRule::ChkSumIntro);
}

TEST(Check, ErrorsCarryPositions) {
  auto r = check(Ctx(), E("fn x =>\n  inj1 ()"), T("Unit -> Unit +2 Unit"));
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.error().pos.line, 2);
  EXPECT_EQ(r.error().pos.column, 3);
}

TEST(Synth, Examples) {
  auto d = synth(Ctx(), E("((fn x => x) : Unit -> Unit)"));
  ASSERT_TRUE(d.ok());
  EXPECT_EQ(*d.value()->type, *T("Unit -> Unit"));
  auto u = synth(Ctx(), E("()"));
  ASSERT_FALSE(u.ok());
  EXPECT_EQ(u.error().kind, ErrorKind::NeedsAnnotation);
  auto xx = synth(G("x : Unit"), E("x x"));
  ASSERT_FALSE(xx.ok());
  EXPECT_EQ(xx.error().kind, ErrorKind::NotAFunction);
}

TEST(Synth, ShadowingResolvesInnermost) {
  auto d = synth(G("x : Unit"), E("((fn x => x) : (Unit -> Unit) -> Unit -> Unit)"));
  ASSERT_TRUE(d.ok());
  auto a = check(G("x : Unit"), E("fn x => x"), T("(Unit -> Unit) -> Unit -> Unit"));
  EXPECT_TRUE(a.ok());
}

TEST(Static, Examples) {
  EXPECT_TRUE(static_check(Ctx(), E("inj1 ()"), T("Unit +1 Unit")).ok());
  auto r = static_check(G("x : Unit + Unit"), E("case x of inj1 y => y"), T("Unit"));
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.error().kind, ErrorKind::FragmentViolation);
  auto v = static_check(Ctx(), E("inj1 ()"), T("Unit +? Unit"));
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.error().kind, ErrorKind::FragmentViolation);
  auto s = static_check(G("x : Unit +1 Unit"), E("x"), T("Unit +2 Unit"));
  ASSERT_FALSE(s.ok());
  EXPECT_EQ(s.error().kind, ErrorKind::NotASubsum);
}

TEST(Dynamic, Examples) {
  EXPECT_TRUE(dyn_check(Ctx(), E("inj2 ()"), T("Unit +? Unit")).ok());
  EXPECT_TRUE(dyn_check(G("x : Unit +? Unit"), E("case x of inj1 y => y"), T("Unit")).ok());
  auto v = dyn_check(Ctx(), E("inj1 ()"), T("Unit +1 Unit"));
  ASSERT_FALSE(v.ok());
  EXPECT_EQ(v.error().kind, ErrorKind::FragmentViolation);
}

TEST(Fragments, Membership) {
  EXPECT_FALSE(is_static(*T("Unit +? Unit")));
  EXPECT_TRUE(is_static(*T("Unit +1 Unit -> Unit")));
  EXPECT_TRUE(is_dynamic(*T("Unit +? Unit")));
  EXPECT_FALSE(is_dynamic(*T("Unit +1 Unit")));
  EXPECT_TRUE(is_static(*E("fn x => (x : Unit + Unit)")));
  EXPECT_FALSE(is_static(*E("(x : Unit +*1 Unit)")));
  EXPECT_TRUE(is_dynamic(G("x : Unit +? (Unit -> Unit)")));
}

TEST(Validate, RejectsSumIntroAtSubscriptSum) {
  auto bad = ta(TARule::SSumIntro, Ctx(), E("inj1 ()"), T("Unit +1 Unit"),
                {ta(TARule::SUnitIntro, Ctx(), E("()"), T("Unit"))});
  EXPECT_TRUE(validate_assignment(*bad).has_value());
  auto good = ta(TARule::SSumIntro, Ctx(), E("inj1 ()"), T("Unit +?1 Unit"),
                 {ta(TARule::SUnitIntro, Ctx(), E("()"), T("Unit"))});
  EXPECT_FALSE(validate_assignment(*good).has_value());
}

TEST(Validate, RejectsConsistentSubsumptionWithoutDcons) {
  auto g = G("x : Unit +1 Unit");
  auto var = ta(TARule::SVar, g, E("x"), T("Unit +1 Unit"));
  // Frozen from the brute-force middle search (see the relations tests).
  ASSERT_FALSE(dcons(*T("Unit +1 Unit"), *T("Unit +2 Unit")));
  EXPECT_TRUE(validate_assignment(*ta(TARule::SCSub, g, E("x"), T("Unit +2 Unit"), {var})));
  EXPECT_FALSE(validate_assignment(*ta(TARule::SCSub, g, E("x"), T("Unit + Unit"), {var})));
}

TEST(Embed, MigrationExample) {
  auto g = G("f : Unit +2 Unit -> Unit, x : Unit +? Unit");
  auto d = check(g, E("f x"), T("Unit"));
  ASSERT_TRUE(d.ok());
  auto t = embed(d.value());
  EXPECT_FALSE(validate_assignment(*t));
  EXPECT_EQ(*t->type, *T("Unit"));
  EXPECT_TRUE(alpha_equal(*t->expr, *E("f x")));
}

TEST(Embed, AnnotatedLambda) {
  auto d = synth(Ctx(), E("((fn x => x) : Unit -> Unit)"));
  ASSERT_TRUE(d.ok());
  auto t = embed(d.value());
  ASSERT_EQ(t->rule, TARule::SAnno);
  ASSERT_EQ(t->children.size(), 1u);
  EXPECT_EQ(t->children[0]->rule, TARule::SFunIntro);
}

TEST(Embed, InjectionRaisedBySubsumption) {
  auto d = check(Ctx(), E("inj2 ()"), T("Unit +*2 Unit"));
  ASSERT_TRUE(d.ok());
  auto t = embed(d.value());
  EXPECT_FALSE(validate_assignment(*t));
  auto* sub = find_rule(*t, TARule::SCSub);
  ASSERT_NE(sub, nullptr);
  EXPECT_EQ(*sub->children[0]->type, *T("Unit +?2 Unit"));
  EXPECT_EQ(*sub->type, *T("Unit +*2 Unit"));
}

TEST(Annotate, Examples) {
  auto unit = annotate(ta(TARule::SUnitIntro, Ctx(), E("()"), T("Unit")));
  EXPECT_TRUE(alpha_equal(*unit.expr, *E("(() : Unit)")));
  EXPECT_EQ(*unit.derivation->type, *T("Unit"));

  auto inj = annotate(ta(TARule::SSumIntro, Ctx(), E("inj1 ()"), T("Unit +?1 Unit"),
                         {ta(TARule::SUnitIntro, Ctx(), E("()"), T("Unit"))}));
  EXPECT_EQ(*inj.derivation->type, *T("Unit +?1 Unit"));
  ASSERT_EQ(inj.expr->kind, ExprKind::Anno);
  EXPECT_EQ(*inj.expr->type, *T("Unit +?1 Unit"));
  EXPECT_EQ(inj.expr->a->kind, ExprKind::Inj);
  EXPECT_TRUE(eq_anno(*E("inj1 ()"), *inj.expr));
}

TEST(Annotate, RejectsInvalidDerivations) {
  auto bad = ta(TARule::SSumIntro, Ctx(), E("inj1 ()"), T("Unit +1 Unit"),
                {ta(TARule::SUnitIntro, Ctx(), E("()"), T("Unit"))});
  EXPECT_THROW(annotate(bad), std::logic_error);
}

TEST(EqAnno, Examples) {
  EXPECT_TRUE(eq_anno(*E("x"), *E("(x : Unit)")));
  EXPECT_FALSE(eq_anno(*E("(x : Unit)"), *E("x")));
  EXPECT_TRUE(eq_anno(*E("inj1 ()"), *E("inj1 (() : Unit)")));
  EXPECT_TRUE(eq_anno(*E("(x : Unit)"), *E("((x : Unit) : Unit)")));
  EXPECT_FALSE(eq_anno(*E("(x : Unit)"), *E("(x : Unit -> Unit)")));
}

TEST(Derivation, SizeBoundOnCorpusSample) {
  GenConfig cfg;
  for (std::uint64_t i = 0; i < 500; ++i) {
    auto j = gen_welltyped(cfg, i);
    ASSERT_TRUE(j);
    auto d = j->dir == Direction::Check ? check(j->ctx, j->expr, j->type) : synth(j->ctx, j->expr);
    ASSERT_TRUE(d.ok()) << describe(*j);
    EXPECT_LE(derivation_size(*d.value()), 2 * expr_size(*j->expr)) << describe(*j);
  }
}

TEST(Synthesis, UniqueAcrossRuns) {
  GenConfig cfg;
  cfg.seed = 11;
  for (std::uint64_t i = 0; i < 300; ++i) {
    auto j = gen_welltyped(cfg, i);
    ASSERT_TRUE(j);
    auto a = synth(j->ctx, j->expr);
    auto b = synth(j->ctx, j->expr);
    ASSERT_EQ(a.ok(), b.ok());
    if (a) EXPECT_EQ(*a.value()->type, *b.value()->type);
  }
}
