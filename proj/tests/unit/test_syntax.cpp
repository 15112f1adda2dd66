#include <gtest/gtest.h>

#include <random>
#include <set>

#include "helpers.hpp"

using namespace gs_test;

TEST(Parse, InjectionOfUnit) {
  auto e = E("inj1 ()");
  ASSERT_EQ(e->kind, ExprKind::Inj);
  EXPECT_EQ(e->index, Index::One);
  EXPECT_EQ(e->a->kind, ExprKind::Unit);
}

TEST(Parse, Lambda) {
  auto e = E("fn x => x");
  ASSERT_EQ(e->kind, ExprKind::Lam);
  EXPECT_EQ(e->name, "x");
  ASSERT_EQ(e->a->kind, ExprKind::Var);
  EXPECT_EQ(e->a->name, "x");
}

TEST(Parse, OneArmedCase) {
  auto e = E("case x of inj2 y => y");
  ASSERT_EQ(e->kind, ExprKind::CaseOne);
  EXPECT_EQ(e->a->name, "x");
  EXPECT_EQ(e->index, Index::Two);
  EXPECT_EQ(e->name, "y");
  EXPECT_EQ(e->b->name, "y");
}

TEST(Parse, TwoArmedCase) {
  auto e = E("case x of inj1 a => a | inj2 b => b");
  ASSERT_EQ(e->kind, ExprKind::CaseTwo);
  EXPECT_EQ(e->name, "a");
  EXPECT_EQ(e->name2, "b");
}

TEST(Parse, ApplicationIsLeftAssociative) {
  auto e = E("f x y");
  ASSERT_EQ(e->kind, ExprKind::App);
  EXPECT_EQ(e->a->kind, ExprKind::App);
  EXPECT_EQ(e->b->name, "y");
}

TEST(Parse, SumBindsTighterThanArrow) {
  auto t = T("Unit +? Unit -> Unit");
  ASSERT_TRUE(t->is_arrow());
  ASSERT_TRUE(t->left->is_sum());
  EXPECT_EQ(t->left->con, SumCon::PlusQ);
  EXPECT_TRUE(t->right->is_unit());
}

TEST(Parse, StarSum) {
  auto t = T("Unit +*1 Unit");
  ASSERT_TRUE(t->is_sum());
  EXPECT_EQ(t->con, SumCon::PlusStar1);
}

TEST(Parse, ArrowIsRightAssociative) {
  auto t = T("Unit -> Unit -> Unit");
  ASSERT_TRUE(t->is_arrow());
  EXPECT_TRUE(t->left->is_unit());
  EXPECT_TRUE(t->right->is_arrow());
}

TEST(Parse, AllEightSumTokens) {
  std::set<SumCon> seen;
  for (const char* tok : {"+", "+1", "+2", "+?", "+?1", "+?2", "+*1", "+*2"})
    seen.insert(T(std::string("Unit ") + tok + " Unit")->con);
  EXPECT_EQ(seen.size(), 8u);
  EXPECT_THROW(T("Unit +* Unit"), ParseError);
}

TEST(Parse, CommentsAndPrimes) {
  auto e = E("-- a comment\nfn x' => x' -- trailing\n");
  EXPECT_EQ(e->name, "x'");
}

TEST(Parse, ErrorsArePositioned) {
  try {
    E("fn x =>\n  (x");
    FAIL() << "expected a parse error";
  } catch (const ParseError& err) {
    EXPECT_EQ(err.pos().line, 2);
    EXPECT_FALSE(err.expected().empty());
    EXPECT_EQ(err.found(), "end of input");
  }
  EXPECT_THROW(E("case x of inj2 y => y | inj1 z => z"), ParseError);
  EXPECT_THROW(E("fn case => case"), ParseError);
}

TEST(Parse, ContextShadowingInnermostWins) {
  auto g = G("x : Unit, x : Unit -> Unit");
  ASSERT_NE(g.lookup("x"), nullptr);
  EXPECT_TRUE((*g.lookup("x"))->is_arrow());
  EXPECT_EQ(g.bindings().size(), 1u);
}

TEST(Print, Examples) {
  EXPECT_EQ(P(sum_type(unit_type(), SumCon::PlusQ2, unit_type())), "Unit +?2 Unit");
  EXPECT_EQ(P(t_cast(TargetSum::Plus, TargetSum::Plus2, t_inj(Index::One, t_unit()))),
            "<+ => +2>(inj1 ())");
  auto e = E("(inj2 () : Unit +? Unit)");
  EXPECT_TRUE(alpha_equal(*E(print_expr(*e)), *e));
}

TEST(Print, NestedTypesReparse) {
  for (const char* s : {"(Unit -> Unit) -> Unit", "Unit + (Unit + Unit)", "(Unit + Unit) + Unit",
                        "Unit -> Unit +1 Unit", "(Unit -> Unit) +?2 (Unit -> Unit)"}) {
    auto t = T(s);
    EXPECT_EQ(*T(P(t)), *t) << s;
  }
}

TEST(Print, TargetForms) {
  for (const char* s :
       {"fn (x : Unit + Unit) => case x of inj1 y => y | inj2 z => z",
        "<+1 => +>(inj1 ())", "matchfail", "(fn (x : Unit) => x) ()",
        "inj1 (case x of inj1 y => y)", "case (case x of inj1 y => y) of inj1 z => z"}) {
    auto m = M(s);
    EXPECT_TRUE(alpha_equal(*M(P(m)), *m)) << s << " printed as " << P(m);
  }
}

TEST(RoundTrip, EnumeratedExpressions) {
  EnumConfig cfg;
  cfg.annotation_types = enum_types(1);
  cfg.free_vars = {"f", "g"};
  std::size_t n = 0;
  for (int size = 1; size <= 5; ++size)
    enum_exprs(cfg, size, [&](const ExprRef& e) {
      std::string s = print_expr(*e);
      auto back = parse_expr(s);
      EXPECT_TRUE(alpha_equal(*back, *e)) << s;
      ++n;
      return true;
    });
  EXPECT_GT(n, 10000u);
}

TEST(RoundTrip, TypesOfDepthTwo) {
  for (const auto& t : enum_types(2)) ASSERT_EQ(*T(P(t)), *t) << P(t);
}

TEST(ParserTotality, RandomBytesNeverCrash) {
  std::mt19937_64 rng(7);
  const std::string alphabet = "fn=>()case of inj12|+?*:Unit-><>[]matchfail xyz_' \n\t";
  std::size_t parsed = 0, rejected = 0;
  for (int i = 0; i < 20000; ++i) {
    std::string s;
    int len = static_cast<int>(rng() % 40);
    for (int k = 0; k < len; ++k) {
      if (rng() % 8 == 0) s += static_cast<char>(rng() % 256);
      else s += alphabet[rng() % alphabet.size()];
    }
    for (int which = 0; which < 3; ++which) {
      try {
        if (which == 0) parse_expr(s);
        else if (which == 1) parse_type(s);
        else parse_target(s);
        ++parsed;
      } catch (const ParseError& e) {
        EXPECT_GE(e.pos().line, 1);
        ++rejected;
      }
    }
  }
  EXPECT_GT(rejected, 0u);
}

TEST(ParserTotality, DeepNestingIsAnErrorNotACrash) {
  std::string s(100000, '(');
  EXPECT_THROW(parse_expr(s), ParseError);
  std::string t;
  for (int i = 0; i < 100000; ++i) t += "inj1 ";
  EXPECT_THROW(parse_expr(t + "()"), ParseError);
}

TEST(Alpha, BoundNamesDoNotMatter) {
  EXPECT_TRUE(alpha_equal(*E("fn x => x"), *E("fn y => y")));
  EXPECT_FALSE(alpha_equal(*E("fn x => y"), *E("fn y => y")));
  EXPECT_TRUE(alpha_equal(*E("case z of inj1 a => a | inj2 b => b"),
                          *E("case z of inj1 c => c | inj2 c => c")));
  EXPECT_TRUE(alpha_equal(*M("fn (x : Unit) => x"), *M("fn (y : Unit) => y")));
}

TEST(Substitution, AvoidsCapture) {
  // (fn y => x)[x := y] must not capture y.
  auto body = M("fn (y : Unit) => x");
  auto out = substitute(body, "x", t_var("y"));
  ASSERT_EQ(out->kind, TermKind::Lam);
  EXPECT_NE(out->name, "y");
  EXPECT_EQ(out->a->name, "y");
  EXPECT_TRUE(alpha_equal(*out, *M("fn (z : Unit) => y")));
}

TEST(Substitution, StopsAtShadowingBinder) {
  auto body = M("case x of inj1 x => x | inj2 y => x");
  auto out = substitute(body, "x", t_unit());
  EXPECT_TRUE(alpha_equal(*out, *M("case () of inj1 x => x | inj2 y => ()")));
}

TEST(Names, FreshNameAvoids) {
  auto n = fresh_name("x", {"x", "x'1"});
  EXPECT_NE(n, "x");
  EXPECT_NE(n, "x'1");
  EXPECT_EQ(free_vars(*E("fn x => x y")), std::vector<std::string>{"y"});
}

TEST(Enumerations, ClosedSets) {
  EXPECT_EQ(kAllSumCons.size(), 8u);
  EXPECT_EQ(kAllTargetSums.size(), 3u);
  EXPECT_EQ(subsum_table().size() * subsum_table()[0].size(), 64u);
}
