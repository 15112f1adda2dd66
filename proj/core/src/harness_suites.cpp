#include <chrono>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gradsum/elaborate.hpp"
#include "gradsum/harness.hpp"
#include "gradsum/printer.hpp"
#include "gradsum/relations.hpp"

namespace gradsum {

namespace {

constexpr std::size_t kKeptFailuresPerProperty = 10;

// Outcomes of the properties evaluated on one case.
struct Results {
  std::vector<std::pair<std::string, std::string>> fails;
  std::map<std::string, std::uint64_t> checks;
  std::map<std::string, std::uint64_t> coverage;
  std::map<std::string, std::uint64_t> stats;

  template <class Detail>
  void expect(bool cond, const std::string& prop, Detail&& detail) {
    checks[prop]++;
    if (!cond) fails.emplace_back(prop, detail());
  }

  void merge_counts(const Results& r) {
    for (const auto& [k, v] : r.checks) checks[k] += v;
    for (const auto& [k, v] : r.coverage) coverage[k] += v;
    for (const auto& [k, v] : r.stats) stats[k] += v;
  }
};

using CaseFn = std::function<void(const Judgment&, Results&)>;

class Runner {
 public:
  Runner(const std::string& name, const SuiteConfig& cfg) : cfg_(cfg) {
    report_.name = name;
    start_ = std::chrono::steady_clock::now();
  }

  SuiteReport& report() { return report_; }

  void absorb(const Judgment& j, const Results& r, const CaseFn& fn) {
    report_.cases++;
    for (const auto& [k, v] : r.checks) report_.checks[k] += v;
    for (const auto& [k, v] : r.coverage) report_.coverage[k] += v;
    for (const auto& [k, v] : r.stats) report_.stats[k] += v;
    std::set<std::string> seen;
    for (const auto& [prop, detail] : r.fails) {
      if (!seen.insert(prop).second) continue;
      report_.stats["failing-cases." + prop]++;
      if (kept_[prop]++ >= kKeptFailuresPerProperty) continue;
      Judgment small = j;
      if (fn) {
        small = shrink(j, [&](const Judgment& c) {
          Results again;
          fn(c, again);
          for (const auto& f : again.fails)
            if (f.first == prop) return true;
          return false;
        });
      }
      report_.failures.push_back({prop, j.case_index, describe(small), detail});
    }
  }

  // Loose properties that are not tied to a program.
  void absorb_global(const Results& r) {
    report_.cases++;
    for (const auto& [k, v] : r.checks) report_.checks[k] += v;
    for (const auto& [k, v] : r.coverage) report_.coverage[k] += v;
    for (const auto& [k, v] : r.stats) report_.stats[k] += v;
    for (const auto& [prop, detail] : r.fails) {
      report_.stats["failing-cases." + prop]++;
      if (kept_[prop]++ < kKeptFailuresPerProperty)
        report_.failures.push_back({prop, 0, "", detail});
    }
  }

  // Corpus: every closed enumerated expression up to enum_size, judged by
  // synthesis and by checking against each depth-1 type; then the seeded
  // random programs.
  void corpus(const CaseFn& fn, bool closed_only = false) {
    std::uint64_t index = 0;
    if (cfg_.enum_size > 0) {
      EnumConfig ec;
      ec.annotation_types = enum_types(1);
      const auto goals = enum_types(1);
      for (int size = 1; size <= cfg_.enum_size; ++size)
        enum_exprs(ec, size, [&](const ExprRef& e) {
          auto s = synth(Ctx(), e);
          if (s) run_one({Ctx(), e, s.value()->type, Direction::Synth, index++}, fn);
          for (const auto& t : goals)
            if (check(Ctx(), e, t)) run_one({Ctx(), e, t, Direction::Check, index++}, fn);
          return true;
        });
    }
    report_.stats["corpus.enumerated"] += index;
    GenConfig gen = cfg_.gen;
    if (closed_only) gen.max_ctx_vars = 0;
    random_cases(gen, index, fn);
  }

  void random_cases(const GenConfig& gen, std::uint64_t base, const CaseFn& fn) {
    std::vector<std::optional<Judgment>> js(cfg_.count);
    std::vector<Results> rs(cfg_.count);
    parallel_for(cfg_.count, cfg_.threads, [&](std::uint64_t i) {
      js[i] = gen_welltyped(gen, i);
      if (js[i]) {
        js[i]->case_index = base + i;
        fn(*js[i], rs[i]);
      }
    });
    for (std::uint64_t i = 0; i < cfg_.count; ++i) {
      if (!js[i]) {
        report_.stats["corpus.generation-gaveup"]++;
        continue;
      }
      report_.stats["corpus.random"]++;
      absorb(*js[i], rs[i], fn);
    }
  }

  void run_one(const Judgment& j, const CaseFn& fn) {
    Results r;
    fn(j, r);
    absorb(j, r, fn);
  }

  SuiteReport finish() {
    report_.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return report_;
  }

 private:
  const SuiteConfig& cfg_;
  SuiteReport report_;
  std::map<std::string, std::size_t> kept_;
  std::chrono::steady_clock::time_point start_;
};

// Re-derives a judgment; null when it does not hold (shrink candidates).
BiRef derive(const Judgment& j, TypeRef& type) {
  if (j.dir == Direction::Check) {
    auto d = check(j.ctx, j.expr, j.type);
    if (!d) return nullptr;
    type = j.type;
    return d.value();
  }
  auto d = synth(j.ctx, j.expr);
  if (!d) return nullptr;
  type = d.value()->type;
  return d.value();
}

bool is_closed(const Judgment& j) { return j.ctx.empty() && free_vars(*j.expr).empty(); }

void count_bi_rules(const BiDerivation& d, std::map<std::string, std::uint64_t>& out) {
  out[std::string(to_string(d.rule))]++;
  for (const auto& c : d.children) count_bi_rules(*c, out);
}

void count_ta_rules(const TADerivation& d, std::map<std::string, std::uint64_t>& out) {
  out[std::string(to_string(d.rule))]++;
  for (const auto& c : d.children) count_ta_rules(*c, out);
}

bool conclusion_matches(const TADerivation& d, const Judgment& j, const TypeRef& a) {
  return d.expr == j.expr && *d.type == *a && ctx_precision(d.ctx, j.ctx) &&
         ctx_precision(j.ctx, d.ctx);
}

bool only_static_sums(const Type& t) { return is_static(t); }

bool derivation_static(const BiDerivation& d) {
  if (!only_static_sums(*d.type)) return false;
  if (d.sub_from && !only_static_sums(*d.sub_from)) return false;
  if (!is_static(d.ctx)) return false;
  for (const auto& c : d.children)
    if (!derivation_static(*c)) return false;
  return true;
}

// Value shapes: unit, function, or an injection tree.
bool same_shape(const TargetTerm& a, const TargetTerm& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == TermKind::Inj) return a.index == b.index && same_shape(*a.a, *b.a);
  return true;
}

bool same_verdict(const Verdict& a, const Verdict& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Verdict::Kind::Value) return same_shape(*a.term, *b.term);
  return true;
}

// Independent closure used by the relations oracle: depth-first reachability.
SumRelTable reachability(const std::vector<SumEdge>& edges) {
  SumRelTable t{};
  for (SumCon s : kAllSumCons) {
    std::vector<SumCon> stack = {s};
    while (!stack.empty()) {
      SumCon c = stack.back();
      stack.pop_back();
      if (t[ordinal(s)][ordinal(c)]) continue;
      t[ordinal(s)][ordinal(c)] = true;
      for (auto [from, to] : edges)
        if (from == c) stack.push_back(to);
    }
  }
  return t;
}

// ---------------------------------------------------------------------------

SuiteReport relations_oracle(const SuiteConfig& cfg) {
  Runner run("relations-oracle", cfg);
  Results r;
  auto sub_oracle = reachability(subsum_edges(true));
  auto prec_oracle = reachability(sum_precision_edges());
  r.expect(subsum_table() == sub_oracle, "subsum-closure", [] { return "table differs"; });
  r.expect(reachability(subsum_edges(false)) == sub_oracle, "subsum-edge-variants",
           [] { return "the two edge lists close differently"; });
  r.expect(reflexive_transitive_closure(subsum_edges(false)) == subsum_table(),
           "subsum-edge-variants", [] { return "closure without the direct edge differs"; });
  r.expect(sum_precision_table() == prec_oracle, "precision-closure",
           [] { return "table differs"; });
  r.expect(subsum(SumCon::PlusQ2, SumCon::PlusStar1) && !subsum(SumCon::PlusQ, SumCon::Plus1) &&
               sum_precision(SumCon::Plus, SumCon::PlusQ) &&
               !sum_precision(SumCon::PlusQ1, SumCon::PlusStar1),
           "spot-facts", [] { return "a spot fact is wrong"; });

  for (SumCon a : kAllSumCons) {
    r.expect(subsum(a, SumCon::Plus), "subsum-top", [&] { return std::string(to_string(a)); });
    r.expect(sum_precision(a, SumCon::PlusQ), "precision-top",
             [&] { return std::string(to_string(a)); });
    for (SumCon b : kAllSumCons) {
      auto name = [&] { return std::string(to_string(a)) + " " + std::string(to_string(b)); };
      r.expect(!(a != b && subsum(a, b) && subsum(b, a)), "subsum-antisymmetric", name);
      r.expect(!(a != b && sum_precision(a, b) && sum_precision(b, a)),
               "precision-antisymmetric", name);
      // dcons on constructors by explicit middle search.
      bool brute = false;
      for (SumCon a0 : kAllSumCons)
        for (SumCon b0 : kAllSumCons)
          if (sum_precision(a0, a) && sum_precision(b0, b) && subsum(a0, b0)) brute = true;
      r.expect(brute == dcons_sum(a, b), "dcons-sum-composition", name);
    }
    for (Index i : kIndices)
      r.expect(!sum_synth(a, star_sum(i)) || subsum(a, star_sum(i)), "sum-synth-implies-subsum",
               [&] { return std::string(to_string(a)); });
  }

  for (TargetSum a : kAllTargetSums)
    for (TargetSum b : kAllTargetSums) {
      CastPair c1{a, b};
      r.expect(cast_precision(c1, c1), "cast-precision-reflexive", [] { return ""; });
      for (TargetSum c : kAllTargetSums)
        for (TargetSum d : kAllTargetSums) {
          CastPair c2{c, d};
          for (TargetSum e : kAllTargetSums)
            for (TargetSum f : kAllTargetSums) {
              CastPair c3{e, f};
              r.expect(!(cast_precision(c1, c2) && cast_precision(c2, c3)) ||
                           cast_precision(c1, c3),
                       "cast-precision-transitive", [&] {
                         return "<" + std::string(to_string(a)) + "=>" +
                                std::string(to_string(b)) + "> through <" +
                                std::string(to_string(c)) + "=>" + std::string(to_string(d)) +
                                "> to <" + std::string(to_string(e)) + "=>" +
                                std::string(to_string(f)) + ">";
                       });
            }
        }
    }

  auto universe = enum_types(cfg.oracle_depth);
  DconsOracle oracle(universe);
  for (const auto& a : universe) {
    r.expect(subtype(*a, *a) && type_precision(*a, *a), "reflexive",
             [&] { return print_type(*a); });
    for (const auto& b : universe) {
      bool shape = gradsum::same_shape(*a, *b);
      auto pair = [&] { return print_type(*a) + " ~> " + print_type(*b); };
      if (!shape) {
        r.expect(!subtype(*a, *b) && !type_precision(*a, *b) && !dcons(*a, *b), "same-shape-only",
                 pair);
        continue;
      }
      bool structural = dcons(*a, *b);
      r.expect(structural == oracle.holds(a, b), "dcons-oracle", pair);
      r.expect(!subtype(*a, *b) || structural, "dcons-contains-subtype", pair);
    }
  }
  // Transitivity on the depth-1 universe.
  auto small = enum_types(std::min(cfg.oracle_depth, 1));
  for (const auto& a : small)
    for (const auto& b : small)
      for (const auto& c : small) {
        auto trip = [&] { return print_type(*a) + ", " + print_type(*b) + ", " + print_type(*c); };
        r.expect(!(subtype(*a, *b) && subtype(*b, *c)) || subtype(*a, *c), "subtype-transitive",
                 trip);
        r.expect(!(type_precision(*a, *b) && type_precision(*b, *c)) || type_precision(*a, *c),
                 "precision-transitive", trip);
      }
  run.absorb_global(r);
  return run.finish();
}

// ---------------------------------------------------------------------------

void typing_case(const Judgment& j, Results& r) {
  TypeRef a;
  BiRef d = derive(j, a);
  if (!d) return;
  const std::size_t size = expr_size(*j.expr);
  const std::size_t nodes = derivation_size(*d);
  r.expect(nodes <= 2 * size, "derivation-size", [&] {
    return std::to_string(nodes) + " nodes for size " + std::to_string(size);
  });
  auto bad = validate_bidirectional(*d);
  r.expect(!bad, "bidirectional-valid", [&] { return *bad; });
  count_bi_rules(*d, r.coverage);

  if (j.dir == Direction::Synth) {
    auto again = synth(j.ctx, j.expr);
    r.expect(again && *again.value()->type == *a, "synthesis-unique",
             [] { return "second synthesis differs"; });
  }

  TARef ta = embed(d);
  auto invalid = validate_assignment(*ta);
  r.expect(!invalid && conclusion_matches(*ta, j, a), "embed-valid",
           [&] { return invalid ? invalid->reason : std::string("conclusion differs"); });
  count_ta_rules(*ta, r.coverage);
  if (!invalid) {
    std::string why;
    bool ok = false;
    try {
      Annotated an = annotate(ta);
      ok = *an.derivation->type == *a && eq_anno(*j.expr, *an.expr);
      if (!ok) why = "annotated " + print_expr(*an.expr) + " synthesizes " +
                     print_type(*an.derivation->type);
    } catch (const std::exception& ex) {
      why = ex.what();
    }
    r.expect(ok, "annotatability", [&] { return why; });
  }

  // One-step loosenings of context, expression and (when checking) type.
  auto holds_loose = [&](const Ctx& g, const ExprRef& e, const TypeRef& t) -> std::string {
    if (j.dir == Direction::Check) {
      auto res = check(g, e, t);
      return res ? "" : res.error().describe();
    }
    auto res = synth(g, e);
    if (!res) return res.error().describe();
    if (!type_precision(*a, *res.value()->type))
      return "synthesized " + print_type(*res.value()->type) + " is not less precise";
    return "";
  };
  auto try_one = [&](const Ctx& g, const ExprRef& e, const TypeRef& t) {
    std::string why = holds_loose(g, e, t);
    r.stats["varying-precision.instances"]++;
    r.expect(why.empty(), "varying-precision", [&] {
      Judgment v{g, e, t, j.dir, j.case_index};
      return describe(v) + ": " + why;
    });
  };
  for (const auto& g : vary_ctx(j.ctx, Vary::Loosen)) try_one(g, j.expr, a);
  for (const auto& e : vary_precision(j.expr, Vary::Loosen)) try_one(j.ctx, e, a);
  if (j.dir == Direction::Check)
    for (const auto& t : vary_type(a, Vary::Loosen)) try_one(j.ctx, j.expr, t);

  bool static_input = is_static(j.ctx) && is_static(*j.expr) &&
                      (j.dir == Direction::Synth || is_static(*a));
  if (static_input)
    r.expect(derivation_static(*d), "subformula",
             [] { return "a non-static constructor appears in the derivation"; });
}

SuiteReport metatheory_typing(const SuiteConfig& cfg) {
  Runner run("metatheory-typing", cfg);
  run.corpus(typing_case);
  return run.finish();
}

// ---------------------------------------------------------------------------

void runtime_term(const TermRef& m0, const std::string& mode, std::uint64_t budget, Results& r) {
  auto t0 = target_typecheck(TargetCtx(), m0);
  r.expect(t0.ok(), "elaboration-welltyped", [&] { return mode + ": " + t0.error().describe(); });
  if (!t0) return;
  target_typing_rules(TargetCtx(), m0, r.coverage);
  TermRef m = m0;
  TargetTypeRef t = t0.value();
  bool pure = is_cast_free(*m) && is_matchfail_free(*m);
  std::uint64_t n = 0;
  for (;; ++n) {
    if (m->kind == TermKind::Matchfail || is_value(*m)) break;
    if (n >= budget) {
      r.expect(false, "termination", [&] { return mode + ": budget exhausted"; });
      return;
    }
    auto s = step(m);
    r.expect(s.has_value(), "progress", [&] { return mode + ": stuck at " + print_target(*m); });
    if (!s) return;
    auto dec = decompose(m);
    TermRef via;
    if (dec.kind == Decomposition::Kind::Redex) via = plug(dec.context, reduce(dec.focus)->result);
    else if (dec.kind == Decomposition::Kind::MatchfailInContext) via = t_matchfail();
    r.expect(via && alpha_equal(*via, *s->result), "determinism",
             [&] { return mode + ": decomposition disagrees at " + print_target(*m); });
    r.coverage[s->rule]++;
    auto t1 = target_typecheck(TargetCtx(), s->result);
    r.expect(t1.ok() && target_subtype(*t1.value(), *t), "preservation", [&] {
      return mode + ": " + print_target(*m) + " steps to " + print_target(*s->result) +
             (t1 ? " of type " + print_target_type(*t1.value()) : " which is ill-typed");
    });
    if (!t1) return;
    target_typing_rules(TargetCtx(), s->result, r.coverage);
    if (pure)
      r.expect(is_cast_free(*s->result) && is_matchfail_free(*s->result), "matchfail-freeness",
               [&] { return mode + ": cast-free term stepped to " + print_target(*s->result); });
    m = s->result;
    t = t1.value();
  }
  if (pure)
    r.expect(is_value(*m), "cast-free-converges",
             [&] { return mode + ": cast-free term ended in " + print_target(*m); });
  r.stats["steps." + mode] += n;
  r.checks["termination"]++;
}

void runtime_case(const Judgment& j, Results& r, std::uint64_t budget) {
  TypeRef a;
  BiRef d = derive(j, a);
  if (!d || !is_closed(j)) return;
  runtime_term(elaborate(*d, ElabMode::Standard), "standard", budget, r);
  runtime_term(elaborate(*d, ElabMode::Saturating), "saturating", budget, r);
}

SuiteReport metatheory_runtime(const SuiteConfig& cfg) {
  Runner run("metatheory-runtime", cfg);
  std::uint64_t budget = cfg.eval_budget;
  run.corpus([budget](const Judgment& j, Results& r) { runtime_case(j, r, budget); }, true);
  return run.finish();
}

// ---------------------------------------------------------------------------

void translation_case(const Judgment& j, Results& r, std::uint64_t budget) {
  TypeRef a;
  BiRef d = derive(j, a);
  if (!d) return;
  TargetCtx th = ctx_trans(j.ctx);
  TargetTypeRef goal = ty_trans(*a);
  TermRef ms[2];
  for (ElabMode mode : {ElabMode::Standard, ElabMode::Saturating}) {
    std::string name = mode == ElabMode::Standard ? "standard" : "saturating";
    TermRef m = elaborate(*d, mode);
    ms[mode == ElabMode::Standard ? 0 : 1] = m;
    auto t = target_typecheck(th, m);
    r.expect(t && target_subtype(*t.value(), *goal), "translation-sound", [&] {
      return name + ": " + print_target(*m) + " : " +
             (t ? print_target_type(*t.value()) : t.error().describe()) + " vs " +
             print_target_type(*goal);
    });
    if (t) target_typing_rules(th, m, r.coverage);
  }
  if (is_closed(j)) {
    Verdict v1 = evaluate(ms[0], budget);
    Verdict v2 = evaluate(ms[1], budget);
    r.stats[std::string("verdict.") + std::string(to_string(v1.kind))]++;
    r.expect(same_verdict(v1, v2), "modes-observationally-equal", [&] {
      return "standard ends in " + print_target(*v1.term) + ", saturating in " +
             print_target(*v2.term);
    });
  }
}

void coercion_typing(const SuiteConfig& cfg, Results& r) {
  auto universe = enum_types(cfg.oracle_depth);
  std::map<std::string, std::vector<TypeRef>> classes;
  for (const auto& t : universe) {
    std::string key = print_type(*t);
    // Shape key without the printer: erase constructors.
    std::string shape;
    for (std::size_t i = 0; i < key.size(); ++i) {
      if (key[i] == '+') {
        shape += '+';
        while (i + 1 < key.size() && key[i + 1] != ' ') ++i;
      } else {
        shape += key[i];
      }
    }
    classes[shape].push_back(t);
  }
  for (const auto& [shape, members] : classes)
    for (const auto& a : members)
      for (const auto& b : members) {
        if (!dcons(*a, *b)) continue;
        for (ElabMode mode : {ElabMode::Standard, ElabMode::Saturating}) {
          TermRef m = coerce(*a, *b, mode).fill(t_var("arg"));
          auto t = target_typecheck(TargetCtx().extend("arg", ty_trans(*a)), m);
          r.expect(t && target_subtype(*t.value(), *ty_trans(*b)), "coercion-typing", [&] {
            return print_type(*a) + " ~> " + print_type(*b) + ": " + print_target(*m);
          });
        }
      }
}

SuiteReport translation(const SuiteConfig& cfg) {
  Runner run("translation", cfg);
  Results global;
  coercion_typing(cfg, global);
  run.absorb_global(global);
  std::uint64_t budget = cfg.eval_budget;
  run.corpus([budget](const Judgment& j, Results& r) { translation_case(j, r, budget); });
  return run.finish();
}

// ---------------------------------------------------------------------------

void precision_case(const Judgment& j, Results& r, std::uint64_t budget) {
  TypeRef a1;
  BiRef d1 = derive(j, a1);
  if (!d1) return;
  TermRef m1 = elaborate(*d1, ElabMode::Saturating);
  bool closed = is_closed(j);
  auto pair = [&](const Ctx& g, const ExprRef& e, const TypeRef& t) {
    Judgment loose{g, e, t, j.dir, j.case_index};
    TypeRef a2;
    BiRef d2 = derive(loose, a2);
    if (!d2) return;  // reported by the typing suite
    r.stats["pairs"]++;
    TermRef m2 = elaborate(*d2, ElabMode::Saturating);
    r.expect(term_precision(*m1, *m2), "elaboration-preserves-precision", [&] {
      return print_target(*m1) + "  vs  " + print_target(*m2) + "  from  " + describe(loose);
    });
    if (!closed || !term_precision(*m1, *m2)) return;
    r.stats["closed-pairs"]++;
    CoStepResult cs = co_step(m1, m2, budget);
    for (const auto& [k, v] : cs.catch_up) r.stats["catch-up." + std::to_string(k)] += v;
    r.expect(cs.ok || cs.failure.find("converg") != std::string::npos, "step-precision",
             [&] { return cs.failure; });
    r.expect(cs.ok || cs.failure.find("converg") == std::string::npos, "respects-convergence",
             [&] { return cs.failure; });
  };
  for (const auto& e : vary_precision(j.expr, Vary::Loosen)) pair(j.ctx, e, a1);
  for (const auto& g : vary_ctx(j.ctx, Vary::Loosen)) pair(g, j.expr, a1);
  if (j.dir == Direction::Check)
    for (const auto& t : vary_type(a1, Vary::Loosen)) pair(j.ctx, j.expr, t);
}

SuiteReport precision_pipeline(const SuiteConfig& cfg) {
  Runner run("precision-pipeline", cfg);
  std::uint64_t budget = cfg.eval_budget;
  run.corpus([budget](const Judgment& j, Results& r) { precision_case(j, r, budget); });
  return run.finish();
}

// ---------------------------------------------------------------------------

void fragment_agreement(const Ctx& g, const ExprRef& e, const std::vector<TypeRef>& goals,
                        Results& r) {
  struct Sys {
    const char* name;
    bool (*member)(const Expr&);
    Outcome<BiRef> (*chk)(const Ctx&, const ExprRef&, const TypeRef&);
    Outcome<BiRef> (*syn)(const Ctx&, const ExprRef&);
    bool (*type_member)(const Type&);
  };
  static const Sys systems[] = {
      {"static", [](const Expr& x) { return is_static(x); }, static_check, static_synth,
       [](const Type& t) { return is_static(t); }},
      {"dynamic", [](const Expr& x) { return is_dynamic(x); }, dyn_check, dyn_synth,
       [](const Type& t) { return is_dynamic(t); }},
  };
  for (const auto& s : systems) {
    bool ctx_in = true;
    for (const auto& [x, t] : g.bindings()) ctx_in = ctx_in && s.type_member(*t);
    if (!ctx_in || !s.member(*e)) continue;
    std::string prop = std::string(s.name) + "-correspondence";
    auto fs = s.syn(g, e);
    auto full = synth(g, e);
    r.expect(fs.ok() == full.ok() && (!fs || *fs.value()->type == *full.value()->type), prop,
             [&] { return "synthesis disagrees on " + print_expr(*e); });
    if (fs) r.expect(!validate_bidirectional(*fs.value()), prop + "-valid", [] { return ""; });
    for (const auto& t : goals) {
      if (!s.type_member(*t)) continue;
      auto fc = s.chk(g, e, t);
      auto fullc = check(g, e, t);
      r.expect(fc.ok() == fullc.ok(), prop, [&] {
        return "checking " + print_expr(*e) + " against " + print_type(*t) + ": fragment " +
               (fc ? "accepts" : "rejects") + ", full " + (fullc ? "accepts" : "rejects");
      });
      if (fc) r.expect(!validate_bidirectional(*fc.value()), prop + "-valid", [] { return ""; });
    }
  }
}

void static_runs(const Judgment& j, Results& r, std::uint64_t budget) {
  TypeRef a;
  BiRef d = derive(j, a);
  if (!d || !is_closed(j)) return;
  if (!is_static(*j.expr) || !is_static(*a)) return;
  TermRef m = elaborate(*d, ElabMode::Standard);
  r.expect(is_cast_free(*m) && is_matchfail_free(*m), "static-elaboration-cast-free",
           [&] { return print_target(*m); });
  Verdict v = evaluate(m, budget);
  r.expect(v.kind == Verdict::Kind::Value, "static-programs-converge",
           [&] { return print_target(*m) + " ends in " + std::string(to_string(v.kind)); });
}

void fragment_case(const Judgment& j, Results& r, std::uint64_t budget) {
  TypeRef a;
  if (!derive(j, a)) return;
  std::vector<TypeRef> goals = {a};
  for (const auto& t : vary_type(a, Vary::Tighten)) goals.push_back(t);
  fragment_agreement(j.ctx, j.expr, goals, r);
  static_runs(j, r, budget);
}

SuiteReport fragments(const SuiteConfig& cfg) {
  Runner run("fragments", cfg);
  std::uint64_t budget = cfg.eval_budget;
  CaseFn fn = [budget](const Judgment& j, Results& r) { fragment_case(j, r, budget); };
  // Every enumerated expression, well-typed or not, judged in both systems.
  std::uint64_t index = 0;
  if (cfg.enum_size > 0) {
    EnumConfig ec;
    ec.annotation_types = enum_types(1);
    const auto goals = enum_types(1);
    for (int size = 1; size <= cfg.enum_size; ++size)
      enum_exprs(ec, size, [&](const ExprRef& e) {
        if (!is_static(*e) && !is_dynamic(*e)) return true;
        Results r;
        fragment_agreement(Ctx(), e, goals, r);
        Judgment j{Ctx(), e, unit_type(), Direction::Synth, index++};
        auto s = synth(Ctx(), e);
        if (s) {
          j.type = s.value()->type;
          static_runs(j, r, budget);
        }
        for (const auto& t : goals)
          if (is_static(*t) && check(Ctx(), e, t))
            static_runs({Ctx(), e, t, Direction::Check, j.case_index}, r, budget);
        run.absorb(j, r, nullptr);
        return true;
      });
  }
  run.report().stats["corpus.enumerated"] += index;
  for (Fragment f : {Fragment::Static, Fragment::Dynamic, Fragment::Full}) {
    GenConfig gen = cfg.gen;
    gen.fragment = f;
    run.random_cases(gen, index, fn);
    index += cfg.count;
  }
  return run.finish();
}

}  // namespace

// ---------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"relations-oracle",   "metatheory-typing",
                                                 "metatheory-runtime", "translation",
                                                 "precision-pipeline", "fragments"};
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg) {
  if (name == "relations-oracle") return relations_oracle(cfg);
  if (name == "metatheory-typing") return metatheory_typing(cfg);
  if (name == "metatheory-runtime") return metatheory_runtime(cfg);
  if (name == "translation") return translation(cfg);
  if (name == "precision-pipeline") return precision_pipeline(cfg);
  if (name == "fragments") return fragments(cfg);
  throw std::invalid_argument("unknown suite: " + name);
}

std::vector<std::string> all_bidirectional_rules() {
  std::vector<std::string> out;
  for (BiRule r : kAllBiRules) out.emplace_back(to_string(r));
  return out;
}

std::vector<std::string> all_assignment_rules() {
  std::vector<std::string> out;
  for (TARule r : kAllTARules) out.emplace_back(to_string(r));
  return out;
}

std::vector<std::string> all_target_typing_rules() {
  return {"TUnitIntro", "TVar",      "TFunIntro", "TFunElim",   "TSumIntro",
          "TSumElimOne", "TSumElimTwo", "TCast", "TMatchfail", "TSub"};
}

std::vector<std::string> all_reduction_rules() {
  return {"ReduceUpcast", "ReduceCastSuccess", "ReduceCastFailure", "ReduceCaseOne",
          "ReduceCaseTwo", "ReduceBeta",       "StepMatchfail"};
}

void target_typing_rules(const TargetCtx& th, const TermRef& m,
                         std::map<std::string, std::uint64_t>& out) {
  auto ty = [](const TargetCtx& g, const TermRef& t) -> TargetTypeRef {
    auto res = target_typecheck(g, t);
    return res ? res.value() : nullptr;
  };
  switch (m->kind) {
    case TermKind::Unit: out["TUnitIntro"]++; return;
    case TermKind::Var: out["TVar"]++; return;
    case TermKind::Matchfail: out["TMatchfail"]++; return;
    case TermKind::Hole: return;
    case TermKind::Lam:
      out["TFunIntro"]++;
      target_typing_rules(th.extend(m->name, m->dom), m->a, out);
      return;
    case TermKind::App: {
      out["TFunElim"]++;
      auto f = ty(th, m->a);
      auto x = ty(th, m->b);
      if (f && x && f->is_arrow() && !(*x == *f->left)) out["TSub"]++;
      target_typing_rules(th, m->a, out);
      target_typing_rules(th, m->b, out);
      return;
    }
    case TermKind::Inj:
      out["TSumIntro"]++;
      target_typing_rules(th, m->a, out);
      return;
    case TermKind::Cast: {
      out["TCast"]++;
      auto s = ty(th, m->a);
      if (s && s->is_sum() && s->con != m->from) out["TSub"]++;
      target_typing_rules(th, m->a, out);
      return;
    }
    case TermKind::CaseOne:
    case TermKind::CaseTwo: {
      out[m->kind == TermKind::CaseOne ? "TSumElimOne" : "TSumElimTwo"]++;
      auto s = ty(th, m->a);
      target_typing_rules(th, m->a, out);
      auto comp = [&](Index i) {
        return s && s->is_sum() ? s->component(i) : t_bottom();
      };
      if (m->kind == TermKind::CaseOne) {
        if (s && s->is_sum() && s->con != target_subscript(m->index)) out["TSub"]++;
        target_typing_rules(th.extend(m->name, comp(m->index)), m->b, out);
      } else {
        auto g1 = th.extend(m->name, comp(Index::One));
        auto g2 = th.extend(m->name2, comp(Index::Two));
        auto t1 = ty(g1, m->b);
        auto t2 = ty(g2, m->c);
        if (s && s->is_sum() && s->con != TargetSum::Plus) out["TSub"]++;
        if (t1 && t2 && !(*t1 == *t2)) out["TSub"]++;
        target_typing_rules(g1, m->b, out);
        target_typing_rules(g2, m->c, out);
      }
      return;
    }
  }
}

std::string SuiteReport::text() const {
  std::ostringstream os;
  os << "suite " << name << ": " << (passed() ? "PASS" : "FAIL") << ", " << cases << " cases, "
     << failures.size() << " reported failures\n";
  for (const auto& [k, v] : checks) os << "  check " << k << ": " << v << "\n";
  for (const auto& [k, v] : coverage) os << "  rule " << k << ": " << v << "\n";
  for (const auto& [k, v] : stats) os << "  stat " << k << ": " << v << "\n";
  for (const auto& f : failures) {
    os << "  FAIL " << f.property << " (case " << f.case_index << ")\n";
    if (!f.program.empty()) os << "    program: " << f.program << "\n";
    os << "    detail:  " << f.detail << "\n";
  }
  os << "  wall time: " << seconds << " s\n";
  return os.str();
}

std::string SuiteReport::json() const {
  nlohmann::ordered_json j;
  j["suite"] = name;
  j["passed"] = passed();
  j["cases"] = cases;
  j["checks"] = checks;
  j["coverage"] = coverage;
  j["stats"] = stats;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& f : failures)
    arr.push_back({{"property", f.property},
                   {"case", f.case_index},
                   {"program", f.program},
                   {"detail", f.detail}});
  j["failures"] = arr;
  j["seconds"] = seconds;
  return j.dump(2);
}

}  // namespace gradsum
