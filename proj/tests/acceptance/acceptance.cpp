// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.
//
//   acceptance [--threads N] [--count N] [--enum-size N] [--verbose]

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "gradsum/elaborate.hpp"
#include "gradsum/harness.hpp"
#include "gradsum/parser.hpp"
#include "gradsum/printer.hpp"
#include "gradsum/relations.hpp"
#include "gradsum/target.hpp"
#include "gradsum/typecheck.hpp"

using namespace gradsum;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdicts {
  int failed = 0;
  void report(int id, bool ok, const std::string& what, const std::string& detail) {
    if (!ok) ++failed;
    std::printf("%s  criterion %2d  %-34s %s\n", ok ? "PASS" : "FAIL", id, what.c_str(),
                detail.c_str());
    std::fflush(stdout);
  }
};

std::string fmt_s(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2fs", s);
  return buf;
}

// --- criterion 1 -----------------------------------------------------------------

using Table = std::array<std::array<bool, kSumConCount>, kSumConCount>;

SumCon con(const char* tok) { return *sum_con_from_token(tok); }

Table closure_of(const std::vector<std::pair<const char*, const char*>>& edges) {
  Table t{};
  for (std::size_t i = 0; i < kSumConCount; ++i) t[i][i] = true;
  for (auto [a, b] : edges) t[ordinal(con(a))][ordinal(con(b))] = true;
  for (std::size_t k = 0; k < kSumConCount; ++k)
    for (std::size_t i = 0; i < kSumConCount; ++i)
      for (std::size_t j = 0; j < kSumConCount; ++j)
        if (t[i][k] && t[k][j]) t[i][j] = true;
  return t;
}

void relation_closures(Verdicts& v) {
  auto t0 = Clock::now();
  Table sub = closure_of({{"+?1", "+1"}, {"+?2", "+2"}, {"+?1", "+?"}, {"+?2", "+?"},
                          {"+1", "+*1"}, {"+2", "+*2"}, {"+?", "+*1"}, {"+?", "+*2"},
                          {"+*1", "+"}, {"+*2", "+"}, {"+?", "+"}});
  Table prec = closure_of({{"+1", "+?1"}, {"+1", "+*1"}, {"+2", "+?2"}, {"+2", "+*2"},
                           {"+", "+?"}, {"+?1", "+?"}, {"+*1", "+?"}, {"+?2", "+?"},
                           {"+*2", "+?"}});
  int mismatches = 0;
  for (SumCon a : kAllSumCons)
    for (SumCon b : kAllSumCons) {
      mismatches += subsum(a, b) != sub[ordinal(a)][ordinal(b)];
      mismatches += sum_precision(a, b) != prec[ordinal(a)][ordinal(b)];
    }
  bool spots = subsum(con("+?2"), con("+*1")) && !subsum(con("+?"), con("+1")) &&
               sum_precision(con("+"), con("+?")) && !sum_precision(con("+?1"), con("+*1"));
  double s = since(t0);
  v.report(1, mismatches == 0 && spots && s < 1.0, "relation closures",
           std::to_string(mismatches) + " table mismatches, spot facts " +
               (spots ? "hold" : "FAIL") + ", " + fmt_s(s));
}

// --- criterion 2 -----------------------------------------------------------------

void dcons_oracle(Verdicts& v) {
  auto t0 = Clock::now();
  auto universe = enum_types(2);
  DconsOracle oracle(universe);
  std::uint64_t pairs = 0, disagree = 0;
  std::string first;
  for (const auto& a : universe)
    for (const auto& b : universe) {
      if (!same_shape(*a, *b)) continue;
      ++pairs;
      if (dcons(*a, *b) != oracle.holds(a, b)) {
        if (disagree++ == 0) first = print_type(*a) + " ~> " + print_type(*b);
      }
    }
  double s = since(t0);
  v.report(2, disagree == 0 && s < 30.0, "dcons vs middle-search oracle",
           std::to_string(pairs - disagree) + "/" + std::to_string(pairs) +
               " same-shape pairs agree, " + fmt_s(s) + (first.empty() ? "" : ", e.g. " + first));
}

// --- criterion 3 -----------------------------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool has_csub(const BiDerivation& d, const Type& from, const Type& to) {
  if (d.rule == BiRule::ChkCSub && d.sub_from && *d.sub_from == from && *d.type == to) return true;
  for (const auto& c : d.children)
    if (has_csub(*c, from, to)) return true;
  return false;
}

void migration_example(Verdicts& v) {
  auto t0 = Clock::now();
  const std::string dir = GRADSUM_GOLDEN_DIR;
  bool ok = true;
  std::string detail;
  try {
    ExprRef open = parse_expr(slurp(dir + "/open.gsum"));
    int typed = 0;
    bool csub = false;
    for (const char* f : {"+2", "+?"})
      for (const char* x : {"+2", "+?"}) {
        Ctx g = parse_ctx(std::string("f : Unit ") + f + " Unit -> Unit, x : Unit " + x + " Unit");
        auto d = check(g, open, unit_type());
        if (!d) continue;
        ++typed;
        if (std::string(f) == "+2" && std::string(x) == "+?")
          csub = has_csub(*d.value(), *parse_type("Unit +? Unit"), *parse_type("Unit +2 Unit"));
      }
    auto verdict = [&](const std::string& file, ElabMode mode) {
      auto e = parse_expr(slurp(dir + "/" + file));
      auto r = elab_synth(Ctx(), e, mode);
      if (!r) return Verdict::Kind::Stuck;
      return evaluate(r.value().term, 1000).kind;
    };
    bool runs = true;
    for (ElabMode mode : {ElabMode::Standard, ElabMode::Saturating}) {
      runs = runs && verdict("migration_f2_xq_inj2.gsum", mode) == Verdict::Kind::Value;
      runs = runs && verdict("migration_f2_xq_inj1.gsum", mode) == Verdict::Kind::Matchfail;
    }
    ok = typed == 4 && csub && runs;
    detail = std::to_string(typed) + "/4 variants typecheck, ChkCSub (+? ~> +2) " +
             (csub ? "present" : "MISSING") + ", inj2 -> value / inj1 -> matchfail " +
             (runs ? "yes" : "NO");
  } catch (const std::exception& ex) {
    ok = false;
    detail = ex.what();
  }
  double s = since(t0);
  v.report(3, ok && s < 1.0, "migration example", detail + ", " + fmt_s(s));
}

// --- suite-backed criteria ---------------------------------------------------------

struct Suites {
  std::map<std::string, SuiteReport> by_name;

  const SuiteReport& operator[](const std::string& n) const { return by_name.at(n); }
};

// A property holds when it was checked at least once and never failed.
struct PropCheck {
  const SuiteReport& r;
  std::vector<std::string> notes;
  bool ok = true;

  PropCheck& prop(const std::string& p) {
    auto c = r.checks.count(p) ? r.checks.at(p) : 0;
    auto f = r.stats.count("failing-cases." + p) ? r.stats.at("failing-cases." + p) : 0;
    if (c == 0 || f != 0) ok = false;
    notes.push_back(p + " " + std::to_string(c - std::min(c, f)) + "/" + std::to_string(c));
    return *this;
  }
  PropCheck& at_least(const std::string& stat, std::uint64_t n) {
    auto c = r.stats.count(stat) ? r.stats.at(stat) : 0;
    if (c < n) ok = false;
    notes.push_back(stat + "=" + std::to_string(c));
    return *this;
  }
  PropCheck& covers(const std::vector<std::string>& rules, const std::string& family) {
    std::vector<std::string> missing;
    for (const auto& rule : rules)
      if (!r.coverage.count(rule)) missing.push_back(rule);
    if (!missing.empty()) ok = false;
    std::string m = family + " rules " + std::to_string(rules.size() - missing.size()) + "/" +
                    std::to_string(rules.size());
    for (const auto& x : missing) m += " -" + x;
    notes.push_back(m);
    return *this;
  }
  PropCheck& within(double limit) {
    if (r.seconds >= limit) ok = false;
    notes.push_back(r.name + " " + fmt_s(r.seconds));
    return *this;
  }
  std::string text() const {
    std::string s;
    for (const auto& n : notes) s += (s.empty() ? "" : ", ") + n;
    return s;
  }
};

void suite_criteria(const Suites& s, Verdicts& v) {
  {
    PropCheck c{s["metatheory-typing"]};
    c.prop("derivation-size").covers(all_bidirectional_rules(), "bidirectional");
    v.report(4, c.ok, "derivation size <= 2 x expression", c.text());
  }
  {
    PropCheck c{s["metatheory-typing"]};
    c.prop("embed-valid").prop("annotatability").covers(all_assignment_rules(), "assignment");
    v.report(5, c.ok, "embedding and re-annotation", c.text());
  }
  {
    PropCheck c{s["metatheory-typing"]};
    c.prop("varying-precision").at_least("varying-precision.instances", 10000).within(300);
    v.report(6, c.ok, "varying precision", c.text());
  }
  {
    PropCheck c{s["fragments"]};
    c.prop("static-correspondence").prop("static-correspondence-valid");
    c.prop("dynamic-correspondence").prop("dynamic-correspondence-valid");
    v.report(7, c.ok, "fragment correspondence", c.text());
  }
  {
    PropCheck c{s["translation"]};
    c.prop("translation-sound").prop("coercion-typing").prop("modes-observationally-equal");
    v.report(8, c.ok, "translation soundness", c.text());
  }
  {
    PropCheck c{s["fragments"]};
    c.prop("static-elaboration-cast-free").prop("static-programs-converge");
    v.report(9, c.ok, "static programs do not fail", c.text());
  }
  {
    PropCheck c{s["metatheory-runtime"]};
    c.prop("elaboration-welltyped").prop("preservation").prop("progress").prop("determinism");
    c.prop("termination").covers(all_reduction_rules(), "reduction");
    c.covers(all_target_typing_rules(), "target typing");
    v.report(10, c.ok, "runtime metatheory", c.text());
  }
  {
    PropCheck c{s["precision-pipeline"]};
    c.prop("elaboration-preserves-precision").prop("step-precision").prop("respects-convergence");
    c.at_least("pairs", 1000).within(300);
    v.report(11, c.ok, "gradual guarantee, runtime half", c.text());
  }
}

// --- criterion 12 ----------------------------------------------------------------

void round_trip(const SuiteConfig& cfg, Verdicts& v) {
  auto t0 = Clock::now();
  std::uint64_t src = 0, src_bad = 0, tgt = 0, tgt_bad = 0;
  std::string first;
  auto source = [&](const ExprRef& e) {
    ++src;
    bool ok = false;
    try {
      ok = alpha_equal(*parse_expr(print_expr(*e)), *e);
    } catch (const ParseError&) {
    }
    if (!ok && src_bad++ == 0) first = print_expr(*e);
  };
  auto target = [&](const TermRef& m) {
    ++tgt;
    bool ok = false;
    try {
      ok = alpha_equal(*parse_target(print_target(*m)), *m);
    } catch (const ParseError&) {
    }
    if (!ok && tgt_bad++ == 0) first = print_target(*m);
  };

  EnumConfig ec;
  ec.annotation_types = enum_types(1);
  ec.free_vars = {"f"};
  for (int n = 1; n <= 5; ++n)
    enum_exprs(ec, n, [&](const ExprRef& e) {
      source(e);
      return true;
    });
  for (std::uint64_t i = 0; i < cfg.count; ++i) {
    auto j = gen_welltyped(cfg.gen, i);
    if (!j) continue;
    source(j->expr);
    auto d = j->dir == Direction::Check ? check(j->ctx, j->expr, j->type) : synth(j->ctx, j->expr);
    if (!d) continue;
    for (ElabMode mode : {ElabMode::Standard, ElabMode::Saturating}) {
      TermRef m = elaborate(*d.value(), mode);
      for (int k = 0; k < 64; ++k) {
        target(m);
        auto s = step(m);
        if (!s) break;
        m = s->result;
      }
    }
  }
  v.report(12, src_bad == 0 && tgt_bad == 0, "parse . print round trip",
           std::to_string(src - src_bad) + "/" + std::to_string(src) + " source, " +
               std::to_string(tgt - tgt_bad) + "/" + std::to_string(tgt) + " target, " +
               fmt_s(since(t0)) + (first.empty() ? "" : ", e.g. " + first));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  SuiteConfig cfg;
  cfg.threads = std::max(1u, std::thread::hardware_concurrency());
  bool verbose = false;
  app.add_option("--threads", cfg.threads);
  app.add_option("--count", cfg.count, "random programs per suite");
  app.add_option("--enum-size", cfg.enum_size);
  app.add_flag("--verbose", verbose, "print every suite report");
  CLI11_PARSE(app, argc, argv);

  Verdicts v;
  relation_closures(v);
  dcons_oracle(v);
  migration_example(v);

  Suites suites;
  for (const auto& name : suite_names()) {
    suites.by_name.emplace(name, run_suite(name, cfg));
    const auto& r = suites[name];
    if (verbose || !r.passed()) std::fputs(r.text().c_str(), stderr);
  }
  suite_criteria(suites, v);
  round_trip(cfg, v);

  std::printf("%d of 12 criteria passed\n", 12 - v.failed);
  return v.failed == 0 ? 0 : 1;
}
