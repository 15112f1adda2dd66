#include "cli.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gradsum/elaborate.hpp"
#include "gradsum/harness.hpp"
#include "gradsum/parser.hpp"
#include "gradsum/printer.hpp"
#include "gradsum/relations.hpp"
#include "gradsum/target.hpp"
#include "gradsum/typecheck.hpp"

namespace gradsum::cli {

namespace {

using json = nlohmann::ordered_json;

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

json ctx_json(const Ctx& g) {
  json j = json::object();
  for (const auto& [x, t] : g.bindings()) j[x] = print_type(*t);
  return j;
}

json derivation_json(const BiDerivation& d) {
  json j;
  j["rule"] = std::string(to_string(d.rule));
  j["ctx"] = ctx_json(d.ctx);
  j["expr"] = print_expr(*d.expr);
  j["dir"] = std::string(to_string(d.dir));
  j["type"] = print_type(*d.type);
  if (d.sub_from) j["from"] = print_type(*d.sub_from);
  if (d.sum_fact)
    j["side"] = {std::string(to_string(d.sum_fact->first)),
                 std::string(to_string(d.sum_fact->second))};
  json kids = json::array();
  for (const auto& c : d.children) kids.push_back(derivation_json(*c));
  j["children"] = kids;
  return j;
}

json term_json(const TargetTerm& m) {
  json j;
  switch (m.kind) {
    case TermKind::Unit: j["kind"] = "unit"; break;
    case TermKind::Var: j = {{"kind", "var"}, {"name", m.name}}; break;
    case TermKind::Matchfail: j["kind"] = "matchfail"; break;
    case TermKind::Hole: j["kind"] = "hole"; break;
    case TermKind::Lam:
      j = {{"kind", "fn"}, {"var", m.name}, {"dom", print_target_type(*m.dom)},
           {"body", term_json(*m.a)}};
      break;
    case TermKind::App: j = {{"kind", "app"}, {"fn", term_json(*m.a)}, {"arg", term_json(*m.b)}}; break;
    case TermKind::Inj: j = {{"kind", "inj"}, {"index", to_int(m.index)}, {"payload", term_json(*m.a)}}; break;
    case TermKind::Cast:
      j = {{"kind", "cast"}, {"from", std::string(to_string(m.from))},
           {"to", std::string(to_string(m.to))}, {"term", term_json(*m.a)}};
      break;
    case TermKind::CaseOne:
      j = {{"kind", "case1"}, {"scrut", term_json(*m.a)}, {"index", to_int(m.index)},
           {"var", m.name}, {"arm", term_json(*m.b)}};
      break;
    case TermKind::CaseTwo:
      j = {{"kind", "case2"}, {"scrut", term_json(*m.a)}, {"var1", m.name},
           {"arm1", term_json(*m.b)}, {"var2", m.name2}, {"arm2", term_json(*m.c)}};
      break;
  }
  return j;
}

template <class Con, std::size_t N, class Cell>
void print_table(std::ostream& out, const std::array<Con, N>& cons, Cell cell, bool as_json,
                 const std::string& title) {
  if (as_json) {
    json j;
    j["relation"] = title;
    json rows = json::object();
    for (Con a : cons) {
      json row = json::object();
      for (Con b : cons) row[std::string(to_string(b))] = cell(a, b);
      rows[std::string(to_string(a))] = row;
    }
    j["rows"] = rows;
    out << j.dump(2) << "\n";
    return;
  }
  auto text = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  std::size_t w = 5;
  for (Con a : cons)
    for (Con b : cons) w = std::max(w, text(json(cell(a, b))).size());
  out << title << " (row relates to column)\n" << std::setw(5) << "";
  for (Con b : cons) out << " " << std::setw(static_cast<int>(w)) << to_string(b);
  out << "\n";
  for (Con a : cons) {
    out << std::setw(5) << to_string(a);
    for (Con b : cons) out << " " << std::setw(static_cast<int>(w)) << text(json(cell(a, b)));
    out << "\n";
  }
}

int report_type_error(const TypeError& e, std::ostream& err) {
  err << "type error: " << e.describe() << "\n";
  return kTypeError;
}

struct Loaded {
  Ctx ctx;
  ExprRef expr;
  TypeRef type;  // null: synthesize
};

Loaded load(const std::string& file, const std::string& ctx, const std::string& type) {
  Loaded l;
  l.expr = parse_expr(slurp(file));
  l.ctx = parse_ctx(ctx);
  if (!type.empty()) l.type = parse_type(type);
  return l;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gradual sums: checker, elaborator, evaluator and property suites", "gradsum"};
  app.require_subcommand(1);

  // relations
  auto* rel = app.add_subcommand("relations", "Print a sum-constructor relation table");
  std::string table;
  bool rel_json = false;
  rel->add_option("--table", table, "subsum | precision | dcons-sum | cast-class")
      ->required()
      ->check(CLI::IsMember({"subsum", "precision", "dcons-sum", "cast-class"}));
  rel->add_flag("--json", rel_json, "Emit JSON instead of text");

  // check / synth / fragment
  std::string file, type, ctx, emit_derivation;
  auto* chk = app.add_subcommand("check", "Check an expression (synthesize without --type)");
  chk->add_option("FILE", file, "Source file, - for stdin")->required();
  chk->add_option("--type", type, "Type to check against");
  chk->add_option("--ctx", ctx, "Typing context, e.g. \"f : Unit -> Unit, x : Unit\"");
  chk->add_option("--emit-derivation", emit_derivation, "Dump the derivation")
      ->check(CLI::IsMember({"json"}));

  auto* syn = app.add_subcommand("synth", "Synthesize a type");
  syn->add_option("FILE", file)->required();
  syn->add_option("--ctx", ctx);
  syn->add_option("--emit-derivation", emit_derivation)->check(CLI::IsMember({"json"}));

  auto* frag = app.add_subcommand("fragment", "Check in the static or dynamic fragment");
  bool frag_static = false, frag_dynamic = false;
  frag->add_option("FILE", file)->required();
  auto* fs = frag->add_flag("--static", frag_static);
  auto* fd = frag->add_flag("--dynamic", frag_dynamic);
  fs->excludes(fd);
  frag->add_option("--type", type);
  frag->add_option("--ctx", ctx);
  frag->add_option("--emit-derivation", emit_derivation)->check(CLI::IsMember({"json"}));

  // elaborate / run
  bool saturate = false;
  std::string emit = "target";
  auto* elab = app.add_subcommand("elaborate", "Translate to the cast calculus");
  elab->add_option("FILE", file)->required();
  elab->add_flag("--saturate", saturate, "Insert casts at every sum coercion");
  elab->add_option("--emit", emit)->check(CLI::IsMember({"target", "json"}));
  elab->add_option("--type", type);
  elab->add_option("--ctx", ctx);

  std::uint64_t max_steps = 1000000;
  bool trace = false;
  auto* runc = app.add_subcommand("run", "Elaborate and evaluate a closed program");
  runc->add_option("FILE", file)->required();
  runc->add_option("--max-steps", max_steps);
  runc->add_flag("--trace", trace);
  runc->add_flag("--saturate", saturate);
  runc->add_option("--type", type);

  // fuzz
  std::string suite;
  SuiteConfig scfg;
  bool fuzz_json = false;
  auto* fuzz = app.add_subcommand("fuzz", "Run a property suite");
  fuzz->add_option("--suite", suite, "Suite name or 'all'")->required();
  fuzz->add_option("--size", scfg.gen.max_size, "Largest random program");
  fuzz->add_option("--count", scfg.count, "Random programs to draw");
  fuzz->add_option("--seed", scfg.gen.seed);
  fuzz->add_option("--depth", scfg.gen.type_depth, "Type depth of random programs");
  fuzz->add_option("--enum-size", scfg.enum_size, "Exhaustive enumeration bound (0 = off)");
  fuzz->add_option("--oracle-depth", scfg.oracle_depth, "Type depth for relation oracles");
  fuzz->add_option("--threads", scfg.threads);
  fuzz->add_flag("--json", fuzz_json);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (rel->parsed()) {
      if (table == "subsum")
        print_table(out, kAllSumCons, [](SumCon a, SumCon b) { return subsum(a, b); }, rel_json, table);
      else if (table == "precision")
        print_table(out, kAllSumCons, [](SumCon a, SumCon b) { return sum_precision(a, b); }, rel_json, table);
      else if (table == "dcons-sum")
        print_table(out, kAllSumCons, [](SumCon a, SumCon b) { return dcons_sum(a, b); }, rel_json, table);
      else
        print_table(out, kAllTargetSums,
                    [](TargetSum a, TargetSum b) { return std::string(to_string(cast_class(a, b))); },
                    rel_json, table);
      return kOk;
    }

    if (chk->parsed() || syn->parsed() || frag->parsed()) {
      Loaded l = load(file, ctx, syn->parsed() ? "" : type);
      Outcome<BiRef> res = [&] {
        if (frag->parsed()) {
          if (frag_dynamic) return l.type ? dyn_check(l.ctx, l.expr, l.type) : dyn_synth(l.ctx, l.expr);
          return l.type ? static_check(l.ctx, l.expr, l.type) : static_synth(l.ctx, l.expr);
        }
        return l.type ? check(l.ctx, l.expr, l.type) : synth(l.ctx, l.expr);
      }();
      if (!res) return report_type_error(res.error(), err);
      const BiDerivation& d = *res.value();
      if (emit_derivation == "json")
        out << derivation_json(d).dump(2) << "\n";
      else
        out << print_expr(*d.expr) << (d.dir == Direction::Check ? " <= " : " => ")
            << print_type(*d.type) << "\n";
      return kOk;
    }

    if (elab->parsed() || runc->parsed()) {
      Loaded l = load(file, runc->parsed() ? "" : ctx, type);
      ElabMode mode = saturate ? ElabMode::Saturating : ElabMode::Standard;
      Outcome<BiRef> res = l.type ? check(l.ctx, l.expr, l.type) : synth(l.ctx, l.expr);
      if (!res) return report_type_error(res.error(), err);
      TermRef m = elaborate(*res.value(), mode);
      if (elab->parsed()) {
        if (emit == "json")
          out << json{{"type", print_target_type(*ty_trans(*res.value()->type))},
                      {"term", term_json(*m)}}
                     .dump(2)
              << "\n";
        else
          out << print_target(*m) << "\n";
        return kOk;
      }
      StepTrace tr;
      Verdict v = evaluate(m, max_steps, trace ? &tr : nullptr);
      if (trace)
        for (const auto& [t, rule] : tr) out << std::left << std::setw(18) << rule << print_target(*t) << "\n";
      out << print_target(*v.term) << "\n";
      err << to_string(v.kind) << " after " << v.steps << " steps\n";
      switch (v.kind) {
        case Verdict::Kind::Value: return kOk;
        case Verdict::Kind::Matchfail: return kMatchfail;
        case Verdict::Kind::BudgetExceeded: return kBudget;
        case Verdict::Kind::Stuck: return kTypeError;
      }
    }

    if (fuzz->parsed()) {
      std::vector<std::string> names;
      if (suite == "all") names = suite_names();
      else names.push_back(suite);
      bool ok = true;
      json all = json::array();
      for (const auto& n : names) {
        SuiteReport r = run_suite(n, scfg);
        ok = ok && r.passed();
        if (fuzz_json) all.push_back(json::parse(r.json()));
        else out << r.text();
      }
      if (fuzz_json) out << (all.size() == 1 ? all[0] : all).dump(2) << "\n";
      return ok ? kOk : kTypeError;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace gradsum::cli
