#include <algorithm>
#include <stdexcept>
#include <thread>

#include "gradsum/harness.hpp"
#include "gradsum/printer.hpp"
#include "gradsum/relations.hpp"

namespace gradsum {

// --- type universe ---------------------------------------------------------------

std::vector<TypeRef> enum_types(int depth) {
  std::vector<TypeRef> level = {unit_type()};
  for (int d = 1; d <= depth; ++d) {
    std::vector<TypeRef> next = {unit_type()};
    for (const auto& a : level)
      for (const auto& b : level) next.push_back(arrow_type(a, b));
    for (SumCon c : kAllSumCons)
      for (const auto& a : level)
        for (const auto& b : level) next.push_back(sum_type(a, c, b));
    level = std::move(next);
  }
  return level;
}

std::uint64_t type_universe_size(int depth) {
  std::uint64_t n = 1;
  for (int d = 1; d <= depth; ++d) n = 1 + 9 * n * n;
  return n;
}

// --- expression enumeration --------------------------------------------------------

namespace {

using Sink = std::function<bool(const ExprRef&)>;

struct Enumerator {
  const EnumConfig& cfg;

  static std::string binder(int depth) { return "x" + std::to_string(depth); }

  // Calls k on each expression of exactly n nodes with `depth` binders in
  // scope. Returns false when the consumer asked to stop.
  bool gen(int n, int depth, const Sink& k) const {
    if (n <= 0) return true;
    if (n == 1) {
      if (!k(e_unit())) return false;
      for (const auto& x : cfg.free_vars)
        if (!k(e_var(x))) return false;
      for (int d = 0; d < depth; ++d)
        if (!k(e_var(binder(d)))) return false;
      return true;
    }
    const int m = n - 1;
    std::string x = binder(depth);
    if (!gen(m, depth + 1, [&](const ExprRef& b) { return k(e_lam(x, b)); })) return false;
    for (int a = 1; a < m; ++a)
      if (!gen(a, depth, [&](const ExprRef& f) {
            return gen(m - a, depth, [&](const ExprRef& g) { return k(e_app(f, g)); });
          }))
        return false;
    for (Index i : kIndices)
      if (!gen(m, depth, [&](const ExprRef& p) { return k(e_inj(i, p)); })) return false;
    for (const auto& t : cfg.annotation_types)
      if (!gen(m, depth, [&](const ExprRef& p) { return k(e_anno(p, t)); })) return false;
    for (int s = 1; s < m; ++s)
      for (int b1 = 1; s + b1 < m; ++b1) {
        int b2 = m - s - b1;
        if (!gen(s, depth, [&](const ExprRef& sc) {
              return gen(b1, depth + 1, [&](const ExprRef& arm1) {
                return gen(b2, depth + 1, [&](const ExprRef& arm2) {
                  return k(e_case_two(sc, x, arm1, x, arm2));
                });
              });
            }))
          return false;
      }
    for (Index i : kIndices)
      for (int s = 1; s < m; ++s)
        if (!gen(s, depth, [&](const ExprRef& sc) {
              return gen(m - s, depth + 1,
                         [&](const ExprRef& arm) { return k(e_case_one(sc, i, x, arm)); });
            }))
          return false;
    return true;
  }
};

}  // namespace

void enum_exprs(const EnumConfig& cfg, int size, const Sink& out) {
  Enumerator{cfg}.gen(size, 0, out);
}

std::uint64_t count_exprs(std::size_t annotation_types, std::size_t free_vars, int size) {
  if (size <= 0) return 0;
  // c[n][v]: expressions of n nodes with v variables in scope.
  // At most size - n binders sit above a subterm of n nodes.
  const int vmax = static_cast<int>(free_vars) + size;
  std::vector<std::vector<std::uint64_t>> c(size + 1, std::vector<std::uint64_t>(vmax + 1, 0));
  for (int n = 1; n <= size; ++n)
    for (int v = 0; v <= vmax; ++v) {
      if (n == 1) {
        c[n][v] = 1 + v;
        continue;
      }
      int m = n - 1;
      std::uint64_t t = 0;
      if (v + 1 <= vmax) t += c[m][v + 1];
      for (int a = 1; a < m; ++a) t += c[a][v] * c[m - a][v];
      t += (2 + annotation_types) * c[m][v];
      for (int s = 1; s < m; ++s)
        for (int b1 = 1; s + b1 < m; ++b1)
          if (v + 1 <= vmax) t += c[s][v] * c[b1][v + 1] * c[m - s - b1][v + 1];
      for (int s = 1; s < m; ++s)
        if (v + 1 <= vmax) t += 2 * c[s][v] * c[m - s][v + 1];
      c[n][v] = t;
    }
  return c[size][free_vars];
}

// --- random generation ---------------------------------------------------------------

namespace {

std::vector<SumCon> fragment_cons(Fragment f) {
  switch (f) {
    case Fragment::Static: return {SumCon::Plus, SumCon::Plus1, SumCon::Plus2};
    case Fragment::Dynamic: return {SumCon::PlusQ};
    case Fragment::Full: break;
  }
  return {kAllSumCons.begin(), kAllSumCons.end()};
}

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

bool coin(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

int range(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

class Generator {
 public:
  Generator(const GenConfig& cfg, std::mt19937_64& rng)
      : cfg_(cfg), rng_(rng), cons_(fragment_cons(cfg.fragment)) {}

  TypeRef type(int depth) { return random_type(rng_, depth, cfg_.fragment); }

  // A type A' with dcons(A', a), built constructor by constructor.
  TypeRef dcons_source(const TypeRef& a, bool flip = false) {
    switch (a->kind) {
      case TypeKind::Unit:
        return a;
      case TypeKind::Arrow:
        return arrow_type(dcons_source(a->left, !flip), dcons_source(a->right, flip));
      case TypeKind::Sum: {
        std::vector<SumCon> ok;
        for (SumCon c : cons_)
          if (flip ? dcons_sum(a->con, c) : dcons_sum(c, a->con)) ok.push_back(c);
        return sum_type(dcons_source(a->left, flip), pick(rng_, ok), dcons_source(a->right, flip));
      }
    }
    return a;
  }

  std::string fresh_binder(const Ctx& g) {
    auto names = g.bindings();
    if (!names.empty() && coin(rng_, 0.1)) {
      auto it = names.begin();
      std::advance(it, range(rng_, 0, static_cast<int>(names.size()) - 1));
      return it->first;  // deliberate shadowing
    }
    return "v" + std::to_string(counter_++);
  }

  // Smallest checking term of a type.
  ExprRef minimal(const Ctx& g, const TypeRef& a) {
    switch (a->kind) {
      case TypeKind::Unit:
        return e_unit();
      case TypeKind::Arrow: {
        std::string x = fresh_binder(g);
        return e_lam(x, minimal(g.extend(x, a->left), a->right));
      }
      case TypeKind::Sum: {
        std::vector<Index> ok;
        for (Index i : kIndices)
          if (subsum(innate_sum(i), a->con)) ok.push_back(i);
        Index i = pick(rng_, ok);
        return e_inj(i, minimal(g, a->component(i)));
      }
    }
    return e_unit();
  }

  std::vector<std::string> vars_where(const Ctx& g, const std::function<bool(const Type&)>& p) {
    std::vector<std::string> out;
    for (const auto& [x, t] : g.bindings())
      if (p(*t)) out.push_back(x);
    return out;
  }

  ExprRef check(const Ctx& g, const TypeRef& a, int budget) {
    if (budget <= 1) {
      auto vs = vars_where(g, [&](const Type& t) { return dcons(t, *a); });
      if (!vs.empty() && coin(rng_, 0.5)) return e_var(pick(rng_, vs));
      return minimal(g, a);
    }
    double r = std::uniform_real_distribution<double>(0, 1)(rng_);
    if (r < cfg_.annotation_density) return synth_towards(g, a, budget);
    if (r < cfg_.annotation_density + 0.2 && budget >= 4) return case_form(g, a, budget);
    switch (a->kind) {
      case TypeKind::Unit:
        return e_unit();
      case TypeKind::Arrow: {
        std::string x = fresh_binder(g);
        return e_lam(x, check(g.extend(x, a->left), a->right, budget - 1));
      }
      case TypeKind::Sum: {
        std::vector<Index> ok;
        for (Index i : kIndices)
          if (subsum(innate_sum(i), a->con)) ok.push_back(i);
        Index i = pick(rng_, ok);
        return e_inj(i, check(g, a->component(i), budget - 1));
      }
    }
    return e_unit();
  }

  ExprRef case_form(const Ctx& g, const TypeRef& a, int budget) {
    int rest = budget - 1;
    int scrut_budget = std::max(1, rest / 3);
    TypeRef s = random_sum(cfg_.type_depth);
    if (coin(rng_, 0.5)) {
      std::vector<Index> ok;
      for (Index i : kIndices)
        if (sum_synth(s->con, star_sum(i))) ok.push_back(i);
      if (!ok.empty()) {
        Index i = pick(rng_, ok);
        ExprRef scrut = synth_exact(g, s, scrut_budget);
        std::string x = fresh_binder(g);
        return e_case_one(scrut, i, x,
                          check(g.extend(x, s->component(i)), a, rest - scrut_budget));
      }
    }
    ExprRef scrut = synth_exact(g, s, scrut_budget);
    int arm = std::max(1, (rest - scrut_budget) / 2);
    std::string x1 = fresh_binder(g);
    std::string x2 = fresh_binder(g);
    return e_case_two(scrut, x1, check(g.extend(x1, s->left), a, arm), x2,
                      check(g.extend(x2, s->right), a, arm));
  }

  TypeRef random_sum(int depth) {
    TypeRef t;
    do t = type(std::max(1, depth));
    while (!t->is_sum());
    return t;
  }

  // A synthesizing expression whose type converts to a.
  ExprRef synth_towards(const Ctx& g, const TypeRef& a, int budget) {
    auto vs = vars_where(g, [&](const Type& t) { return dcons(t, *a); });
    if (!vs.empty() && coin(rng_, 0.3)) return e_var(pick(rng_, vs));
    TypeRef src = dcons_source(a);
    if (budget >= 4 && coin(rng_, 0.3)) {
      TypeRef dom = type(std::max(0, cfg_.type_depth - 1));
      int head = std::max(1, (budget - 1) / 2);
      return e_app(synth_exact(g, arrow_type(dom, src), head), check(g, dom, budget - 1 - head));
    }
    return e_anno(check(g, src, budget - 1), src);
  }

  // A synthesizing expression of exactly type a.
  ExprRef synth_exact(const Ctx& g, const TypeRef& a, int budget) {
    auto vs = vars_where(g, [&](const Type& t) { return t == *a; });
    if (!vs.empty() && coin(rng_, 0.6)) return e_var(pick(rng_, vs));
    if (budget >= 5 && coin(rng_, 0.2)) {
      TypeRef dom = type(std::max(0, cfg_.type_depth - 1));
      int head = std::max(1, (budget - 1) / 2);
      return e_app(synth_exact(g, arrow_type(dom, a), head), check(g, dom, budget - 1 - head));
    }
    return e_anno(check(g, a, budget - 1), a);
  }

  Ctx context() {
    Ctx g;
    if (cfg_.max_ctx_vars <= 0 || coin(rng_, 0.5)) return g;
    int n = range(rng_, 1, cfg_.max_ctx_vars);
    for (int k = 0; k < n; ++k) g = g.extend("y" + std::to_string(k), type(cfg_.type_depth));
    return g;
  }

 private:
  const GenConfig& cfg_;
  std::mt19937_64& rng_;
  std::vector<SumCon> cons_;
  int counter_ = 0;
};

}  // namespace

TypeRef random_type(std::mt19937_64& rng, int depth, Fragment frag) {
  if (depth <= 0) return unit_type();
  int r = range(rng, 0, 99);
  if (r < 20) return unit_type();
  if (r < 45) return arrow_type(random_type(rng, depth - 1, frag), random_type(rng, depth - 1, frag));
  auto cons = fragment_cons(frag);
  return sum_type(random_type(rng, depth - 1, frag), pick(rng, cons),
                  random_type(rng, depth - 1, frag));
}

std::string describe(const Judgment& j) {
  std::string out = print_ctx(j.ctx);
  out += out.empty() ? "|- " : " |- ";
  out += print_expr(*j.expr);
  out += j.dir == Direction::Check ? " <= " : " => ";
  out += print_type(*j.type);
  return out;
}

std::optional<Judgment> gen_welltyped(const GenConfig& cfg, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  for (int attempt = 0; attempt < 20; ++attempt) {
    Generator gen(cfg, rng);
    Ctx g = gen.context();
    int budget = range(rng, 1, std::max(1, cfg.max_size - attempt));
    Judgment j;
    j.ctx = g;
    j.case_index = index;
    if (coin(rng, 0.6)) {
      j.dir = Direction::Check;
      j.type = gen.type(cfg.type_depth);
      j.expr = gen.check(g, j.type, budget);
    } else {
      j.dir = Direction::Synth;
      j.expr = gen.synth_exact(g, gen.type(cfg.type_depth), budget);
    }
    if (static_cast<int>(expr_size(*j.expr)) > cfg.max_size) continue;
    if (j.dir == Direction::Check) {
      auto d = check(g, j.expr, j.type);
      if (!d) throw std::logic_error("generator produced an ill-typed program: " + describe(j) +
                                     "\n" + d.error().describe());
    } else {
      auto d = synth(g, j.expr);
      if (!d) throw std::logic_error("generator produced an ill-typed program: " +
                                     print_expr(*j.expr) + "\n" + d.error().describe());
      j.type = d.value()->type;
    }
    return j;
  }
  return std::nullopt;
}

// --- precision variation -----------------------------------------------------------------

namespace {

// Calls k with every one-constructor variant of a.
void each_variant(const TypeRef& a, Vary dir, const std::function<void(const TypeRef&)>& k) {
  switch (a->kind) {
    case TypeKind::Unit:
      return;
    case TypeKind::Arrow:
      each_variant(a->left, dir, [&](const TypeRef& l) { k(arrow_type(l, a->right)); });
      each_variant(a->right, dir, [&](const TypeRef& r) { k(arrow_type(a->left, r)); });
      return;
    case TypeKind::Sum:
      for (SumCon c : kAllSumCons) {
        if (c == a->con) continue;
        bool ok = dir == Vary::Loosen ? sum_precision(a->con, c) : sum_precision(c, a->con);
        if (ok) k(sum_type(a->left, c, a->right));
      }
      each_variant(a->left, dir, [&](const TypeRef& l) { k(sum_type(l, a->con, a->right)); });
      each_variant(a->right, dir, [&](const TypeRef& r) { k(sum_type(a->left, a->con, r)); });
      return;
  }
}

void each_expr_variant(const ExprRef& e, Vary dir, const std::function<void(const ExprRef&)>& k) {
  const Expr& x = *e;
  auto with = [&](int slot, const ExprRef& child) {
    auto out = std::make_shared<Expr>(x);
    (slot == 0 ? out->a : slot == 1 ? out->b : out->c) = child;
    return ExprRef(out);
  };
  if (x.kind == ExprKind::Anno)
    each_variant(x.type, dir, [&](const TypeRef& t) { k(e_anno(x.a, t, x.pos)); });
  if (x.a) each_expr_variant(x.a, dir, [&](const ExprRef& c) { k(with(0, c)); });
  if (x.b) each_expr_variant(x.b, dir, [&](const ExprRef& c) { k(with(1, c)); });
  if (x.c) each_expr_variant(x.c, dir, [&](const ExprRef& c) { k(with(2, c)); });
}

}  // namespace

std::vector<TypeRef> vary_type(const TypeRef& a, Vary dir) {
  std::vector<TypeRef> out;
  each_variant(a, dir, [&](const TypeRef& t) { out.push_back(t); });
  return out;
}

std::vector<ExprRef> vary_precision(const ExprRef& e, Vary dir) {
  std::vector<ExprRef> out;
  each_expr_variant(e, dir, [&](const ExprRef& v) { out.push_back(v); });
  return out;
}

std::vector<Ctx> vary_ctx(const Ctx& g, Vary dir) {
  std::vector<Ctx> out;
  auto b = g.bindings();
  for (const auto& [x, t] : b)
    for (const auto& v : vary_type(t, dir)) {
      auto copy = b;
      copy[x] = v;
      out.push_back(Ctx::from(copy));
    }
  return out;
}

// --- dcons oracle ---------------------------------------------------------------------------

namespace {

// Shape key: the type with every sum constructor erased.
std::string shape_key(const Type& t) {
  switch (t.kind) {
    case TypeKind::Unit: return "U";
    case TypeKind::Arrow: return "(" + shape_key(*t.left) + ">" + shape_key(*t.right) + ")";
    case TypeKind::Sum: return "(" + shape_key(*t.left) + "+" + shape_key(*t.right) + ")";
  }
  return "?";
}

}  // namespace

DconsOracle::DconsOracle(const std::vector<TypeRef>& universe) : universe_(universe) {
  const std::size_t n = universe_.size();
  for (std::size_t i = 0; i < n; ++i) index_[print_type(*universe_[i])] = i;
  below_.resize(n);
  cls_.resize(n);
  local_.resize(n);
  up_bits_.resize(n);
  below_bits_.resize(n);
  std::map<std::string, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < n; ++i) classes[shape_key(*universe_[i])].push_back(i);
  std::size_t cid = 0;
  for (const auto& [key, members] : classes) {
    for (std::size_t k = 0; k < members.size(); ++k) {
      cls_[members[k]] = cid;
      local_[members[k]] = k;
    }
    const std::size_t words = (members.size() + 63) / 64;
    for (std::size_t i : members) {
      up_bits_[i].assign(words, 0);
      below_bits_[i].assign(words, 0);
      for (std::size_t k = 0; k < members.size(); ++k) {
        std::size_t j = members[k];
        if (type_precision(*universe_[j], *universe_[i])) {
          below_[i].push_back(j);
          below_bits_[i][k / 64] |= std::uint64_t{1} << (k % 64);
        }
        if (subtype(*universe_[i], *universe_[j])) up_bits_[i][k / 64] |= std::uint64_t{1} << (k % 64);
      }
    }
    ++cid;
  }
}

bool DconsOracle::holds(const TypeRef& a, const TypeRef& b) const {
  auto ia = index_.find(print_type(*a));
  auto ib = index_.find(print_type(*b));
  if (ia == index_.end() || ib == index_.end())
    throw std::invalid_argument("DconsOracle: type outside the universe");
  if (cls_[ia->second] != cls_[ib->second]) return false;
  const auto& target = below_bits_[ib->second];
  // Some A0 below a whose subtyping up-set meets the down-set of b.
  for (std::size_t a0 : below_[ia->second]) {
    const auto& up = up_bits_[a0];
    for (std::size_t w = 0; w < up.size(); ++w)
      if (up[w] & target[w]) return true;
  }
  return false;
}

// --- co-stepping -------------------------------------------------------------------------------

CoStepResult co_step(const TermRef& m1, const TermRef& m2, std::uint64_t budget,
                     int max_catch_up) {
  CoStepResult res;
  if (!term_precision(*m1, *m2)) {
    res.ok = false;
    res.failure = "initial terms are not related by precision";
    return res;
  }
  TermRef left = m1;
  TermRef right = m2;
  std::uint64_t n = 0;
  for (; n < budget; ++n) {
    if (left->kind == TermKind::Matchfail || is_value(*left)) break;
    auto s = step(left);
    if (!s) {
      res.ok = false;
      res.failure = "more precise term is stuck: " + print_target(*left);
      return res;
    }
    TermRef next = s->result;
    TermRef cand = right;
    int j = 0;
    bool found = false;
    for (;; ++j) {
      if (term_precision(*next, *cand)) {
        found = true;
        break;
      }
      if (j >= max_catch_up) break;
      auto r = step(cand);
      if (!r) break;
      cand = r->result;
    }
    if (!found) {
      res.ok = false;
      res.failure = "no reduct of " + print_target(*right) + " is above " + print_target(*next) +
                    " (after " + s->rule + ")";
      return res;
    }
    res.catch_up[j]++;
    left = next;
    right = cand;
  }
  res.left = evaluate(left, budget > n ? budget - n : 0);
  res.left.steps += n;
  res.right = evaluate(right, budget);
  if (res.left.kind == Verdict::Kind::Value) {
    if (res.right.kind != Verdict::Kind::Value) {
      res.ok = false;
      res.failure = "more precise term converges but the less precise one ends in " +
                    std::string(to_string(res.right.kind));
    } else if (res.left.term->kind == TermKind::Inj && res.right.term->kind == TermKind::Inj &&
               res.left.term->index != res.right.term->index) {
      res.ok = false;
      res.failure = "converging injections disagree on the index";
    }
  }
  return res;
}

// --- shrinking ------------------------------------------------------------------------------------

namespace {

void each_replacement(const ExprRef& e, const std::function<void(const ExprRef&)>& k) {
  const Expr& x = *e;
  // Replace this node by one of its descendants.
  std::function<void(const ExprRef&)> descend = [&](const ExprRef& d) {
    for (const ExprRef* c : {&d->a, &d->b, &d->c})
      if (*c) {
        k(*c);
        descend(*c);
      }
  };
  descend(e);
  if (x.kind != ExprKind::Unit) k(e_unit());
  auto with = [&](int slot, const ExprRef& child) {
    auto out = std::make_shared<Expr>(x);
    (slot == 0 ? out->a : slot == 1 ? out->b : out->c) = child;
    return ExprRef(out);
  };
  if (x.a) each_replacement(x.a, [&](const ExprRef& c) { k(with(0, c)); });
  if (x.b) each_replacement(x.b, [&](const ExprRef& c) { k(with(1, c)); });
  if (x.c) each_replacement(x.c, [&](const ExprRef& c) { k(with(2, c)); });
}

}  // namespace

Judgment shrink(const Judgment& j, const std::function<bool(const Judgment&)>& still_fails,
                int max_attempts) {
  Judgment best = j;
  int attempts = 0;
  bool progress = true;
  while (progress && attempts < max_attempts) {
    progress = false;
    std::vector<Judgment> cands;
    for (const auto& [x, t] : best.ctx.bindings()) {
      auto b = best.ctx.bindings();
      b.erase(x);
      Judgment c = best;
      c.ctx = Ctx::from(b);
      cands.push_back(c);
    }
    each_replacement(best.expr, [&](const ExprRef& e) {
      if (expr_size(*e) < expr_size(*best.expr)) {
        Judgment c = best;
        c.expr = e;
        cands.push_back(c);
      }
    });
    for (const auto& c : cands) {
      if (attempts >= max_attempts) break;
      ++attempts;
      bool fails = false;
      try {
        fails = still_fails(c);
      } catch (const std::exception&) {
        fails = false;
      }
      if (fails) {
        best = c;
        progress = true;
        break;
      }
    }
  }
  return best;
}

// --- parallel_for ------------------------------------------------------------------------------------

void parallel_for(std::uint64_t n, unsigned threads, const std::function<void(std::uint64_t)>& fn) {
  if (threads <= 1 || n < 2) {
    for (std::uint64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&, t] {
      for (std::uint64_t i = t; i < n; i += threads) fn(i);
    });
  for (auto& th : pool) th.join();
}

}  // namespace gradsum
