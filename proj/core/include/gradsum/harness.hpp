#pragma once

// Program enumeration and generation, brute-force oracles and the
// property suites that exercise the checker, translation and evaluator.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gradsum/syntax.hpp"
#include "gradsum/target.hpp"
#include "gradsum/typecheck.hpp"

namespace gradsum {

// ---------------------------------------------------------------------------
// Universes and enumeration
// ---------------------------------------------------------------------------

/// All types of depth <= d over Unit, in a fixed order.
std::vector<TypeRef> enum_types(int depth);
/// |U(d)| computed from the recurrence, for cross-checking enum_types.
std::uint64_t type_universe_size(int depth);

struct EnumConfig {
  /// Types allowed in annotations.
  std::vector<TypeRef> annotation_types;
  /// Free variables available at the root (in addition to binders).
  std::vector<std::string> free_vars;
};

/// Calls `out` on every expression of exactly `size` nodes. Binders are
/// named by depth (x0, x1, ...) so the stream is duplicate-free up to alpha.
/// Returning false from `out` stops the enumeration early.
void enum_exprs(const EnumConfig& cfg, int size, const std::function<bool(const ExprRef&)>& out);

/// Number of expressions enum_exprs would produce, by dynamic programming
/// over the grammar.
std::uint64_t count_exprs(std::size_t annotation_types, std::size_t free_vars, int size);

// ---------------------------------------------------------------------------
// Random well-typed generation
// ---------------------------------------------------------------------------

enum class Fragment { Full, Static, Dynamic };

struct GenConfig {
  std::uint64_t seed = 1;
  int max_size = 25;
  int type_depth = 2;
  /// Maximum number of variables in a generated context (0 = closed only).
  int max_ctx_vars = 2;
  /// Probability of preferring a subsumption-based form when checking.
  double annotation_density = 0.35;
  Fragment fragment = Fragment::Full;
};

struct Judgment {
  Ctx ctx;
  ExprRef expr;
  TypeRef type;  // for Synth judgments: the synthesized type
  Direction dir = Direction::Check;
  std::uint64_t case_index = 0;
};

std::string describe(const Judgment& j);

/// One random type whose sums come from the fragment's constructors.
TypeRef random_type(std::mt19937_64& rng, int depth, Fragment frag);

/// The `index`-th program of the seeded stream; every result type-checks.
/// Returns nullopt on the rare retries exhausted.
std::optional<Judgment> gen_welltyped(const GenConfig& cfg, std::uint64_t index);

// ---------------------------------------------------------------------------
// Precision variation
// ---------------------------------------------------------------------------

enum class Vary { Loosen, Tighten };

/// Every type obtained by replacing one sum constructor occurrence with a
/// strictly less precise (Loosen) or strictly more precise (Tighten) one.
std::vector<TypeRef> vary_type(const TypeRef& a, Vary dir);
/// Same, applied to one annotation of the expression at a time.
std::vector<ExprRef> vary_precision(const ExprRef& e, Vary dir);
std::vector<Ctx> vary_ctx(const Ctx& g, Vary dir);

/// Existential search for middle types: some A0 ⊑ a and B0 ⊑ b with
/// A0 <: B0. Only same-shaped pairs are meaningful.
class DconsOracle {
 public:
  explicit DconsOracle(const std::vector<TypeRef>& universe);
  bool holds(const TypeRef& a, const TypeRef& b) const;

 private:
  std::vector<TypeRef> universe_;
  std::map<std::string, std::size_t> index_;
  std::vector<std::size_t> cls_;                 // shape class of each type
  std::vector<std::size_t> local_;               // position within its class
  std::vector<std::vector<std::size_t>> below_;  // down-sets under precision
  // Bitsets over a class: members above by subtyping / below by precision.
  std::vector<std::vector<std::uint64_t>> up_bits_, below_bits_;
};

// ---------------------------------------------------------------------------
// Co-stepping
// ---------------------------------------------------------------------------

struct CoStepResult {
  bool ok = true;
  std::string failure;
  /// Histogram of how many steps the less precise side needed per step of
  /// the more precise side.
  std::map<int, std::uint64_t> catch_up;
  Verdict left, right;
};

/// Walks m1 (more precise) step by step and checks each successor stays
/// below some reduct of m2 reachable in at most `max_catch_up` steps.
CoStepResult co_step(const TermRef& m1, const TermRef& m2, std::uint64_t budget,
                     int max_catch_up = 64);

// ---------------------------------------------------------------------------
// Shrinking
// ---------------------------------------------------------------------------

/// Structural shrinking: repeatedly replaces subexpressions by smaller ones
/// (their own subterms or minimal terms of the same type) while
/// `still_fails` holds. At most `max_attempts` candidates are tried.
Judgment shrink(const Judgment& j, const std::function<bool(const Judgment&)>& still_fails,
                int max_attempts = 1000);

// ---------------------------------------------------------------------------
// Suites
// ---------------------------------------------------------------------------

struct SuiteConfig {
  GenConfig gen;
  /// Random programs to draw.
  std::uint64_t count = 10000;
  /// Exhaustive enumeration of closed expressions up to this size (0 = off).
  int enum_size = 7;
  /// Type depth for the relation oracles.
  int oracle_depth = 2;
  std::uint64_t eval_budget = 1000000;
  /// Worker threads; results are merged by case index.
  unsigned threads = 1;
};

struct Failure {
  std::string property;
  std::uint64_t case_index = 0;
  std::string program;  // shrunk counterexample
  std::string detail;
};

struct SuiteReport {
  std::string name;
  std::uint64_t cases = 0;
  std::vector<Failure> failures;
  /// Per-property case counts.
  std::map<std::string, std::uint64_t> checks;
  /// Rule name -> times fired.
  std::map<std::string, std::uint64_t> coverage;
  /// Free-form counters (histograms and the like).
  std::map<std::string, std::uint64_t> stats;
  double seconds = 0;

  bool passed() const { return failures.empty(); }
  /// Plain-text report; wall time is on the last line only.
  std::string text() const;
  std::string json() const;
};

const std::vector<std::string>& suite_names();

/// Throws std::invalid_argument for unknown names.
SuiteReport run_suite(const std::string& name, const SuiteConfig& cfg);

/// Every rule that the default corpus is expected to fire, per rule family.
std::vector<std::string> all_bidirectional_rules();
std::vector<std::string> all_assignment_rules();
std::vector<std::string> all_target_typing_rules();
std::vector<std::string> all_reduction_rules();

/// Rule names used in typing a target term (TUnitIntro, ..., TSub).
void target_typing_rules(const TargetCtx& th, const TermRef& m,
                         std::map<std::string, std::uint64_t>& out);

/// Runs fn(i) for i in [0, n) on `threads` workers.
void parallel_for(std::uint64_t n, unsigned threads, const std::function<void(std::uint64_t)>& fn);

}  // namespace gradsum
