#pragma once

// Cast calculus: principal typing, small-step evaluation and term precision.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gradsum/outcome.hpp"
#include "gradsum/syntax.hpp"

namespace gradsum {

// ---------------------------------------------------------------------------
// Typing
// ---------------------------------------------------------------------------

struct TargetTypeError {
  std::string reason;
  TermRef node;

  std::string describe() const;
};

/// Principal type: ⊢ M : T holds exactly when the result is below T.
/// matchfail and unconstrained sum components get Bottom.
Outcome<TargetTypeRef, TargetTypeError> target_typecheck(const TargetCtx& th, const TermRef& m);

/// Least upper bound, or nullopt when none exists.
std::optional<TargetTypeRef> target_join(const TargetTypeRef& a, const TargetTypeRef& b);
/// Greatest lower bound; Bottom when the types share no other lower bound.
TargetTypeRef target_meet(const TargetTypeRef& a, const TargetTypeRef& b);

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

enum class ReduceRule {
  Upcast,
  CastSuccess,
  CastFailure,
  CaseOne,
  CaseTwo,
  Beta,
};

std::string_view to_string(ReduceRule r);

struct Reduction {
  TermRef result;
  ReduceRule rule;
};

/// Contracts a redex; nullopt if `m` is not one.
std::optional<Reduction> reduce(const TermRef& m);

bool is_value(const TargetTerm& m);
bool is_cast_free(const TargetTerm& m);
bool is_matchfail_free(const TargetTerm& m);

/// An evaluation context is a term whose single hole sits in evaluation
/// position.
struct Decomposition {
  enum class Kind { Value, Matchfail, Redex, MatchfailInContext, Stuck };
  Kind kind;
  TermRef context;  // Redex / MatchfailInContext
  TermRef focus;    // the redex, or the stuck subterm
};

Decomposition decompose(const TermRef& m);
/// Replaces the hole of an evaluation context (no binders on the path).
TermRef plug(const TermRef& context, const TermRef& m);

/// Rule names in traces: the reduction names above plus "StepMatchfail".
struct Step {
  TermRef result;
  std::string rule;
};

std::optional<Step> step(const TermRef& m);

struct Verdict {
  enum class Kind { Value, Matchfail, BudgetExceeded, Stuck };
  Kind kind;
  TermRef term;  // final term
  std::uint64_t steps = 0;
};

std::string_view to_string(Verdict::Kind k);

using StepTrace = std::vector<std::pair<TermRef, std::string>>;

/// Steps until a value, matchfail, a stuck term or the budget runs out.
/// When `trace` is given it receives (m, "start") and then each
/// (term, rule that produced it). Free variables count as values.
Verdict evaluate(const TermRef& m, std::uint64_t budget, StepTrace* trace = nullptr);

// ---------------------------------------------------------------------------
// Precision
// ---------------------------------------------------------------------------

bool term_precision(const TargetTerm& m1, const TargetTerm& m2);

}  // namespace gradsum
