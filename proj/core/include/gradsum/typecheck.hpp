#pragma once

// Bidirectional checking for the full system and for the static and
// dynamic fragments, plus the declarative (type-assignment) derivations
// used to cross-check it: validation, embedding and re-annotation.

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gradsum/outcome.hpp"
#include "gradsum/syntax.hpp"

namespace gradsum {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

enum class ErrorKind {
  NotASubsum,
  NoDcons,
  NotAFunction,
  NeedsAnnotation,
  WrongInjection,
  DoomedOneArmedCase,
  ShapeMismatch,
  UnboundVariable,
  FragmentViolation,
};

std::string_view to_string(ErrorKind k);

struct TypeError {
  ErrorKind kind;
  SourcePos pos;
  std::string message;
  TypeRef expected;  // may be null
  TypeRef actual;    // may be null

  std::string describe() const;
};


// ---------------------------------------------------------------------------
// Bidirectional derivations
// ---------------------------------------------------------------------------

enum class Direction { Check, Synth };

enum class BiRule {
  SynVar,
  ChkCSub,
  SynAnno,
  ChkUnitIntro,
  ChkFunIntro,
  SynFunElim,
  ChkSumIntro,
  ChkSumElimOne,
  ChkSumElimTwo,
};

inline constexpr std::array<BiRule, 9> kAllBiRules = {
    BiRule::SynVar,      BiRule::ChkCSub,     BiRule::SynAnno,
    BiRule::ChkUnitIntro, BiRule::ChkFunIntro, BiRule::SynFunElim,
    BiRule::ChkSumIntro, BiRule::ChkSumElimOne, BiRule::ChkSumElimTwo};

std::string_view to_string(BiRule r);
std::string_view to_string(Direction d);

/// Which rule set a derivation was built in. The fragments reuse the rule
/// names; their side conditions differ (see the checker).
enum class System { Full, Static, Dynamic };

struct BiDerivation;
using BiRef = std::shared_ptr<const BiDerivation>;

// Children per rule:
//   ChkCSub        [synth e]
//   SynAnno        [check inner]
//   ChkFunIntro    [check body]
//   SynFunElim     [synth fn, check arg]
//   ChkSumIntro    [check payload]
//   ChkSumElimOne  [synth scrut, check arm]
//   ChkSumElimTwo  [synth scrut, check arm1, check arm2]
struct BiDerivation {
  BiRule rule;
  System system = System::Full;
  Ctx ctx;
  ExprRef expr;
  Direction dir;
  TypeRef type;
  std::vector<BiRef> children;

  // Side facts. ChkCSub: sub_from ~> type (or <: / = in the fragments).
  // ChkSumIntro: sum_from <= sum_to. Case rules: sum_from => sum_to.
  TypeRef sub_from;
  std::optional<std::pair<SumCon, SumCon>> sum_fact;
};

Outcome<BiRef> check(const Ctx& g, const ExprRef& e, const TypeRef& a);
Outcome<BiRef> synth(const Ctx& g, const ExprRef& e);

Outcome<BiRef> static_check(const Ctx& g, const ExprRef& e, const TypeRef& a);
Outcome<BiRef> static_synth(const Ctx& g, const ExprRef& e);
Outcome<BiRef> dyn_check(const Ctx& g, const ExprRef& e, const TypeRef& a);
Outcome<BiRef> dyn_synth(const Ctx& g, const ExprRef& e);

bool is_static(const Type& a);
bool is_static(const Expr& e);
bool is_static(const Ctx& g);
bool is_dynamic(const Type& a);
bool is_dynamic(const Expr& e);
bool is_dynamic(const Ctx& g);

std::size_t derivation_size(const BiDerivation& d);

/// Re-checks every node of a bidirectional derivation against its rule in
/// the derivation's system. Returns the first offending node's complaint.
std::optional<std::string> validate_bidirectional(const BiDerivation& d);

// ---------------------------------------------------------------------------
// Type-assignment derivations
// ---------------------------------------------------------------------------

enum class TARule {
  SVar,
  SCSub,
  SAnno,
  SUnitIntro,
  SFunIntro,
  SFunElim,
  SSumIntro,
  SSumElimOne,
  SSumElimTwo,
};

inline constexpr std::array<TARule, 9> kAllTARules = {
    TARule::SVar,      TARule::SCSub,    TARule::SAnno,
    TARule::SUnitIntro, TARule::SFunIntro, TARule::SFunElim,
    TARule::SSumIntro, TARule::SSumElimOne, TARule::SSumElimTwo};

std::string_view to_string(TARule r);

struct TADerivation;
using TARef = std::shared_ptr<const TADerivation>;

// Children follow the same order as BiDerivation; SCSub has one child
// concluding the same expression at the source type.
struct TADerivation {
  TARule rule;
  Ctx ctx;
  ExprRef expr;
  TypeRef type;
  std::vector<TARef> children;
};

struct ValidationFailure {
  const TADerivation* node;
  std::string reason;
};

/// nullopt when every node instantiates its rule.
std::optional<ValidationFailure> validate_assignment(const TADerivation& d);

/// Bidirectional derivation -> type-assignment derivation with the same
/// conclusion.
TARef embed(const BiRef& d);

struct Annotated {
  ExprRef expr;
  BiRef derivation;  // synthesizes the input's conclusion type
};

/// Builds an expression that carries extra annotations and synthesizes the
/// derivation's type. Throws std::logic_error if the input was invalid.
Annotated annotate(const TARef& d);

/// e1 ⊴ e2: e2 equals e1 up to extra annotations (only on the right).
bool eq_anno(const Expr& e1, const Expr& e2);

}  // namespace gradsum
