#pragma once

// Abstract syntax for the source language (gradual sums) and the target
// cast calculus. Trees are immutable and shared through shared_ptr<const>.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gradsum {

struct SourcePos {
  int line = 0;
  int column = 0;

  bool known() const { return line > 0; }
};

enum class Index : std::uint8_t { One = 1, Two = 2 };

constexpr int to_int(Index i) { return static_cast<int>(i); }
constexpr Index other(Index i) { return i == Index::One ? Index::Two : Index::One; }
constexpr std::array<Index, 2> kIndices = {Index::One, Index::Two};

// ---------------------------------------------------------------------------
// Sum constructors
// ---------------------------------------------------------------------------

enum class SumCon : std::uint8_t {
  Plus,       // +
  Plus1,      // +1
  Plus2,      // +2
  PlusQ,      // +?
  PlusQ1,     // +?1
  PlusQ2,     // +?2
  PlusStar1,  // +*1
  PlusStar2,  // +*2
};

inline constexpr std::size_t kSumConCount = 8;
inline constexpr std::array<SumCon, kSumConCount> kAllSumCons = {
    SumCon::Plus,   SumCon::Plus1,  SumCon::Plus2,     SumCon::PlusQ,
    SumCon::PlusQ1, SumCon::PlusQ2, SumCon::PlusStar1, SumCon::PlusStar2};

constexpr std::size_t ordinal(SumCon d) { return static_cast<std::size_t>(d); }

/// +i, +?i and +*i for a given injection index.
constexpr SumCon subscript_sum(Index i) { return i == Index::One ? SumCon::Plus1 : SumCon::Plus2; }
constexpr SumCon innate_sum(Index i) { return i == Index::One ? SumCon::PlusQ1 : SumCon::PlusQ2; }
constexpr SumCon star_sum(Index i) { return i == Index::One ? SumCon::PlusStar1 : SumCon::PlusStar2; }

std::string_view to_string(SumCon d);
std::optional<SumCon> sum_con_from_token(std::string_view tok);

enum class TargetSum : std::uint8_t { Plus, Plus1, Plus2 };

inline constexpr std::array<TargetSum, 3> kAllTargetSums = {TargetSum::Plus, TargetSum::Plus1,
                                                           TargetSum::Plus2};

constexpr std::size_t ordinal(TargetSum p) { return static_cast<std::size_t>(p); }
constexpr TargetSum target_subscript(Index i) {
  return i == Index::One ? TargetSum::Plus1 : TargetSum::Plus2;
}

std::string_view to_string(TargetSum p);
std::optional<TargetSum> target_sum_from_token(std::string_view tok);

// ---------------------------------------------------------------------------
// Source types
// ---------------------------------------------------------------------------

struct Type;
using TypeRef = std::shared_ptr<const Type>;

enum class TypeKind : std::uint8_t { Unit, Sum, Arrow };

struct Type {
  TypeKind kind = TypeKind::Unit;
  SumCon con = SumCon::Plus;  // Sum only
  TypeRef left;               // Sum: left component; Arrow: domain
  TypeRef right;              // Sum: right component; Arrow: codomain

  bool is_unit() const { return kind == TypeKind::Unit; }
  bool is_sum() const { return kind == TypeKind::Sum; }
  bool is_arrow() const { return kind == TypeKind::Arrow; }
  const TypeRef& component(Index i) const { return i == Index::One ? left : right; }
};

TypeRef unit_type();
TypeRef sum_type(TypeRef left, SumCon con, TypeRef right);
TypeRef arrow_type(TypeRef dom, TypeRef cod);

bool operator==(const Type& a, const Type& b);
bool type_equal(const TypeRef& a, const TypeRef& b);
bool same_shape(const Type& a, const Type& b);
int type_depth(const Type& t);

// ---------------------------------------------------------------------------
// Source expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprRef = std::shared_ptr<const Expr>;

enum class ExprKind : std::uint8_t { Unit, Var, Lam, App, Inj, Anno, CaseTwo, CaseOne };

// Field use per kind:
//   Var      name
//   Lam      name (binder), a (body)
//   App      a (function), b (argument)
//   Inj      index, a (payload)
//   Anno     a (inner), type
//   CaseTwo  a (scrutinee), name/b (x1 => arm1), name2/c (x2 => arm2)
//   CaseOne  a (scrutinee), index, name/b (x => arm)
struct Expr {
  ExprKind kind = ExprKind::Unit;
  SourcePos pos;
  Index index = Index::One;
  std::string name;
  std::string name2;
  ExprRef a, b, c;
  TypeRef type;
};

ExprRef e_unit(SourcePos pos = {});
ExprRef e_var(std::string name, SourcePos pos = {});
ExprRef e_lam(std::string bound, ExprRef body, SourcePos pos = {});
ExprRef e_app(ExprRef fn, ExprRef arg, SourcePos pos = {});
ExprRef e_inj(Index i, ExprRef payload, SourcePos pos = {});
ExprRef e_anno(ExprRef inner, TypeRef type, SourcePos pos = {});
ExprRef e_case_two(ExprRef scrut, std::string x1, ExprRef arm1, std::string x2, ExprRef arm2,
                   SourcePos pos = {});
ExprRef e_case_one(ExprRef scrut, Index i, std::string x, ExprRef arm, SourcePos pos = {});

/// Number of expression nodes; annotations count one node, their types none.
std::size_t expr_size(const Expr& e);

/// Alpha-equivalence; types inside annotations are compared structurally.
bool alpha_equal(const Expr& a, const Expr& b);

std::vector<std::string> free_vars(const Expr& e);

// ---------------------------------------------------------------------------
// Contexts: persistent association lists, innermost binding wins.
// ---------------------------------------------------------------------------

template <class T>
class Env {
 public:
  Env() = default;

  Env extend(std::string name, T value) const {
    Env out;
    out.head_ = std::make_shared<const Node>(Node{std::move(name), std::move(value), head_});
    return out;
  }

  const T* lookup(std::string_view name) const {
    for (const Node* n = head_.get(); n != nullptr; n = n->next.get())
      if (n->name == name) return &n->value;
    return nullptr;
  }

  bool empty() const { return head_ == nullptr; }

  /// Visible bindings, shadowed entries removed, ordered by name.
  std::map<std::string, T> bindings() const {
    std::map<std::string, T> out;
    for (const Node* n = head_.get(); n != nullptr; n = n->next.get())
      out.emplace(n->name, n->value);
    return out;
  }

  static Env from(const std::map<std::string, T>& m) {
    Env out;
    for (const auto& [k, v] : m) out = out.extend(k, v);
    return out;
  }

 private:
  struct Node {
    std::string name;
    T value;
    std::shared_ptr<const Node> next;
  };
  std::shared_ptr<const Node> head_;
};

using Ctx = Env<TypeRef>;

// ---------------------------------------------------------------------------
// Target types and terms
// ---------------------------------------------------------------------------

struct TargetType;
using TargetTypeRef = std::shared_ptr<const TargetType>;

// Bottom is internal to the principal-type algorithm: it types matchfail
// and fills sum components that a term leaves unconstrained.
enum class TargetTypeKind : std::uint8_t { Unit, Sum, Arrow, Bottom };

struct TargetType {
  TargetTypeKind kind = TargetTypeKind::Unit;
  TargetSum con = TargetSum::Plus;
  TargetTypeRef left, right;

  bool is_unit() const { return kind == TargetTypeKind::Unit; }
  bool is_sum() const { return kind == TargetTypeKind::Sum; }
  bool is_arrow() const { return kind == TargetTypeKind::Arrow; }
  bool is_bottom() const { return kind == TargetTypeKind::Bottom; }
  const TargetTypeRef& component(Index i) const { return i == Index::One ? left : right; }
};

TargetTypeRef t_unit_type();
TargetTypeRef t_bottom();
TargetTypeRef t_sum_type(TargetTypeRef left, TargetSum con, TargetTypeRef right);
TargetTypeRef t_arrow_type(TargetTypeRef dom, TargetTypeRef cod);

bool operator==(const TargetType& a, const TargetType& b);
bool target_type_equal(const TargetTypeRef& a, const TargetTypeRef& b);
bool contains_bottom(const TargetType& t);
/// Replaces every Bottom with Unit; used for display only.
TargetTypeRef default_free_components(const TargetTypeRef& t);

struct TargetTerm;
using TermRef = std::shared_ptr<const TargetTerm>;

enum class TermKind : std::uint8_t {
  Unit, Var, Lam, App, Inj, CaseTwo, CaseOne, Cast, Matchfail, Hole
};

// Same field layout as Expr. Lam stores its domain in `dom` (not evaluated);
// Cast uses from/to and a (inner).
struct TargetTerm {
  TermKind kind = TermKind::Unit;
  Index index = Index::One;
  std::string name;
  std::string name2;
  TermRef a, b, c;
  TargetTypeRef dom;
  TargetSum from = TargetSum::Plus;
  TargetSum to = TargetSum::Plus;
};

TermRef t_unit();
TermRef t_var(std::string name);
TermRef t_lam(std::string bound, TargetTypeRef dom, TermRef body);
TermRef t_app(TermRef fn, TermRef arg);
TermRef t_inj(Index i, TermRef payload);
TermRef t_case_two(TermRef scrut, std::string x1, TermRef arm1, std::string x2, TermRef arm2);
TermRef t_case_one(TermRef scrut, Index i, std::string x, TermRef arm);
TermRef t_cast(TargetSum from, TargetSum to, TermRef inner);
TermRef t_matchfail();
TermRef t_hole();

std::size_t term_size(const TargetTerm& m);
bool alpha_equal(const TargetTerm& a, const TargetTerm& b);
std::vector<std::string> free_vars(const TargetTerm& m);
std::size_t count_holes(const TargetTerm& m);

using TargetCtx = Env<TargetTypeRef>;

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

/// Capture-avoiding [value/x]body; binders are freshened on clash.
TermRef substitute(const TermRef& body, const std::string& x, const TermRef& value);

/// A name not in `avoid`, derived from `base` by a primed numeric suffix.
std::string fresh_name(const std::string& base, const std::vector<std::string>& avoid);

bool is_reserved_word(std::string_view ident);

}  // namespace gradsum
