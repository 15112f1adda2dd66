#include "gradsum/printer.hpp"

namespace gradsum {

namespace {

// Precedence levels shared by both languages.
//   Top:    anything, including fn/case that extend to the right
//   App:    application spine and below
//   Prefix: inj / cast / atoms
enum class Level { Top, App, Prefix };

// Types: Arrow is the loosest, then left-nested sums, then atoms.
enum class TLevel { Arrow, Sum, Atom };

template <class T>
void type_out(std::string& out, const T& t, TLevel lv) {
  bool arrow = t.kind == decltype(t.kind)::Arrow;
  bool sum = t.kind == decltype(t.kind)::Sum;
  bool paren = (arrow && lv != TLevel::Arrow) || (sum && lv == TLevel::Atom);
  if (paren) out += '(';
  if (arrow) {
    type_out(out, *t.left, TLevel::Sum);
    out += " -> ";
    type_out(out, *t.right, TLevel::Arrow);
  } else if (sum) {
    type_out(out, *t.left, TLevel::Sum);
    out += ' ';
    out += to_string(t.con);
    out += ' ';
    type_out(out, *t.right, TLevel::Atom);
  } else if (t.kind == decltype(t.kind)::Unit) {
    out += "Unit";
  } else {
    out += "Bot";
  }
  if (paren) out += ')';
}

const char* inj_word(Index i) { return i == Index::One ? "inj1 " : "inj2 "; }

// Lambdas and cases swallow everything to their right.
template <class Node>
bool open_right(const Node& n) {
  using K = decltype(n.kind);
  return n.kind == K::Lam || n.kind == K::CaseTwo || n.kind == K::CaseOne;
}

void expr_out(std::string& out, const Expr& e, Level lv) {
  switch (e.kind) {
    case ExprKind::Unit:
      out += "()";
      return;
    case ExprKind::Var:
      out += e.name;
      return;
    case ExprKind::Anno:
      out += '(';
      expr_out(out, *e.a, Level::Top);
      out += " : ";
      type_out(out, *e.type, TLevel::Arrow);
      out += ')';
      return;
    case ExprKind::Inj:
      out += inj_word(e.index);
      expr_out(out, *e.a, Level::Prefix);
      return;
    case ExprKind::App: {
      bool paren = lv == Level::Prefix;
      if (paren) out += '(';
      expr_out(out, *e.a, Level::App);
      out += ' ';
      expr_out(out, *e.b, Level::Prefix);
      if (paren) out += ')';
      return;
    }
    case ExprKind::Lam:
    case ExprKind::CaseTwo:
    case ExprKind::CaseOne:
      break;
  }
  bool paren = lv != Level::Top;
  if (paren) out += '(';
  if (e.kind == ExprKind::Lam) {
    out += "fn " + e.name + " => ";
    expr_out(out, *e.a, Level::Top);
  } else {
    out += "case ";
    expr_out(out, *e.a, Level::Top);
    out += " of ";
    if (e.kind == ExprKind::CaseOne) {
      out += inj_word(e.index) + e.name + " => ";
      expr_out(out, *e.b, Level::Top);
    } else {
      out += "inj1 " + e.name + " => ";
      bool guard = open_right(*e.b);
      if (guard) out += '(';
      expr_out(out, *e.b, Level::Top);
      if (guard) out += ')';
      out += " | inj2 " + e.name2 + " => ";
      expr_out(out, *e.c, Level::Top);
    }
  }
  if (paren) out += ')';
}

void term_out(std::string& out, const TargetTerm& m, Level lv) {
  switch (m.kind) {
    case TermKind::Unit:
      out += "()";
      return;
    case TermKind::Var:
      out += m.name;
      return;
    case TermKind::Matchfail:
      out += "matchfail";
      return;
    case TermKind::Hole:
      out += "[]";
      return;
    case TermKind::Inj:
      out += inj_word(m.index);
      term_out(out, *m.a, Level::Prefix);
      return;
    case TermKind::Cast:
      out += '<';
      out += to_string(m.from);
      out += " => ";
      out += to_string(m.to);
      out += ">(";
      term_out(out, *m.a, Level::Top);
      out += ')';
      return;
    case TermKind::App: {
      bool paren = lv == Level::Prefix;
      if (paren) out += '(';
      term_out(out, *m.a, Level::App);
      out += ' ';
      term_out(out, *m.b, Level::Prefix);
      if (paren) out += ')';
      return;
    }
    case TermKind::Lam:
    case TermKind::CaseTwo:
    case TermKind::CaseOne:
      break;
  }
  bool paren = lv != Level::Top;
  if (paren) out += '(';
  if (m.kind == TermKind::Lam) {
    out += "fn (" + m.name + " : ";
    type_out(out, *m.dom, TLevel::Arrow);
    out += ") => ";
    term_out(out, *m.a, Level::Top);
  } else {
    out += "case ";
    term_out(out, *m.a, Level::Top);
    out += " of ";
    if (m.kind == TermKind::CaseOne) {
      out += inj_word(m.index) + m.name + " => ";
      term_out(out, *m.b, Level::Top);
    } else {
      out += "inj1 " + m.name + " => ";
      bool guard = open_right(*m.b);
      if (guard) out += '(';
      term_out(out, *m.b, Level::Top);
      if (guard) out += ')';
      out += " | inj2 " + m.name2 + " => ";
      term_out(out, *m.c, Level::Top);
    }
  }
  if (paren) out += ')';
}

}  // namespace

std::string print_type(const Type& t) {
  std::string out;
  type_out(out, t, TLevel::Arrow);
  return out;
}

std::string print_expr(const Expr& e) {
  std::string out;
  expr_out(out, e, Level::Top);
  return out;
}

std::string print_ctx(const Ctx& g) {
  std::string out;
  for (const auto& [x, a] : g.bindings()) {
    if (!out.empty()) out += ", ";
    out += x + " : " + print_type(*a);
  }
  return out;
}

std::string print_target_type(const TargetType& t) {
  std::string out;
  type_out(out, t, TLevel::Arrow);
  return out;
}

std::string print_target(const TargetTerm& m) {
  std::string out;
  term_out(out, m, Level::Top);
  return out;
}

}  // namespace gradsum
