#include "gradsum/parser.hpp"

#include <cctype>
#include <sstream>

namespace gradsum {

namespace {

constexpr int kMaxNesting = 512;

enum class Tok {
  Ident,
  KwFn,
  KwCase,
  KwOf,
  KwInj1,
  KwInj2,
  KwUnit,
  KwMatchfail,
  Sum,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Colon,
  Comma,
  FatArrow,
  Arrow,
  Bar,
  Less,
  Greater,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::End) return "end of input";
  return "'" + t.text + "'";
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space_and_comments();
      SourcePos pos{line_, col_};
      if (i_ >= src_.size()) {
        out.push_back({Tok::End, "", pos});
        return out;
      }
      out.push_back(next(pos));
    }
  }

 private:
  std::string_view src_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;

  char peek(std::size_t k = 0) const { return i_ + k < src_.size() ? src_[i_ + k] : '\0'; }

  void advance() {
    if (src_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  void skip_space_and_comments() {
    while (i_ < src_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '-' && peek(1) == '-') {
        while (i_ < src_.size() && peek() != '\n') advance();
      } else {
        return;
      }
    }
  }

  [[noreturn]] void fail(SourcePos pos, std::string found) {
    throw ParseError(pos, {"token"}, std::move(found));
  }

  Token simple(Tok k, std::size_t len, SourcePos pos) {
    std::string text(src_.substr(i_, len));
    for (std::size_t n = 0; n < len; ++n) advance();
    return {k, std::move(text), pos};
  }

  Token next(SourcePos pos) {
    char c = peek();
    auto uc = static_cast<unsigned char>(c);
    if (std::isalpha(uc) || c == '_') {
      std::size_t start = i_;
      while (i_ < src_.size()) {
        auto d = static_cast<unsigned char>(peek());
        if (!(std::isalnum(d) || d == '_' || d == '\'')) break;
        advance();
      }
      std::string word(src_.substr(start, i_ - start));
      Tok k = Tok::Ident;
      if (word == "fn") k = Tok::KwFn;
      else if (word == "case") k = Tok::KwCase;
      else if (word == "of") k = Tok::KwOf;
      else if (word == "inj1") k = Tok::KwInj1;
      else if (word == "inj2") k = Tok::KwInj2;
      else if (word == "Unit") k = Tok::KwUnit;
      else if (word == "matchfail") k = Tok::KwMatchfail;
      return {k, std::move(word), pos};
    }
    switch (c) {
      case '(': return simple(Tok::LParen, 1, pos);
      case ')': return simple(Tok::RParen, 1, pos);
      case '[': return simple(Tok::LBracket, 1, pos);
      case ']': return simple(Tok::RBracket, 1, pos);
      case ':': return simple(Tok::Colon, 1, pos);
      case ',': return simple(Tok::Comma, 1, pos);
      case '|': return simple(Tok::Bar, 1, pos);
      case '<': return simple(Tok::Less, 1, pos);
      case '>': return simple(Tok::Greater, 1, pos);
      case '=':
        if (peek(1) == '>') return simple(Tok::FatArrow, 2, pos);
        break;
      case '-':
        if (peek(1) == '>') return simple(Tok::Arrow, 2, pos);
        break;
      case '+': {
        std::size_t len = 1;
        char m = peek(1);
        bool marked = m == '?' || m == '*';
        if (marked) ++len;
        char d = peek(len);
        bool digit = d == '1' || d == '2';
        if (digit) ++len;
        if (m == '*' && !digit) fail(pos, "'+*'");
        return simple(Tok::Sum, len, pos);
      }
      default:
        break;
    }
    std::string found = std::isprint(uc) ? std::string("'") + c + "'"
                                         : "byte 0x" + [&] {
                                             std::ostringstream os;
                                             os << std::hex << static_cast<int>(uc);
                                             return os.str();
                                           }();
    fail(pos, found);
  }
};

class Parser {
 public:
  Parser(std::string_view src, bool target) : toks_(Lexer(src).run()), target_(target) {}

  ExprRef whole_expr() {
    auto e = expr();
    expect_end();
    return e;
  }

  TermRef whole_term() {
    auto m = term();
    expect_end();
    return m;
  }

  TypeRef whole_type() {
    auto t = type();
    expect_end();
    return t;
  }

  TargetTypeRef whole_target_type() {
    auto t = target_type();
    expect_end();
    return t;
  }

  Ctx whole_ctx() {
    Ctx g;
    if (at(Tok::End)) return g;
    for (;;) {
      std::string x = ident();
      expect(Tok::Colon, "':'");
      g = g.extend(x, type());
      if (!at(Tok::Comma)) break;
      ++k_;
    }
    expect_end();
    return g;
  }

 private:
  std::vector<Token> toks_;
  std::size_t k_ = 0;
  bool target_;
  int depth_ = 0;

  struct Nest {
    explicit Nest(Parser& p) : p_(p) {
      if (++p_.depth_ > kMaxNesting)
        throw ParseError(p_.cur().pos, {"shallower nesting"}, "nesting deeper than 512");
    }
    ~Nest() { --p_.depth_; }
    Parser& p_;
  };

  const Token& cur() const { return toks_[k_]; }
  bool at(Tok k) const { return cur().kind == k; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw ParseError(cur().pos, std::move(expected), describe(cur()));
  }

  const Token& expect(Tok k, const char* what) {
    if (!at(k)) fail({what});
    return toks_[k_++];
  }

  void expect_end() {
    if (!at(Tok::End)) fail({"end of input"});
  }

  std::string ident() { return expect(Tok::Ident, "identifier").text; }

  Index inj_index() {
    Index i = at(Tok::KwInj1) ? Index::One : Index::Two;
    ++k_;
    return i;
  }

  // --- source expressions ----------------------------------------------------

  ExprRef expr() {
    Nest guard(*this);
    SourcePos pos = cur().pos;
    if (at(Tok::KwFn)) {
      ++k_;
      std::string x = ident();
      expect(Tok::FatArrow, "'=>'");
      return e_lam(std::move(x), expr(), pos);
    }
    if (at(Tok::KwCase)) {
      ++k_;
      auto scrut = expr();
      expect(Tok::KwOf, "'of'");
      if (!at(Tok::KwInj1) && !at(Tok::KwInj2)) fail({"'inj1'", "'inj2'"});
      Index i = inj_index();
      std::string x = ident();
      expect(Tok::FatArrow, "'=>'");
      auto arm = expr();
      if (i == Index::One && at(Tok::Bar)) {
        ++k_;
        expect(Tok::KwInj2, "'inj2'");
        std::string x2 = ident();
        expect(Tok::FatArrow, "'=>'");
        auto arm2 = expr();
        return e_case_two(std::move(scrut), std::move(x), std::move(arm), std::move(x2),
                          std::move(arm2), pos);
      }
      return e_case_one(std::move(scrut), i, std::move(x), std::move(arm), pos);
    }
    return app();
  }

  bool starts_prefix() const {
    switch (cur().kind) {
      case Tok::KwInj1:
      case Tok::KwInj2:
      case Tok::LParen:
      case Tok::Ident:
        return true;
      default:
        return false;
    }
  }

  ExprRef app() {
    SourcePos pos = cur().pos;
    auto head = prefix();
    while (starts_prefix()) head = e_app(std::move(head), prefix(), pos);
    return head;
  }

  ExprRef prefix() {
    Nest guard(*this);
    SourcePos pos = cur().pos;
    if (at(Tok::KwInj1) || at(Tok::KwInj2)) {
      Index i = inj_index();
      return e_inj(i, prefix(), pos);
    }
    return atom();
  }

  ExprRef atom() {
    SourcePos pos = cur().pos;
    if (at(Tok::Ident)) return e_var(toks_[k_++].text, pos);
    if (!at(Tok::LParen)) fail({"'('", "identifier", "'inj1'", "'inj2'"});
    ++k_;
    if (at(Tok::RParen)) {
      ++k_;
      return e_unit(pos);
    }
    auto inner = expr();
    if (at(Tok::Colon)) {
      ++k_;
      auto t = type();
      expect(Tok::RParen, "')'");
      return e_anno(std::move(inner), std::move(t), pos);
    }
    if (!at(Tok::RParen)) fail({"')'", "':'"});
    ++k_;
    return inner;
  }

  // --- source types --------------------------------------------------------

  TypeRef type() {
    Nest guard(*this);
    auto lhs = sum_type_expr();
    if (at(Tok::Arrow)) {
      ++k_;
      return arrow_type(std::move(lhs), type());
    }
    return lhs;
  }

  TypeRef sum_type_expr() {
    auto lhs = type_atom();
    while (at(Tok::Sum)) {
      auto con = sum_con_from_token(cur().text);
      if (!con) fail({"sum constructor"});
      ++k_;
      lhs = sum_type(std::move(lhs), *con, type_atom());
    }
    return lhs;
  }

  TypeRef type_atom() {
    if (at(Tok::KwUnit)) {
      ++k_;
      return unit_type();
    }
    if (!at(Tok::LParen)) fail({"'Unit'", "'('"});
    ++k_;
    auto t = type();
    expect(Tok::RParen, "')'");
    return t;
  }

  // --- target terms ----------------------------------------------------------

  TermRef term() {
    Nest guard(*this);
    if (at(Tok::KwFn)) {
      ++k_;
      expect(Tok::LParen, "'('");
      std::string x = ident();
      expect(Tok::Colon, "':'");
      auto dom = target_type();
      expect(Tok::RParen, "')'");
      expect(Tok::FatArrow, "'=>'");
      return t_lam(std::move(x), std::move(dom), term());
    }
    if (at(Tok::KwCase)) {
      ++k_;
      auto scrut = term();
      expect(Tok::KwOf, "'of'");
      if (!at(Tok::KwInj1) && !at(Tok::KwInj2)) fail({"'inj1'", "'inj2'"});
      Index i = inj_index();
      std::string x = ident();
      expect(Tok::FatArrow, "'=>'");
      auto arm = term();
      if (i == Index::One && at(Tok::Bar)) {
        ++k_;
        expect(Tok::KwInj2, "'inj2'");
        std::string x2 = ident();
        expect(Tok::FatArrow, "'=>'");
        return t_case_two(std::move(scrut), std::move(x), std::move(arm), std::move(x2), term());
      }
      return t_case_one(std::move(scrut), i, std::move(x), std::move(arm));
    }
    auto head = term_prefix();
    while (starts_term_prefix()) head = t_app(std::move(head), term_prefix());
    return head;
  }

  bool starts_term_prefix() const {
    switch (cur().kind) {
      case Tok::KwInj1:
      case Tok::KwInj2:
      case Tok::LParen:
      case Tok::Ident:
      case Tok::Less:
      case Tok::KwMatchfail:
      case Tok::LBracket:
        return true;
      default:
        return false;
    }
  }

  TargetSum target_sum_token() {
    if (!at(Tok::Sum)) fail({"target sum"});
    auto p = target_sum_from_token(cur().text);
    if (!p) fail({"'+'", "'+1'", "'+2'"});
    ++k_;
    return *p;
  }

  TermRef term_prefix() {
    Nest guard(*this);
    if (at(Tok::KwInj1) || at(Tok::KwInj2)) {
      Index i = inj_index();
      return t_inj(i, term_prefix());
    }
    if (at(Tok::Less)) {
      ++k_;
      TargetSum from = target_sum_token();
      expect(Tok::FatArrow, "'=>'");
      TargetSum to = target_sum_token();
      expect(Tok::Greater, "'>'");
      return t_cast(from, to, term_prefix());
    }
    if (at(Tok::KwMatchfail)) {
      ++k_;
      return t_matchfail();
    }
    if (at(Tok::LBracket)) {
      ++k_;
      expect(Tok::RBracket, "']'");
      return t_hole();
    }
    if (at(Tok::Ident)) return t_var(toks_[k_++].text);
    if (!at(Tok::LParen)) fail({"'('", "identifier", "'inj1'", "'inj2'", "'<'", "'matchfail'"});
    ++k_;
    if (at(Tok::RParen)) {
      ++k_;
      return t_unit();
    }
    auto inner = term();
    expect(Tok::RParen, "')'");
    return inner;
  }

  TargetTypeRef target_type() {
    Nest guard(*this);
    auto lhs = target_type_atom();
    while (at(Tok::Sum)) {
      TargetSum p = target_sum_token();
      lhs = t_sum_type(std::move(lhs), p, target_type_atom());
    }
    if (at(Tok::Arrow)) {
      ++k_;
      return t_arrow_type(std::move(lhs), target_type());
    }
    return lhs;
  }

  TargetTypeRef target_type_atom() {
    if (at(Tok::KwUnit)) {
      ++k_;
      return t_unit_type();
    }
    if (!at(Tok::LParen)) fail({"'Unit'", "'('"});
    ++k_;
    auto t = target_type();
    expect(Tok::RParen, "')'");
    return t;
  }
};

std::string format_message(SourcePos pos, const std::vector<std::string>& expected,
                           const std::string& found) {
  std::ostringstream os;
  os << pos.line << ":" << pos.column << ": expected ";
  if (expected.size() > 1) os << "one of ";
  for (std::size_t i = 0; i < expected.size(); ++i) os << (i ? ", " : "") << expected[i];
  os << ", found " << found;
  return os.str();
}

}  // namespace

ParseError::ParseError(SourcePos pos, std::vector<std::string> expected, std::string found)
    : std::runtime_error(format_message(pos, expected, found)),
      pos_(pos),
      expected_(std::move(expected)),
      found_(std::move(found)) {}

ExprRef parse_expr(std::string_view text) { return Parser(text, false).whole_expr(); }
TypeRef parse_type(std::string_view text) { return Parser(text, false).whole_type(); }
Ctx parse_ctx(std::string_view text) { return Parser(text, false).whole_ctx(); }
TermRef parse_target(std::string_view text) { return Parser(text, true).whole_term(); }
TargetTypeRef parse_target_type(std::string_view text) {
  return Parser(text, true).whole_target_type();
}

}  // namespace gradsum
