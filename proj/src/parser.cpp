#include "llbc/parser.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace llbc {

namespace {

enum class Tok {
  LParen, RParen, LBrace, RBrace, Comma, Semi,
  Star, Hash, Amp, Plus, Lolli, At, Bang, Query, Caret, Underscore, Dot,
  Ident, Number, Txn, Choose, Inl, Inr, End,
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::Comma: return "','";
    case Tok::Semi: return "';'";
    case Tok::Star: return "'*'";
    case Tok::Hash: return "'#'";
    case Tok::Amp: return "'&'";
    case Tok::Plus: return "'+'";
    case Tok::Lolli: return "'-o'";
    case Tok::At: return "'@'";
    case Tok::Bang: return "'!'";
    case Tok::Query: return "'?'";
    case Tok::Caret: return "'^'";
    case Tok::Underscore: return "'_'";
    case Tok::Dot: return "'.'";
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::Txn: return "'txn'";
    case Tok::Choose: return "'choose'";
    case Tok::Inl: return "'inl'";
    case Tok::Inr: return "'inr'";
    case Tok::End: return "end of input";
  }
  return "?";
}

struct Token {
  Tok kind;
  std::string text;
  std::vector<Side> path;
  SourceSpan span;
};

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      SourceSpan span{pos_, pos_, line_, col_};
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, {}, {}, span});
        return out;
      }
      char c = text_[pos_];
      Token tok{Tok::End, {}, {}, span};
      if (ident_char(c)) {
        std::size_t b = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
        tok.text = std::string(text_.substr(b, pos_ - b));
        bool digits = std::all_of(tok.text.begin(), tok.text.end(), [](char ch) {
          return std::isdigit(static_cast<unsigned char>(ch));
        });
        if (tok.text == "_") tok.kind = Tok::Underscore;
        else if (digits) tok.kind = Tok::Number;
        else if (tok.text == "txn") tok.kind = Tok::Txn;
        else if (tok.text == "choose") tok.kind = Tok::Choose;
        else if (tok.text == "inl") tok.kind = Tok::Inl;
        else if (tok.text == "inr") tok.kind = Tok::Inr;
        else {
          tok.kind = Tok::Ident;
          // freshness path: `.l` / `.r` glued to the name
          while (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
                 (text_[pos_ + 1] == 'l' || text_[pos_ + 1] == 'r') &&
                 (pos_ + 2 >= text_.size() || !ident_char(text_[pos_ + 2]))) {
            tok.path.push_back(text_[pos_ + 1] == 'l' ? Side::Left
                                                      : Side::Right);
            advance();
            advance();
          }
        }
      } else if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'o') {
        advance();
        advance();
        tok.kind = Tok::Lolli;
      } else {
        switch (c) {
          case '(': tok.kind = Tok::LParen; break;
          case ')': tok.kind = Tok::RParen; break;
          case '{': tok.kind = Tok::LBrace; break;
          case '}': tok.kind = Tok::RBrace; break;
          case ',': tok.kind = Tok::Comma; break;
          case ';': tok.kind = Tok::Semi; break;
          case '*': tok.kind = Tok::Star; break;
          case '#': tok.kind = Tok::Hash; break;
          case '&': tok.kind = Tok::Amp; break;
          case '+': tok.kind = Tok::Plus; break;
          case '@': tok.kind = Tok::At; break;
          case '!': tok.kind = Tok::Bang; break;
          case '?': tok.kind = Tok::Query; break;
          case '^': tok.kind = Tok::Caret; break;
          case '.': tok.kind = Tok::Dot; break;
          default: {
            span.end = pos_ + 1;
            throw ParseError(std::string("unexpected character '") + c + "'",
                             span);
          }
        }
        advance();
      }
      tok.span.end = pos_;
      out.push_back(std::move(tok));
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
  return {a.begin, b.end, a.line, a.column};
}

class Parser {
 public:
  Parser(std::string_view text, const UnitRegistry& units, ParseOptions opts)
      : toks_(Lexer(text).run()), units_(units), opts_(opts) {}

  Program whole_program() {
    Program p = program();
    expect(Tok::End);
    return p;
  }

  Expression whole_expression() {
    Expression e = expression();
    expect(Tok::End);
    return e;
  }

  LinearType whole_type() {
    LinearType t = type();
    expect(Tok::End);
    return t;
  }

  std::vector<LinearType> type_list() {
    std::vector<LinearType> out;
    if (at(Tok::End)) return out;
    out.push_back(type());
    while (accept(Tok::Comma)) out.push_back(type());
    expect(Tok::End);
    return out;
  }

 private:
  const Token& peek() const { return toks_[i_]; }
  bool at(Tok k) const { return toks_[i_].kind == k; }

  bool accept(Tok k) {
    if (!at(k)) return false;
    ++i_;
    return true;
  }

  [[noreturn]] void fail(std::vector<Tok> expected) const {
    std::vector<std::string> names;
    for (Tok t : expected) names.push_back(describe(t));
    std::ostringstream msg;
    msg << "expected ";
    for (std::size_t k = 0; k < names.size(); ++k)
      msg << (k == 0 ? "" : k + 1 == names.size() ? " or " : ", ") << names[k];
    msg << ", found " << describe(peek().kind);
    if (!peek().text.empty()) msg << " '" << peek().text << "'";
    throw ParseError(msg.str(), peek().span, std::move(names));
  }

  const Token& expect(Tok k) {
    if (!at(k)) fail({k});
    return toks_[i_++];
  }

  // program := '(' [expr {',' expr}] ')' '{' [txn {';' txn}] [';'] '}'
  Program program() {
    Program p;
    SourceSpan start = expect(Tok::LParen).span;
    if (!at(Tok::RParen)) {
      p.interface.push_back(expression());
      while (accept(Tok::Comma)) p.interface.push_back(expression());
    }
    expect(Tok::RParen);
    expect(Tok::LBrace);
    if (!at(Tok::RBrace)) {
      p.pending.push_back(transaction());
      while (accept(Tok::Semi)) {
        if (at(Tok::RBrace)) break;
        p.pending.push_back(transaction());
      }
    }
    if (!at(Tok::RBrace)) fail({Tok::Semi, Tok::RBrace});
    p.span = join(start, expect(Tok::RBrace).span);
    return p;
  }

  Transaction transaction() {
    SourceSpan start = peek().span;
    expect(Tok::Txn);
    expect(Tok::LParen);
    Expression l = expression();
    expect(Tok::Comma);
    Expression r = expression();
    SourceSpan end = expect(Tok::RParen).span;
    return {l, r, join(start, end)};
  }

  // expr := contr ['-o' expr]
  Expression expression() {
    Expression lhs = contraction();
    if (!at(Tok::Lolli)) return lhs;
    SourceSpan op = peek().span;
    ++i_;
    Expression rhs = expression();
    try {
      return desugar_obligation(lhs, rhs);
    } catch (const DualityError& err) {
      throw ParseError(std::string("left side of -o: ") + err.what(),
                       err.span().end > 0 ? err.span() : op);
    }
  }

  Expression contraction() {
    Expression e = connection();
    while (at(Tok::At)) {
      ++i_;
      Expression r = connection();
      e = Expression::contract(e, r, join(e.span(), r.span()));
    }
    return e;
  }

  Expression connection() {
    Expression e = isolation();
    while (at(Tok::Hash)) {
      ++i_;
      Expression r = isolation();
      e = Expression::conn(e, r, join(e.span(), r.span()));
    }
    return e;
  }

  Expression isolation() {
    Expression e = prefix();
    while (at(Tok::Star)) {
      ++i_;
      Expression r = prefix();
      e = Expression::iso(e, r, join(e.span(), r.span()));
    }
    return e;
  }

  Expression prefix() {
    if (at(Tok::Query)) {
      SourceSpan start = peek().span;
      ++i_;
      Expression body = prefix();
      return Expression::store(body, join(start, body.span()));
    }
    return postfix();
  }

  Expression postfix() {
    Expression e = primary();
    while (at(Tok::Caret)) {
      SourceSpan op = peek().span;
      ++i_;
      try {
        e = dualize(e);
      } catch (const DualityError& err) {
        throw ParseError(err.what(), op);
      }
    }
    return e;
  }

  Address address_token() {
    const Token& t = expect(Tok::Ident);
    if (units_.contains(t.text))
      throw ParseError("'" + t.text + "' is a currency unit, not an address",
                       t.span);
    if (!t.path.empty() && !opts_.allow_fresh_paths)
      throw ParseError("freshness paths are not allowed in source", t.span);
    return Address(t.text, t.path);
  }

  std::vector<Address> bound_list() {
    std::vector<Address> out;
    expect(Tok::LParen);
    if (!at(Tok::RParen)) {
      SourceSpan s = peek().span;
      out.push_back(address_token());
      while (accept(Tok::Comma)) {
        s = peek().span;
        Address a = address_token();
        if (std::find(out.begin(), out.end(), a) != out.end())
          throw ParseError("address '" + a.str() + "' bound twice", s);
        out.push_back(std::move(a));
      }
    }
    expect(Tok::RParen);
    return out;
  }

  Expression primary() {
    const Token tok = peek();
    switch (tok.kind) {
      case Tok::Ident: {
        if (units_.contains(tok.text)) {
          if (!tok.path.empty())
            throw ParseError("currency unit cannot carry a path", tok.span);
          ++i_;
          return Expression::unit(tok.text, tok.span);
        }
        return Expression::addr(address_token(), tok.span);
      }
      case Tok::Underscore:
        ++i_;
        return Expression::dispose(tok.span);
      case Tok::Number: {
        ++i_;
        expect(Tok::Dot);
        const Token& u = expect(Tok::Ident);
        if (!units_.contains(u.text))
          throw ParseError("'" + u.text + "' is not a currency unit", u.span);
        long count = 0;
        try {
          count = std::stol(tok.text);
        } catch (const std::exception&) {
          throw ParseError("amount out of range", tok.span);
        }
        if (count < 1) throw ParseError("amount must be positive", tok.span);
        return repeat_unit(u.text, count, join(tok.span, u.span));
      }
      case Tok::LParen: {
        ++i_;
        Expression e = expression();
        expect(Tok::RParen);
        return e;
      }
      case Tok::Inl:
      case Tok::Inr: {
        ++i_;
        expect(Tok::LParen);
        Expression e = expression();
        SourceSpan end = expect(Tok::RParen).span;
        return Expression::unary(
            tok.kind == Tok::Inl ? ExprKind::Inl : ExprKind::Inr, e,
            join(tok.span, end));
      }
      case Tok::Choose: {
        ++i_;
        std::vector<Address> bound = bound_list();
        if (bound.empty())
          throw ParseError("choose needs at least one bound address", tok.span);
        expect(Tok::LBrace);
        Program left = program();
        expect(Tok::Semi);
        Program right = program();
        SourceSpan end = expect(Tok::RBrace).span;
        return Expression::choose(std::move(bound), std::move(left),
                                  std::move(right), join(tok.span, end));
      }
      case Tok::Bang: {
        ++i_;
        std::vector<Address> bound = bound_list();
        expect(Tok::LBrace);
        Program body = program();
        SourceSpan end = expect(Tok::RBrace).span;
        return Expression::bang(std::move(bound), std::move(body),
                                join(tok.span, end));
      }
      default:
        fail({Tok::Ident, Tok::Underscore, Tok::Number, Tok::LParen, Tok::Inl,
              Tok::Inr, Tok::Choose, Tok::Bang, Tok::Query});
    }
  }

  // type := plus ['-o' type]
  LinearType type() {
    LinearType lhs = type_plus();
    if (accept(Tok::Lolli)) return LinearType::par(dual(lhs), type());
    return lhs;
  }

  LinearType type_plus() {
    LinearType t = type_with();
    while (accept(Tok::Plus)) t = LinearType::plus(t, type_with());
    return t;
  }

  LinearType type_with() {
    LinearType t = type_par();
    while (accept(Tok::Amp)) t = LinearType::with(t, type_par());
    return t;
  }

  LinearType type_par() {
    LinearType t = type_tensor();
    while (accept(Tok::Hash)) t = LinearType::par(t, type_tensor());
    return t;
  }

  LinearType type_tensor() {
    LinearType t = type_prefix();
    while (accept(Tok::Star)) t = LinearType::tensor(t, type_prefix());
    return t;
  }

  LinearType type_prefix() {
    if (accept(Tok::Bang)) return LinearType::of_course(type_prefix());
    if (accept(Tok::Query)) return LinearType::why_not(type_prefix());
    LinearType t = type_atom();
    while (accept(Tok::Caret)) t = dual(t);
    return t;
  }

  LinearType type_atom() {
    if (accept(Tok::LParen)) {
      LinearType t = type();
      expect(Tok::RParen);
      return t;
    }
    if (at(Tok::Ident)) {
      const Token& t = peek();
      if (!units_.contains(t.text) || !t.path.empty())
        throw ParseError("'" + t.text + "' is not a currency unit", t.span,
                         {"currency unit"});
      ++i_;
      return LinearType::atom(t.text);
    }
    fail({Tok::Ident, Tok::LParen, Tok::Bang, Tok::Query});
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
  const UnitRegistry& units_;
  ParseOptions opts_;
};

}  // namespace

Program parse_program(std::string_view text, const UnitRegistry& units,
                      ParseOptions options) {
  return Parser(text, units, options).whole_program();
}

Expression parse_expression(std::string_view text, const UnitRegistry& units,
                            ParseOptions options) {
  return Parser(text, units, options).whole_expression();
}

LinearType parse_type(std::string_view text, const UnitRegistry& units) {
  return Parser(text, units, {}).whole_type();
}

std::vector<LinearType> parse_type_list(std::string_view text,
                                        const UnitRegistry& units) {
  return Parser(text, units, {}).type_list();
}

Script parse_script(std::string_view text, const UnitRegistry& units) {
  Script script;
  std::string body(text);
  std::size_t first = body.find_first_not_of(" \t");
  if (first != std::string::npos && body.compare(first, 2, "--") == 0) {
    std::size_t eol = body.find('\n');
    std::string header =
        body.substr(first + 2, (eol == std::string::npos ? body.size() : eol) -
                                   first - 2);
    const std::string key = "types:";
    std::size_t k = header.find(key);
    if (k == std::string::npos ||
        header.find_first_not_of(" \t") != k)
      throw ParseError("header line must read '-- types: A1, A2, ...'",
                       SourceSpan{first, eol, 1, static_cast<int>(first) + 1});
    try {
      script.declared = parse_type_list(header.substr(k + key.size()), units);
    } catch (const ParseError& err) {
      SourceSpan s = err.span();
      std::size_t shift = first + 2 + k + key.size();
      s.begin += shift;
      s.end += shift;
      s.column += static_cast<int>(shift);
      throw ParseError(std::string("in types header: ") + err.what(), s,
                       err.expected());
    }
    // keep offsets and line numbers of the program body intact
    std::fill(body.begin(),
              body.begin() + static_cast<long>(eol == std::string::npos
                                                   ? body.size()
                                                   : eol),
              ' ');
  }
  script.program = parse_program(body, units);
  return script;
}

Script load_script(const std::string& path, const UnitRegistry& units) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_script(ss.str(), units);
}

}  // namespace llbc
