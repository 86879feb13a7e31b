// Copyright 2026 The hierlab Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fmt/core.h>

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "hierlab/errors.h"
#include "hierlab/surface.h"

namespace hierlab {

namespace {

std::string join(const std::vector<std::string>& xs, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += xs[i];
  }
  return out;
}

}  // namespace

ParseError::ParseError(Position pos, std::string found,
                       std::vector<std::string> expected)
    : Error(fmt::format("{}:{}: expected {}; found {}", pos.line, pos.column,
                        join(expected, " or "), found)),
      position(pos),
      expected(std::move(expected)) {}

ParseError::ParseError(Position pos, std::string message)
    : Error(fmt::format("{}:{}: {}", pos.line, pos.column, message)),
      position(pos) {}

ScopeError::ScopeError(std::string name, Position pos)
    : Error(fmt::format("{}:{}: unknown identifier '{}'", pos.line, pos.column,
                        name)),
      name(std::move(name)),
      position(pos) {}

namespace {

enum class Tok {
  kIdent,
  kNumber,
  kKeyword,
  kLParen,
  kRParen,
  kLBracket,
  kRBracket,
  kColon,
  kAssign,     // :=
  kComma,
  kArrow,      // → or ->
  kFatArrow,   // =>
  kEquals,
  kAt,
  kDot,
  kEof,
};

struct Token {
  Tok kind;
  std::string text;
  Position pos;
};

const std::set<std::string, std::less<>> kKeywords = {
    "class", "structure", "extends", "where",  "instance", "variables",
    "goal",  "defeq",     "opaque",  "fun",    "Type",
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Position pos = pos_;
      if (i_ >= src_.size()) {
        out.push_back({Tok::kEof, "end of input", pos});
        return out;
      }
      out.push_back(next(pos));
    }
  }

 private:
  static bool is_arrow_at(std::string_view s, std::size_t i) {
    return s.substr(i, 3) == "\xE2\x86\x92";
  }
  bool ident_start(std::size_t i) const {
    if (i >= src_.size()) return false;
    auto c = static_cast<unsigned char>(src_[i]);
    if (c >= 0x80) return !is_arrow_at(src_, i);
    return std::isalpha(c) || c == '_';
  }
  bool ident_cont(std::size_t i) const {
    if (ident_start(i)) return true;
    auto c = static_cast<unsigned char>(src_[i]);
    return std::isdigit(c) || c == '\'' || c == '!' || c == '?';
  }

  void advance(std::size_t n = 1) {
    for (std::size_t k = 0; k < n && i_ < src_.size(); ++k) {
      auto c = static_cast<unsigned char>(src_[i_++]);
      if (c == '\n') {
        ++pos_.line;
        pos_.column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++pos_.column;
      }
    }
  }

  void skip_space() {
    while (i_ < src_.size()) {
      char c = src_[i_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (src_.substr(i_, 2) == "--") {
        while (i_ < src_.size() && src_[i_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  Token next(Position pos) {
    auto tok = [&](Tok k, std::size_t n) {
      Token t{k, std::string(src_.substr(i_, n)), pos};
      advance(n);
      return t;
    };
    char c = src_[i_];
    if (is_arrow_at(src_, i_)) return tok(Tok::kArrow, 3);
    if (ident_start(i_)) {
      std::size_t j = i_;
      while (j < src_.size()) {
        if (ident_cont(j)) {
          ++j;
        } else if (src_[j] == '.' && ident_start(j + 1)) {
          ++j;
        } else {
          break;
        }
      }
      std::string text(src_.substr(i_, j - i_));
      if (text == "λ") {
        advance(j - i_);
        return {Tok::kKeyword, "fun", pos};
      }
      Tok kind = kKeywords.contains(text) ? Tok::kKeyword : Tok::kIdent;
      return tok(kind, j - i_);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < src_.size() && std::isdigit(static_cast<unsigned char>(src_[j]))) ++j;
      return tok(Tok::kNumber, j - i_);
    }
    switch (c) {
      case '(': return tok(Tok::kLParen, 1);
      case ')': return tok(Tok::kRParen, 1);
      case '[': return tok(Tok::kLBracket, 1);
      case ']': return tok(Tok::kRBracket, 1);
      case ',': return tok(Tok::kComma, 1);
      case '@': return tok(Tok::kAt, 1);
      case '.': return tok(Tok::kDot, 1);
      case ':':
        return src_.substr(i_, 2) == ":=" ? tok(Tok::kAssign, 2)
                                          : tok(Tok::kColon, 1);
      case '-':
        if (src_.substr(i_, 2) == "->") return tok(Tok::kArrow, 2);
        break;
      case '=':
        return src_.substr(i_, 2) == "=>" ? tok(Tok::kFatArrow, 2)
                                          : tok(Tok::kEquals, 1);
      default:
        break;
    }
    std::string shown = std::isprint(static_cast<unsigned char>(c))
                            ? fmt::format("'{}'", c)
                            : fmt::format("byte 0x{:02x}",
                                          static_cast<unsigned char>(c));
    throw ParseError(pos, "unexpected character " + shown);
  }

  std::string_view src_;
  std::size_t i_ = 0;
  Position pos_;
};

std::string describe(const Token& t) {
  switch (t.kind) {
    case Tok::kEof:
      return "end of input";
    case Tok::kIdent:
      return "identifier '" + t.text + "'";
    case Tok::kKeyword:
      return "keyword '" + t.text + "'";
    default:
      return "'" + t.text + "'";
  }
}

constexpr int kMaxNesting = 256;

/// Dotted-prefix scope: `a.b.c` is in scope when `a`, `a.b` or `a.b.c` is.
class Scope {
 public:
  void declare_global(const std::string& n) { globals_.insert(n); }
  bool has_global(const std::string& n) const { return globals_.contains(n); }
  void push_local(const std::string& n) { locals_.push_back(n); }
  void truncate(std::size_t n) { locals_.resize(n); }
  std::size_t depth() const { return locals_.size(); }

  bool resolves(const std::string& name) const {
    std::size_t end = name.size();
    for (;;) {
      std::string prefix = name.substr(0, end);
      if (globals_.contains(prefix) ||
          std::find(locals_.begin(), locals_.end(), prefix) != locals_.end()) {
        return true;
      }
      std::size_t dot = name.rfind('.', end - 1);
      if (dot == std::string::npos || dot == 0) return false;
      end = dot;
    }
  }

 private:
  std::set<std::string> globals_;
  std::vector<std::string> locals_;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, bool scoped)
      : toks_(std::move(toks)), scoped_(scoped) {}

  SurfaceModule module() {
    SurfaceModule m;
    while (!at(Tok::kEof)) m.items.push_back(item());
    return m;
  }

  SExprPtr standalone_expr() {
    SExprPtr e = expr();
    expect(Tok::kEof, "end of input");
    return e;
  }

  std::vector<SBinder> standalone_binders() {
    std::vector<SBinder> bs = binders();
    expect(Tok::kEof, "binder");
    return bs;
  }

 private:
  const Token& peek(std::size_t k = 0) const {
    return toks_[std::min(p_ + k, toks_.size() - 1)];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_kw(std::string_view kw) const {
    return at(Tok::kKeyword) && peek().text == kw;
  }
  Token take() {
    Token t = peek();
    if (p_ < toks_.size() - 1) ++p_;
    return t;
  }
  [[noreturn]] void fail(std::vector<std::string> expected) const {
    throw ParseError(peek().pos, describe(peek()), std::move(expected));
  }
  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail({what});
    return take();
  }
  void expect_kw(const std::string& kw) {
    if (!at_kw(kw)) fail({"'" + kw + "'"});
    take();
  }
  std::string ident(const std::string& what = "identifier") {
    return expect(Tok::kIdent, what).text;
  }

  struct Nest {
    explicit Nest(Parser& p) : p(p) {
      if (++p.nesting_ > kMaxNesting) {
        throw ParseError(p.peek().pos, "expression nested too deeply");
      }
    }
    ~Nest() { --p.nesting_; }
    Parser& p;
  };

  // Items

  SurfaceItem item() {
    std::optional<int> priority;
    Position start = peek().pos;
    if (at(Tok::kAt) && peek(1).kind == Tok::kLBracket) {
      take();
      take();
      if (!(at(Tok::kIdent) && peek().text == "priority")) fail({"'priority'"});
      take();
      Token n = expect(Tok::kNumber, "number");
      if (n.text.size() > 9) throw ParseError(n.pos, "priority out of range");
      priority = std::stoi(n.text);
      expect(Tok::kRBracket, "']'");
      if (!at_kw("instance")) fail({"'instance'"});
    }
    if (at_kw("class") || at_kw("structure")) return class_item();
    if (at_kw("instance")) return instance_item(priority, start);
    if (at_kw("variables")) {
      take();
      VariablesItem v{binders(), start};
      if (v.binders.empty()) fail({"binder"});
      // Ambient variables stay in scope for the rest of the file.
      for (const SBinder& b : v.binders) ambient_.push_back(b.name);
      return v;
    }
    if (at_kw("goal")) {
      take();
      GoalItem g;
      g.pos = start;
      g.label = ident("goal label");
      auto mark = enter_item();
      g.binders = binders();
      expect(Tok::kColon, "':'");
      g.type = expr();
      scope_.truncate(mark);
      return g;
    }
    if (at_kw("defeq")) {
      take();
      DefeqItem d;
      d.pos = start;
      d.label = ident("defeq label");
      auto mark = enter_item();
      d.binders = binders();
      expect(Tok::kColon, "':'");
      d.lhs = expr();
      expect(Tok::kEquals, "'='");
      d.rhs = expr();
      scope_.truncate(mark);
      return d;
    }
    if (at_kw("opaque")) {
      take();
      OpaqueItem o;
      o.pos = start;
      Token name = expect(Tok::kIdent, "identifier");
      o.name = name.text;
      declare(o.name, name.pos);
      std::size_t mark = scope_.depth();
      o.binders = binders();
      expect(Tok::kColon, "':'");
      o.type = expr();
      scope_.truncate(mark);
      return o;
    }
    fail({"'class'", "'structure'", "'instance'", "'variables'", "'goal'",
          "'defeq'", "'opaque'"});
  }

  // Items other than classes see the ambient `variables`.
  std::size_t enter_item() {
    std::size_t mark = scope_.depth();
    for (const std::string& n : ambient_) scope_.push_local(n);
    return mark;
  }

  void declare(const std::string& name, Position pos) {
    if (scoped_ && scope_.has_global(name)) {
      throw ParseError(pos, "duplicate declaration '" + name + "'");
    }
    scope_.declare_global(name);
  }

  ClassItem class_item() {
    ClassItem c;
    c.pos = peek().pos;
    c.is_class = take().text == "class";
    Token name = expect(Tok::kIdent, "class name");
    c.name = name.text;
    std::size_t mark = scope_.depth();
    c.params = binders();
    std::set<std::string> leaves;
    if (at_kw("extends")) {
      take();
      for (;;) {
        SExprPtr parent = app_expr();
        check_parent(*parent);
        const std::string& pname =
            parent->kind == SExpr::Kind::kApp ? parent->items[0]->name
                                              : parent->name;
        const auto& inherited = class_leaves_[pname];
        leaves.insert(inherited.begin(), inherited.end());
        c.extends.push_back(std::move(parent));
        if (!at(Tok::kComma)) break;
        take();
      }
    }
    // Field types may mention inherited leaves and earlier own fields.
    for (const std::string& l : leaves) scope_.push_local(l);
    if (at_kw("where") || at(Tok::kAssign)) {
      take();
      while (at(Tok::kLParen)) {
        take();
        std::vector<Token> names;
        do {
          names.push_back(expect(Tok::kIdent, "field name"));
        } while (at(Tok::kIdent));
        expect(Tok::kColon, "':'");
        SExprPtr ty = expr();
        expect(Tok::kRParen, "')'");
        for (const Token& n : names) {
          c.fields.push_back({n.text, ty, n.pos});
          scope_.push_local(n.text);
          leaves.insert(n.text);
        }
      }
    }
    scope_.truncate(mark);
    declare(c.name, name.pos);
    declare(c.name + ".mk", name.pos);
    if (c.is_class) classes_.insert(c.name);
    class_leaves_[c.name] = std::move(leaves);
    return c;
  }

  void check_parent(const SExpr& e) {
    const SExpr* head = &e;
    if (e.kind == SExpr::Kind::kApp) head = e.items[0].get();
    if (head->kind != SExpr::Kind::kIdent) {
      throw ParseError(e.pos, "parent must be an application of a class");
    }
    if (scoped_ && !classes_.contains(head->name)) {
      if (!scope_.has_global(head->name)) throw ScopeError(head->name, head->pos);
      throw ParseError(head->pos, "'" + head->name + "' is not a class");
    }
  }

  InstanceItem instance_item(std::optional<int> priority, Position start) {
    expect_kw("instance");
    InstanceItem inst;
    inst.pos = start;
    inst.priority = priority;
    Token name = expect(Tok::kIdent, "instance name");
    inst.name = name.text;
    std::size_t mark = scope_.depth();
    inst.binders = binders();
    expect(Tok::kColon, "':'");
    inst.target = app_expr();
    if (at_kw("where")) {
      take();
      while (at(Tok::kLParen)) {
        take();
        Token f = expect(Tok::kIdent, "field name");
        expect(Tok::kAssign, "':='");
        SExprPtr value;
        if (at_kw("opaque")) {
          take();
        } else {
          value = expr();
        }
        expect(Tok::kRParen, "')'");
        inst.assigns.push_back({f.text, value, f.pos});
      }
    } else if (at(Tok::kAssign)) {
      take();
      inst.body = expr();
    }
    scope_.truncate(mark);
    declare(inst.name, name.pos);
    return inst;
  }

  // Binders

  bool binder_group_ahead() const {
    if (!at(Tok::kLParen)) return false;
    std::size_t k = 1;
    if (peek(k).kind != Tok::kIdent) return false;
    while (peek(k).kind == Tok::kIdent) ++k;
    return peek(k).kind == Tok::kColon;
  }

  std::vector<SBinder> binders() {
    std::vector<SBinder> out;
    for (;;) {
      if (binder_group_ahead()) {
        auto group = paren_binder_group();
        out.insert(out.end(), group.begin(), group.end());
      } else if (at(Tok::kLBracket)) {
        out.push_back(inst_binder());
      } else {
        return out;
      }
    }
  }

  std::vector<SBinder> paren_binder_group() {
    expect(Tok::kLParen, "'('");
    std::vector<Token> names;
    while (at(Tok::kIdent)) names.push_back(take());
    expect(Tok::kColon, "':'");
    SExprPtr ty = expr();
    expect(Tok::kRParen, "')'");
    std::vector<SBinder> out;
    for (const Token& n : names) {
      out.push_back({n.text, ty, BinderKind::kExplicit, false, n.pos});
      scope_.push_local(n.text);
    }
    return out;
  }

  SBinder inst_binder() {
    Token open = expect(Tok::kLBracket, "'['");
    SBinder b;
    b.kind = BinderKind::kInstImplicit;
    b.pos = open.pos;
    if (at(Tok::kIdent) && peek(1).kind == Tok::kColon) {
      b.name = take().text;
      take();
    } else {
      b.anonymous = true;
      b.name = fmt::format("_inst_{}", ++anon_counter_);
    }
    b.type = expr();
    expect(Tok::kRBracket, "']'");
    scope_.push_local(b.name);
    return b;
  }

  // Expressions

  static SExprPtr make(SExpr e) { return std::make_shared<const SExpr>(std::move(e)); }

  SExprPtr expr() {
    Nest nest(*this);
    Position pos = peek().pos;
    if (at_kw("fun")) {
      take();
      std::size_t mark = scope_.depth();
      std::vector<SBinder> bs = binders();
      if (bs.empty()) fail({"binder"});
      expect(Tok::kFatArrow, "'=>'");
      SExprPtr body = expr();
      scope_.truncate(mark);
      for (auto it = bs.rbegin(); it != bs.rend(); ++it) {
        SExpr e;
        e.kind = SExpr::Kind::kFun;
        e.pos = it->pos;
        e.binder = *it;
        e.body = body;
        body = make(std::move(e));
      }
      return body;
    }
    if (binder_group_ahead() || at(Tok::kLBracket)) {
      std::size_t mark = scope_.depth();
      std::vector<SBinder> bs;
      if (at(Tok::kLBracket)) {
        bs.push_back(inst_binder());
      } else {
        bs = paren_binder_group();
      }
      expect(Tok::kArrow, "'→'");
      SExprPtr body = expr();
      scope_.truncate(mark);
      for (auto it = bs.rbegin(); it != bs.rend(); ++it) {
        SExpr e;
        e.kind = SExpr::Kind::kArrow;
        e.pos = it->pos;
        e.binder = *it;
        e.body = body;
        body = make(std::move(e));
      }
      return body;
    }
    SExprPtr lhs = app_expr();
    if (at(Tok::kArrow)) {
      take();
      SExpr e;
      e.kind = SExpr::Kind::kArrow;
      e.pos = pos;
      e.binder.type = lhs;
      e.body = expr();
      return make(std::move(e));
    }
    return lhs;
  }

  bool atom_ahead() const {
    switch (peek().kind) {
      case Tok::kIdent:
      case Tok::kLParen:
        return true;
      case Tok::kKeyword:
        return peek().text == "Type";
      case Tok::kAt:
        return peek(1).kind == Tok::kIdent;
      default:
        return false;
    }
  }

  SExprPtr app_expr() {
    if (!atom_ahead()) fail({"expression"});
    Position pos = peek().pos;
    std::vector<SExprPtr> items;
    while (atom_ahead()) items.push_back(postfix());
    if (items.size() == 1) return items[0];
    SExpr e;
    e.kind = SExpr::Kind::kApp;
    e.pos = pos;
    e.items = std::move(items);
    return make(std::move(e));
  }

  SExprPtr postfix() {
    SExprPtr e = atom();
    while (at(Tok::kDot) && peek(1).kind == Tok::kIdent) {
      take();
      Token f = take();
      std::size_t start = 0;
      // A dotted identifier after `.` is a chain of projections.
      while (start <= f.text.size()) {
        std::size_t dot = f.text.find('.', start);
        std::string seg = f.text.substr(start, dot - start);
        SExpr p;
        p.kind = SExpr::Kind::kProj;
        p.pos = f.pos;
        p.name = seg;
        p.items.push_back(e);
        e = make(std::move(p));
        if (dot == std::string::npos) break;
        start = dot + 1;
      }
    }
    return e;
  }

  SExprPtr atom() {
    Nest nest(*this);
    Position pos = peek().pos;
    if (at_kw("Type")) {
      take();
      SExpr e;
      e.kind = SExpr::Kind::kType;
      e.pos = pos;
      return make(std::move(e));
    }
    bool explicit_at = false;
    if (at(Tok::kAt)) {
      take();
      explicit_at = true;
    }
    if (at(Tok::kIdent)) {
      Token t = take();
      if (scoped_ && !scope_.resolves(t.text)) throw ScopeError(t.text, t.pos);
      SExpr e;
      e.kind = SExpr::Kind::kIdent;
      e.pos = pos;
      e.name = t.text;
      e.explicit_at = explicit_at;
      return make(std::move(e));
    }
    if (explicit_at) fail({"identifier"});
    if (at(Tok::kLParen)) {
      take();
      SExprPtr e = expr();
      expect(Tok::kRParen, "')'");
      return e;
    }
    fail({"expression"});
  }

  std::vector<Token> toks_;
  std::size_t p_ = 0;
  bool scoped_;
  int nesting_ = 0;
  int anon_counter_ = 0;
  Scope scope_;
  std::vector<std::string> ambient_;
  std::set<std::string> classes_;
  std::map<std::string, std::set<std::string>> class_leaves_;
};

}  // namespace

SurfaceModule parse(std::string_view text) {
  return Parser(Lexer(text).run(), /*scoped=*/true).module();
}

SExprPtr parse_expr(std::string_view text) {
  return Parser(Lexer(text).run(), /*scoped=*/false).standalone_expr();
}

std::vector<SBinder> parse_binders(std::string_view text) {
  return Parser(Lexer(text).run(), /*scoped=*/false).standalone_binders();
}

}  // namespace hierlab
