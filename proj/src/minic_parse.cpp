// Copyright 2026 The eqcheck authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "eqc/minic.h"

#include <cctype>
#include <sstream>
#include <unordered_set>

namespace eqc::minic {

std::string type_name(Type t) {
  if (t.is_bool()) return "bool";
  if (t.is_float()) {
    if (t.fmt() == FloatFormat::binary32()) return "f32";
    if (t.fmt() == FloatFormat::binary64()) return "f64";
    return "f8";
  }
  return (t.is_signed() ? "s" : "u") + std::to_string(t.width());
}

bool parse_type_name(const std::string &s, Type &out) {
  if (s == "bool") { out = Type::bool_(); return true; }
  if (s == "f32") { out = Type::float_(FloatFormat::binary32()); return true; }
  if (s == "f64") { out = Type::float_(FloatFormat::binary64()); return true; }
  if (s == "f8") { out = Type::float_(FloatFormat::minifloat()); return true; }
  if (s.size() >= 2 && (s[0] == 'u' || s[0] == 's')) {
    std::string w = s.substr(1);
    if (w == "8" || w == "16" || w == "32" || w == "64") {
      unsigned width = (unsigned)std::stoul(w);
      out = s[0] == 'u' ? Type::ubits(width) : Type::sbits(width);
      return true;
    }
  }
  return false;
}

namespace {

[[noreturn]] void fail(const std::string &file, SrcLoc loc,
                       const std::string &msg) {
  throw CompileError(file + ":" + std::to_string(loc.line) + ":" +
                     std::to_string(loc.col) + ": error: " + msg);
}

struct Tok {
  enum K : uint8_t { Int, Ident, Str, Punct, Eof } k = Eof;
  std::string s;
  uint64_t v = 0;
  SrcLoc loc;
};

class Lexer {
public:
  Lexer(const std::string &text, const std::string &file)
      : text_(text), file_(file) {}

  // Lexes the whole input, recording #define bodies instead of
  // emitting them.
  std::vector<Tok> run(std::unordered_map<std::string, std::vector<Tok>> &macros) {
    std::vector<Tok> out;
    for (;;) {
      Tok t = next();
      if (t.k == Tok::Punct && t.s == "#") {
        Tok d = next();
        if (d.k != Tok::Ident || d.s != "define")
          fail(file_, d.loc, "expected 'define' after '#'");
        Tok name = next();
        if (name.k != Tok::Ident)
          fail(file_, name.loc, "expected macro name");
        std::vector<Tok> body;
        int line = name.loc.line;
        while (true) {
          size_t save = pos_;
          int sl = line_, sc = col_;
          Tok b = next();
          if (b.k == Tok::Eof || b.loc.line != line) {
            pos_ = save;
            line_ = sl;
            col_ = sc;
            break;
          }
          body.push_back(b);
        }
        if (body.empty())
          fail(file_, name.loc, "empty macro body");
        if (!macros.emplace(name.s, std::move(body)).second)
          fail(file_, name.loc, "macro redefined: " + name.s);
        continue;
      }
      out.push_back(t);
      if (t.k == Tok::Eof) break;
    }
    return out;
  }

private:
  char cur() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char at(size_t off) const {
    return pos_ + off < text_.size() ? text_[pos_ + off] : '\0';
  }
  void adv() {
    if (cur() == '\n') {
      line_++;
      col_ = 1;
    } else {
      col_++;
    }
    pos_++;
  }

  void skip_space() {
    for (;;) {
      if (isspace((unsigned char)cur())) {
        adv();
      } else if (cur() == '/' && at(1) == '/') {
        while (cur() && cur() != '\n') adv();
      } else if (cur() == '/' && at(1) == '*') {
        SrcLoc l{line_, col_};
        adv();
        adv();
        while (!(cur() == '*' && at(1) == '/')) {
          if (!cur()) fail(file_, l, "unterminated comment");
          adv();
        }
        adv();
        adv();
      } else {
        return;
      }
    }
  }

  Tok next() {
    skip_space();
    Tok t;
    t.loc = {line_, col_};
    char c = cur();
    if (!c) {
      t.k = Tok::Eof;
      return t;
    }
    if (isalpha((unsigned char)c) || c == '_') {
      std::string s;
      while (isalnum((unsigned char)cur()) || cur() == '_') {
        s += cur();
        adv();
      }
      t.k = Tok::Ident;
      t.s = s;
      return t;
    }
    if (isdigit((unsigned char)c)) {
      uint64_t v = 0;
      if (c == '0' && (at(1) == 'x' || at(1) == 'X')) {
        adv();
        adv();
        if (!isxdigit((unsigned char)cur()))
          fail(file_, t.loc, "bad hex literal");
        while (isxdigit((unsigned char)cur())) {
          unsigned d = cur() <= '9' ? cur() - '0' : (cur() | 32) - 'a' + 10;
          if (v >> 60) fail(file_, t.loc, "integer literal too large");
          v = v * 16 + d;
          adv();
        }
      } else {
        while (isdigit((unsigned char)cur())) {
          if (v > (UINT64_MAX - 9) / 10)
            fail(file_, t.loc, "integer literal too large");
          v = v * 10 + (cur() - '0');
          adv();
        }
      }
      if (isalpha((unsigned char)cur()) || cur() == '_')
        fail(file_, t.loc, "bad integer literal suffix");
      t.k = Tok::Int;
      t.v = v;
      return t;
    }
    if (c == '"') {
      adv();
      std::string s;
      while (cur() != '"') {
        if (!cur() || cur() == '\n')
          fail(file_, t.loc, "unterminated string");
        s += cur();
        adv();
      }
      adv();
      t.k = Tok::Str;
      t.s = s;
      return t;
    }
    static const char *two[] = {"<<", ">>", "<=", ">=", "==", "!=",
                                "&&", "||", "++", "--"};
    for (const char *p : two) {
      if (c == p[0] && at(1) == p[1]) {
        adv();
        adv();
        t.k = Tok::Punct;
        t.s = p;
        return t;
      }
    }
    static const std::string singles = "()[]{};,=<>+-*/%&|^~!?:#";
    if (singles.find(c) != std::string::npos) {
      adv();
      t.k = Tok::Punct;
      t.s = std::string(1, c);
      return t;
    }
    fail(file_, t.loc, std::string("unexpected character '") + c + "'");
  }

  const std::string &text_;
  const std::string &file_;
  size_t pos_ = 0;
  int line_ = 1, col_ = 1;
};

// Token cursor with object-like macro expansion.
class Stream {
public:
  Stream(std::vector<Tok> toks,
         std::unordered_map<std::string, std::vector<Tok>> macros,
         const std::string &file)
      : toks_(std::move(toks)), macros_(std::move(macros)), file_(file) {}

  const Tok &peek(unsigned n = 0) {
    while (buf_.size() <= n) buf_.push_back(fetch());
    return buf_[n];
  }

  Tok get() {
    peek();
    Tok t = buf_.front();
    buf_.erase(buf_.begin());
    return t;
  }

  const std::string &file() const { return file_; }

private:
  Tok fetch() {
    for (;;) {
      Tok t;
      if (!stack_.empty()) {
        Frame &f = stack_.back();
        if (f.pos >= f.toks.size()) {
          active_.erase(f.name);
          stack_.pop_back();
          continue;
        }
        t = f.toks[f.pos++];
        t.loc = f.loc; // expansion reports the use site
      } else {
        t = toks_[main_pos_];
        if (t.k != Tok::Eof) main_pos_++;
      }
      if (t.k == Tok::Ident) {
        auto it = macros_.find(t.s);
        if (it != macros_.end()) {
          if (active_.count(t.s))
            fail(file_, t.loc, "recursive macro: " + t.s);
          active_.insert(t.s);
          stack_.push_back({t.s, it->second, 0, t.loc});
          continue;
        }
      }
      return t;
    }
  }

  struct Frame {
    std::string name;
    std::vector<Tok> toks;
    size_t pos;
    SrcLoc loc;
  };
  std::vector<Tok> toks_;
  std::unordered_map<std::string, std::vector<Tok>> macros_;
  const std::string &file_;
  size_t main_pos_ = 0;
  std::vector<Tok> buf_;
  std::vector<Frame> stack_;
  std::unordered_set<std::string> active_;
};

using ExprP = std::unique_ptr<AstExpr>;
using StmtP = std::unique_ptr<AstStmt>;

class Parser {
public:
  Parser(Stream &s) : s_(s) {}

  Ast run() {
    Ast ast;
    ast.file = s_.file();
    while (s_.peek().k != Tok::Eof) {
      SrcLoc loc = s_.peek().loc;
      bool is_void = s_.peek().k == Tok::Ident && s_.peek().s == "void";
      Type t;
      if (!is_void) {
        t = expect_type();
      } else {
        s_.get();
      }
      Tok name = expect_ident("name");
      if (s_.peek().k == Tok::Punct && s_.peek().s == "(") {
        ast.funcs.push_back(parse_func(is_void, t, name.s, loc));
      } else {
        if (is_void) fail_at(loc, "void global");
        ast.globals.push_back(parse_global(t, name.s, loc));
      }
    }
    return ast;
  }

private:
  [[noreturn]] void fail_at(SrcLoc loc, const std::string &msg) {
    fail(s_.file(), loc, msg);
  }

  bool is_punct(const char *p, unsigned n = 0) {
    return s_.peek(n).k == Tok::Punct && s_.peek(n).s == p;
  }
  bool is_kw(const char *w, unsigned n = 0) {
    return s_.peek(n).k == Tok::Ident && s_.peek(n).s == w;
  }
  Tok expect_punct(const char *p) {
    Tok t = s_.get();
    if (t.k != Tok::Punct || t.s != p)
      fail_at(t.loc, std::string("expected '") + p + "'");
    return t;
  }
  Tok expect_ident(const char *what) {
    Tok t = s_.get();
    if (t.k != Tok::Ident)
      fail_at(t.loc, std::string("expected ") + what);
    return t;
  }
  bool peek_type(Type &out, unsigned n = 0) {
    return s_.peek(n).k == Tok::Ident && parse_type_name(s_.peek(n).s, out);
  }
  Type expect_type() {
    Tok t = s_.get();
    Type ty;
    if (t.k != Tok::Ident || !parse_type_name(t.s, ty))
      fail_at(t.loc, "expected type name");
    return ty;
  }

  AstGlobal parse_global(Type t, const std::string &name, SrcLoc loc) {
    AstGlobal g;
    g.name = name;
    g.type = t;
    g.loc = loc;
    if (is_punct("[")) {
      s_.get();
      Tok n = s_.get();
      if (n.k != Tok::Int || n.v == 0 || n.v > 1u << 16)
        fail_at(n.loc, "bad array size");
      g.array_size = (int)n.v;
      expect_punct("]");
    }
    if (is_punct("=")) {
      s_.get();
      if (g.array_size) fail_at(loc, "array initializer unsupported");
      g.init = parse_expr();
    }
    expect_punct(";");
    return g;
  }

  AstFunc parse_func(bool is_void, Type ret, const std::string &name,
                     SrcLoc loc) {
    AstFunc f;
    f.name = name;
    f.is_void = is_void;
    f.ret = ret;
    f.loc = loc;
    expect_punct("(");
    if (!is_punct(")")) {
      for (;;) {
        Param p;
        p.loc = s_.peek().loc;
        p.type = expect_type();
        p.name = expect_ident("parameter name").s;
        f.params.push_back(p);
        if (is_punct(",")) {
          s_.get();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    expect_punct("{");
    while (!is_punct("}")) f.body.push_back(parse_stmt());
    s_.get();
    return f;
  }

  StmtP mk_stmt(SK k, SrcLoc loc) {
    auto s = std::make_unique<AstStmt>();
    s->k = k;
    s->loc = loc;
    return s;
  }
  ExprP mk_expr(EK k, SrcLoc loc) {
    auto e = std::make_unique<AstExpr>();
    e->k = k;
    e->loc = loc;
    return e;
  }

  StmtP parse_stmt() {
    SrcLoc loc = s_.peek().loc;
    if (is_punct("{")) {
      s_.get();
      StmtP b = mk_stmt(SK::Block, loc);
      while (!is_punct("}")) b->body.push_back(parse_stmt());
      s_.get();
      return b;
    }
    if (is_kw("if")) return parse_if();
    if (is_kw("while")) return parse_while();
    if (is_kw("for")) return parse_for();
    if (is_kw("return")) {
      s_.get();
      StmtP r = mk_stmt(SK::Return, loc);
      if (!is_punct(";")) {
        r->e = parse_expr();
        r->has_e = true;
      }
      expect_punct(";");
      return r;
    }
    if (is_kw("assume") && is_punct("(", 1)) {
      s_.get();
      s_.get();
      StmtP a = mk_stmt(SK::Assume, loc);
      a->e = parse_expr();
      expect_punct(")");
      expect_punct(";");
      return a;
    }
    if (is_kw("assert") && is_punct("(", 1)) {
      s_.get();
      s_.get();
      StmtP a = mk_stmt(SK::Assert, loc);
      a->e = parse_expr();
      if (is_punct(",")) {
        s_.get();
        Tok l = s_.get();
        if (l.k != Tok::Str || l.s.empty())
          fail_at(l.loc, "expected label string");
        a->label = l.s;
      }
      expect_punct(")");
      expect_punct(";");
      return a;
    }
    Type t;
    if (peek_type(t)) return parse_decl();
    StmtP s = parse_simple();
    expect_punct(";");
    return s;
  }

  StmtP parse_decl() {
    SrcLoc loc = s_.peek().loc;
    StmtP d = mk_stmt(SK::Decl, loc);
    d->decl_type = expect_type();
    d->name = expect_ident("variable name").s;
    if (is_punct("[")) {
      s_.get();
      Tok n = s_.get();
      if (n.k != Tok::Int || n.v == 0 || n.v > 1u << 16)
        fail_at(n.loc, "bad array size");
      d->array_size = (int)n.v;
      expect_punct("]");
    }
    if (is_punct("=")) {
      s_.get();
      if (d->array_size) fail_at(loc, "array initializer unsupported");
      d->e = parse_expr();
      d->has_e = true;
    }
    expect_punct(";");
    return d;
  }

  // Assignment, increment/decrement or call, without the trailing ';'.
  StmtP parse_simple() {
    SrcLoc loc = s_.peek().loc;
    Tok name = expect_ident("statement");
    if (is_punct("(")) {
      StmtP c = mk_stmt(SK::CallStmt, loc);
      c->e = parse_call(name.s, loc);
      return c;
    }
    if (is_punct("++") || is_punct("--")) {
      std::string op = s_.get().s;
      StmtP a = mk_stmt(SK::Assign, loc);
      a->lhs = mk_expr(EK::Ident, loc);
      a->lhs->name = name.s;
      ExprP rhs = mk_expr(EK::Binary, loc);
      rhs->op = op == "++" ? "+" : "-";
      ExprP l = mk_expr(EK::Ident, loc);
      l->name = name.s;
      ExprP one = mk_expr(EK::IntLit, loc);
      one->ival = 1;
      rhs->kids.push_back(std::move(l));
      rhs->kids.push_back(std::move(one));
      a->e = std::move(rhs);
      return a;
    }
    StmtP a = mk_stmt(SK::Assign, loc);
    if (is_punct("[")) {
      s_.get();
      ExprP ix = mk_expr(EK::Index, loc);
      ix->name = name.s;
      ix->kids.push_back(parse_expr());
      expect_punct("]");
      a->lhs = std::move(ix);
    } else {
      a->lhs = mk_expr(EK::Ident, loc);
      a->lhs->name = name.s;
    }
    expect_punct("=");
    a->e = parse_expr();
    return a;
  }

  // A braced body contributes its statements directly, so printing and
  // reparsing is stable.
  void parse_body(std::vector<StmtP> &out) {
    if (is_punct("{")) {
      s_.get();
      while (!is_punct("}")) out.push_back(parse_stmt());
      s_.get();
      return;
    }
    out.push_back(parse_stmt());
  }

  StmtP parse_if() {
    SrcLoc loc = s_.get().loc;
    expect_punct("(");
    StmtP s = mk_stmt(SK::If, loc);
    s->e = parse_expr();
    expect_punct(")");
    parse_body(s->body);
    if (is_kw("else")) {
      s_.get();
      if (is_kw("if"))
        s->els.push_back(parse_if());
      else
        parse_body(s->els);
    }
    return s;
  }

  StmtP parse_while() {
    SrcLoc loc = s_.get().loc;
    expect_punct("(");
    StmtP s = mk_stmt(SK::While, loc);
    s->e = parse_expr();
    expect_punct(")");
    parse_body(s->body);
    return s;
  }

  StmtP parse_for() {
    SrcLoc loc = s_.get().loc;
    expect_punct("(");
    StmtP s = mk_stmt(SK::For, loc);
    if (!is_punct(";")) {
      Type t;
      if (peek_type(t)) {
        StmtP d = mk_stmt(SK::Decl, s_.peek().loc);
        d->decl_type = expect_type();
        d->name = expect_ident("variable name").s;
        expect_punct("=");
        d->e = parse_expr();
        d->has_e = true;
        s->init_stmt = std::move(d);
      } else {
        s->init_stmt = parse_simple();
      }
    }
    expect_punct(";");
    s->e = parse_expr();
    expect_punct(";");
    if (!is_punct(")")) s->step_stmt = parse_simple();
    expect_punct(")");
    parse_body(s->body);
    return s;
  }

  ExprP parse_call(const std::string &callee, SrcLoc loc) {
    expect_punct("(");
    ExprP c = mk_expr(EK::Call, loc);
    c->name = callee;
    if (!is_punct(")")) {
      for (;;) {
        c->kids.push_back(parse_expr());
        if (is_punct(",")) {
          s_.get();
          continue;
        }
        break;
      }
    }
    expect_punct(")");
    return c;
  }

  ExprP parse_expr() { return parse_ternary(); }

  ExprP parse_ternary() {
    ExprP c = parse_bin(0);
    if (!is_punct("?")) return c;
    SrcLoc loc = s_.get().loc;
    ExprP t = mk_expr(EK::Ternary, loc);
    t->kids.push_back(std::move(c));
    t->kids.push_back(parse_expr());
    expect_punct(":");
    t->kids.push_back(parse_ternary());
    return t;
  }

  // Binary operators by precedence level, lowest first.
  ExprP parse_bin(int lvl) {
    static const std::vector<std::vector<std::string>> levels = {
        {"||"}, {"&&"}, {"|"}, {"^"}, {"&"},
        {"==", "!="}, {"<", "<=", ">", ">="}, {"<<", ">>"},
        {"+", "-"}, {"*", "/", "%"}};
    if (lvl >= (int)levels.size()) return parse_unary();
    ExprP lhs = parse_bin(lvl + 1);
    for (;;) {
      bool matched = false;
      for (const std::string &op : levels[lvl]) {
        if (s_.peek().k == Tok::Punct && s_.peek().s == op) {
          SrcLoc loc = s_.get().loc;
          ExprP b = mk_expr(EK::Binary, loc);
          b->op = op;
          b->kids.push_back(std::move(lhs));
          b->kids.push_back(parse_bin(lvl + 1));
          lhs = std::move(b);
          matched = true;
          break;
        }
      }
      if (!matched) return lhs;
    }
  }

  ExprP parse_unary() {
    SrcLoc loc = s_.peek().loc;
    if (is_punct("-") || is_punct("~") || is_punct("!")) {
      ExprP u = mk_expr(EK::Unary, loc);
      u->op = s_.get().s;
      u->kids.push_back(parse_unary());
      return u;
    }
    Type t;
    if (is_punct("(") && peek_type(t, 1) && is_punct(")", 2)) {
      s_.get();
      ExprP c = mk_expr(EK::Cast, loc);
      c->cast_to = expect_type();
      s_.get();
      c->kids.push_back(parse_unary());
      return c;
    }
    return parse_postfix();
  }

  ExprP parse_postfix() {
    SrcLoc loc = s_.peek().loc;
    Tok t = s_.get();
    if (t.k == Tok::Int) {
      ExprP e = mk_expr(EK::IntLit, loc);
      e->ival = t.v;
      return e;
    }
    if (t.k == Tok::Ident && (t.s == "true" || t.s == "false")) {
      ExprP e = mk_expr(EK::BoolLit, loc);
      e->ival = t.s == "true" ? 1 : 0;
      return e;
    }
    if (t.k == Tok::Ident) {
      if (is_punct("(")) return parse_call(t.s, loc);
      if (is_punct("[")) {
        s_.get();
        ExprP e = mk_expr(EK::Index, loc);
        e->name = t.s;
        e->kids.push_back(parse_expr());
        expect_punct("]");
        return e;
      }
      ExprP e = mk_expr(EK::Ident, loc);
      e->name = t.s;
      return e;
    }
    if (t.k == Tok::Punct && t.s == "(") {
      ExprP e = parse_expr();
      expect_punct(")");
      return e;
    }
    fail_at(t.loc, "expected expression");
  }

  Stream &s_;
};

void print_expr(std::ostringstream &os, const AstExpr &e) {
  switch (e.k) {
  case EK::IntLit:
    os << e.ival;
    break;
  case EK::BoolLit:
    os << (e.ival ? "true" : "false");
    break;
  case EK::Ident:
    os << e.name;
    break;
  case EK::Index:
    os << e.name << "[";
    print_expr(os, *e.kids[0]);
    os << "]";
    break;
  case EK::Unary:
    os << "(" << e.op;
    print_expr(os, *e.kids[0]);
    os << ")";
    break;
  case EK::Binary:
    os << "(";
    print_expr(os, *e.kids[0]);
    os << " " << e.op << " ";
    print_expr(os, *e.kids[1]);
    os << ")";
    break;
  case EK::Ternary:
    os << "(";
    print_expr(os, *e.kids[0]);
    os << " ? ";
    print_expr(os, *e.kids[1]);
    os << " : ";
    print_expr(os, *e.kids[2]);
    os << ")";
    break;
  case EK::Call:
    os << e.name << "(";
    for (size_t i = 0; i < e.kids.size(); i++) {
      if (i) os << ", ";
      print_expr(os, *e.kids[i]);
    }
    os << ")";
    break;
  case EK::Cast:
    os << "((" << type_name(e.cast_to) << ")";
    print_expr(os, *e.kids[0]);
    os << ")";
    break;
  }
}

void print_stmt(std::ostringstream &os, const AstStmt &s, int ind);

void print_block(std::ostringstream &os,
                 const std::vector<std::unique_ptr<AstStmt>> &body, int ind) {
  os << "{\n";
  for (const auto &st : body) print_stmt(os, *st, ind + 1);
  for (int i = 0; i < ind; i++) os << "  ";
  os << "}";
}

void print_simple(std::ostringstream &os, const AstStmt &s) {
  if (s.k == SK::Decl) {
    os << type_name(s.decl_type) << " " << s.name;
    if (s.has_e) {
      os << " = ";
      print_expr(os, *s.e);
    }
  } else if (s.k == SK::Assign) {
    print_expr(os, *s.lhs);
    os << " = ";
    print_expr(os, *s.e);
  } else if (s.k == SK::CallStmt) {
    print_expr(os, *s.e);
  }
}

void print_stmt(std::ostringstream &os, const AstStmt &s, int ind) {
  for (int i = 0; i < ind; i++) os << "  ";
  switch (s.k) {
  case SK::Block:
    print_block(os, s.body, ind);
    os << "\n";
    return;
  case SK::Decl:
    print_simple(os, s);
    if (s.array_size) os << "[" << s.array_size << "]";
    os << ";\n";
    return;
  case SK::Assign:
  case SK::CallStmt:
    print_simple(os, s);
    os << ";\n";
    return;
  case SK::If:
    os << "if (";
    print_expr(os, *s.e);
    os << ") ";
    print_block(os, s.body, ind);
    if (!s.els.empty()) {
      os << " else ";
      print_block(os, s.els, ind);
    }
    os << "\n";
    return;
  case SK::While:
    os << "while (";
    print_expr(os, *s.e);
    os << ") ";
    print_block(os, s.body, ind);
    os << "\n";
    return;
  case SK::For:
    os << "for (";
    if (s.init_stmt) print_simple(os, *s.init_stmt);
    os << "; ";
    print_expr(os, *s.e);
    os << "; ";
    if (s.step_stmt) print_simple(os, *s.step_stmt);
    os << ") ";
    print_block(os, s.body, ind);
    os << "\n";
    return;
  case SK::Return:
    os << "return";
    if (s.has_e) {
      os << " ";
      print_expr(os, *s.e);
    }
    os << ";\n";
    return;
  case SK::Assume:
    os << "assume(";
    print_expr(os, *s.e);
    os << ");\n";
    return;
  case SK::Assert:
    os << "assert(";
    print_expr(os, *s.e);
    if (!s.label.empty()) os << ", \"" << s.label << "\"";
    os << ");\n";
    return;
  }
}

bool expr_eq(const AstExpr &a, const AstExpr &b) {
  if (a.k != b.k || a.kids.size() != b.kids.size()) return false;
  if (a.ival != b.ival || a.name != b.name || a.op != b.op) return false;
  if (a.k == EK::Cast && a.cast_to != b.cast_to) return false;
  for (size_t i = 0; i < a.kids.size(); i++)
    if (!expr_eq(*a.kids[i], *b.kids[i])) return false;
  return true;
}

bool opt_expr_eq(const std::unique_ptr<AstExpr> &a,
                 const std::unique_ptr<AstExpr> &b) {
  if (!a != !b) return false;
  return !a || expr_eq(*a, *b);
}

bool stmt_eq(const AstStmt &a, const AstStmt &b);

bool block_eq(const std::vector<std::unique_ptr<AstStmt>> &a,
              const std::vector<std::unique_ptr<AstStmt>> &b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); i++)
    if (!stmt_eq(*a[i], *b[i])) return false;
  return true;
}

bool stmt_eq(const AstStmt &a, const AstStmt &b) {
  if (a.k != b.k || a.name != b.name || a.label != b.label ||
      a.array_size != b.array_size || a.has_e != b.has_e)
    return false;
  if (a.k == SK::Decl && a.decl_type != b.decl_type) return false;
  if (!opt_expr_eq(a.lhs, b.lhs) || !opt_expr_eq(a.e, b.e)) return false;
  if (!block_eq(a.body, b.body) || !block_eq(a.els, b.els)) return false;
  if (!a.init_stmt != !b.init_stmt || !a.step_stmt != !b.step_stmt)
    return false;
  if (a.init_stmt && !stmt_eq(*a.init_stmt, *b.init_stmt)) return false;
  if (a.step_stmt && !stmt_eq(*a.step_stmt, *b.step_stmt)) return false;
  return true;
}

} // namespace

Ast parse(const std::string &text, const std::string &file) {
  std::unordered_map<std::string, std::vector<Tok>> macros;
  Lexer lex(text, file);
  std::vector<Tok> toks = lex.run(macros);
  Stream s(std::move(toks), std::move(macros), file);
  Parser p(s);
  return p.run();
}

std::string pretty_print(const Ast &ast) {
  std::ostringstream os;
  for (const AstGlobal &g : ast.globals) {
    os << type_name(g.type) << " " << g.name;
    if (g.array_size) os << "[" << g.array_size << "]";
    if (g.init) {
      os << " = ";
      print_expr(os, *g.init);
    }
    os << ";\n";
  }
  for (const AstFunc &f : ast.funcs) {
    os << (f.is_void ? "void" : type_name(f.ret)) << " " << f.name << "(";
    for (size_t i = 0; i < f.params.size(); i++) {
      if (i) os << ", ";
      os << type_name(f.params[i].type) << " " << f.params[i].name;
    }
    os << ") ";
    print_block(os, f.body, 0);
    os << "\n";
  }
  return os.str();
}

bool ast_equal(const Ast &a, const Ast &b) {
  if (a.globals.size() != b.globals.size() || a.funcs.size() != b.funcs.size())
    return false;
  for (size_t i = 0; i < a.globals.size(); i++) {
    const AstGlobal &x = a.globals[i], &y = b.globals[i];
    if (x.name != y.name || x.type != y.type || x.array_size != y.array_size)
      return false;
    if (!x.init != !y.init) return false;
    if (x.init && !expr_eq(*x.init, *y.init)) return false;
  }
  for (size_t i = 0; i < a.funcs.size(); i++) {
    const AstFunc &x = a.funcs[i], &y = b.funcs[i];
    if (x.name != y.name || x.is_void != y.is_void) return false;
    if (!x.is_void && x.ret != y.ret) return false;
    if (x.params.size() != y.params.size()) return false;
    for (size_t j = 0; j < x.params.size(); j++)
      if (x.params[j].name != y.params[j].name ||
          x.params[j].type != y.params[j].type)
        return false;
    if (!block_eq(x.body, y.body)) return false;
  }
  return true;
}

} // namespace eqc::minic
