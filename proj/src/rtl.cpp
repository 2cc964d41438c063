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

#include "eqc/rtl.h"

#include <algorithm>
#include <cstdint>
#include <unordered_set>

#include "eqc/eval.h"

namespace eqc::rtl {

namespace {

struct Token {
  enum class Kind { Ident, Number, Punct, Eof } kind = Kind::Eof;
  std::string text;
  uint64_t value = 0;
  unsigned size = 0; // literal width, 0 when unsized
  unsigned line = 1;
};

class Lexer {
public:
  Lexer(const std::string &text, const std::string &file)
      : s_(text), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_space();
      if (i_ >= s_.size()) break;
      out.push_back(next());
    }
    out.push_back({Token::Kind::Eof, "", 0, 0, line_});
    return out;
  }

private:
  void skip_space() {
    while (i_ < s_.size()) {
      char c = s_[i_];
      if (c == '\n') {
        line_++;
        i_++;
      } else if (std::isspace((unsigned char)c)) {
        i_++;
      } else if (c == '/' && i_ + 1 < s_.size() && s_[i_ + 1] == '/') {
        while (i_ < s_.size() && s_[i_] != '\n') i_++;
      } else if (c == '/' && i_ + 1 < s_.size() && s_[i_ + 1] == '*') {
        i_ += 2;
        while (i_ + 1 < s_.size() && !(s_[i_] == '*' && s_[i_ + 1] == '/')) {
          if (s_[i_] == '\n') line_++;
          i_++;
        }
        if (i_ + 1 >= s_.size()) err("unterminated comment");
        i_ += 2;
      } else {
        break;
      }
    }
  }

  Token next() {
    char c = s_[i_];
    unsigned ln = line_;
    if (std::isalpha((unsigned char)c) || c == '_') {
      size_t b = i_;
      while (i_ < s_.size() &&
             (std::isalnum((unsigned char)s_[i_]) || s_[i_] == '_'))
        i_++;
      return {Token::Kind::Ident, s_.substr(b, i_ - b), 0, 0, ln};
    }
    if (std::isdigit((unsigned char)c)) return number(ln);
    static const char *two[] = {"<=", ">=", "==", "!=", "<<", ">>",
                                "&&", "||", nullptr};
    for (int k = 0; two[k]; k++) {
      if (s_.compare(i_, 2, two[k]) == 0) {
        i_ += 2;
        return {Token::Kind::Punct, two[k], 0, 0, ln};
      }
    }
    static const std::string one = "()[]{}:;,@?|&^~+-*/%<>!=.";
    if (one.find(c) != std::string::npos) {
      i_++;
      return {Token::Kind::Punct, std::string(1, c), 0, 0, ln};
    }
    err(std::string("stray character '") + c + "'");
    return {};
  }

  Token number(unsigned ln) {
    size_t b = i_;
    while (i_ < s_.size() && std::isdigit((unsigned char)s_[i_])) i_++;
    uint64_t dec = std::stoull(s_.substr(b, i_ - b));
    if (i_ >= s_.size() || s_[i_] != '\'')
      return {Token::Kind::Number, s_.substr(b, i_ - b), dec, 0, ln};
    i_++;
    if (i_ >= s_.size()) err("missing base after '");
    char base = (char)std::tolower((unsigned char)s_[i_++]);
    unsigned radix = base == 'b' ? 2 : base == 'd' ? 10 : base == 'h' ? 16 : 0;
    if (radix == 0) err("unsupported literal base, use 'b, 'd or 'h");
    if (dec == 0 || dec > 64) err("literal width must be 1..64");
    size_t vb = i_;
    uint64_t v = 0;
    while (i_ < s_.size() && (std::isalnum((unsigned char)s_[i_]) ||
                              s_[i_] == '_')) {
      char d = (char)std::tolower((unsigned char)s_[i_]);
      if (d == '_') {
        i_++;
        continue;
      }
      unsigned dv;
      if (d >= '0' && d <= '9') dv = (unsigned)(d - '0');
      else if (d >= 'a' && d <= 'f') dv = (unsigned)(d - 'a' + 10);
      else break;
      if (dv >= radix) err("digit out of range for base");
      v = v * radix + dv;
      i_++;
    }
    if (i_ == vb) err("missing digits in sized literal");
    unsigned w = (unsigned)dec;
    if (w < 64 && (v >> w) != 0) err("literal value does not fit its width");
    return {Token::Kind::Number, s_.substr(b, i_ - b), v, w, ln};
  }

  [[noreturn]] void err(const std::string &msg) {
    throw RtlError(file_, line_, msg);
  }

  const std::string &s_;
  std::string file_;
  size_t i_ = 0;
  unsigned line_ = 1;
};

// Parsed value: bits expression plus bool/unsized markers used for
// width adaptation.
struct Val {
  Expr e;
  bool is_bool = false;
  bool unsized = false;
};

class Parser {
public:
  Parser(const std::string &text, const std::string &file, ExprArena &arena)
      : toks_(Lexer(text, file).run()), file_(file), A_(arena) {}

  RtlModule run() {
    m_.file = file_;
    expect_kw("module");
    m_.name = expect_ident("module name");
    expect("(");
    if (!at(")")) {
      header_.push_back(expect_ident("port name"));
      while (accept(",")) header_.push_back(expect_ident("port name"));
    }
    expect(")");
    expect(";");
    while (!at_kw("endmodule")) item();
    expect_kw("endmodule");
    if (!at_eof()) err("trailing text after endmodule");
    finish();
    return std::move(m_);
  }

private:
  // token plumbing
  const Token &cur() const { return toks_[pos_]; }
  bool at_eof() const { return cur().kind == Token::Kind::Eof; }
  bool at(const std::string &p) const {
    return cur().kind == Token::Kind::Punct && cur().text == p;
  }
  bool at_kw(const std::string &k) const {
    return cur().kind == Token::Kind::Ident && cur().text == k;
  }
  bool accept(const std::string &p) {
    if (!at(p)) return false;
    pos_++;
    return true;
  }
  void expect(const std::string &p) {
    if (!accept(p)) err("expected '" + p + "'");
  }
  void expect_kw(const std::string &k) {
    if (!at_kw(k)) err("expected '" + k + "'");
    pos_++;
  }
  std::string expect_ident(const std::string &what) {
    if (cur().kind != Token::Kind::Ident) err("expected " + what);
    return toks_[pos_++].text;
  }
  [[noreturn]] void err(const std::string &msg) const {
    throw RtlError(file_, cur().line, msg);
  }
  [[noreturn]] void err_at(unsigned line, const std::string &msg) const {
    throw RtlError(file_, line, msg);
  }

  // declarations
  void item() {
    if (at_kw("input") || at_kw("output") || at_kw("reg") || at_kw("wire")) {
      decl();
    } else if (at_kw("assign")) {
      cont_assign();
    } else if (at_kw("always")) {
      always_block();
    } else {
      err("expected declaration, assign or always");
    }
  }

  unsigned range_width() {
    if (!accept("[")) return 1;
    if (cur().kind != Token::Kind::Number || cur().size != 0)
      err("expected constant msb");
    uint64_t msb = toks_[pos_++].value;
    expect(":");
    if (cur().kind != Token::Kind::Number || toks_[pos_].value != 0)
      err("range lsb must be 0");
    pos_++;
    expect("]");
    if (msb >= 64) err("width must be 1..64");
    return (unsigned)msb + 1;
  }

  void decl() {
    std::string kw = toks_[pos_++].text;
    unsigned w = range_width();
    do {
      unsigned ln = cur().line;
      std::string name = expect_ident("signal name");
      auto it = widths_.find(name);
      if (it != widths_.end() && it->second != w)
        err_at(ln, "conflicting widths for '" + name + "'");
      widths_[name] = w;
      if (kw == "input" || kw == "output") {
        if (dir_.count(name))
          err_at(ln, "duplicate direction for '" + name + "'");
        dir_[name] = (kw == "input");
      } else {
        if (kind_.count(name))
          err_at(ln, "duplicate reg/wire declaration of '" + name + "'");
        kind_[name] = (kw == "reg");
      }
    } while (accept(","));
    expect(";");
  }

  void cont_assign() {
    pos_++; // assign
    unsigned ln = cur().line;
    std::string lhs = expect_ident("wire name");
    expect("=");
    Expr rhs = bits_expr(width_of(lhs, ln), ln);
    expect(";");
    m_.assigns.push_back({lhs, rhs, ln});
  }

  void always_block() {
    unsigned ln = cur().line;
    pos_++; // always
    expect("@");
    expect("(");
    expect_kw("posedge");
    std::string clk = expect_ident("clock name");
    if (!m_.clock.empty() && m_.clock != clk)
      err("all always blocks must use one clock");
    m_.clock = clk;
    expect(")");
    RtlAlways blk;
    blk.line = ln;
    blk.body.push_back(stmt());
    m_.always.push_back(std::move(blk));
  }

  RtlStmt stmt() {
    RtlStmt s;
    s.line = cur().line;
    if (at_kw("begin")) {
      pos_++;
      s.kind = RtlStmt::Kind::If; // block sugar: if (1) ...
      s.cond = A_.tru();
      while (!at_kw("end")) s.then_body.push_back(stmt());
      pos_++;
      return s;
    }
    if (at_kw("if")) {
      pos_++;
      expect("(");
      s.kind = RtlStmt::Kind::If;
      s.cond = bool_expr();
      expect(")");
      s.then_body.push_back(stmt());
      if (at_kw("else")) {
        pos_++;
        s.else_body.push_back(stmt());
      }
      return s;
    }
    unsigned ln = cur().line;
    std::string lhs = expect_ident("statement");
    if (at("=")) err("blocking assignment is not allowed in always blocks");
    expect("<=");
    s.kind = RtlStmt::Kind::NonBlocking;
    s.lhs = lhs;
    s.rhs = bits_expr(width_of(lhs, ln), ln);
    s.line = ln;
    expect(";");
    return s;
  }

  // expressions
  unsigned width_of(const std::string &name, unsigned ln) const {
    auto it = widths_.find(name);
    if (it == widths_.end()) err_at(ln, "undeclared signal '" + name + "'");
    return it->second;
  }

  Expr as_bits(const Val &v) const {
    return v.is_bool ? A_.bool_to_bits(v.e) : v.e;
  }

  Expr as_bool(const Val &v) const {
    if (v.is_bool) return v.e;
    return A_.ne(v.e, A_.constant(v.e.type(), 0));
  }

  // Re-widths an unsized literal; sized operands must match exactly.
  Val fit(const Val &v, unsigned w, unsigned ln) const {
    Val r = v;
    if (r.is_bool) {
      r.e = A_.bool_to_bits(r.e);
      r.is_bool = false;
    }
    if (r.unsized) {
      uint64_t raw = r.e.const_value();
      if (w < 64 && (raw >> w) != 0)
        err_at(ln, "literal does not fit in " + std::to_string(w) + " bits");
      r.e = A_.constant(Type::ubits(w), raw);
      r.unsized = false;
    } else if (r.e.type().width() != w) {
      err_at(ln, "width mismatch (" + std::to_string(r.e.type().width()) +
                     " vs " + std::to_string(w) + ")");
    }
    return r;
  }

  // Unifies two operand widths: unsized literals adapt, sized widths
  // must agree. Returns the common width.
  unsigned unify(Val &a, Val &b, unsigned ln) const {
    if (a.is_bool) {
      a.e = A_.bool_to_bits(a.e);
      a.is_bool = false;
    }
    if (b.is_bool) {
      b.e = A_.bool_to_bits(b.e);
      b.is_bool = false;
    }
    unsigned w;
    if (a.unsized && b.unsized) w = 32;
    else if (a.unsized) w = b.e.type().width();
    else if (b.unsized) w = a.e.type().width();
    else {
      w = a.e.type().width();
      if (b.e.type().width() != w)
        err_at(ln, "width mismatch (" + std::to_string(w) + " vs " +
                       std::to_string(b.e.type().width()) + ")");
    }
    a = fit(a, w, ln);
    b = fit(b, w, ln);
    return w;
  }

  Expr bits_expr(unsigned target, unsigned ln) {
    Val v = ternary();
    return fit(v, target, ln).e;
  }

  Expr bool_expr() { return as_bool(ternary()); }

  Val ternary() {
    Val c = or_logic();
    if (!accept("?")) return c;
    unsigned ln = cur().line;
    Expr cond = as_bool(c);
    Val t = ternary();
    expect(":");
    Val e = ternary();
    if (t.is_bool && e.is_bool) return {A_.ite(cond, t.e, e.e), true, false};
    unify(t, e, ln);
    return {A_.ite(cond, t.e, e.e), false, false};
  }

  Val or_logic() {
    Val a = and_logic();
    while (at("||")) {
      unsigned ln = cur().line;
      pos_++;
      Val b = and_logic();
      (void)ln;
      a = {A_.or_(as_bool(a), as_bool(b)), true, false};
    }
    return a;
  }

  Val and_logic() {
    Val a = bit_or();
    while (at("&&")) {
      pos_++;
      Val b = bit_or();
      a = {A_.and_(as_bool(a), as_bool(b)), true, false};
    }
    return a;
  }

  Val bit_or() {
    Val a = bit_xor();
    while (at("|")) {
      unsigned ln = cur().line;
      pos_++;
      Val b = bit_xor();
      unify(a, b, ln);
      a = {A_.bitor_(a.e, b.e), false, false};
    }
    return a;
  }

  Val bit_xor() {
    Val a = bit_and();
    while (at("^")) {
      unsigned ln = cur().line;
      pos_++;
      Val b = bit_and();
      unify(a, b, ln);
      a = {A_.bitxor_(a.e, b.e), false, false};
    }
    return a;
  }

  Val bit_and() {
    Val a = equality();
    while (at("&")) {
      unsigned ln = cur().line;
      pos_++;
      Val b = equality();
      unify(a, b, ln);
      a = {A_.bitand_(a.e, b.e), false, false};
    }
    return a;
  }

  Val equality() {
    Val a = relational();
    while (at("==") || at("!=")) {
      bool eq = at("==");
      unsigned ln = cur().line;
      pos_++;
      Val b = relational();
      unify(a, b, ln);
      a = {eq ? A_.eq(a.e, b.e) : A_.ne(a.e, b.e), true, false};
    }
    return a;
  }

  Val relational() {
    Val a = shift();
    while (at("<") || at("<=") || at(">") || at(">=")) {
      std::string op = cur().text;
      unsigned ln = cur().line;
      pos_++;
      Val b = shift();
      unify(a, b, ln);
      Expr e;
      if (op == "<") e = A_.ult(a.e, b.e);
      else if (op == "<=") e = A_.ule(a.e, b.e);
      else if (op == ">") e = A_.ult(b.e, a.e);
      else e = A_.ule(b.e, a.e);
      a = {e, true, false};
    }
    return a;
  }

  Val shift() {
    Val a = additive();
    while (at("<<") || at(">>")) {
      bool left = at("<<");
      unsigned ln = cur().line;
      pos_++;
      Val b = additive();
      if (a.is_bool || a.unsized) a = fit(a, a.unsized ? 32 : 1, ln);
      unsigned w = a.e.type().width();
      Val amt = b;
      if (amt.is_bool || amt.unsized) amt = fit(amt, w, ln);
      Expr sh = amt.e.type().width() == w ? amt.e
                : amt.e.type().width() < w ? A_.zext(amt.e, w)
                                           : A_.trunc(amt.e, w);
      // shift amounts >= width must still yield 0, so guard wide amounts
      if (amt.e.type().width() > w) {
        Expr big = A_.ule(A_.constant(amt.e.type(), w), amt.e);
        Expr z = A_.constant(Type::ubits(w), 0);
        Expr shifted = left ? A_.shl(a.e, sh) : A_.lshr(a.e, sh);
        a = {A_.ite(big, z, shifted), false, false};
      } else {
        a = {left ? A_.shl(a.e, sh) : A_.lshr(a.e, sh), false, false};
      }
    }
    return a;
  }

  Val additive() {
    Val a = multiplicative();
    while (at("+") || at("-")) {
      bool add = at("+");
      unsigned ln = cur().line;
      pos_++;
      Val b = multiplicative();
      unify(a, b, ln);
      a = {add ? A_.add(a.e, b.e) : A_.sub(a.e, b.e), false, false};
    }
    return a;
  }

  Val multiplicative() {
    Val a = unary();
    while (at("*") || at("/") || at("%")) {
      std::string op = cur().text;
      unsigned ln = cur().line;
      pos_++;
      Val b = unary();
      unify(a, b, ln);
      Expr e = op == "*"   ? A_.mul(a.e, b.e)
               : op == "/" ? A_.udiv(a.e, b.e)
                           : A_.urem(a.e, b.e);
      a = {e, false, false};
    }
    return a;
  }

  Val unary() {
    unsigned ln = cur().line;
    if (accept("!")) return {A_.not_(as_bool(unary())), true, false};
    if (accept("~")) {
      Val v = unary();
      v = fit(v, v.unsized ? 32 : (v.is_bool ? 1 : v.e.type().width()), ln);
      return {A_.bitnot(v.e), false, false};
    }
    if (accept("-")) {
      Val v = unary();
      v = fit(v, v.unsized ? 32 : (v.is_bool ? 1 : v.e.type().width()), ln);
      return {A_.neg(v.e), false, false};
    }
    return primary();
  }

  Val primary() {
    unsigned ln = cur().line;
    if (accept("(")) {
      Val v = ternary();
      expect(")");
      return v;
    }
    if (at("{")) return concat_expr();
    if (cur().kind == Token::Kind::Number) {
      Token t = toks_[pos_++];
      if (t.size == 0)
        return {A_.constant(Type::ubits(32), t.value), false, true};
      return {A_.constant(Type::ubits(t.size), t.value), false, false};
    }
    std::string name = expect_ident("expression");
    unsigned w = width_of(name, ln);
    if (name == m_.clock)
      err_at(ln, "clock '" + name + "' cannot be used in an expression");
    used_.insert(name);
    Expr v = A_.var(name, Type::ubits(w));
    if (accept("[")) {
      if (cur().kind != Token::Kind::Number || cur().size != 0)
        err("expected constant bit index");
      uint64_t hi = toks_[pos_++].value;
      uint64_t lo = hi;
      if (accept(":")) {
        if (cur().kind != Token::Kind::Number || cur().size != 0)
          err("expected constant lsb index");
        lo = toks_[pos_++].value;
      }
      expect("]");
      if (hi < lo || hi >= w) err_at(ln, "bit select out of range");
      return {A_.extract(v, (unsigned)hi, (unsigned)lo), false, false};
    }
    return {v, false, false};
  }

  Val concat_expr() {
    unsigned ln = cur().line;
    expect("{");
    std::vector<Expr> parts;
    unsigned total = 0;
    do {
      Val v = ternary();
      if (v.is_bool) {
        v.e = A_.bool_to_bits(v.e);
        v.is_bool = false;
      }
      if (v.unsized) err("unsized literal in concatenation");
      total += v.e.type().width();
      parts.push_back(v.e);
    } while (accept(","));
    expect("}");
    if (total > 64) err_at(ln, "concatenation wider than 64 bits");
    Expr e = parts[0];
    for (size_t i = 1; i < parts.size(); i++) e = A_.concat(e, parts[i]);
    return {e, false, false};
  }

  // final wiring checks
  void finish() {
    for (const auto &p : header_) {
      auto d = dir_.find(p);
      if (d == dir_.end()) err_at(1, "port '" + p + "' has no direction");
      m_.ports.push_back({p, widths_.at(p), d->second});
    }
    for (const auto &[name, is_in] : dir_)
      if (std::find(header_.begin(), header_.end(), name) == header_.end())
        err_at(1, "'" + name + "' declared " +
                      (is_in ? "input" : "output") +
                      " but missing from the port list");
    for (const auto &[name, is_reg] : kind_) {
      auto d = dir_.find(name);
      if (d != dir_.end() && d->second && is_reg)
        err_at(1, "input '" + name + "' cannot be a register");
    }
    for (const auto &[name, w] : widths_) {
      (void)w;
      auto k = kind_.find(name);
      bool is_reg = k != kind_.end() && k->second;
      auto d = dir_.find(name);
      bool is_in = d != dir_.end() && d->second;
      if (is_reg) m_.regs.push_back(name);
      else if (!is_in) m_.wires.push_back(name);
    }
    std::sort(m_.regs.begin(), m_.regs.end());
    std::sort(m_.wires.begin(), m_.wires.end());
    m_.widths = widths_;

    if (!m_.clock.empty()) {
      auto d = dir_.find(m_.clock);
      if (d == dir_.end() || !d->second)
        err_at(1, "clock '" + m_.clock + "' must be an input port");
    }

    // driver discipline
    std::unordered_map<std::string, unsigned> wire_drivers;
    for (const auto &a : m_.assigns) {
      if (dir_.count(a.lhs) && dir_.at(a.lhs))
        err_at(a.line, "assign drives input '" + a.lhs + "'");
      if (kind_.count(a.lhs) && kind_.at(a.lhs))
        err_at(a.line, "assign drives register '" + a.lhs + "'");
      if (!widths_.count(a.lhs))
        err_at(a.line, "undeclared signal '" + a.lhs + "'");
      if (wire_drivers.count(a.lhs))
        err_at(a.line, "multiply driven wire '" + a.lhs + "'");
      wire_drivers[a.lhs] = a.line;
    }
    for (const auto &w : m_.wires)
      if (!wire_drivers.count(w)) err_at(1, "wire '" + w + "' has no driver");

    // wire-to-wire dependency cycles
    std::unordered_map<std::string, const RtlAssign *> def_of;
    for (const auto &a : m_.assigns) def_of[a.lhs] = &a;
    std::unordered_map<std::string, int> mark; // 0 new, 1 open, 2 done
    auto dfs = [&](const std::string &root) {
      std::vector<std::pair<std::string, bool>> stack{{root, false}};
      while (!stack.empty()) {
        auto [cur, expanded] = stack.back();
        stack.pop_back();
        if (expanded) {
          mark[cur] = 2;
          continue;
        }
        if (mark[cur] == 2) continue;
        if (mark[cur] == 1)
          err_at(def_of.at(cur)->line,
                 "combinational cycle through '" + cur + "'");
        mark[cur] = 1;
        stack.push_back({cur, true});
        std::vector<Expr> vars;
        collect_vars(def_of.at(cur)->rhs, vars);
        for (const auto &v : vars) {
          const std::string &name = v.var_name();
          if (!def_of.count(name)) continue;
          if (mark[name] == 1)
            err_at(def_of.at(name)->line,
                   "combinational cycle through '" + name + "'");
          if (mark[name] != 2) stack.push_back({name, false});
        }
      }
    };
    for (const auto &w : m_.wires)
      if (mark[w] != 2) dfs(w);

    std::unordered_map<std::string, unsigned> reg_block;
    for (size_t b = 0; b < m_.always.size(); b++) {
      std::vector<const RtlStmt *> work;
      for (const auto &s : m_.always[b].body) work.push_back(&s);
      while (!work.empty()) {
        const RtlStmt *s = work.back();
        work.pop_back();
        if (s->kind == RtlStmt::Kind::If) {
          for (const auto &t : s->then_body) work.push_back(&t);
          for (const auto &t : s->else_body) work.push_back(&t);
          continue;
        }
        const std::string &r = s->lhs;
        auto k = kind_.find(r);
        if (k == kind_.end() || !k->second)
          err_at(s->line, "nonblocking assignment to non-register '" + r +
                              "'");
        auto it = reg_block.find(r);
        if (it != reg_block.end() && it->second != b)
          err_at(s->line, "multiply driven register '" + r + "'");
        reg_block[r] = (unsigned)b;
      }
    }
    for (const auto &r : m_.regs)
      if (!reg_block.count(r))
        err_at(1, "register '" + r + "' has no driving block");
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::string file_;
  ExprArena &A_;
  RtlModule m_;
  std::vector<std::string> header_;
  std::unordered_map<std::string, unsigned> widths_;
  std::unordered_map<std::string, bool> dir_;  // true = input
  std::unordered_map<std::string, bool> kind_; // true = reg
  std::unordered_set<std::string> used_;
};

} // namespace

bool RtlModule::is_reg(const std::string &s) const {
  return std::find(regs.begin(), regs.end(), s) != regs.end();
}

unsigned RtlModule::width_of(const std::string &s) const {
  auto it = widths.find(s);
  return it == widths.end() ? 0 : it->second;
}

RtlModule parse_rtl(const std::string &text, const std::string &file,
                    ExprArena &arena) {
  return Parser(text, file, arena).run();
}

namespace {

void fold_stmts(const std::vector<RtlStmt> &stmts, ExprArena &A,
                std::unordered_map<std::string, Expr> &env);

void fold_stmt(const RtlStmt &s, ExprArena &A,
               std::unordered_map<std::string, Expr> &env) {
  if (s.kind == RtlStmt::Kind::NonBlocking) {
    env[s.lhs] = s.rhs;
    return;
  }
  if (s.cond.is_true()) { // begin/end sugar
    fold_stmts(s.then_body, A, env);
    return;
  }
  auto env_t = env;
  auto env_e = env;
  fold_stmts(s.then_body, A, env_t);
  fold_stmts(s.else_body, A, env_e);
  for (auto &[r, cur] : env) {
    Expr t = env_t.at(r);
    Expr e = env_e.at(r);
    cur = t == e ? t : A.ite(s.cond, t, e);
  }
}

void fold_stmts(const std::vector<RtlStmt> &stmts, ExprArena &A,
                std::unordered_map<std::string, Expr> &env) {
  for (const auto &s : stmts) fold_stmt(s, A, env);
}

void collect_regs(const RtlStmt &s, std::vector<std::string> &out) {
  if (s.kind == RtlStmt::Kind::NonBlocking) {
    out.push_back(s.lhs);
    return;
  }
  for (const auto &t : s.then_body) collect_regs(t, out);
  for (const auto &t : s.else_body) collect_regs(t, out);
}

} // namespace

TransitionSystem elaborate(const RtlModule &m, ExprArena &arena) {
  TransitionSystem ts;
  ts.name = m.name;
  ts.ports = m.ports;
  for (const auto &p : m.ports)
    if (p.is_input && p.name != m.clock) ts.inputs.push_back(p);
  for (const auto &r : m.regs) ts.state.push_back({r, m.width_of(r)});

  for (const auto &blk : m.always) {
    std::vector<std::string> regs;
    for (const auto &s : blk.body) collect_regs(s, regs);
    std::unordered_map<std::string, Expr> env;
    for (const auto &r : regs)
      env.emplace(r, arena.var(r, Type::ubits(m.width_of(r))));
    fold_stmts(blk.body, arena, env);
    for (auto &[r, e] : env) ts.next[r] = e;
  }

  // wires in dependency order, then inline transitively
  std::unordered_map<std::string, const RtlAssign *> def_of;
  for (const auto &a : m.assigns) def_of[a.lhs] = &a;
  std::unordered_map<std::string, int> mark; // 0 new, 1 open, 2 done
  std::vector<std::string> topo;
  std::vector<std::pair<std::string, bool>> stack; // (wire, expanded)
  for (const auto &w : m.wires) {
    if (mark[w] == 2) continue;
    stack.push_back({w, false});
    while (!stack.empty()) {
      auto [cur, expanded] = stack.back();
      stack.pop_back();
      if (expanded) {
        mark[cur] = 2;
        topo.push_back(cur);
        continue;
      }
      if (mark[cur] == 2) continue;
      if (mark[cur] == 1)
        throw RtlError(m.file, def_of.at(cur)->line,
                       "combinational cycle through '" + cur + "'");
      mark[cur] = 1;
      stack.push_back({cur, true});
      std::vector<Expr> vars;
      collect_vars(def_of.at(cur)->rhs, vars);
      for (const auto &v : vars) {
        const std::string &name = v.var_name();
        if (def_of.count(name)) {
          if (mark[name] == 1)
            throw RtlError(m.file, def_of.at(name)->line,
                           "combinational cycle through '" + name + "'");
          if (mark[name] != 2) stack.push_back({name, false});
        }
      }
    }
  }

  std::unordered_map<std::string, Expr> inlined;
  for (const auto &w : topo) {
    Expr e = subst_vars(arena, def_of.at(w)->rhs, inlined);
    inlined[w] = e;
    ts.wires.push_back({w, m.width_of(w)});
    ts.wire_def[w] = e;
  }
  for (auto &[r, e] : ts.next) e = subst_vars(arena, e, inlined);
  return ts;
}

bool TransitionSystem::has_signal(const std::string &s) const {
  if (next.count(s) || wire_def.count(s)) return true;
  for (const auto &p : inputs)
    if (p.name == s) return true;
  return false;
}

unsigned TransitionSystem::width_of(const std::string &s) const {
  for (const auto &[n, w] : state)
    if (n == s) return w;
  for (const auto &[n, w] : wires)
    if (n == s) return w;
  for (const auto &p : inputs)
    if (p.name == s) return p.width;
  return 0;
}

Expr frame_var(const TransitionSystem &ts, const std::string &name, unsigned k,
               ExprArena &arena) {
  unsigned w = ts.width_of(name);
  if (w == 0)
    throw std::invalid_argument("unknown signal '" + name + "' in module " +
                                ts.name);
  return arena.var(name + "@" + std::to_string(k), Type::ubits(w));
}

UnrolledRtl unroll(const TransitionSystem &ts, unsigned bound,
                   ExprArena &arena) {
  UnrolledRtl u;
  u.bound = bound;
  for (const auto &[r, w] : ts.state)
    u.free_vars.push_back(arena.var(r + "@0", Type::ubits(w)));
  for (unsigned k = 0; k <= bound; k++) {
    std::unordered_map<std::string, Expr> at_k;
    for (const auto &[r, w] : ts.state)
      at_k[r] = arena.var(r + "@" + std::to_string(k), Type::ubits(w));
    for (const auto &p : ts.inputs) {
      Expr iv = arena.var(p.name + "@" + std::to_string(k),
                          Type::ubits(p.width));
      at_k[p.name] = iv;
      u.free_vars.push_back(iv);
    }
    for (const auto &[w, width] : ts.wires) {
      (void)width;
      Expr wv = frame_var(ts, w, k, arena);
      u.defs.push_back({wv, subst_vars(arena, ts.wire_def.at(w), at_k)});
    }
    if (k < bound) {
      for (const auto &[r, width] : ts.state) {
        (void)width;
        Expr rv = frame_var(ts, r, k + 1, arena);
        u.defs.push_back({rv, subst_vars(arena, ts.next.at(r), at_k)});
      }
    }
  }
  return u;
}

std::vector<std::unordered_map<std::string, uint64_t>>
simulate(const TransitionSystem &ts,
         const std::vector<std::unordered_map<std::string, uint64_t>> &inputs,
         const std::unordered_map<std::string, uint64_t> &initial) {
  // the expressions' own variable nodes, so Env lookups hit
  std::vector<Expr> vars;
  for (const auto &[r, e] : ts.next) {
    (void)r;
    collect_vars(e, vars);
  }
  for (const auto &[w, e] : ts.wire_def) {
    (void)w;
    collect_vars(e, vars);
  }

  std::unordered_map<std::string, uint64_t> regs;
  for (const auto &[r, w] : ts.state) {
    auto it = initial.find(r);
    if (it == initial.end())
      throw std::invalid_argument("missing initial value for register '" + r +
                                  "'");
    regs[r] = truncate_to_width(it->second, w);
  }
  std::vector<std::unordered_map<std::string, uint64_t>> out;
  for (size_t k = 0; k < inputs.size(); k++) {
    std::unordered_map<std::string, uint64_t> frame = regs;
    for (const auto &p : ts.inputs) {
      auto it = inputs[k].find(p.name);
      if (it == inputs[k].end())
        throw std::invalid_argument("missing input '" + p.name +
                                    "' at frame " + std::to_string(k));
      frame[p.name] = truncate_to_width(it->second, p.width);
    }
    Env env;
    for (const auto &v : vars) {
      auto it = frame.find(v.var_name());
      if (it != frame.end()) env.set(v, it->second);
    }
    for (const auto &[w, width] : ts.wires) {
      (void)width;
      frame[w] = eval(ts.wire_def.at(w), env);
    }
    std::unordered_map<std::string, uint64_t> nxt;
    for (const auto &[r, w] : ts.state) {
      (void)w;
      nxt[r] = eval(ts.next.at(r), env);
    }
    regs = std::move(nxt);
    out.push_back(std::move(frame));
  }
  return out;
}

namespace {

const char *minic_type_for(unsigned w) {
  if (w == 1) return "bool";
  if (w <= 8) return "u8";
  if (w <= 16) return "u16";
  if (w <= 32) return "u32";
  return "u64";
}

} // namespace

std::string gen_interface(const RtlModule &m) {
  std::string out = "// mini-C interface for module " + m.name + "\n";
  std::vector<std::string> done;
  auto emit = [&](const std::string &sig) {
    if (std::find(done.begin(), done.end(), sig) != done.end()) return;
    done.push_back(sig);
    unsigned w = m.width_of(sig);
    out += std::string(minic_type_for(w)) + " " + m.name + "_" + sig + ";";
    if (w != 1 && w != 8 && w != 16 && w != 32 && w != 64)
      out += " // " + std::to_string(w) + " bits";
    out += "\n";
  };
  for (const auto &p : m.ports) emit(p.name);
  for (const auto &r : m.regs) emit(r);
  return out;
}

} // namespace eqc::rtl
