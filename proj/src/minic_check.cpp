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
#include <cstring>
#include <unordered_set>

namespace eqc::minic {

namespace {

struct VarInfo {
  Type type; // element type for arrays
  int array_size = 0;
  int site = -1; // -1 for globals
};

bool is_reserved_label(const std::string &s) {
  if (s.rfind("unwind.", 0) == 0) return true;
  auto digits_after = [&](const char *pfx) {
    size_t n = strlen(pfx);
    if (s.rfind(pfx, 0) != 0 || s.size() == n) return false;
    for (size_t i = n; i < s.size(); i++)
      if (!isdigit((unsigned char)s[i])) return false;
    return true;
  };
  return digits_after("a") || digits_after("bounds") || digits_after("nd") ||
         digits_after("ud");
}

struct BuiltinSig {
  Builtin b;
  int min_args, max_args;
};

const std::unordered_map<std::string, BuiltinSig> &builtin_table() {
  static const std::unordered_map<std::string, BuiltinSig> t = {
      {"fp_add", {Builtin::FpAdd, 2, 3}},
      {"fp_sub", {Builtin::FpSub, 2, 3}},
      {"fp_mul", {Builtin::FpMul, 2, 3}},
      {"fp_div", {Builtin::FpDiv, 2, 3}},
      {"fp_min", {Builtin::FpMin, 2, 2}},
      {"fp_max", {Builtin::FpMax, 2, 2}},
      {"fp_round", {Builtin::FpRound, 1, 2}},
      {"fp_is_nan", {Builtin::FpIsNan, 1, 1}},
      {"fp_is_inf", {Builtin::FpIsInf, 1, 1}},
      {"fp_is_zero", {Builtin::FpIsZero, 1, 1}},
      {"fp_is_subnormal", {Builtin::FpIsSubnormal, 1, 1}},
      {"fp_is_normal", {Builtin::FpIsNormal, 1, 1}},
      {"fp_eq", {Builtin::FpEq, 2, 2}},
      {"fp_lt", {Builtin::FpLt, 2, 2}},
      {"fp_le", {Builtin::FpLe, 2, 2}},
      {"fp_classify", {Builtin::FpClassify, 1, 1}},
      {"fp_bits", {Builtin::FpBits, 1, 1}},
      {"f32_of_bits", {Builtin::FpOfBits, 1, 1}},
      {"f64_of_bits", {Builtin::FpOfBits, 1, 1}},
      {"f8_of_bits", {Builtin::FpOfBits, 1, 1}},
  };
  return t;
}

bool nondet_type(const std::string &name, Type &out) {
  if (name.rfind("nondet_", 0) != 0) return false;
  return parse_type_name(name.substr(7), out);
}

class Checker {
public:
  explicit Checker(Ast &ast) : ast_(ast) {}

  void run() {
    for (AstFunc &f : ast_.funcs) {
      Type dummy;
      if (builtin_table().count(f.name) || nondet_type(f.name, dummy) ||
          f.name == "assume" || f.name == "assert")
        err(f.loc, "function name is reserved: " + f.name);
      if (!funcs_.emplace(f.name, &f).second)
        err(f.loc, "function redefined: " + f.name);
    }
    for (AstGlobal &g : ast_.globals) {
      if (globals_.count(g.name)) err(g.loc, "global redefined: " + g.name);
      if (g.type.is_float() && g.array_size)
        err(g.loc, "float arrays unsupported");
      if (g.init) {
        if (g.type.is_float())
          err(g.loc, "float global initializer unsupported");
        if (g.init->k != EK::IntLit && g.init->k != EK::BoolLit)
          err(g.init->loc, "global initializer must be a literal");
        check_expr(*g.init, &g.type);
        if (g.init->type != g.type)
          err(g.init->loc, "type mismatch in global initializer");
      }
      globals_[g.name] = {g.type, g.array_size, -1};
    }
    for (AstFunc &f : ast_.funcs) check_func(f);
  }

private:
  [[noreturn]] void err(SrcLoc loc, const std::string &msg) {
    throw CompileError(ast_.file + ":" + std::to_string(loc.line) + ":" +
                       std::to_string(loc.col) + ": error: " + msg);
  }

  void check_func(AstFunc &f) {
    cur_ = &f;
    loop_ord_ = 0;
    scopes_.clear();
    scopes_.emplace_back();
    for (Param &p : f.params) declare(p.loc, p.name, p.type, 0, &p.site);
    for (auto &s : f.body) check_stmt(*s);
    scopes_.pop_back();
    cur_ = nullptr;
  }

  void declare(SrcLoc loc, const std::string &name, Type t, int array_size,
               int *site_out) {
    for (const auto &sc : scopes_)
      if (sc.count(name)) err(loc, "redeclaration shadows " + name);
    if (globals_.count(name)) err(loc, "redeclaration shadows global " + name);
    int site = next_decl_++;
    scopes_.back()[name] = {t, array_size, site};
    if (site_out) *site_out = site;
  }

  const VarInfo *lookup(const std::string &name) {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it) {
      auto f = it->find(name);
      if (f != it->end()) return &f->second;
    }
    auto g = globals_.find(name);
    return g == globals_.end() ? nullptr : &g->second;
  }

  void check_stmt(AstStmt &s) {
    switch (s.k) {
    case SK::Block:
      scopes_.emplace_back();
      for (auto &b : s.body) check_stmt(*b);
      scopes_.pop_back();
      return;
    case SK::Decl:
      if (s.decl_type.is_float() && s.array_size)
        err(s.loc, "float arrays unsupported");
      if (s.has_e) {
        check_expr(*s.e, &s.decl_type);
        coerce(s.e, s.decl_type);
      }
      declare(s.loc, s.name, s.decl_type, s.array_size, &s.site);
      return;
    case SK::Assign: {
      Type lt = check_lvalue(*s.lhs);
      check_expr(*s.e, &lt);
      coerce(s.e, lt);
      return;
    }
    case SK::If:
      check_cond(*s.e);
      scopes_.emplace_back();
      for (auto &b : s.body) check_stmt(*b);
      scopes_.pop_back();
      scopes_.emplace_back();
      for (auto &b : s.els) check_stmt(*b);
      scopes_.pop_back();
      return;
    case SK::While:
    case SK::For:
      s.loop_ord = loop_ord_++;
      s.loop_id = cur_->name + "." + std::to_string(s.loop_ord);
      scopes_.emplace_back();
      if (s.init_stmt) check_stmt(*s.init_stmt);
      check_cond(*s.e);
      for (auto &b : s.body) check_stmt(*b);
      if (s.step_stmt) check_stmt(*s.step_stmt);
      scopes_.pop_back();
      return;
    case SK::Return:
      if (cur_->is_void) {
        if (s.has_e) err(s.loc, "void function returns a value");
      } else {
        if (!s.has_e) err(s.loc, "missing return value");
        check_expr(*s.e, &cur_->ret);
        coerce(s.e, cur_->ret);
      }
      return;
    case SK::CallStmt:
      check_expr(*s.e, nullptr, true);
      return;
    case SK::Assume:
      check_cond(*s.e);
      return;
    case SK::Assert:
      check_cond(*s.e);
      s.site = next_assert_++;
      if (!s.label.empty()) {
        if (is_reserved_label(s.label))
          err(s.loc, "assert label uses a reserved form: " + s.label);
        if (!user_labels_.insert(s.label).second)
          err(s.loc, "duplicate assert label: " + s.label);
      }
      return;
    }
  }

  Type check_lvalue(AstExpr &e) {
    const VarInfo *vi = lookup(e.name);
    if (!vi) err(e.loc, "undeclared identifier: " + e.name);
    e.ref_site = vi->site;
    e.typed = true;
    if (e.k == EK::Ident) {
      if (vi->array_size) err(e.loc, "array used as a scalar");
      e.type = vi->type;
      return e.type;
    }
    if (!vi->array_size) err(e.loc, "indexing a scalar");
    e.ref_array_size = vi->array_size;
    e.site = next_index_++;
    Type it = check_expr(*e.kids[0], nullptr);
    if (!it.is_bits()) err(e.kids[0]->loc, "index must be an integer");
    const_index_check(*e.kids[0], vi->array_size);
    e.type = vi->type;
    return e.type;
  }

  void const_index_check(const AstExpr &ix, int size) {
    if (ix.k == EK::IntLit && ix.ival >= (uint64_t)size)
      err(ix.loc, "index out of bounds");
  }

  void check_cond(AstExpr &e) {
    Type t = check_expr(e, nullptr);
    if (!t.is_bool() && !t.is_bits())
      err(e.loc, "condition must be bool or integer");
  }

  // Inserts a widening cast around *slot.
  void widen(std::unique_ptr<AstExpr> &slot, Type to) {
    auto c = std::make_unique<AstExpr>();
    c->k = EK::Cast;
    c->loc = slot->loc;
    c->cast_to = to;
    c->type = to;
    c->typed = true;
    c->kids.push_back(std::move(slot));
    slot = std::move(c);
  }

  // Makes an already-checked expression assignable to `to`.
  void coerce(std::unique_ptr<AstExpr> &slot, Type to) {
    Type from = slot->type;
    if (from == to) return;
    if (from.is_bits() && to.is_bits() &&
        from.is_signed() == to.is_signed() && from.width() < to.width()) {
      widen(slot, to);
      return;
    }
    err(slot->loc, "type mismatch: cannot assign " + type_name(from) +
                       " to " + type_name(to) + " implicitly");
  }

  Type unify_bits(std::unique_ptr<AstExpr> &a, std::unique_ptr<AstExpr> &b,
                  SrcLoc loc) {
    Type ta = a->type, tb = b->type;
    if (!ta.is_bits() || !tb.is_bits())
      err(loc, "type mismatch: expected integer operands");
    if (ta == tb) return ta;
    if (ta.is_signed() != tb.is_signed())
      err(loc, "signedness mismatch; cast one operand explicitly");
    if (ta.width() < tb.width()) {
      widen(a, tb);
      return tb;
    }
    widen(b, ta);
    return ta;
  }

  bool truthy_ok(Type t) { return t.is_bool() || t.is_bits(); }

  bool has_user_call(const AstExpr &e) {
    if (e.k == EK::Call && e.builtin == Builtin::None) return true;
    for (const auto &k : e.kids)
      if (k && k->typed && has_user_call(*k)) return true;
    return false;
  }

  // Checks operands of a symmetric operator, adapting a literal side
  // to the other side's type.
  void check_pair(AstExpr &e, const Type *hint) {
    auto &k0 = e.kids[0], &k1 = e.kids[1];
    if (k0->k == EK::IntLit && k1->k != EK::IntLit) {
      Type t1 = check_expr(*k1, hint);
      check_expr(*k0, &t1);
    } else {
      Type t0 = check_expr(*k0, hint);
      check_expr(*k1, &t0);
    }
  }

  Type check_expr(AstExpr &e, const Type *hint, bool allow_void = false) {
    switch (e.k) {
    case EK::IntLit: {
      Type t = (hint && hint->is_bits()) ? *hint : Type::ubits(32);
      if (t.width() < 64 && e.ival >> t.width())
        err(e.loc, "integer literal does not fit " + type_name(t));
      e.type = t;
      break;
    }
    case EK::BoolLit:
      e.type = Type::bool_();
      break;
    case EK::Ident: {
      const VarInfo *vi = lookup(e.name);
      if (!vi) err(e.loc, "undeclared identifier: " + e.name);
      if (vi->array_size) err(e.loc, "array used as a scalar");
      e.ref_site = vi->site;
      e.type = vi->type;
      break;
    }
    case EK::Index:
      check_lvalue(e);
      break;
    case EK::Unary: {
      if (e.op == "!") {
        Type t = check_expr(*e.kids[0], nullptr);
        if (!truthy_ok(t)) err(e.loc, "operand of ! must be bool or integer");
        e.type = Type::bool_();
        break;
      }
      Type t = check_expr(*e.kids[0], hint);
      if (e.op == "~") {
        if (!t.is_bits()) err(e.loc, "operand of ~ must be an integer");
      } else { // "-"
        if (!t.is_bits() && !t.is_float())
          err(e.loc, "operand of - must be numeric");
      }
      e.type = t;
      break;
    }
    case EK::Binary: {
      const std::string &op = e.op;
      if (op == "&&" || op == "||") {
        Type t0 = check_expr(*e.kids[0], nullptr);
        Type t1 = check_expr(*e.kids[1], nullptr);
        if (!truthy_ok(t0) || !truthy_ok(t1))
          err(e.loc, "operands of " + op + " must be bool or integer");
        if (has_user_call(*e.kids[0]) || has_user_call(*e.kids[1]))
          err(e.loc, "call inside a short-circuit operand is unsupported");
        e.type = Type::bool_();
        break;
      }
      if (op == "<<" || op == ">>") {
        Type lt = check_expr(*e.kids[0], hint);
        Type rt = check_expr(*e.kids[1], nullptr);
        if (!lt.is_bits()) err(e.loc, "shifted value must be an integer");
        if (!rt.is_bits()) err(e.loc, "shift amount must be an integer");
        e.type = lt;
        break;
      }
      if (op == "==" || op == "!=" || op == "<" || op == "<=" || op == ">" ||
          op == ">=") {
        check_pair(e, nullptr);
        Type t0 = e.kids[0]->type, t1 = e.kids[1]->type;
        bool eq_op = op == "==" || op == "!=";
        if (t0.is_bool() && t1.is_bool()) {
          if (!eq_op) err(e.loc, "ordering on bool is unsupported");
        } else if (t0.is_float() || t1.is_float()) {
          if (t0 != t1) err(e.loc, "float comparison needs matching formats");
        } else {
          unify_bits(e.kids[0], e.kids[1], e.loc);
        }
        e.type = Type::bool_();
        break;
      }
      // arithmetic and bitwise
      check_pair(e, hint);
      Type t0 = e.kids[0]->type, t1 = e.kids[1]->type;
      if (t0.is_float() || t1.is_float()) {
        if (op != "+" && op != "-" && op != "*" && op != "/")
          err(e.loc, "operator " + op + " is not defined on floats");
        if (t0 != t1) err(e.loc, "float operands need matching formats");
        e.type = t0;
      } else {
        e.type = unify_bits(e.kids[0], e.kids[1], e.loc);
      }
      break;
    }
    case EK::Ternary: {
      check_cond(*e.kids[0]);
      auto &a = e.kids[1], &b = e.kids[2];
      if (a->k == EK::IntLit && b->k != EK::IntLit) {
        Type tb = check_expr(*b, hint);
        check_expr(*a, &tb);
      } else {
        Type ta = check_expr(*a, hint);
        check_expr(*b, &ta);
      }
      if (has_user_call(*a) || has_user_call(*b))
        err(e.loc, "call inside a ternary arm is unsupported");
      Type ta = a->type, tb = b->type;
      if (ta == tb)
        e.type = ta;
      else
        e.type = unify_bits(a, b, e.loc);
      break;
    }
    case EK::Call:
      check_call(e, allow_void);
      break;
    case EK::Cast: {
      Type t = check_expr(*e.kids[0], &e.cast_to);
      if (t.is_float() || e.cast_to.is_float())
        err(e.loc, "casts involving float types are unsupported");
      e.type = e.cast_to;
      break;
    }
    }
    e.typed = true;
    return e.type;
  }

  RoundingMode parse_rm_arg(const AstExpr &arg) {
    RoundingMode rm;
    if (arg.k != EK::Ident || !parse_rounding_mode(arg.name, rm))
      err(arg.loc, "rounding mode must be one of RU, RD, RZ, RNE");
    return rm;
  }

  Type float_arg(AstExpr &e, unsigned i) {
    Type t = check_expr(*e.kids[i], nullptr);
    if (!t.is_float())
      err(e.kids[i]->loc, "argument " + std::to_string(i + 1) + " of " +
                              e.name + " must be a float");
    return t;
  }

  void float_pair(AstExpr &e) {
    Type a = float_arg(e, 0);
    Type b = float_arg(e, 1);
    if (a != b) err(e.loc, e.name + " needs matching float formats");
  }

  void check_call(AstExpr &e, bool allow_void) {
    Type nt;
    if (nondet_type(e.name, nt)) {
      if (!e.kids.empty()) err(e.loc, e.name + " takes no arguments");
      e.builtin = Builtin::Nondet;
      e.site = next_nondet_++;
      e.type = nt;
      return;
    }
    auto bi = builtin_table().find(e.name);
    if (bi != builtin_table().end()) {
      const BuiltinSig &sig = bi->second;
      if ((int)e.kids.size() < sig.min_args ||
          (int)e.kids.size() > sig.max_args)
        err(e.loc, "wrong argument count for " + e.name);
      e.builtin = sig.b;
      switch (sig.b) {
      case Builtin::FpAdd:
      case Builtin::FpSub:
      case Builtin::FpMul:
      case Builtin::FpDiv:
        float_pair(e);
        if (e.kids.size() == 3) e.rm = parse_rm_arg(*e.kids[2]);
        e.type = e.kids[0]->type;
        return;
      case Builtin::FpMin:
      case Builtin::FpMax:
        float_pair(e);
        e.type = e.kids[0]->type;
        return;
      case Builtin::FpRound:
        float_arg(e, 0);
        if (e.kids.size() == 2) e.rm = parse_rm_arg(*e.kids[1]);
        e.type = e.kids[0]->type;
        return;
      case Builtin::FpIsNan:
      case Builtin::FpIsInf:
      case Builtin::FpIsZero:
      case Builtin::FpIsSubnormal:
      case Builtin::FpIsNormal:
        float_arg(e, 0);
        e.type = Type::bool_();
        return;
      case Builtin::FpEq:
      case Builtin::FpLt:
      case Builtin::FpLe:
        float_pair(e);
        e.type = Type::bool_();
        return;
      case Builtin::FpClassify:
        float_arg(e, 0);
        e.type = Type::ubits(8);
        return;
      case Builtin::FpBits: {
        Type t = float_arg(e, 0);
        e.type = Type::ubits(t.width());
        return;
      }
      case Builtin::FpOfBits: {
        FloatFormat f = e.name == "f32_of_bits" ? FloatFormat::binary32()
                        : e.name == "f64_of_bits" ? FloatFormat::binary64()
                                                  : FloatFormat::minifloat();
        Type want = Type::ubits(f.width());
        Type t = check_expr(*e.kids[0], &want);
        if (t != want)
          err(e.kids[0]->loc, e.name + " expects a " + type_name(want) +
                                  " argument");
        e.type = Type::float_(f);
        return;
      }
      default:
        err(e.loc, "bad builtin");
      }
    }
    auto fi = funcs_.find(e.name);
    if (fi == funcs_.end()) err(e.loc, "undeclared function: " + e.name);
    const AstFunc *fn = fi->second;
    if (e.kids.size() != fn->params.size())
      err(e.loc, "wrong argument count for " + e.name);
    for (size_t i = 0; i < e.kids.size(); i++) {
      check_expr(*e.kids[i], &fn->params[i].type);
      coerce(e.kids[i], fn->params[i].type);
    }
    if (fn->is_void && !allow_void)
      err(e.loc, "void value used: " + e.name);
    e.site = next_call_++;
    e.type = fn->is_void ? Type::bool_() : fn->ret;
  }

  Ast &ast_;
  std::unordered_map<std::string, const AstFunc *> funcs_;
  std::unordered_map<std::string, VarInfo> globals_;
  std::vector<std::unordered_map<std::string, VarInfo>> scopes_;
  const AstFunc *cur_ = nullptr;
  std::unordered_set<std::string> user_labels_;
  int next_decl_ = 0;
  int next_nondet_ = 0;
  int next_call_ = 0;
  int next_assert_ = 0;
  int next_index_ = 0;
  int loop_ord_ = 0;
};

} // namespace

void typecheck(Ast &ast) {
  Checker c(ast);
  c.run();
}

} // namespace eqc::minic
