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

#include <unordered_set>

namespace eqc::minic {

namespace {

// A mini-C variable lowered to solver-level Vars. Floats are stored as
// their bit patterns; arrays as one Var per element.
struct LVar {
  Type src_type;
  int array_size = 0;
  Expr var;
  std::vector<Expr> elems;
};

Type lowered_type(Type src) {
  if (src.is_float()) return Type::ubits(src.fmt().width());
  return src;
}

class Lowerer {
public:
  Lowerer(const Ast &ast, ExprArena &arena, const UnwindPolicy &policy,
          const std::string &entry)
      : ast_(ast), A_(arena), pol_(policy), entry_(entry) {}

  GotoProgram run() {
    for (const AstFunc &f : ast_.funcs) funcs_[f.name] = &f;

    for (const AstGlobal &g : ast_.globals) {
      LVar v = make_var(g.name, g.type, g.array_size);
      if (g.init) {
        emit_assign(v.var, A_.constant(v.var.type(), g.init->ival), g.loc);
      } else if (g.array_size) {
        for (Expr e : v.elems) out_.inputs.push_back(e);
      } else {
        out_.inputs.push_back(v.var);
      }
      if (g.array_size) {
        for (int i = 0; i < g.array_size; i++)
          out_.global_names.push_back(g.name + "#" + std::to_string(i));
      } else {
        out_.global_names.push_back(g.name);
      }
      global_vars_.emplace(g.name, std::move(v));
    }

    auto it = funcs_.find(entry_);
    if (it == funcs_.end()) err({0, 0}, "entry function not found: " + entry_);
    const AstFunc *fn = it->second;
    if (!fn->is_void) err(fn->loc, "entry function must be void");
    if (!fn->params.empty()) err(fn->loc, "entry function takes no parameters");

    frames_.push_back({fn, nullptr, {}});
    stack_.push_back(fn);
    lower_block(fn->body);
    patch_returns();
    stack_.pop_back();
    frames_.pop_back();

    GotoInstr end;
    end.kind = GKind::Skip;
    out_.instrs.push_back(end);
    out_.entry = entry_;
    out_.source_file = ast_.file;
    validate(out_);
    return std::move(out_);
  }

private:
  struct Frame {
    const AstFunc *fn;
    LVar *ret;
    std::vector<unsigned> ret_gotos;
  };

  [[noreturn]] void err(SrcLoc loc, const std::string &msg) {
    throw CompileError(ast_.file + ":" + std::to_string(loc.line) + ":" +
                       std::to_string(loc.col) + ": error: " + msg);
  }

  std::string suffix() const {
    if (ctx_.empty()) return "";
    std::string s = "@";
    for (size_t i = 0; i < ctx_.size(); i++) {
      if (i) s += ".";
      s += ctx_[i];
    }
    return s;
  }

  LVar make_var(const std::string &name, Type src, int array_size) {
    LVar v;
    v.src_type = src;
    v.array_size = array_size;
    Type lt = lowered_type(src);
    auto note_float = [&](const std::string &n) {
      if (src.is_float()) out_.float_vars.emplace(n, src.fmt());
    };
    if (array_size) {
      for (int i = 0; i < array_size; i++) {
        std::string en = name + "#" + std::to_string(i);
        v.elems.push_back(A_.var(en, lt));
        note_float(en);
      }
      v.var = v.elems[0];
    } else {
      v.var = A_.var(name, lt);
      note_float(name);
    }
    return v;
  }

  // Fresh free input, named stably from its site and context.
  Expr fresh_input(const std::string &base, Type src) {
    std::string name = base + suffix();
    Type lt = lowered_type(src);
    Expr v = A_.var(name, lt);
    if (src.is_float()) out_.float_vars.emplace(name, src.fmt());
    out_.inputs.push_back(v);
    return v;
  }

  LVar &lvar_of(const AstExpr &ref) {
    if (ref.ref_site < 0) return global_vars_.at(ref.name);
    return site_vars_.at(ref.ref_site);
  }

  LVar &decl_var(const AstFunc *fn, const std::string &name, Type t,
                 int array_size, int site) {
    auto it = site_vars_.find(site);
    if (it != site_vars_.end()) return it->second;
    std::string canon =
        fn->name + "::" + name + "." + std::to_string(site);
    return site_vars_.emplace(site, make_var(canon, t, array_size))
        .first->second;
  }

  unsigned emit(GotoInstr in) {
    out_.instrs.push_back(std::move(in));
    return (unsigned)out_.instrs.size() - 1;
  }

  unsigned emit_assign(Expr var, Expr rhs, SrcLoc loc) {
    GotoInstr in;
    in.kind = GKind::Assign;
    in.lhs = var;
    in.e = rhs;
    in.loc = loc;
    return emit(std::move(in));
  }

  void emit_assert(Expr cond, const std::string &base, SrcLoc loc) {
    GotoInstr in;
    in.kind = GKind::Assert;
    in.e = cond;
    in.label = base + suffix();
    in.loc = loc;
    if (!labels_.insert(in.label).second)
      err(loc, "assert label collision: " + in.label);
    emit(std::move(in));
  }

  void emit_assume(Expr cond, SrcLoc loc) {
    GotoInstr in;
    in.kind = GKind::Assume;
    in.e = cond;
    in.loc = loc;
    emit(std::move(in));
  }

  unsigned here() const { return (unsigned)out_.instrs.size(); }

  // Stores a mini-C-typed value into a scalar variable.
  void store(LVar &v, Expr val, SrcLoc loc) {
    if (v.src_type.is_float()) val = A_.bits_of_float(val);
    emit_assign(v.var, val, loc);
  }

  Expr read_scalar(const LVar &v) {
    if (v.src_type.is_float())
      return A_.float_of_bits(v.var, v.src_type.fmt());
    return v.var;
  }

  Expr truthy(Expr v) {
    if (v.type().is_bool()) return v;
    return A_.ne(v, A_.constant(v.type(), 0));
  }

  Expr lower_cond(const AstExpr &e) { return truthy(lx(e)); }

  // Index context: evaluates the index, emits the bounds assert and
  // returns the index widened to u64.
  Expr index_value(const AstExpr &ix) {
    Expr i = lx(*ix.kids[0]);
    Expr iu = A_.cast(i, Type::ubits(64));
    emit_assert(
        A_.ult(iu, A_.constant(Type::ubits(64), (uint64_t)ix.ref_array_size)),
        "bounds" + std::to_string(ix.site), ix.loc);
    return iu;
  }

  Expr sdiv(Expr a, Expr b) {
    Expr zero = A_.constant(a.type(), 0);
    Expr sa = A_.slt(a, zero), sb = A_.slt(b, zero);
    Expr ua = A_.ite(sa, A_.neg(a), a), ub = A_.ite(sb, A_.neg(b), b);
    Expr q = A_.udiv(ua, ub);
    return A_.ite(A_.xor_(sa, sb), A_.neg(q), q);
  }

  Expr srem(Expr a, Expr b) {
    Expr zero = A_.constant(a.type(), 0);
    Expr sa = A_.slt(a, zero), sb = A_.slt(b, zero);
    Expr ua = A_.ite(sa, A_.neg(a), a), ub = A_.ite(sb, A_.neg(b), b);
    Expr r = A_.urem(ua, ub);
    return A_.ite(sa, A_.neg(r), r);
  }

  Expr fneg(Expr f) {
    FloatFormat fmt = f.type().fmt();
    Expr bits = A_.bits_of_float(f);
    Expr mask = A_.constant(Type::ubits(fmt.width()),
                            (uint64_t)1 << (fmt.width() - 1));
    return A_.float_of_bits(A_.bitxor_(bits, mask), fmt);
  }

  Expr lx(const AstExpr &e) {
    switch (e.k) {
    case EK::IntLit:
      return A_.constant(e.type, e.ival);
    case EK::BoolLit:
      return A_.bool_const(e.ival != 0);
    case EK::Ident:
      return read_scalar(lvar_of(e));
    case EK::Index: {
      LVar &v = lvar_of(e);
      Expr iu = index_value(e);
      if (iu.is_const()) {
        uint64_t i = iu.const_value();
        if (i < v.elems.size()) return v.elems[i];
        return v.elems.back();
      }
      Expr r = v.elems.back();
      for (int i = (int)v.elems.size() - 2; i >= 0; i--)
        r = A_.ite(A_.eq(iu, A_.constant(Type::ubits(64), (uint64_t)i)),
                   v.elems[i], r);
      return r;
    }
    case EK::Unary: {
      if (e.op == "!") return A_.not_(lower_cond(*e.kids[0]));
      Expr v = lx(*e.kids[0]);
      if (e.op == "~") return A_.bitnot(v);
      if (v.type().is_float()) return fneg(v);
      return A_.neg(v);
    }
    case EK::Binary:
      return lower_binary(e);
    case EK::Ternary: {
      Expr c = lower_cond(*e.kids[0]);
      return A_.ite(c, lx(*e.kids[1]), lx(*e.kids[2]));
    }
    case EK::Call:
      return lower_call(e);
    case EK::Cast:
      return A_.cast(lx(*e.kids[0]), e.cast_to);
    }
    err(e.loc, "unreachable expression kind");
  }

  Expr lower_binary(const AstExpr &e) {
    const std::string &op = e.op;
    if (op == "&&")
      return A_.and_(lower_cond(*e.kids[0]), lower_cond(*e.kids[1]));
    if (op == "||")
      return A_.or_(lower_cond(*e.kids[0]), lower_cond(*e.kids[1]));

    Expr a = lx(*e.kids[0]);
    Expr b = lx(*e.kids[1]);
    bool fl = a.type().is_float();
    bool sg = a.type().is_bits() && a.type().is_signed();

    if (op == "==") return fl ? A_.fp_eq(a, b) : A_.eq(a, b);
    if (op == "!=") return A_.not_(fl ? A_.fp_eq(a, b) : A_.eq(a, b));
    if (op == "<") return fl ? A_.fp_lt(a, b) : sg ? A_.slt(a, b) : A_.ult(a, b);
    if (op == "<=") return fl ? A_.fp_le(a, b) : sg ? A_.sle(a, b) : A_.ule(a, b);
    if (op == ">") return fl ? A_.fp_lt(b, a) : sg ? A_.slt(b, a) : A_.ult(b, a);
    if (op == ">=") return fl ? A_.fp_le(b, a) : sg ? A_.sle(b, a) : A_.ule(b, a);

    if (fl) {
      Expr rm = A_.rm_const(RoundingMode::RNE);
      if (op == "+") return A_.fp_add(a, b, rm);
      if (op == "-") return A_.fp_sub(a, b, rm);
      if (op == "*") return A_.fp_mul(a, b, rm);
      return A_.fp_div(a, b, rm);
    }
    if (op == "+") return A_.add(a, b);
    if (op == "-") return A_.sub(a, b);
    if (op == "*") return A_.mul(a, b);
    if (op == "/") return sg ? sdiv(a, b) : A_.udiv(a, b);
    if (op == "%") return sg ? srem(a, b) : A_.urem(a, b);
    if (op == "&") return A_.bitand_(a, b);
    if (op == "|") return A_.bitor_(a, b);
    if (op == "^") return A_.bitxor_(a, b);
    if (op == "<<") return A_.shl(a, b);
    if (op == ">>") return sg ? A_.ashr(a, b) : A_.lshr(a, b);
    err(e.loc, "unreachable binary operator");
  }

  Expr lower_call(const AstExpr &e) {
    switch (e.builtin) {
    case Builtin::None:
      return inline_call(e);
    case Builtin::Nondet: {
      Expr v = fresh_input("nd" + std::to_string(e.site), e.type);
      if (e.type.is_float()) return A_.float_of_bits(v, e.type.fmt());
      return v;
    }
    case Builtin::FpAdd:
      return A_.fp_add(lx(*e.kids[0]), lx(*e.kids[1]), A_.rm_const(e.rm));
    case Builtin::FpSub:
      return A_.fp_sub(lx(*e.kids[0]), lx(*e.kids[1]), A_.rm_const(e.rm));
    case Builtin::FpMul:
      return A_.fp_mul(lx(*e.kids[0]), lx(*e.kids[1]), A_.rm_const(e.rm));
    case Builtin::FpDiv:
      return A_.fp_div(lx(*e.kids[0]), lx(*e.kids[1]), A_.rm_const(e.rm));
    case Builtin::FpMin:
      return A_.fp_min(lx(*e.kids[0]), lx(*e.kids[1]));
    case Builtin::FpMax:
      return A_.fp_max(lx(*e.kids[0]), lx(*e.kids[1]));
    case Builtin::FpRound:
      return A_.fp_round(lx(*e.kids[0]), A_.rm_const(e.rm));
    case Builtin::FpIsNan:
      return A_.fp_is_nan(lx(*e.kids[0]));
    case Builtin::FpIsInf:
      return A_.fp_is_inf(lx(*e.kids[0]));
    case Builtin::FpIsZero:
      return A_.fp_is_zero(lx(*e.kids[0]));
    case Builtin::FpIsSubnormal:
      return A_.fp_is_subnormal(lx(*e.kids[0]));
    case Builtin::FpIsNormal:
      return A_.fp_is_normal(lx(*e.kids[0]));
    case Builtin::FpEq:
      return A_.fp_eq(lx(*e.kids[0]), lx(*e.kids[1]));
    case Builtin::FpLt:
      return A_.fp_lt(lx(*e.kids[0]), lx(*e.kids[1]));
    case Builtin::FpLe:
      return A_.fp_le(lx(*e.kids[0]), lx(*e.kids[1]));
    case Builtin::FpClassify:
      return A_.zext(A_.fp_classify(lx(*e.kids[0])), 8);
    case Builtin::FpBits:
      return A_.bits_of_float(lx(*e.kids[0]));
    case Builtin::FpOfBits:
      return A_.float_of_bits(lx(*e.kids[0]), e.type.fmt());
    }
    err(e.loc, "unreachable builtin");
  }

  Expr inline_call(const AstExpr &call) {
    const AstFunc *fn = funcs_.at(call.name);
    for (const AstFunc *f : stack_)
      if (f == fn) err(call.loc, "recursion detected: " + fn->name);

    std::vector<Expr> argv;
    for (const auto &a : call.kids) argv.push_back(lx(*a));

    stack_.push_back(fn);
    ctx_.push_back("c" + std::to_string(call.site));

    for (size_t i = 0; i < fn->params.size(); i++) {
      LVar &pv = decl_var(fn, fn->params[i].name, fn->params[i].type, 0,
                          fn->params[i].site);
      store(pv, argv[i], call.loc);
    }

    // The return slot outlives the inlined body (it is read by the caller's
    // consuming instruction), so it is unique per inline instance.
    Frame fr{fn, nullptr, {}};
    if (!fn->is_void) {
      std::string rname = fn->name + "::ret" + suffix();
      auto it = ret_vars_.find(rname);
      if (it == ret_vars_.end())
        it = ret_vars_.emplace(rname, make_var(rname, fn->ret, 0)).first;
      fr.ret = &it->second;
      emit_assign(fr.ret->var, A_.constant(fr.ret->var.type(), 0), call.loc);
    }
    frames_.push_back(fr);

    lower_block(fn->body);
    patch_returns();

    Expr result;
    if (!fn->is_void) result = read_scalar(*frames_.back().ret);
    frames_.pop_back();
    ctx_.pop_back();
    stack_.pop_back();
    return result;
  }

  void patch_returns() {
    for (unsigned g : frames_.back().ret_gotos)
      out_.instrs[g].target = here();
  }

  void lower_block(const std::vector<std::unique_ptr<AstStmt>> &body) {
    for (const auto &s : body) lower_stmt(*s);
  }

  void lower_stmt(const AstStmt &s) {
    switch (s.k) {
    case SK::Block:
      lower_block(s.body);
      return;
    case SK::Decl: {
      LVar &v = decl_var(frames_.back().fn, s.name, s.decl_type, s.array_size,
                         s.site);
      if (s.array_size) {
        for (int i = 0; i < s.array_size; i++) {
          Expr in = fresh_input("ud" + std::to_string(s.site) + "#" +
                                    std::to_string(i),
                                s.decl_type);
          emit_assign(v.elems[i], in, s.loc);
        }
      } else if (s.has_e) {
        store(v, lx(*s.e), s.loc);
      } else {
        Expr in = fresh_input("ud" + std::to_string(s.site), s.decl_type);
        emit_assign(v.var, in, s.loc);
      }
      return;
    }
    case SK::Assign: {
      if (s.lhs->k == EK::Ident) {
        Expr val = lx(*s.e);
        store(lvar_of(*s.lhs), val, s.loc);
        return;
      }
      LVar &v = lvar_of(*s.lhs);
      Expr iu = index_value(*s.lhs);
      Expr val = lx(*s.e);
      if (iu.is_const()) {
        uint64_t i = iu.const_value();
        if (i < v.elems.size()) emit_assign(v.elems[i], val, s.loc);
        return;
      }
      for (size_t i = 0; i < v.elems.size(); i++) {
        Expr sel = A_.eq(iu, A_.constant(Type::ubits(64), (uint64_t)i));
        emit_assign(v.elems[i], A_.ite(sel, val, v.elems[i]), s.loc);
      }
      return;
    }
    case SK::If: {
      Expr c = lower_cond(*s.e);
      GotoInstr br;
      br.kind = GKind::Branch;
      br.e = c;
      br.loc = s.loc;
      unsigned b = emit(std::move(br));
      out_.instrs[b].target = b + 1;
      lower_block(s.body);
      if (s.els.empty()) {
        out_.instrs[b].else_target = here();
      } else {
        GotoInstr g;
        g.kind = GKind::Goto;
        g.loc = s.loc;
        unsigned j = emit(std::move(g));
        out_.instrs[b].else_target = here();
        lower_block(s.els);
        out_.instrs[j].target = here();
      }
      return;
    }
    case SK::While:
    case SK::For:
      if (s.init_stmt) lower_stmt(*s.init_stmt);
      unroll_loop(s);
      return;
    case SK::Return: {
      // lx can inline calls and grow frames_, so take no reference
      // across it.
      Expr val;
      if (s.has_e) val = lx(*s.e);
      if (s.has_e) store(*frames_.back().ret, val, s.loc);
      GotoInstr g;
      g.kind = GKind::Goto;
      g.loc = s.loc;
      unsigned gi = emit(std::move(g));
      frames_.back().ret_gotos.push_back(gi);
      return;
    }
    case SK::CallStmt:
      lx(*s.e);
      return;
    case SK::Assume:
      emit_assume(lower_cond(*s.e), s.loc);
      return;
    case SK::Assert: {
      Expr c = lower_cond(*s.e);
      std::string base =
          s.label.empty() ? "a" + std::to_string(s.site) : s.label;
      emit_assert(c, base, s.loc);
      return;
    }
    }
  }

  void unroll_loop(const AstStmt &s) {
    unsigned bound = pol_.bound;
    auto pb = pol_.per_loop.find(s.loop_id);
    if (pb != pol_.per_loop.end()) bound = pb->second;
    if (bound == 0 && !pol_.unwinding_assert)
      err(s.loc, "unwind bound 0 without unwinding assertion for loop " +
                     s.loop_id);

    std::vector<unsigned> exits;
    for (unsigned k = 0; k < bound; k++) {
      ctx_.push_back("l" + std::to_string(s.loop_ord) + "i" +
                     std::to_string(k));
      Expr c = lower_cond(*s.e);
      GotoInstr br;
      br.kind = GKind::Branch;
      br.e = c;
      br.loc = s.loc;
      unsigned b = emit(std::move(br));
      out_.instrs[b].target = b + 1;
      exits.push_back(b);
      lower_block(s.body);
      if (s.step_stmt) lower_stmt(*s.step_stmt);
      ctx_.pop_back();
    }
    ctx_.push_back("l" + std::to_string(s.loop_ord) + "i" +
                   std::to_string(bound));
    Expr c = lower_cond(*s.e);
    if (pol_.unwinding_assert)
      emit_assert(A_.not_(c), "unwind." + s.loop_id, s.loc);
    emit_assume(A_.not_(c), s.loc);
    ctx_.pop_back();
    for (unsigned b : exits) out_.instrs[b].else_target = here();
  }

  const Ast &ast_;
  ExprArena &A_;
  const UnwindPolicy &pol_;
  std::string entry_;
  GotoProgram out_;
  std::unordered_map<std::string, const AstFunc *> funcs_;
  std::unordered_map<int, LVar> site_vars_;
  std::unordered_map<std::string, LVar> global_vars_;
  std::unordered_map<std::string, LVar> ret_vars_;
  std::vector<std::string> ctx_;
  std::vector<const AstFunc *> stack_;
  std::vector<Frame> frames_;
  std::unordered_set<std::string> labels_;
};

} // namespace

GotoProgram lower_to_goto(const Ast &ast, ExprArena &arena,
                          const UnwindPolicy &policy,
                          const std::string &entry) {
  Lowerer l(ast, arena, policy, entry);
  return l.run();
}

} // namespace eqc::minic
