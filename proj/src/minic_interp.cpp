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

#include <stdexcept>

#include "eqc/softfloat.h"

namespace eqc::minic {

namespace {

struct Stop {};

int64_t as_signed(uint64_t v, unsigned w) {
  if (w >= 64) return (int64_t)v;
  uint64_t m = uint64_t(1) << (w - 1);
  return (int64_t)((v ^ m) - m);
}

unsigned bit_width(Type t) {
  if (t.is_bool()) return 1;
  if (t.is_float()) return t.fmt().width();
  return t.width();
}

uint64_t mask_to(uint64_t v, Type t) {
  if (t.is_bool()) return v ? 1 : 0;
  return truncate_to_width(v, bit_width(t));
}

// Values carry the same raw encodings the lowered program uses: ints
// masked to width, bools 0/1, floats as their bit patterns.
class Interp {
public:
  Interp(const Ast &ast, const UnwindPolicy &pol,
         const std::unordered_map<std::string, uint64_t> &global_in,
         const std::function<uint64_t(const std::string &, Type)> &nondet,
         const std::string &entry)
      : ast_(ast), pol_(pol), gin_(global_in), nondet_(nondet),
        entry_(entry) {}

  AstRun run() {
    for (const AstFunc &f : ast_.funcs) funcs_[f.name] = &f;

    for (const AstGlobal &g : ast_.globals) {
      if (g.init) {
        gvals_[g.name] = mask_to(g.init->ival, g.type);
      } else if (g.array_size) {
        auto &arr = garrays_[g.name];
        arr.resize(g.array_size);
        for (int i = 0; i < g.array_size; i++)
          arr[i] = mask_to(input(g.name + "#" + std::to_string(i)), g.type);
      } else {
        gvals_[g.name] = mask_to(input(g.name), g.type);
      }
      gtypes_[g.name] = g.type;
    }

    auto it = funcs_.find(entry_);
    if (it == funcs_.end())
      throw CompileError(ast_.file + ":0:0: error: entry function not found: " +
                         entry_);
    frames_.emplace_back();
    try {
      exec_block(it->second->body);
    } catch (const Stop &) {
      out_.blocked = true;
    }

    for (auto &[name, v] : gvals_) out_.globals[name] = v;
    for (auto &[name, arr] : garrays_)
      for (size_t i = 0; i < arr.size(); i++)
        out_.globals[name + "#" + std::to_string(i)] = arr[i];
    out_.violated = std::move(violated_);
    return std::move(out_);
  }

private:
  struct Frame {
    std::unordered_map<int, uint64_t> locals;
    std::unordered_map<int, std::vector<uint64_t>> arrays;
    uint64_t ret = 0;
    bool returning = false;
  };

  uint64_t input(const std::string &name) {
    auto it = gin_.find(name);
    if (it == gin_.end())
      throw std::invalid_argument("no binding for input " + name);
    return it->second;
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

  Frame &frame() { return frames_.back(); }

  uint64_t fresh(const std::string &base, Type t) {
    return mask_to(nondet_(base + suffix(), t), t);
  }

  static bool truthy(uint64_t v) { return v != 0; }

  // Evaluates the index, records a bounds violation when out of range
  // and returns the index widened to 64 bits.
  uint64_t index_value(const AstExpr &ix) {
    uint64_t i = eval(*ix.kids[0]);
    uint64_t iu = cast_value(i, ix.kids[0]->type, Type::ubits(64));
    if (iu >= (uint64_t)ix.ref_array_size)
      violated_.push_back("bounds" + std::to_string(ix.site) + suffix());
    return iu;
  }

  std::vector<uint64_t> &array_of(const AstExpr &ref) {
    if (ref.ref_site < 0) return garrays_.at(ref.name);
    auto &m = frame().arrays;
    auto it = m.find(ref.ref_site);
    if (it == m.end())
      it = m.emplace(ref.ref_site,
                     std::vector<uint64_t>((size_t)ref.ref_array_size))
               .first;
    return it->second;
  }

  uint64_t cast_value(uint64_t v, Type from, Type to) {
    if (from == to) return v;
    if (to.is_bool()) return v != 0;
    if (from.is_bool()) return v ? 1 : 0;
    unsigned aw = from.width(), tw = to.width();
    if (tw < aw) return truncate_to_width(v, tw);
    if (tw > aw && from.is_signed())
      return truncate_to_width((uint64_t)as_signed(v, aw), tw);
    return v;
  }

  uint64_t eval(const AstExpr &e) {
    switch (e.k) {
    case EK::IntLit:
      return mask_to(e.ival, e.type);
    case EK::BoolLit:
      return e.ival ? 1 : 0;
    case EK::Ident:
      if (e.ref_site < 0) return gvals_.at(e.name);
      return frame().locals.at(e.ref_site);
    case EK::Index: {
      std::vector<uint64_t> &arr = array_of(e);
      uint64_t iu = index_value(e);
      return iu < arr.size() ? arr[iu] : arr.back();
    }
    case EK::Unary: {
      if (e.op == "!") return !truthy(eval(*e.kids[0]));
      uint64_t v = eval(*e.kids[0]);
      Type t = e.kids[0]->type;
      if (e.op == "~") return mask_to(~v, t);
      if (t.is_float())
        return v ^ (uint64_t(1) << (bit_width(t) - 1));
      return mask_to(0 - v, t);
    }
    case EK::Binary:
      return eval_binary(e);
    case EK::Ternary: {
      bool c = truthy(eval(*e.kids[0]));
      uint64_t a = eval(*e.kids[1]);
      uint64_t b = eval(*e.kids[2]);
      return c ? a : b;
    }
    case EK::Call:
      return eval_call(e);
    case EK::Cast:
      return cast_value(eval(*e.kids[0]), e.kids[0]->type, e.cast_to);
    }
    throw std::logic_error("interp: unhandled expression kind");
  }

  uint64_t eval_binary(const AstExpr &e) {
    const std::string &op = e.op;
    if (op == "&&") {
      bool a = truthy(eval(*e.kids[0]));
      bool b = truthy(eval(*e.kids[1]));
      return a && b;
    }
    if (op == "||") {
      bool a = truthy(eval(*e.kids[0]));
      bool b = truthy(eval(*e.kids[1]));
      return a || b;
    }

    uint64_t a = eval(*e.kids[0]);
    uint64_t b = eval(*e.kids[1]);
    Type at = e.kids[0]->type;
    unsigned w = bit_width(at);
    bool sg = at.is_bits() && at.is_signed();

    if (at.is_float()) {
      FloatFormat f = at.fmt();
      if (op == "==") return fp::ieee_eq(f, a, b);
      if (op == "!=") return !fp::ieee_eq(f, a, b);
      if (op == "<") return fp::ieee_lt(f, a, b);
      if (op == "<=") return fp::ieee_le(f, a, b);
      if (op == ">") return fp::ieee_lt(f, b, a);
      if (op == ">=") return fp::ieee_le(f, b, a);
      if (op == "+") return fp::add(f, a, b, RoundingMode::RNE);
      if (op == "-") return fp::sub(f, a, b, RoundingMode::RNE);
      if (op == "*") return fp::mul(f, a, b, RoundingMode::RNE);
      return fp::div(f, a, b, RoundingMode::RNE);
    }

    if (op == "==") return a == b;
    if (op == "!=") return a != b;
    if (op == "<") return sg ? as_signed(a, w) < as_signed(b, w) : a < b;
    if (op == "<=") return sg ? as_signed(a, w) <= as_signed(b, w) : a <= b;
    if (op == ">") return sg ? as_signed(b, w) < as_signed(a, w) : b < a;
    if (op == ">=") return sg ? as_signed(b, w) <= as_signed(a, w) : b <= a;
    if (op == "+") return truncate_to_width(a + b, w);
    if (op == "-") return truncate_to_width(a - b, w);
    if (op == "*") return truncate_to_width(a * b, w);
    if (op == "/") return sg ? sdiv(a, b, w) : udiv(a, b, w);
    if (op == "%") return sg ? srem(a, b, w) : urem(a, b);
    if (op == "&") return a & b;
    if (op == "|") return a | b;
    if (op == "^") return a ^ b;
    if (op == "<<") return b >= w ? 0 : truncate_to_width(a << b, w);
    if (op == ">>") {
      if (!sg) return b >= w ? 0 : a >> b;
      int64_t sa = as_signed(a, w);
      return truncate_to_width((uint64_t)(sa >> (b >= w ? 63 : (unsigned)b)),
                               w);
    }
    throw std::logic_error("interp: unhandled binary operator");
  }

  static uint64_t udiv(uint64_t a, uint64_t b, unsigned w) {
    return b == 0 ? truncate_to_width(~uint64_t(0), w) : a / b;
  }
  static uint64_t urem(uint64_t a, uint64_t b) { return b == 0 ? a : a % b; }

  // These follow the formulas the lowering builds from unsigned ops.
  static uint64_t sdiv(uint64_t a, uint64_t b, unsigned w) {
    bool sa = as_signed(a, w) < 0, sb = as_signed(b, w) < 0;
    uint64_t ua = sa ? truncate_to_width(0 - a, w) : a;
    uint64_t ub = sb ? truncate_to_width(0 - b, w) : b;
    uint64_t q = udiv(ua, ub, w);
    return (sa != sb) ? truncate_to_width(0 - q, w) : q;
  }
  static uint64_t srem(uint64_t a, uint64_t b, unsigned w) {
    bool sa = as_signed(a, w) < 0, sb = as_signed(b, w) < 0;
    uint64_t ua = sa ? truncate_to_width(0 - a, w) : a;
    uint64_t ub = sb ? truncate_to_width(0 - b, w) : b;
    uint64_t r = urem(ua, ub);
    return sa ? truncate_to_width(0 - r, w) : r;
  }

  uint64_t eval_call(const AstExpr &e) {
    auto arg = [&](int i) { return eval(*e.kids[i]); };
    auto fmt_of = [&](int i) { return e.kids[i]->type.fmt(); };
    switch (e.builtin) {
    case Builtin::None:
      return call_user(e);
    case Builtin::Nondet:
      return fresh("nd" + std::to_string(e.site), e.type);
    case Builtin::FpAdd: {
      uint64_t a = arg(0), b = arg(1);
      return fp::add(fmt_of(0), a, b, e.rm);
    }
    case Builtin::FpSub: {
      uint64_t a = arg(0), b = arg(1);
      return fp::sub(fmt_of(0), a, b, e.rm);
    }
    case Builtin::FpMul: {
      uint64_t a = arg(0), b = arg(1);
      return fp::mul(fmt_of(0), a, b, e.rm);
    }
    case Builtin::FpDiv: {
      uint64_t a = arg(0), b = arg(1);
      return fp::div(fmt_of(0), a, b, e.rm);
    }
    case Builtin::FpMin: {
      uint64_t a = arg(0), b = arg(1);
      return fp::min(fmt_of(0), a, b);
    }
    case Builtin::FpMax: {
      uint64_t a = arg(0), b = arg(1);
      return fp::max(fmt_of(0), a, b);
    }
    case Builtin::FpRound:
      return fp::round_to_integral(fmt_of(0), arg(0), e.rm);
    case Builtin::FpIsNan:
      return fp::is_nan(fmt_of(0), arg(0));
    case Builtin::FpIsInf:
      return fp::is_inf(fmt_of(0), arg(0));
    case Builtin::FpIsZero:
      return fp::is_zero(fmt_of(0), arg(0));
    case Builtin::FpIsSubnormal:
      return fp::is_subnormal(fmt_of(0), arg(0));
    case Builtin::FpIsNormal:
      return fp::is_normal(fmt_of(0), arg(0));
    case Builtin::FpEq: {
      uint64_t a = arg(0), b = arg(1);
      return fp::ieee_eq(fmt_of(0), a, b);
    }
    case Builtin::FpLt: {
      uint64_t a = arg(0), b = arg(1);
      return fp::ieee_lt(fmt_of(0), a, b);
    }
    case Builtin::FpLe: {
      uint64_t a = arg(0), b = arg(1);
      return fp::ieee_le(fmt_of(0), a, b);
    }
    case Builtin::FpClassify:
      return (uint64_t)fp::classify(fmt_of(0), arg(0));
    case Builtin::FpBits:
      return arg(0);
    case Builtin::FpOfBits:
      return arg(0);
    }
    throw std::logic_error("interp: unhandled builtin");
  }

  uint64_t call_user(const AstExpr &call) {
    const AstFunc *fn = funcs_.at(call.name);
    std::vector<uint64_t> argv;
    for (const auto &a : call.kids) argv.push_back(eval(*a));

    ctx_.push_back("c" + std::to_string(call.site));
    Frame fr;
    for (size_t i = 0; i < fn->params.size(); i++)
      fr.locals[fn->params[i].site] = argv[i];
    frames_.push_back(std::move(fr));
    exec_block(fn->body);
    uint64_t r = frames_.back().ret;
    frames_.pop_back();
    ctx_.pop_back();
    return r;
  }

  void exec_block(const std::vector<std::unique_ptr<AstStmt>> &body) {
    for (const auto &s : body) {
      if (frame().returning) return;
      exec_stmt(*s);
    }
  }

  void exec_stmt(const AstStmt &s) {
    switch (s.k) {
    case SK::Block:
      exec_block(s.body);
      return;
    case SK::Decl: {
      if (s.array_size) {
        auto &arr = frame().arrays[s.site];
        arr.resize(s.array_size);
        for (int i = 0; i < s.array_size; i++)
          arr[i] = fresh("ud" + std::to_string(s.site) + "#" +
                             std::to_string(i),
                         s.decl_type);
      } else if (s.has_e) {
        frame().locals[s.site] = eval(*s.e);
      } else {
        frame().locals[s.site] = fresh("ud" + std::to_string(s.site),
                                       s.decl_type);
      }
      return;
    }
    case SK::Assign: {
      if (s.lhs->k == EK::Ident) {
        uint64_t v = eval(*s.e);
        if (s.lhs->ref_site < 0)
          gvals_[s.lhs->name] = v;
        else
          frame().locals[s.lhs->ref_site] = v;
        return;
      }
      std::vector<uint64_t> &arr = array_of(*s.lhs);
      uint64_t iu = index_value(*s.lhs);
      uint64_t v = eval(*s.e);
      if (iu < arr.size()) arr[iu] = v;
      return;
    }
    case SK::If:
      if (truthy(eval(*s.e)))
        exec_block(s.body);
      else
        exec_block(s.els);
      return;
    case SK::While:
    case SK::For:
      if (s.init_stmt) exec_stmt(*s.init_stmt);
      exec_loop(s);
      return;
    case SK::Return:
      if (s.has_e) frame().ret = eval(*s.e);
      frame().returning = true;
      return;
    case SK::CallStmt:
      eval(*s.e);
      return;
    case SK::Assume:
      if (!truthy(eval(*s.e))) throw Stop{};
      return;
    case SK::Assert: {
      bool ok = truthy(eval(*s.e));
      if (!ok) {
        std::string base =
            s.label.empty() ? "a" + std::to_string(s.site) : s.label;
        violated_.push_back(base + suffix());
      }
      return;
    }
    }
  }

  void exec_loop(const AstStmt &s) {
    unsigned bound = pol_.bound;
    auto pb = pol_.per_loop.find(s.loop_id);
    if (pb != pol_.per_loop.end()) bound = pb->second;

    for (unsigned k = 0; k < bound; k++) {
      ctx_.push_back("l" + std::to_string(s.loop_ord) + "i" +
                     std::to_string(k));
      bool c = truthy(eval(*s.e));
      if (!c) {
        ctx_.pop_back();
        return;
      }
      exec_block(s.body);
      if (frame().returning) {
        ctx_.pop_back();
        return;
      }
      if (s.step_stmt) exec_stmt(*s.step_stmt);
      ctx_.pop_back();
    }
    ctx_.push_back("l" + std::to_string(s.loop_ord) + "i" +
                   std::to_string(bound));
    bool c = truthy(eval(*s.e));
    if (pol_.unwinding_assert && c)
      violated_.push_back("unwind." + s.loop_id + suffix());
    if (c) throw Stop{};
    ctx_.pop_back();
  }

  const Ast &ast_;
  const UnwindPolicy &pol_;
  const std::unordered_map<std::string, uint64_t> &gin_;
  const std::function<uint64_t(const std::string &, Type)> &nondet_;
  std::string entry_;
  AstRun out_;
  std::unordered_map<std::string, const AstFunc *> funcs_;
  std::unordered_map<std::string, uint64_t> gvals_;
  std::unordered_map<std::string, std::vector<uint64_t>> garrays_;
  std::unordered_map<std::string, Type> gtypes_;
  std::vector<Frame> frames_;
  std::vector<std::string> ctx_;
  std::vector<std::string> violated_;
};

} // namespace

AstRun interp_ast(
    const Ast &ast, const UnwindPolicy &policy,
    const std::unordered_map<std::string, uint64_t> &global_in,
    const std::function<uint64_t(const std::string &, Type)> &nondet,
    const std::string &entry) {
  Interp in(ast, policy, global_in, nondet, entry);
  return in.run();
}

} // namespace eqc::minic
