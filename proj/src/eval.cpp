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

#include "eqc/eval.h"

#include <stdexcept>

#include "eqc/softfloat.h"

namespace eqc {

uint64_t Env::get(Expr var) const {
  auto it = values_.find(var.get());
  if (it == values_.end())
    throw std::out_of_range("unbound variable " + var.var_name());
  return it->second;
}

namespace {

int64_t as_signed(uint64_t v, unsigned w) {
  if (w >= 64) return (int64_t)v;
  uint64_t m = uint64_t(1) << (w - 1);
  return (int64_t)((v ^ m) - m);
}

struct Evaluator {
  const Env &env;
  std::unordered_map<const ExprNode *, uint64_t> memo;

  uint64_t go(Expr e) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    uint64_t v = compute(e);
    memo.emplace(e.get(), v);
    return v;
  }

  uint64_t trunc_result(Expr e, uint64_t v) {
    if (e.type().is_bool()) return v ? 1 : 0;
    return truncate_to_width(v, e.type().width());
  }

  uint64_t compute(Expr e) {
    unsigned w = e.type().is_bool() ? 1 : e.type().width();
    switch (e.op()) {
    case Op::Const: return e.const_value();
    case Op::Var: return env.get(e);
    case Op::Not: return !go(e.kid(0));
    case Op::And: return go(e.kid(0)) && go(e.kid(1));
    case Op::Or: return go(e.kid(0)) || go(e.kid(1));
    case Op::Xor: return go(e.kid(0)) != go(e.kid(1));
    case Op::Ite: return go(e.kid(0)) ? go(e.kid(1)) : go(e.kid(2));
    case Op::Eq: return go(e.kid(0)) == go(e.kid(1));
    case Op::Ult: return go(e.kid(0)) < go(e.kid(1));
    case Op::Ule: return go(e.kid(0)) <= go(e.kid(1));
    case Op::Slt: {
      unsigned kw = e.kid(0).type().width();
      return as_signed(go(e.kid(0)), kw) < as_signed(go(e.kid(1)), kw);
    }
    case Op::Sle: {
      unsigned kw = e.kid(0).type().width();
      return as_signed(go(e.kid(0)), kw) <= as_signed(go(e.kid(1)), kw);
    }
    case Op::BitNot: return trunc_result(e, ~go(e.kid(0)));
    case Op::BitAnd: return go(e.kid(0)) & go(e.kid(1));
    case Op::BitOr: return go(e.kid(0)) | go(e.kid(1));
    case Op::BitXor: return go(e.kid(0)) ^ go(e.kid(1));
    case Op::Neg: return trunc_result(e, 0 - go(e.kid(0)));
    case Op::Add: return trunc_result(e, go(e.kid(0)) + go(e.kid(1)));
    case Op::Sub: return trunc_result(e, go(e.kid(0)) - go(e.kid(1)));
    case Op::Mul: return trunc_result(e, go(e.kid(0)) * go(e.kid(1)));
    case Op::UDiv: {
      uint64_t b = go(e.kid(1));
      return b == 0 ? truncate_to_width(~uint64_t(0), w) : go(e.kid(0)) / b;
    }
    case Op::URem: {
      uint64_t b = go(e.kid(1));
      return b == 0 ? go(e.kid(0)) : go(e.kid(0)) % b;
    }
    case Op::Shl: {
      uint64_t s = go(e.kid(1));
      return s >= w ? 0 : trunc_result(e, go(e.kid(0)) << s);
    }
    case Op::LShr: {
      uint64_t s = go(e.kid(1));
      return s >= w ? 0 : go(e.kid(0)) >> s;
    }
    case Op::AShr: {
      uint64_t s = go(e.kid(1));
      int64_t a = as_signed(go(e.kid(0)), w);
      return trunc_result(e, (uint64_t)(a >> (s >= w ? 63 : (unsigned)s)));
    }
    case Op::Extract: {
      unsigned lo = e.aux() & 0xff;
      return truncate_to_width(go(e.kid(0)) >> lo, w);
    }
    case Op::Concat:
      return (go(e.kid(0)) << e.kid(1).type().width()) | go(e.kid(1));
    case Op::ZExt: return go(e.kid(0));
    case Op::SExt:
      return trunc_result(
          e, (uint64_t)as_signed(go(e.kid(0)), e.kid(0).type().width()));
    case Op::Trunc: return trunc_result(e, go(e.kid(0)));
    case Op::BoolToBits: return go(e.kid(0));
    case Op::FloatOfBits:
    case Op::BitsOfFloat: return go(e.kid(0));
    case Op::FpAdd:
    case Op::FpSub:
    case Op::FpMul:
    case Op::FpDiv: {
      FloatFormat f = e.type().fmt();
      RoundingMode rm = (RoundingMode)go(e.kid(2));
      uint64_t a = go(e.kid(0)), b = go(e.kid(1));
      switch (e.op()) {
      case Op::FpAdd: return fp::add(f, a, b, rm);
      case Op::FpSub: return fp::sub(f, a, b, rm);
      case Op::FpMul: return fp::mul(f, a, b, rm);
      default: return fp::div(f, a, b, rm);
      }
    }
    case Op::FpMin:
      return fp::min(e.type().fmt(), go(e.kid(0)), go(e.kid(1)));
    case Op::FpMax:
      return fp::max(e.type().fmt(), go(e.kid(0)), go(e.kid(1)));
    case Op::FpRound:
      return fp::round_to_integral(e.type().fmt(), go(e.kid(0)),
                                   (RoundingMode)go(e.kid(1)));
    case Op::FpClassify:
      return (uint64_t)fp::classify(e.kid(0).type().fmt(), go(e.kid(0)));
    case Op::FpIsNan:
      return fp::is_nan(e.kid(0).type().fmt(), go(e.kid(0)));
    case Op::FpIsInf:
      return fp::is_inf(e.kid(0).type().fmt(), go(e.kid(0)));
    case Op::FpIsZero:
      return fp::is_zero(e.kid(0).type().fmt(), go(e.kid(0)));
    case Op::FpIsSubnormal:
      return fp::is_subnormal(e.kid(0).type().fmt(), go(e.kid(0)));
    case Op::FpIsNormal:
      return fp::is_normal(e.kid(0).type().fmt(), go(e.kid(0)));
    case Op::FpEq:
      return fp::ieee_eq(e.kid(0).type().fmt(), go(e.kid(0)), go(e.kid(1)));
    case Op::FpLt:
      return fp::ieee_lt(e.kid(0).type().fmt(), go(e.kid(0)), go(e.kid(1)));
    case Op::FpLe:
      return fp::ieee_le(e.kid(0).type().fmt(), go(e.kid(0)), go(e.kid(1)));
    }
    throw std::logic_error("eval: unhandled op");
  }
};

} // namespace

uint64_t eval(Expr e, const Env &env) {
  Evaluator ev{env, {}};
  return ev.go(e);
}

} // namespace eqc
