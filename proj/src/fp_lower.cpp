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

#include "eqc/fp_lower.h"

#include <stdexcept>

namespace eqc {

// Encoding bits of a float-typed expression.
Expr FpLowerer::lower_bits_of_float(Expr fe) {
  auto hit = fmemo_.find(fe.get());
  if (hit != fmemo_.end())
    return hit->second;
  Expr out = lower_bits_uncached(fe);
  fmemo_.emplace(fe.get(), out);
  return out;
}

Expr FpLowerer::lower_bits_uncached(Expr fe) {
  ExprArena &A = arena_;
  FloatFormat f = fe.type().fmt();
  switch (fe.op()) {
  case Op::FloatOfBits:
    return lower(fe.kid(0));
  case Op::Const:
    return A.constant(Type::ubits(f.width()), fe.const_value());
  case Op::Var: {
    auto it = var_map_.find(fe.get());
    if (it != var_map_.end())
      return it->second;
    Expr bv =
        A.var(fe.var_name() + std::string("_bits"), Type::ubits(f.width()));
    var_map_.emplace(fe.get(), bv);
    return bv;
  }
  case Op::Ite:
    return A.ite(lower(fe.kid(0)), lower_bits_of_float(fe.kid(1)),
                 lower_bits_of_float(fe.kid(2)));
  case Op::FpAdd:
    return fp::emit_add(A, f, lower_bits_of_float(fe.kid(0)),
                        lower_bits_of_float(fe.kid(1)), lower(fe.kid(2)),
                        false, opts_.add_impl, opts_.nan_policy);
  case Op::FpSub:
    return fp::emit_add(A, f, lower_bits_of_float(fe.kid(0)),
                        lower_bits_of_float(fe.kid(1)), lower(fe.kid(2)),
                        true, opts_.add_impl, opts_.nan_policy);
  case Op::FpMul:
    return fp::emit_mul(A, f, lower_bits_of_float(fe.kid(0)),
                        lower_bits_of_float(fe.kid(1)), lower(fe.kid(2)),
                        opts_.nan_policy);
  case Op::FpDiv:
    return fp::emit_div(A, f, lower_bits_of_float(fe.kid(0)),
                        lower_bits_of_float(fe.kid(1)), lower(fe.kid(2)),
                        opts_.nan_policy);
  case Op::FpMin:
    return fp::emit_min(A, f, lower_bits_of_float(fe.kid(0)),
                        lower_bits_of_float(fe.kid(1)), opts_.nan_policy);
  case Op::FpMax:
    return fp::emit_max(A, f, lower_bits_of_float(fe.kid(0)),
                        lower_bits_of_float(fe.kid(1)), opts_.nan_policy);
  case Op::FpRound:
    return fp::emit_round(A, f, lower_bits_of_float(fe.kid(0)),
                          lower(fe.kid(1)), opts_.nan_policy);
  default:
    throw std::logic_error("fp_lower: unexpected float-typed op");
  }
}

Expr FpLowerer::lower(Expr e) {
  auto it = memo_.find(e.get());
  if (it != memo_.end())
    return it->second;

  ExprArena &A = arena_;
  Expr out = e;
  if (e.type().is_float()) {
    out = A.float_of_bits(lower_bits_of_float(e), e.type().fmt());
  } else {
    switch (e.op()) {
    case Op::BitsOfFloat:
      out = lower_bits_of_float(e.kid(0));
      break;
    case Op::FpClassify:
      out = fp::emit_classify(A, e.kid(0).type().fmt(),
                              lower_bits_of_float(e.kid(0)));
      break;
    case Op::FpIsNan:
      out = fp::emit_is_nan(A, e.kid(0).type().fmt(),
                            lower_bits_of_float(e.kid(0)));
      break;
    case Op::FpIsInf:
      out = fp::emit_is_inf(A, e.kid(0).type().fmt(),
                            lower_bits_of_float(e.kid(0)));
      break;
    case Op::FpIsZero:
      out = fp::emit_is_zero(A, e.kid(0).type().fmt(),
                             lower_bits_of_float(e.kid(0)));
      break;
    case Op::FpIsSubnormal:
      out = fp::emit_is_subnormal(A, e.kid(0).type().fmt(),
                                  lower_bits_of_float(e.kid(0)));
      break;
    case Op::FpIsNormal:
      out = fp::emit_is_normal(A, e.kid(0).type().fmt(),
                               lower_bits_of_float(e.kid(0)));
      break;
    case Op::FpEq:
      out = fp::emit_ieee_eq(A, e.kid(0).type().fmt(),
                             lower_bits_of_float(e.kid(0)),
                             lower_bits_of_float(e.kid(1)));
      break;
    case Op::FpLt:
      out = fp::emit_ieee_lt(A, e.kid(0).type().fmt(),
                             lower_bits_of_float(e.kid(0)),
                             lower_bits_of_float(e.kid(1)));
      break;
    case Op::FpLe:
      out = fp::emit_ieee_le(A, e.kid(0).type().fmt(),
                             lower_bits_of_float(e.kid(0)),
                             lower_bits_of_float(e.kid(1)));
      break;
    case Op::Eq:
      // equality on float operands is encoding equality
      if (e.kid(0).type().is_float()) {
        out = A.eq(lower_bits_of_float(e.kid(0)),
                   lower_bits_of_float(e.kid(1)));
        break;
      }
      [[fallthrough]];
    default: {
      Expr kids[3] = {e, e, e};
      bool changed = false;
      for (unsigned i = 0; i < e.arity(); i++) {
        kids[i] = lower(e.kid(i));
        changed = changed || kids[i] != e.kid(i);
      }
      out = changed ? rebuild(A, e, kids, e.arity()) : e;
      break;
    }
    }
  }
  memo_.emplace(e.get(), out);
  return out;
}

} // namespace eqc
