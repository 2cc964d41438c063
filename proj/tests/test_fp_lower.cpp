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

#include "doctest.h"

#include "eqc/bitblast.h"
#include "eqc/eval.h"
#include "eqc/expr.h"
#include "eqc/fp_lower.h"
#include "eqc/softfloat.h"
#include "eqc/solver.h"

#include <random>
#include <unordered_set>
#include <vector>

using namespace eqc;

namespace {

bool has_float_ops(Expr root) {
  std::unordered_set<const ExprNode *> seen;
  std::vector<Expr> stack{root};
  while (!stack.empty()) {
    Expr e = stack.back();
    stack.pop_back();
    if (!seen.insert(e.get()).second)
      continue;
    if (e.type().is_float())
      return true;
    switch (e.op()) {
    case Op::FloatOfBits:
    case Op::BitsOfFloat:
    case Op::FpAdd:
    case Op::FpSub:
    case Op::FpMul:
    case Op::FpDiv:
    case Op::FpMin:
    case Op::FpMax:
    case Op::FpRound:
    case Op::FpClassify:
    case Op::FpIsNan:
    case Op::FpIsInf:
    case Op::FpIsZero:
    case Op::FpIsSubnormal:
    case Op::FpIsNormal:
    case Op::FpEq:
    case Op::FpLt:
    case Op::FpLe:
      return true;
    default:
      break;
    }
    for (unsigned i = 0; i < e.arity(); i++)
      stack.push_back(e.kid(i));
  }
  return false;
}

// Pins every bit of a variable through solver assumptions.
void assume_value(BitBlaster &bb, std::vector<int> &as, Expr var,
                  uint64_t val) {
  const std::vector<int> &bits = bb.bits(var);
  for (size_t i = 0; i < bits.size(); i++)
    as.push_back((val >> i) & 1 ? bits[i] : -bits[i]);
}

} // namespace

TEST_CASE("lowering a float add leaves no float operations behind") {
  ExprArena A;
  FloatFormat f = FloatFormat::binary32();
  Expr a = A.var("a", Type::ubits(32));
  Expr b = A.var("b", Type::ubits(32));
  Expr rm = A.constant(Type::ubits(2), (uint64_t)RoundingMode::RNE);
  Expr sum = A.bits_of_float(
      A.fp_add(A.float_of_bits(a, f), A.float_of_bits(b, f), rm));
  REQUIRE(has_float_ops(sum));

  Expr low = fp_lower(A, sum);
  CHECK(!has_float_ops(low));
  CHECK(low.type() == Type::ubits(32));
}

TEST_CASE("lowered minifloat circuits match the executable operations") {
  ExprArena A;
  FloatFormat f = FloatFormat::minifloat();
  Expr av = A.var("a", Type::ubits(8));
  Expr bv = A.var("b", Type::ubits(8));
  Expr af = A.float_of_bits(av, f);
  Expr bf = A.float_of_bits(bv, f);
  Expr rm = A.constant(Type::ubits(2), (uint64_t)RoundingMode::RNE);

  struct Case {
    const char *name;
    Expr expr;
    uint64_t (*ref)(uint64_t, uint64_t);
  };
  FloatFormat ff = f;
  static FloatFormat sf = ff;
  Case cases[] = {
      {"add", A.bits_of_float(A.fp_add(af, bf, rm)),
       [](uint64_t x, uint64_t y) {
         return fp::add(sf, x, y, RoundingMode::RNE);
       }},
      {"sub", A.bits_of_float(A.fp_sub(af, bf, rm)),
       [](uint64_t x, uint64_t y) {
         return fp::sub(sf, x, y, RoundingMode::RNE);
       }},
      {"mul", A.bits_of_float(A.fp_mul(af, bf, rm)),
       [](uint64_t x, uint64_t y) {
         return fp::mul(sf, x, y, RoundingMode::RNE);
       }},
      {"min", A.bits_of_float(A.fp_min(af, bf)),
       [](uint64_t x, uint64_t y) { return fp::min(sf, x, y); }},
      {"max", A.bits_of_float(A.fp_max(af, bf)),
       [](uint64_t x, uint64_t y) { return fp::max(sf, x, y); }},
  };

  for (const Case &c : cases) {
    CAPTURE(c.name);
    Expr low = fp_lower(A, c.expr);
    REQUIRE(!has_float_ops(low));

    Solver S;
    BitBlaster bb(A, S);
    bb.bits(low);
    bb.bits(av);
    bb.bits(bv);

    std::mt19937 rng(1234);
    int bad = 0;
    for (int iter = 0; iter < 300 && bad < 5; iter++) {
      uint64_t x = rng() & 0xff, y = rng() & 0xff;
      std::vector<int> as;
      assume_value(bb, as, av, x);
      assume_value(bb, as, bv, y);
      REQUIRE(S.solve(as) == LBool::True);
      uint64_t got = bb.model_bits(S, low);
      uint64_t want = c.ref(x, y);
      if (got != want) {
        bad++;
        MESSAGE(c.name << " a=" << x << " b=" << y << " got=" << got
                       << " want=" << want);
      }
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("lowered predicates agree with concrete classification") {
  ExprArena A;
  FloatFormat f = FloatFormat::minifloat();
  Expr av = A.var("a", Type::ubits(8));
  Expr af = A.float_of_bits(av, f);

  struct Case {
    const char *name;
    Expr expr;
    bool (*ref)(uint64_t);
  };
  static FloatFormat sf = f;
  Case cases[] = {
      {"is_nan", A.fp_is_nan(af),
       [](uint64_t x) { return fp::is_nan(sf, x); }},
      {"is_inf", A.fp_is_inf(af),
       [](uint64_t x) { return fp::is_inf(sf, x); }},
      {"is_zero", A.fp_is_zero(af),
       [](uint64_t x) { return fp::is_zero(sf, x); }},
      {"is_subnormal", A.fp_is_subnormal(af),
       [](uint64_t x) { return fp::is_subnormal(sf, x); }},
      {"is_normal", A.fp_is_normal(af),
       [](uint64_t x) { return fp::is_normal(sf, x); }},
  };

  for (const Case &c : cases) {
    CAPTURE(c.name);
    Expr low = fp_lower(A, c.expr);
    REQUIRE(!has_float_ops(low));

    Solver S;
    BitBlaster bb(A, S);
    int lit = bb.literal(low);
    bb.bits(av);

    int bad = 0;
    for (uint64_t x = 0; x < 256; x++) {
      std::vector<int> as;
      assume_value(bb, as, av, x);
      REQUIRE(S.solve(as) == LBool::True);
      bool got = S.model_value(lit) == LBool::True;
      if (got != c.ref(x))
        bad++;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("comparison and classify lowering matches evaluation") {
  ExprArena A;
  FloatFormat f = FloatFormat::minifloat();
  Expr av = A.var("a", Type::ubits(8));
  Expr bv = A.var("b", Type::ubits(8));
  Expr af = A.float_of_bits(av, f);
  Expr bf = A.float_of_bits(bv, f);

  Expr cmp = A.ite(A.fp_lt(af, bf), A.constant(Type::ubits(4), 1),
                   A.ite(A.fp_eq(af, bf), A.constant(Type::ubits(4), 2),
                         A.constant(Type::ubits(4), 3)));
  Expr cls = A.fp_classify(af);

  Expr cmp_low = fp_lower(A, cmp);
  Expr cls_low = fp_lower(A, cls);
  REQUIRE(!has_float_ops(cmp_low));
  REQUIRE(!has_float_ops(cls_low));

  Solver S;
  BitBlaster bb(A, S);
  bb.bits(cmp_low);
  bb.bits(cls_low);
  bb.bits(av);
  bb.bits(bv);

  std::mt19937 rng(77);
  int bad = 0;
  for (int iter = 0; iter < 400; iter++) {
    uint64_t x = rng() & 0xff, y = rng() & 0xff;
    std::vector<int> as;
    assume_value(bb, as, av, x);
    assume_value(bb, as, bv, y);
    REQUIRE(S.solve(as) == LBool::True);

    Env env;
    env.set(av, x);
    env.set(bv, y);
    if (bb.model_bits(S, cmp_low) != eval(cmp, env))
      bad++;
    if (bb.model_bits(S, cls_low) != eval(cls, env))
      bad++;
  }
  CHECK(bad == 0);
}

TEST_CASE("float variables lower to fresh bit variables") {
  ExprArena A;
  FloatFormat f = FloatFormat::minifloat();
  Expr xf = A.var("x", Type::float_(f));
  Expr e = A.bits_of_float(
      A.fp_add(xf, A.float_of_bits(A.constant(Type::ubits(8), 0x38), f),
               A.constant(Type::ubits(2), (uint64_t)RoundingMode::RNE)));

  FpLowerer L(A);
  Expr low = L.lower(e);
  REQUIRE(!has_float_ops(low));

  auto it = L.var_map().find(xf.get());
  REQUIRE(it != L.var_map().end());
  Expr xb = it->second;
  CHECK(xb.is_var());
  CHECK(xb.var_name() == "x_bits");
  CHECK(xb.type() == Type::ubits(8));

  // 1.0 + 1.0 = 2.0 in the minifloat encoding.
  Solver S;
  BitBlaster bb(A, S);
  bb.bits(low);
  bb.bits(xb);
  std::vector<int> as;
  assume_value(bb, as, xb, 0x38);
  REQUIRE(S.solve(as) == LBool::True);
  CHECK(bb.model_bits(S, low) == 0x40);
}

TEST_CASE("equality on floats lowers to equality of encodings") {
  ExprArena A;
  FloatFormat f = FloatFormat::minifloat();
  Expr av = A.var("a", Type::ubits(8));
  Expr bv = A.var("b", Type::ubits(8));
  Expr eq = A.eq(A.float_of_bits(av, f), A.float_of_bits(bv, f));

  Expr low = fp_lower(A, eq);
  REQUIRE(!has_float_ops(low));

  Solver S;
  BitBlaster bb(A, S);
  int lit = bb.literal(low);
  bb.bits(av);
  bb.bits(bv);

  // Bit equality, not IEEE equality: -0 != +0 here and NaN == NaN.
  std::mt19937 rng(9);
  for (int iter = 0; iter < 200; iter++) {
    uint64_t x = rng() & 0xff;
    uint64_t y = (iter % 3 == 0) ? x : (rng() & 0xff);
    std::vector<int> as;
    assume_value(bb, as, av, x);
    assume_value(bb, as, bv, y);
    REQUIRE(S.solve(as) == LBool::True);
    CHECK((S.model_value(lit) == LBool::True) == (x == y));
  }
}

TEST_CASE("lowering is idempotent and preserves non-float structure") {
  ExprArena A;
  Expr a = A.var("a", Type::ubits(12));
  Expr b = A.var("b", Type::ubits(12));
  Expr pure = A.add(A.mul(a, b), A.constant(Type::ubits(12), 7));
  CHECK(fp_lower(A, pure) == pure);

  FloatFormat f = FloatFormat::minifloat();
  Expr av = A.var("c", Type::ubits(8));
  Expr mixed = A.concat(
      pure, A.bits_of_float(A.fp_round(
                A.float_of_bits(av, f),
                A.constant(Type::ubits(2), (uint64_t)RoundingMode::RU))));
  Expr low = fp_lower(A, mixed);
  REQUIRE(!has_float_ops(low));
  CHECK(fp_lower(A, low) == low);
  CHECK(low.op() == Op::Concat);
  CHECK(low.kid(0) == pure);
}

TEST_CASE("random composite float expressions evaluate consistently") {
  ExprArena A;
  FloatFormat f = FloatFormat::minifloat();
  Expr av = A.var("a", Type::ubits(8));
  Expr bv = A.var("b", Type::ubits(8));
  Expr cv = A.var("c", Type::ubits(8));
  Expr af = A.float_of_bits(av, f);
  Expr bf = A.float_of_bits(bv, f);
  Expr cf = A.float_of_bits(cv, f);
  Expr rne =
      A.constant(Type::ubits(2), (uint64_t)RoundingMode::RNE);
  Expr rd = A.constant(Type::ubits(2), (uint64_t)RoundingMode::RD);

  // (a * b) + c rounded down when a < c, else min(a, c); NaN guard on top.
  Expr prod = A.fp_mul(af, bf, rne);
  Expr sum = A.fp_add(prod, cf, rd);
  Expr pick = A.ite(A.fp_lt(af, cf), sum, A.fp_min(af, cf));
  Expr out = A.ite(A.fp_is_nan(pick), A.constant(Type::ubits(8), 0x7f),
                   A.bits_of_float(pick));

  Expr low = fp_lower(A, out);
  REQUIRE(!has_float_ops(low));

  Solver S;
  BitBlaster bb(A, S);
  bb.bits(low);
  bb.bits(av);
  bb.bits(bv);
  bb.bits(cv);

  std::mt19937 rng(4242);
  int bad = 0;
  for (int iter = 0; iter < 500 && bad < 5; iter++) {
    uint64_t x = rng() & 0xff, y = rng() & 0xff, z = rng() & 0xff;
    std::vector<int> as;
    assume_value(bb, as, av, x);
    assume_value(bb, as, bv, y);
    assume_value(bb, as, cv, z);
    REQUIRE(S.solve(as) == LBool::True);

    Env env;
    env.set(av, x);
    env.set(bv, y);
    env.set(cv, z);
    uint64_t got = bb.model_bits(S, low);
    uint64_t want = eval(out, env);
    if (got != want) {
      bad++;
      MESSAGE("a=" << x << " b=" << y << " c=" << z << " got=" << got
                   << " want=" << want);
    }
  }
  CHECK(bad == 0);
}
