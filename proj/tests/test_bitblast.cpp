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
#include "eqc/solver.h"

#include <random>
#include <stdexcept>
#include <vector>

using namespace eqc;

namespace {

// Fixes every variable to its Env value through assumptions, solves,
// and compares the model value of each expression against eval.
struct CrossChecker {
  ExprArena &A;
  Solver solver;
  BitBlaster bb;
  std::vector<Expr> vars;

  explicit CrossChecker(ExprArena &arena) : A(arena), bb(arena, solver) {}

  void add_var(Expr v) { vars.push_back(v); }

  // returns number of disagreements over the probe expressions
  size_t check(const Env &env, const std::vector<Expr> &probes) {
    std::vector<int> assumptions;
    for (Expr v : vars) {
      uint64_t val = env.get(v);
      if (v.type().is_bool()) {
        int l = bb.literal(v);
        assumptions.push_back(val ? l : -l);
      } else {
        const std::vector<int> &ls = bb.bits(v);
        for (size_t i = 0; i < ls.size(); i++)
          assumptions.push_back((val >> i) & 1 ? ls[i] : -ls[i]);
      }
    }
    // probe literals must exist before solving
    for (Expr e : probes) {
      if (e.type().is_bool())
        bb.literal(e);
      else
        bb.bits(e);
    }
    REQUIRE(solver.solve(assumptions) == LBool::True);
    size_t bad = 0;
    for (Expr e : probes) {
      uint64_t want = eval(e, env);
      uint64_t got = e.type().is_bool() ? (uint64_t)bb.model_bool(solver, e)
                                        : bb.model_bits(solver, e);
      if (got != want) {
        if (bad == 0) {
          MESSAGE("mismatch: " << to_string(e) << " got " << got << " want "
                               << want);
        }
        bad++;
      }
    }
    return bad;
  }
};

} // namespace

TEST_CASE("blasted shift of masked operand") {
  ExprArena A;
  Expr a = A.var("a", Type::ubits(8));
  Expr b = A.var("b", Type::ubits(8));
  Expr e = A.shl(A.bitand_(a, A.constant(Type::ubits(8), 3)), b);
  Env env;
  env.set(a, 7);
  env.set(b, 1);
  CHECK(eval(e, env) == 6);

  CrossChecker cc(A);
  cc.add_var(a);
  cc.add_var(b);
  CHECK(cc.check(env, {e}) == 0);
}

TEST_CASE("exhaustive 3-bit binary operations vs eval") {
  ExprArena A;
  Expr a = A.var("a", Type::ubits(3));
  Expr b = A.var("b", Type::ubits(3));
  std::vector<Expr> probes = {
      A.add(a, b),    A.sub(a, b),    A.mul(a, b),   A.udiv(a, b),
      A.urem(a, b),   A.shl(a, b),    A.lshr(a, b),  A.ashr(a, b),
      A.bitand_(a, b), A.bitor_(a, b), A.bitxor_(a, b), A.bitnot(a),
      A.neg(a),       A.bool_to_bits(A.eq(a, b)),
  };
  std::vector<Expr> bool_probes = {
      A.eq(a, b), A.ult(a, b), A.ule(a, b), A.slt(a, b), A.sle(a, b),
      A.ne(a, b),
  };
  for (Expr e : bool_probes)
    probes.push_back(e);

  CrossChecker cc(A);
  cc.add_var(a);
  cc.add_var(b);
  size_t bad = 0;
  for (uint64_t va = 0; va < 8; va++)
    for (uint64_t vb = 0; vb < 8; vb++) {
      Env env;
      env.set(a, va);
      env.set(b, vb);
      bad += cc.check(env, probes);
    }
  CHECK(bad == 0);
}

TEST_CASE("shift amounts wider and narrower than the operand") {
  ExprArena A;
  Expr a = A.var("a", Type::ubits(3));
  Expr n = A.var("n", Type::ubits(2));
  Expr wide = A.var("w", Type::ubits(6));
  std::vector<Expr> probes = {
      A.shl(a, n),  A.lshr(a, n),  A.ashr(a, n),
      A.shl(a, wide), A.lshr(a, wide), A.ashr(a, wide),
      A.shl(wide, a), A.lshr(wide, a), A.ashr(wide, a),
  };
  CrossChecker cc(A);
  cc.add_var(a);
  cc.add_var(n);
  cc.add_var(wide);
  size_t bad = 0;
  for (uint64_t va = 0; va < 8; va++)
    for (uint64_t vn = 0; vn < 4; vn++)
      for (uint64_t vw = 0; vw < 64; vw += 7) {
        Env env;
        env.set(a, va);
        env.set(n, vn);
        env.set(wide, vw);
        bad += cc.check(env, probes);
      }
  CHECK(bad == 0);
}

TEST_CASE("structure ops: extract concat extend truncate ite") {
  ExprArena A;
  Expr a = A.var("a", Type::ubits(8));
  Expr b = A.var("b", Type::ubits(3));
  Expr c = A.var("c", Type::bool_());
  Expr sa = A.var("sa", Type::sbits(5));
  std::vector<Expr> probes = {
      A.extract(a, 5, 2),
      A.extract(a, 7, 7),
      A.concat(b, a),
      A.concat(a, b),
      A.zext(b, 9),
      A.sext(b, 9),
      A.sext(sa, 12),
      A.trunc(a, 4),
      A.ite(c, a, A.bitnot(a)),
      A.bool_to_bits(c),
      A.cast(sa, Type::ubits(5)),
      A.cast(a, Type::sbits(8)),
  };
  std::vector<Expr> bool_probes = {
      A.ite(c, A.eq(b, A.constant(Type::ubits(3), 1)), A.not_(c)),
      A.xor_(c, A.ult(b, A.trunc(a, 3))),
      A.implies(c, A.eq(a, a)),
  };
  for (Expr e : bool_probes)
    probes.push_back(e);

  CrossChecker cc(A);
  cc.add_var(a);
  cc.add_var(b);
  cc.add_var(c);
  cc.add_var(sa);
  std::mt19937_64 rng(77);
  size_t bad = 0;
  for (int i = 0; i < 200; i++) {
    Env env;
    env.set(a, rng());
    env.set(b, rng());
    env.set(c, rng() & 1);
    env.set(sa, rng());
    bad += cc.check(env, probes);
  }
  CHECK(bad == 0);
}

namespace {

// Random well-typed expression builder over a fixed variable set.
struct RandomExprs {
  ExprArena &A;
  std::mt19937_64 rng;
  std::vector<unsigned> widths = {1, 3, 4, 8, 12};
  std::vector<std::vector<Expr>> pools; // per width index
  std::vector<Expr> bools;
  std::vector<Expr> vars;

  RandomExprs(ExprArena &arena, uint64_t seed) : A(arena), rng(seed) {
    for (size_t wi = 0; wi < widths.size(); wi++) {
      unsigned w = widths[wi];
      pools.emplace_back();
      for (int k = 0; k < 2; k++) {
        Expr v = A.var("v" + std::to_string(w) + "_" + std::to_string(k),
                       k ? Type::sbits(w) : Type::ubits(w));
        pools[wi].push_back(v);
        vars.push_back(v);
      }
      pools[wi].push_back(A.constant(Type::ubits(w), rng()));
    }
    Expr p = A.var("p", Type::bool_());
    Expr q = A.var("q", Type::bool_());
    bools = {p, q, A.tru()};
    vars.push_back(p);
    vars.push_back(q);
  }

  Expr pick(std::vector<Expr> &pool) {
    return pool[rng() % pool.size()];
  }

  // one random node; grows the pools
  void grow() {
    size_t wi = rng() % widths.size();
    unsigned w = widths[wi];
    auto &pool = pools[wi];
    Expr a = pick(pool), b = pick(pool);
    // operands of one width; results may land in another pool
    switch (rng() % 20) {
    case 0: pool.push_back(A.add(a, b)); break;
    case 1: pool.push_back(A.sub(a, b)); break;
    case 2: pool.push_back(A.mul(a, b)); break;
    case 3: pool.push_back(A.udiv(a, b)); break;
    case 4: pool.push_back(A.urem(a, b)); break;
    case 5: pool.push_back(A.shl(a, b)); break;
    case 6: pool.push_back(A.lshr(a, b)); break;
    case 7: pool.push_back(A.ashr(a, b)); break;
    case 8: pool.push_back(A.bitand_(a, b)); break;
    case 9: pool.push_back(A.bitor_(a, b)); break;
    case 10: pool.push_back(A.bitxor_(a, b)); break;
    case 11: pool.push_back(A.bitnot(a)); break;
    case 12: pool.push_back(A.neg(a)); break;
    case 13: pool.push_back(A.ite(bools[rng() % bools.size()], a,
                                  A.cast(b, a.type()))); break;
    case 14: bools.push_back(A.eq(a, b)); break;
    case 15: bools.push_back(A.ult(a, b)); break;
    case 16: bools.push_back(A.slt(a, b)); break;
    case 17: {
      unsigned hi = rng() % w, lo = rng() % (hi + 1);
      pools[0].size(); // keep widths stable: push to matching pool if any
      Expr ex = A.extract(a, hi, lo);
      for (size_t j = 0; j < widths.size(); j++)
        if (widths[j] == ex.type().width())
          pools[j].push_back(ex);
      break;
    }
    case 18: {
      Expr c = bools[rng() % bools.size()];
      Expr d = bools[rng() % bools.size()];
      switch (rng() % 4) {
      case 0: bools.push_back(A.and_(c, d)); break;
      case 1: bools.push_back(A.or_(c, d)); break;
      case 2: bools.push_back(A.xor_(c, d)); break;
      default: bools.push_back(A.not_(c)); break;
      }
      break;
    }
    default: {
      unsigned tw = widths[rng() % widths.size()];
      pools[index_of(tw)].push_back(A.cast(a, Type::ubits(tw)));
      break;
    }
    }
  }

  size_t index_of(unsigned w) {
    for (size_t j = 0; j < widths.size(); j++)
      if (widths[j] == w)
        return j;
    return 0;
  }
};

} // namespace

TEST_CASE("random expression forest agrees with eval under SAT models") {
  ExprArena A;
  RandomExprs gen(A, 0xb1a57ull);
  for (int i = 0; i < 400; i++)
    gen.grow();

  std::vector<Expr> probes;
  for (auto &pool : gen.pools)
    for (Expr e : pool)
      probes.push_back(e);
  for (Expr e : gen.bools)
    probes.push_back(e);

  CrossChecker cc(A);
  for (Expr v : gen.vars)
    cc.add_var(v);

  std::mt19937_64 rng(0xfeedull);
  size_t bad = 0;
  for (int i = 0; i < 60; i++) {
    Env env;
    for (Expr v : gen.vars)
      env.set(v, rng());
    bad += cc.check(env, probes);
  }
  CHECK(bad == 0);
}

TEST_CASE("assert_true pins values and UNSAT detects contradictions") {
  ExprArena A;
  Solver s;
  BitBlaster bb(A, s);
  Expr x = A.var("x", Type::ubits(8));
  Expr y = A.var("y", Type::ubits(8));
  bb.assert_true(A.eq(A.add(x, y), A.constant(Type::ubits(8), 10)));
  bb.assert_true(A.eq(x, A.constant(Type::ubits(8), 3)));
  REQUIRE(s.solve() == LBool::True);
  CHECK(bb.model_bits(s, x) == 3);
  CHECK(bb.model_bits(s, y) == 7);
  bb.assert_true(A.ult(y, A.constant(Type::ubits(8), 7)));
  CHECK(s.solve() == LBool::False);
}

TEST_CASE("implied_by guards retract without poisoning definitions") {
  ExprArena A;
  Solver s;
  BitBlaster bb(A, s);
  Expr x = A.var("x", Type::ubits(4));
  int g1 = bb.fresh_lit();
  int g2 = bb.fresh_lit();
  bb.implied_by(g1, A.eq(x, A.constant(Type::ubits(4), 5)));
  bb.implied_by(g2, A.eq(x, A.constant(Type::ubits(4), 9)));
  REQUIRE(s.solve({g1}) == LBool::True);
  CHECK(bb.model_bits(s, x) == 5);
  REQUIRE(s.solve({g2}) == LBool::True);
  CHECK(bb.model_bits(s, x) == 9);
  REQUIRE(s.solve({g1, g2}) == LBool::False);
  // retire g1 permanently, g2 alone must stay satisfiable
  s.add_clause({-g1});
  REQUIRE(s.solve({g2}) == LBool::True);
  CHECK(bb.model_bits(s, x) == 9);
}

TEST_CASE("float expressions are rejected by the blaster") {
  ExprArena A;
  Solver s;
  BitBlaster bb(A, s);
  Expr a = A.var("fa", Type::float_(FloatFormat::binary32()));
  Expr b = A.var("fb", Type::float_(FloatFormat::binary32()));
  Expr sum = A.fp_add(a, b, A.rm_const(RoundingMode::RNE));
  CHECK_THROWS_AS(bb.bits(A.bits_of_float(sum)), std::logic_error);
}
