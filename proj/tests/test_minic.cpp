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

#include "eqc/goto_prog.h"
#include "eqc/minic.h"

#include <algorithm>
#include <random>
#include <stdexcept>

using namespace eqc;
using namespace eqc::minic;

namespace {

Ast parse_checked(const std::string &src) {
  Ast ast = parse(src, "test.mc");
  typecheck(ast);
  return ast;
}

unsigned count_kind(const GotoProgram &p, GKind k) {
  unsigned n = 0;
  for (const auto &in : p.instrs)
    if (in.kind == k) n++;
  return n;
}

const char *kGuardedUpdate = R"(
u32 reset;
u32 a;
u32 b;
u32 x;
u32 y;

void top() {
  if (reset) {
    x = 0;
    y = 0;
  } else {
    if (a > b) {
      x = a + b;
    } else {
      y = (a & 3) << b;
    }
  }
}
)";

// Runs both interpretations of the same source from one shared binding
// map and checks the observable outcomes agree.
void cross_check(const std::string &src, uint64_t seed, int rounds,
                 const UnwindPolicy &pol = {}) {
  ExprArena A;
  Ast ast = parse_checked(src);
  GotoProgram p = lower_to_goto(ast, A, pol);

  std::mt19937_64 rng(seed);
  int bad = 0;
  for (int round = 0; round < rounds; round++) {
    std::unordered_map<std::string, uint64_t> in;
    for (Expr v : p.inputs) in[v.var_name()] = rng();

    GotoRun gr = run_goto(p, in);
    AstRun ar = interp_ast(
        ast, pol, in,
        [&](const std::string &name, Type) { return in.at(name); });

    bool ok = gr.blocked == ar.blocked;
    std::vector<std::string> gv = gr.violated, av = ar.violated;
    std::sort(gv.begin(), gv.end());
    std::sort(av.begin(), av.end());
    ok = ok && gv == av;
    for (const std::string &g : p.global_names) {
      auto it = gr.values.find(g);
      if (it == gr.values.end()) continue;
      if (!ar.globals.count(g) || ar.globals.at(g) != it->second) ok = false;
    }
    if (!ok) {
      bad++;
      MESSAGE("divergence on round " << round << " blocked " << gr.blocked
                                     << "/" << ar.blocked);
    }
  }
  CHECK(bad == 0);
}

} // namespace

TEST_CASE("a guarded update lowers to a compact forward program") {
  ExprArena A;
  Ast ast = parse_checked(kGuardedUpdate);
  GotoProgram p = lower_to_goto(ast, A);

  CHECK(p.instrs.size() == 9);
  CHECK(count_kind(p, GKind::Branch) == 2);
  CHECK(count_kind(p, GKind::Assign) == 4);
  CHECK(count_kind(p, GKind::Goto) == 2);
  CHECK(count_kind(p, GKind::Skip) == 1);
  CHECK(p.inputs.size() == 5);
  CHECK(p.global_names.size() == 5);

  CHECK(p.instrs[0].kind == GKind::Branch);
  CHECK(p.instrs[0].target == 1);
  CHECK(p.instrs[0].else_target == 4);
  CHECK(p.instrs[4].kind == GKind::Branch);
  CHECK(p.instrs[4].target == 5);
  CHECK(p.instrs[4].else_target == 7);
  CHECK(p.instrs[3].target == 8);
  CHECK(p.instrs[6].target == 8);
  CHECK(p.instrs[8].kind == GKind::Skip);
}

TEST_CASE("the guarded update takes each of its three paths") {
  ExprArena A;
  Ast ast = parse_checked(kGuardedUpdate);
  GotoProgram p = lower_to_goto(ast, A);

  auto run = [&](uint64_t reset, uint64_t a, uint64_t b) {
    return run_goto(
        p, {{"reset", reset}, {"a", a}, {"b", b}, {"x", 7}, {"y", 7}});
  };

  GotoRun r1 = run(1, 5, 3);
  CHECK(r1.values.at("x") == 0);
  CHECK(r1.values.at("y") == 0);

  GotoRun r2 = run(0, 5, 3);
  CHECK(r2.values.at("x") == 8);
  CHECK(r2.values.at("y") == 7);

  GotoRun r3 = run(0, 5, 6);
  CHECK(r3.values.at("x") == 7);
  CHECK(r3.values.at("y") == ((5u & 3u) << 6));

  CHECK(r1.branches != r2.branches);
  CHECK(r2.branches != r3.branches);
}

TEST_CASE("pretty printing then reparsing reproduces the tree") {
  const char *sources[] = {
      kGuardedUpdate,
      R"(
u8 n;
u32 acc;
u32 table[4];

u32 scale(u32 v, u32 k) {
  return v * k + 1;
}

void top() {
  u32 i = 0;
  for (i = 0; i < 4; i++) {
    table[i] = scale(i, (u32)n);
  }
  while (acc < 100) {
    acc = acc + table[acc % 4];
  }
  assert(acc >= 100, "done");
}
)",
      R"(
f32 p;
f32 q;
bool flag;

void top() {
  f32 s = fp_add(p, q, RU);
  bool n = fp_is_nan(s) || fp_is_inf(s);
  flag = n ? true : fp_le(p, s);
  assume(!fp_is_zero(q));
  assert(flag);
}
)",
  };
  for (const char *src : sources) {
    Ast a = parse(src, "t.mc");
    std::string printed = pretty_print(a);
    Ast b = parse(printed, "t2.mc");
    CHECK(ast_equal(a, b));
    CHECK(pretty_print(b) == printed);
  }
}

TEST_CASE("macro definitions expand before parsing") {
  Ast a = parse_checked(R"(
#define LIMIT 15
#define SPAN (LIMIT + 1)
u32 v;
void top() {
  if (v < LIMIT) { v = SPAN; }
}
)");
  Ast b = parse_checked(R"(
u32 v;
void top() {
  if (v < 15) { v = (15 + 1); }
}
)");
  CHECK(ast_equal(a, b));
}

TEST_CASE("the typechecker rejects ill-formed programs") {
  auto rejects = [](const std::string &src, const std::string &needle) {
    try {
      parse_checked(src);
      MESSAGE("accepted: " << src);
      CHECK(false);
    } catch (const CompileError &e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  rejects("u32 a; s32 b; void top() { a = a + b; }", "sign");
  rejects("void top() { u32 x = 1; { u32 x = 2; } }", "shadow");
  rejects("u32 a; void top() { u8 b = a; }", "implicitly");
  rejects("u32 a; void top() { f32 f = (f32)a; }", "cast");
  rejects("f32 f; void top() { f = f % f; }", "%");
  rejects("u32 a; void top() { a = missing; }", "undeclared");
  rejects("u32 a; void top() { a = missing(a); }", "undeclared");
  rejects("u32 t[3]; void top() { t[5] = 1; }", "bounds");
  rejects("f32 t[3]; void top() { }", "float array");
  rejects("u32 a; u32 f(u32 v) { return v; } void top() { a = a > 0 ? f(a) : 0; }",
          "call");
  rejects("u32 a; u32 f(u32 v) { return v; } void top() { if (a > 0 && f(a) > 0) { a = 1; } }",
          "call");
  rejects("u32 a; void top() { assert(a > 0, \"a7\"); }", "reserved");
  rejects("u32 a; void top() { assert(a > 0, \"k\"); assert(a > 1, \"k\"); }",
          "duplicate");
  rejects("u32 a; f32 f; void top() { if (a == f) { a = 1; } }", "float");
  rejects("f32 f; f64 d; void top() { f = fp_add(f, d); }", "format");
  rejects("u32 a; void top() { a = fp_bits(a); }", "float");
  rejects("u32 a; void top() { a = nondet_u32(1); }", "argument");
  rejects("void f() {} void top() { u32 a = f(); }", "void");
}

TEST_CASE("lowering rejects recursion and useless zero bounds") {
  {
    ExprArena A;
    Ast ast = parse_checked(
        "u32 a; u32 f(u32 v) { return g(v); } u32 g(u32 v) { return f(v); } "
        "void top() { a = f(a); }");
    CHECK_THROWS_AS((void)lower_to_goto(ast, A), CompileError);
  }
  {
    ExprArena A;
    Ast ast = parse_checked("u32 a; void top() { while (a > 0) { a = a - 1; } }");
    UnwindPolicy pol;
    pol.bound = 0;
    pol.unwinding_assert = false;
    CHECK_THROWS_AS((void)lower_to_goto(ast, A, pol), CompileError);
  }
}

TEST_CASE("a bounded while loop unrolls into guarded copies") {
  ExprArena A;
  Ast ast = parse_checked("u32 i; void top() { i = 0; while (i < 3) { i = i + 1; } }");
  UnwindPolicy pol;
  pol.bound = 3;
  GotoProgram p = lower_to_goto(ast, A, pol);

  CHECK(count_kind(p, GKind::Branch) == 3);
  CHECK(count_kind(p, GKind::Assert) == 1);
  CHECK(count_kind(p, GKind::Assume) == 1);
  CHECK(p.has_label("unwind.top.0@l0i3"));

  GotoRun ok = run_goto(p, {{"i", 0}});
  CHECK(!ok.blocked);
  CHECK(ok.violated.empty());
  CHECK(ok.values.at("i") == 3);

  UnwindPolicy tight;
  tight.bound = 2;
  ExprArena A2;
  GotoProgram p2 = lower_to_goto(ast, A2, tight);
  GotoRun over = run_goto(p2, {{"i", 0}});
  CHECK(over.blocked);
  CHECK(over.violated == std::vector<std::string>{"unwind.top.0@l0i2"});
}

TEST_CASE("per-loop bounds override the default") {
  ExprArena A;
  Ast ast = parse_checked(R"(
u32 s;
void top() {
  u32 i = 0;
  while (i < 2) { i = i + 1; }
  u32 j = 0;
  while (j < 6) { j = j + 1; s = s + j; }
}
)");
  UnwindPolicy pol;
  pol.bound = 2;
  pol.per_loop["top.1"] = 6;
  GotoProgram p = lower_to_goto(ast, A, pol);
  GotoRun r = run_goto(p, {{"s", 0}});
  CHECK(!r.blocked);
  CHECK(r.violated.empty());
  CHECK(r.values.at("s") == 21);
}

TEST_CASE("interpreting the tree matches running the lowered program") {
  SUBCASE("guarded update") { cross_check(kGuardedUpdate, 11, 300); }

  SUBCASE("loops with early return") {
    cross_check(R"(
u32 n;
u32 out;
void top() {
  u32 i = 0;
  while (i < 8) {
    if (n == i) {
      out = i * 2;
      return;
    }
    i = i + 1;
  }
  out = 99;
}
)",
                12, 300);
  }

  SUBCASE("function calls repeated in one expression") {
    cross_check(R"(
u32 a;
u32 b;
u32 r;
u32 square(u32 v) { return v * v; }
u32 mix(u32 x, u32 y) { return square(x) + square(y) + square(x + y); }
void top() {
  r = mix(a, b) + mix(b, a) + square(a);
}
)",
                13, 300);
  }

  SUBCASE("arrays with symbolic indices") {
    cross_check(R"(
u32 sel;
u32 out;
void top() {
  u32 t[4];
  t[0] = 10;
  t[1] = 20;
  t[2] = 30;
  t[3] = 40;
  t[sel % 6] = out;
  out = t[sel % 5];
  assert(out < 41 || out == t[0], "mixed");
}
)",
                14, 500);
  }

  SUBCASE("signed arithmetic") {
    cross_check(R"(
s32 a;
s32 b;
s32 q;
s32 r;
bool lt;
void top() {
  q = a / b;
  r = a % b;
  lt = a < b;
  s32 sh = a >> 3;
  q = q + sh * (b >> 1);
  if (a <= 0 - b) { r = 0 - r; }
}
)",
                15, 500);
  }

  SUBCASE("narrow and wide mixed via casts") {
    cross_check(R"(
u8 a;
u16 b;
u64 wide;
s8 sa;
s64 swide;
void top() {
  wide = (u64)a * (u64)b + wide;
  swide = (s64)sa - swide;
  u8 back = (u8)wide;
  wide = wide ^ (u64)back;
}
)",
                16, 500);
  }

  SUBCASE("float arithmetic and predicates") {
    cross_check(R"(
f32 x;
f32 y;
f32 out;
bool sane;
u8 cls;
void top() {
  f32 s = fp_add(x, y, RD);
  f32 p = x * y;
  out = fp_min(s, p);
  sane = !fp_is_nan(out) && fp_le(out, fp_max(s, p));
  cls = fp_classify(out);
  if (x < y) { out = fp_div(y, x, RZ); }
  assert(sane || fp_is_nan(x) || fp_is_nan(y) || fp_is_nan(out), "sanity");
}
)",
                17, 500);
  }

  SUBCASE("minifloat round and compare") {
    cross_check(R"(
f8 a;
f8 b;
f8 r;
bool eq;
void top() {
  r = fp_round(fp_mul(a, b, RU), RNE);
  eq = r == fp_sub(a, b);
  if (a != a) { r = b; }
}
)",
                18, 500);
  }

  SUBCASE("assumes block some inputs") {
    cross_check(R"(
u32 v;
u32 out;
void top() {
  assume(v < 10);
  out = v * v;
  assert(out < 100, "bounded");
  assume(v != 3);
  out = out + 1;
}
)",
                19, 300);
  }

  SUBCASE("nondet and uninitialized locals") {
    cross_check(R"(
u32 lim;
u32 out;
void top() {
  u32 seed;
  u32 extra = nondet_u32();
  u32 i = 0;
  while (i < 3) {
    seed = seed + nondet_u32() % 7;
    i = i + 1;
  }
  out = seed + extra + lim;
}
)",
                20, 300);
  }

  SUBCASE("ternaries and short circuit forms") {
    cross_check(R"(
u32 a;
u32 b;
u32 t[3];
u32 out;
void top() {
  out = a > b ? t[a % 4] : t[b % 4];
  bool both = a != 0 && t[a % 3] != 0 || b == 1;
  out = both ? out : ~out;
}
)",
                21, 500);
  }

  SUBCASE("nested calls through globals") {
    cross_check(R"(
u32 g;
u32 h;
u32 bump(u32 by) {
  g = g + by;
  return g;
}
u32 twice(u32 v) { return bump(v) + bump(v); }
void top() {
  h = twice(bump(1)) + g;
}
)",
                22, 300);
  }

  SUBCASE("for loops with declared counters") {
    cross_check(R"(
u8 n;
u32 acc;
void top() {
  for (u32 i = 0; i < 5; i++) {
    if ((u32)n == i) { acc = acc + 100; }
    acc = acc + i;
  }
}
)",
                23, 300);
  }
}

TEST_CASE("an assertion over constants slices down to itself") {
  ExprArena A;
  Ast ast = parse_checked(R"(
u32 a;
u32 x;
void top() {
  x = a * 3;
  x = x + 1;
  assert(1 <= 1, "triv");
}
)");
  GotoProgram p = lower_to_goto(ast, A);
  GotoProgram s = slice(p, {"triv"});
  CHECK(s.instrs.size() == 2);
  CHECK(s.instrs[0].kind == GKind::Assert);
  CHECK(s.instrs[1].kind == GKind::Skip);
}

TEST_CASE("slicing preserves the verdict of each kept assertion") {
  const char *progs[] = {
      kGuardedUpdate,
      R"(
u32 mode;
u32 level;
u32 fb;
u32 probe;
void top() {
  if (mode == 0) {
    fb = level + 1;
  } else {
    probe = probe * level;
  }
  assert(fb != 0 || mode != 0, "fb");
  assert(probe < 1000000, "probe");
}
)",
      R"(
u32 v;
u32 w;
void top() {
  assume(v < 50);
  u32 t = v * 2;
  w = w + t;
  assert(t < 100, "t");
  assert(w != 77, "w");
}
)",
  };

  std::mt19937_64 rng(31);
  for (const char *src : progs) {
    ExprArena A;
    Ast ast = parse_checked(src);
    GotoProgram p = lower_to_goto(ast, A);

    std::vector<std::string> labels;
    for (const auto &in : p.instrs)
      if (in.kind == GKind::Assert) labels.push_back(in.label);

    for (const std::string &lab : labels) {
      GotoProgram s = slice(p, {lab});
      int bad = 0;
      for (int round = 0; round < 200; round++) {
        std::unordered_map<std::string, uint64_t> in;
        for (Expr v : p.inputs) in[v.var_name()] = rng() % 97;
        GotoRun full = run_goto(p, in);
        GotoRun cut = run_goto(s, in);
        bool full_hit =
            std::count(full.violated.begin(), full.violated.end(), lab) > 0;
        bool cut_hit =
            std::count(cut.violated.begin(), cut.violated.end(), lab) > 0;
        if (full.blocked != cut.blocked) bad++;
        else if (!full.blocked && full_hit != cut_hit) bad++;
      }
      CHECK(bad == 0);
    }
  }
}

TEST_CASE("lowered programs validate and print") {
  ExprArena A;
  Ast ast = parse_checked(kGuardedUpdate);
  GotoProgram p = lower_to_goto(ast, A);
  std::string dump = to_string(p);
  CHECK(dump.find("if") != std::string::npos);
  CHECK(dump.find("x :=") != std::string::npos);
}
