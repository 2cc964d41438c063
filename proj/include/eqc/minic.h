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

#ifndef EQC_MINIC_H
#define EQC_MINIC_H

#include "eqc/goto_prog.h"

#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace eqc::minic {

// Message already formatted as file:line:col: severity: text.
struct CompileError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EK : uint8_t {
  IntLit,
  BoolLit,
  Ident,
  Index,
  Unary,
  Binary,
  Ternary,
  Call,
  Cast,
};

enum class Builtin : uint8_t {
  None,
  Nondet,   // nondet_<type>()
  FpAdd,
  FpSub,
  FpMul,
  FpDiv,
  FpMin,
  FpMax,
  FpRound,
  FpIsNan,
  FpIsInf,
  FpIsZero,
  FpIsSubnormal,
  FpIsNormal,
  FpEq,
  FpLt,
  FpLe,
  FpClassify, // -> u8 class code
  FpBits,     // float -> unsigned bits
  FpOfBits,   // f32_of_bits / f64_of_bits / f8_of_bits
};

struct AstExpr {
  EK k = EK::IntLit;
  SrcLoc loc;
  uint64_t ival = 0;  // IntLit value, BoolLit 0/1
  std::string name;   // Ident, Index base, Call callee
  std::string op;     // Unary/Binary operator spelling
  Type cast_to;       // Cast target
  std::vector<std::unique_ptr<AstExpr>> kids;

  // filled by typecheck
  Type type;
  bool typed = false;
  Builtin builtin = Builtin::None;
  RoundingMode rm = RoundingMode::RNE; // rounded builtins
  int site = -1;            // nondet / call / index site id
  int ref_site = -1;        // Ident/Index: declaration site, -1 = global
  int ref_array_size = 0;   // Index: declared size of the base
};

enum class SK : uint8_t {
  Decl,
  Assign,
  If,
  While,
  For,
  Return,
  CallStmt,
  Assume,
  Assert,
  Block,
};

struct AstStmt {
  SK k = SK::Block;
  SrcLoc loc;
  Type decl_type;       // Decl
  std::string name;     // Decl name
  int array_size = 0;   // Decl: 0 = scalar
  bool has_e = false;   // Decl has init, Return has a value
  std::unique_ptr<AstExpr> lhs; // Assign target (Ident or Index)
  std::unique_ptr<AstExpr> e;   // init / rhs / cond / value / call / pred
  std::string label;            // Assert user label
  std::vector<std::unique_ptr<AstStmt>> body, els;
  std::unique_ptr<AstStmt> init_stmt, step_stmt; // For

  // filled by typecheck
  int site = -1;        // Decl / Assert site id
  int loop_ord = -1;    // While/For ordinal within its function
  std::string loop_id;  // "<function>.<ordinal>"
};

struct Param {
  std::string name;
  Type type;
  SrcLoc loc;
  int site = -1; // declaration site, filled by typecheck
};

struct AstFunc {
  std::string name;
  bool is_void = true;
  Type ret;
  std::vector<Param> params;
  std::vector<std::unique_ptr<AstStmt>> body;
  SrcLoc loc;
};

struct AstGlobal {
  std::string name;
  Type type;
  int array_size = 0;
  std::unique_ptr<AstExpr> init; // constant literal or absent
  SrcLoc loc;
};

struct Ast {
  std::string file;
  std::vector<AstGlobal> globals;
  std::vector<AstFunc> funcs;
};

// Parses mini-C source; object-like #define constants are expanded
// during lexing. Throws CompileError on the first syntax error.
Ast parse(const std::string &text, const std::string &file);

// Annotates every expression with a Type, inserts implicit widening
// casts, resolves identifier references and builtin calls, and assigns
// stable site ids. Throws CompileError.
void typecheck(Ast &ast);

// Canonical source form; parse(pretty_print(ast)) is structurally
// identical to ast for untypechecked trees.
std::string pretty_print(const Ast &ast);

// Structural comparison that ignores locations and typecheck results.
bool ast_equal(const Ast &a, const Ast &b);

struct UnwindPolicy {
  unsigned bound = 16;
  std::unordered_map<std::string, unsigned> per_loop; // loop id -> bound
  bool unwinding_assert = true;
};

// Inlines calls, unwinds loops and flattens control flow into a
// forward-only GotoProgram. The ast must be typechecked. Throws
// CompileError on recursion or a zero bound without unwinding asserts.
GotoProgram lower_to_goto(const Ast &ast, ExprArena &arena,
                          const UnwindPolicy &policy = {},
                          const std::string &entry = "top");

struct AstRun {
  std::unordered_map<std::string, uint64_t> globals; // final bit patterns
  std::vector<std::string> violated;                 // failed assert labels
  bool blocked = false; // assume failed or unwind bound exceeded
};

// Reference interpreter over the typechecked tree. Free values are
// requested through `nondet`, keyed by the same stable names the
// lowering gives its input variables, so a single binding map can
// drive both sides.
AstRun interp_ast(
    const Ast &ast, const UnwindPolicy &policy,
    const std::unordered_map<std::string, uint64_t> &global_in,
    const std::function<uint64_t(const std::string &, Type)> &nondet,
    const std::string &entry = "top");

// Source spelling of a mini-C type (u32, s8, bool, f32, ...).
std::string type_name(Type t);
bool parse_type_name(const std::string &s, Type &out);

} // namespace eqc::minic

#endif
