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

#ifndef EQC_RTL_H
#define EQC_RTL_H

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "eqc/expr.h"
#include "eqc/ssa.h"

namespace eqc::rtl {

struct RtlError : std::runtime_error {
  RtlError(const std::string &file, unsigned line, const std::string &msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg),
        line(line) {}
  unsigned line;
};

struct Port {
  std::string name;
  unsigned width = 1;
  bool is_input = false;
};

// Statement inside an always block. Expressions are eqc Exprs over
// ubits variables named after the signals they read.
struct RtlStmt {
  enum class Kind { If, NonBlocking } kind = Kind::NonBlocking;
  Expr cond; // If
  std::vector<RtlStmt> then_body;
  std::vector<RtlStmt> else_body;
  std::string lhs; // NonBlocking
  Expr rhs;
  unsigned line = 0;
};

struct RtlAlways {
  std::vector<RtlStmt> body;
  unsigned line = 0;
};

struct RtlAssign {
  std::string lhs;
  Expr rhs;
  unsigned line = 0;
};

// Flat single-clock module: ports in header order, one width per
// signal, wires driven by exactly one continuous assign, registers by
// exactly one always block.
struct RtlModule {
  std::string name;
  std::string file;
  std::vector<Port> ports;
  std::unordered_map<std::string, unsigned> widths;
  std::vector<std::string> regs;  // declaration order
  std::vector<std::string> wires; // non-register internal/output signals
  std::vector<RtlAssign> assigns;
  std::vector<RtlAlways> always;
  std::string clock; // parsed, semantically ignored

  bool is_reg(const std::string &s) const;
  unsigned width_of(const std::string &s) const;
};

// Parses RTL-lite source. Throws RtlError on syntax errors, multiply
// driven signals, undeclared references and width mismatches.
RtlModule parse_rtl(const std::string &text, const std::string &file,
                    ExprArena &arena);

// Synchronous transition system. Next-state and wire expressions are
// closed over register and input variables only; wires are inlined.
struct TransitionSystem {
  std::string name;
  std::vector<Port> inputs; // non-clock input ports
  std::vector<std::pair<std::string, unsigned>> state;
  std::unordered_map<std::string, Expr> next;
  std::vector<std::pair<std::string, unsigned>> wires; // topological order
  std::unordered_map<std::string, Expr> wire_def;
  std::vector<Port> ports;

  bool has_signal(const std::string &s) const;
  unsigned width_of(const std::string &s) const;
};

// Folds every always block into one next-state expression per
// register; branches that do not assign a register hold its current
// value. Throws RtlError on a combinational cycle among wires.
TransitionSystem elaborate(const RtlModule &m, ExprArena &arena);

// Timeframe-indexed unrolling. Frame-k instances of signal `s` are
// variables named "s@k". Registers at frame 0 and inputs at every
// frame are free; defs bind r@(k+1) for k < bound and w@k for k <=
// bound. The defs compose with a software SsaProgram into one
// monolithic formula.
struct UnrolledRtl {
  unsigned bound = 0;
  std::vector<SsaDef> defs;
  std::vector<Expr> free_vars; // r@0, i@k in frame order
};

UnrolledRtl unroll(const TransitionSystem &ts, unsigned bound,
                   ExprArena &arena);

// Frame-indexed variable for signal `name` at frame k.
Expr frame_var(const TransitionSystem &ts, const std::string &name,
               unsigned k, ExprArena &arena);

// Cycle-accurate reference interpreter. inputs[k] must bind every
// input port for frame k; initial must bind every register. Returns
// one map per frame holding registers, inputs and wires. Throws
// std::invalid_argument on a missing binding.
std::vector<std::unordered_map<std::string, uint64_t>>
simulate(const TransitionSystem &ts,
         const std::vector<std::unordered_map<std::string, uint64_t>> &inputs,
         const std::unordered_map<std::string, uint64_t> &initial);

// Emits a mini-C global declaration block mirroring ports and
// registers, one `<type> <module>_<signal>;` line each.
std::string gen_interface(const RtlModule &m);

} // namespace eqc::rtl

#endif
