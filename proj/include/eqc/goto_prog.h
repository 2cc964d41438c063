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

#ifndef EQC_GOTO_PROG_H
#define EQC_GOTO_PROG_H

#include "eqc/expr.h"

#include <string>
#include <unordered_map>
#include <vector>

namespace eqc {

struct SrcLoc {
  int line = 0;
  int col = 0;
};

enum class GKind : uint8_t { Assign, Assume, Assert, Branch, Goto, Skip };

// One instruction of a loop-free goto program. Branch takes `target`
// when the condition holds and `else_target` otherwise; both targets
// of any control instruction point strictly forward.
struct GotoInstr {
  GKind kind = GKind::Skip;
  Expr lhs;                 // Assign destination, a Var
  Expr e;                   // Assign rhs; condition for Assume/Assert/Branch
  unsigned target = 0;      // Branch then-target, Goto target
  unsigned else_target = 0; // Branch only
  std::string label;        // Assert only, stable and unique
  SrcLoc loc;
};

struct GotoProgram {
  std::vector<GotoInstr> instrs;
  std::vector<Expr> inputs; // free Vars: unset globals and nondet values
  std::unordered_map<std::string, FloatFormat> float_vars;
  std::vector<std::string> global_names;
  std::string entry;
  std::string source_file;

  bool has_label(const std::string &label) const;
};

// Throws std::logic_error when an instruction is malformed, a target
// is out of range or not strictly forward, or an assert label repeats.
void validate(const GotoProgram &p);

std::string to_string(const GotoProgram &p);

struct GotoRun {
  std::unordered_map<std::string, uint64_t> values; // final value per var
  std::vector<std::string> violated;               // failed assert labels
  std::vector<std::pair<unsigned, bool>> branches; // (pc, taken)
  bool blocked = false;                            // stopped by assume
};

// Concrete execution. `inputs` must bind every var in p.inputs by name;
// a failed assume stops the run, a failed assert is recorded and the
// run continues.
GotoRun run_goto(const GotoProgram &p,
                 const std::unordered_map<std::string, uint64_t> &inputs);

// Backward dependency slice keeping exactly the instructions the named
// asserts depend on. Other asserts are dropped; assumes and the
// control structure reaching kept instructions are preserved, so every
// named assert keeps its verdict. Throws std::invalid_argument on an
// unknown label.
GotoProgram slice(const GotoProgram &p,
                  const std::vector<std::string> &labels);

} // namespace eqc

#endif
