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

#ifndef EQC_SSA_H
#define EQC_SSA_H

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "eqc/goto_prog.h"

namespace eqc {

// One defining equality: var is a versioned variable (x_3, guard_1)
// assigned exactly once.
struct SsaDef {
  Expr var;
  Expr rhs;
};

struct SsaAssume {
  Expr guard;
  Expr cond;
};

struct SsaAssert {
  std::string label;
  Expr guard;
  Expr cond;
  SrcLoc loc;
};

// Single-assignment form of an acyclic GotoProgram. Definitions are
// topologically ordered; merges are ite equations over branch guards.
struct SsaProgram {
  std::vector<SsaDef> defs;
  std::vector<SsaAssume> assumes;
  std::vector<SsaAssert> asserts;
  // base name -> version-1 variable (the free initial value)
  std::vector<std::pair<std::string, Expr>> initial;
  // base name -> final version reaching the end of the program
  std::unordered_map<std::string, Expr> finals;
};

// Replaces variables by name; other nodes are rebuilt as needed.
Expr subst_vars(ExprArena &arena, Expr e,
                const std::unordered_map<std::string, Expr> &map);

SsaProgram to_ssa(const GotoProgram &p, ExprArena &arena);

// One equation per line in the style `x_6 = ite(guard_2, x_4, x_5)`.
std::string dump(const SsaProgram &ssa);

// Evaluates the equalities in order; inputs bind version-1 variables by
// their base name, unbound initials read as zero. Returns the final
// value of every base variable.
std::unordered_map<std::string, uint64_t>
interp_concrete(const SsaProgram &ssa,
                const std::unordered_map<std::string, uint64_t> &inputs);

struct MonolithicFormula {
  Expr constraints; // equalities and guarded assumptions, conjoined
  std::vector<SsaAssert> asserts;
  Expr violation; // OR over asserts of guard AND NOT cond
};

MonolithicFormula encode_monolithic(const SsaProgram &ssa, ExprArena &arena);

enum class CheckStatus { Holds, Violated, Unknown };

struct AssertResult {
  std::string label;
  CheckStatus status = CheckStatus::Unknown;
  // counterexample valuation keyed by GotoProgram input names; set only
  // when status is Violated
  std::unordered_map<std::string, uint64_t> cex;
};

struct BmcOptions {
  // assumptions over the program's input variables
  std::vector<Expr> assumptions;
  // check only this label when set
  std::optional<std::string> only_label;
  int64_t conflict_budget = -1;
};

// Monolithic bounded model check: one incremental solver, one
// assumption-driven query per assertion.
std::vector<AssertResult> bmc_check(const GotoProgram &p, ExprArena &arena,
                                    const BmcOptions &opts = {});

} // namespace eqc

#endif
