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

// Miter construction and partitioned equivalence runs.
//
// A miter spec names a reference (builtin softfloat op or a mini-C
// function) and an implementation (mini-C function or RTL module),
// declares the shared inputs, and picks engine, rounding treatment
// and input partitions.  Software miters compose into one mini-C
// program whose single assertion compares the two results; hardware
// miters pin RTL frame inputs to software outputs and assert probe
// equalities over the unrolled transition system.

#ifndef EQC_HARNESS_H
#define EQC_HARNESS_H

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqc/expr.h"
#include "eqc/goto_prog.h"
#include "eqc/minic.h"
#include "eqc/rtl.h"
#include "eqc/ssa.h"
#include "eqc/symex.h"
#include "eqc/vcd.h"

namespace eqc::harness {

struct HarnessError : std::runtime_error {
  HarnessError(const std::string &file, unsigned line, const std::string &msg)
      : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg) {}
  explicit HarnessError(const std::string &msg) : std::runtime_error(msg) {}
};

// One timeframe-script event for a hardware miter.
struct ScriptEvent {
  enum class Kind : uint8_t { Set, Advance, Probe };
  Kind kind = Kind::Advance;
  std::string signal;      // Set: input port.  Probe: any RTL signal.
  bool is_const = false;   // Set from a literal instead of a global
  uint64_t value = 0;
  std::string global;      // software-side global (Set source / Probe expect)
  std::string label;       // Probe assertion label
  unsigned line = 0;
};

enum class EngineSel : uint8_t { Path, Monolithic };

// Parsed .miter file plus the loaded side sources.
struct MiterSpec {
  std::string name;
  std::string file;

  bool ref_is_builtin = false;
  std::string ref_op;            // fp_add .. fp_round
  std::string ref_file, ref_fn;  // mini-C reference
  std::string ref_source;

  bool impl_is_rtl = false;
  std::string impl_file, impl_fn;  // mini-C implementation
  std::string impl_module;         // RTL implementation
  std::string impl_source;

  std::vector<std::pair<std::string, Type>> inputs;
  FloatFormat fmt = FloatFormat::binary32();
  bool has_float_input = false;

  std::string rmode;  // "", "all", "RNE", "RU", "RD", "RZ"
  std::vector<std::string> partitions;  // without the implicit Total
  EngineSel engine = EngineSel::Path;
  ExplorationMode mode = ExplorationMode::FullIncremental;
  unsigned unwind = 16;
  unsigned bound = 0;
  std::vector<ScriptEvent> script;
};

// Parses the spec text alone; side sources stay empty.
MiterSpec parse_miter_spec(const std::string &text, const std::string &file);

// Parses the spec file and reads the referenced sources relative to
// its directory.
MiterSpec load_miter_spec(const std::string &path);

// The synthesized software miter.  `source` is the combined mini-C
// text, entry function miter_main; `operands` are the float inputs
// the partitions constrain.
struct SwMiter {
  GotoProgram prog;
  std::string source;
  std::vector<std::string> operands;
  FloatFormat fmt = FloatFormat::binary32();
};

SwMiter build_sw_miter(const MiterSpec &spec, ExprArena &arena);

// Partition predicate over the named operands: every operand lies in
// the class (Total places no constraint).  Operand variables follow
// the mini-C lowering of float globals (ubits carrying the encoding).
Expr partition_assumption(const std::vector<std::string> &operands,
                          FloatFormat fmt, const std::string &partition,
                          ExprArena &arena);

// Known partition column order: INF, ZERO, NaN, SUBNORMAL, NORMAL.
const std::vector<std::string> &all_partitions();

// The composed hardware miter: software SSA, unrolled RTL, input
// pins and probe assertions in one monolithic formula.
struct HwMiter {
  rtl::TransitionSystem ts;
  unsigned bound = 0;
  GotoProgram sw;
  SsaProgram ssa;
  MonolithicFormula formula;
  std::vector<ScriptEvent> script;
  std::vector<std::string> operands;
  FloatFormat fmt = FloatFormat::binary32();
};

HwMiter build_hw_miter(const MiterSpec &spec, ExprArena &arena);

// Default timeframe script by naming convention: at every frame k,
// each input port p is driven from software global p_f<k>, and each
// output port o with a matching global o_f<k> is probed.
std::vector<ScriptEvent> default_script(const rtl::TransitionSystem &ts,
                                        const GotoProgram &sw, unsigned bound);

// Per-signal waveform of a hardware counterexample, frames 0..bound.
struct HwTrace {
  std::vector<VcdVar> signals;
  unsigned bound = 0;
};

struct HwCheckResult {
  std::vector<AssertResult> asserts;
  std::optional<HwTrace> trace;  // filled for the first violation
  EngineStats stats;
};

// Checks every probe assertion of the miter under the extra
// assumptions.  A violation trace is replayed through simulate() and
// the run aborts on divergence.
HwCheckResult check_hw_miter(const HwMiter &m, ExprArena &arena,
                             const BmcOptions &opts = {});

struct Verdict {
  CheckStatus status = CheckStatus::Unknown;
  uint64_t paths = 0;
  double time_ms = 0;
  EngineStats stats;
  std::optional<Counterexample> cex;
  std::optional<HwTrace> trace;
};

struct VerdictTable {
  std::string design;
  std::vector<std::string> columns;
  std::vector<Verdict> cells;
};

struct RunOptions {
  std::optional<EngineSel> engine;
  std::optional<ExplorationMode> mode;
  // "": partitions from the spec.  "all": the five classes plus
  // Total.  Otherwise a single named partition.
  std::string partition;
  int64_t conflict_budget = -1;
  unsigned time_budget_seconds = 0;
};

// Runs the miter once per partition column.  Software
// counterexamples are replayed through the concrete interpreter
// before being reported.
VerdictTable run_partitions(const MiterSpec &spec, ExprArena &arena,
                            const RunOptions &opts = {});

std::string render_table(const VerdictTable &t);
// One line per cell: design,partition,status,paths,time_ms.
std::string machine_rows(const VerdictTable &t);

// Single-frame waveform of a software counterexample input valuation.
std::vector<VcdVar> cex_frame(const SwMiter &m, const Counterexample &cex);

}  // namespace eqc::harness

#endif  // EQC_HARNESS_H
