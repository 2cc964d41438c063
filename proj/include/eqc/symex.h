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

#ifndef EQC_SYMEX_H
#define EQC_SYMEX_H

#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "eqc/goto_prog.h"
#include "eqc/ssa.h"

namespace eqc {

// Partial-incremental: one solver per descent, rebuilt from the prefix
// on backtrack. Full-incremental: a single solver for the whole run,
// path segments guarded by blocking literals and retracted with units.
enum class ExplorationMode { PartialIncremental, FullIncremental };

struct EngineStats {
  uint64_t paths_explored = 0;
  uint64_t paths_pruned = 0;
  uint64_t solver_instances = 0;
  uint64_t sat_queries = 0;
  uint64_t decisions = 0;
  uint64_t conflicts = 0;
};

struct PathRecord {
  std::vector<std::pair<unsigned, bool>> decisions; // (branch pc, taken)
  Expr constraint; // conjunction over versioned variables
};

struct Counterexample {
  std::string label;
  std::unordered_map<std::string, uint64_t> inputs; // by input name
  std::vector<std::pair<unsigned, bool>> decisions;
};

struct ExploreOptions {
  // assumptions over the program's input variables
  std::vector<Expr> assumptions;
  // check only this label when set
  std::optional<std::string> only_label;
  // stop at the first violated assertion
  bool fail_fast = true;
  // record the constraint of every feasible path
  bool record_paths = false;
  uint64_t max_paths = 0;         // 0 = unlimited
  int64_t conflict_budget = -1;   // per query, -1 = unlimited
  double time_budget_seconds = 0; // 0 = unlimited
};

struct ExploreResult {
  CheckStatus status = CheckStatus::Holds;
  std::optional<Counterexample> cex;
  std::vector<std::string> violated_labels;
  EngineStats stats;
  std::vector<PathRecord> paths;
};

// Depth-first path exploration with a feasibility query at every branch
// (eager pruning); then-arm first, else-arm on backtrack. paths_pruned
// counts syntactic paths eliminated, not prune events.
ExploreResult explore(const GotoProgram &p, ExprArena &arena,
                      ExplorationMode mode, const ExploreOptions &opts = {});

// Syntactic completion counts per instruction; index size() is the end.
std::vector<uint64_t> syntactic_path_counts(const GotoProgram &p);

} // namespace eqc

#endif
