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

#include "eqc/symex.h"

#include <algorithm>
#include <chrono>
#include <memory>

#include "eqc/bitblast.h"
#include "eqc/fp_lower.h"
#include "eqc/solver.h"

namespace eqc {

namespace {

uint64_t sat_add(uint64_t a, uint64_t b) {
  uint64_t s = a + b;
  return s < a ? ~uint64_t(0) : s;
}

class Engine {
public:
  Engine(const GotoProgram &p, ExprArena &arena, ExplorationMode mode,
         const ExploreOptions &opts)
      : p_(p), A_(arena), mode_(mode), opts_(opts), lower_(arena) {}

  ExploreResult run();

private:
  enum class StepEnd { Completed, Pruned, Stopped };

  // A checkpoint holds everything needed to resume at the else arm of
  // one feasible branch: the untaken side's condition, the version map
  // and the prefix lengths at the branch point.
  struct Checkpoint {
    unsigned branch_pc = 0;
    unsigned else_target = 0;
    Expr flip;
    std::unordered_map<std::string, Expr> map;
    size_t trail_len = 0;
    size_t ndecisions = 0;
    size_t nsegments = 0;
  };

  void init_versions();
  Expr versioned(const std::string &base, Type t);
  Expr subst(Expr e) { return subst_vars(A_, e, cur_); }
  Expr lower(Expr e) { return lower_.lower(e); }

  void new_instance();
  void retire_instance();
  void preblast_inputs();

  LBool query();
  LBool query_with(Expr extra);
  void add_constraint(Expr e);
  void open_segment();

  StepEnd walk(unsigned pc);
  bool backtrack(unsigned &pc);
  void prune_from(unsigned pc);
  void complete_path();
  void record_violation(const std::string &label);

  bool time_exceeded() const;

  const GotoProgram &p_;
  ExprArena &A_;
  ExplorationMode mode_;
  const ExploreOptions &opts_;
  FpLowerer lower_;

  ExploreResult out_;
  std::vector<uint64_t> paths_from_;
  std::chrono::steady_clock::time_point start_;

  std::unordered_map<std::string, unsigned> next_ver_;
  std::unordered_map<std::string, Expr> cur_;
  std::unordered_map<std::string, Expr> input_v1_;

  std::unique_ptr<Solver> S_;
  std::unique_ptr<BitBlaster> bb_;
  std::vector<int> active_; // blocking literal per open path segment

  std::vector<Expr> trail_;
  size_t base_constraints_ = 0;
  std::vector<std::pair<unsigned, bool>> decisions_;
  std::vector<Checkpoint> stack_;

  std::unordered_set<std::string> violated_seen_;
  bool unknown_ = false;
};

void Engine::init_versions() {
  std::vector<Expr> vars(p_.inputs.begin(), p_.inputs.end());
  for (const GotoInstr &in : p_.instrs) {
    if (in.lhs.valid()) collect_vars(in.lhs, vars);
    if (in.e.valid()) collect_vars(in.e, vars);
  }
  for (Expr v : vars) {
    const std::string &base = v.var_name();
    if (cur_.count(base)) continue;
    next_ver_[base] = 1;
    cur_.emplace(base, A_.var(base + "_1", v.type()));
  }
  for (Expr in : p_.inputs) input_v1_.emplace(in.var_name(), cur_.at(in.var_name()));
}

Expr Engine::versioned(const std::string &base, Type t) {
  // Version counters only ever grow, so names stay distinct across
  // backtracking and recorded path constraints never alias.
  unsigned n = ++next_ver_[base];
  return A_.var(base + "_" + std::to_string(n), t);
}

void Engine::retire_instance() {
  if (!S_) return;
  out_.stats.decisions += S_->stats().decisions;
  out_.stats.conflicts += S_->stats().conflicts;
  bb_.reset();
  S_.reset();
}

void Engine::new_instance() {
  retire_instance();
  S_ = std::make_unique<Solver>();
  if (opts_.conflict_budget >= 0) S_->set_conflict_budget(opts_.conflict_budget);
  bb_ = std::make_unique<BitBlaster>(A_, *S_);
  ++out_.stats.solver_instances;
  for (Expr e : trail_) bb_->assert_true(lower(e));
  preblast_inputs();
}

void Engine::preblast_inputs() {
  for (auto &kv : input_v1_) {
    if (kv.second.type().is_bool())
      bb_->literal(kv.second);
    else
      bb_->bits(kv.second);
  }
}

LBool Engine::query() {
  ++out_.stats.sat_queries;
  return S_->solve(active_);
}

LBool Engine::query_with(Expr extra) {
  std::vector<int> as = active_;
  as.push_back(bb_->literal(lower(extra)));
  ++out_.stats.sat_queries;
  return S_->solve(as);
}

void Engine::add_constraint(Expr e) {
  trail_.push_back(e);
  if (active_.empty())
    bb_->assert_true(lower(e));
  else
    bb_->implied_by(active_.back(), lower(e));
}

void Engine::open_segment() {
  if (mode_ != ExplorationMode::FullIncremental) return;
  active_.push_back(bb_->fresh_lit());
}

bool Engine::time_exceeded() const {
  if (opts_.time_budget_seconds <= 0) return false;
  std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start_;
  return dt.count() > opts_.time_budget_seconds;
}

void Engine::prune_from(unsigned pc) {
  out_.stats.paths_pruned = sat_add(out_.stats.paths_pruned, paths_from_[pc]);
}

void Engine::complete_path() {
  ++out_.stats.paths_explored;
  if (!opts_.record_paths) return;
  std::vector<Expr> cs(trail_.begin() + (long)base_constraints_, trail_.end());
  out_.paths.push_back({decisions_, A_.and_all(cs)});
}

void Engine::record_violation(const std::string &label) {
  if (violated_seen_.insert(label).second) out_.violated_labels.push_back(label);
  out_.status = CheckStatus::Violated;
  if (out_.cex) return;
  Counterexample cex;
  cex.label = label;
  cex.decisions = decisions_;
  for (Expr in : p_.inputs) {
    Expr v1 = input_v1_.at(in.var_name());
    cex.inputs[in.var_name()] = v1.type().is_bool()
                                    ? (bb_->model_bool(*S_, v1) ? 1 : 0)
                                    : bb_->model_bits(*S_, v1);
  }
  out_.cex = std::move(cex);
}

Engine::StepEnd Engine::walk(unsigned pc) {
  const unsigned n = (unsigned)p_.instrs.size();
  while (pc < n) {
    const GotoInstr &in = p_.instrs[pc];
    switch (in.kind) {
    case GKind::Skip:
      ++pc;
      break;
    case GKind::Goto:
      pc = in.target;
      break;
    case GKind::Assign: {
      Expr rhs = subst(in.e);
      const std::string &base = in.lhs.var_name();
      Expr v = versioned(base, in.lhs.type());
      add_constraint(A_.eq(v, rhs));
      cur_[base] = v;
      ++pc;
      break;
    }
    case GKind::Assume: {
      add_constraint(subst(in.e));
      LBool r = query();
      if (r == LBool::Undef) {
        unknown_ = true;
        return StepEnd::Stopped;
      }
      if (r == LBool::False) {
        prune_from(pc + 1);
        return StepEnd::Pruned;
      }
      ++pc;
      break;
    }
    case GKind::Assert: {
      if (opts_.only_label && in.label != *opts_.only_label) {
        ++pc;
        break;
      }
      Expr c = subst(in.e);
      LBool r = query_with(A_.not_(c));
      if (r == LBool::Undef) {
        unknown_ = true;
        return StepEnd::Stopped;
      }
      if (r == LBool::True) {
        record_violation(in.label);
        if (opts_.fail_fast) return StepEnd::Stopped;
      }
      ++pc;
      break;
    }
    case GKind::Branch: {
      if (time_exceeded()) {
        unknown_ = true;
        return StepEnd::Stopped;
      }
      Expr c = subst(in.e);
      LBool r = query_with(c);
      if (r == LBool::Undef) {
        unknown_ = true;
        return StepEnd::Stopped;
      }
      if (r == LBool::True) {
        Checkpoint cp;
        cp.branch_pc = pc;
        cp.else_target = in.else_target;
        cp.flip = A_.not_(c);
        cp.map = cur_;
        cp.trail_len = trail_.size();
        cp.ndecisions = decisions_.size();
        cp.nsegments = active_.size();
        stack_.push_back(std::move(cp));
        open_segment();
        add_constraint(c);
        decisions_.push_back({pc, true});
        pc = in.target;
      } else {
        // the prefix is satisfiable, so the negated side needs no query
        prune_from(in.target);
        add_constraint(A_.not_(c));
        decisions_.push_back({pc, false});
        pc = in.else_target;
      }
      break;
    }
    }
  }
  complete_path();
  return StepEnd::Completed;
}

bool Engine::backtrack(unsigned &pc) {
  while (!stack_.empty()) {
    Checkpoint cp = std::move(stack_.back());
    stack_.pop_back();
    trail_.resize(cp.trail_len);
    decisions_.resize(cp.ndecisions);
    cur_ = std::move(cp.map);
    if (time_exceeded()) {
      unknown_ = true;
      return false;
    }
    if (mode_ == ExplorationMode::PartialIncremental) {
      new_instance();
      ++out_.stats.sat_queries;
      LBool r = S_->solve({bb_->literal(lower(cp.flip))});
      if (r == LBool::Undef) {
        unknown_ = true;
        return false;
      }
      if (r == LBool::False) {
        prune_from(cp.else_target);
        continue;
      }
      add_constraint(cp.flip);
    } else {
      while (active_.size() > cp.nsegments) {
        S_->add_clause({-active_.back()});
        active_.pop_back();
      }
      int flip_lit = bb_->fresh_lit();
      bb_->implied_by(flip_lit, lower(cp.flip));
      std::vector<int> as = active_;
      as.push_back(flip_lit);
      ++out_.stats.sat_queries;
      LBool r = S_->solve(as);
      if (r == LBool::Undef) {
        unknown_ = true;
        return false;
      }
      if (r == LBool::False) {
        S_->add_clause({-flip_lit});
        prune_from(cp.else_target);
        continue;
      }
      active_.push_back(flip_lit);
      trail_.push_back(cp.flip);
    }
    decisions_.push_back({cp.branch_pc, false});
    pc = cp.else_target;
    return true;
  }
  return false;
}

ExploreResult Engine::run() {
  validate(p_);
  start_ = std::chrono::steady_clock::now();
  paths_from_ = syntactic_path_counts(p_);
  init_versions();
  new_instance();

  for (Expr a : opts_.assumptions) add_constraint(subst(a));
  base_constraints_ = trail_.size();
  if (!opts_.assumptions.empty()) {
    LBool r = query();
    if (r == LBool::Undef) unknown_ = true;
    if (r == LBool::False) prune_from(0);
    if (r != LBool::True) {
      retire_instance();
      if (unknown_) out_.status = CheckStatus::Unknown;
      return std::move(out_);
    }
  }

  unsigned pc = 0;
  for (;;) {
    StepEnd end = walk(pc);
    if (end == StepEnd::Stopped) break;
    if (end == StepEnd::Completed && opts_.max_paths > 0 &&
        out_.stats.paths_explored >= opts_.max_paths && !stack_.empty()) {
      unknown_ = true;
      break;
    }
    if (!backtrack(pc)) break;
  }

  retire_instance();
  if (out_.status != CheckStatus::Violated)
    out_.status = unknown_ ? CheckStatus::Unknown : CheckStatus::Holds;
  return std::move(out_);
}

} // namespace

std::vector<uint64_t> syntactic_path_counts(const GotoProgram &p) {
  size_t n = p.instrs.size();
  std::vector<uint64_t> cnt(n + 1, 0);
  cnt[n] = 1;
  for (size_t i = n; i-- > 0;) {
    const GotoInstr &in = p.instrs[i];
    switch (in.kind) {
    case GKind::Branch:
      cnt[i] = sat_add(cnt[in.target], cnt[in.else_target]);
      break;
    case GKind::Goto:
      cnt[i] = cnt[in.target];
      break;
    default:
      cnt[i] = cnt[i + 1];
      break;
    }
  }
  return cnt;
}

ExploreResult explore(const GotoProgram &p, ExprArena &arena,
                      ExplorationMode mode, const ExploreOptions &opts) {
  Engine eng(p, arena, mode, opts);
  return eng.run();
}

} // namespace eqc
