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

#ifndef EQC_SOLVER_H
#define EQC_SOLVER_H

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

namespace eqc {

enum class LBool : uint8_t { False = 0, True = 1, Undef = 2 };

// Consumer of CNF in DIMACS conventions: variables are positive ints
// starting at 1, a negative int is the negated variable, 0 is invalid.
struct CnfSink {
  virtual ~CnfSink() = default;
  virtual int new_var() = 0;
  virtual void add_clause(const int *lits, size_t n) = 0;

  void add_clause(std::initializer_list<int> ls) {
    add_clause(ls.begin(), ls.size());
  }
  void add_clause(const std::vector<int> &ls) {
    add_clause(ls.data(), ls.size());
  }
};

struct SolverStats {
  uint64_t decisions = 0;
  uint64_t propagations = 0;
  uint64_t conflicts = 0;
  uint64_t restarts = 0;
  uint64_t learnt = 0;
};

// Incremental CDCL solver: two-watched-literal propagation, first-UIP
// learning with recursive clause minimization, VSIDS decisions, phase
// saving, Luby restarts and activity-based learnt clause deletion.
// Clauses persist across solve calls; per-call assumptions make solving
// under retractable hypotheses cheap.
class Solver final : public CnfSink {
public:
  Solver();
  ~Solver() override;

  using CnfSink::add_clause;
  int new_var() override;
  void add_clause(const int *lits, size_t n) override;

  int num_vars() const { return (int)assigns_.size(); }

  // False once the clause set is unsatisfiable outright
  bool okay() const { return ok_; }

  LBool solve(const std::vector<int> &assumptions);
  LBool solve() { return solve({}); }

  // value of a literal in the most recent model
  LBool model_value(int lit) const;

  // after an UNSAT answer: a subset of the assumptions that is already
  // inconsistent with the clause set
  const std::vector<int> &conflict_core() const { return core_; }

  // conflict limit per solve call; < 0 disables the limit. When the
  // budget runs out solve returns Undef.
  void set_conflict_budget(int64_t budget) { budget_ = budget; }

  const SolverStats &stats() const { return stats_; }

private:
  using CRef = uint32_t;
  static constexpr CRef kNoClause = UINT32_MAX;

  struct Watcher {
    CRef cref;
    int blocker; // internal literal
  };

  struct VarData {
    CRef reason = kNoClause;
    int level = 0;
  };

  // internal literal encoding: 2*var + sign, sign 1 = negated
  static int neg(int p) { return p ^ 1; }
  static int var_of(int p) { return p >> 1; }
  static bool sign_of(int p) { return p & 1; }
  static int mk_lit(int v, bool sgn) { return v * 2 + (sgn ? 1 : 0); }
  static int import(int ext) {
    return mk_lit((ext < 0 ? -ext : ext) - 1, ext < 0);
  }
  static int export_(int p) {
    return sign_of(p) ? -(var_of(p) + 1) : var_of(p) + 1;
  }

  uint32_t *clause_base(CRef c) { return &mem_[c]; }
  const uint32_t *clause_base(CRef c) const { return &mem_[c]; }
  uint32_t clause_size(CRef c) const { return mem_[c] >> 3; }
  bool clause_learnt(CRef c) const { return mem_[c] & 1; }
  int *clause_lits(CRef c) { return (int *)&mem_[c + 2]; }
  const int *clause_lits(CRef c) const { return (const int *)&mem_[c + 2]; }
  float &clause_act(CRef c) { return *(float *)&mem_[c + 1]; }

  LBool value(int p) const;
  LBool var_value(int v) const;
  int decision_level() const { return (int)trail_lim_.size(); }

  CRef alloc_clause(const std::vector<int> &lits, bool learnt);
  void free_clause(CRef c);
  void attach_clause(CRef c);
  void detach_clause(CRef c);
  void remove_clause(CRef c);
  bool clause_satisfied(CRef c) const;
  bool locked(CRef c) const;
  void garbage_collect_if_needed();
  CRef reloc(CRef c, std::vector<uint32_t> &to);

  void new_decision_level() { trail_lim_.push_back((int)trail_.size()); }
  void unchecked_enqueue(int p, CRef from);
  CRef propagate();
  void cancel_until(int level);
  void analyze(CRef confl, std::vector<int> &out_learnt, int &out_btlevel);
  bool lit_redundant(int p, uint32_t abstract_levels);
  void analyze_final(int p, std::vector<int> &out_core);
  int pick_branch_lit();
  LBool search(int max_conflicts);
  bool simplify();
  void reduce_db();
  void remove_satisfied(std::vector<CRef> &cs);

  void var_bump(int v);
  void var_decay() { var_inc_ *= (1.0 / 0.95); }
  void cla_bump(CRef c);
  void cla_decay() { cla_inc_ *= (1.0 / 0.999); }

  // activity-ordered heap of candidate decision variables
  void heap_insert(int v);
  void heap_update(int v);
  int heap_pop();
  bool heap_empty() const { return heap_.empty(); }
  void heap_up(int i);
  void heap_down(int i);
  bool heap_lt(int u, int v) const { return activity_[u] > activity_[v]; }

  bool ok_ = true;
  std::vector<uint32_t> mem_;
  uint64_t wasted_ = 0;
  std::vector<CRef> clauses_;
  std::vector<CRef> learnts_;
  std::vector<std::vector<Watcher>> watches_; // indexed by internal literal
  std::vector<uint8_t> assigns_;              // LBool per var
  std::vector<VarData> vardata_;
  std::vector<char> polarity_;
  std::vector<double> activity_;
  std::vector<int> heap_;
  std::vector<int> heap_pos_;
  std::vector<int> trail_;
  std::vector<int> trail_lim_;
  int qhead_ = 0;

  std::vector<int> assumptions_; // internal lits
  std::vector<int> core_;        // external lits
  std::vector<uint8_t> model_;
  std::vector<char> seen_;
  std::vector<int> analyze_stack_;
  std::vector<int> analyze_toclear_;
  std::vector<int> add_tmp_;

  double var_inc_ = 1.0;
  double cla_inc_ = 1.0;
  double max_learnts_ = 0;
  double learnt_adjust_confl_ = 100;
  int learnt_adjust_cnt_ = 100;
  int64_t budget_ = -1;
  int64_t conflicts_left_ = -1;
  int simp_trail_size_ = 0;

  SolverStats stats_;
};

} // namespace eqc

#endif
