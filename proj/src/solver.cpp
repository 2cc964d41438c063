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

#include "eqc/solver.h"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace eqc {

Solver::Solver() = default;
Solver::~Solver() = default;

LBool Solver::var_value(int v) const { return (LBool)assigns_[v]; }

LBool Solver::value(int p) const {
  LBool b = (LBool)assigns_[var_of(p)];
  if (b == LBool::Undef) return LBool::Undef;
  return ((b == LBool::True) != sign_of(p)) ? LBool::True : LBool::False;
}

int Solver::new_var() {
  int v = (int)assigns_.size();
  assigns_.push_back((uint8_t)LBool::Undef);
  vardata_.push_back(VarData{});
  polarity_.push_back(1);
  activity_.push_back(0.0);
  heap_pos_.push_back(-1);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v + 1;
}

// -------- clause storage --------

Solver::CRef Solver::alloc_clause(const std::vector<int> &lits, bool learnt) {
  CRef c = (CRef)mem_.size();
  mem_.push_back(((uint32_t)lits.size() << 3) | (learnt ? 1u : 0u));
  mem_.push_back(0); // activity
  for (int l : lits) mem_.push_back((uint32_t)l);
  return c;
}

void Solver::free_clause(CRef c) { wasted_ += 2 + clause_size(c); }

void Solver::attach_clause(CRef c) {
  const int *ls = clause_lits(c);
  assert(clause_size(c) >= 2);
  watches_[neg(ls[0])].push_back(Watcher{c, ls[1]});
  watches_[neg(ls[1])].push_back(Watcher{c, ls[0]});
}

void Solver::detach_clause(CRef c) {
  const int *ls = clause_lits(c);
  for (int k = 0; k < 2; k++) {
    auto &ws = watches_[neg(ls[k])];
    for (size_t i = 0; i < ws.size(); i++)
      if (ws[i].cref == c) {
        ws[i] = ws.back();
        ws.pop_back();
        break;
      }
  }
}

bool Solver::locked(CRef c) const {
  int p = clause_lits(c)[0];
  return value(p) == LBool::True && vardata_[var_of(p)].reason == c;
}

void Solver::remove_clause(CRef c) {
  detach_clause(c);
  if (locked(c)) vardata_[var_of(clause_lits(c)[0])].reason = kNoClause;
  free_clause(c);
}

bool Solver::clause_satisfied(CRef c) const {
  const int *ls = clause_lits(c);
  for (uint32_t i = 0; i < clause_size(c); i++)
    if (value(ls[i]) == LBool::True) return true;
  return false;
}

Solver::CRef Solver::reloc(CRef c, std::vector<uint32_t> &to) {
  if (mem_[c] & 2) return mem_[c + 1];
  uint32_t words = 2 + clause_size(c);
  CRef nc = (CRef)to.size();
  for (uint32_t i = 0; i < words; i++) to.push_back(mem_[c + i]);
  mem_[c] |= 2;
  mem_[c + 1] = nc;
  return nc;
}

void Solver::garbage_collect_if_needed() {
  if (wasted_ * 5 <= mem_.size()) return;
  std::vector<uint32_t> to;
  to.reserve(mem_.size() - wasted_);
  for (auto &ws : watches_)
    for (auto &w : ws) w.cref = reloc(w.cref, to);
  for (int l : trail_) {
    int v = var_of(l);
    if (vardata_[v].reason != kNoClause)
      vardata_[v].reason = reloc(vardata_[v].reason, to);
  }
  for (auto &c : learnts_) c = reloc(c, to);
  for (auto &c : clauses_) c = reloc(c, to);
  mem_ = std::move(to);
  wasted_ = 0;
}

// -------- activity --------

void Solver::var_bump(int v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto &a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
}

void Solver::cla_bump(CRef c) {
  float &a = clause_act(c);
  a += (float)cla_inc_;
  if (a > 1e20f) {
    for (CRef lc : learnts_) clause_act(lc) *= 1e-20f;
    cla_inc_ *= 1e-20;
  }
}

// -------- decision heap --------

void Solver::heap_up(int i) {
  int v = heap_[i];
  while (i > 0) {
    int pi = (i - 1) >> 1;
    if (!heap_lt(v, heap_[pi])) break;
    heap_[i] = heap_[pi];
    heap_pos_[heap_[i]] = i;
    i = pi;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void Solver::heap_down(int i) {
  int v = heap_[i];
  int n = (int)heap_.size();
  while (true) {
    int c = 2 * i + 1;
    if (c >= n) break;
    if (c + 1 < n && heap_lt(heap_[c + 1], heap_[c])) c++;
    if (!heap_lt(heap_[c], v)) break;
    heap_[i] = heap_[c];
    heap_pos_[heap_[i]] = i;
    i = c;
  }
  heap_[i] = v;
  heap_pos_[v] = i;
}

void Solver::heap_insert(int v) {
  if (heap_pos_[v] >= 0) return;
  heap_.push_back(v);
  heap_pos_[v] = (int)heap_.size() - 1;
  heap_up(heap_pos_[v]);
}

void Solver::heap_update(int v) {
  if (heap_pos_[v] >= 0) heap_up(heap_pos_[v]);
}

int Solver::heap_pop() {
  int v = heap_[0];
  heap_pos_[v] = -1;
  if (heap_.size() > 1) {
    heap_[0] = heap_.back();
    heap_pos_[heap_[0]] = 0;
    heap_.pop_back();
    heap_down(0);
  } else {
    heap_.pop_back();
  }
  return v;
}

// -------- clause addition --------

void Solver::add_clause(const int *lits, size_t n) {
  assert(decision_level() == 0);
  if (!ok_) return;
  add_tmp_.clear();
  for (size_t i = 0; i < n; i++) {
    assert(lits[i] != 0);
    int v = (lits[i] < 0 ? -lits[i] : lits[i]) - 1;
    while (v >= num_vars()) new_var();
    add_tmp_.push_back(import(lits[i]));
  }
  std::sort(add_tmp_.begin(), add_tmp_.end());
  int j = 0;
  int prev = -1;
  for (int p : add_tmp_) {
    if (value(p) == LBool::True || p == neg(prev)) return; // satisfied / tautology
    if (value(p) != LBool::False && p != prev) add_tmp_[j++] = prev = p;
  }
  add_tmp_.resize(j);

  if (add_tmp_.empty()) {
    ok_ = false;
    return;
  }
  if (add_tmp_.size() == 1) {
    unchecked_enqueue(add_tmp_[0], kNoClause);
    ok_ = (propagate() == kNoClause);
    return;
  }
  CRef c = alloc_clause(add_tmp_, false);
  clauses_.push_back(c);
  attach_clause(c);
}

// -------- propagation --------

void Solver::unchecked_enqueue(int p, CRef from) {
  assert(value(p) == LBool::Undef);
  assigns_[var_of(p)] =
      (uint8_t)(sign_of(p) ? LBool::False : LBool::True);
  vardata_[var_of(p)] = VarData{from, decision_level()};
  trail_.push_back(p);
}

Solver::CRef Solver::propagate() {
  CRef confl = kNoClause;
  while (qhead_ < (int)trail_.size()) {
    int p = trail_[qhead_++];
    stats_.propagations++;
    auto &ws = watches_[p];
    size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i++];
      if (value(w.blocker) == LBool::True) {
        ws[j++] = w;
        continue;
      }
      CRef cr = w.cref;
      int *ls = clause_lits(cr);
      int np = neg(p);
      if (ls[0] == np) std::swap(ls[0], ls[1]);
      assert(ls[1] == np);
      int first = ls[0];
      if (first != w.blocker && value(first) == LBool::True) {
        ws[j++] = Watcher{cr, first};
        continue;
      }
      uint32_t sz = clause_size(cr);
      bool moved = false;
      for (uint32_t k = 2; k < sz; k++) {
        if (value(ls[k]) != LBool::False) {
          ls[1] = ls[k];
          ls[k] = np;
          watches_[neg(ls[1])].push_back(Watcher{cr, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = Watcher{cr, first};
      if (value(first) == LBool::False) {
        confl = cr;
        qhead_ = (int)trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        unchecked_enqueue(first, cr);
      }
    }
    ws.resize(j);
  }
  return confl;
}

void Solver::cancel_until(int level) {
  if (decision_level() <= level) return;
  for (int c = (int)trail_.size() - 1; c >= trail_lim_[level]; c--) {
    int x = var_of(trail_[c]);
    assigns_[x] = (uint8_t)LBool::Undef;
    polarity_[x] = sign_of(trail_[c]);
    heap_insert(x);
  }
  qhead_ = trail_lim_[level];
  trail_.resize(trail_lim_[level]);
  trail_lim_.resize(level);
}

// -------- conflict analysis --------

void Solver::analyze(CRef confl, std::vector<int> &out_learnt,
                     int &out_btlevel) {
  int path_c = 0;
  int p = -1;
  out_learnt.clear();
  out_learnt.push_back(-1); // slot for the asserting literal
  int index = (int)trail_.size() - 1;

  do {
    assert(confl != kNoClause);
    if (clause_learnt(confl)) cla_bump(confl);
    const int *ls = clause_lits(confl);
    uint32_t sz = clause_size(confl);
    for (uint32_t j = (p == -1) ? 0 : 1; j < sz; j++) {
      int q = ls[j];
      int v = var_of(q);
      if (!seen_[v] && vardata_[v].level > 0) {
        var_bump(v);
        seen_[v] = 1;
        if (vardata_[v].level >= decision_level())
          path_c++;
        else
          out_learnt.push_back(q);
      }
    }
    while (!seen_[var_of(trail_[index--])])
      ;
    p = trail_[index + 1];
    confl = vardata_[var_of(p)].reason;
    seen_[var_of(p)] = 0;
    path_c--;
  } while (path_c > 0);
  out_learnt[0] = neg(p);

  // recursive minimization
  analyze_toclear_ = out_learnt;
  uint32_t abstract = 0;
  for (size_t i = 1; i < out_learnt.size(); i++)
    abstract |= 1u << (vardata_[var_of(out_learnt[i])].level & 31);
  size_t j = 1;
  for (size_t i = 1; i < out_learnt.size(); i++) {
    int q = out_learnt[i];
    if (vardata_[var_of(q)].reason == kNoClause || !lit_redundant(q, abstract))
      out_learnt[j++] = q;
  }
  out_learnt.resize(j);

  if (out_learnt.size() == 1) {
    out_btlevel = 0;
  } else {
    size_t max_i = 1;
    for (size_t i = 2; i < out_learnt.size(); i++)
      if (vardata_[var_of(out_learnt[i])].level >
          vardata_[var_of(out_learnt[max_i])].level)
        max_i = i;
    std::swap(out_learnt[1], out_learnt[max_i]);
    out_btlevel = vardata_[var_of(out_learnt[1])].level;
  }

  for (int l : analyze_toclear_) seen_[var_of(l)] = 0;
}

bool Solver::lit_redundant(int p, uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(p);
  size_t top = analyze_toclear_.size();
  while (!analyze_stack_.empty()) {
    int x = var_of(analyze_stack_.back());
    analyze_stack_.pop_back();
    CRef cr = vardata_[x].reason;
    assert(cr != kNoClause);
    const int *ls = clause_lits(cr);
    uint32_t sz = clause_size(cr);
    for (uint32_t i = 1; i < sz; i++) {
      int q = ls[i];
      int v = var_of(q);
      if (seen_[v] || vardata_[v].level == 0) continue;
      if (vardata_[v].reason != kNoClause &&
          (1u << (vardata_[v].level & 31)) & abstract_levels) {
        seen_[v] = 1;
        analyze_stack_.push_back(q);
        analyze_toclear_.push_back(q);
      } else {
        for (size_t k = top; k < analyze_toclear_.size(); k++)
          seen_[var_of(analyze_toclear_[k])] = 0;
        analyze_toclear_.resize(top);
        return false;
      }
    }
  }
  return true;
}

void Solver::analyze_final(int p, std::vector<int> &out_core) {
  out_core.clear();
  out_core.push_back(export_(neg(p)));
  if (decision_level() == 0) return;
  seen_[var_of(p)] = 1;
  for (int i = (int)trail_.size() - 1; i >= trail_lim_[0]; i--) {
    int x = var_of(trail_[i]);
    if (!seen_[x]) continue;
    CRef cr = vardata_[x].reason;
    if (cr == kNoClause) {
      assert(vardata_[x].level > 0);
      out_core.push_back(export_(trail_[i]));
    } else {
      const int *ls = clause_lits(cr);
      uint32_t sz = clause_size(cr);
      for (uint32_t j = 1; j < sz; j++)
        if (vardata_[var_of(ls[j])].level > 0) seen_[var_of(ls[j])] = 1;
    }
    seen_[x] = 0;
  }
  seen_[var_of(p)] = 0;
}

// -------- search --------

int Solver::pick_branch_lit() {
  while (!heap_empty()) {
    int v = heap_pop();
    if (var_value(v) == LBool::Undef) return mk_lit(v, polarity_[v]);
  }
  return -1;
}

void Solver::remove_satisfied(std::vector<CRef> &cs) {
  size_t j = 0;
  for (CRef c : cs) {
    if (clause_satisfied(c))
      remove_clause(c);
    else
      cs[j++] = c;
  }
  cs.resize(j);
}

bool Solver::simplify() {
  assert(decision_level() == 0);
  if (!ok_ || propagate() != kNoClause) return ok_ = false;
  if ((int)trail_.size() == simp_trail_size_) return true;
  remove_satisfied(learnts_);
  remove_satisfied(clauses_);
  garbage_collect_if_needed();
  simp_trail_size_ = (int)trail_.size();
  return true;
}

void Solver::reduce_db() {
  double extra_lim = cla_inc_ / std::max<size_t>(learnts_.size(), 1);
  std::sort(learnts_.begin(), learnts_.end(), [this](CRef a, CRef b) {
    bool ba = clause_size(a) == 2, bb = clause_size(b) == 2;
    if (ba != bb) return bb; // binaries last (kept)
    return clause_act(a) < clause_act(b);
  });
  size_t j = 0;
  for (size_t i = 0; i < learnts_.size(); i++) {
    CRef c = learnts_[i];
    if (clause_size(c) > 2 && !locked(c) &&
        (i < learnts_.size() / 2 || clause_act(c) < extra_lim))
      remove_clause(c);
    else
      learnts_[j++] = c;
  }
  learnts_.resize(j);
  garbage_collect_if_needed();
}

LBool Solver::search(int max_conflicts) {
  int conflict_c = 0;
  std::vector<int> learnt_clause;

  while (true) {
    CRef confl = propagate();
    if (confl != kNoClause) {
      stats_.conflicts++;
      conflict_c++;
      if (conflicts_left_ > 0) conflicts_left_--;
      if (decision_level() == 0) return LBool::False;

      int bt_level;
      analyze(confl, learnt_clause, bt_level);
      cancel_until(bt_level);
      if (learnt_clause.size() == 1) {
        unchecked_enqueue(learnt_clause[0], kNoClause);
      } else {
        CRef cr = alloc_clause(learnt_clause, true);
        learnts_.push_back(cr);
        attach_clause(cr);
        cla_bump(cr);
        unchecked_enqueue(learnt_clause[0], cr);
        stats_.learnt++;
      }
      var_decay();
      cla_decay();

      if (--learnt_adjust_cnt_ == 0) {
        learnt_adjust_confl_ *= 1.5;
        learnt_adjust_cnt_ = (int)learnt_adjust_confl_;
        max_learnts_ *= 1.1;
      }
    } else {
      if (conflict_c >= max_conflicts ||
          (budget_ >= 0 && conflicts_left_ == 0)) {
        cancel_until(0);
        return LBool::Undef;
      }
      if (decision_level() == 0 && !simplify()) return LBool::False;
      if ((double)learnts_.size() - (double)trail_.size() >= max_learnts_)
        reduce_db();

      int next = -1;
      while (decision_level() < (int)assumptions_.size()) {
        int p = assumptions_[decision_level()];
        if (value(p) == LBool::True) {
          new_decision_level();
        } else if (value(p) == LBool::False) {
          analyze_final(neg(p), core_);
          return LBool::False;
        } else {
          next = p;
          break;
        }
      }
      if (next == -1) {
        stats_.decisions++;
        next = pick_branch_lit();
        if (next == -1) return LBool::True; // all variables assigned
      }
      new_decision_level();
      unchecked_enqueue(next, kNoClause);
    }
  }
}

LBool Solver::solve(const std::vector<int> &assumptions) {
  core_.clear();
  model_.clear();
  if (!ok_) return LBool::False;

  assumptions_.clear();
  for (int a : assumptions) {
    assert(a != 0);
    int v = (a < 0 ? -a : a) - 1;
    while (v >= num_vars()) new_var();
    assumptions_.push_back(import(a));
  }

  conflicts_left_ = budget_;
  max_learnts_ = std::max((double)clauses_.size() * (1.0 / 3.0), 1000.0);
  learnt_adjust_confl_ = 100;
  learnt_adjust_cnt_ = 100;

  LBool status = LBool::Undef;
  int curr_restarts = 0;
  auto luby = [](double y, int x) {
    int size, seq;
    for (size = 1, seq = 0; size < x + 1; seq++, size = 2 * size + 1)
      ;
    while (size - 1 != x) {
      size = (size - 1) >> 1;
      seq--;
      x = x % size;
    }
    return std::pow(y, seq);
  };
  while (status == LBool::Undef) {
    double rest_base = luby(2.0, curr_restarts);
    status = search((int)(rest_base * 100));
    if (budget_ >= 0 && conflicts_left_ == 0) break;
    curr_restarts++;
    stats_.restarts++;
  }

  if (status == LBool::True) {
    model_ = assigns_;
  } else if (status == LBool::False && core_.empty()) {
    ok_ = false;
  }
  cancel_until(0);
  assumptions_.clear();
  return status;
}

LBool Solver::model_value(int lit) const {
  int v = (lit < 0 ? -lit : lit) - 1;
  if (v < 0 || v >= (int)model_.size()) return LBool::Undef;
  LBool b = (LBool)model_[v];
  if (b == LBool::Undef) return LBool::Undef;
  return ((b == LBool::True) != (lit < 0)) ? LBool::True : LBool::False;
}

} // namespace eqc
