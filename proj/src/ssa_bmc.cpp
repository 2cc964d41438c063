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

#include "eqc/ssa.h"

#include <stdexcept>
#include <unordered_set>

#include "eqc/bitblast.h"
#include "eqc/eval.h"
#include "eqc/fp_lower.h"
#include "eqc/solver.h"

namespace eqc {

namespace {

struct Subst {
  ExprArena &A;
  const std::unordered_map<std::string, Expr> &map;
  std::unordered_map<const ExprNode *, Expr> memo;

  Expr go(Expr e) {
    auto it = memo.find(e.get());
    if (it != memo.end()) return it->second;
    Expr r = rewrite(e);
    memo.emplace(e.get(), r);
    return r;
  }

  Expr rewrite(Expr e) {
    if (e.is_var()) {
      auto it = map.find(e.var_name());
      return it == map.end() ? e : it->second;
    }
    if (e.arity() == 0) return e;
    std::vector<Expr> kids;
    bool changed = false;
    for (unsigned i = 0; i < e.arity(); i++) {
      kids.push_back(go(e.kid(i)));
      if (kids.back() != e.kid(i)) changed = true;
    }
    if (!changed) return e;
    return rebuild(A, e, kids.data(), kids.size());
  }
};

// State reaching one program point: the decision literals identify the
// syntactic path family, guard is the exact reachability condition.
struct PState {
  std::vector<std::pair<Expr, bool>> lits; // (guard var, polarity)
  Expr guard;
  std::unordered_map<std::string, Expr> map; // base -> current version
};

class SsaBuilder {
public:
  SsaBuilder(const GotoProgram &p, ExprArena &arena) : p_(p), A_(arena) {}

  SsaProgram run() {
    collect_bases();

    PState init;
    init.guard = A_.tru();
    for (auto &[name, t] : base_order_) {
      Expr v1 = version(name, t);
      init.map.emplace(name, v1);
      out_.initial.emplace_back(name, v1);
    }

    unsigned n = (unsigned)p_.instrs.size();
    std::vector<std::vector<PState>> incoming(n + 1);
    incoming[0].push_back(std::move(init));

    std::optional<PState> fall;
    for (unsigned i = 0; i < n; i++) {
      std::vector<PState> states = std::move(incoming[i]);
      if (fall) {
        states.push_back(std::move(*fall));
        fall.reset();
      }
      if (states.empty()) continue;
      PState st = merge_all(std::move(states));

      const GotoInstr &in = p_.instrs[i];
      switch (in.kind) {
      case GKind::Assign: {
        Expr rhs = subst_vars(A_, in.e, st.map);
        std::string base = in.lhs.var_name();
        Expr v = version(base, in.lhs.type());
        out_.defs.push_back({v, rhs});
        st.map[base] = v;
        fall = std::move(st);
        break;
      }
      case GKind::Assume:
        out_.assumes.push_back({st.guard, subst_vars(A_, in.e, st.map)});
        fall = std::move(st);
        break;
      case GKind::Assert:
        out_.asserts.push_back(
            {in.label, st.guard, subst_vars(A_, in.e, st.map), in.loc});
        fall = std::move(st);
        break;
      case GKind::Branch: {
        Expr g = A_.var("guard_" + std::to_string(next_guard_++), Type::bool_());
        out_.defs.push_back({g, subst_vars(A_, in.e, st.map)});
        PState then_st = st;
        then_st.lits.emplace_back(g, true);
        then_st.guard = A_.and_(st.guard, g);
        PState else_st = std::move(st);
        else_st.lits.emplace_back(g, false);
        else_st.guard = A_.and_(else_st.guard, A_.not_(g));
        incoming[in.target].push_back(std::move(then_st));
        incoming[in.else_target].push_back(std::move(else_st));
        break;
      }
      case GKind::Goto:
        incoming[in.target].push_back(std::move(st));
        break;
      case GKind::Skip:
        fall = std::move(st);
        break;
      }
    }

    if (fall)
      for (auto &[name, v] : fall->map) out_.finals.emplace(name, v);
    return std::move(out_);
  }

private:
  void collect_bases() {
    auto add = [&](Expr v) {
      const std::string &name = v.var_name();
      if (seen_.insert(name).second) base_order_.emplace_back(name, v.type());
    };
    for (Expr v : p_.inputs) add(v);
    std::vector<Expr> vs;
    for (const GotoInstr &in : p_.instrs) {
      if (in.kind == GKind::Assign) add(in.lhs);
      if (in.e.valid()) {
        vs.clear();
        collect_vars(in.e, vs);
        for (Expr v : vs) add(v);
      }
    }
  }

  Expr version(const std::string &base, Type t) {
    unsigned k = ++next_version_[base];
    return A_.var(base + "_" + std::to_string(k), t);
  }

  // Prefers sibling pairs (same prefix, complementary last decision) so
  // merges use the branch guard alone, as in hand-written SSA.
  PState merge_all(std::vector<PState> states) {
    while (states.size() > 1) {
      bool merged = false;
      for (size_t i = 0; i + 1 < states.size() && !merged; i++) {
        for (size_t j = i + 1; j < states.size() && !merged; j++) {
          if (!siblings(states[i], states[j])) continue;
          PState &a = states[i].lits.back().second ? states[i] : states[j];
          PState &b = states[i].lits.back().second ? states[j] : states[i];
          Expr g = a.lits.back().first;
          PState m = merge_pair(g, a, b);
          m.lits = a.lits;
          m.lits.pop_back();
          states[i] = std::move(m);
          states.erase(states.begin() + (long)j);
          merged = true;
        }
      }
      if (merged) continue;
      PState &a = states[states.size() - 2];
      PState &b = states.back();
      PState m = merge_pair(b.guard, b, a);
      size_t common = 0;
      while (common < a.lits.size() && common < b.lits.size() &&
             a.lits[common] == b.lits[common])
        common++;
      m.lits.assign(a.lits.begin(), a.lits.begin() + (long)common);
      states.pop_back();
      states.back() = std::move(m);
    }
    return std::move(states.front());
  }

  static bool siblings(const PState &a, const PState &b) {
    if (a.lits.empty() || a.lits.size() != b.lits.size()) return false;
    size_t last = a.lits.size() - 1;
    for (size_t i = 0; i < last; i++)
      if (a.lits[i] != b.lits[i]) return false;
    return a.lits[last].first == b.lits[last].first &&
           a.lits[last].second != b.lits[last].second;
  }

  // Value is a's when cond holds, else b's.
  PState merge_pair(Expr cond, const PState &a, const PState &b) {
    PState m;
    m.guard = A_.or_(a.guard, b.guard);
    m.map = b.map;
    for (auto &[base, va] : a.map) {
      Expr vb = b.map.at(base);
      if (va == vb) continue;
      Expr v = version(base, va.type());
      out_.defs.push_back({v, A_.ite(cond, va, vb)});
      m.map[base] = v;
    }
    return m;
  }

  const GotoProgram &p_;
  ExprArena &A_;
  SsaProgram out_;
  std::vector<std::pair<std::string, Type>> base_order_;
  std::unordered_set<std::string> seen_;
  std::unordered_map<std::string, unsigned> next_version_;
  unsigned next_guard_ = 1;
};

} // namespace

Expr subst_vars(ExprArena &arena, Expr e,
                const std::unordered_map<std::string, Expr> &map) {
  Subst s{arena, map, {}};
  return s.go(e);
}

SsaProgram to_ssa(const GotoProgram &p, ExprArena &arena) {
  SsaBuilder b(p, arena);
  return b.run();
}

std::string dump(const SsaProgram &ssa) {
  std::string out;
  for (const SsaDef &d : ssa.defs) {
    out += d.var.var_name();
    out += " = ";
    out += to_string(d.rhs);
    out += "\n";
  }
  for (const SsaAssume &a : ssa.assumes) {
    out += "assume ";
    if (!a.guard.is_true()) {
      out += to_string(a.guard);
      out += " -> ";
    }
    out += to_string(a.cond);
    out += "\n";
  }
  for (const SsaAssert &a : ssa.asserts) {
    out += "assert ";
    if (!a.guard.is_true()) {
      out += to_string(a.guard);
      out += " -> ";
    }
    out += to_string(a.cond);
    out += " [" + a.label + "]\n";
  }
  return out;
}

std::unordered_map<std::string, uint64_t>
interp_concrete(const SsaProgram &ssa,
                const std::unordered_map<std::string, uint64_t> &inputs) {
  Env env;
  for (const auto &[base, v1] : ssa.initial) {
    auto it = inputs.find(base);
    env.set(v1, it != inputs.end() ? it->second : 0);
  }
  for (const SsaDef &d : ssa.defs) env.set(d.var, eval(d.rhs, env));

  std::unordered_map<std::string, uint64_t> out;
  for (const auto &[base, v] : ssa.finals) {
    if (!env.has(v))
      throw std::invalid_argument("interp_concrete: no binding for " + base);
    out[base] = env.get(v);
  }
  return out;
}

MonolithicFormula encode_monolithic(const SsaProgram &ssa, ExprArena &A) {
  MonolithicFormula f;
  std::vector<Expr> cs;
  for (const SsaDef &d : ssa.defs) cs.push_back(A.eq(d.var, d.rhs));
  for (const SsaAssume &a : ssa.assumes)
    cs.push_back(A.implies(a.guard, a.cond));
  f.constraints = A.and_all(cs);
  f.asserts = ssa.asserts;
  std::vector<Expr> viols;
  for (const SsaAssert &a : ssa.asserts)
    viols.push_back(A.and_(a.guard, A.not_(a.cond)));
  f.violation = viols.empty() ? A.fls() : A.or_all(viols);
  return f;
}

std::vector<AssertResult> bmc_check(const GotoProgram &p, ExprArena &A,
                                    const BmcOptions &opts) {
  SsaProgram ssa = to_ssa(p, A);
  MonolithicFormula fm = encode_monolithic(ssa, A);

  std::unordered_map<std::string, Expr> v1;
  for (const auto &[base, var] : ssa.initial) v1.emplace(base, var);

  Solver S;
  S.set_conflict_budget(opts.conflict_budget);
  BitBlaster bb(A, S);
  FpLowerer fl(A);

  bb.assert_true(fl.lower(fm.constraints));
  for (Expr a : opts.assumptions)
    bb.assert_true(fl.lower(subst_vars(A, a, v1)));

  std::vector<std::pair<Expr, Expr>> input_vars; // (goto var, v1 var)
  for (Expr in : p.inputs) {
    Expr iv = v1.at(in.var_name());
    if (iv.type().is_bool())
      (void)bb.literal(iv);
    else
      (void)bb.bits(iv);
    input_vars.emplace_back(in, iv);
  }

  std::vector<AssertResult> out;
  for (const SsaAssert &a : fm.asserts) {
    if (opts.only_label && a.label != *opts.only_label) continue;
    AssertResult r;
    r.label = a.label;
    Expr q = fl.lower(A.and_(a.guard, A.not_(a.cond)));
    LBool res = S.solve({bb.literal(q)});
    if (res == LBool::False) {
      r.status = CheckStatus::Holds;
    } else if (res == LBool::True) {
      r.status = CheckStatus::Violated;
      for (auto &[gv, iv] : input_vars)
        r.cex[gv.var_name()] = iv.type().is_bool()
                                   ? (bb.model_bool(S, iv) ? 1 : 0)
                                   : bb.model_bits(S, iv);
    } else {
      r.status = CheckStatus::Unknown;
    }
    out.push_back(std::move(r));
  }
  return out;
}

} // namespace eqc
