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

#include "eqc/goto_prog.h"
#include "eqc/eval.h"

#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace eqc {

bool GotoProgram::has_label(const std::string &label) const {
  for (const GotoInstr &in : instrs)
    if (in.kind == GKind::Assert && in.label == label) return true;
  return false;
}

void validate(const GotoProgram &p) {
  auto fail = [](unsigned pc, const std::string &msg) {
    throw std::logic_error("goto program: instruction " + std::to_string(pc) +
                           ": " + msg);
  };
  std::unordered_set<std::string> labels;
  unsigned n = (unsigned)p.instrs.size();
  for (unsigned i = 0; i < n; i++) {
    const GotoInstr &in = p.instrs[i];
    switch (in.kind) {
    case GKind::Assign:
      if (!in.lhs.valid() || !in.lhs.is_var()) fail(i, "assign lhs not a var");
      if (!in.e.valid() || in.e.type() != in.lhs.type())
        fail(i, "assign type mismatch");
      break;
    case GKind::Assume:
    case GKind::Assert:
      if (!in.e.valid() || !in.e.type().is_bool())
        fail(i, "condition not bool");
      if (in.kind == GKind::Assert) {
        if (in.label.empty()) fail(i, "assert without label");
        if (!labels.insert(in.label).second)
          fail(i, "duplicate assert label " + in.label);
      }
      break;
    case GKind::Branch:
      if (!in.e.valid() || !in.e.type().is_bool())
        fail(i, "condition not bool");
      if (in.target <= i || in.target >= n || in.else_target <= i ||
          in.else_target >= n)
        fail(i, "branch target not strictly forward");
      break;
    case GKind::Goto:
      if (in.target <= i || in.target >= n)
        fail(i, "goto target not strictly forward");
      break;
    case GKind::Skip:
      break;
    }
  }
}

std::string to_string(const GotoProgram &p) {
  std::ostringstream os;
  for (unsigned i = 0; i < p.instrs.size(); i++) {
    const GotoInstr &in = p.instrs[i];
    os << i << ": ";
    switch (in.kind) {
    case GKind::Assign:
      os << in.lhs.var_name() << " := " << to_string(in.e);
      break;
    case GKind::Assume:
      os << "assume " << to_string(in.e);
      break;
    case GKind::Assert:
      os << "assert " << to_string(in.e) << " [" << in.label << "]";
      break;
    case GKind::Branch:
      os << "if " << to_string(in.e) << " goto " << in.target << " else "
         << in.else_target;
      break;
    case GKind::Goto:
      os << "goto " << in.target;
      break;
    case GKind::Skip:
      os << "skip";
      break;
    }
    os << "\n";
  }
  return os.str();
}

GotoRun run_goto(const GotoProgram &p,
                 const std::unordered_map<std::string, uint64_t> &inputs) {
  GotoRun r;
  Env env;
  for (Expr v : p.inputs) {
    auto it = inputs.find(v.var_name());
    if (it == inputs.end())
      throw std::invalid_argument("run_goto: unbound input " + v.var_name());
    env.set(v, it->second);
    r.values[v.var_name()] = env.get(v);
  }
  unsigned n = (unsigned)p.instrs.size();
  unsigned pc = 0;
  while (pc < n) {
    const GotoInstr &in = p.instrs[pc];
    unsigned next = pc + 1;
    switch (in.kind) {
    case GKind::Assign: {
      uint64_t v = eval(in.e, env);
      env.set(in.lhs, v);
      r.values[in.lhs.var_name()] = env.get(in.lhs);
      break;
    }
    case GKind::Assume:
      if (!eval(in.e, env)) {
        r.blocked = true;
        return r;
      }
      break;
    case GKind::Assert:
      if (!eval(in.e, env)) r.violated.push_back(in.label);
      break;
    case GKind::Branch: {
      bool taken = eval(in.e, env) != 0;
      r.branches.emplace_back(pc, taken);
      next = taken ? in.target : in.else_target;
      break;
    }
    case GKind::Goto:
      next = in.target;
      break;
    case GKind::Skip:
      break;
    }
    if (next <= pc) throw std::logic_error("run_goto: backward jump");
    pc = next;
  }
  return r;
}

namespace {

void expr_var_names(Expr e, std::unordered_set<std::string> &out) {
  std::vector<Expr> vs;
  collect_vars(e, vs);
  for (Expr v : vs) out.insert(v.var_name());
}

struct SliceState {
  const GotoProgram &p;
  std::unordered_set<std::string> wanted;
  std::vector<bool> keep;
  std::vector<unsigned> drop_succ; // successor of a dropped branch

  explicit SliceState(const GotoProgram &prog) : p(prog) {
    keep.assign(p.instrs.size(), true);
    drop_succ.assign(p.instrs.size(), 0);
  }

  // First effective instruction at or after `i`, looking through
  // dropped instructions, skips and kept gotos.
  unsigned resolve(unsigned i) const {
    unsigned n = (unsigned)p.instrs.size();
    while (i < n) {
      const GotoInstr &in = p.instrs[i];
      if (!keep[i]) {
        i = (in.kind == GKind::Branch) ? drop_succ[i] : i + 1;
        continue;
      }
      if (in.kind == GKind::Skip) {
        i++;
        continue;
      }
      if (in.kind == GKind::Goto) {
        i = in.target;
        continue;
      }
      return i;
    }
    return n;
  }

  // One backward liveness pass; reverse index order is reverse
  // topological since all edges point forward.
  void liveness() {
    unsigned n = (unsigned)p.instrs.size();
    std::vector<std::unordered_set<std::string>> live(n + 1);
    for (unsigned ii = n; ii-- > 0;) {
      const GotoInstr &in = p.instrs[ii];
      std::unordered_set<std::string> out = live[ii + 1];
      if (keep[ii] && in.kind == GKind::Goto)
        out = live[in.target];
      else if (in.kind == GKind::Branch) {
        if (keep[ii]) {
          out = live[in.target];
          for (const std::string &s : live[in.else_target]) out.insert(s);
        } else {
          out = live[drop_succ[ii]];
        }
      }
      switch (in.kind) {
      case GKind::Assign:
        keep[ii] = keep[ii] && out.count(in.lhs.var_name()) != 0;
        if (keep[ii]) {
          out.erase(in.lhs.var_name());
          expr_var_names(in.e, out);
        }
        break;
      case GKind::Assume:
        expr_var_names(in.e, out);
        break;
      case GKind::Assert:
        keep[ii] = wanted.count(in.label) != 0;
        if (keep[ii]) expr_var_names(in.e, out);
        break;
      case GKind::Branch:
        if (keep[ii]) expr_var_names(in.e, out);
        break;
      case GKind::Goto:
      case GKind::Skip:
        break;
      }
      live[ii] = std::move(out);
    }
  }

  // Drops branches whose arms reach the same effective instruction.
  bool prune_branches() {
    bool changed = false;
    unsigned n = (unsigned)p.instrs.size();
    for (unsigned i = 0; i < n; i++) {
      const GotoInstr &in = p.instrs[i];
      if (in.kind != GKind::Branch || !keep[i]) continue;
      unsigned a = resolve(in.target);
      unsigned b = resolve(in.else_target);
      if (a == b) {
        keep[i] = false;
        drop_succ[i] = in.target;
        changed = true;
      }
    }
    return changed;
  }
};

} // namespace

GotoProgram slice(const GotoProgram &p,
                  const std::vector<std::string> &labels) {
  SliceState st(p);
  for (const std::string &l : labels) {
    if (!p.has_label(l))
      throw std::invalid_argument("slice: unknown assert label " + l);
    st.wanted.insert(l);
  }

  st.liveness();
  while (st.prune_branches()) st.liveness();

  unsigned n = (unsigned)p.instrs.size();

  // Walks through dropped instructions only; surviving gotos stay.
  auto next_kept = [&](unsigned i) {
    while (i < n && !st.keep[i])
      i = (p.instrs[i].kind == GKind::Branch) ? st.drop_succ[i] : i + 1;
    return i;
  };

  // Gotos that fall through to their own target are dropped too.
  bool changed = true;
  while (changed) {
    changed = false;
    for (unsigned i = 0; i < n; i++) {
      if (!st.keep[i] || p.instrs[i].kind != GKind::Goto) continue;
      if (next_kept(p.instrs[i].target) == next_kept(i + 1)) {
        st.keep[i] = false;
        changed = true;
      }
    }
  }

  std::vector<unsigned> new_index(n + 1, 0);
  unsigned kept = 0;
  for (unsigned i = 0; i < n; i++) {
    new_index[i] = kept;
    if (st.keep[i]) kept++;
  }
  new_index[n] = kept;

  GotoProgram out;
  out.inputs = p.inputs;
  out.float_vars = p.float_vars;
  out.global_names = p.global_names;
  out.entry = p.entry;
  out.source_file = p.source_file;
  for (unsigned i = 0; i < n; i++) {
    if (!st.keep[i]) continue;
    GotoInstr in = p.instrs[i];
    if (in.kind == GKind::Branch) {
      in.target = new_index[next_kept(in.target)];
      in.else_target = new_index[next_kept(in.else_target)];
    } else if (in.kind == GKind::Goto) {
      in.target = new_index[next_kept(in.target)];
    }
    out.instrs.push_back(std::move(in));
  }

  // The final skip keeps every surviving jump strictly forward.
  if (out.instrs.empty() || out.instrs.back().kind != GKind::Skip) {
    GotoInstr end;
    end.kind = GKind::Skip;
    out.instrs.push_back(end);
  }
  validate(out);
  return out;
}

} // namespace eqc
