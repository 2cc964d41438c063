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

#include "eqc/harness.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "eqc/bitblast.h"
#include "eqc/eval.h"
#include "eqc/fp_lower.h"
#include "eqc/solver.h"

namespace eqc::harness {

namespace {

const std::vector<std::string> kPartitions = {"INF", "ZERO", "NaN",
                                              "SUBNORMAL", "NORMAL"};

bool is_partition(const std::string &s) {
  return std::find(kPartitions.begin(), kPartitions.end(), s) !=
         kPartitions.end();
}

bool is_ident(const std::string &s) {
  if (s.empty() || (!isalpha((unsigned char)s[0]) && s[0] != '_'))
    return false;
  for (char c : s)
    if (!isalnum((unsigned char)c) && c != '_') return false;
  return true;
}

bool parse_u64(const std::string &s, uint64_t &out) {
  if (s.empty()) return false;
  int base = 10;
  size_t i = 0;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    base = 16;
    i = 2;
  }
  uint64_t v = 0;
  for (; i < s.size(); i++) {
    int d;
    char c = s[i];
    if (c >= '0' && c <= '9')
      d = c - '0';
    else if (base == 16 && c >= 'a' && c <= 'f')
      d = c - 'a' + 10;
    else if (base == 16 && c >= 'A' && c <= 'F')
      d = c - 'A' + 10;
    else
      return false;
    if (v > (UINT64_MAX - d) / base) return false;
    v = v * base + d;
  }
  out = v;
  return true;
}

struct RoundedOp {
  const char *name;
  unsigned arity;
  bool rounded;
};

const RoundedOp kBuiltinOps[] = {
    {"fp_add", 2, true}, {"fp_sub", 2, true},   {"fp_mul", 2, true},
    {"fp_div", 2, true}, {"fp_min", 2, false},  {"fp_max", 2, false},
    {"fp_round", 1, true},
};

const RoundedOp *find_builtin(const std::string &name) {
  for (const RoundedOp &op : kBuiltinOps)
    if (name == op.name) return &op;
  return nullptr;
}

// Wire encoding of a rounding mode name.
int rm_code(const std::string &name) {
  if (name == "RU") return 0;
  if (name == "RD") return 1;
  if (name == "RZ") return 2;
  if (name == "RNE") return 3;
  return -1;
}

const minic::AstFunc *find_fn(const minic::Ast &ast, const std::string &name) {
  for (const minic::AstFunc &f : ast.funcs)
    if (f.name == name) return &f;
  return nullptr;
}

std::string sig_string(const std::vector<Type> &params) {
  std::string s = "(";
  for (size_t i = 0; i < params.size(); i++) {
    if (i) s += ", ";
    s += minic::type_name(params[i]);
  }
  return s + ")";
}

void check_signature(const std::string &side, const std::string &file,
                     const minic::AstFunc &fn, const std::vector<Type> &want) {
  std::vector<Type> got;
  for (const minic::Param &p : fn.params) got.push_back(p.type);
  if (got != want)
    throw HarnessError(file + ": input-signature mismatch: " + side +
                       " function '" + fn.name + "' takes " + sig_string(got) +
                       ", miter provides " + sig_string(want));
  if (fn.is_void)
    throw HarnessError(file + ": " + side + " function '" + fn.name +
                       "' returns no value");
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw HarnessError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string dir_of(const std::string &path) {
  size_t pos = path.find_last_of('/');
  if (pos == std::string::npos) return "";
  return path.substr(0, pos + 1);
}

CheckStatus worst(CheckStatus a, CheckStatus b) {
  auto rank = [](CheckStatus s) {
    switch (s) {
    case CheckStatus::Violated: return 2;
    case CheckStatus::Unknown: return 1;
    case CheckStatus::Holds: return 0;
    }
    return 1;
  };
  return rank(a) >= rank(b) ? a : b;
}

const char *status_name(CheckStatus s) {
  switch (s) {
  case CheckStatus::Holds: return "HOLDS";
  case CheckStatus::Violated: return "VIOLATED";
  case CheckStatus::Unknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

// Adapts a software SSA expression to an RTL signal width.
Expr adapt_to_width(ExprArena &A, Expr e, unsigned w, const std::string &what,
                    unsigned line, const std::string &file) {
  Type t = e.type();
  if (t.is_bool()) {
    if (w != 1)
      throw HarnessError(file, line,
                         what + ": cannot pin bool to " + std::to_string(w) +
                             " bits");
    return A.bool_to_bits(e);
  }
  if (t.width() != w)
    throw HarnessError(file, line, what + ": width mismatch, software side is " +
                                       std::to_string(t.width()) +
                                       " bits, signal is " + std::to_string(w));
  if (t.is_signed()) return A.cast(e, Type::ubits(w));
  return e;
}

// Float-typed scalar program inputs sharing one format.
std::vector<std::string> float_operands(const GotoProgram &p,
                                        FloatFormat &fmt_out) {
  std::vector<std::string> ops;
  bool have_fmt = false;
  for (Expr in : p.inputs) {
    auto it = p.float_vars.find(in.var_name());
    if (it == p.float_vars.end()) continue;
    if (!have_fmt) {
      fmt_out = it->second;
      have_fmt = true;
    }
    if (it->second == fmt_out) ops.push_back(in.var_name());
  }
  return ops;
}

} // namespace

const std::vector<std::string> &all_partitions() { return kPartitions; }

MiterSpec parse_miter_spec(const std::string &text, const std::string &file) {
  MiterSpec spec;
  spec.file = file;

  std::istringstream in(text);
  std::string raw;
  unsigned ln = 0;
  bool in_script = false;
  bool saw_ref = false, saw_impl = false;

  auto err = [&](const std::string &msg) -> HarnessError {
    return HarnessError(file, ln, msg);
  };

  while (std::getline(in, raw)) {
    ln++;
    size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::vector<std::string> tok;
    std::string t;
    while (ls >> t) tok.push_back(t);
    if (tok.empty()) continue;
    const std::string &key = tok[0];

    if (in_script) {
      ScriptEvent ev;
      ev.line = ln;
      if (key == "end") {
        in_script = false;
      } else if (key == "advance") {
        if (tok.size() != 1) throw err("advance takes no arguments");
        ev.kind = ScriptEvent::Kind::Advance;
        spec.script.push_back(ev);
      } else if (key == "set") {
        if (tok.size() != 3) throw err("expected: set <signal> <value|global>");
        ev.kind = ScriptEvent::Kind::Set;
        ev.signal = tok[1];
        if (isdigit((unsigned char)tok[2][0])) {
          if (!parse_u64(tok[2], ev.value))
            throw err("bad constant '" + tok[2] + "'");
          ev.is_const = true;
        } else if (is_ident(tok[2])) {
          ev.global = tok[2];
        } else {
          throw err("bad set source '" + tok[2] + "'");
        }
        spec.script.push_back(ev);
      } else if (key == "probe") {
        if (tok.size() != 4)
          throw err("expected: probe <signal> <global> <label>");
        ev.kind = ScriptEvent::Kind::Probe;
        ev.signal = tok[1];
        ev.global = tok[2];
        ev.label = tok[3];
        if (!is_ident(ev.global) || !is_ident(ev.label))
          throw err("bad probe operand");
        spec.script.push_back(ev);
      } else {
        throw err("unknown script event '" + key + "'");
      }
      continue;
    }

    if (key == "miter") {
      if (tok.size() != 2 || !is_ident(tok[1])) throw err("expected: miter <name>");
      spec.name = tok[1];
    } else if (key == "input") {
      if (tok.size() != 3) throw err("expected: input <type> <name>");
      Type ty;
      if (!minic::parse_type_name(tok[1], ty))
        throw err("unknown type '" + tok[1] + "'");
      if (!is_ident(tok[2])) throw err("bad input name '" + tok[2] + "'");
      for (auto &[n, t2] : spec.inputs)
        if (n == tok[2]) throw err("duplicate input '" + tok[2] + "'");
      if (ty.is_float()) {
        if (spec.has_float_input && !(ty.fmt() == spec.fmt))
          throw err("float inputs must share one format");
        spec.fmt = ty.fmt();
        spec.has_float_input = true;
      }
      spec.inputs.emplace_back(tok[2], ty);
    } else if (key == "ref") {
      if (saw_ref) throw err("duplicate ref");
      saw_ref = true;
      if (tok.size() == 3 && tok[1] == "builtin") {
        if (!find_builtin(tok[2])) throw err("unknown builtin '" + tok[2] + "'");
        spec.ref_is_builtin = true;
        spec.ref_op = tok[2];
      } else if (tok.size() == 4 && tok[1] == "minic") {
        spec.ref_file = tok[2];
        spec.ref_fn = tok[3];
      } else {
        throw err("expected: ref builtin <op> | ref minic <file> <function>");
      }
    } else if (key == "impl") {
      if (saw_impl) throw err("duplicate impl");
      saw_impl = true;
      if (tok.size() == 4 && tok[1] == "minic") {
        spec.impl_file = tok[2];
        spec.impl_fn = tok[3];
      } else if (tok.size() == 4 && tok[1] == "rtl") {
        spec.impl_is_rtl = true;
        spec.impl_file = tok[2];
        spec.impl_module = tok[3];
      } else {
        throw err("expected: impl minic <file> <function> | impl rtl <file> <module>");
      }
    } else if (key == "rmode") {
      if (tok.size() != 2 || (tok[1] != "all" && rm_code(tok[1]) < 0))
        throw err("expected: rmode all|RNE|RU|RD|RZ");
      spec.rmode = tok[1];
    } else if (key == "partitions") {
      if (tok.size() == 1) {
        spec.partitions = kPartitions;
      } else {
        for (size_t i = 1; i < tok.size(); i++) {
          if (!is_partition(tok[i]))
            throw err("unknown partition '" + tok[i] + "'");
          spec.partitions.push_back(tok[i]);
        }
      }
    } else if (key == "engine") {
      if (tok.size() != 2 || (tok[1] != "path" && tok[1] != "monolithic"))
        throw err("expected: engine path|monolithic");
      spec.engine = tok[1] == "path" ? EngineSel::Path : EngineSel::Monolithic;
    } else if (key == "mode") {
      if (tok.size() != 2 || (tok[1] != "partial" && tok[1] != "full"))
        throw err("expected: mode partial|full");
      spec.mode = tok[1] == "partial" ? ExplorationMode::PartialIncremental
                                      : ExplorationMode::FullIncremental;
    } else if (key == "unwind") {
      uint64_t v;
      if (tok.size() != 2 || !parse_u64(tok[1], v) || v == 0 || v > 4096)
        throw err("expected: unwind <1..4096>");
      spec.unwind = (unsigned)v;
    } else if (key == "bound") {
      uint64_t v;
      if (tok.size() != 2 || !parse_u64(tok[1], v) || v > 4096)
        throw err("expected: bound <0..4096>");
      spec.bound = (unsigned)v;
    } else if (key == "script") {
      if (tok.size() != 1) throw err("script takes no arguments");
      in_script = true;
    } else {
      throw err("unknown directive '" + key + "'");
    }
  }
  if (in_script) throw HarnessError(file, ln, "script block missing end");
  if (spec.name.empty()) throw HarnessError(file + ": missing miter name");
  if (!saw_ref) throw HarnessError(file + ": missing ref");
  if (!saw_impl) throw HarnessError(file + ": missing impl");

  if (spec.ref_is_builtin) {
    const RoundedOp *op = find_builtin(spec.ref_op);
    if (op->rounded && spec.rmode.empty())
      throw HarnessError(file + ": " + spec.ref_op + " needs an rmode");
    if (!op->rounded && !spec.rmode.empty())
      throw HarnessError(file + ": " + spec.ref_op + " takes no rmode");
  }
  if (spec.impl_is_rtl) {
    if (spec.ref_is_builtin)
      throw HarnessError(file +
                         ": an RTL implementation needs a mini-C reference");
    if (spec.engine == EngineSel::Path)
      throw HarnessError(file + ": RTL miters run on the monolithic engine");
    spec.engine = EngineSel::Monolithic;
    if (!spec.rmode.empty())
      throw HarnessError(file + ": rmode applies to software miters only");
  } else {
    if (!spec.script.empty())
      throw HarnessError(file + ": script applies to RTL miters only");
    if (spec.inputs.empty())
      throw HarnessError(file + ": software miter declares no inputs");
  }
  if (!spec.partitions.empty() && !spec.has_float_input && !spec.impl_is_rtl)
    throw HarnessError(file + ": partitions need a float input");
  return spec;
}

MiterSpec load_miter_spec(const std::string &path) {
  MiterSpec spec = parse_miter_spec(read_file(path), path);
  std::string dir = dir_of(path);
  if (!spec.ref_is_builtin) spec.ref_source = read_file(dir + spec.ref_file);
  spec.impl_source = read_file(dir + spec.impl_file);
  return spec;
}

SwMiter build_sw_miter(const MiterSpec &spec, ExprArena &arena) {
  if (spec.impl_is_rtl)
    throw HarnessError(spec.file + ": not a software miter");

  bool rm_all = spec.rmode == "all";
  bool with_rm = !spec.rmode.empty();

  std::vector<Type> want;
  for (const auto &[n, t] : spec.inputs) want.push_back(t);
  if (with_rm) want.push_back(Type::ubits(8));

  minic::Ast impl_ast = minic::parse(spec.impl_source, spec.impl_file);
  const minic::AstFunc *ifn = find_fn(impl_ast, spec.impl_fn);
  if (!ifn)
    throw HarnessError(spec.impl_file + ": no function '" + spec.impl_fn + "'");
  check_signature("implementation", spec.impl_file, *ifn, want);
  Type out_t = ifn->ret;

  if (spec.ref_is_builtin) {
    const RoundedOp *op = find_builtin(spec.ref_op);
    unsigned nfloat = 0;
    for (const auto &[n, t] : spec.inputs)
      if (t.is_float()) nfloat++;
    if (spec.inputs.size() != op->arity || nfloat != op->arity)
      throw HarnessError(spec.file + ": " + spec.ref_op + " takes " +
                         std::to_string(op->arity) + " float inputs");
    if (!(out_t == Type::float_(spec.fmt)))
      throw HarnessError(spec.file + ": implementation returns " +
                         minic::type_name(out_t) + ", reference computes " +
                         minic::type_name(Type::float_(spec.fmt)));
  } else {
    minic::Ast ref_ast = minic::parse(spec.ref_source, spec.ref_file);
    const minic::AstFunc *rfn = find_fn(ref_ast, spec.ref_fn);
    if (!rfn)
      throw HarnessError(spec.ref_file + ": no function '" + spec.ref_fn + "'");
    check_signature("reference", spec.ref_file, *rfn, want);
    if (!(rfn->ret == out_t))
      throw HarnessError(spec.file + ": reference returns " +
                         minic::type_name(rfn->ret) + ", implementation " +
                         minic::type_name(out_t));
  }

  std::string args;
  for (const auto &[n, t] : spec.inputs) {
    if (!args.empty()) args += ", ";
    args += n;
  }
  std::string rm_arg =
      rm_all ? "miter_rm" : std::to_string(with_rm ? rm_code(spec.rmode) : 0);
  std::string call_args = with_rm ? args + ", " + rm_arg : args;
  std::string ot = minic::type_name(out_t);

  std::string src;
  if (!spec.ref_is_builtin) src += spec.ref_source + "\n";
  src += spec.impl_source + "\n";
  for (const auto &[n, t] : spec.inputs)
    src += minic::type_name(t) + " " + n + ";\n";
  if (rm_all) src += "u8 miter_rm;\n";
  src += "\nvoid miter_main() {\n";
  if (rm_all) src += "  assume(miter_rm < 4);\n";

  if (spec.ref_is_builtin) {
    auto call = [&](const char *mode) {
      return spec.ref_op + "(" + args + (with_rm ? std::string(", ") + mode : "") +
             ")";
    };
    if (rm_all) {
      src += "  " + ot + " miter_ref = " + call("RU") + ";\n";
      src += "  if (miter_rm == 1) { miter_ref = " + call("RD") + "; } else {\n";
      src += "  if (miter_rm == 2) { miter_ref = " + call("RZ") + "; } else {\n";
      src += "  if (miter_rm == 3) { miter_ref = " + call("RNE") + "; } } }\n";
    } else {
      src += "  " + ot + " miter_ref = " +
             call(with_rm ? spec.rmode.c_str() : "") + ";\n";
    }
  } else {
    src += "  " + ot + " miter_ref = " + spec.ref_fn + "(" + call_args + ");\n";
  }
  src += "  " + ot + " miter_impl = " + spec.impl_fn + "(" + call_args + ");\n";
  if (out_t.is_float()) {
    src += "  bool miter_same = (fp_is_nan(miter_ref) && fp_is_nan(miter_impl))"
           " || (fp_bits(miter_ref) == fp_bits(miter_impl));\n";
  } else {
    src += "  bool miter_same = miter_ref == miter_impl;\n";
  }
  src += "  assert(miter_same, \"outputs_match\");\n}\n";

  minic::Ast ast = minic::parse(src, spec.name + ".miter");
  minic::typecheck(ast);
  minic::UnwindPolicy policy;
  policy.bound = spec.unwind;

  SwMiter m;
  m.prog = minic::lower_to_goto(ast, arena, policy, "miter_main");
  m.source = src;
  m.fmt = spec.fmt;
  FloatFormat f = spec.fmt;
  m.operands = float_operands(m.prog, f);
  return m;
}

Expr partition_assumption(const std::vector<std::string> &operands,
                          FloatFormat fmt, const std::string &partition,
                          ExprArena &A) {
  if (partition == "Total") return A.tru();
  if (!is_partition(partition))
    throw HarnessError("unknown partition '" + partition + "'");
  std::vector<Expr> cs;
  for (const std::string &name : operands) {
    Expr bits = A.var(name, Type::ubits(fmt.width()));
    Expr f = A.float_of_bits(bits, fmt);
    if (partition == "INF")
      cs.push_back(A.fp_is_inf(f));
    else if (partition == "ZERO")
      cs.push_back(A.fp_is_zero(f));
    else if (partition == "NaN")
      cs.push_back(A.fp_is_nan(f));
    else if (partition == "SUBNORMAL")
      cs.push_back(A.fp_is_subnormal(f));
    else
      cs.push_back(A.fp_is_normal(f));
  }
  return A.and_all(cs);
}

std::vector<ScriptEvent> default_script(const rtl::TransitionSystem &ts,
                                        const GotoProgram &sw, unsigned bound) {
  std::unordered_set<std::string> globals(sw.global_names.begin(),
                                          sw.global_names.end());
  std::vector<ScriptEvent> script;
  for (unsigned k = 0; k <= bound; k++) {
    std::string suffix = "_f" + std::to_string(k);
    for (const rtl::Port &p : ts.inputs) {
      ScriptEvent ev;
      ev.kind = ScriptEvent::Kind::Set;
      ev.signal = p.name;
      ev.global = p.name + suffix;
      if (!globals.count(ev.global))
        throw HarnessError("default script: software model has no global '" +
                           ev.global + "' for input port '" + p.name + "'");
      script.push_back(ev);
    }
    for (const rtl::Port &p : ts.ports) {
      if (p.is_input) continue;
      std::string g = p.name + suffix;
      if (!globals.count(g)) continue;
      ScriptEvent ev;
      ev.kind = ScriptEvent::Kind::Probe;
      ev.signal = p.name;
      ev.global = g;
      ev.label = g;
      script.push_back(ev);
    }
    if (k < bound) {
      ScriptEvent ev;
      ev.kind = ScriptEvent::Kind::Advance;
      script.push_back(ev);
    }
  }
  return script;
}

HwMiter build_hw_miter(const MiterSpec &spec, ExprArena &arena) {
  if (!spec.impl_is_rtl)
    throw HarnessError(spec.file + ": not an RTL miter");

  rtl::RtlModule mod = rtl::parse_rtl(spec.impl_source, spec.impl_file, arena);
  if (mod.name != spec.impl_module)
    throw HarnessError(spec.file + ": no module '" + spec.impl_module +
                       "' in " + spec.impl_file + " (found '" + mod.name +
                       "')");

  HwMiter m;
  m.ts = rtl::elaborate(mod, arena);
  m.bound = spec.bound;

  minic::Ast ast = minic::parse(spec.ref_source, spec.ref_file);
  minic::typecheck(ast);
  minic::UnwindPolicy policy;
  policy.bound = spec.unwind;
  m.sw = minic::lower_to_goto(ast, arena, policy, spec.ref_fn);
  m.fmt = FloatFormat::binary32();
  m.operands = float_operands(m.sw, m.fmt);

  m.ssa = to_ssa(m.sw, arena);
  rtl::UnrolledRtl un = rtl::unroll(m.ts, m.bound, arena);
  for (const SsaDef &d : un.defs) m.ssa.defs.push_back(d);

  m.script =
      spec.script.empty() ? default_script(m.ts, m.sw, m.bound) : spec.script;

  auto final_of = [&](const std::string &g, unsigned line) {
    auto it = m.ssa.finals.find(g);
    if (it == m.ssa.finals.end())
      throw HarnessError(spec.file, line,
                         "software model has no global '" + g + "'");
    return it->second;
  };

  std::unordered_set<std::string> set_here;
  std::vector<std::unordered_set<std::string>> set_at(m.bound + 1);
  unsigned frame = 0;
  for (const ScriptEvent &ev : m.script) {
    switch (ev.kind) {
    case ScriptEvent::Kind::Advance: {
      frame++;
      if (frame > m.bound)
        throw HarnessError(spec.file, ev.line,
                           "script advances past bound " +
                               std::to_string(m.bound));
      set_here.clear();
      break;
    }
    case ScriptEvent::Kind::Set: {
      bool is_input = false;
      unsigned w = 0;
      for (const rtl::Port &p : m.ts.inputs)
        if (p.name == ev.signal) {
          is_input = true;
          w = p.width;
        }
      if (!is_input)
        throw HarnessError(spec.file, ev.line,
                           "'" + ev.signal + "' is not an input port");
      if (!set_here.insert(ev.signal).second)
        throw HarnessError(spec.file, ev.line, "'" + ev.signal +
                                                   "' set twice in frame " +
                                                   std::to_string(frame));
      set_at[frame].insert(ev.signal);
      Expr lhs = rtl::frame_var(m.ts, ev.signal, frame, arena);
      Expr rhs;
      if (ev.is_const) {
        if (w < 64 && ev.value >> w)
          throw HarnessError(spec.file, ev.line,
                             "constant does not fit " + std::to_string(w) +
                                 " bits");
        rhs = arena.constant(Type::ubits(w), ev.value);
      } else {
        rhs = adapt_to_width(arena, final_of(ev.global, ev.line), w,
                             "set " + ev.signal, ev.line, spec.file);
      }
      m.ssa.defs.push_back({lhs, rhs});
      break;
    }
    case ScriptEvent::Kind::Probe: {
      Expr sig;
      try {
        sig = rtl::frame_var(m.ts, ev.signal, frame, arena);
      } catch (const std::invalid_argument &) {
        throw HarnessError(spec.file, ev.line,
                           "unknown RTL signal '" + ev.signal + "'");
      }
      Expr want = adapt_to_width(arena, final_of(ev.global, ev.line),
                                 m.ts.width_of(ev.signal),
                                 "probe " + ev.signal, ev.line, spec.file);
      SsaAssert a;
      a.label = ev.label;
      a.guard = arena.tru();
      a.cond = arena.eq(sig, want);
      m.ssa.asserts.push_back(a);
      break;
    }
    }
  }

  for (unsigned k = 0; k <= m.bound; k++)
    for (const rtl::Port &p : m.ts.inputs)
      if (!set_at[k].count(p.name))
        throw HarnessError(spec.file + ": input port '" + p.name +
                           "' is unbound at frame " + std::to_string(k));

  bool any_probe = false;
  for (const ScriptEvent &ev : m.script)
    if (ev.kind == ScriptEvent::Kind::Probe) any_probe = true;
  if (!any_probe)
    throw HarnessError(spec.file + ": script probes nothing");

  m.formula = encode_monolithic(m.ssa, arena);
  return m;
}

HwCheckResult check_hw_miter(const HwMiter &m, ExprArena &A,
                             const BmcOptions &opts) {
  std::unordered_map<std::string, Expr> v1;
  for (const auto &[base, var] : m.ssa.initial) v1.emplace(base, var);

  Solver S;
  S.set_conflict_budget(opts.conflict_budget);
  BitBlaster bb(A, S);
  FpLowerer fl(A);

  bb.assert_true(fl.lower(m.formula.constraints));
  for (Expr a : opts.assumptions)
    bb.assert_true(fl.lower(subst_vars(A, a, v1)));

  std::vector<std::pair<Expr, Expr>> input_vars;
  for (Expr in : m.sw.inputs) {
    Expr iv = v1.at(in.var_name());
    if (iv.type().is_bool())
      (void)bb.literal(iv);
    else
      (void)bb.bits(iv);
    input_vars.emplace_back(in, iv);
  }

  // Every RTL signal instance gets literals so a model covers the
  // full trace.
  std::vector<std::pair<std::string, unsigned>> signals;
  for (const rtl::Port &p : m.ts.inputs) signals.emplace_back(p.name, p.width);
  for (const auto &[n, w] : m.ts.state) signals.emplace_back(n, w);
  for (const auto &[n, w] : m.ts.wires) signals.emplace_back(n, w);
  for (const auto &[n, w] : signals)
    for (unsigned k = 0; k <= m.bound; k++)
      (void)bb.bits(rtl::frame_var(m.ts, n, k, A));

  HwCheckResult out;
  out.stats.solver_instances = 1;
  for (const SsaAssert &a : m.formula.asserts) {
    if (opts.only_label && a.label != *opts.only_label) continue;
    AssertResult r;
    r.label = a.label;
    Expr q = fl.lower(A.and_(a.guard, A.not_(a.cond)));
    LBool res = S.solve({bb.literal(q)});
    out.stats.sat_queries++;
    if (res == LBool::False) {
      r.status = CheckStatus::Holds;
    } else if (res == LBool::True) {
      r.status = CheckStatus::Violated;
      for (auto &[gv, iv] : input_vars)
        r.cex[gv.var_name()] = iv.type().is_bool()
                                   ? (bb.model_bool(S, iv) ? 1 : 0)
                                   : bb.model_bits(S, iv);
      if (!out.trace) {
        HwTrace tr;
        tr.bound = m.bound;
        for (const auto &[n, w] : signals) {
          VcdVar v;
          v.name = n;
          v.width = w;
          for (unsigned k = 0; k <= m.bound; k++)
            v.frames.push_back(bb.model_bits(S, rtl::frame_var(m.ts, n, k, A)));
          tr.signals.push_back(std::move(v));
        }

        std::vector<std::unordered_map<std::string, uint64_t>> ins(m.bound + 1);
        std::unordered_map<std::string, uint64_t> init;
        for (const VcdVar &v : tr.signals) {
          bool is_in = false;
          for (const rtl::Port &p : m.ts.inputs)
            if (p.name == v.name) is_in = true;
          bool is_reg = m.ts.next.count(v.name) != 0;
          if (is_in)
            for (unsigned k = 0; k <= m.bound; k++) ins[k][v.name] = v.frames[k];
          if (is_reg) init[v.name] = v.frames[0];
        }
        auto sim = rtl::simulate(m.ts, ins, init);
        for (const VcdVar &v : tr.signals)
          for (unsigned k = 0; k <= m.bound; k++)
            if (sim[k].at(v.name) != v.frames[k])
              throw HarnessError(
                  "hardware counterexample replay diverged at frame " +
                  std::to_string(k) + ", signal '" + v.name + "'");
        out.trace = std::move(tr);
      }
    } else {
      r.status = CheckStatus::Unknown;
    }
    out.asserts.push_back(std::move(r));
  }
  out.stats.decisions = S.stats().decisions;
  out.stats.conflicts = S.stats().conflicts;
  return out;
}

namespace {

// Aggregates per-assert results into one cell verdict.
Verdict aggregate(const std::vector<AssertResult> &rs) {
  Verdict v;
  v.status = CheckStatus::Holds;
  for (const AssertResult &r : rs) {
    v.status = worst(v.status, r.status);
    if (r.status == CheckStatus::Violated && !v.cex) {
      Counterexample c;
      c.label = r.label;
      c.inputs = r.cex;
      v.cex = std::move(c);
    }
  }
  return v;
}

void replay_sw_cex(const GotoProgram &p, const Counterexample &cex) {
  GotoRun run = run_goto(p, cex.inputs);
  for (const std::string &l : run.violated)
    if (l == cex.label) return;
  throw HarnessError("counterexample replay diverged: '" + cex.label +
                     "' not violated by concrete execution");
}

} // namespace

VerdictTable run_partitions(const MiterSpec &spec, ExprArena &arena,
                            const RunOptions &opts) {
  EngineSel engine = opts.engine.value_or(spec.engine);
  ExplorationMode mode = opts.mode.value_or(spec.mode);

  VerdictTable table;
  table.design = spec.name;
  if (opts.partition.empty()) {
    table.columns = spec.partitions;
    table.columns.push_back("Total");
  } else if (opts.partition == "all") {
    table.columns = kPartitions;
    table.columns.push_back("Total");
  } else {
    if (opts.partition != "Total" && !is_partition(opts.partition))
      throw HarnessError("unknown partition '" + opts.partition + "'");
    table.columns = {opts.partition};
  }

  std::optional<SwMiter> sw;
  std::optional<HwMiter> hw;
  if (spec.impl_is_rtl)
    hw = build_hw_miter(spec, arena);
  else
    sw = build_sw_miter(spec, arena);

  const std::vector<std::string> &operands =
      hw ? hw->operands : sw->operands;
  FloatFormat fmt = hw ? hw->fmt : sw->fmt;

  bool needs_float = false;
  for (const std::string &c : table.columns)
    if (c != "Total") needs_float = true;
  if (needs_float && operands.empty())
    throw HarnessError(spec.name + ": partitions need a float input");

  for (const std::string &col : table.columns) {
    Expr assume = partition_assumption(operands, fmt, col, arena);
    std::vector<Expr> assumptions;
    if (!assume.is_true()) assumptions.push_back(assume);

    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    if (hw) {
      BmcOptions bo;
      bo.assumptions = assumptions;
      bo.conflict_budget = opts.conflict_budget;
      HwCheckResult r = check_hw_miter(*hw, arena, bo);
      v = aggregate(r.asserts);
      v.stats = r.stats;
      v.trace = std::move(r.trace);
    } else if (engine == EngineSel::Monolithic) {
      BmcOptions bo;
      bo.assumptions = assumptions;
      bo.conflict_budget = opts.conflict_budget;
      std::vector<AssertResult> rs = bmc_check(sw->prog, arena, bo);
      v = aggregate(rs);
      v.stats.solver_instances = 1;
      v.stats.sat_queries = rs.size();
      if (v.cex) replay_sw_cex(sw->prog, *v.cex);
    } else {
      ExploreOptions eo;
      eo.assumptions = assumptions;
      eo.conflict_budget = opts.conflict_budget;
      eo.time_budget_seconds = opts.time_budget_seconds;
      ExploreResult r = explore(sw->prog, arena, mode, eo);
      v.status = r.status;
      v.stats = r.stats;
      v.paths = r.stats.paths_explored;
      v.cex = r.cex;
      if (v.cex) replay_sw_cex(sw->prog, *v.cex);
    }
    auto t1 = std::chrono::steady_clock::now();
    v.time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    table.cells.push_back(std::move(v));
  }
  return table;
}

std::string render_table(const VerdictTable &t) {
  std::string out = "miter " + t.design + "\n";
  char buf[160];
  snprintf(buf, sizeof(buf), "  %-12s %-10s %10s %12s\n", "partition",
           "verdict", "paths", "time");
  out += buf;
  for (size_t i = 0; i < t.columns.size(); i++) {
    const Verdict &v = t.cells[i];
    char tm[32];
    snprintf(tm, sizeof(tm), "%.1fms", v.time_ms);
    snprintf(buf, sizeof(buf), "  %-12s %-10s %10llu %12s\n",
             t.columns[i].c_str(), status_name(v.status),
             (unsigned long long)v.paths, tm);
    out += buf;
    if (v.cex) {
      out += "    violated: " + v.cex->label + "\n";
      std::vector<std::string> names;
      for (const auto &[n, val] : v.cex->inputs) names.push_back(n);
      std::sort(names.begin(), names.end());
      for (const std::string &n : names) {
        snprintf(buf, sizeof(buf), "    %s = 0x%llx\n", n.c_str(),
                 (unsigned long long)v.cex->inputs.at(n));
        out += buf;
      }
    }
  }
  return out;
}

std::string machine_rows(const VerdictTable &t) {
  std::string out;
  char buf[256];
  for (size_t i = 0; i < t.columns.size(); i++) {
    const Verdict &v = t.cells[i];
    snprintf(buf, sizeof(buf), "%s,%s,%s,%llu,%.1f\n", t.design.c_str(),
             t.columns[i].c_str(), status_name(v.status),
             (unsigned long long)v.paths, v.time_ms);
    out += buf;
  }
  return out;
}

std::vector<VcdVar> cex_frame(const SwMiter &m, const Counterexample &cex) {
  std::vector<VcdVar> vars;
  for (Expr in : m.prog.inputs) {
    VcdVar v;
    v.name = in.var_name();
    v.width = in.type().is_bool() ? 1 : in.type().width();
    auto it = cex.inputs.find(v.name);
    v.frames.push_back(it != cex.inputs.end() ? it->second : 0);
    vars.push_back(std::move(v));
  }
  return vars;
}

} // namespace eqc::harness
