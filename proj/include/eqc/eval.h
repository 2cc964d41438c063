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

#ifndef EQC_EVAL_H
#define EQC_EVAL_H

#include <unordered_map>

#include "eqc/expr.h"

namespace eqc {

// Concrete interpretation. Every value is a bit pattern: bools are 0/1,
// bitvectors are zero-extended to 64 bits, floats are their encodings.
class Env {
public:
  void set(Expr var, uint64_t value) {
    values_[var.get()] = var.type().is_bool() ? (value ? 1 : 0)
                                              : truncate_to_width(
                                                    value, var.type().width());
  }
  bool has(Expr var) const { return values_.count(var.get()) != 0; }
  uint64_t get(Expr var) const;
  void clear() { values_.clear(); }

private:
  std::unordered_map<const ExprNode *, uint64_t> values_;
};

// Evaluates e under env; unbound variables raise. A fresh memo table is
// used per call, so repeated calls stay linear in shared structure.
uint64_t eval(Expr e, const Env &env);

} // namespace eqc

#endif
