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

#ifndef EQC_FP_LOWER_H
#define EQC_FP_LOWER_H

#include <unordered_map>

#include "eqc/expr.h"
#include "eqc/softfloat.h"

namespace eqc {

struct FpLowerOpts {
  fp::NanPolicy nan_policy;
  fp::AddImpl add_impl = fp::AddImpl::DualPath;
};

// Rewrites every floating-point operation in e into the equivalent
// bitvector circuit, so the result can be bit-blasted. Float-typed
// variables become fresh bitvector variables of the encoding width;
// var_map (if given) records original-var -> replacement-var.
class FpLowerer {
public:
  FpLowerer(ExprArena &arena, FpLowerOpts opts = {})
      : arena_(arena), opts_(opts) {}

  Expr lower(Expr e);

  const std::unordered_map<const ExprNode *, Expr> &var_map() const {
    return var_map_;
  }

private:
  Expr lower_bits_of_float(Expr fe);
  Expr lower_bits_uncached(Expr fe);

  ExprArena &arena_;
  FpLowerOpts opts_;
  std::unordered_map<const ExprNode *, Expr> memo_;
  std::unordered_map<const ExprNode *, Expr> fmemo_;
  std::unordered_map<const ExprNode *, Expr> var_map_;
};

inline Expr fp_lower(ExprArena &arena, Expr e, FpLowerOpts opts = {}) {
  FpLowerer l(arena, opts);
  return l.lower(e);
}

} // namespace eqc

#endif
