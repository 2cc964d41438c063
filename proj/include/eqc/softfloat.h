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

#ifndef EQC_SOFTFLOAT_H
#define EQC_SOFTFLOAT_H

#include "eqc/expr.h"

namespace eqc {
namespace fp {

// NaN results are canonical quiet NaNs by default. With propagation
// enabled, results additionally carry the classic payload constant,
// positioned against a 23-bit fraction and rescaled per format.
struct NanPolicy {
  bool propagate_payload = false;
  uint32_t payload = 0x00080000;
};

// fp_add exists in two internal organizations that must agree bit for
// bit: the dual-path form (near path for effective subtraction with
// exponent distance at most 1, far path otherwise) and the plain
// single-path form.
enum class AddImpl : uint8_t { DualPath, SinglePath };

// encodings
uint64_t zero_bits(FloatFormat f, bool sign);
uint64_t inf_bits(FloatFormat f, bool sign);
uint64_t qnan_bits(FloatFormat f, const NanPolicy &np = {});
uint64_t max_finite_bits(FloatFormat f, bool sign);
uint64_t min_subnormal_bits(FloatFormat f, bool sign);
uint64_t one_bits(FloatFormat f, bool sign);

// predicates and classification
bool is_nan(FloatFormat f, uint64_t a);
bool is_inf(FloatFormat f, uint64_t a);
bool is_zero(FloatFormat f, uint64_t a);
bool is_subnormal(FloatFormat f, uint64_t a);
bool is_normal(FloatFormat f, uint64_t a);
FpClass classify(FloatFormat f, uint64_t a);

// NaN -> canonical quiet NaN, all else unchanged
uint64_t canonicalize(FloatFormat f, uint64_t a, const NanPolicy &np = {});

// IEEE comparisons: NaN compares false, +0 equals -0
bool ieee_eq(FloatFormat f, uint64_t a, uint64_t b);
bool ieee_lt(FloatFormat f, uint64_t a, uint64_t b);
bool ieee_le(FloatFormat f, uint64_t a, uint64_t b);

// arithmetic reference model (concrete)
uint64_t add(FloatFormat f, uint64_t a, uint64_t b, RoundingMode rm,
             const NanPolicy &np = {}, AddImpl impl = AddImpl::DualPath);
uint64_t sub(FloatFormat f, uint64_t a, uint64_t b, RoundingMode rm,
             const NanPolicy &np = {}, AddImpl impl = AddImpl::DualPath);
uint64_t mul(FloatFormat f, uint64_t a, uint64_t b, RoundingMode rm,
             const NanPolicy &np = {});
uint64_t div(FloatFormat f, uint64_t a, uint64_t b, RoundingMode rm,
             const NanPolicy &np = {});
uint64_t min(FloatFormat f, uint64_t a, uint64_t b, const NanPolicy &np = {});
uint64_t max(FloatFormat f, uint64_t a, uint64_t b, const NanPolicy &np = {});
uint64_t round_to_integral(FloatFormat f, uint64_t a, RoundingMode rm,
                           const NanPolicy &np = {});

// The same model emitted as a symbolic circuit: operands and results
// are bitvector expressions of the format's width, rm a 2-bit vector.
Expr emit_add(ExprArena &A, FloatFormat f, Expr a, Expr b, Expr rm,
              bool subtract = false, AddImpl impl = AddImpl::DualPath,
              const NanPolicy &np = {});
Expr emit_mul(ExprArena &A, FloatFormat f, Expr a, Expr b, Expr rm,
              const NanPolicy &np = {});
Expr emit_div(ExprArena &A, FloatFormat f, Expr a, Expr b, Expr rm,
              const NanPolicy &np = {});
Expr emit_min(ExprArena &A, FloatFormat f, Expr a, Expr b,
              const NanPolicy &np = {});
Expr emit_max(ExprArena &A, FloatFormat f, Expr a, Expr b,
              const NanPolicy &np = {});
Expr emit_round(ExprArena &A, FloatFormat f, Expr a, Expr rm,
                const NanPolicy &np = {});
Expr emit_classify(ExprArena &A, FloatFormat f, Expr a); // ubits(4) code
Expr emit_is_nan(ExprArena &A, FloatFormat f, Expr a);
Expr emit_is_inf(ExprArena &A, FloatFormat f, Expr a);
Expr emit_is_zero(ExprArena &A, FloatFormat f, Expr a);
Expr emit_is_subnormal(ExprArena &A, FloatFormat f, Expr a);
Expr emit_is_normal(ExprArena &A, FloatFormat f, Expr a);
Expr emit_ieee_eq(ExprArena &A, FloatFormat f, Expr a, Expr b);
Expr emit_ieee_lt(ExprArena &A, FloatFormat f, Expr a, Expr b);
Expr emit_ieee_le(ExprArena &A, FloatFormat f, Expr a, Expr b);

} // namespace fp
} // namespace eqc

#endif
