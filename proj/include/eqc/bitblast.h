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

#ifndef EQC_BITBLAST_H
#define EQC_BITBLAST_H

#include <unordered_map>
#include <vector>

#include "eqc/expr.h"
#include "eqc/solver.h"

namespace eqc {

// Tseitin encoder from (float-free) expressions to CNF. Definitional
// clauses are emitted exactly once per expression node and are never
// retracted; retractable facts must go through implied_by so that the
// cached encodings stay valid when a guard is dropped.
class BitBlaster {
public:
  BitBlaster(ExprArena &arena, CnfSink &sink) : arena_(arena), sink_(sink) {}

  // literal whose truth equals the bool expression
  int literal(Expr e);
  // literals of a bitvector expression, LSB first
  const std::vector<int> &bits(Expr e);

  // permanent fact: e holds
  void assert_true(Expr e) { sink_.add_clause({literal(e)}); }
  // retractable fact: guard -> e, switched off by asserting -guard
  void implied_by(int guard, Expr e) { sink_.add_clause({-guard, literal(e)}); }

  int fresh_lit() { return sink_.new_var(); }
  int true_lit();

  // model readback through the cached encodings
  bool model_bool(const Solver &s, Expr e);
  uint64_t model_bits(const Solver &s, Expr e);

private:
  int mk_and(int a, int b);
  int mk_or(int a, int b);
  int mk_xor(int a, int b);
  int mk_xor3(int a, int b, int c);
  int mk_maj(int a, int b, int c);
  int mk_mux(int c, int a, int b);
  int mk_and_many(std::vector<int> ls);
  int mk_or_many(std::vector<int> ls);

  void full_adder(int a, int b, int cin, int &sum, int &cout);
  std::vector<int> add_bits(const std::vector<int> &a,
                            const std::vector<int> &b, int cin);
  std::vector<int> mux_bits(int c, const std::vector<int> &a,
                            const std::vector<int> &b);
  int ult_bits(const std::vector<int> &a, const std::vector<int> &b);
  std::vector<int> shift_bits(const std::vector<int> &a,
                              const std::vector<int> &amt, bool left,
                              int fill);
  void divmod_bits(const std::vector<int> &a, const std::vector<int> &b,
                   std::vector<int> &quo, std::vector<int> &rem);

  int encode_bool(Expr e);
  std::vector<int> encode_bits(Expr e);

  ExprArena &arena_;
  CnfSink &sink_;
  int true_lit_ = 0;
  std::unordered_map<const ExprNode *, int> bool_cache_;
  std::unordered_map<const ExprNode *, std::vector<int>> bits_cache_;
};

} // namespace eqc

#endif
