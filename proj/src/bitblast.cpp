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

#include "eqc/bitblast.h"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace eqc {

int BitBlaster::true_lit() {
  if (true_lit_ == 0) {
    true_lit_ = sink_.new_var();
    sink_.add_clause({true_lit_});
  }
  return true_lit_;
}

// -------- gate constructors --------

int BitBlaster::mk_and(int a, int b) {
  int T = true_lit();
  if (a == -T || b == -T) return -T;
  if (a == T) return b;
  if (b == T) return a;
  if (a == b) return a;
  if (a == -b) return -T;
  int z = fresh_lit();
  sink_.add_clause({-z, a});
  sink_.add_clause({-z, b});
  sink_.add_clause({z, -a, -b});
  return z;
}

int BitBlaster::mk_or(int a, int b) { return -mk_and(-a, -b); }

int BitBlaster::mk_xor(int a, int b) {
  int T = true_lit();
  if (a == T) return -b;
  if (a == -T) return b;
  if (b == T) return -a;
  if (b == -T) return a;
  if (a == b) return -T;
  if (a == -b) return T;
  int z = fresh_lit();
  sink_.add_clause({-z, a, b});
  sink_.add_clause({-z, -a, -b});
  sink_.add_clause({z, -a, b});
  sink_.add_clause({z, a, -b});
  return z;
}

int BitBlaster::mk_xor3(int a, int b, int c) {
  int T = true_lit();
  if (a == T || a == -T || b == T || b == -T || c == T || c == -T ||
      a == b || a == -b || a == c || a == -c || b == c || b == -c)
    return mk_xor(mk_xor(a, b), c);
  int z = fresh_lit();
  sink_.add_clause({z, a, b, -c});
  sink_.add_clause({z, a, -b, c});
  sink_.add_clause({z, -a, b, c});
  sink_.add_clause({z, -a, -b, -c});
  sink_.add_clause({-z, a, b, c});
  sink_.add_clause({-z, a, -b, -c});
  sink_.add_clause({-z, -a, b, -c});
  sink_.add_clause({-z, -a, -b, c});
  return z;
}

int BitBlaster::mk_maj(int a, int b, int c) {
  int T = true_lit();
  if (a == T) return mk_or(b, c);
  if (a == -T) return mk_and(b, c);
  if (b == T) return mk_or(a, c);
  if (b == -T) return mk_and(a, c);
  if (c == T) return mk_or(a, b);
  if (c == -T) return mk_and(a, b);
  if (a == b) return a;
  if (a == c) return a;
  if (b == c) return b;
  if (a == -b) return c;
  if (a == -c) return b;
  if (b == -c) return a;
  int z = fresh_lit();
  sink_.add_clause({-z, a, b});
  sink_.add_clause({-z, a, c});
  sink_.add_clause({-z, b, c});
  sink_.add_clause({z, -a, -b});
  sink_.add_clause({z, -a, -c});
  sink_.add_clause({z, -b, -c});
  return z;
}

int BitBlaster::mk_mux(int c, int a, int b) {
  int T = true_lit();
  if (c == T) return a;
  if (c == -T) return b;
  if (a == b) return a;
  if (a == T && b == -T) return c;
  if (a == -T && b == T) return -c;
  if (b == -T) return mk_and(c, a);
  if (b == T) return mk_or(-c, a);
  if (a == -T) return mk_and(-c, b);
  if (a == T) return mk_or(c, b);
  int z = fresh_lit();
  sink_.add_clause({-z, -c, a});
  sink_.add_clause({-z, c, b});
  sink_.add_clause({z, -c, -a});
  sink_.add_clause({z, c, -b});
  sink_.add_clause({z, -a, -b});
  sink_.add_clause({-z, a, b});
  return z;
}

int BitBlaster::mk_and_many(std::vector<int> ls) {
  int T = true_lit();
  size_t j = 0;
  for (int l : ls) {
    if (l == -T) return -T;
    if (l != T) ls[j++] = l;
  }
  ls.resize(j);
  if (ls.empty()) return T;
  if (ls.size() == 1) return ls[0];
  if (ls.size() == 2) return mk_and(ls[0], ls[1]);
  int z = fresh_lit();
  std::vector<int> big;
  big.push_back(z);
  for (int l : ls) {
    sink_.add_clause({-z, l});
    big.push_back(-l);
  }
  sink_.add_clause(big);
  return z;
}

int BitBlaster::mk_or_many(std::vector<int> ls) {
  for (int &l : ls) l = -l;
  return -mk_and_many(std::move(ls));
}

// -------- word-level helpers --------

void BitBlaster::full_adder(int a, int b, int cin, int &sum, int &cout) {
  sum = mk_xor3(a, b, cin);
  cout = mk_maj(a, b, cin);
}

std::vector<int> BitBlaster::add_bits(const std::vector<int> &a,
                                      const std::vector<int> &b, int cin) {
  assert(a.size() == b.size());
  std::vector<int> out(a.size());
  int carry = cin;
  for (size_t i = 0; i < a.size(); i++) {
    int s, c;
    full_adder(a[i], b[i], carry, s, c);
    out[i] = s;
    carry = c;
  }
  return out;
}

std::vector<int> BitBlaster::mux_bits(int c, const std::vector<int> &a,
                                      const std::vector<int> &b) {
  assert(a.size() == b.size());
  std::vector<int> out(a.size());
  for (size_t i = 0; i < a.size(); i++) out[i] = mk_mux(c, a[i], b[i]);
  return out;
}

int BitBlaster::ult_bits(const std::vector<int> &a, const std::vector<int> &b) {
  int T = true_lit();
  int borrow = -T;
  for (size_t i = 0; i < a.size(); i++)
    borrow = mk_mux(mk_xor(a[i], b[i]), b[i], borrow);
  return borrow;
}

// barrel shifter; amounts at or above the width produce pure fill
std::vector<int> BitBlaster::shift_bits(const std::vector<int> &a,
                                        const std::vector<int> &amt, bool left,
                                        int fill) {
  int T = true_lit();
  unsigned w = (unsigned)a.size();
  unsigned stages = 0;
  while ((1u << stages) < w) stages++;

  std::vector<int> cur = a;
  for (unsigned k = 0; k < stages && k < amt.size(); k++) {
    unsigned sh = 1u << k;
    std::vector<int> shifted(w);
    for (unsigned i = 0; i < w; i++) {
      if (left)
        shifted[i] = i >= sh ? cur[i - sh] : fill;
      else
        shifted[i] = i + sh < w ? cur[i + sh] : fill;
    }
    cur = mux_bits(amt[k], shifted, cur);
  }
  // any amount at or above the width overrides with fill; compare at a
  // width large enough for both the amount and the width constant
  unsigned wbits = 1;
  while ((1ull << wbits) <= w) wbits++;
  size_t cw = std::max<size_t>(amt.size(), wbits);
  std::vector<int> av = amt, wv(cw);
  av.resize(cw, -T);
  for (size_t i = 0; i < cw; i++) wv[i] = (w >> i) & 1 ? T : -T;
  int overshoot = -ult_bits(av, wv);
  if (overshoot != -T) {
    std::vector<int> fills(w, fill);
    cur = mux_bits(overshoot, fills, cur);
  }
  return cur;
}

// restoring divider; a zero divisor yields an all-ones quotient and
// the dividend as remainder
void BitBlaster::divmod_bits(const std::vector<int> &a,
                             const std::vector<int> &b, std::vector<int> &quo,
                             std::vector<int> &rem) {
  int T = true_lit();
  unsigned w = (unsigned)a.size();
  std::vector<int> r(w, -T);
  quo.assign(w, -T);
  for (int i = (int)w - 1; i >= 0; i--) {
    // r = (r << 1) | a[i]
    for (int j = (int)w - 1; j > 0; j--) r[j] = r[j - 1];
    r[0] = a[i];
    // subtract if r >= b
    int ge = -ult_bits(r, b);
    std::vector<int> nb(w);
    for (unsigned j = 0; j < w; j++) nb[j] = -b[j];
    std::vector<int> diff = add_bits(r, nb, T);
    r = mux_bits(ge, diff, r);
    quo[i] = ge;
  }
  rem = r;
}

// -------- expression encoding --------

int BitBlaster::literal(Expr e) {
  assert(e.type().is_bool());
  auto it = bool_cache_.find(e.get());
  if (it != bool_cache_.end()) return it->second;
  int l = encode_bool(e);
  bool_cache_.emplace(e.get(), l);
  return l;
}

const std::vector<int> &BitBlaster::bits(Expr e) {
  assert(e.type().is_bits());
  auto it = bits_cache_.find(e.get());
  if (it != bits_cache_.end()) return it->second;
  std::vector<int> ls = encode_bits(e);
  assert(ls.size() == e.type().width());
  return bits_cache_.emplace(e.get(), std::move(ls)).first->second;
}

int BitBlaster::encode_bool(Expr e) {
  switch (e.op()) {
  case Op::Const:
    return e.const_value() ? true_lit() : -true_lit();
  case Op::Var:
    return fresh_lit();
  case Op::Not:
    return -literal(e.kid(0));
  case Op::And:
    return mk_and(literal(e.kid(0)), literal(e.kid(1)));
  case Op::Or:
    return mk_or(literal(e.kid(0)), literal(e.kid(1)));
  case Op::Xor:
    return mk_xor(literal(e.kid(0)), literal(e.kid(1)));
  case Op::Ite:
    return mk_mux(literal(e.kid(0)), literal(e.kid(1)), literal(e.kid(2)));
  case Op::Eq: {
    Expr a = e.kid(0), b = e.kid(1);
    if (a.type().is_bool()) return -mk_xor(literal(a), literal(b));
    const std::vector<int> &x = bits(a);
    const std::vector<int> &y = bits(b);
    std::vector<int> eqs(x.size());
    for (size_t i = 0; i < x.size(); i++) eqs[i] = -mk_xor(x[i], y[i]);
    return mk_and_many(std::move(eqs));
  }
  case Op::Ult:
    return ult_bits(bits(e.kid(0)), bits(e.kid(1)));
  case Op::Ule:
    return -ult_bits(bits(e.kid(1)), bits(e.kid(0)));
  case Op::Slt:
  case Op::Sle: {
    std::vector<int> x = bits(e.kid(0));
    std::vector<int> y = bits(e.kid(1));
    x.back() = -x.back();
    y.back() = -y.back();
    return e.op() == Op::Slt ? ult_bits(x, y) : -ult_bits(y, x);
  }
  default:
    throw std::logic_error("bitblast: unsupported bool op " +
                           std::string(op_name(e.op())));
  }
}

std::vector<int> BitBlaster::encode_bits(Expr e) {
  int T_lazy = 0;
  auto T = [&]() { return T_lazy ? T_lazy : (T_lazy = true_lit()); };
  unsigned w = e.type().width();
  switch (e.op()) {
  case Op::Const: {
    std::vector<int> out(w);
    for (unsigned i = 0; i < w; i++)
      out[i] = (e.const_value() >> i) & 1 ? T() : -T();
    return out;
  }
  case Op::Var: {
    std::vector<int> out(w);
    for (unsigned i = 0; i < w; i++) out[i] = fresh_lit();
    return out;
  }
  case Op::Ite:
    return mux_bits(literal(e.kid(0)), bits(e.kid(1)), bits(e.kid(2)));
  case Op::BitNot: {
    std::vector<int> out = bits(e.kid(0));
    for (int &l : out) l = -l;
    return out;
  }
  case Op::BitAnd:
  case Op::BitOr:
  case Op::BitXor: {
    const std::vector<int> &a = bits(e.kid(0));
    const std::vector<int> &b = bits(e.kid(1));
    std::vector<int> out(w);
    for (unsigned i = 0; i < w; i++)
      out[i] = e.op() == Op::BitAnd  ? mk_and(a[i], b[i])
               : e.op() == Op::BitOr ? mk_or(a[i], b[i])
                                     : mk_xor(a[i], b[i]);
    return out;
  }
  case Op::Neg: {
    std::vector<int> nb = bits(e.kid(0));
    for (int &l : nb) l = -l;
    std::vector<int> zero(w, -T());
    return add_bits(zero, nb, T());
  }
  case Op::Add:
    return add_bits(bits(e.kid(0)), bits(e.kid(1)), -T());
  case Op::Sub: {
    std::vector<int> nb = bits(e.kid(1));
    for (int &l : nb) l = -l;
    return add_bits(bits(e.kid(0)), nb, T());
  }
  case Op::Mul: {
    const std::vector<int> &a = bits(e.kid(0));
    const std::vector<int> &b = bits(e.kid(1));
    std::vector<int> acc(w, -T());
    for (unsigned i = 0; i < w; i++) {
      // partial product (a << i) masked by b[i]
      std::vector<int> pp(w, -T());
      bool all_false = true;
      for (unsigned j = i; j < w; j++) {
        pp[j] = mk_and(a[j - i], b[i]);
        if (pp[j] != -T()) all_false = false;
      }
      if (!all_false) acc = add_bits(acc, pp, -T());
    }
    return acc;
  }
  case Op::UDiv:
  case Op::URem: {
    std::vector<int> q, r;
    divmod_bits(bits(e.kid(0)), bits(e.kid(1)), q, r);
    return e.op() == Op::UDiv ? q : r;
  }
  case Op::Shl:
    return shift_bits(bits(e.kid(0)), bits(e.kid(1)), true, -T());
  case Op::LShr:
    return shift_bits(bits(e.kid(0)), bits(e.kid(1)), false, -T());
  case Op::AShr: {
    const std::vector<int> &a = bits(e.kid(0));
    return shift_bits(a, bits(e.kid(1)), false, a.back());
  }
  case Op::Extract: {
    const std::vector<int> &a = bits(e.kid(0));
    unsigned lo = e.aux() & 0xff;
    return std::vector<int>(a.begin() + lo, a.begin() + lo + w);
  }
  case Op::Concat: {
    const std::vector<int> &hi = bits(e.kid(0));
    const std::vector<int> &lo = bits(e.kid(1));
    std::vector<int> out = lo;
    out.insert(out.end(), hi.begin(), hi.end());
    return out;
  }
  case Op::ZExt: {
    std::vector<int> out = bits(e.kid(0));
    out.resize(w, -T());
    return out;
  }
  case Op::SExt: {
    std::vector<int> out = bits(e.kid(0));
    int msb = out.back();
    out.resize(w, msb);
    return out;
  }
  case Op::Trunc: {
    const std::vector<int> &a = bits(e.kid(0));
    return std::vector<int>(a.begin(), a.begin() + w);
  }
  case Op::BoolToBits:
    return {literal(e.kid(0))};
  default:
    throw std::logic_error("bitblast: unsupported bits op " +
                           std::string(op_name(e.op())));
  }
}

bool BitBlaster::model_bool(const Solver &s, Expr e) {
  return s.model_value(literal(e)) == LBool::True;
}

uint64_t BitBlaster::model_bits(const Solver &s, Expr e) {
  const std::vector<int> &ls = bits(e);
  uint64_t v = 0;
  for (size_t i = 0; i < ls.size(); i++)
    if (s.model_value(ls[i]) == LBool::True) v |= uint64_t(1) << i;
  return v;
}

} // namespace eqc
