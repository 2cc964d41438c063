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

#include "eqc/softfloat.h"

#include <cassert>

namespace eqc {
namespace fp {

uint64_t zero_bits(FloatFormat f, bool sign) {
  return sign ? 1ull << (f.width() - 1) : 0ull;
}

uint64_t inf_bits(FloatFormat f, bool sign) {
  uint64_t maxfe = (1ull << f.exp_bits) - 1;
  return (sign ? 1ull << (f.width() - 1) : 0ull) | (maxfe << f.frac_bits());
}

uint64_t qnan_bits(FloatFormat f, const NanPolicy &np) {
  unsigned fb = f.frac_bits();
  uint64_t frac = 1ull << (fb - 1);
  if (np.propagate_payload) {
    uint64_t scaled = fb >= 23 ? (uint64_t)np.payload << (fb - 23)
                               : (uint64_t)np.payload >> (23 - fb);
    frac |= scaled & ((1ull << fb) - 1);
  }
  uint64_t maxfe = (1ull << f.exp_bits) - 1;
  return (maxfe << fb) | frac;
}

uint64_t max_finite_bits(FloatFormat f, bool sign) {
  unsigned fb = f.frac_bits();
  uint64_t maxfe = (1ull << f.exp_bits) - 1;
  return (sign ? 1ull << (f.width() - 1) : 0ull) | ((maxfe - 1) << fb) |
         ((1ull << fb) - 1);
}

uint64_t min_subnormal_bits(FloatFormat f, bool sign) {
  return (sign ? 1ull << (f.width() - 1) : 0ull) | 1ull;
}

uint64_t one_bits(FloatFormat f, bool sign) {
  return (sign ? 1ull << (f.width() - 1) : 0ull)
         | ((uint64_t)f.bias() << f.frac_bits());
}

namespace {

// The arithmetic core is written once against a traits object and
// instantiated twice: ConcreteTraits executes it on host integers,
// SymbolicTraits emits the identical computation as expressions.

struct ConcWord {
  uint64_t v;
  unsigned w;
};

struct ConcreteTraits {
  using B = bool;
  using W = ConcWord;

  B tt() const { return true; }
  B ff() const { return false; }
  B bnot(B a) const { return !a; }
  B band(B a, B b) const { return a && b; }
  B bor(B a, B b) const { return a || b; }
  B bxor(B a, B b) const { return a != b; }
  B ite_b(B c, B a, B b) const { return c ? a : b; }

  W mkw(unsigned w, uint64_t v) const { return {truncate_to_width(v, w), w}; }
  unsigned width(W a) const { return a.w; }
  W ite_w(B c, W a, W b) const {
    assert(a.w == b.w);
    return c ? a : b;
  }
  W add(W a, W b) const { return mkw(a.w, a.v + b.v); }
  W sub(W a, W b) const { return mkw(a.w, a.v - b.v); }
  W mul(W a, W b) const { return mkw(a.w, a.v * b.v); }
  W wand(W a, W b) const { return {a.v & b.v, a.w}; }
  W wor(W a, W b) const { return {a.v | b.v, a.w}; }
  W wnot(W a) const { return mkw(a.w, ~a.v); }
  W shl(W a, W amt) const {
    return amt.v >= a.w ? W{0, a.w} : mkw(a.w, a.v << amt.v);
  }
  W lshr(W a, W amt) const {
    return amt.v >= a.w ? W{0, a.w} : W{a.v >> amt.v, a.w};
  }
  W shlc(W a, unsigned c) const { return shl(a, W{c, 32}); }
  W lshrc(W a, unsigned c) const { return lshr(a, W{c, 32}); }
  W zext(W a, unsigned w) const {
    assert(w >= a.w);
    return {a.v, w};
  }
  W trunc(W a, unsigned w) const {
    assert(w <= a.w);
    return mkw(w, a.v);
  }
  B eq(W a, W b) const { return a.v == b.v; }
  B ult(W a, W b) const { return a.v < b.v; }
  B ule(W a, W b) const { return a.v <= b.v; }
  B sle(W a, W b) const { return sval(a) <= sval(b); }
  B ne0(W a) const { return a.v != 0; }
  B bit(W a, unsigned i) const { return (a.v >> i) & 1u; }
  W b2w(B b, unsigned w) const { return {b ? 1ull : 0ull, w}; }

  static int64_t sval(W a) {
    uint64_t m = 1ull << (a.w - 1);
    return (int64_t)((a.v ^ m) - m);
  }
};

struct SymbolicTraits {
  ExprArena &A;

  using B = Expr;
  using W = Expr;

  B tt() const { return A.tru(); }
  B ff() const { return A.fls(); }
  B bnot(B a) const { return A.not_(a); }
  B band(B a, B b) const { return A.and_(a, b); }
  B bor(B a, B b) const { return A.or_(a, b); }
  B bxor(B a, B b) const { return A.xor_(a, b); }
  B ite_b(B c, B a, B b) const { return A.ite(c, a, b); }

  W mkw(unsigned w, uint64_t v) const { return A.constant(Type::ubits(w), v); }
  unsigned width(W a) const { return a.type().width(); }
  W ite_w(B c, W a, W b) const { return A.ite(c, a, b); }
  W add(W a, W b) const { return A.add(a, b); }
  W sub(W a, W b) const { return A.sub(a, b); }
  W mul(W a, W b) const { return A.mul(a, b); }
  W wand(W a, W b) const { return A.bitand_(a, b); }
  W wor(W a, W b) const { return A.bitor_(a, b); }
  W wnot(W a) const { return A.bitnot(a); }
  W shl(W a, W amt) const { return A.shl(a, amt); }
  W lshr(W a, W amt) const { return A.lshr(a, amt); }
  W shlc(W a, unsigned c) const { return A.shl(a, mkw(8, c)); }
  W lshrc(W a, unsigned c) const { return A.lshr(a, mkw(8, c)); }
  W zext(W a, unsigned w) const { return A.zext(a, w); }
  W trunc(W a, unsigned w) const { return A.trunc(a, w); }
  B eq(W a, W b) const { return A.eq(a, b); }
  B ult(W a, W b) const { return A.ult(a, b); }
  B ule(W a, W b) const { return A.ule(a, b); }
  B sle(W a, W b) const { return A.sle(a, b); }
  B ne0(W a) const { return A.ne(a, mkw(width(a), 0)); }
  B bit(W a, unsigned i) const {
    return A.eq(A.extract(a, i, i), A.constant(Type::ubits(1), 1));
  }
  W b2w(B b, unsigned w) const { return A.zext(A.bool_to_bits(b), w); }
};

template <class T> struct Parts {
  typename T::B sign, is_zero, is_sub, is_inf, is_nan, is_snan;
  typename T::W frac; // frac_bits wide
  typename T::W sig;  // sig_bits wide, hidden bit materialized
  typename T::W xe;   // exp_bits+2 wide, subnormal reads as 1
};

template <class T>
Parts<T> unpack(const T &t, FloatFormat f, typename T::W a) {
  unsigned p = f.sig_bits, eb = f.exp_bits, w = f.width(), ew = eb + 2u;
  auto frac = t.trunc(a, p - 1);
  auto fe = t.trunc(t.lshrc(a, p - 1), eb);
  auto fe0 = t.bnot(t.ne0(fe));
  auto feM = t.eq(fe, t.mkw(eb, (1ull << eb) - 1));
  auto fr0 = t.bnot(t.ne0(frac));
  Parts<T> r;
  r.sign = t.bit(a, w - 1);
  r.frac = frac;
  r.is_zero = t.band(fe0, fr0);
  r.is_sub = t.band(fe0, t.bnot(fr0));
  r.is_inf = t.band(feM, fr0);
  r.is_nan = t.band(feM, t.bnot(fr0));
  r.is_snan = t.band(r.is_nan, t.bnot(t.bit(frac, p - 2)));
  r.sig = t.wor(t.zext(frac, p),
                t.ite_w(fe0, t.mkw(p, 0), t.mkw(p, 1ull << (p - 1))));
  r.xe = t.ite_w(fe0, t.mkw(ew, 1), t.zext(fe, ew));
  return r;
}

template <class T>
typename T::W pack(const T &t, FloatFormat f, typename T::B sign,
                   typename T::W fe, typename T::W frac) {
  unsigned p = f.sig_bits, eb = f.exp_bits, w = f.width();
  auto sw = t.shlc(t.b2w(sign, w), w - 1);
  auto ev = t.shlc(t.zext(t.trunc(fe, eb), w), p - 1);
  return t.wor(t.wor(sw, ev), t.zext(frac, w));
}

template <class T>
typename T::W sel_const(const T &t, unsigned w, typename T::B sign,
                        uint64_t on_neg, uint64_t on_pos) {
  return t.ite_w(sign, t.mkw(w, on_neg), t.mkw(w, on_pos));
}

// Right shift that ORs every shifted-out bit into bit 0.
template <class T>
typename T::W shr_jam(const T &t, typename T::W x, typename T::W amt) {
  unsigned xw = t.width(x);
  auto mask = t.wnot(t.shl(t.mkw(xw, ~0ull), amt));
  auto sticky = t.ne0(t.wand(x, mask));
  return t.wor(t.lshr(x, amt), t.b2w(sticky, xw));
}

template <class T>
typename T::W clz(const T &t, typename T::W x, unsigned cw) {
  unsigned xw = t.width(x);
  auto allz = t.tt();
  auto cnt = t.mkw(cw, 0);
  for (unsigned i = xw; i-- > 0;) {
    allz = t.band(allz, t.bnot(t.bit(x, i)));
    cnt = t.ite_w(allz, t.add(cnt, t.mkw(cw, 1)), cnt);
  }
  return cnt;
}

// Rounds and packs a finite nonzero magnitude. sig is sig_bits+3 wide
// with the hidden bit at the top unless the biased exponent bexp
// (signed, exp_bits+2 wide) is <= 0, which triggers denormalization.
// Bits 2..0 of sig are round and sticky weight. Handles significand
// carry and per-mode overflow saturation.
template <class T>
typename T::W round_pack(const T &t, FloatFormat f, typename T::B sign,
                         typename T::W bexp, typename T::W sig,
                         typename T::W rm) {
  unsigned p = f.sig_bits, eb = f.exp_bits, w = f.width(), ew = eb + 2u;
  uint64_t maxfe = (1ull << eb) - 1;

  auto denorm = t.sle(bexp, t.mkw(ew, 0));
  auto shamt = t.ite_w(denorm, t.sub(t.mkw(ew, 1), bexp), t.mkw(ew, 0));
  auto sigd = shr_jam(t, sig, shamt);

  auto lsb = t.bit(sigd, 3);
  auto rb = t.bit(sigd, 2);
  auto stk = t.bor(t.bit(sigd, 1), t.bit(sigd, 0));
  auto rs = t.bor(rb, stk);
  auto is_ru = t.eq(rm, t.mkw(2, (uint64_t)RoundingMode::RU));
  auto is_rd = t.eq(rm, t.mkw(2, (uint64_t)RoundingMode::RD));
  auto is_rz = t.eq(rm, t.mkw(2, (uint64_t)RoundingMode::RZ));
  auto inc = t.ite_b(is_ru, t.band(t.bnot(sign), rs),
             t.ite_b(is_rd, t.band(sign, rs),
             t.ite_b(is_rz, t.ff(), t.band(rb, t.bor(stk, lsb)))));

  auto sig4 = t.add(t.zext(sigd, p + 4),
                    t.ite_w(inc, t.mkw(p + 4, 8), t.mkw(p + 4, 0)));
  auto sigr = t.trunc(t.lshrc(sig4, 3), p + 1);
  auto carry = t.bit(sigr, p);
  auto sign_sig = t.trunc(t.ite_w(carry, t.lshrc(sigr, 1), sigr), p);
  auto fe_norm = t.add(bexp, t.b2w(carry, ew));
  auto hidden = t.bit(sign_sig, p - 1);
  auto fe = t.ite_w(denorm, t.b2w(hidden, ew), fe_norm);
  auto packed = pack(t, f, sign, fe, t.trunc(sign_sig, p - 1));

  auto ovf = t.sle(t.mkw(ew, maxfe), fe);
  auto inf_s = sel_const(t, w, sign, inf_bits(f, 1), inf_bits(f, 0));
  auto max_s =
      sel_const(t, w, sign, max_finite_bits(f, 1), max_finite_bits(f, 0));
  auto ovf_ru = sel_const(t, w, sign, max_finite_bits(f, 1), inf_bits(f, 0));
  auto ovf_rd = sel_const(t, w, sign, inf_bits(f, 1), max_finite_bits(f, 0));
  auto ovf_res =
      t.ite_w(is_ru, ovf_ru,
      t.ite_w(is_rd, ovf_rd, t.ite_w(is_rz, max_s, inf_s)));
  return t.ite_w(ovf, ovf_res, packed);
}

// Normalizing front end of round_pack. sig4 is sig_bits+4 wide at any
// alignment; the represented magnitude is sig4 * 2^(bexp-bias-p-2).
template <class T>
typename T::W norm_round_pack(const T &t, FloatFormat f, typename T::B sign,
                              typename T::W bexp, typename T::W sig4,
                              typename T::W rm) {
  unsigned p = f.sig_bits, ew = f.exp_bits + 2u;
  auto lz = clz(t, sig4, ew);
  auto be = t.sub(t.add(bexp, t.mkw(ew, 1)), lz);
  auto sh = t.shl(sig4, lz);
  auto sig3 =
      t.trunc(t.wor(t.lshrc(sh, 1), t.b2w(t.bit(sh, 0), p + 4)), p + 3);
  return round_pack(t, f, sign, be, sig3, rm);
}

template <class T>
typename T::W add_core(const T &t, FloatFormat f, typename T::W a,
                       typename T::W b, typename T::W rm, bool subtract,
                       AddImpl impl, const NanPolicy &np) {
  using W = typename T::W;
  unsigned p = f.sig_bits, w = f.width(), ew = f.exp_bits + 2u;

  auto ua = unpack(t, f, a);
  auto ub = unpack(t, f, b);
  auto bsign = subtract ? t.bnot(ub.sign) : ub.sign;
  auto eff_sub = t.bxor(ua.sign, bsign);

  auto amag = t.trunc(a, w - 1);
  auto bmag = t.trunc(b, w - 1);
  auto swap = t.ult(amag, bmag);
  auto xsign = t.ite_b(swap, bsign, ua.sign);
  auto xs = t.ite_w(swap, ub.sig, ua.sig);
  auto ys = t.ite_w(swap, ua.sig, ub.sig);
  auto xe = t.ite_w(swap, ub.xe, ua.xe);
  auto ye = t.ite_w(swap, ua.xe, ub.xe);
  auto d = t.sub(xe, ye);

  auto xse = t.shlc(t.zext(xs, p + 3), 3);
  auto yse = t.shlc(t.zext(ys, p + 3), 3);

  auto yal = shr_jam(t, yse, d);
  auto sum = t.add(t.zext(xse, p + 4), t.zext(yal, p + 4));
  auto dif = t.zext(t.sub(xse, yal), p + 4);

  W main = t.mkw(p + 4, 0);
  if (impl == AddImpl::DualPath) {
    // Near path: effective subtraction with exponent distance <= 1 is
    // exact, no sticky can arise. Far path keeps the jammed alignment.
    auto near_y = t.ite_w(t.eq(d, t.mkw(ew, 1)), t.lshrc(yse, 1), yse);
    auto near_d = t.zext(t.sub(xse, near_y), p + 4);
    auto is_near = t.band(eff_sub, t.ule(d, t.mkw(ew, 1)));
    main = t.ite_w(is_near, near_d, t.ite_w(eff_sub, dif, sum));
  } else {
    main = t.ite_w(eff_sub, dif, sum);
  }

  auto zres = t.bnot(t.ne0(main));
  auto zsign =
      t.ite_b(eff_sub, t.eq(rm, t.mkw(2, (uint64_t)RoundingMode::RD)), xsign);
  auto num = norm_round_pack(t, f, xsign, xe, main, rm);
  num = t.ite_w(zres, sel_const(t, w, zsign, zero_bits(f, 1), zero_bits(f, 0)),
                num);

  auto qn = t.mkw(w, qnan_bits(f, np));
  auto invalid = t.band(t.band(ua.is_inf, ub.is_inf), eff_sub);
  auto anynan = t.bor(ua.is_nan, ub.is_nan);
  auto inf_in = t.bor(ua.is_inf, ub.is_inf);
  auto inf_res =
      t.ite_w(ua.is_inf, sel_const(t, w, ua.sign, inf_bits(f, 1), inf_bits(f, 0)),
              sel_const(t, w, bsign, inf_bits(f, 1), inf_bits(f, 0)));
  return t.ite_w(t.bor(anynan, invalid), qn, t.ite_w(inf_in, inf_res, num));
}

template <class T>
typename T::W mul_core(const T &t, FloatFormat f, typename T::W a,
                       typename T::W b, typename T::W rm,
                       const NanPolicy &np) {
  using W = typename T::W;
  unsigned p = f.sig_bits, w = f.width(), ew = f.exp_bits + 2u;

  auto ua = unpack(t, f, a);
  auto ub = unpack(t, f, b);
  auto sign = t.bxor(ua.sign, ub.sign);

  auto la = clz(t, ua.sig, ew);
  auto sa = t.shl(ua.sig, la);
  auto ea = t.sub(ua.xe, la);
  auto lb = clz(t, ub.sig, ew);
  auto sb = t.shl(ub.sig, lb);
  auto eb_ = t.sub(ub.xe, lb);

  W sig4 = t.mkw(p + 4, 0);
  if (2u * p <= 64u) {
    auto prod = t.mul(t.zext(sa, 2 * p), t.zext(sb, 2 * p));
    sig4 = t.trunc(shr_jam(t, prod, t.mkw(ew, p - 4u)), p + 4);
  } else {
    // 32x32 limb product; the 2p-bit result lives in hi:lo.
    auto a64 = t.zext(sa, 64);
    auto b64 = t.zext(sb, 64);
    auto al = t.zext(t.trunc(a64, 32), 64);
    auto ah = t.lshrc(a64, 32);
    auto bl = t.zext(t.trunc(b64, 32), 64);
    auto bh = t.lshrc(b64, 32);
    auto p0 = t.mul(al, bl);
    auto mid = t.add(t.mul(al, bh), t.mul(ah, bl));
    auto mlo = t.shlc(mid, 32);
    auto lo = t.add(p0, mlo);
    auto c1 = t.ult(lo, mlo);
    auto hi = t.add(t.add(t.mul(ah, bh), t.lshrc(mid, 32)), t.b2w(c1, 64));
    unsigned sh = 2u * p - (p + 4u);
    auto top = t.wor(t.shlc(hi, 64u - sh), t.lshrc(lo, sh));
    auto jam = t.ne0(t.trunc(lo, sh));
    sig4 = t.wor(t.trunc(top, p + 4), t.b2w(jam, p + 4));
  }

  auto bexp = t.sub(t.add(ea, eb_), t.mkw(ew, (uint64_t)f.bias()));
  auto num = norm_round_pack(t, f, sign, bexp, sig4, rm);

  auto anynan = t.bor(ua.is_nan, ub.is_nan);
  auto invalid = t.bor(t.band(ua.is_zero, ub.is_inf),
                       t.band(ua.is_inf, ub.is_zero));
  auto inf_in = t.bor(ua.is_inf, ub.is_inf);
  auto zero_in = t.bor(ua.is_zero, ub.is_zero);
  auto qn = t.mkw(w, qnan_bits(f, np));
  auto inf_s = sel_const(t, w, sign, inf_bits(f, 1), inf_bits(f, 0));
  auto zer_s = sel_const(t, w, sign, zero_bits(f, 1), zero_bits(f, 0));
  return t.ite_w(t.bor(anynan, invalid), qn,
         t.ite_w(inf_in, inf_s, t.ite_w(zero_in, zer_s, num)));
}

template <class T>
typename T::W div_core(const T &t, FloatFormat f, typename T::W a,
                       typename T::W b, typename T::W rm,
                       const NanPolicy &np) {
  unsigned p = f.sig_bits, w = f.width(), ew = f.exp_bits + 2u;

  auto ua = unpack(t, f, a);
  auto ub = unpack(t, f, b);
  auto sign = t.bxor(ua.sign, ub.sign);

  auto la = clz(t, ua.sig, ew);
  auto sa = t.shl(ua.sig, la);
  auto ea = t.sub(ua.xe, la);
  auto lb = clz(t, ub.sig, ew);
  auto sb = t.shl(ub.sig, lb);
  auto eb_ = t.sub(ub.xe, lb);

  // Restoring division, p+2 quotient bits plus sticky from the
  // remainder. The invariant r < 2*divisor keeps one subtract enough.
  auto r = t.zext(sa, p + 1);
  auto dv = t.zext(sb, p + 1);
  auto q = t.mkw(p + 2, 0);
  for (unsigned i = 0; i < p + 2u; i++) {
    auto ge = t.ule(dv, r);
    q = t.wor(t.shlc(q, 1), t.b2w(ge, p + 2));
    r = t.ite_w(ge, t.sub(r, dv), r);
    if (i + 1 < p + 2u)
      r = t.shlc(r, 1);
  }
  auto sticky = t.ne0(r);
  auto sig4 = t.wor(t.shlc(t.zext(q, p + 4), 1), t.b2w(sticky, p + 4));

  auto bexp = t.add(t.sub(ea, eb_), t.mkw(ew, (uint64_t)f.bias()));
  auto num = norm_round_pack(t, f, sign, bexp, sig4, rm);

  auto anynan = t.bor(ua.is_nan, ub.is_nan);
  auto invalid = t.bor(t.band(ua.is_inf, ub.is_inf),
                       t.band(ua.is_zero, ub.is_zero));
  auto inf_res = t.bor(ua.is_inf, ub.is_zero);
  auto zero_res = t.bor(ub.is_inf, ua.is_zero);
  auto qn = t.mkw(w, qnan_bits(f, np));
  auto inf_s = sel_const(t, w, sign, inf_bits(f, 1), inf_bits(f, 0));
  auto zer_s = sel_const(t, w, sign, zero_bits(f, 1), zero_bits(f, 0));
  return t.ite_w(t.bor(anynan, invalid), qn,
         t.ite_w(inf_res, inf_s, t.ite_w(zero_res, zer_s, num)));
}

template <class T>
typename T::B eq_core(const T &t, FloatFormat f, typename T::W a,
                      typename T::W b) {
  auto ua = unpack(t, f, a);
  auto ub = unpack(t, f, b);
  auto bz = t.band(ua.is_zero, ub.is_zero);
  auto same = t.eq(a, b);
  return t.band(t.bnot(t.bor(ua.is_nan, ub.is_nan)), t.bor(same, bz));
}

template <class T>
typename T::B lt_core(const T &t, FloatFormat f, typename T::W a,
                      typename T::W b) {
  unsigned w = f.width();
  auto ua = unpack(t, f, a);
  auto ub = unpack(t, f, b);
  auto amag = t.trunc(a, w - 1);
  auto bmag = t.trunc(b, w - 1);
  auto bz = t.band(ua.is_zero, ub.is_zero);
  auto difsign = t.bxor(ua.sign, ub.sign);
  auto lt_diff = t.band(ua.sign, t.bnot(bz));
  auto lt_same = t.ite_b(ua.sign, t.ult(bmag, amag), t.ult(amag, bmag));
  auto res = t.ite_b(difsign, lt_diff, lt_same);
  return t.band(t.bnot(t.bor(ua.is_nan, ub.is_nan)), res);
}

// minNum/maxNum: a single quiet NaN operand is dropped, a signaling
// NaN or two NaNs give the canonical quiet NaN, and signed zeros
// order as -0 < +0.
template <class T>
typename T::W minmax_core(const T &t, FloatFormat f, typename T::W a,
                          typename T::W b, bool is_min,
                          const NanPolicy &np) {
  unsigned w = f.width();
  auto ua = unpack(t, f, a);
  auto ub = unpack(t, f, b);
  auto both_zero = t.band(ua.is_zero, ub.is_zero);
  auto zsign = is_min ? t.bor(ua.sign, ub.sign) : t.band(ua.sign, ub.sign);
  auto zres = sel_const(t, w, zsign, zero_bits(f, 1), zero_bits(f, 0));
  auto cmp = is_min ? lt_core(t, f, a, b) : lt_core(t, f, b, a);
  auto sel = t.ite_w(cmp, a, b);
  auto qn = t.mkw(w, qnan_bits(f, np));
  auto to_qnan = t.bor(t.bor(ua.is_snan, ub.is_snan),
                       t.band(ua.is_nan, ub.is_nan));
  return t.ite_w(to_qnan, qn,
         t.ite_w(ua.is_nan, b,
         t.ite_w(ub.is_nan, a, t.ite_w(both_zero, zres, sel))));
}

template <class T>
typename T::W round_core(const T &t, FloatFormat f, typename T::W a,
                         typename T::W rm, const NanPolicy &np) {
  unsigned p = f.sig_bits, w = f.width(), ew = f.exp_bits + 2u;
  uint64_t bias = (uint64_t)f.bias();

  auto u = unpack(t, f, a);
  auto e = t.sub(u.xe, t.mkw(ew, bias));
  auto big = t.sle(t.mkw(ew, p - 1), e);
  auto small = t.sle(e, t.mkw(ew, (uint64_t)-1));

  // |value| < 1 rounds to zero or one.
  auto is_ru = t.eq(rm, t.mkw(2, (uint64_t)RoundingMode::RU));
  auto is_rd = t.eq(rm, t.mkw(2, (uint64_t)RoundingMode::RD));
  auto is_rz = t.eq(rm, t.mkw(2, (uint64_t)RoundingMode::RZ));
  auto half_up =
      t.band(t.eq(e, t.mkw(ew, (uint64_t)-1)), t.ne0(u.frac));
  auto nz = t.bnot(u.is_zero);
  auto to_one = t.ite_b(is_ru, t.band(t.bnot(u.sign), nz),
                t.ite_b(is_rd, t.band(u.sign, nz),
                t.ite_b(is_rz, t.ff(), half_up)));
  auto small_res =
      t.ite_w(to_one, sel_const(t, w, u.sign, one_bits(f, 1), one_bits(f, 0)),
              sel_const(t, w, u.sign, zero_bits(f, 1), zero_bits(f, 0)));

  // 0 <= e <= p-2: round away the fractional significand bits.
  auto sh = t.sub(t.mkw(ew, p - 1), e);
  auto sig3 = t.shlc(t.zext(u.sig, p + 3), 3);
  auto sigd = shr_jam(t, sig3, sh);
  auto lsb = t.bit(sigd, 3);
  auto rb = t.bit(sigd, 2);
  auto stk = t.bor(t.bit(sigd, 1), t.bit(sigd, 0));
  auto rs = t.bor(rb, stk);
  auto inc = t.ite_b(is_ru, t.band(t.bnot(u.sign), rs),
             t.ite_b(is_rd, t.band(u.sign, rs),
             t.ite_b(is_rz, t.ff(), t.band(rb, t.bor(stk, lsb)))));
  auto intm = t.add(t.lshrc(sigd, 3), t.b2w(inc, p + 3));
  auto mid = norm_round_pack(t, f, u.sign, t.mkw(ew, bias + p + 2),
                             t.zext(intm, p + 4), rm);

  auto num = t.ite_w(small, small_res, t.ite_w(big, a, mid));
  auto qn = t.mkw(w, qnan_bits(f, np));
  return t.ite_w(u.is_nan, qn, t.ite_w(u.is_inf, a, num));
}

template <class T>
typename T::W classify_core(const T &t, FloatFormat f, typename T::W a) {
  auto u = unpack(t, f, a);
  auto k = [&](FpClass neg, FpClass pos) {
    return sel_const(t, 4, u.sign, (uint64_t)neg, (uint64_t)pos);
  };
  auto nan_code = t.ite_w(u.is_snan, t.mkw(4, (uint64_t)FpClass::SNan),
                          t.mkw(4, (uint64_t)FpClass::QNan));
  return t.ite_w(u.is_nan, nan_code,
         t.ite_w(u.is_inf, k(FpClass::NegInf, FpClass::PosInf),
         t.ite_w(u.is_zero, k(FpClass::NegZero, FpClass::PosZero),
         t.ite_w(u.is_sub, k(FpClass::NegSubnormal, FpClass::PosSubnormal),
                 k(FpClass::NegNormal, FpClass::PosNormal)))));
}

ConcWord cw(FloatFormat f, uint64_t a) {
  return {truncate_to_width(a, f.width()), f.width()};
}

ConcWord crm(RoundingMode rm) { return {(uint64_t)rm, 2}; }

} // namespace

uint64_t add(FloatFormat f, uint64_t a, uint64_t b, RoundingMode rm,
             const NanPolicy &np, AddImpl impl) {
  ConcreteTraits t;
  return add_core(t, f, cw(f, a), cw(f, b), crm(rm), false, impl, np).v;
}

uint64_t sub(FloatFormat f, uint64_t a, uint64_t b, RoundingMode rm,
             const NanPolicy &np, AddImpl impl) {
  ConcreteTraits t;
  return add_core(t, f, cw(f, a), cw(f, b), crm(rm), true, impl, np).v;
}

uint64_t mul(FloatFormat f, uint64_t a, uint64_t b, RoundingMode rm,
             const NanPolicy &np) {
  ConcreteTraits t;
  return mul_core(t, f, cw(f, a), cw(f, b), crm(rm), np).v;
}

uint64_t div(FloatFormat f, uint64_t a, uint64_t b, RoundingMode rm,
             const NanPolicy &np) {
  ConcreteTraits t;
  return div_core(t, f, cw(f, a), cw(f, b), crm(rm), np).v;
}

uint64_t min(FloatFormat f, uint64_t a, uint64_t b, const NanPolicy &np) {
  ConcreteTraits t;
  return minmax_core(t, f, cw(f, a), cw(f, b), true, np).v;
}

uint64_t max(FloatFormat f, uint64_t a, uint64_t b, const NanPolicy &np) {
  ConcreteTraits t;
  return minmax_core(t, f, cw(f, a), cw(f, b), false, np).v;
}

uint64_t round_to_integral(FloatFormat f, uint64_t a, RoundingMode rm,
                           const NanPolicy &np) {
  ConcreteTraits t;
  return round_core(t, f, cw(f, a), crm(rm), np).v;
}

bool is_nan(FloatFormat f, uint64_t a) {
  ConcreteTraits t;
  return unpack(t, f, cw(f, a)).is_nan;
}

bool is_inf(FloatFormat f, uint64_t a) {
  ConcreteTraits t;
  return unpack(t, f, cw(f, a)).is_inf;
}

bool is_zero(FloatFormat f, uint64_t a) {
  ConcreteTraits t;
  return unpack(t, f, cw(f, a)).is_zero;
}

bool is_subnormal(FloatFormat f, uint64_t a) {
  ConcreteTraits t;
  return unpack(t, f, cw(f, a)).is_sub;
}

bool is_normal(FloatFormat f, uint64_t a) {
  ConcreteTraits t;
  auto u = unpack(t, f, cw(f, a));
  return !(u.is_zero || u.is_sub || u.is_inf || u.is_nan);
}

FpClass classify(FloatFormat f, uint64_t a) {
  ConcreteTraits t;
  return (FpClass)classify_core(t, f, cw(f, a)).v;
}

uint64_t canonicalize(FloatFormat f, uint64_t a, const NanPolicy &np) {
  return is_nan(f, a) ? qnan_bits(f, np) : truncate_to_width(a, f.width());
}

bool ieee_eq(FloatFormat f, uint64_t a, uint64_t b) {
  ConcreteTraits t;
  return eq_core(t, f, cw(f, a), cw(f, b));
}

bool ieee_lt(FloatFormat f, uint64_t a, uint64_t b) {
  ConcreteTraits t;
  return lt_core(t, f, cw(f, a), cw(f, b));
}

bool ieee_le(FloatFormat f, uint64_t a, uint64_t b) {
  return ieee_lt(f, a, b) || ieee_eq(f, a, b);
}

namespace {

void check_operand(FloatFormat f, Expr a) {
  (void)f;
  (void)a;
  assert(a.type().is_bits() && a.type().width() == f.width());
}

void check_rm(Expr rm) {
  (void)rm;
  assert(rm.type().is_bits() && rm.type().width() == 2);
}

} // namespace

Expr emit_add(ExprArena &A, FloatFormat f, Expr a, Expr b, Expr rm,
              bool subtract, AddImpl impl, const NanPolicy &np) {
  check_operand(f, a);
  check_operand(f, b);
  check_rm(rm);
  SymbolicTraits t{A};
  return add_core(t, f, a, b, rm, subtract, impl, np);
}

Expr emit_mul(ExprArena &A, FloatFormat f, Expr a, Expr b, Expr rm,
              const NanPolicy &np) {
  check_operand(f, a);
  check_operand(f, b);
  check_rm(rm);
  SymbolicTraits t{A};
  return mul_core(t, f, a, b, rm, np);
}

Expr emit_div(ExprArena &A, FloatFormat f, Expr a, Expr b, Expr rm,
              const NanPolicy &np) {
  check_operand(f, a);
  check_operand(f, b);
  check_rm(rm);
  SymbolicTraits t{A};
  return div_core(t, f, a, b, rm, np);
}

Expr emit_min(ExprArena &A, FloatFormat f, Expr a, Expr b,
              const NanPolicy &np) {
  check_operand(f, a);
  check_operand(f, b);
  SymbolicTraits t{A};
  return minmax_core(t, f, a, b, true, np);
}

Expr emit_max(ExprArena &A, FloatFormat f, Expr a, Expr b,
              const NanPolicy &np) {
  check_operand(f, a);
  check_operand(f, b);
  SymbolicTraits t{A};
  return minmax_core(t, f, a, b, false, np);
}

Expr emit_round(ExprArena &A, FloatFormat f, Expr a, Expr rm,
                const NanPolicy &np) {
  check_operand(f, a);
  check_rm(rm);
  SymbolicTraits t{A};
  return round_core(t, f, a, rm, np);
}

Expr emit_classify(ExprArena &A, FloatFormat f, Expr a) {
  check_operand(f, a);
  SymbolicTraits t{A};
  return classify_core(t, f, a);
}

Expr emit_is_nan(ExprArena &A, FloatFormat f, Expr a) {
  check_operand(f, a);
  SymbolicTraits t{A};
  return unpack(t, f, a).is_nan;
}

Expr emit_is_inf(ExprArena &A, FloatFormat f, Expr a) {
  check_operand(f, a);
  SymbolicTraits t{A};
  return unpack(t, f, a).is_inf;
}

Expr emit_is_zero(ExprArena &A, FloatFormat f, Expr a) {
  check_operand(f, a);
  SymbolicTraits t{A};
  return unpack(t, f, a).is_zero;
}

Expr emit_is_subnormal(ExprArena &A, FloatFormat f, Expr a) {
  check_operand(f, a);
  SymbolicTraits t{A};
  return unpack(t, f, a).is_sub;
}

Expr emit_is_normal(ExprArena &A, FloatFormat f, Expr a) {
  check_operand(f, a);
  SymbolicTraits t{A};
  auto u = unpack(t, f, a);
  return A.not_(A.or_(A.or_(u.is_zero, u.is_sub), A.or_(u.is_inf, u.is_nan)));
}

Expr emit_ieee_eq(ExprArena &A, FloatFormat f, Expr a, Expr b) {
  check_operand(f, a);
  check_operand(f, b);
  SymbolicTraits t{A};
  return eq_core(t, f, a, b);
}

Expr emit_ieee_lt(ExprArena &A, FloatFormat f, Expr a, Expr b) {
  check_operand(f, a);
  check_operand(f, b);
  SymbolicTraits t{A};
  return lt_core(t, f, a, b);
}

Expr emit_ieee_le(ExprArena &A, FloatFormat f, Expr a, Expr b) {
  check_operand(f, a);
  check_operand(f, b);
  SymbolicTraits t{A};
  return A.or_(lt_core(t, f, a, b), eq_core(t, f, a, b));
}

} // namespace fp
} // namespace eqc
