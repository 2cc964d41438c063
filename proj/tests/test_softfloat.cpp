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

#include "doctest.h"

#include "eqc/eval.h"
#include "eqc/softfloat.h"

#include <boost/multiprecision/cpp_int.hpp>

#include <cfenv>
#include <cmath>
#include <cstring>
#include <random>
#include <vector>

using namespace eqc;
using boost::multiprecision::cpp_int;
using boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------
// Arbitrary-precision rational oracle. Every expected value below is
// produced from the IEEE 754 definitions alone: decode to an exact
// rational, operate exactly, then round by bracketing the result
// between the two nearest representable values of the target format.
// ---------------------------------------------------------------------

namespace {

cpp_rational pow2r(int k) {
  cpp_rational r(cpp_int(1) << (k < 0 ? -k : k));
  return k < 0 ? cpp_rational(1) / r : r;
}

struct Dec {
  bool nan = false, snan = false, inf = false, zero = false;
  bool sign = false;
  cpp_rational val;
};

Dec o_decode(FloatFormat f, uint64_t bits) {
  unsigned fb = f.frac_bits(), eb = f.exp_bits;
  uint64_t fr = bits & ((1ull << fb) - 1);
  uint64_t fe = (bits >> fb) & ((1ull << eb) - 1);
  uint64_t maxfe = (1ull << eb) - 1;
  Dec d;
  d.sign = (bits >> (f.width() - 1)) & 1u;
  if (fe == maxfe) {
    if (fr) {
      d.nan = true;
      d.snan = !(fr >> (fb - 1));
    } else {
      d.inf = true;
    }
    return d;
  }
  int e;
  uint64_t sig;
  if (fe == 0) {
    if (!fr) {
      d.zero = true;
      return d;
    }
    e = 1 - f.bias();
    sig = fr;
  } else {
    e = (int)fe - f.bias();
    sig = fr | (1ull << fb);
  }
  cpp_rational v = cpp_rational(cpp_int(sig)) * pow2r(e - (int)fb);
  d.val = d.sign ? -v : v;
  return d;
}

int floor_log2(const cpp_rational &m) {
  int e = 0;
  cpp_rational r = m;
  while (r >= 2) {
    r /= 2;
    e++;
  }
  while (r < 1) {
    r *= 2;
    e--;
  }
  return e;
}

uint64_t o_encode_exact(FloatFormat f, bool sign, const cpp_rational &m) {
  unsigned fb = f.frac_bits();
  int emin = 1 - f.bias();
  int e = floor_log2(m);
  int ee = e < emin ? emin : e;
  cpp_rational sc = m / pow2r(ee - (int)fb);
  REQUIRE(denominator(sc) == 1);
  uint64_t sig = numerator(sc).convert_to<uint64_t>();
  uint64_t fe;
  if (e < emin) {
    fe = 0;
  } else {
    fe = (uint64_t)(e + f.bias());
    sig &= (1ull << fb) - 1;
  }
  return (sign ? 1ull << (f.width() - 1) : 0ull) | (fe << fb) | sig;
}

// Rounds |result| = m > 0 as if the exponent range were unbounded
// above, then applies the overflow substitution for the mode.
uint64_t o_round_mag(FloatFormat f, bool sign, const cpp_rational &m,
                     RoundingMode rm) {
  int emin = 1 - f.bias();
  int e = floor_log2(m);
  int ee = e < emin ? emin : e;
  cpp_rational q = pow2r(ee - (int)f.frac_bits());
  cpp_rational sc = m / q;
  cpp_int lo_i = numerator(sc) / denominator(sc);
  cpp_rational lo = cpp_rational(lo_i) * q;
  cpp_rational picked;
  if (lo == m) {
    picked = m;
  } else {
    cpp_rational hi = lo + q;
    switch (rm) {
    case RoundingMode::RZ: picked = lo; break;
    case RoundingMode::RU: picked = sign ? lo : hi; break;
    case RoundingMode::RD: picked = sign ? hi : lo; break;
    case RoundingMode::RNE: {
      cpp_rational mid = lo + q / 2;
      if (m < mid)
        picked = lo;
      else if (m > mid)
        picked = hi;
      else
        picked = (lo_i % 2 == 0) ? lo : hi;
      break;
    }
    }
  }
  if (picked > o_decode(f, fp::max_finite_bits(f, 0)).val) {
    switch (rm) {
    case RoundingMode::RNE: return fp::inf_bits(f, sign);
    case RoundingMode::RZ: return fp::max_finite_bits(f, sign);
    case RoundingMode::RU:
      return sign ? fp::max_finite_bits(f, 1) : fp::inf_bits(f, 0);
    case RoundingMode::RD:
      return sign ? fp::inf_bits(f, 1) : fp::max_finite_bits(f, 0);
    }
  }
  if (picked == 0)
    return fp::zero_bits(f, sign);
  return o_encode_exact(f, sign, picked);
}

uint64_t o_add(FloatFormat f, uint64_t a, uint64_t b, RoundingMode rm,
               bool subtract) {
  Dec da = o_decode(f, a), db = o_decode(f, b);
  bool bs = subtract ? !db.sign : db.sign;
  if (da.nan || db.nan)
    return fp::qnan_bits(f);
  if (da.inf && db.inf)
    return da.sign != bs ? fp::qnan_bits(f) : fp::inf_bits(f, da.sign);
  if (da.inf)
    return fp::inf_bits(f, da.sign);
  if (db.inf)
    return fp::inf_bits(f, bs);
  cpp_rational s = da.val + (subtract ? -db.val : db.val);
  if (s == 0) {
    if (da.zero && db.zero && da.sign == bs)
      return fp::zero_bits(f, da.sign);
    return fp::zero_bits(f, rm == RoundingMode::RD);
  }
  return o_round_mag(f, s < 0, abs(s), rm);
}

uint64_t o_mul(FloatFormat f, uint64_t a, uint64_t b, RoundingMode rm) {
  Dec da = o_decode(f, a), db = o_decode(f, b);
  bool sign = da.sign != db.sign;
  if (da.nan || db.nan)
    return fp::qnan_bits(f);
  if ((da.zero && db.inf) || (da.inf && db.zero))
    return fp::qnan_bits(f);
  if (da.inf || db.inf)
    return fp::inf_bits(f, sign);
  if (da.zero || db.zero)
    return fp::zero_bits(f, sign);
  return o_round_mag(f, sign, abs(da.val * db.val), rm);
}

uint64_t o_div(FloatFormat f, uint64_t a, uint64_t b, RoundingMode rm) {
  Dec da = o_decode(f, a), db = o_decode(f, b);
  bool sign = da.sign != db.sign;
  if (da.nan || db.nan)
    return fp::qnan_bits(f);
  if ((da.inf && db.inf) || (da.zero && db.zero))
    return fp::qnan_bits(f);
  if (da.inf || db.zero)
    return fp::inf_bits(f, sign);
  if (da.zero || db.inf)
    return fp::zero_bits(f, sign);
  return o_round_mag(f, sign, abs(da.val / db.val), rm);
}

// -1, 0, +1 ordering with infinities; zeros compare equal.
int o_cmp(const Dec &a, const Dec &b) {
  cpp_rational va = a.zero ? cpp_rational(0) : a.val;
  cpp_rational vb = b.zero ? cpp_rational(0) : b.val;
  if (a.inf || b.inf) {
    int ca = a.inf ? (a.sign ? -1 : 1) : 0;
    int cb = b.inf ? (b.sign ? -1 : 1) : 0;
    if (ca != cb)
      return ca < cb ? -1 : 1;
    if (ca != 0)
      return 0;
  }
  if (a.inf)
    return a.sign ? -1 : 1;
  if (b.inf)
    return b.sign ? 1 : -1;
  if (va == vb)
    return 0;
  return va < vb ? -1 : 1;
}

uint64_t o_minmax(FloatFormat f, uint64_t a, uint64_t b, bool is_min) {
  Dec da = o_decode(f, a), db = o_decode(f, b);
  if (da.snan || db.snan || (da.nan && db.nan))
    return fp::qnan_bits(f);
  if (da.nan)
    return b;
  if (db.nan)
    return a;
  int c = o_cmp(da, db);
  if (c == 0) {
    if (da.zero && db.zero) {
      bool zs = is_min ? (da.sign || db.sign) : (da.sign && db.sign);
      return fp::zero_bits(f, zs);
    }
    return b;
  }
  bool a_less = c < 0;
  return (is_min == a_less) ? a : b;
}

uint64_t o_round_int(FloatFormat f, uint64_t a, RoundingMode rm) {
  Dec da = o_decode(f, a);
  if (da.nan)
    return fp::qnan_bits(f);
  if (da.inf || da.zero)
    return a;
  cpp_rational m = abs(da.val);
  cpp_int lo_i = numerator(m) / denominator(m);
  cpp_rational lo(lo_i);
  cpp_rational picked;
  if (lo == m) {
    picked = m;
  } else {
    cpp_rational hi = lo + 1;
    switch (rm) {
    case RoundingMode::RZ: picked = lo; break;
    case RoundingMode::RU: picked = da.sign ? lo : hi; break;
    case RoundingMode::RD: picked = da.sign ? hi : lo; break;
    case RoundingMode::RNE: {
      cpp_rational mid = lo + cpp_rational(1, 2);
      if (m < mid)
        picked = lo;
      else if (m > mid)
        picked = hi;
      else
        picked = (lo_i % 2 == 0) ? lo : hi;
      break;
    }
    }
  }
  if (picked == 0)
    return fp::zero_bits(f, da.sign);
  return o_encode_exact(f, da.sign, picked);
}

const RoundingMode kModes[4] = {RoundingMode::RU, RoundingMode::RD,
                                RoundingMode::RZ, RoundingMode::RNE};

} // namespace

TEST_CASE("oracle sanity on hand-computed minifloat values") {
  FloatFormat f = FloatFormat::minifloat();
  // 1.0 = 0x38, 2.0 = 0x40, 1.5 = 0x3C, max finite = 0xEF/0x6F.
  CHECK(fp::one_bits(f, 0) == 0x38);
  CHECK(o_encode_exact(f, 0, cpp_rational(2)) == 0x40);
  CHECK(o_encode_exact(f, 0, cpp_rational(3, 2)) == 0x3C);
  CHECK(fp::max_finite_bits(f, 0) == 0x77);
  CHECK(o_decode(f, 0x77).val == cpp_rational(240));
  // min subnormal = 2^-9
  CHECK(o_decode(f, 0x01).val == pow2r(-9));
  CHECK(o_add(f, 0x38, 0x38, RoundingMode::RNE, false) == 0x40);
  // 1 + 2^-9 is inexact: RNE/RZ/RD stay at 1, RU steps up.
  CHECK(o_add(f, 0x38, 0x01, RoundingMode::RNE, false) == 0x38);
  CHECK(o_add(f, 0x38, 0x01, RoundingMode::RU, false) == 0x39);
  CHECK(o_add(f, 0x38, 0x01, RoundingMode::RD, false) == 0x38);
  // 240 + 240 overflows: RNE -> inf, RZ -> max finite.
  CHECK(o_add(f, 0x77, 0x77, RoundingMode::RNE, false) == fp::inf_bits(f, 0));
  CHECK(o_add(f, 0x77, 0x77, RoundingMode::RZ, false) == 0x77);
}

TEST_CASE("minifloat exhaustive conformance vs rational oracle") {
  FloatFormat f = FloatFormat::minifloat();
  size_t bad = 0;
  auto report = [&](const char *op, RoundingMode rm, uint64_t a, uint64_t b,
                    uint64_t got, uint64_t want) {
    if (bad < 8) {
      MESSAGE(op << " rm=" << to_string(rm) << " a=0x" << std::hex << a
                 << " b=0x" << b << " got=0x" << got << " want=0x" << want
                 << std::dec);
    }
    bad++;
  };
  for (RoundingMode rm : kModes) {
    for (uint64_t a = 0; a < 256; a++) {
      for (uint64_t b = 0; b < 256; b++) {
        uint64_t g, w;
        g = fp::add(f, a, b, rm);
        w = o_add(f, a, b, rm, false);
        if (g != w)
          report("add", rm, a, b, g, w);
        g = fp::sub(f, a, b, rm);
        w = o_add(f, a, b, rm, true);
        if (g != w)
          report("sub", rm, a, b, g, w);
        g = fp::mul(f, a, b, rm);
        w = o_mul(f, a, b, rm);
        if (g != w)
          report("mul", rm, a, b, g, w);
        g = fp::div(f, a, b, rm);
        w = o_div(f, a, b, rm);
        if (g != w)
          report("div", rm, a, b, g, w);
        g = fp::min(f, a, b);
        w = o_minmax(f, a, b, true);
        if (g != w)
          report("min", rm, a, b, g, w);
        g = fp::max(f, a, b);
        w = o_minmax(f, a, b, false);
        if (g != w)
          report("max", rm, a, b, g, w);
      }
      uint64_t g = fp::round_to_integral(f, a, rm);
      uint64_t w = o_round_int(f, a, rm);
      if (g != w)
        report("round", rm, a, 0, g, w);
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("minifloat single-path adder matches dual-path exhaustively") {
  FloatFormat f = FloatFormat::minifloat();
  size_t bad = 0;
  for (RoundingMode rm : kModes)
    for (uint64_t a = 0; a < 256; a++)
      for (uint64_t b = 0; b < 256; b++) {
        if (fp::add(f, a, b, rm) !=
            fp::add(f, a, b, rm, {}, fp::AddImpl::SinglePath))
          bad++;
        if (fp::sub(f, a, b, rm) !=
            fp::sub(f, a, b, rm, {}, fp::AddImpl::SinglePath))
          bad++;
      }
  CHECK(bad == 0);
}

TEST_CASE("minifloat commutativity as bit patterns") {
  FloatFormat f = FloatFormat::minifloat();
  size_t bad = 0;
  for (RoundingMode rm : kModes)
    for (uint64_t a = 0; a < 256; a++)
      for (uint64_t b = 0; b < 256; b++) {
        if (fp::add(f, a, b, rm) != fp::add(f, b, a, rm))
          bad++;
        if (fp::mul(f, a, b, rm) != fp::mul(f, b, a, rm))
          bad++;
        if (fp::min(f, a, b) != fp::min(f, b, a))
          bad++;
        if (fp::max(f, a, b) != fp::max(f, b, a))
          bad++;
      }
  CHECK(bad == 0);
}

TEST_CASE("classification partitions are disjoint and cover") {
  FloatFormat f = FloatFormat::minifloat();
  int counts[10] = {0};
  for (uint64_t a = 0; a < 256; a++) {
    int n = (int)fp::is_nan(f, a) + (int)fp::is_inf(f, a) +
            (int)fp::is_zero(f, a) + (int)fp::is_subnormal(f, a) +
            (int)fp::is_normal(f, a);
    CHECK(n == 1);
    counts[(int)fp::classify(f, a)]++;
  }
  // 2 infs, 2 zeros, 2*7 subnormals, 2*(14*8-1... ) normals, rest NaN
  CHECK(counts[(int)FpClass::NegInf] == 1);
  CHECK(counts[(int)FpClass::PosInf] == 1);
  CHECK(counts[(int)FpClass::NegZero] == 1);
  CHECK(counts[(int)FpClass::PosZero] == 1);
  CHECK(counts[(int)FpClass::NegSubnormal] == 7);
  CHECK(counts[(int)FpClass::PosSubnormal] == 7);
  CHECK(counts[(int)FpClass::NegNormal] == 112);
  CHECK(counts[(int)FpClass::PosNormal] == 112);
  CHECK(counts[(int)FpClass::QNan] + counts[(int)FpClass::SNan] == 14);
}

TEST_CASE("binary32 classification spot values") {
  FloatFormat f = FloatFormat::binary32();
  CHECK(fp::classify(f, 0x7FC00000u) == FpClass::QNan);
  CHECK(fp::classify(f, 0x7FA00000u) == FpClass::SNan);
  CHECK(fp::classify(f, 0x00000001u) == FpClass::PosSubnormal);
  CHECK(fp::classify(f, 0x7F800000u) == FpClass::PosInf);
  CHECK(fp::classify(f, 0xFF800000u) == FpClass::NegInf);
  CHECK(fp::classify(f, 0x80000000u) == FpClass::NegZero);
  CHECK(fp::classify(f, 0x3F800000u) == FpClass::PosNormal);
}

TEST_CASE("NaN policy payload placement") {
  fp::NanPolicy on{true, 0x00080000};
  CHECK(fp::qnan_bits(FloatFormat::binary32()) == 0x7FC00000u);
  CHECK(fp::qnan_bits(FloatFormat::binary32(), on) == 0x7FC80000u);
  CHECK(fp::qnan_bits(FloatFormat::binary64()) == 0x7FF8000000000000ull);
  CHECK(fp::qnan_bits(FloatFormat::binary64(), on) == 0x7FF9000000000000ull);
  // minifloat fraction is too narrow for the payload
  CHECK(fp::qnan_bits(FloatFormat::minifloat(), on) ==
        fp::qnan_bits(FloatFormat::minifloat()));
  FloatFormat f = FloatFormat::binary32();
  CHECK(fp::add(f, 0x7FC00001u, fp::one_bits(f, 0), RoundingMode::RNE, on) ==
        0x7FC80000u);
}

// ---------------------------------------------------------------------
// Host comparison. The host's IEEE 754 hardware is the second
// independent oracle; rounding modes map through fesetround.
// ---------------------------------------------------------------------

namespace {

int host_mode(RoundingMode rm) {
  switch (rm) {
  case RoundingMode::RU: return FE_UPWARD;
  case RoundingMode::RD: return FE_DOWNWARD;
  case RoundingMode::RZ: return FE_TOWARDZERO;
  case RoundingMode::RNE: return FE_TONEAREST;
  }
  return FE_TONEAREST;
}

uint32_t f2b(float x) {
  uint32_t b;
  std::memcpy(&b, &x, 4);
  return b;
}

float b2f(uint32_t b) {
  float x;
  std::memcpy(&x, &b, 4);
  return x;
}

uint64_t d2b(double x) {
  uint64_t b;
  std::memcpy(&b, &x, 8);
  return b;
}

double b2d(uint64_t b) {
  double x;
  std::memcpy(&x, &b, 8);
  return x;
}

// NaN payloads differ between host hardware and the canonicalizing
// model; compare through canonicalization.
bool same32(FloatFormat f, uint64_t got, uint64_t want) {
  return fp::canonicalize(f, got) == fp::canonicalize(f, want);
}

uint32_t interesting32(std::mt19937_64 &rng) {
  uint64_t r = rng();
  uint32_t v = (uint32_t)r;
  switch ((r >> 32) & 15) {
  case 0: v = (v & 0x807FFFFFu); break;                // subnormal or zero
  case 1: v = (v & 0x807FFFFFu) | 0x7F800000u; break;  // inf or NaN
  case 2: v = (v & 0x80000000u) | 0x7F7FFFFFu; break;  // +-max finite
  case 3: v = (v & 0x80FFFFFFu) | 0x3F000000u; break;  // near 1.0
  case 4: {
    // small exponent distance pair material
    v = (v & 0x807FFFFFu) | ((uint32_t)(127 + (int)((r >> 36) & 3)) << 23);
    break;
  }
  default: break;
  }
  return v;
}

uint64_t interesting64(std::mt19937_64 &rng) {
  uint64_t r = rng();
  uint64_t v = rng();
  switch (r & 15) {
  case 0: v = (v & 0x800FFFFFFFFFFFFFull); break;
  case 1: v = (v & 0x800FFFFFFFFFFFFFull) | 0x7FF0000000000000ull; break;
  case 2: v = (v & 0x8000000000000000ull) | 0x7FEFFFFFFFFFFFFFull; break;
  default: break;
  }
  return v;
}

} // namespace

TEST_CASE("binary32 sampled conformance against host arithmetic") {
  FloatFormat f = FloatFormat::binary32();
  std::mt19937_64 rng(0x5eed5eedull);
  const size_t N = 1000000;
  std::vector<uint32_t> as(N), bs(N);
  for (size_t i = 0; i < N; i++) {
    as[i] = interesting32(rng);
    bs[i] = interesting32(rng);
  }
  size_t bad = 0;
  int old = fegetround();
  for (RoundingMode rm : kModes) {
    REQUIRE(fesetround(host_mode(rm)) == 0);
    for (size_t i = 0; i < N; i++) {
      volatile float x = b2f(as[i]);
      volatile float y = b2f(bs[i]);
      volatile float hadd = x + y;
      volatile float hsub = x - y;
      volatile float hmul = x * y;
      volatile float hdiv = x / y;
      if (!same32(f, fp::add(f, as[i], bs[i], rm), f2b(hadd)))
        bad++;
      if (!same32(f, fp::sub(f, as[i], bs[i], rm), f2b(hsub)))
        bad++;
      if (!same32(f, fp::mul(f, as[i], bs[i], rm), f2b(hmul)))
        bad++;
      if (!same32(f, fp::div(f, as[i], bs[i], rm), f2b(hdiv)))
        bad++;
      volatile float hrnd = nearbyintf(x);
      if (!same32(f, fp::round_to_integral(f, as[i], rm), f2b(hrnd)))
        bad++;
    }
  }
  fesetround(old);
  // min/max: mode-independent; ties between equal values (including
  // +-0 pairs) are implementation-defined on the host, so only ordered
  // pairs are compared against it.
  for (size_t i = 0; i < N; i++) {
    float x = b2f(as[i]), y = b2f(bs[i]);
    uint64_t gmin = fp::min(f, as[i], bs[i]);
    uint64_t gmax = fp::max(f, as[i], bs[i]);
    if (std::isnan(x) || std::isnan(y) || x != y) {
      if (!same32(f, gmin, f2b(fminf(x, y))))
        bad++;
      if (!same32(f, gmax, f2b(fmaxf(x, y))))
        bad++;
    } else {
      // equal per IEEE: result must be one of the operands, and the
      // zero-sign rule picks -0 for min, +0 for max
      bool zs_min = ((as[i] | bs[i]) >> 31) & 1;
      bool zs_max = ((as[i] & bs[i]) >> 31) & 1;
      if (fp::is_zero(f, as[i]) && fp::is_zero(f, bs[i])) {
        if (gmin != fp::zero_bits(f, zs_min))
          bad++;
        if (gmax != fp::zero_bits(f, zs_max))
          bad++;
      } else {
        if (gmin != as[i] && gmin != bs[i])
          bad++;
        if (gmax != as[i] && gmax != bs[i])
          bad++;
      }
    }
  }
  CHECK(bad == 0);
}

TEST_CASE("binary32 dual-path vs single-path sampled") {
  FloatFormat f = FloatFormat::binary32();
  std::mt19937_64 rng(0xadd5eedull);
  size_t bad = 0;
  for (size_t i = 0; i < 400000; i++) {
    uint32_t a = interesting32(rng), b = interesting32(rng);
    RoundingMode rm = kModes[rng() & 3];
    if (fp::add(f, a, b, rm) !=
        fp::add(f, a, b, rm, {}, fp::AddImpl::SinglePath))
      bad++;
    if (fp::sub(f, a, b, rm) !=
        fp::sub(f, a, b, rm, {}, fp::AddImpl::SinglePath))
      bad++;
  }
  CHECK(bad == 0);
}

TEST_CASE("binary64 sampled conformance against host arithmetic") {
  FloatFormat f = FloatFormat::binary64();
  std::mt19937_64 rng(0xdeed5eedull);
  const size_t N = 200000;
  size_t bad = 0;
  int old = fegetround();
  for (RoundingMode rm : kModes) {
    REQUIRE(fesetround(host_mode(rm)) == 0);
    for (size_t i = 0; i < N; i++) {
      uint64_t a = interesting64(rng), b = interesting64(rng);
      volatile double x = b2d(a);
      volatile double y = b2d(b);
      volatile double hadd = x + y;
      volatile double hsub = x - y;
      volatile double hmul = x * y;
      volatile double hdiv = x / y;
      auto same = [&](uint64_t got, uint64_t want) {
        return fp::canonicalize(f, got) == fp::canonicalize(f, want);
      };
      if (!same(fp::add(f, a, b, rm), d2b(hadd)))
        bad++;
      if (!same(fp::sub(f, a, b, rm), d2b(hsub)))
        bad++;
      if (!same(fp::mul(f, a, b, rm), d2b(hmul)))
        bad++;
      if (!same(fp::div(f, a, b, rm), d2b(hdiv)))
        bad++;
    }
  }
  fesetround(old);
  CHECK(bad == 0);
}

TEST_CASE("ieee comparison predicates") {
  FloatFormat f = FloatFormat::binary32();
  uint64_t pz = fp::zero_bits(f, 0), nz = fp::zero_bits(f, 1);
  uint64_t one = fp::one_bits(f, 0), mone = fp::one_bits(f, 1);
  uint64_t qn = fp::qnan_bits(f);
  CHECK(fp::ieee_eq(f, pz, nz));
  CHECK(!fp::ieee_lt(f, nz, pz));
  CHECK(fp::ieee_lt(f, mone, one));
  CHECK(fp::ieee_le(f, one, one));
  CHECK(!fp::ieee_eq(f, qn, qn));
  CHECK(!fp::ieee_lt(f, qn, one));
  CHECK(!fp::ieee_le(f, qn, one));
  CHECK(fp::ieee_lt(f, fp::inf_bits(f, 1), fp::max_finite_bits(f, 1)));
  CHECK(fp::ieee_lt(f, fp::max_finite_bits(f, 0), fp::inf_bits(f, 0)));
}

TEST_CASE("minifloat emitted circuits agree with the executable ops") {
  FloatFormat f = FloatFormat::minifloat();
  ExprArena A;
  Expr av = A.var("a", Type::ubits(8));
  Expr bv = A.var("b", Type::ubits(8));
  Expr rv = A.var("rm", Type::ubits(2));
  Expr cadd = fp::emit_add(A, f, av, bv, rv);
  Expr csub = fp::emit_add(A, f, av, bv, rv, true);
  Expr cadd1 = fp::emit_add(A, f, av, bv, rv, false, fp::AddImpl::SinglePath);
  Expr cmul = fp::emit_mul(A, f, av, bv, rv);
  Expr cdiv = fp::emit_div(A, f, av, bv, rv);
  Expr cmin = fp::emit_min(A, f, av, bv);
  Expr cmax = fp::emit_max(A, f, av, bv);
  Expr crnd = fp::emit_round(A, f, av, rv);
  Expr ccls = fp::emit_classify(A, f, av);

  std::mt19937_64 rng(0xc1c1c1ull);
  size_t bad = 0;
  for (int i = 0; i < 20000; i++) {
    uint64_t a = rng() & 0xff, b = rng() & 0xff;
    RoundingMode rm = kModes[rng() & 3];
    Env env;
    env.set(av, a);
    env.set(bv, b);
    env.set(rv, (uint64_t)rm);
    if (eval(cadd, env) != fp::add(f, a, b, rm))
      bad++;
    if (eval(csub, env) != fp::sub(f, a, b, rm))
      bad++;
    if (eval(cadd1, env) !=
        fp::add(f, a, b, rm, {}, fp::AddImpl::SinglePath))
      bad++;
    if (eval(cmul, env) != fp::mul(f, a, b, rm))
      bad++;
    if (eval(cdiv, env) != fp::div(f, a, b, rm))
      bad++;
    if (eval(cmin, env) != fp::min(f, a, b))
      bad++;
    if (eval(cmax, env) != fp::max(f, a, b))
      bad++;
    if (eval(crnd, env) != fp::round_to_integral(f, a, rm))
      bad++;
    if (eval(ccls, env) != (uint64_t)fp::classify(f, a))
      bad++;
  }
  CHECK(bad == 0);
}

TEST_CASE("binary32 emitted add evaluates like the executable on samples") {
  FloatFormat f = FloatFormat::binary32();
  ExprArena A;
  Expr av = A.var("a", Type::ubits(32));
  Expr bv = A.var("b", Type::ubits(32));
  Expr rv = A.var("rm", Type::ubits(2));
  Expr cadd = fp::emit_add(A, f, av, bv, rv);
  Expr cmul = fp::emit_mul(A, f, av, bv, rv);
  std::mt19937_64 rng(0xabcdefull);
  size_t bad = 0;
  for (int i = 0; i < 20000; i++) {
    uint64_t a = interesting32(rng), b = interesting32(rng);
    RoundingMode rm = kModes[rng() & 3];
    Env env;
    env.set(av, a);
    env.set(bv, b);
    env.set(rv, (uint64_t)rm);
    if (eval(cadd, env) != fp::add(f, a, b, rm))
      bad++;
    if (eval(cmul, env) != fp::mul(f, a, b, rm))
      bad++;
  }
  CHECK(bad == 0);
}
