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

#include "eqc/expr.h"

#include <cassert>
#include <sstream>
#include <stdexcept>

namespace eqc {

const char *to_string(RoundingMode rm) {
  switch (rm) {
  case RoundingMode::RU: return "RU";
  case RoundingMode::RD: return "RD";
  case RoundingMode::RZ: return "RZ";
  case RoundingMode::RNE: return "RNE";
  }
  return "?";
}

bool parse_rounding_mode(const std::string &s, RoundingMode &out) {
  if (s == "RNE") { out = RoundingMode::RNE; return true; }
  if (s == "RU") { out = RoundingMode::RU; return true; }
  if (s == "RD") { out = RoundingMode::RD; return true; }
  if (s == "RZ") { out = RoundingMode::RZ; return true; }
  return false;
}

std::string FloatFormat::name() const {
  if (*this == binary32()) return "binary32";
  if (*this == binary64()) return "binary64";
  if (*this == minifloat()) return "minifloat";
  return "float(" + std::to_string(exp_bits) + "," + std::to_string(sig_bits) +
         ")";
}

bool FloatFormat::parse(const std::string &s, FloatFormat &out) {
  if (s == "binary32" || s == "f32") { out = binary32(); return true; }
  if (s == "binary64" || s == "f64") { out = binary64(); return true; }
  if (s == "minifloat" || s == "mf") { out = minifloat(); return true; }
  return false;
}

Type Type::ubits(unsigned w) {
  if (w < 1 || w > 64) throw std::invalid_argument("bitvector width out of range");
  return Type{TypeKind::UBits, (uint8_t)w, {8, 24}};
}

Type Type::sbits(unsigned w) {
  if (w < 1 || w > 64) throw std::invalid_argument("bitvector width out of range");
  return Type{TypeKind::SBits, (uint8_t)w, {8, 24}};
}

std::string Type::to_string() const {
  switch (kind) {
  case TypeKind::Bool: return "bool";
  case TypeKind::UBits: return "u" + std::to_string(width_);
  case TypeKind::SBits: return "i" + std::to_string(width_);
  case TypeKind::Float: return fmt_.name();
  }
  return "?";
}

const char *op_name(Op op) {
  switch (op) {
  case Op::Const: return "const";
  case Op::Var: return "var";
  case Op::Not: return "not";
  case Op::And: return "and";
  case Op::Or: return "or";
  case Op::Xor: return "xor";
  case Op::Ite: return "ite";
  case Op::Eq: return "eq";
  case Op::Ult: return "ult";
  case Op::Ule: return "ule";
  case Op::Slt: return "slt";
  case Op::Sle: return "sle";
  case Op::BitNot: return "bitnot";
  case Op::BitAnd: return "bitand";
  case Op::BitOr: return "bitor";
  case Op::BitXor: return "bitxor";
  case Op::Neg: return "neg";
  case Op::Add: return "add";
  case Op::Sub: return "sub";
  case Op::Mul: return "mul";
  case Op::UDiv: return "udiv";
  case Op::URem: return "urem";
  case Op::Shl: return "shl";
  case Op::LShr: return "lshr";
  case Op::AShr: return "ashr";
  case Op::Extract: return "extract";
  case Op::Concat: return "concat";
  case Op::ZExt: return "zext";
  case Op::SExt: return "sext";
  case Op::Trunc: return "trunc";
  case Op::BoolToBits: return "bool2bits";
  case Op::FloatOfBits: return "float_of_bits";
  case Op::BitsOfFloat: return "bits_of_float";
  case Op::FpAdd: return "fp_add";
  case Op::FpSub: return "fp_sub";
  case Op::FpMul: return "fp_mul";
  case Op::FpDiv: return "fp_div";
  case Op::FpMin: return "fp_min";
  case Op::FpMax: return "fp_max";
  case Op::FpRound: return "fp_round";
  case Op::FpClassify: return "fp_classify";
  case Op::FpIsNan: return "isnan";
  case Op::FpIsInf: return "isinf";
  case Op::FpIsZero: return "iszero";
  case Op::FpIsSubnormal: return "issubnormal";
  case Op::FpIsNormal: return "isnormal";
  case Op::FpEq: return "fp_eq";
  case Op::FpLt: return "fp_lt";
  case Op::FpLe: return "fp_le";
  }
  return "?";
}

const char *to_string(FpClass c) {
  switch (c) {
  case FpClass::NegInf: return "-inf";
  case FpClass::NegNormal: return "-normal";
  case FpClass::NegSubnormal: return "-subnormal";
  case FpClass::NegZero: return "-0";
  case FpClass::PosZero: return "+0";
  case FpClass::PosSubnormal: return "+subnormal";
  case FpClass::PosNormal: return "+normal";
  case FpClass::PosInf: return "+inf";
  case FpClass::QNan: return "qNaN";
  case FpClass::SNan: return "sNaN";
  }
  return "?";
}

Op Expr::op() const { return node->op; }
Type Expr::type() const { return node->type; }
unsigned Expr::arity() const { return node->nkids; }
Expr Expr::kid(unsigned i) const {
  assert(i < node->nkids);
  return node->kids[i];
}
uint64_t Expr::aux() const { return node->aux; }
bool Expr::is_const() const { return node->op == Op::Const; }
uint64_t Expr::const_value() const {
  assert(is_const());
  return node->aux;
}
bool Expr::is_true() const {
  return is_const() && node->type.is_bool() && node->aux == 1;
}
bool Expr::is_false() const {
  return is_const() && node->type.is_bool() && node->aux == 0;
}
bool Expr::is_var() const { return node->op == Op::Var; }
const std::string &Expr::var_name() const {
  assert(is_var());
  return *node->name;
}

uint64_t truncate_to_width(uint64_t v, unsigned w) {
  return w >= 64 ? v : (v & ((uint64_t(1) << w) - 1));
}

static uint64_t sign_extend64(uint64_t v, unsigned w) {
  if (w >= 64) return v;
  uint64_t m = uint64_t(1) << (w - 1);
  return (v ^ m) - m;
}

// -------- interning --------

static uint64_t hash_mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 12) + (h >> 4);
  return h;
}

static uint64_t node_hash(Op op, Type t, const Expr *kids, unsigned n,
                          uint64_t aux, const std::string *name) {
  uint64_t h = (uint64_t)op * 0x100000001b3ull;
  h = hash_mix(h, ((uint64_t)t.kind << 32) | ((uint64_t)t.width_ << 16) |
                      ((uint64_t)t.fmt_.exp_bits << 8) | t.fmt_.sig_bits);
  h = hash_mix(h, aux);
  for (unsigned i = 0; i < n; i++)
    h = hash_mix(h, (uint64_t)(uintptr_t)kids[i].get());
  if (name) h = hash_mix(h, std::hash<std::string>()(*name));
  return h;
}

bool ExprArena::NodeEq::operator()(const NodeKey &a, const NodeKey &b) const {
  const ExprNode *x = a.n, *y = b.n;
  if (x->op != y->op || !(x->type == y->type) || x->nkids != y->nkids ||
      x->aux != y->aux || x->name != y->name)
    return false;
  for (unsigned i = 0; i < x->nkids; i++)
    if (x->kids[i] != y->kids[i]) return false;
  return true;
}

Expr ExprArena::intern(Op op, Type t, std::initializer_list<Expr> kids,
                       uint64_t aux, const std::string *name) {
  ExprNode probe;
  probe.op = op;
  probe.type = t;
  probe.nkids = (uint8_t)kids.size();
  probe.aux = aux;
  probe.name = name;
  unsigned i = 0;
  for (Expr k : kids) probe.kids[i++] = k;
  probe.hash = node_hash(op, t, probe.kids, probe.nkids, aux, name);

  auto it = interned_.find(NodeKey{&probe});
  if (it != interned_.end()) return Expr(it->second);
  nodes_.push_back(probe);
  const ExprNode *n = &nodes_.back();
  interned_.emplace(NodeKey{n}, n);
  return Expr(n);
}

Expr ExprArena::mk(Op op, Type t, std::initializer_list<Expr> kids,
                   uint64_t aux) {
  return intern(op, t, kids, aux, nullptr);
}

Expr ExprArena::tru() { return mk(Op::Const, Type::bool_(), {}, 1); }
Expr ExprArena::fls() { return mk(Op::Const, Type::bool_(), {}, 0); }

Expr ExprArena::constant(Type t, uint64_t value) {
  if (t.is_bool())
    return mk(Op::Const, t, {}, value ? 1 : 0);
  return mk(Op::Const, t, {}, truncate_to_width(value, t.width()));
}

Expr ExprArena::var(const std::string &name, Type t) {
  const std::string *interned;
  auto it = name_table_.find(name);
  if (it != name_table_.end()) {
    interned = it->second;
  } else {
    names_.push_back(name);
    interned = &names_.back();
    name_table_.emplace(name, interned);
  }
  return intern(Op::Var, t, {}, 0, interned);
}

Expr ExprArena::not_(Expr a) {
  assert(a.type().is_bool());
  if (a.is_const()) return bool_const(!a.const_value());
  if (a.op() == Op::Not) return a.kid(0);
  return mk(Op::Not, Type::bool_(), {a});
}

Expr ExprArena::and_(Expr a, Expr b) {
  assert(a.type().is_bool() && b.type().is_bool());
  if (a.is_true()) return b;
  if (b.is_true()) return a;
  if (a.is_false() || b.is_false()) return fls();
  if (a == b) return a;
  return mk(Op::And, Type::bool_(), {a, b});
}

Expr ExprArena::or_(Expr a, Expr b) {
  assert(a.type().is_bool() && b.type().is_bool());
  if (a.is_false()) return b;
  if (b.is_false()) return a;
  if (a.is_true() || b.is_true()) return tru();
  if (a == b) return a;
  return mk(Op::Or, Type::bool_(), {a, b});
}

Expr ExprArena::xor_(Expr a, Expr b) {
  assert(a.type().is_bool() && b.type().is_bool());
  if (a.is_const() && b.is_const())
    return bool_const(a.const_value() != b.const_value());
  if (a.is_false()) return b;
  if (b.is_false()) return a;
  if (a.is_true()) return not_(b);
  if (b.is_true()) return not_(a);
  return mk(Op::Xor, Type::bool_(), {a, b});
}

Expr ExprArena::and_all(const std::vector<Expr> &es) {
  Expr r = tru();
  for (Expr e : es) r = and_(r, e);
  return r;
}

Expr ExprArena::or_all(const std::vector<Expr> &es) {
  Expr r = fls();
  for (Expr e : es) r = or_(r, e);
  return r;
}

Expr ExprArena::ite(Expr c, Expr a, Expr b) {
  assert(c.type().is_bool());
  assert(a.type() == b.type());
  if (c.is_true()) return a;
  if (c.is_false()) return b;
  if (a == b) return a;
  if (a.type().is_bool()) {
    if (a.is_true() && b.is_false()) return c;
    if (a.is_false() && b.is_true()) return not_(c);
  }
  return mk(Op::Ite, a.type(), {c, a, b});
}

Expr ExprArena::eq(Expr a, Expr b) {
  assert(a.type() == b.type());
  if (a == b) return tru();
  if (a.is_const() && b.is_const())
    return bool_const(a.const_value() == b.const_value());
  return mk(Op::Eq, Type::bool_(), {a, b});
}

Expr ExprArena::ult(Expr a, Expr b) {
  assert(a.type().is_bits() && a.type().width() == b.type().width());
  if (a.is_const() && b.is_const())
    return bool_const(a.const_value() < b.const_value());
  return mk(Op::Ult, Type::bool_(), {a, b});
}

Expr ExprArena::ule(Expr a, Expr b) {
  assert(a.type().is_bits() && a.type().width() == b.type().width());
  if (a.is_const() && b.is_const())
    return bool_const(a.const_value() <= b.const_value());
  return mk(Op::Ule, Type::bool_(), {a, b});
}

Expr ExprArena::slt(Expr a, Expr b) {
  assert(a.type().is_bits() && a.type().width() == b.type().width());
  unsigned w = a.type().width();
  if (a.is_const() && b.is_const())
    return bool_const((int64_t)sign_extend64(a.const_value(), w) <
                      (int64_t)sign_extend64(b.const_value(), w));
  return mk(Op::Slt, Type::bool_(), {a, b});
}

Expr ExprArena::sle(Expr a, Expr b) {
  assert(a.type().is_bits() && a.type().width() == b.type().width());
  unsigned w = a.type().width();
  if (a.is_const() && b.is_const())
    return bool_const((int64_t)sign_extend64(a.const_value(), w) <=
                      (int64_t)sign_extend64(b.const_value(), w));
  return mk(Op::Sle, Type::bool_(), {a, b});
}

#define EQC_FOLD2(expr)                                                        \
  if (a.is_const() && b.is_const()) {                                          \
    uint64_t x = a.const_value(), y = b.const_value();                         \
    (void)y;                                                                   \
    return constant(a.type(), (expr));                                         \
  }

Expr ExprArena::bitnot(Expr a) {
  assert(a.type().is_bits());
  if (a.is_const()) return constant(a.type(), ~a.const_value());
  if (a.op() == Op::BitNot) return a.kid(0);
  return mk(Op::BitNot, a.type(), {a});
}

Expr ExprArena::bitand_(Expr a, Expr b) {
  assert(a.type() == b.type() && a.type().is_bits());
  EQC_FOLD2(x & y)
  if (a == b) return a;
  return mk(Op::BitAnd, a.type(), {a, b});
}

Expr ExprArena::bitor_(Expr a, Expr b) {
  assert(a.type() == b.type() && a.type().is_bits());
  EQC_FOLD2(x | y)
  if (a == b) return a;
  return mk(Op::BitOr, a.type(), {a, b});
}

Expr ExprArena::bitxor_(Expr a, Expr b) {
  assert(a.type() == b.type() && a.type().is_bits());
  EQC_FOLD2(x ^ y)
  if (a == b) return constant(a.type(), 0);
  return mk(Op::BitXor, a.type(), {a, b});
}

Expr ExprArena::neg(Expr a) {
  assert(a.type().is_bits());
  if (a.is_const()) return constant(a.type(), 0 - a.const_value());
  return mk(Op::Neg, a.type(), {a});
}

Expr ExprArena::add(Expr a, Expr b) {
  assert(a.type() == b.type() && a.type().is_bits());
  EQC_FOLD2(x + y)
  return mk(Op::Add, a.type(), {a, b});
}

Expr ExprArena::sub(Expr a, Expr b) {
  assert(a.type() == b.type() && a.type().is_bits());
  EQC_FOLD2(x - y)
  return mk(Op::Sub, a.type(), {a, b});
}

Expr ExprArena::mul(Expr a, Expr b) {
  assert(a.type() == b.type() && a.type().is_bits());
  EQC_FOLD2(x * y)
  return mk(Op::Mul, a.type(), {a, b});
}

// division by zero yields all-ones quotient and the dividend as
// remainder, matching the bit-blasted restoring divider
Expr ExprArena::udiv(Expr a, Expr b) {
  assert(a.type() == b.type() && a.type().is_bits());
  EQC_FOLD2(y == 0 ? ~uint64_t(0) : x / y)
  return mk(Op::UDiv, a.type(), {a, b});
}

Expr ExprArena::urem(Expr a, Expr b) {
  assert(a.type() == b.type() && a.type().is_bits());
  EQC_FOLD2(y == 0 ? x : x % y)
  return mk(Op::URem, a.type(), {a, b});
}

// shift amounts >= width yield 0 (logical) / sign fill (arithmetic)
Expr ExprArena::shl(Expr a, Expr b) {
  assert(a.type().is_bits() && b.type().is_bits());
  unsigned w = a.type().width();
  if (a.is_const() && b.is_const()) {
    uint64_t s = b.const_value();
    return constant(a.type(), s >= w ? 0 : a.const_value() << s);
  }
  if (b.is_const() && b.const_value() == 0) return a;
  return mk(Op::Shl, a.type(), {a, b});
}

Expr ExprArena::lshr(Expr a, Expr b) {
  assert(a.type().is_bits() && b.type().is_bits());
  unsigned w = a.type().width();
  if (a.is_const() && b.is_const()) {
    uint64_t s = b.const_value();
    return constant(a.type(), s >= w ? 0 : a.const_value() >> s);
  }
  if (b.is_const() && b.const_value() == 0) return a;
  return mk(Op::LShr, a.type(), {a, b});
}

Expr ExprArena::ashr(Expr a, Expr b) {
  assert(a.type().is_bits() && b.type().is_bits());
  unsigned w = a.type().width();
  if (a.is_const() && b.is_const()) {
    uint64_t s = b.const_value();
    int64_t x = (int64_t)sign_extend64(a.const_value(), w);
    return constant(a.type(), s >= w ? (uint64_t)(x >> 63)
                                     : (uint64_t)(x >> (unsigned)s));
  }
  if (b.is_const() && b.const_value() == 0) return a;
  return mk(Op::AShr, a.type(), {a, b});
}

Expr ExprArena::extract(Expr a, unsigned hi, unsigned lo) {
  assert(a.type().is_bits() && hi < a.type().width() && lo <= hi);
  unsigned w = hi - lo + 1;
  if (a.is_const())
    return constant(Type::ubits(w), a.const_value() >> lo);
  if (lo == 0 && w == a.type().width() && !a.type().is_signed()) return a;
  return mk(Op::Extract, Type::ubits(w), {a}, ((uint64_t)hi << 8) | lo);
}

Expr ExprArena::concat(Expr hi, Expr lo) {
  assert(hi.type().is_bits() && lo.type().is_bits());
  unsigned w = hi.type().width() + lo.type().width();
  assert(w <= 64);
  if (hi.is_const() && lo.is_const())
    return constant(Type::ubits(w), (hi.const_value() << lo.type().width()) |
                                        lo.const_value());
  return mk(Op::Concat, Type::ubits(w), {hi, lo});
}

Expr ExprArena::zext(Expr a, unsigned w) {
  assert(a.type().is_bits() && w >= a.type().width());
  if (w == a.type().width())
    return a.type().is_signed() ? mk(Op::ZExt, Type::ubits(w), {a}) : a;
  if (a.is_const()) return constant(Type::ubits(w), a.const_value());
  return mk(Op::ZExt, Type::ubits(w), {a});
}

Expr ExprArena::sext(Expr a, unsigned w) {
  assert(a.type().is_bits() && w >= a.type().width());
  unsigned aw = a.type().width();
  if (w == aw && a.type().is_signed()) return a;
  if (a.is_const())
    return constant(Type::sbits(w), sign_extend64(a.const_value(), aw));
  return mk(Op::SExt, Type::sbits(w), {a});
}

Expr ExprArena::trunc(Expr a, unsigned w) {
  assert(a.type().is_bits() && w <= a.type().width());
  if (w == a.type().width() && !a.type().is_signed()) return a;
  if (a.is_const()) return constant(Type::ubits(w), a.const_value());
  return mk(Op::Trunc, Type::ubits(w), {a});
}

Expr ExprArena::bool_to_bits(Expr a) {
  assert(a.type().is_bool());
  if (a.is_const()) return constant(Type::ubits(1), a.const_value());
  return mk(Op::BoolToBits, Type::ubits(1), {a});
}

Expr ExprArena::cast(Expr a, Type to) {
  if (a.type() == to) return a;
  if (to.is_bool()) {
    assert(a.type().is_bits());
    return ne(a, constant(a.type(), 0));
  }
  if (a.type().is_bool()) {
    Expr b = bool_to_bits(a);
    return cast(b, to);
  }
  assert(a.type().is_bits() && to.is_bits());
  unsigned aw = a.type().width(), tw = to.width();
  Expr r = a;
  if (tw < aw)
    r = trunc(a, tw);
  else if (tw > aw)
    r = a.type().is_signed() ? sext(a, tw) : zext(a, tw);
  // same-width zext/sext/trunc reinterpret signedness, bits unchanged
  if (r.type() == to) return r;
  return to.is_signed() ? sext(r, tw) : trunc(r, tw);
}

Expr ExprArena::float_of_bits(Expr bits, FloatFormat fmt) {
  assert(bits.type().is_bits() && bits.type().width() == fmt.width());
  if (bits.op() == Op::BitsOfFloat && bits.kid(0).type().fmt() == fmt)
    return bits.kid(0);
  return mk(Op::FloatOfBits, Type::float_(fmt), {bits});
}

Expr ExprArena::bits_of_float(Expr f) {
  assert(f.type().is_float());
  if (f.op() == Op::FloatOfBits) return f.kid(0);
  return mk(Op::BitsOfFloat, Type::ubits(f.type().fmt().width()), {f});
}

static void check_fp_binop(Expr a, Expr b) {
  assert(a.type().is_float() && a.type() == b.type());
  (void)a;
  (void)b;
}

Expr ExprArena::fp_add(Expr a, Expr b, Expr rm) {
  check_fp_binop(a, b);
  assert(rm.type() == Type::ubits(2));
  return mk(Op::FpAdd, a.type(), {a, b, rm});
}
Expr ExprArena::fp_sub(Expr a, Expr b, Expr rm) {
  check_fp_binop(a, b);
  assert(rm.type() == Type::ubits(2));
  return mk(Op::FpSub, a.type(), {a, b, rm});
}
Expr ExprArena::fp_mul(Expr a, Expr b, Expr rm) {
  check_fp_binop(a, b);
  assert(rm.type() == Type::ubits(2));
  return mk(Op::FpMul, a.type(), {a, b, rm});
}
Expr ExprArena::fp_div(Expr a, Expr b, Expr rm) {
  check_fp_binop(a, b);
  assert(rm.type() == Type::ubits(2));
  return mk(Op::FpDiv, a.type(), {a, b, rm});
}
Expr ExprArena::fp_min(Expr a, Expr b) {
  check_fp_binop(a, b);
  return mk(Op::FpMin, a.type(), {a, b});
}
Expr ExprArena::fp_max(Expr a, Expr b) {
  check_fp_binop(a, b);
  return mk(Op::FpMax, a.type(), {a, b});
}
Expr ExprArena::fp_round(Expr a, Expr rm) {
  assert(a.type().is_float() && rm.type() == Type::ubits(2));
  return mk(Op::FpRound, a.type(), {a, rm});
}
Expr ExprArena::fp_classify(Expr a) {
  assert(a.type().is_float());
  return mk(Op::FpClassify, Type::ubits(4), {a});
}
Expr ExprArena::fp_is_nan(Expr a) {
  assert(a.type().is_float());
  return mk(Op::FpIsNan, Type::bool_(), {a});
}
Expr ExprArena::fp_is_inf(Expr a) {
  assert(a.type().is_float());
  return mk(Op::FpIsInf, Type::bool_(), {a});
}
Expr ExprArena::fp_is_zero(Expr a) {
  assert(a.type().is_float());
  return mk(Op::FpIsZero, Type::bool_(), {a});
}
Expr ExprArena::fp_is_subnormal(Expr a) {
  assert(a.type().is_float());
  return mk(Op::FpIsSubnormal, Type::bool_(), {a});
}
Expr ExprArena::fp_is_normal(Expr a) {
  assert(a.type().is_float());
  return mk(Op::FpIsNormal, Type::bool_(), {a});
}
Expr ExprArena::fp_eq(Expr a, Expr b) {
  check_fp_binop(a, b);
  return mk(Op::FpEq, Type::bool_(), {a, b});
}
Expr ExprArena::fp_lt(Expr a, Expr b) {
  check_fp_binop(a, b);
  return mk(Op::FpLt, Type::bool_(), {a, b});
}
Expr ExprArena::fp_le(Expr a, Expr b) {
  check_fp_binop(a, b);
  return mk(Op::FpLe, Type::bool_(), {a, b});
}

// -------- printing --------

namespace {

// precedence levels, loosely C-like; higher binds tighter
int prec_of(Op op) {
  switch (op) {
  case Op::Ite: return 1;
  case Op::Or: return 2;
  case Op::And: return 3;
  case Op::BitOr: return 4;
  case Op::BitXor: case Op::Xor: return 5;
  case Op::BitAnd: return 6;
  case Op::Eq: case Op::FpEq: return 7;
  case Op::Ult: case Op::Ule: case Op::Slt: case Op::Sle:
  case Op::FpLt: case Op::FpLe: return 8;
  case Op::Shl: case Op::LShr: case Op::AShr: return 9;
  case Op::Add: case Op::Sub: return 10;
  case Op::Mul: case Op::UDiv: case Op::URem: return 11;
  case Op::Not: case Op::BitNot: case Op::Neg: return 12;
  default: return 13;
  }
}

void print_rec(std::ostringstream &os, Expr e, int parent_prec);

void print_infix(std::ostringstream &os, Expr e, const char *sym,
                 int parent_prec) {
  int p = prec_of(e.op());
  if (p <= parent_prec) os << "(";
  print_rec(os, e.kid(0), p - 1);
  os << " " << sym << " ";
  print_rec(os, e.kid(1), p);
  if (p <= parent_prec) os << ")";
}

void print_call(std::ostringstream &os, const char *fn, Expr e) {
  os << fn << "(";
  for (unsigned i = 0; i < e.arity(); i++) {
    if (i) os << ", ";
    print_rec(os, e.kid(i), 0);
  }
  os << ")";
}

void print_rec(std::ostringstream &os, Expr e, int parent_prec) {
  switch (e.op()) {
  case Op::Const:
    if (e.type().is_bool()) {
      os << (e.const_value() ? "true" : "false");
    } else if (e.type().is_float()) {
      os << "fconst";
    } else if (e.type().is_signed()) {
      os << (int64_t)sign_extend64(e.const_value(), e.type().width());
    } else {
      os << e.const_value();
    }
    return;
  case Op::Var: os << e.var_name(); return;
  case Op::Not:
    os << "!";
    print_rec(os, e.kid(0), prec_of(e.op()) - 1);
    return;
  case Op::BitNot:
    os << "~";
    print_rec(os, e.kid(0), prec_of(e.op()) - 1);
    return;
  case Op::Neg:
    os << "-";
    print_rec(os, e.kid(0), prec_of(e.op()) - 1);
    return;
  case Op::And: print_infix(os, e, "&&", parent_prec); return;
  case Op::Or: print_infix(os, e, "||", parent_prec); return;
  case Op::Xor: print_infix(os, e, "^^", parent_prec); return;
  case Op::Ite: print_call(os, "ite", e); return;
  case Op::Eq: print_infix(os, e, "==", parent_prec); return;
  case Op::Ult: case Op::Slt: case Op::FpLt:
    print_infix(os, e, "<", parent_prec);
    return;
  case Op::Ule: case Op::Sle: case Op::FpLe:
    print_infix(os, e, "<=", parent_prec);
    return;
  case Op::FpEq: print_infix(os, e, "==", parent_prec); return;
  case Op::BitAnd: print_infix(os, e, "&", parent_prec); return;
  case Op::BitOr: print_infix(os, e, "|", parent_prec); return;
  case Op::BitXor: print_infix(os, e, "^", parent_prec); return;
  case Op::Add: print_infix(os, e, "+", parent_prec); return;
  case Op::Sub: print_infix(os, e, "-", parent_prec); return;
  case Op::Mul: print_infix(os, e, "*", parent_prec); return;
  case Op::UDiv: print_infix(os, e, "/", parent_prec); return;
  case Op::URem: print_infix(os, e, "%", parent_prec); return;
  case Op::Shl: print_infix(os, e, "<<", parent_prec); return;
  case Op::LShr: case Op::AShr: print_infix(os, e, ">>", parent_prec); return;
  case Op::Extract:
    print_rec(os, e.kid(0), 13);
    os << "[" << (e.aux() >> 8) << ":" << (e.aux() & 0xff) << "]";
    return;
  default: print_call(os, op_name(e.op()), e); return;
  }
}

} // namespace

std::string to_string(Expr e) {
  std::ostringstream os;
  print_rec(os, e, 0);
  return os.str();
}

static void collect_vars_rec(Expr e, std::vector<Expr> &out,
                             std::unordered_map<const ExprNode *, bool> &seen) {
  if (seen.count(e.get())) return;
  seen[e.get()] = true;
  if (e.is_var()) {
    out.push_back(e);
    return;
  }
  for (unsigned i = 0; i < e.arity(); i++) collect_vars_rec(e.kid(i), out, seen);
}

void collect_vars(Expr e, std::vector<Expr> &out) {
  std::unordered_map<const ExprNode *, bool> seen;
  collect_vars_rec(e, out, seen);
}

Expr rebuild(ExprArena &A, Expr e, const Expr *kids, size_t nkids) {
  assert(nkids == e.arity());
  (void)nkids;
  const Expr *k = kids;
  switch (e.op()) {
  case Op::Const:
  case Op::Var: return e;
  case Op::Not: return A.not_(k[0]);
  case Op::And: return A.and_(k[0], k[1]);
  case Op::Or: return A.or_(k[0], k[1]);
  case Op::Xor: return A.xor_(k[0], k[1]);
  case Op::Ite: return A.ite(k[0], k[1], k[2]);
  case Op::Eq: return A.eq(k[0], k[1]);
  case Op::Ult: return A.ult(k[0], k[1]);
  case Op::Ule: return A.ule(k[0], k[1]);
  case Op::Slt: return A.slt(k[0], k[1]);
  case Op::Sle: return A.sle(k[0], k[1]);
  case Op::BitNot: return A.bitnot(k[0]);
  case Op::BitAnd: return A.bitand_(k[0], k[1]);
  case Op::BitOr: return A.bitor_(k[0], k[1]);
  case Op::BitXor: return A.bitxor_(k[0], k[1]);
  case Op::Neg: return A.neg(k[0]);
  case Op::Add: return A.add(k[0], k[1]);
  case Op::Sub: return A.sub(k[0], k[1]);
  case Op::Mul: return A.mul(k[0], k[1]);
  case Op::UDiv: return A.udiv(k[0], k[1]);
  case Op::URem: return A.urem(k[0], k[1]);
  case Op::Shl: return A.shl(k[0], k[1]);
  case Op::LShr: return A.lshr(k[0], k[1]);
  case Op::AShr: return A.ashr(k[0], k[1]);
  case Op::Extract:
    return A.extract(k[0], (unsigned)(e.aux() >> 8), (unsigned)(e.aux() & 0xff));
  case Op::Concat: return A.concat(k[0], k[1]);
  case Op::ZExt: return A.zext(k[0], e.type().width());
  case Op::SExt: return A.sext(k[0], e.type().width());
  case Op::Trunc: return A.trunc(k[0], e.type().width());
  case Op::BoolToBits: return A.bool_to_bits(k[0]);
  case Op::FloatOfBits: return A.float_of_bits(k[0], e.type().fmt());
  case Op::BitsOfFloat: return A.bits_of_float(k[0]);
  case Op::FpAdd: return A.fp_add(k[0], k[1], k[2]);
  case Op::FpSub: return A.fp_sub(k[0], k[1], k[2]);
  case Op::FpMul: return A.fp_mul(k[0], k[1], k[2]);
  case Op::FpDiv: return A.fp_div(k[0], k[1], k[2]);
  case Op::FpMin: return A.fp_min(k[0], k[1]);
  case Op::FpMax: return A.fp_max(k[0], k[1]);
  case Op::FpRound: return A.fp_round(k[0], k[1]);
  case Op::FpClassify: return A.fp_classify(k[0]);
  case Op::FpIsNan: return A.fp_is_nan(k[0]);
  case Op::FpIsInf: return A.fp_is_inf(k[0]);
  case Op::FpIsZero: return A.fp_is_zero(k[0]);
  case Op::FpIsSubnormal: return A.fp_is_subnormal(k[0]);
  case Op::FpIsNormal: return A.fp_is_normal(k[0]);
  case Op::FpEq: return A.fp_eq(k[0], k[1]);
  case Op::FpLt: return A.fp_lt(k[0], k[1]);
  case Op::FpLe: return A.fp_le(k[0], k[1]);
  }
  throw std::logic_error("rebuild: unhandled op");
}

} // namespace eqc
