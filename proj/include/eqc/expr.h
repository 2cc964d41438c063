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

#ifndef EQC_EXPR_H
#define EQC_EXPR_H

#include <cstdint>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

namespace eqc {

// Rounding modes use the wire encoding of the reference model:
// RU=0, RD=1, RZ=2, RNE=3. The two-bit rm operand of rounded
// operations is interpreted with exactly these values.
enum class RoundingMode : uint8_t { RU = 0, RD = 1, RZ = 2, RNE = 3 };

const char *to_string(RoundingMode rm);
bool parse_rounding_mode(const std::string &s, RoundingMode &out);

struct FloatFormat {
  uint8_t exp_bits;
  uint8_t sig_bits; // significand bits including the hidden bit

  constexpr unsigned frac_bits() const { return sig_bits - 1u; }
  constexpr unsigned width() const { return 1u + exp_bits + frac_bits(); }
  constexpr int bias() const { return (1 << (exp_bits - 1)) - 1; }
  constexpr int emax() const { return bias(); }

  static constexpr FloatFormat binary32() { return {8, 24}; }
  static constexpr FloatFormat binary64() { return {11, 53}; }
  // 8-bit test format, small enough for exhaustive checks
  static constexpr FloatFormat minifloat() { return {4, 4}; }

  bool operator==(const FloatFormat &o) const {
    return exp_bits == o.exp_bits && sig_bits == o.sig_bits;
  }
  bool operator!=(const FloatFormat &o) const { return !(*this == o); }

  std::string name() const;
  static bool parse(const std::string &s, FloatFormat &out);
};

enum class TypeKind : uint8_t { Bool, UBits, SBits, Float };

// Value type describing bool, fixed-width bitvectors (1..64) and the
// supported float formats.
struct Type {
  TypeKind kind = TypeKind::Bool;
  uint8_t width_ = 1;
  FloatFormat fmt_{8, 24};

  static Type bool_() { return Type{TypeKind::Bool, 1, {8, 24}}; }
  static Type ubits(unsigned w);
  static Type sbits(unsigned w);
  static Type float_(FloatFormat f) {
    return Type{TypeKind::Float, (uint8_t)f.width(), f};
  }

  bool is_bool() const { return kind == TypeKind::Bool; }
  bool is_bits() const {
    return kind == TypeKind::UBits || kind == TypeKind::SBits;
  }
  bool is_signed() const { return kind == TypeKind::SBits; }
  bool is_float() const { return kind == TypeKind::Float; }
  unsigned width() const { return width_; }
  FloatFormat fmt() const { return fmt_; }

  bool operator==(const Type &o) const {
    if (kind != o.kind) return false;
    if (kind == TypeKind::Float) return fmt_ == o.fmt_;
    return width_ == o.width_;
  }
  bool operator!=(const Type &o) const { return !(*this == o); }

  std::string to_string() const;
};

enum class Op : uint8_t {
  Const,
  Var,
  // boolean
  Not,
  And,
  Or,
  Xor,
  // polymorphic
  Ite,
  Eq,
  // bitvector comparisons
  Ult,
  Ule,
  Slt,
  Sle,
  // bitvector arithmetic / bitwise / shifts
  BitNot,
  BitAnd,
  BitOr,
  BitXor,
  Neg,
  Add,
  Sub,
  Mul,
  UDiv,
  URem,
  Shl,
  LShr,
  AShr,
  // structural
  Extract, // aux = hi<<8 | lo
  Concat,  // kid0 = high part, kid1 = low part
  ZExt,
  SExt,
  Trunc,
  BoolToBits, // bool -> ubits(1)
  // float <-> bits reinterpretation
  FloatOfBits,
  BitsOfFloat,
  // float arithmetic; rounded ops carry a ubits(2) rm as last operand
  FpAdd,
  FpSub,
  FpMul,
  FpDiv,
  FpMin,
  FpMax,
  FpRound,
  FpClassify, // float -> ubits(4) class code
  FpIsNan,
  FpIsInf,
  FpIsZero,
  FpIsSubnormal,
  FpIsNormal,
  FpEq, // IEEE equality (NaN != NaN, +0 == -0)
  FpLt,
  FpLe,
};

const char *op_name(Op op);

struct ExprNode;

// Lightweight handle to an interned expression node. Structural
// equality coincides with pointer equality within one arena.
struct Expr {
  const ExprNode *node = nullptr;

  Expr() = default;
  explicit Expr(const ExprNode *n) : node(n) {}

  bool valid() const { return node != nullptr; }
  const ExprNode *get() const { return node; }

  Op op() const;
  Type type() const;
  unsigned arity() const;
  Expr kid(unsigned i) const;
  uint64_t aux() const;

  bool is_const() const;
  uint64_t const_value() const; // requires is_const()
  bool is_true() const;
  bool is_false() const;
  bool is_var() const;
  const std::string &var_name() const; // requires is_var()

  bool operator==(const Expr &o) const { return node == o.node; }
  bool operator!=(const Expr &o) const { return node != o.node; }
};

struct ExprNode {
  Op op;
  Type type;
  uint8_t nkids;
  uint64_t aux;      // constant value, var name index, extract range
  Expr kids[3];
  uint64_t hash;
  const std::string *name; // interned var name, null otherwise
};

// Ten-way classification code produced by FpClassify.
enum class FpClass : uint8_t {
  NegInf = 0,
  NegNormal = 1,
  NegSubnormal = 2,
  NegZero = 3,
  PosZero = 4,
  PosSubnormal = 5,
  PosNormal = 6,
  PosInf = 7,
  QNan = 8,
  SNan = 9,
};

const char *to_string(FpClass c);

// Owns and interns expression nodes. Single-owner during construction;
// the nodes themselves are immutable once created. Each analysis run
// owns its arena; arenas are never shared between concurrent workers.
class ExprArena {
public:
  ExprArena() = default;
  ExprArena(const ExprArena &) = delete;
  ExprArena &operator=(const ExprArena &) = delete;

  // leaves
  Expr tru();
  Expr fls();
  Expr bool_const(bool b) { return b ? tru() : fls(); }
  Expr constant(Type t, uint64_t value); // value truncated to width
  Expr var(const std::string &name, Type t);

  // boolean
  Expr not_(Expr a);
  Expr and_(Expr a, Expr b);
  Expr or_(Expr a, Expr b);
  Expr xor_(Expr a, Expr b);
  Expr implies(Expr a, Expr b) { return or_(not_(a), b); }
  Expr and_all(const std::vector<Expr> &es);
  Expr or_all(const std::vector<Expr> &es);

  Expr ite(Expr c, Expr a, Expr b);
  Expr eq(Expr a, Expr b);
  Expr ne(Expr a, Expr b) { return not_(eq(a, b)); }
  Expr ult(Expr a, Expr b);
  Expr ule(Expr a, Expr b);
  Expr slt(Expr a, Expr b);
  Expr sle(Expr a, Expr b);

  Expr bitnot(Expr a);
  Expr bitand_(Expr a, Expr b);
  Expr bitor_(Expr a, Expr b);
  Expr bitxor_(Expr a, Expr b);
  Expr neg(Expr a);
  Expr add(Expr a, Expr b);
  Expr sub(Expr a, Expr b);
  Expr mul(Expr a, Expr b);
  Expr udiv(Expr a, Expr b);
  Expr urem(Expr a, Expr b);
  Expr shl(Expr a, Expr b);
  Expr lshr(Expr a, Expr b);
  Expr ashr(Expr a, Expr b);

  Expr extract(Expr a, unsigned hi, unsigned lo);
  Expr concat(Expr hi, Expr lo);
  Expr zext(Expr a, unsigned w);
  Expr sext(Expr a, unsigned w);
  Expr trunc(Expr a, unsigned w);
  Expr bool_to_bits(Expr a);
  // width/signedness adaptation used by the typechecker
  Expr cast(Expr a, Type to);

  Expr float_of_bits(Expr bits, FloatFormat fmt);
  Expr bits_of_float(Expr f);

  Expr fp_add(Expr a, Expr b, Expr rm);
  Expr fp_sub(Expr a, Expr b, Expr rm);
  Expr fp_mul(Expr a, Expr b, Expr rm);
  Expr fp_div(Expr a, Expr b, Expr rm);
  Expr fp_min(Expr a, Expr b);
  Expr fp_max(Expr a, Expr b);
  Expr fp_round(Expr a, Expr rm);
  Expr fp_classify(Expr a);
  Expr fp_is_nan(Expr a);
  Expr fp_is_inf(Expr a);
  Expr fp_is_zero(Expr a);
  Expr fp_is_subnormal(Expr a);
  Expr fp_is_normal(Expr a);
  Expr fp_eq(Expr a, Expr b);
  Expr fp_lt(Expr a, Expr b);
  Expr fp_le(Expr a, Expr b);

  Expr rm_const(RoundingMode rm) {
    return constant(Type::ubits(2), (uint64_t)rm);
  }

  size_t node_count() const { return nodes_.size(); }

private:
  Expr intern(Op op, Type t, std::initializer_list<Expr> kids, uint64_t aux,
              const std::string *name);
  Expr mk(Op op, Type t, std::initializer_list<Expr> kids, uint64_t aux = 0);

  struct NodeKey {
    const ExprNode *n;
  };
  struct NodeHash {
    size_t operator()(const NodeKey &k) const { return (size_t)k.n->hash; }
  };
  struct NodeEq {
    bool operator()(const NodeKey &a, const NodeKey &b) const;
  };

  std::deque<ExprNode> nodes_;
  std::unordered_map<NodeKey, const ExprNode *, NodeHash, NodeEq> interned_;
  std::deque<std::string> names_;
  std::unordered_map<std::string, const std::string *> name_table_;
};

// C-like rendering, used by the SSA dump and diagnostics.
std::string to_string(Expr e);

// Collects the distinct variables of e in first-occurrence order.
void collect_vars(Expr e, std::vector<Expr> &out);

// Rebuilds e with the given children through the arena's builders, so
// interning and constant folding reapply. nkids must equal e's arity;
// leaves return e itself.
Expr rebuild(ExprArena &arena, Expr e, const Expr *kids, size_t nkids);

uint64_t truncate_to_width(uint64_t v, unsigned w);

} // namespace eqc

#endif
