#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>

#include "microdom/error.hpp"

namespace microdom {

using Int = mpz_class;
using Rat = mpq_class;

enum class Ord { less, equal, greater };
enum class Round { down, up };  // toward -inf / toward +inf

inline Round flip(Round r) { return r == Round::down ? Round::up : Round::down; }

/// Exact scalar: either a dyadic mant*2^exp (mant odd or zero, exp an
/// arbitrary-size integer) or a reduced rational whose denominator has an odd
/// prime factor. Rationals with power-of-two denominators normalize to the
/// dyadic variant, so representation is canonical and equality is structural.
///
/// All arithmetic is exact. Operations that would require materializing an
/// astronomically long mantissa (adding dyadics whose exponents differ by more
/// than the bit budget, expanding 2^e with |e| beyond the budget into a
/// rational) throw Error instead of silently approximating; enclosure
/// arithmetic (IntervalVal + directed rounding) is the intended route there.
class Value {
 public:
  Value() : rep_(Dyadic{0, 0}) {}

  static Value integer(long v) { return dyadic(Int(v), 0); }
  static Value integer(Int v) { return dyadic(std::move(v), 0); }
  static Value dyadic(Int mant, Int exp);
  /// 2^e for arbitrary-size e.
  static Value pow2(Int e) { return dyadic(1, std::move(e)); }
  static Value rational(Int num, Int den);
  static Value from_mpq(const Rat& q);
  static Value half() { return pow2(-1); }
  static Value one() { return integer(1); }
  static Value zero() { return Value(); }

  bool is_dyadic() const { return std::holds_alternative<Dyadic>(rep_); }
  bool is_rational() const { return !is_dyadic(); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const;
  /// Dyadic with mantissa +-1 (an exact signed power of two).
  bool is_pow2() const;

  const Int& mant() const { return std::get<Dyadic>(rep_).mant; }
  const Int& exp() const { return std::get<Dyadic>(rep_).exp; }
  const Rat& rat() const { return std::get<Rat>(rep_); }

  int sign() const;

  Value operator-() const;
  Value abs() const { return sign() < 0 ? -*this : *this; }

  friend Value operator+(const Value& a, const Value& b);
  friend Value operator-(const Value& a, const Value& b);
  friend Value operator*(const Value& a, const Value& b);
  friend Value operator/(const Value& a, const Value& b);

  /// Exact integer power, k may be negative (then *this must be nonzero).
  Value pow_int(long k) const;

  /// Exact total comparison. Never expands across huge exponent gaps:
  /// magnitudes are pre-separated through integer log2 bounds.
  static Ord cmp(const Value& a, const Value& b);

  bool operator==(const Value& o) const { return cmp(*this, o) == Ord::equal; }
  bool operator!=(const Value& o) const { return !(*this == o); }
  bool operator<(const Value& o) const { return cmp(*this, o) == Ord::less; }
  bool operator>(const Value& o) const { return cmp(*this, o) == Ord::greater; }
  bool operator<=(const Value& o) const { return cmp(*this, o) != Ord::greater; }
  bool operator>=(const Value& o) const { return cmp(*this, o) != Ord::less; }

  /// Integer bounds lo <= log2|x| < lo+1 ... returns [lo, hi] with hi-lo <= 1
  /// such that 2^lo <= |x| <= 2^hi. Requires x != 0.
  std::pair<Int, Int> log2_bounds() const;

  /// floor(x) as an integer (guarded against budget-exceeding shifts).
  Int floor_int() const;
  Int ceil_int() const;

  /// Directed rounding to a dyadic with mantissa of at most `bits` bits.
  Value round_bits(long bits, Round dir) const;

  /// Exact conversion to mpq (guarded against huge-exponent expansion).
  Rat as_rat() const { return to_rat_guarded(); }

  /// Approximate double, for diagnostics only (clamps on over/underflow).
  double to_double() const;

  /// Textual value grammar: "p/q", "m*2^e", "2^-K", plain integers.
  std::string str() const;
  static Value parse(std::string_view text);

  /// Budget for exact cross-scale expansion, in bits.
  static constexpr long kBitBudget = 1L << 26;

 private:
  struct Dyadic {
    Int mant;  // odd or zero
    Int exp;
  };
  std::variant<Dyadic, Rat> rep_;

  Rat to_rat_guarded() const;
};

Ord ord_of_int(int c);

/// Closed enclosure [lo, hi] of a real quantity; lo <= hi always.
/// Arithmetic keeps endpoints exact when feasible, otherwise rounds outward
/// to the precision passed in.
struct IntervalVal {
  Value lo, hi;

  IntervalVal() = default;
  explicit IntervalVal(Value v) : lo(v), hi(std::move(v)) {}
  IntervalVal(Value l, Value h);

  static IntervalVal hull(const IntervalVal& a, const IntervalVal& b);

  bool is_point() const { return lo == hi; }
  Value width() const { return hi - lo; }
  bool contains(const Value& v) const { return lo <= v && v <= hi; }
  bool contains(const IntervalVal& o) const { return lo <= o.lo && o.hi <= hi; }

  /// Definite ordering iff the enclosures are disjoint.
  static std::optional<Ord> cmp(const IntervalVal& a, const IntervalVal& b);

  std::string str() const;
};

struct NumCtx {
  long precision_bits = 128;  // enclosure width target: 2^-precision_bits
  long max_refine = 8;

  NumCtx() = default;
  NumCtx(long prec, long refine) : precision_bits(prec), max_refine(refine) {
    require(prec >= 16, "NumCtx: precision_bits must be >= 16");
  }
};

/// Exact-or-enclosure scalar used wherever the contract says
/// "Value or IntervalVal".
using Scalar = std::variant<Value, IntervalVal>;

inline bool scalar_exact(const Scalar& s) { return std::holds_alternative<Value>(s); }
IntervalVal scalar_box(const Scalar& s);
std::string scalar_str(const Scalar& s);

/// Directed-rounded basic ops: exact when the exact result fits the budget,
/// otherwise a `prec`-bit dyadic on the requested side of the true value.
Value add_dir(const Value& a, const Value& b, long prec, Round dir);
Value sub_dir(const Value& a, const Value& b, long prec, Round dir);
Value mul_dir(const Value& a, const Value& b, long prec, Round dir);
Value div_dir(const Value& a, const Value& b, long prec, Round dir);

IntervalVal iv_add(const IntervalVal& a, const IntervalVal& b, long prec);
IntervalVal iv_sub(const IntervalVal& a, const IntervalVal& b, long prec);
IntervalVal iv_mul(const IntervalVal& a, const IntervalVal& b, long prec);
IntervalVal iv_div(const IntervalVal& a, const IntervalVal& b, long prec);
IntervalVal iv_neg(const IntervalVal& a);

Scalar scalar_add(const Scalar& a, const Scalar& b, long prec);
Scalar scalar_sub(const Scalar& a, const Scalar& b, long prec);
Scalar scalar_mul(const Scalar& a, const Scalar& b, long prec);
Scalar scalar_div(const Scalar& a, const Scalar& b, long prec);

/// Exact ordering if determinable (always for exact/exact), std::nullopt when
/// the enclosures overlap.
std::optional<Ord> scalar_cmp(const Scalar& a, const Scalar& b);

}  // namespace microdom
