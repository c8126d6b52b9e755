#include "microdom/value.hpp"

#include <cmath>
#include <limits>

namespace microdom {

namespace {

unsigned long bitlen(const Int& z) {
  // bits of |z|; caller guarantees z != 0
  return mpz_sizeinbase(z.get_mpz_t(), 2);
}

unsigned long checked_bits(const Int& e, const char* what) {
  if (!e.fits_ulong_p() || e > Value::kBitBudget)
    fail(std::string("bit budget exceeded in ") + what);
  return e.get_ui();
}

Int shl(const Int& m, const Int& k, const char* what) {
  Int r;
  mpz_mul_2exp(r.get_mpz_t(), m.get_mpz_t(), checked_bits(k, what));
  return r;
}

bool is_pow2_uint(const Int& z) {
  // z > 0 and a power of two
  return sgn(z) > 0 && mpz_scan1(z.get_mpz_t(), 0) == bitlen(z) - 1;
}

}  // namespace

Ord ord_of_int(int c) {
  if (c < 0) return Ord::less;
  if (c > 0) return Ord::greater;
  return Ord::equal;
}

Value Value::dyadic(Int mant, Int exp) {
  Value v;
  if (sgn(mant) == 0) {
    v.rep_ = Dyadic{0, 0};
    return v;
  }
  unsigned long tz = mpz_scan1(mant.get_mpz_t(), 0);
  if (tz > 0) {
    mpz_fdiv_q_2exp(mant.get_mpz_t(), mant.get_mpz_t(), tz);
    exp += static_cast<long>(tz);
  }
  v.rep_ = Dyadic{std::move(mant), std::move(exp)};
  return v;
}

Value Value::rational(Int num, Int den) {
  require(sgn(den) != 0, "rational: zero denominator");
  Rat q(std::move(num), std::move(den));
  q.canonicalize();
  return from_mpq(q);
}

Value Value::from_mpq(const Rat& q) {
  const Int& den = q.get_den();
  if (den == 1) return dyadic(q.get_num(), 0);
  if (is_pow2_uint(den)) {
    long k = static_cast<long>(bitlen(den)) - 1;
    return dyadic(q.get_num(), Int(-k));
  }
  Value v;
  v.rep_ = q;
  return v;
}

bool Value::is_integer() const {
  if (is_rational()) return false;  // canonical rationals are never integers
  return sgn(mant()) == 0 || sgn(exp()) >= 0;
}

bool Value::is_pow2() const {
  if (!is_dyadic()) return false;
  return mant() == 1 || mant() == -1;
}

int Value::sign() const {
  if (is_dyadic()) return sgn(mant());
  return sgn(rat());
}

Value Value::operator-() const {
  if (is_dyadic()) return dyadic(-mant(), exp());
  Value v;
  v.rep_ = Rat(-rat());
  return v;
}

Rat Value::to_rat_guarded() const {
  if (is_rational()) return rat();
  const Int& e = exp();
  if (sgn(mant()) == 0) return Rat(0);
  if (sgn(e) >= 0) {
    return Rat(shl(mant(), e, "dyadic->rational"));
  }
  Int den = 1;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), checked_bits(-e, "dyadic->rational"));
  Rat q(mant(), den);
  q.canonicalize();
  return q;
}

Value operator+(const Value& a, const Value& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_dyadic() && b.is_dyadic()) {
    Int d = a.exp() - b.exp();
    if (sgn(d) >= 0)
      return Value::dyadic(shl(a.mant(), d, "dyadic add") + b.mant(), b.exp());
    return Value::dyadic(a.mant() + shl(b.mant(), -d, "dyadic add"), a.exp());
  }
  Rat r = a.to_rat_guarded() + b.as_rat();
  return Value::from_mpq(r);
}

Value operator-(const Value& a, const Value& b) { return a + (-b); }

Value operator*(const Value& a, const Value& b) {
  if (a.is_zero() || b.is_zero()) return Value::zero();
  if (a.is_dyadic() && b.is_dyadic())
    return Value::dyadic(a.mant() * b.mant(), a.exp() + b.exp());
  Rat r = a.to_rat_guarded() * b.as_rat();
  return Value::from_mpq(r);
}

Value operator/(const Value& a, const Value& b) {
  require(!b.is_zero(), "division by zero");
  if (a.is_zero()) return Value::zero();
  if (a.is_dyadic() && b.is_dyadic()) {
    if (b.mant() == 1) return Value::dyadic(a.mant(), a.exp() - b.exp());
    if (b.mant() == -1) return Value::dyadic(-a.mant(), a.exp() - b.exp());
    Int d = a.exp() - b.exp();
    Int num = a.mant(), den = b.mant();
    if (sgn(d) >= 0)
      num = shl(num, d, "dyadic div");
    else
      den = shl(den, -d, "dyadic div");
    return Value::rational(num, den);
  }
  Rat r = a.to_rat_guarded() / b.as_rat();
  return Value::from_mpq(r);
}

Value Value::pow_int(long k) const {
  if (k == 0) return one();
  if (k < 0) {
    require(!is_zero(), "pow_int: zero base with negative exponent");
    return (one() / *this).pow_int(-k);
  }
  if (is_dyadic()) {
    if (sgn(mant()) == 0) return zero();
    Int e = exp() * k;
    if (mant() == 1) return dyadic(1, e);
    if (mant() == -1) return dyadic((k % 2 == 0) ? Int(1) : Int(-1), e);
    require(static_cast<long>(bitlen(mant())) * k <= kBitBudget,
            "pow_int: mantissa blow-up");
    Int m;
    mpz_pow_ui(m.get_mpz_t(), mant().get_mpz_t(), static_cast<unsigned long>(k));
    return dyadic(m, e);
  }
  const Rat& q = rat();
  require(static_cast<long>(std::max(bitlen(q.get_num()), bitlen(q.get_den()))) * k <=
              kBitBudget,
          "pow_int: rational blow-up");
  Int n, d;
  mpz_pow_ui(n.get_mpz_t(), q.get_num().get_mpz_t(), static_cast<unsigned long>(k));
  mpz_pow_ui(d.get_mpz_t(), q.get_den().get_mpz_t(), static_cast<unsigned long>(k));
  return rational(n, d);
}

std::pair<Int, Int> Value::log2_bounds() const {
  require(!is_zero(), "log2_bounds of zero");
  if (is_dyadic()) {
    Int bl(static_cast<unsigned long>(bitlen(mant())));
    if (mant() == 1 || mant() == -1) return {exp(), exp()};
    return {exp() + bl - 1, exp() + bl};
  }
  Int p = ::abs(rat().get_num());
  const Int& q = rat().get_den();
  long blp = static_cast<long>(bitlen(p));
  long blq = static_cast<long>(bitlen(q));
  long d = blp - blq;
  // one exact comparison narrows the bound to width 1
  Int lhs = p, rhs = q;
  if (d >= 0)
    mpz_mul_2exp(rhs.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(d));
  else
    mpz_mul_2exp(lhs.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(-d));
  if (lhs >= rhs) return {Int(d), Int(d + 1)};
  return {Int(d - 1), Int(d)};
}

Ord Value::cmp(const Value& a, const Value& b) {
  int sa = a.sign(), sb = b.sign();
  if (sa != sb) return ord_of_int(sa - sb);
  if (sa == 0) return Ord::equal;
  // same nonzero sign: compare magnitudes, result flipped for negatives
  const Value ma = a.abs(), mb = b.abs();
  auto [la, ha] = ma.log2_bounds();
  auto [lb, hb] = mb.log2_bounds();
  Ord mag;
  if (ha < lb)
    mag = Ord::less;
  else if (hb < la)
    mag = Ord::greater;
  else if (ma.is_dyadic() && mb.is_dyadic()) {
    Int d = ma.exp() - mb.exp();
    Int x = ma.mant(), y = mb.mant();
    if (sgn(d) >= 0)
      x = shl(x, d, "cmp");
    else
      y = shl(y, -d, "cmp");
    mag = ord_of_int(::cmp(x, y));
  } else if (ma.is_rational() && mb.is_rational()) {
    mag = ord_of_int(::cmp(ma.rat(), mb.rat()));
  } else {
    const Value& dy = ma.is_dyadic() ? ma : mb;
    const Value& rt = ma.is_dyadic() ? mb : ma;
    // dy = m*2^e vs rt = p/q: compare m*q*2^e with p (e bounded: logs overlap)
    Int lhs = dy.mant() * rt.rat().get_den();
    Int rhs = rt.rat().get_num();
    if (sgn(dy.exp()) >= 0)
      lhs = shl(lhs, dy.exp(), "cmp mixed");
    else
      rhs = shl(rhs, -dy.exp(), "cmp mixed");
    Ord o = ord_of_int(::cmp(lhs, rhs));
    mag = ma.is_dyadic() ? o : (o == Ord::less    ? Ord::greater
                                : o == Ord::greater ? Ord::less
                                                    : Ord::equal);
  }
  if (sa > 0) return mag;
  if (mag == Ord::less) return Ord::greater;
  if (mag == Ord::greater) return Ord::less;
  return Ord::equal;
}

Int Value::floor_int() const {
  if (is_dyadic()) {
    if (sgn(mant()) == 0) return 0;
    if (sgn(exp()) >= 0) return shl(mant(), exp(), "floor_int");
    Int k = -exp();
    if (k > static_cast<long>(bitlen(mant()))) return sgn(mant()) > 0 ? Int(0) : Int(-1);
    Int r;
    mpz_fdiv_q_2exp(r.get_mpz_t(), mant().get_mpz_t(), checked_bits(k, "floor_int"));
    return r;
  }
  Int r;
  mpz_fdiv_q(r.get_mpz_t(), rat().get_num().get_mpz_t(), rat().get_den().get_mpz_t());
  return r;
}

Int Value::ceil_int() const { return -((-*this).floor_int()); }

Value Value::round_bits(long bits, Round dir) const {
  require(bits >= 2, "round_bits: need at least 2 bits");
  if (is_zero()) return zero();
  if (is_dyadic()) {
    long bl = static_cast<long>(bitlen(mant()));
    if (bl <= bits) return *this;
    long drop = bl - bits;
    Int q;
    mpz_fdiv_q_2exp(q.get_mpz_t(), mant().get_mpz_t(),
                    static_cast<unsigned long>(drop));
    Value fl = dyadic(q, exp() + drop);  // floor at the coarser grid
    if (dir == Round::down) return fl;
    if (fl == *this) return fl;
    return dyadic(q + 1, exp() + drop);
  }
  // rational: floor/ceil of x*2^t at t chosen so the result carries ~bits bits
  auto [lo, hi] = log2_bounds();
  Int t_i = Int(bits) - lo;
  long t = t_i.fits_slong_p() ? t_i.get_si() : (fail("round_bits: scale overflow"), 0);
  Int num = rat().get_num(), den = rat().get_den();
  if (t >= 0)
    num = shl(num, Int(t), "round_bits");
  else
    den = shl(den, Int(-t), "round_bits");
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (dir == Round::up && sgn(r) != 0) q += 1;
  return dyadic(q, Int(-t));
}

double Value::to_double() const {
  if (is_rational()) return rat().get_d();
  if (sgn(mant()) == 0) return 0.0;
  if (!exp().fits_slong_p()) return sgn(exp()) > 0 ? (sgn(mant()) > 0 ? HUGE_VAL : -HUGE_VAL)
                                                   : 0.0;
  long e = exp().get_si();
  if (e > 4000) return sgn(mant()) > 0 ? HUGE_VAL : -HUGE_VAL;
  if (e < -4000) return sgn(mant()) > 0 ? 0.0 : -0.0;
  return std::ldexp(mant().get_d(), static_cast<int>(e));
}

std::string Value::str() const {
  if (is_rational()) {
    return rat().get_num().get_str() + "/" + rat().get_den().get_str();
  }
  if (sgn(mant()) == 0) return "0";
  if (sgn(exp()) == 0) return mant().get_str();
  if (mant() == 1 || mant() == -1) {
    std::string s = sgn(mant()) < 0 ? "-2^" : "2^";
    return s + exp().get_str();
  }
  return mant().get_str() + "*2^" + exp().get_str();
}

Value Value::parse(std::string_view text) {
  // accepted: [-]digits | [-]digits/digits | [-]digits*2^[-]digits | [-]2^[-]digits
  auto strip = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
      s.remove_suffix(1);
    return s;
  };
  std::string_view s = strip(text);
  require(!s.empty(), "value parse: empty input");
  bool neg = false;
  if (s.front() == '-') {
    neg = true;
    s.remove_prefix(1);
  }
  auto read_int = [&](std::string_view t) -> Int {
    require(!t.empty(), "value parse: missing digits in '" + std::string(text) + "'");
    bool n2 = false;
    if (t.front() == '-') {
      n2 = true;
      t.remove_prefix(1);
    }
    require(!t.empty(), "value parse: missing digits in '" + std::string(text) + "'");
    for (char c : t)
      require(c >= '0' && c <= '9', "value parse: bad digit in '" + std::string(text) + "'");
    Int v(std::string(t), 10);
    return n2 ? Int(-v) : v;
  };
  Value out;
  if (s.substr(0, 2) == "2^") {
    out = pow2(read_int(s.substr(2)));
  } else if (auto pos = s.find("*2^"); pos != std::string_view::npos) {
    out = dyadic(read_int(s.substr(0, pos)), read_int(s.substr(pos + 3)));
  } else if (auto sl = s.find('/'); sl != std::string_view::npos) {
    out = rational(read_int(s.substr(0, sl)), read_int(s.substr(sl + 1)));
  } else {
    out = integer(read_int(s));
  }
  return neg ? -out : out;
}

// ---------------------------------------------------------------------------

IntervalVal::IntervalVal(Value l, Value h) : lo(std::move(l)), hi(std::move(h)) {
  require(lo <= hi, "IntervalVal: lo > hi");
}

IntervalVal IntervalVal::hull(const IntervalVal& a, const IntervalVal& b) {
  return IntervalVal(std::min(a.lo, b.lo), std::max(a.hi, b.hi));
}

std::optional<Ord> IntervalVal::cmp(const IntervalVal& a, const IntervalVal& b) {
  if (a.is_point() && b.is_point()) return Value::cmp(a.lo, b.lo);
  if (a.hi < b.lo) return Ord::less;
  if (b.hi < a.lo) return Ord::greater;
  return std::nullopt;
}

std::string IntervalVal::str() const {
  if (is_point()) return lo.str();
  return "[" + lo.str() + ", " + hi.str() + "]";
}

IntervalVal scalar_box(const Scalar& s) {
  if (auto* v = std::get_if<Value>(&s)) return IntervalVal(*v);
  return std::get<IntervalVal>(s);
}

std::string scalar_str(const Scalar& s) {
  if (auto* v = std::get_if<Value>(&s)) return v->str();
  return std::get<IntervalVal>(s).str();
}

// ---------------------------------------------------------------------------
// Directed arithmetic.

namespace {

// True when the exact sum of a and b can be formed without exceeding the
// alignment threshold for the requested precision.
bool add_exact_feasible(const Value& a, const Value& b, long prec) {
  if (a.is_zero() || b.is_zero()) return true;
  if (!(a.is_dyadic() && b.is_dyadic())) return true;  // rational path is size-bounded
  Int gap = a.exp() - b.exp();
  Int lim = Int(prec) + 8 +
            static_cast<long>(mpz_sizeinbase(a.mant().get_mpz_t(), 2)) +
            static_cast<long>(mpz_sizeinbase(b.mant().get_mpz_t(), 2));
  return ::abs(gap) <= lim && ::abs(gap) <= Value::kBitBudget;
}

}  // namespace

Value add_dir(const Value& a, const Value& b, long prec, Round dir) {
  if (add_exact_feasible(a, b, prec)) return (a + b).round_bits(prec, dir);
  // scales separated far beyond prec: the tail is below one ulp of the
  // prec-rounded dominant term, so a one-ulp nudge on the right side covers it
  auto [la, ha] = a.abs().log2_bounds();
  auto [lb, hb] = b.abs().log2_bounds();
  const bool a_dom = ha >= hb;
  const Value& dom = a_dom ? a : b;
  const Value& tail = a_dom ? b : a;
  Value r = dom.round_bits(prec, dir);
  if (tail.is_zero()) return r;
  const Int& hd = a_dom ? ha : hb;
  Value ulp = Value::pow2(hd - prec);
  if (tail.sign() > 0) {
    if (dir == Round::up) r = r + ulp;
  } else {
    if (dir == Round::down) r = r - ulp;
  }
  return r;
}

Value sub_dir(const Value& a, const Value& b, long prec, Round dir) {
  return add_dir(a, -b, prec, dir);
}

Value mul_dir(const Value& a, const Value& b, long prec, Round dir) {
  if (a.is_zero() || b.is_zero()) return Value::zero();
  if (a.is_dyadic() && b.is_dyadic()) return (a * b).round_bits(prec, dir);
  if (a.is_rational() && b.is_rational()) return (a * b).round_bits(prec, dir);
  // mixed with a possibly huge dyadic exponent: split off the 2^e factor
  // (round_bits is already directed toward -inf/+inf regardless of sign)
  const Value& dy = a.is_dyadic() ? a : b;
  const Value& rt = a.is_dyadic() ? b : a;
  Value core = Value::from_mpq(Rat(dy.mant()) * rt.as_rat());
  Value rounded = core.round_bits(prec, dir);
  if (rounded.is_zero()) return Value::zero();
  return Value::dyadic(rounded.mant(), rounded.exp() + dy.exp());
}

Value div_dir(const Value& a, const Value& b, long prec, Round dir) {
  require(!b.is_zero(), "div_dir by zero");
  if (a.is_zero()) return Value::zero();
  if (b.is_dyadic()) {
    // 1/(m*2^e) = (1/m)*2^-e
    Value inv_core = Value::rational(1, b.mant());
    Value prod = mul_dir(a, inv_core, prec + 4, dir);
    if (prod.is_zero()) return Value::zero();
    if (prod.is_dyadic()) return Value::dyadic(prod.mant(), prod.exp() - b.exp());
    Value rounded = prod.round_bits(prec, dir);
    return Value::dyadic(rounded.mant(), rounded.exp() - b.exp());
  }
  Value inv = Value::from_mpq(Rat(1) / b.as_rat());
  return mul_dir(a, inv, prec, dir);
}

IntervalVal iv_add(const IntervalVal& a, const IntervalVal& b, long prec) {
  return IntervalVal(add_dir(a.lo, b.lo, prec, Round::down),
                     add_dir(a.hi, b.hi, prec, Round::up));
}
IntervalVal iv_sub(const IntervalVal& a, const IntervalVal& b, long prec) {
  return IntervalVal(sub_dir(a.lo, b.hi, prec, Round::down),
                     sub_dir(a.hi, b.lo, prec, Round::up));
}
IntervalVal iv_neg(const IntervalVal& a) { return IntervalVal(-a.hi, -a.lo); }

IntervalVal iv_mul(const IntervalVal& a, const IntervalVal& b, long prec) {
  Value cands_lo[4] = {mul_dir(a.lo, b.lo, prec, Round::down),
                       mul_dir(a.lo, b.hi, prec, Round::down),
                       mul_dir(a.hi, b.lo, prec, Round::down),
                       mul_dir(a.hi, b.hi, prec, Round::down)};
  Value cands_hi[4] = {mul_dir(a.lo, b.lo, prec, Round::up),
                       mul_dir(a.lo, b.hi, prec, Round::up),
                       mul_dir(a.hi, b.lo, prec, Round::up),
                       mul_dir(a.hi, b.hi, prec, Round::up)};
  Value lo = cands_lo[0], hi = cands_hi[0];
  for (int i = 1; i < 4; ++i) {
    if (cands_lo[i] < lo) lo = cands_lo[i];
    if (cands_hi[i] > hi) hi = cands_hi[i];
  }
  return IntervalVal(lo, hi);
}

IntervalVal iv_div(const IntervalVal& a, const IntervalVal& b, long prec) {
  require(b.lo.sign() > 0 || b.hi.sign() < 0, "iv_div: divisor straddles zero");
  Value cands_lo[4] = {div_dir(a.lo, b.lo, prec, Round::down),
                       div_dir(a.lo, b.hi, prec, Round::down),
                       div_dir(a.hi, b.lo, prec, Round::down),
                       div_dir(a.hi, b.hi, prec, Round::down)};
  Value cands_hi[4] = {div_dir(a.lo, b.lo, prec, Round::up),
                       div_dir(a.lo, b.hi, prec, Round::up),
                       div_dir(a.hi, b.lo, prec, Round::up),
                       div_dir(a.hi, b.hi, prec, Round::up)};
  Value lo = cands_lo[0], hi = cands_hi[0];
  for (int i = 1; i < 4; ++i) {
    if (cands_lo[i] < lo) lo = cands_lo[i];
    if (cands_hi[i] > hi) hi = cands_hi[i];
  }
  return IntervalVal(lo, hi);
}

namespace {

// the scalar layer keeps results exact only while intermediates stay small;
// past this the enclosure path takes over even though the exact op would
// still fit the hard budget
long soft_limit(long prec) {
  return std::min(Value::kBitBudget, std::max(4 * prec, 1L << 16));
}

bool exp_within(const Value& v, long lim) {
  if (!v.is_dyadic() || v.is_zero()) return true;
  Int e = ::abs(v.exp());
  return e <= lim;
}

bool mul_exact_feasible(const Value& a, const Value& b, long prec) {
  if (a.is_zero() || b.is_zero()) return true;
  if (a.is_dyadic() == b.is_dyadic()) return true;  // same-variant ops stay small
  long lim = soft_limit(prec);
  return exp_within(a, lim) && exp_within(b, lim);
}

bool div_exact_feasible(const Value& a, const Value& b, long prec) {
  if (a.is_zero()) return true;
  if (a.is_dyadic() && b.is_dyadic()) {
    if (b.mant() == 1 || b.mant() == -1) return true;
    Int d = ::abs(a.exp() - b.exp());
    return d <= soft_limit(prec);
  }
  if (a.is_rational() && b.is_rational()) return true;
  long lim = soft_limit(prec);
  return exp_within(a, lim) && exp_within(b, lim);
}

bool add_exact_feasible_soft(const Value& a, const Value& b, long prec) {
  if (a.is_zero() || b.is_zero()) return true;
  if (a.is_dyadic() && b.is_dyadic()) {
    Int gap = ::abs(a.exp() - b.exp());
    long bits = static_cast<long>(mpz_sizeinbase(a.mant().get_mpz_t(), 2)) +
                static_cast<long>(mpz_sizeinbase(b.mant().get_mpz_t(), 2));
    return gap <= std::max(soft_limit(prec), bits + prec + 8);
  }
  if (a.is_rational() && b.is_rational()) return true;
  long lim = soft_limit(prec);
  return exp_within(a, lim) && exp_within(b, lim);
}

template <typename Feasible, typename ExactOp, typename IvOp>
Scalar scalar_bin(const Scalar& a, const Scalar& b, Feasible feasible, ExactOp ex,
                  IvOp iv) {
  if (scalar_exact(a) && scalar_exact(b) &&
      feasible(std::get<Value>(a), std::get<Value>(b))) {
    try {
      return ex(std::get<Value>(a), std::get<Value>(b));
    } catch (const Error&) {
      // backstop: fall through to enclosure arithmetic
    }
  }
  return iv(scalar_box(a), scalar_box(b));
}

}  // namespace

Scalar scalar_add(const Scalar& a, const Scalar& b, long prec) {
  return scalar_bin(
      a, b,
      [prec](const Value& x, const Value& y) { return add_exact_feasible_soft(x, y, prec); },
      [](const Value& x, const Value& y) { return x + y; },
      [prec](const IntervalVal& x, const IntervalVal& y) { return iv_add(x, y, prec); });
}
Scalar scalar_sub(const Scalar& a, const Scalar& b, long prec) {
  return scalar_bin(
      a, b,
      [prec](const Value& x, const Value& y) { return add_exact_feasible_soft(x, y, prec); },
      [](const Value& x, const Value& y) { return x - y; },
      [prec](const IntervalVal& x, const IntervalVal& y) { return iv_sub(x, y, prec); });
}
Scalar scalar_mul(const Scalar& a, const Scalar& b, long prec) {
  return scalar_bin(
      a, b,
      [prec](const Value& x, const Value& y) { return mul_exact_feasible(x, y, prec); },
      [](const Value& x, const Value& y) { return x * y; },
      [prec](const IntervalVal& x, const IntervalVal& y) { return iv_mul(x, y, prec); });
}
Scalar scalar_div(const Scalar& a, const Scalar& b, long prec) {
  return scalar_bin(
      a, b,
      [prec](const Value& x, const Value& y) { return div_exact_feasible(x, y, prec); },
      [](const Value& x, const Value& y) { return x / y; },
      [prec](const IntervalVal& x, const IntervalVal& y) { return iv_div(x, y, prec); });
}

std::optional<Ord> scalar_cmp(const Scalar& a, const Scalar& b) {
  if (scalar_exact(a) && scalar_exact(b))
    return Value::cmp(std::get<Value>(a), std::get<Value>(b));
  return IntervalVal::cmp(scalar_box(a), scalar_box(b));
}

}  // namespace microdom
