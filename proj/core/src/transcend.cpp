#include "microdom/transcend.hpp"

#include <map>
#include <mutex>
#include <vector>

namespace microdom {

namespace {

unsigned long bitlen(const Int& z) { return mpz_sizeinbase(z.get_mpz_t(), 2); }

// Enclosure of the fractional part of log2(n) for an integer n >= 1 that is
// not a power of two. Digit extraction by repeated squaring on a two-sided
// chain; a straddle at the 2-boundary restarts at doubled working precision
// (log2 of a non-power-of-two integer is irrational, so straddles resolve).
IntervalVal log2_frac_of_int(const Int& n, long prec, long max_refine) {
  long bl = static_cast<long>(bitlen(n));
  Value u0 = Value::dyadic(n, Int(-(bl - 1)));  // in [1,2)
  const Value two = Value::integer(2);
  for (long attempt = 0;; ++attempt) {
    long P = 2 * prec + 32 + attempt * 2 * prec;
    Value ulo = u0, uhi = u0;
    Int frac = 0;
    bool straddled = false;
    for (long j = 0; j < prec; ++j) {
      ulo = (ulo * ulo).round_bits(P, Round::down);
      uhi = (uhi * uhi).round_bits(P, Round::up);
      bool lo_ge2 = ulo >= two;
      bool hi_ge2 = uhi >= two;
      frac <<= 1;
      if (lo_ge2 && hi_ge2) {
        frac += 1;
        ulo = Value::dyadic(ulo.mant(), ulo.exp() - 1);
        uhi = Value::dyadic(uhi.mant(), uhi.exp() - 1);
      } else if (!lo_ge2 && !hi_ge2) {
        // digit 0
      } else {
        straddled = true;
        break;
      }
    }
    if (!straddled) {
      Value lo = Value::dyadic(frac, Int(-prec));
      Value hi = Value::dyadic(frac + 1, Int(-prec));
      return IntervalVal(lo, hi);
    }
    if (attempt >= max_refine)
      fail("eval_log2: could not resolve digit within max_refine restarts");
  }
}

// Enclosure of log2(n), n >= 1 integer.
IntervalVal log2_of_int(const Int& n, long prec, long max_refine) {
  require(sgn(n) > 0, "log2_of_int: nonpositive");
  unsigned long bl = bitlen(n);
  if (mpz_scan1(n.get_mpz_t(), 0) == bl - 1)  // power of two
    return IntervalVal(Value::integer(Int(bl - 1)));
  IntervalVal f = log2_frac_of_int(n, prec, max_refine);
  Value base = Value::integer(Int(bl - 1));
  return IntervalVal(base + f.lo, base + f.hi);
}

}  // namespace

IntervalVal eval_log2(const Value& x, const NumCtx& ctx) {
  require(x.sign() > 0, "eval_log2: requires x > 0");
  long prec = ctx.precision_bits;
  if (x.is_dyadic()) {
    if (x.mant() == 1) return IntervalVal(Value::integer(x.exp()));
    IntervalVal m = log2_of_int(x.mant(), prec + 2, ctx.max_refine);
    Value e = Value::integer(x.exp());
    return IntervalVal(e + m.lo, e + m.hi);
  }
  IntervalVal p = log2_of_int(x.rat().get_num(), prec + 2, ctx.max_refine);
  IntervalVal q = log2_of_int(x.rat().get_den(), prec + 2, ctx.max_refine);
  return IntervalVal(p.lo - q.hi, p.hi - q.lo);
}

IntervalVal eval_log2(const IntervalVal& x, const NumCtx& ctx) {
  IntervalVal a = eval_log2(x.lo, ctx);
  IntervalVal b = eval_log2(x.hi, ctx);
  return IntervalVal(a.lo, b.hi);
}

Value sqrt_dir(const Value& x, long bits, Round dir) {
  require(x.sign() >= 0, "sqrt_dir: negative input");
  if (x.is_zero()) return Value::zero();
  Value xd = x.round_bits(2 * bits + 4, dir);
  if (xd.is_zero()) {
    // positive value rounded down to zero cannot happen via round_bits
    xd = x.round_bits(2 * bits + 4, Round::up);
  }
  Int m = xd.mant(), e = xd.exp();
  if (mpz_odd_p(e.get_mpz_t())) {
    m <<= 1;
    e -= 1;
  }
  long have = static_cast<long>(bitlen(m));
  long want = 2 * bits;
  if (have < want) {
    long k = want - have;
    if (k % 2) ++k;
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<unsigned long>(k));
    e -= k;
  }
  Int s, rem;
  mpz_sqrtrem(s.get_mpz_t(), rem.get_mpz_t(), m.get_mpz_t());
  Int half_e = e / 2;
  if (dir == Round::up && sgn(rem) != 0) s += 1;
  return Value::dyadic(s, half_e);
}

IntervalVal sqrt_enclosure(const Value& x, const NumCtx& ctx) {
  return IntervalVal(sqrt_dir(x, ctx.precision_bits, Round::down),
                     sqrt_dir(x, ctx.precision_bits, Round::up));
}

IntervalVal sqrt_enclosure(const IntervalVal& x, const NumCtx& ctx) {
  return IntervalVal(sqrt_dir(x.lo, ctx.precision_bits, Round::down),
                     sqrt_dir(x.hi, ctx.precision_bits, Round::up));
}

namespace {

// cached directed chains 2^(2^-1), 2^(2^-2), ... keyed by (precision, dir)
const std::vector<Value>& sqrt2_chain(long P, Round dir, long depth) {
  static std::mutex mu;
  static std::map<std::pair<long, int>, std::vector<Value>> cache;
  std::lock_guard<std::mutex> lk(mu);
  auto& vec = cache[{P, dir == Round::down ? 0 : 1}];
  while (static_cast<long>(vec.size()) < depth) {
    Value prev = vec.empty() ? Value::integer(2) : vec.back();
    vec.push_back(sqrt_dir(prev, P, dir));
  }
  return vec;
}

}  // namespace

Value exp2_dir(const Value& y, long bits, Round dir) {
  Int n = y.floor_int();
  Value f = y - Value::integer(n);
  if (f.is_zero()) return Value::pow2(n);
  // 2^f for f in (0,1): product over the sqrt chain 2^(2^-i)
  Value fd = f.round_bits(bits + 8, dir);
  if (fd.sign() <= 0) fd = Value::zero();
  if (fd >= Value::one()) fd = Value::one();
  if (fd.is_zero()) {
    Value r = Value::pow2(n);
    return dir == Round::down ? r : Value::dyadic(Int(1) + 1, n);  // 2*2^n bound
  }
  if (fd == Value::one()) return Value::pow2(n + 1);
  long P = bits + 16;
  // fd = mant * 2^exp with exp < 0; bits of the chain needed: -exp
  long depth = -fd.exp().get_si();
  const std::vector<Value>& chain = sqrt2_chain(P, dir, depth);
  Value acc = Value::one();
  const Int& m = fd.mant();
  for (long i = 1; i <= depth; ++i) {
    if (mpz_tstbit(m.get_mpz_t(), static_cast<mp_bitcnt_t>(depth - i)))
      acc = (acc * chain[static_cast<size_t>(i - 1)]).round_bits(P, dir);
  }
  return Value::dyadic(acc.mant(), acc.exp() + n);
}

IntervalVal exp2_enclosure(const IntervalVal& y, const NumCtx& ctx) {
  return IntervalVal(exp2_dir(y.lo, ctx.precision_bits, Round::down),
                     exp2_dir(y.hi, ctx.precision_bits, Round::up));
}

Scalar pow_rat(const Value& x, const Rat& alpha, const NumCtx& ctx) {
  require(x.sign() > 0, "pow_rat: requires x > 0");
  if (sgn(alpha) == 0) return Value::one();
  if (sgn(alpha) < 0) {
    Scalar inv = pow_rat(x, Rat(-alpha), ctx);
    if (scalar_exact(inv)) return Value::one() / std::get<Value>(inv);
    return iv_div(IntervalVal(Value::one()), scalar_box(inv), ctx.precision_bits);
  }
  const Int& a = alpha.get_num();
  const Int& b = alpha.get_den();
  if (b == 1 && a.fits_slong_p()) return x.pow_int(a.get_si());
  require(a.fits_slong_p() && b.fits_slong_p(), "pow_rat: exponent too large");
  long ai = a.get_si();
  unsigned long bi = b.get_ui();
  if (x.is_dyadic()) {
    Int t = x.exp() * a;
    if (mpz_divisible_p(t.get_mpz_t(), b.get_mpz_t())) {
      Int e = t / b;
      if (x.mant() == 1) return Value::pow2(e);
      Int root;
      if (mpz_root(root.get_mpz_t(), x.mant().get_mpz_t(), bi) != 0)
        return Value::dyadic(Value::integer(root).pow_int(ai).mant() /* odd^k odd */,
                             e + Value::integer(root).pow_int(ai).exp());
    }
    // enclosure: 2^(alpha * (e + log2 m))
    IntervalVal lg = x.mant() == 1
                         ? IntervalVal(Value::integer(x.exp()))
                         : eval_log2(x, ctx);
    Value av = Value::rational(a, b);
    IntervalVal y = iv_mul(lg, IntervalVal(av), ctx.precision_bits + 8);
    return exp2_enclosure(y, ctx);
  }
  Int rn, rd;
  if (mpz_root(rn.get_mpz_t(), x.rat().get_num().get_mpz_t(), bi) != 0 &&
      mpz_root(rd.get_mpz_t(), x.rat().get_den().get_mpz_t(), bi) != 0) {
    Value num = Value::integer(rn).pow_int(ai);
    Value den = Value::integer(rd).pow_int(ai);
    return num / den;
  }
  IntervalVal lg = eval_log2(x, ctx);
  Value av = Value::rational(a, b);
  IntervalVal y = iv_mul(lg, IntervalVal(av), ctx.precision_bits + 8);
  return exp2_enclosure(y, ctx);
}

Scalar scalar_pow_rat(const Scalar& x, const Rat& alpha, const NumCtx& ctx) {
  if (scalar_exact(x)) return pow_rat(std::get<Value>(x), alpha, ctx);
  return pow_rat_box(std::get<IntervalVal>(x), alpha, ctx);
}

IntervalVal pow_rat_box(const IntervalVal& x, const Rat& alpha, const NumCtx& ctx) {
  Scalar lo = pow_rat(x.lo, alpha, ctx);
  Scalar hi = pow_rat(x.hi, alpha, ctx);
  IntervalVal blo = scalar_box(lo), bhi = scalar_box(hi);
  if (sgn(alpha) >= 0) return IntervalVal(blo.lo, bhi.hi);
  return IntervalVal(bhi.lo, blo.hi);
}

IntervalVal ln2_enclosure(long bits) {
  // ln 2 = 2 atanh(1/3) = sum_{k>=0} 2/(2k+1) * 3^-(2k+1)
  long K = bits / 3 + 4;
  Value sum = Value::zero();
  Value p = Value::rational(1, 3);
  const Value nine_inv = Value::rational(1, 9);
  for (long k = 0; k <= K; ++k) {
    sum = sum + Value::integer(2) / Value::integer(2 * k + 1) * p;
    p = p * nine_inv;
  }
  // tail <= 2/(2K+3) * 3^-(2K+3) / (1 - 1/9)
  Value tail = Value::integer(2) / Value::integer(2 * K + 3) * p *
               Value::rational(1, 3) * Value::rational(9, 8);
  return IntervalVal(sum, sum + tail);
}

}  // namespace microdom
