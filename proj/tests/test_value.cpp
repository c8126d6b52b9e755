#include <doctest.h>

#include <random>

#include "microdom/exact_sum.hpp"
#include "microdom/transcend.hpp"
#include "microdom/value.hpp"

using namespace microdom;

namespace {

// uniform random exact value with small magnitude, mixing both variants
Value random_value(std::mt19937_64& rng, bool allow_zero = false) {
  std::uniform_int_distribution<int> pick(0, 3);
  std::uniform_int_distribution<long> m(-200, 200);
  std::uniform_int_distribution<long> e(-40, 40);
  std::uniform_int_distribution<long> d(1, 97);
  for (;;) {
    Value v;
    switch (pick(rng)) {
      case 0: v = Value::integer(m(rng)); break;
      case 1: v = Value::dyadic(Int(m(rng)), Int(e(rng))); break;
      default: v = Value::rational(Int(m(rng)), Int(d(rng))); break;
    }
    if (allow_zero || !v.is_zero()) return v;
  }
}

Rat to_q(const Value& v) { return v.as_rat(); }

}  // namespace

TEST_CASE("value: canonical forms and grammar") {
  CHECK(Value::parse("2^-16") == Value::rational(1, 65536));
  CHECK(Value::parse("3/6") == Value::half());
  CHECK(Value::parse("12") == Value::dyadic(3, 2));
  CHECK(Value::parse("-5*2^-3") == Value::rational(-5, 8));
  CHECK(Value::parse("0") == Value::zero());
  // canonical: power-of-two denominators collapse to dyadic
  CHECK(Value::rational(1, 8).is_dyadic());
  CHECK(Value::rational(2, 6).is_rational());
  // round trips through the grammar
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Value v = random_value(rng, true);
    CHECK(Value::parse(v.str()) == v);
  }
  // big exponents survive the grammar
  Value huge = Value::parse("2^-184467440737095516150");
  CHECK(huge.is_pow2());
  CHECK(huge.sign() == 1);
  CHECK(huge < Value::parse("2^-184467440737095516149"));
}

TEST_CASE("value: exact ring ops agree with the rational oracle") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    Value a = random_value(rng, true);
    Value b = random_value(rng, true);
    CHECK(to_q(a + b) == Rat(to_q(a) + to_q(b)));
    CHECK(to_q(a - b) == Rat(to_q(a) - to_q(b)));
    CHECK(to_q(a * b) == Rat(to_q(a) * to_q(b)));
    if (!b.is_zero()) CHECK(to_q(a / b) == Rat(to_q(a) / to_q(b)));
    int c = ::cmp(to_q(a), to_q(b));
    CHECK(Value::cmp(a, b) == ord_of_int(c));
  }
  for (int i = 0; i < 100; ++i) {
    Value a = random_value(rng);
    for (long k : {0L, 1L, 2L, 5L, -1L, -3L}) {
      Rat expect = 1;
      for (long j = 0; j < std::abs(k); ++j) expect *= to_q(a);
      if (k < 0) expect = 1 / expect;
      CHECK(to_q(a.pow_int(k)) == expect);
    }
  }
}

TEST_CASE("value: comparisons across astronomically separated scales") {
  Value tiny = Value::pow2(Int("-340282366920938463463374607431768211456"));  // 2^-2^128
  Value tinier = Value::pow2(Int("-340282366920938463463374607431768211457"));
  CHECK(tinier < tiny);
  CHECK(tiny < Value::rational(1, 3));
  CHECK(tiny.sign() == 1);
  CHECK((-tiny) < tinier);
  // spec example: cmp(2^-16, 1/65536) -> equal
  CHECK(Value::cmp(Value::parse("2^-16"), Value::parse("1/65536")) == Ord::equal);
}

TEST_CASE("value: directed rounding brackets the true value") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 300; ++i) {
    Value v = random_value(rng);
    for (long bits : {8L, 16L, 53L}) {
      Value lo = v.round_bits(bits, Round::down);
      Value hi = v.round_bits(bits, Round::up);
      CHECK(lo <= v);
      CHECK(v <= hi);
      if (v.is_dyadic() && mpz_sizeinbase(v.mant().get_mpz_t(), 2) <= (size_t)bits) {
        CHECK(lo == v);
        CHECK(hi == v);
      }
    }
  }
}

TEST_CASE("value: cross-scale directed add never misses the side") {
  Value one = Value::one();
  Value tiny = Value::pow2(Int("-1000000000000000000000"));
  Value up = add_dir(one, tiny, 64, Round::up);
  Value down = add_dir(one, tiny, 64, Round::down);
  CHECK(down <= up);
  CHECK(down >= one);     // 1 <= 1 + tiny
  CHECK(up > one);        // strict on the upper side
  Value d2 = add_dir(one, -tiny, 64, Round::down);
  Value u2 = add_dir(one, -tiny, 64, Round::up);
  CHECK(d2 < one);
  CHECK(u2 >= one);
}

TEST_CASE("interval: ordering only on disjoint enclosures") {
  auto iv = [](const char* a, const char* b) {
    return IntervalVal(Value::parse(a), Value::parse(b));
  };
  CHECK(IntervalVal::cmp(iv("2/5", "3/5"), iv("7/10", "4/5")) == Ord::less);
  CHECK(IntervalVal::cmp(iv("2/5", "3/5"), iv("1/2", "7/10")) == std::nullopt);
  CHECK(IntervalVal::cmp(IntervalVal(Value::half()), IntervalVal(Value::half())) ==
        Ord::equal);
}

TEST_CASE("log2: exact on powers of two, enclosure elsewhere") {
  NumCtx ctx{96, 8};
  IntervalVal r = eval_log2(Value::parse("2^-8"), ctx);
  CHECK(r.is_point());
  CHECK(r.lo == Value::integer(-8));
  CHECK(eval_log2(Value::one(), ctx).lo == Value::zero());

  // log2(3): the oracle pins 1.5849625007211561814 +- 1e-18
  IntervalVal l3 = eval_log2(Value::integer(3), ctx);
  CHECK(l3.lo < Value::rational(15849625007211562, 10000000000000000));
  CHECK(l3.hi > Value::rational(15849625007211561, 10000000000000000));
  CHECK(l3.width() <= Value::pow2(-96));

  // monotone refinement: more precision never widens
  NumCtx lo_ctx{32, 8};
  IntervalVal c = eval_log2(Value::integer(3), lo_ctx);
  CHECK(c.lo <= l3.lo);
  CHECK(l3.hi <= c.hi);

  // rationals route through both mantissas; log2(3/5) ~ -0.7369655942
  IntervalVal lr = eval_log2(Value::rational(3, 5), ctx);
  CHECK(lr.lo < Value::rational(-7369655, 10000000));
  CHECK(lr.hi > Value::rational(-7369656, 10000000));

  CHECK_THROWS_AS(eval_log2(Value::zero(), ctx), Error);
}

TEST_CASE("log2/exp2 round trip contains the input") {
  std::mt19937_64 rng(17);
  NumCtx ctx{80, 8};
  for (int i = 0; i < 60; ++i) {
    Value x = random_value(rng).abs();
    if (x.is_zero()) continue;
    IntervalVal lg = eval_log2(x, ctx);
    IntervalVal back = exp2_enclosure(lg, ctx);
    CHECK(back.lo <= x);
    CHECK(x <= back.hi);
  }
}

TEST_CASE("sqrt: directed and exact paths") {
  std::mt19937_64 rng(19);
  for (int i = 0; i < 120; ++i) {
    Value x = random_value(rng).abs();
    Value lo = sqrt_dir(x, 64, Round::down);
    Value hi = sqrt_dir(x, 64, Round::up);
    CHECK(lo * lo <= x);
    CHECK(hi * hi >= x);
    CHECK(lo <= hi);
  }
  Scalar s = pow_rat(Value::rational(1, 16), Rat(1, 2));
  REQUIRE(scalar_exact(s));
  CHECK(std::get<Value>(s) == Value::rational(1, 4));
}

TEST_CASE("pow_rat: exact fast paths and enclosures") {
  // (1/4)^(3/2) = 1/8
  Scalar a = pow_rat(Value::rational(1, 4), Rat(3, 2));
  REQUIRE(scalar_exact(a));
  CHECK(std::get<Value>(a) == Value::rational(1, 8));
  // huge-exponent base: (2^-2^70)^(1/2) stays exact
  Value big = Value::pow2(Int("-1180591620717411303424"));
  Scalar b = pow_rat(big, Rat(1, 2));
  REQUIRE(scalar_exact(b));
  CHECK(std::get<Value>(b) == Value::pow2(Int("-590295810358705651712")));
  // irrational: 2^(1/3) enclosure brackets the cube root
  Scalar c = pow_rat(Value::integer(2), Rat(1, 3));
  REQUIRE(!scalar_exact(c));
  IntervalVal ci = scalar_box(c);
  CHECK(ci.lo.pow_int(3) <= Value::integer(2));
  CHECK(ci.hi.pow_int(3) >= Value::integer(2));
  // negative exponent
  Scalar d = pow_rat(Value::rational(1, 4), Rat(-1, 2));
  REQUIRE(scalar_exact(d));
  CHECK(std::get<Value>(d) == Value::integer(2));
}

TEST_CASE("exact ops refuse astronomically infeasible expansion") {
  Value tiny = Value::pow2(Int("-340282366920938463463374607431768211456"));
  CHECK_THROWS_AS((void)(Value::one() + tiny), Error);
  // but scalar arithmetic falls back to an enclosure
  Scalar s = scalar_add(Scalar(Value::one()), Scalar(tiny), 64);
  IntervalVal b = scalar_box(s);
  CHECK(b.lo >= Value::one());
  CHECK(b.hi > Value::one());
  CHECK(b.width() <= Value::pow2(-60));
}

TEST_CASE("exact sums: wide-scale endpoint arithmetic") {
  std::mt19937_64 rng(23);
  // feasible regime agrees with plain Value arithmetic
  for (int i = 0; i < 200; ++i) {
    Value a = random_value(rng, true), b = random_value(rng, true),
          c = random_value(rng, true);
    ExactSum s;
    s.add(a);
    s.add(b);
    s.add(c);
    Value direct = a + b + c;
    CHECK(ord_of_int(direct.sign()) == ord_of_int(s.sign()));
    CHECK(s.to_value() == direct);
    ExactSum t = s - ExactSum(b);
    CHECK(t.to_value() == a + c);
  }
  // astronomically separated terms: exact sign and order without expansion
  ExactSum x(Value::parse("3*2^-4"));
  Value dust = Value::parse("2^-340282366920938463463374607431768211456");
  x.add(dust);
  ExactSum y(Value::parse("3*2^-4"));
  CHECK(x > y);
  CHECK((x - x).is_zero());
  ExactSum z = x - ExactSum(dust);
  CHECK(z == y);
  CHECK(x.scale_int(3) > x.scale_int(2));
  // boxes bracket
  IntervalVal bx = x.box(64);
  CHECK(bx.lo <= Value::parse("3*2^-4") + Value::pow2(-60));
  CHECK(bx.hi >= Value::parse("3*2^-4"));
}

TEST_CASE("floor/ceil") {
  CHECK(Value::parse("7/2").floor_int() == 3);
  CHECK(Value::parse("-7/2").floor_int() == -4);
  CHECK(Value::parse("7/2").ceil_int() == 4);
  CHECK(Value::parse("2^-80").floor_int() == 0);
  CHECK((-Value::parse("2^-80")).floor_int() == -1);
  CHECK(Value::integer(42).floor_int() == 42);
}
