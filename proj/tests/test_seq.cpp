#include <doctest.h>

#include <random>

#include "microdom/seq_ops.hpp"
#include "microdom/transcend.hpp"

using namespace microdom;

namespace {

Value exact(const Scalar& s) {
  REQUIRE(scalar_exact(s));
  return std::get<Value>(s);
}

Value q(const char* t) { return Value::parse(t); }

}  // namespace

TEST_CASE("seq_eval: structured kinds") {
  auto g = Seq::g();
  auto h = Seq::h();
  CHECK(exact(g->eval(3)) == q("1/8"));
  CHECK(exact(h->eval(3)) == q("1/4"));
  CHECK(exact(Seq::dblexp(Value::half())->eval(4)) == q("2^-16"));
  CHECK(exact(Seq::pow2exp(Rat(2))->eval(3)) == q("2^-9"));
  CHECK(exact(Seq::factexp(Value::half())->eval(4)) == q("2^-24"));
  // huge-exponent values stay exact for power-of-two eps
  Value v = exact(Seq::dblexp(Value::half())->eval(80));
  CHECK(v.is_pow2());
  CHECK_THROWS_AS(g->eval(0), Error);
  // non-dyadic eps gives enclosures at depth
  Scalar e = Seq::dblexp(q("1/3"))->eval(50);
  CHECK(!scalar_exact(e));
  IntervalVal b = scalar_box(e);
  CHECK(b.lo.sign() == 1);
  CHECK(b.hi < q("2^-1000000000000000"));
}

TEST_CASE("seq_eval: level-0 extension") {
  CHECK(exact(Seq::g()->eval_level0({})) == Value::one());
  CHECK(exact(Seq::dblexp(Value::half())->eval_level0({})) == Value::half());
  CHECK(exact(Seq::h()->eval_level0({})) == Value::one());
  CHECK_THROWS_AS(Seq::table({Value::half()})->eval_level0({}), Error);
}

TEST_CASE("seq_transform: shifts, scale, power") {
  auto g = Seq::g();
  auto h = Seq::h();
  CHECK(exact(Seq::mshift(2, g)->eval(3)) == q("2^-6"));
  CHECK(exact(Seq::ashift(2, h)->eval(3)) == q("1/6"));
  CHECK(exact(Seq::power(Rat(2), h)->eval(1)) == q("1/4"));
  CHECK(exact(Seq::scale(q("1/3"), g)->eval(2)) == q("1/12"));
  CHECK_THROWS_AS(Seq::mshift(0, g), Error);
  CHECK_THROWS_AS(Seq::scale(Value::zero(), g), Error);
}

TEST_CASE("transform algebra: compositions agree pointwise") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> ks(1, 5);
  std::vector<Seq::Ptr> bases = {Seq::g(), Seq::h(), Seq::harmonic_power(Rat(2)),
                                 Seq::geometric(Rat(2, 3)),
                                 Seq::dblexp(Value::half())};
  for (int trial = 0; trial < 40; ++trial) {
    auto base = bases[trial % bases.size()];
    long k = ks(rng), j = ks(rng);
    auto a = Seq::mshift(k, Seq::mshift(j, base));
    auto b = Seq::mshift(k * j, base);
    auto c = Seq::ashift(k, Seq::ashift(j, base));
    auto d = Seq::ashift(k + j, base);
    for (long n = 1; n <= 256; n += 37) {
      CHECK(scalar_cmp(a->eval(n), b->eval(n)) == Ord::equal);
      CHECK(scalar_cmp(c->eval(n), d->eval(n)) == Ord::equal);
    }
    // scale commutes with shifts (equal exactly, or overlapping enclosures
    // of the same real when evaluation is interval-valued)
    auto e1 = Seq::scale(q("1/3"), Seq::mshift(k, base));
    auto e2 = Seq::mshift(k, Seq::scale(q("1/3"), base));
    for (long n = 1; n <= 256; n += 61) {
      Scalar a = e1->eval(n), b2 = e2->eval(n);
      if (scalar_exact(a) && scalar_exact(b2)) {
        CHECK(std::get<Value>(a) == std::get<Value>(b2));
      } else {
        auto o = scalar_cmp(a, b2);
        CHECK(!o.has_value());  // same real: enclosures must overlap
      }
    }
  }
}

TEST_CASE("seq invariants: strictly decreasing on sampled prefixes") {
  std::vector<Seq::Ptr> seqs = {
      Seq::g(), Seq::h(), Seq::harmonic_power(Rat(3, 2)), Seq::pow2exp(Rat(2)),
      Seq::dblexp(q("1/3")), Seq::factexp(Value::half()), Seq::log_family(q("1/4")),
      Seq::mshift(3, Seq::g()), Seq::power(Rat(1, 2), Seq::h())};
  for (const auto& s : seqs) {
    for (long n = 1; n < 40; ++n) {
      auto o = scalar_cmp(s->eval(n + 1, NumCtx{160, 8}), s->eval(n, NumCtx{160, 8}));
      REQUIRE(o.has_value());
      CHECK(*o == Ord::less);
    }
  }
}

TEST_CASE("seq_leq: order verdicts") {
  auto g = Seq::g();
  auto h = Seq::h();
  // g <= h: 2^-n <= 1/(n+1); induction oracle: (n+1) <= 2^n for n=1..64,
  // step (n+2) <= 2(n+1) <= 2*2^n
  for (long n = 1; n <= 64; ++n)
    CHECK(Value::integer(n + 1) <= Value::pow2(Int(n)));
  Verdict v = seq_leq(*g, *h, 256);
  CHECK(v.holds());
  Verdict w = seq_leq(*h, *g, 256);
  CHECK(w.fails());
  CHECK(w.witness["index"] == 2);  // 1/3 > 1/4
  CHECK(seq_leq(*g, *g, 16).holds());
  CHECK(seq_leq(*g, *g, 16).symbolic);
  // same-kind parameter rule
  CHECK(seq_leq(*Seq::geometric(Rat(1, 3)), *Seq::geometric(Rat(1, 2)), 8).symbolic);
  CHECK(seq_leq(*Seq::harmonic_power(Rat(2)), *h, 8).holds());
}

TEST_CASE("lp_test: classification and ledgers") {
  auto g = Seq::g();
  auto h = Seq::h();
  Verdict v1 = lp_test(*g, Rat(1), 64);
  CHECK(v1.holds());
  CHECK(v1.symbolic);
  Verdict v2 = lp_test(*h, Rat(1), 128);
  CHECK(v2.fails());
  // harmonic_power(2): p = 1/2 fails (2q = 1 boundary), p = 1 holds
  auto h2 = Seq::harmonic_power(Rat(2));
  CHECK(lp_test(*h2, Rat(1, 2), 32).fails());
  CHECK(lp_test(*h2, Rat(1), 32).holds());
  // the harmonic ledger at N = 128 exceeds 5 (H_128 ~ 5.43); oracle: exact sum
  Value sum = Value::zero();
  for (long n = 1; n <= 128; ++n) sum = sum + Value::rational(1, n);
  CHECK(sum > Value::integer(5));
  // power transform: h^2 in l^p iff 2p > 1
  auto hp = Seq::power(Rat(2), h);
  CHECK(lp_test(*hp, Rat(1), 16).holds());
  CHECK(lp_test(*hp, Rat(1, 2), 16).fails());
  // tables: divergence by ledger, convergence only under a tail model
  std::vector<Value> tv;
  for (long n = 1; n <= 64; ++n) tv.push_back(Value::pow2(Int(-n)));
  auto tbl = Seq::table(tv);
  LpOptions lo;
  CHECK(lp_test(*tbl, Rat(1), 64, {}, lo).status == Status::unknown);
  lo.table_tail_ratio = Value::half();
  Verdict vt = lp_test(*tbl, Rat(1), 64, {}, lo);
  CHECK(vt.holds());
  CHECK(!vt.symbolic);
}

TEST_CASE("lp_corridor_classify") {
  // harmonic_power(2) at alpha = 1/2: in l^(0.5+), not in l^(0.5-)
  auto h2 = Seq::harmonic_power(Rat(2));
  CorridorFlags f = lp_corridor_classify(*h2, Rat(1, 2));
  CHECK(f.in_plus.holds());
  CHECK(f.in_minus.fails());
  // geometric at alpha = 0: in l^(0+), not in l^(0-)
  CorridorFlags fg = lp_corridor_classify(*Seq::g(), Rat(0));
  CHECK(fg.in_plus.holds());
  CHECK(fg.in_minus.fails());
  // factexp at alpha = 0: in l^(0+) (ratio-test oracle: terms eps^(n!) shrink
  // superexponentially so sum (eps^p)^(n!) converges for every p)
  CorridorFlags ff = lp_corridor_classify(*Seq::factexp(Value::half()), Rat(0));
  CHECK(ff.in_plus.holds());
  // harmonic_power(2) above/below the threshold
  CHECK(lp_corridor_classify(*h2, Rat(3, 4)).in_minus.holds());
  CHECK(lp_corridor_classify(*h2, Rat(1, 4)).in_plus.fails());
}

TEST_CASE("seq_doubling_test") {
  Verdict v = seq_doubling_test(*Seq::g(), DoublingMode::two_doubling, 0, 64);
  CHECK(v.holds());
  CHECK(v.symbolic);
  // harmonic: two-doubling fails (2n+2 > 2n+1), doubling with k = 3 works:
  // oracle 1/(3n+1) <= 1/(2n+2) iff 3n+1 >= 2n+2 iff n >= 1
  CHECK(seq_doubling_test(*Seq::h(), DoublingMode::two_doubling, 0, 64).fails());
  Verdict d = seq_doubling_test(*Seq::h(), DoublingMode::doubling, 4, 64);
  CHECK(d.holds());
  CHECK(d.witness["k"] == 3);
  // dblexp(1/2): 2^-2^(2n) <= 2^(-2^n - 1) iff 2^(2n) >= 2^n + 1; n = 1: 4 >= 3
  Verdict b = seq_doubling_test(*Seq::dblexp(Value::half()),
                                DoublingMode::two_doubling, 0, 64);
  CHECK(b.holds());
  CHECK(b.symbolic);
}

TEST_CASE("partition codec") {
  CHECK(partition_encode(0, 0) == 1);
  CHECK(partition_decode(12) == std::pair<unsigned long, unsigned long>{2, 1});
  CHECK(partition_encode(5, 7) == (15UL << 5));
  CHECK(partition_decode(partition_encode(5, 7)) ==
        std::pair<unsigned long, unsigned long>{5, 7});
  CHECK_THROWS_AS(partition_decode(0), Error);
  for (unsigned long n = 1; n <= 1000000; ++n) {
    auto [k, i] = partition_decode(n);
    if (partition_encode(k, i) != n) {
      CHECK(partition_encode(k, i) == n);
      break;
    }
  }
}

TEST_CASE("growth conditions") {
  // g satisfies 3sn with m = 3 for all n: 2^-n > 2^n 2^-3n
  Verdict g3 = growth_condition(*Seq::g(), GrowthCond::cond_3sn, 4, 1000);
  CHECK(g3.holds());
  CHECK(g3.witness["m"] == 3);
  CHECK(g3.witness["n0"] == 1);
  // pow2exp(2) satisfies 1sn: 2^((n+1)^2 - n^2) = 2^(2n+1) >= 4^n
  CHECK(growth_condition(*Seq::pow2exp(Rat(2)), GrowthCond::cond_1sn, 0, 1000).holds());
  // harmonic_power(2) satisfies simple3 with j = 4: 4(n+5)^2 >= (2n+1)^2
  Verdict hs = growth_condition(*Seq::harmonic_power(Rat(2)),
                                GrowthCond::cond_simple3, 6, 1000);
  CHECK(hs.holds());
  CHECK(hs.witness["j"] == 4);
  // harmonic sequences never satisfy 3sn
  CHECK(growth_condition(*Seq::h(), GrowthCond::cond_3sn, 4, 200).fails());
  // the snots-style table s_n = 2^-4^n passes 1sn (3*4^n >= 2n)
  std::vector<Value> tv;
  for (long n = 1; n <= 12; ++n)
    tv.push_back(Value::pow2(-Value::integer(4).pow_int(n).mant() *
                             Value::integer(4).pow_int(n).exp().get_si()));
  // construct 2^-4^n directly
  tv.clear();
  for (long n = 1; n <= 12; ++n) {
    Int e;
    mpz_ui_pow_ui(e.get_mpz_t(), 4, static_cast<unsigned long>(n));
    tv.push_back(Value::pow2(-e));
  }
  auto snots_s = Seq::table(tv);
  CHECK(growth_condition(*snots_s, GrowthCond::cond_1sn, 0, 11).holds());
}

TEST_CASE("ash transform: summable mode on the geometric sequence") {
  // worked values: r_1 = 1, d_1 = 1/2, c'_1 = 1
  AshResult r = ash_transform(*Seq::g(), AshMode::summable, 64);
  CHECK(r.cert.holds());
  IntervalVal c1 = scalar_box(r.cprime[0]);
  CHECK(c1.contains(Value::one()));
  CHECK(c1.width() <= Value::pow2(-40));
  // strictly decreasing certified by the verdict; spot check
  IntervalVal c2 = scalar_box(r.cprime[1]);
  CHECK(c2.hi < c1.lo);
  // ratio c_n/c'_n decreases toward 0 across checked range
  NumCtx ctx{256, 8};
  IntervalVal early = scalar_box(
      scalar_div(Seq::g()->eval(2, ctx), r.cprime[1], 256));
  IntervalVal late = scalar_box(
      scalar_div(Seq::g()->eval(60, ctx), r.cprime[59], 256));
  CHECK(late.hi < early.lo);
}

TEST_CASE("ash transform: summable on other structured kinds") {
  for (auto s : {Seq::harmonic_power(Rat(2)), Seq::geometric(Rat(2, 5)),
                 Seq::dblexp(Value::half()), Seq::pow2exp(Rat(2))}) {
    AshResult r = ash_transform(*s, AshMode::summable, 200);
    CHECK(r.cert.holds());
  }
  // harmonic tail enclosure is validated against a brute-force oracle
  NumCtx ctx{128, 8};
  auto h2 = Seq::harmonic_power(Rat(2));
  auto tail = h2->tail_sum(10, ctx);
  REQUIRE(tail.has_value());
  IntervalVal box = scalar_box(*tail);
  Scalar brute = Scalar(Value::zero());
  for (long i = 10; i <= 20000; ++i)
    brute = scalar_add(brute, h2->eval(i, ctx), 160);
  IntervalVal bb = scalar_box(brute);
  CHECK(box.hi >= bb.lo);                 // encloses from above
  CHECK(box.lo <= add_dir(bb.hi, Value::rational(1, 20000), 160, Round::up));
  CHECK(box.width() < Value::rational(1, 100000));
}

TEST_CASE("ash transform: divergent mode") {
  AshResult r = ash_transform(*Seq::h(), AshMode::divergent, 128);
  CHECK(r.cert.holds());  // strictly decreasing and c' >= d termwise
  // divergence of c' rides on d not in l1 (Abel-Dini); the certificate
  // records the construction
  CHECK(r.cert.witness["construction"] ==
        "abel-dini: d_n = c_n / (c_1 + ... + c_n)");
  // c' >= d termwise, re-checked here for the first indices
  NumCtx ctx{160, 8};
  Scalar S = Scalar(Value::zero());
  for (long n = 1; n <= 16; ++n) {
    Scalar cn = Seq::h()->eval(n, ctx);
    S = scalar_add(S, cn, 160);
    Scalar dn = scalar_div(cn, S, 160);
    auto o = scalar_cmp(r.cprime[size_t(n - 1)], dn);
    REQUIRE(o.has_value());
    CHECK(*o != Ord::less);
  }
  CHECK_THROWS_AS(ash_transform(*Seq::g(), AshMode::divergent, 32), Error);
  CHECK_THROWS_AS(ash_transform(*Seq::h(), AshMode::summable, 32), Error);
}

TEST_CASE("check_fine and interleave_covers") {
  auto g = Seq::g();
  FineCover ok;
  for (long n = 1; n <= 10; ++n)
    ok.add(n, CoverElement::of_diam(Value::pow2(Int(-n - 1))));
  CHECK(check_fine(ok, *g, ShiftTag::none()).holds());
  FineCover bad = ok;
  bad.elems[1].second = CoverElement::of_diam(Value::rational(1, 3));
  Verdict vb = check_fine(bad, *g, ShiftTag::none());
  CHECK(vb.fails());
  CHECK(vb.witness["index"] == 2);
  FineCover empty;
  CHECK(check_fine(empty, *g, ShiftTag::none()).holds());  // vacuous

  // interleave: family k fine for s^(x2^(k+2)); slot example 6 = 2^1(2*1+1)
  std::vector<FineCover> fams(2);
  for (long k = 0; k < 2; ++k)
    for (long i = 1; i <= 6; ++i)
      fams[size_t(k)].add(i, CoverElement::of_diam(
                                 Value::pow2(Int(-(1L << (k + 2)) * i - 1))));
  InterleaveResult res = interleave_covers(fams, *g);
  CHECK(res.verdict.holds());
  bool found6 = false;
  for (auto& [n, ki] : res.index_map)
    if (n == 6) {
      found6 = true;
      CHECK(ki.first == 1);
      CHECK(ki.second == 1);
    }
  CHECK(found6);
  // degenerate single family is a re-indexing, still fine
  std::vector<FineCover> one(1);
  for (long i = 1; i <= 4; ++i)
    one[0].add(i, CoverElement::of_diam(Value::pow2(Int(-4 * i - 1))));
  CHECK(interleave_covers(one, *g).verdict.holds());
  // a mutated diameter above its bound is rejected at the premise
  fams[0].elems[2].second = CoverElement::of_diam(Value::half());
  CHECK(interleave_covers(fams, *g).verdict.fails());
}
