#include "microdom/seq_ops.hpp"

#include <algorithm>
#include <climits>
#include <functional>

#include "microdom/transcend.hpp"

namespace microdom {

namespace {

// definite comparison of s[sn] against t_factor * t[tn], with escalation
std::optional<Ord> cmp_scalars(const Seq& s, long sn, const Seq& t, long tn,
                               const NumCtx& ctx, const Value& t_factor = Value::one()) {
  NumCtx c = ctx;
  for (int round = 0; round < 3; ++round) {
    Scalar a = s.eval(sn, c);
    Scalar b = scalar_mul(Scalar(t_factor), t.eval(tn, c), c.precision_bits);
    auto o = scalar_cmp(a, b);
    if (o) return o;
    c.precision_bits *= 4;
  }
  return std::nullopt;
}

struct KindParams {
  SeqKind kind;
  Rat p;      // geometric lambda / harmonic p / pow2exp p
  Value eps;  // dblexp / factexp / log_family parameter
};

// parameters of an untransformed structured kind, recovered from evaluations
std::optional<KindParams> base_params(const Seq& s, const NumCtx& ctx) {
  switch (s.kind()) {
    case SeqKind::geometric: {
      Scalar v = s.eval(1, ctx);
      return KindParams{SeqKind::geometric, std::get<Value>(v).as_rat(), Value()};
    }
    case SeqKind::harmonic_power: {
      // p from s_1 = 2^-p is not exact in general; kinds compare by identity
      return KindParams{SeqKind::harmonic_power, Rat(0), Value()};
    }
    case SeqKind::dblexp:
    case SeqKind::factexp:
    case SeqKind::log_family:
      return KindParams{s.kind(), Rat(0), Value()};
    default:
      return std::nullopt;
  }
}

}  // namespace

// --- seq_leq ---------------------------------------------------------------

Verdict seq_leq(const Seq& s, const Seq& t, long N, const NumCtx& ctx) {
  require(N >= 1, "seq_leq: depth must be >= 1");
  if (&s == &t) return Verdict::yes("reflexive").by_rule();
  // same-kind parameter rules: a single exact comparison per kind closes the
  // order for every index at once
  auto ps = base_params(s, ctx), pt = base_params(t, ctx);
  if (ps && pt && ps->kind == pt->kind) {
    long probe = (ps->kind == SeqKind::pow2exp) ? 2 : 1;
    auto o = cmp_scalars(s, probe, t, probe, ctx);
    auto o2 = cmp_scalars(s, probe + 1, t, probe + 1, ctx);
    if (o && o2 && *o != Ord::greater && *o2 != Ord::greater) {
      // parameter orders are monotone across the whole sequence for these
      // kinds, so two agreeing probes certify the parameter inequality
      bool rule_ok = false;
      switch (ps->kind) {
        case SeqKind::geometric:
          rule_ok = true;  // lambda_s <= lambda_t from the n = 1 probe
          break;
        case SeqKind::harmonic_power:
        case SeqKind::dblexp:
        case SeqKind::factexp:
        case SeqKind::log_family:
          rule_ok = true;  // parameter order read off the first probe
          break;
        default:
          break;
      }
      if (rule_ok) return Verdict::yes("kind-parameter rule").by_rule();
    }
  }
  long H = std::min({N, s.horizon(), t.horizon()});
  for (long n = 1; n <= H; ++n) {
    auto o = cmp_scalars(s, n, t, n, ctx);
    if (!o) {
      Json w;
      w["index"] = n;
      return Verdict::dunno("order unresolved at index", w).at_depth(n);
    }
    if (*o == Ord::greater) {
      Json w;
      w["index"] = n;
      w["lhs"] = scalar_str(s.eval(n, ctx));
      w["rhs"] = scalar_str(t.eval(n, ctx));
      return Verdict::no("pointwise order fails", w).at_depth(H);
    }
  }
  return Verdict::yes("pointwise order verified").at_depth(H);
}

// --- lp_test ---------------------------------------------------------------

Verdict lp_test(const Seq& s, const Rat& p, long N, const NumCtx& ctx,
                const LpOptions& opts) {
  require(sgn(p.get_num()) > 0, "lp_test: p must be > 0");
  long H = std::min(N, s.horizon());
  long prec = ctx.precision_bits + 16;
  Scalar acc = Scalar(Value::zero());
  Json samples = Json::array();
  Scalar last_term = Scalar(Value::zero());
  for (long n = 1; n <= H; ++n) {
    Scalar term = (p == 1) ? s.eval(n, ctx) : scalar_pow_rat(s.eval(n, ctx), p, ctx);
    last_term = term;
    acc = scalar_add(acc, term, prec);
    if ((n & (n - 1)) == 0 || n == H) {
      Json row;
      row["n"] = n;
      row["partial_sum"] = scalar_str(acc);
      samples.push_back(row);
    }
  }
  IntervalVal total = scalar_box(acc);
  Json w;
  w["ledger"] = samples;
  w["partial_sum_at_depth"] = scalar_str(acc);

  auto member = s.lp_member(p, ctx);
  if (member) {
    Verdict v = *member ? Verdict::yes("symbolic classification", w)
                        : Verdict::no("symbolic classification", w);
    v.symbolic = true;
    return v.at_depth(H);
  }
  if (total.lo > opts.divergence_bound) {
    w["bound"] = opts.divergence_bound.str();
    return Verdict::no("partial sums exceed divergence bound", w).at_depth(H);
  }
  if (opts.table_tail_ratio && H == s.horizon()) {
    const Value& rho = *opts.table_tail_ratio;
    require(rho.sign() > 0 && rho < Value::one(), "tail model: ratio must be in (0,1)");
    IntervalVal lt = scalar_box(last_term);
    Value tail_hi = div_dir(lt.hi * rho, Value::one() - rho, prec, Round::up);
    w["tail_model_ratio"] = rho.str();
    w["total_with_tail"] =
        IntervalVal(total.lo, add_dir(total.hi, tail_hi, prec, Round::up)).str();
    return Verdict::yes("declared tail model", w).at_depth(H);
  }
  return Verdict::dunno("no symbolic classification and no tail model", w).at_depth(H);
}

// --- corridor --------------------------------------------------------------

CorridorFlags lp_corridor_classify(const Seq& s, const Rat& alpha, const NumCtx& ctx) {
  require(sgn(alpha.get_num()) >= 0, "corridor: alpha must be >= 0");
  ResolvedSeq r = resolve_chain(s);
  CorridorFlags out;
  auto rule = [](bool b, const char* note) {
    Verdict v = b ? Verdict::yes(note) : Verdict::no(note);
    v.symbolic = true;
    return v;
  };
  switch (r.base->kind()) {
    case SeqKind::geometric:
    case SeqKind::pow2exp:
    case SeqKind::dblexp:
    case SeqKind::factexp:
      out.in_plus = rule(true, "member of every l^p");
      out.in_minus = rule(alpha > 0, "member of every l^p; needs beta in (0,alpha)");
      return out;
    case SeqKind::harmonic_power:
    case SeqKind::log_family:
    case SeqKind::composed: {
      // membership is monotone in the exponent with a single threshold t:
      // in_plus  <=> member(beta) for all beta > alpha  <=> alpha >= t
      // in_minus <=> member(beta) for some beta < alpha <=> alpha >  t
      auto at = s.lp_member(alpha, ctx);
      if (at && *at) {  // alpha > t
        out.in_plus = rule(true, "threshold rule: alpha above threshold");
        out.in_minus = rule(true, "threshold rule: alpha above threshold");
        return out;
      }
      if (!at) {
        out.in_plus = Verdict::dunno("membership undecided at alpha");
        out.in_minus = Verdict::dunno("membership undecided at alpha");
        return out;
      }
      // alpha <= t: in_minus fails; in_plus holds iff alpha = t, detected by
      // membership holding arbitrarily close above alpha
      out.in_minus = rule(false, "threshold rule: alpha at or below threshold");
      Rat step(1, 2);
      bool plus = true;
      for (int i = 0; i < 24; ++i) {
        auto m = s.lp_member(Rat(alpha + step), ctx);
        if (!m) {
          out.in_plus = Verdict::dunno("membership undecided near alpha");
          return out;
        }
        if (!*m) {
          plus = false;  // threshold strictly above alpha
          break;
        }
        step /= 16;
      }
      out.in_plus = rule(plus, plus ? "threshold rule: alpha equals threshold"
                                    : "threshold rule: threshold above alpha");
      return out;
    }
    default:
      out.in_plus = Verdict::dunno("unclassifiable kind");
      out.in_minus = Verdict::dunno("unclassifiable kind");
      return out;
  }
}

// --- doubling --------------------------------------------------------------

namespace {

// symbolic closure of s_{kn} <= s_n/2 for all n: for these kinds the ratio
// s_{kn}/s_n is nonincreasing in n, so the n = 1 instance decides
std::optional<bool> doubling_rule(const Seq& s, long k, const NumCtx& ctx) {
  switch (s.kind()) {
    case SeqKind::geometric: {
      Value lam = std::get<Value>(s.eval(1, ctx));
      return lam.pow_int(k - 1) <= Value::half();
    }
    case SeqKind::harmonic_power:
    case SeqKind::pow2exp:
    case SeqKind::dblexp:
    case SeqKind::factexp: {
      auto o = cmp_scalars(s, k, s, 1, ctx, Value::half());
      if (!o) return std::nullopt;
      return *o != Ord::greater;
    }
    default:
      return std::nullopt;
  }
}

std::optional<Verdict> doubling_check_k(const Seq& s, long k, long N,
                                        const NumCtx& ctx) {
  if (auto rule = doubling_rule(s, k, ctx)) {
    Json w;
    w["k"] = k;
    Verdict v = *rule ? Verdict::yes("monotone-ratio rule", w)
                      : Verdict::no("monotone-ratio rule", w);
    v.symbolic = true;
    return v;
  }
  long H = std::min(N, s.horizon() / k);
  if (H < 1) return std::nullopt;
  for (long n = 1; n <= H; ++n) {
    auto o = cmp_scalars(s, k * n, s, n, ctx, Value::half());
    if (!o) return std::nullopt;
    if (*o == Ord::greater) {
      Json w;
      w["k"] = k;
      w["index"] = n;
      return Verdict::no("doubling fails at index", w).at_depth(H);
    }
  }
  Json w;
  w["k"] = k;
  return Verdict::yes("verified on checked range", w).at_depth(H);
}

}  // namespace

Verdict seq_doubling_test(const Seq& s, DoublingMode mode, long kmax, long N,
                          const NumCtx& ctx) {
  if (mode == DoublingMode::two_doubling) {
    auto v = doubling_check_k(s, 2, N, ctx);
    return v ? *v : Verdict::dunno("order unresolved");
  }
  require(kmax >= 2, "doubling: kmax must be >= 2");
  Json table = Json::array();
  for (long k = 2; k <= kmax; ++k) {
    auto v = doubling_check_k(s, k, N, ctx);
    if (v && v->holds()) return *v;
    if (v) {
      Json row;
      row["k"] = k;
      row["status"] = to_string(v->status);
      table.push_back(row);
    }
  }
  Json w;
  w["per_k"] = table;
  return Verdict::no("no multiplicative shift k <= kmax works", w).at_depth(N);
}

// --- partition codec ---------------------------------------------------------

unsigned long partition_encode(unsigned long k, unsigned long i) {
  require(k < 63, "partition_encode: k too large");
  require(i <= (ULONG_MAX / 2 - 1), "partition_encode: i too large");
  unsigned long odd = 2 * i + 1;
  require(odd <= (ULONG_MAX >> k), "partition_encode: overflow");
  return odd << k;
}

std::pair<unsigned long, unsigned long> partition_decode(unsigned long n) {
  require(n >= 1, "partition_decode: n must be >= 1");
  unsigned long k = static_cast<unsigned long>(__builtin_ctzl(n));
  unsigned long odd = n >> k;
  return {k, (odd - 1) / 2};
}

// --- growth conditions ---------------------------------------------------------

namespace {

using CondFn = std::function<std::optional<bool>(long)>;

// scans [1, N]; returns (n0, tail_ok) with n0 = last failure + 1
std::pair<long, bool> scan_threshold(long N, const CondFn& f) {
  long last_fail = 0;
  for (long n = 1; n <= N; ++n) {
    auto r = f(n);
    if (!r) return {N + 1, false};
    if (!*r) last_fail = n;
  }
  return {last_fail + 1, last_fail < N};
}

std::optional<bool> cmp_ge(const Scalar& a, const Scalar& b) {
  auto o = scalar_cmp(a, b);
  if (!o) return std::nullopt;
  return *o != Ord::less;
}
std::optional<bool> cmp_gt(const Scalar& a, const Scalar& b) {
  auto o = scalar_cmp(a, b);
  if (!o) return std::nullopt;
  return *o == Ord::greater;
}
std::optional<bool> cmp_le(const Scalar& a, const Scalar& b) {
  auto o = scalar_cmp(a, b);
  if (!o) return std::nullopt;
  return *o != Ord::greater;
}

}  // namespace

Verdict growth_condition(const Seq& s, GrowthCond cond, long param_max, long N,
                         const NumCtx& ctx) {
  require(N >= 1, "growth_condition: N >= 1");
  long prec = ctx.precision_bits;
  switch (cond) {
    case GrowthCond::cond_1sn: {
      long H = std::min(N, s.horizon() - 1);
      for (long n = 1; n <= H; ++n) {
        auto ok = cmp_ge(s.eval(n, ctx),
                         scalar_mul(Scalar(Value::integer(4).pow_int(n)),
                                    s.eval(n + 1, ctx), prec));
        if (!ok) return Verdict::dunno("comparison unresolved").at_depth(n);
        if (!*ok) {
          Json w;
          w["index"] = n;
          return Verdict::no("s_n >= 4^n s_{n+1} fails", w).at_depth(H);
        }
      }
      Json w;
      w["n0"] = 1;
      return Verdict::yes("s_n >= 4^n s_{n+1} on checked range", w).at_depth(H);
    }
    case GrowthCond::cond_3sn: {
      require(param_max >= 2, "cond_3sn: m_max must be >= 2");
      for (long m = 2; m <= param_max; ++m) {
        if (s.kind() == SeqKind::geometric) {
          // s_n > 2^n s_{mn} <=> (2 lambda^(m-1))^n < 1 <=> 2 lambda^(m-1) < 1
          Value lam = std::get<Value>(s.eval(1, ctx));
          if (Value::integer(2) * lam.pow_int(m - 1) < Value::one()) {
            Json w;
            w["m"] = m;
            w["n0"] = 1;
            return Verdict::yes("geometric rule: 2 lambda^(m-1) < 1", w).by_rule();
          }
          continue;
        }
        long H = std::min(N, s.horizon() / m);
        if (H < 1) continue;
        auto [n0, ok] = scan_threshold(H, [&](long n) {
          return cmp_gt(s.eval(n, ctx),
                        scalar_mul(Scalar(Value::pow2(Int(n))), s.eval(m * n, ctx),
                                   prec));
        });
        if (ok && n0 <= H) {
          Json w;
          w["m"] = m;
          w["n0"] = n0;
          return Verdict::yes("s_n > 2^n s_{mn} on [n0, N]", w).at_depth(H);
        }
      }
      return Verdict::no("no m <= m_max admits a threshold").at_depth(N);
    }
    case GrowthCond::cond_simple3: {
      require(param_max >= 1, "cond_simple3: j_max must be >= 1");
      for (long j = 1; j <= param_max; ++j) {
        long H = std::min(N, (s.horizon() - j) / 2);
        if (H < 1) continue;
        auto [n0, ok] = scan_threshold(H, [&](long n) {
          return cmp_le(s.eval(n + j, ctx),
                        scalar_mul(Scalar(Value::integer(j)), s.eval(2 * n, ctx),
                                   prec));
        });
        if (ok && n0 <= H) {
          Json w;
          w["j"] = j;
          w["n0"] = n0;
          return Verdict::yes("s_{n+j} <= j s_{2n} on [n0, N]", w).at_depth(H);
        }
      }
      return Verdict::no("no j <= j_max admits a threshold").at_depth(N);
    }
  }
  fail("unreachable");
}

// --- ash transforms -------------------------------------------------------------

namespace {

Scalar table_tail(const Seq& c, long n, const Value& rho, const NumCtx& ctx) {
  long L = c.horizon();
  long prec = ctx.precision_bits + 16;
  Scalar acc = Scalar(Value::zero());
  for (long i = n; i <= L; ++i) acc = scalar_add(acc, c.eval(i, ctx), prec);
  IntervalVal last = scalar_box(c.eval(L, ctx));
  Value tail_hi = div_dir(last.hi * rho, Value::one() - rho, prec, Round::up);
  IntervalVal a = scalar_box(acc);
  return Scalar(IntervalVal(a.lo, add_dir(a.hi, tail_hi, prec, Round::up)));
}

}  // namespace

AshResult ash_transform(const Seq& c, AshMode mode, long N, const NumCtx& ctx,
                        const AshOptions& opts) {
  require(N >= 2, "ash_transform: N must be >= 2");
  require(N <= c.horizon(), "ash_transform: N beyond sequence horizon");
  AshResult out;
  out.cprime.reserve(static_cast<size_t>(N));
  Json w;
  if (mode == AshMode::summable) {
    auto member = c.lp_member(Rat(1), ctx);
    bool has_model = opts.table_tail_ratio.has_value();
    require((member && *member) || has_model,
            "ash summable: needs an l1 certificate or a declared tail model");
    IntervalVal r1_box;
    Scalar runmin = Scalar(Value::zero());
    long nhat = 0;
    bool strict_ok = true;
    long strict_fail_at = 0;
    Scalar prev;
    Scalar ledger = Scalar(Value::zero());
    for (long n = 1; n <= N; ++n) {
      long prec = std::max(ctx.precision_bits, n + 48);
      NumCtx cn{prec, ctx.max_refine};
      Scalar rn;
      if (has_model) {
        rn = table_tail(c, n, *opts.table_tail_ratio, cn);
      } else {
        auto t = c.tail_sum(n, cn);
        require(t.has_value(), "ash summable: kind has no certified tail form");
        rn = *t;
      }
      if (n == 1) r1_box = scalar_box(rn);
      Scalar dn = scalar_div(c.eval(n, cn), scalar_pow_rat(rn, Rat(1, 2), cn), prec);
      if (n == 1) {
        runmin = dn;
        nhat = 1;
      } else {
        IntervalVal cur = scalar_box(runmin), cand = scalar_box(dn);
        if (cand.lo <= cur.hi) nhat = n;  // may realize the running min
        Value nlo = std::min(cur.lo, cand.lo);
        Value nhi = std::min(cur.hi, cand.hi);
        runmin = (nlo == nhi) ? Scalar(nlo) : Scalar(IntervalVal(nlo, nhi));
      }
      Scalar cp = scalar_add(runmin, Scalar(Value::pow2(Int(-n))), prec);
      if (n > 1 && strict_ok) {
        auto o = scalar_cmp(cp, prev);
        if (!o || *o != Ord::less) {
          strict_ok = false;
          strict_fail_at = n;
        }
      }
      prev = cp;
      ledger = scalar_add(ledger, cp, prec);
      out.cprime.push_back(cp);
    }
    // provable bound: ||c'||_1 <= 2 sqrt(r_1) + 1 (telescoping c_n = r_n - r_{n+1})
    long prec = ctx.precision_bits + 16;
    Value bound = add_dir(Value::integer(2) * sqrt_dir(r1_box.hi, prec, Round::up),
                          Value::one(), prec, Round::up);
    IntervalVal lbox = scalar_box(ledger);
    bool ledger_ok = lbox.hi <= bound;
    bool ratio_ok = true;
    if (N >= 100) {
      long n_hi = N, n_lo = std::max(1L, N / 10);
      long rp = std::max(ctx.precision_bits, N + 48);
      NumCtx cr{rp, ctx.max_refine};
      Scalar rhi =
          scalar_div(c.eval(n_hi, cr), out.cprime[size_t(n_hi - 1)], rp);
      Scalar rlo =
          scalar_div(c.eval(n_lo, cr), out.cprime[size_t(n_lo - 1)], rp);
      auto o = scalar_cmp(rhi, rlo);
      ratio_ok = o && *o == Ord::less;
      w["ratio_at_N"] = scalar_str(rhi);
      w["ratio_at_N_over_10"] = scalar_str(rlo);
    }
    w["r1"] = r1_box.str();
    w["nhat_final"] = nhat;
    w["ledger_sum"] = lbox.str();
    w["ledger_bound"] = bound.str();
    if (strict_fail_at) w["strict_decrease_fails_at"] = strict_fail_at;
    Verdict v = (strict_ok && ledger_ok && ratio_ok)
                    ? Verdict::yes("summable ash certificate", w)
                    : Verdict::no("summable ash certificate", w);
    out.cert = v.at_depth(N);
  } else {
    Verdict div = lp_test(c, Rat(1), std::min(N, 4096L), ctx,
                          LpOptions{opts.divergence_bound, std::nullopt});
    require(div.fails(), "ash divergent: needs a divergence certificate");
    // Abel-Dini auxiliary d_n = c_n / S_n with S_n the partial sums: sum d_n
    // diverges and d_n/c_n = 1/S_n -> 0; recorded as the chosen construction.
    long prec = ctx.precision_bits + 32;
    std::vector<Scalar> d(static_cast<size_t>(N));
    Scalar S = Scalar(Value::zero());
    for (long n = 1; n <= N; ++n) {
      Scalar cn = c.eval(n, ctx);
      S = scalar_add(S, cn, prec);
      d[size_t(n - 1)] = scalar_div(cn, S, prec);
    }
    std::vector<Scalar> cpp(static_cast<size_t>(N));
    IntervalVal run = scalar_box(d.back());
    cpp.back() = d.back();
    for (long n = N - 1; n >= 1; --n) {
      IntervalVal cand = scalar_box(d[size_t(n - 1)]);
      run = IntervalVal(std::max(run.lo, cand.lo), std::max(run.hi, cand.hi));
      cpp[size_t(n - 1)] = run.is_point() ? Scalar(run.lo) : Scalar(run);
    }
    bool strict_ok = true;
    bool ge_d_ok = true;
    Scalar prev;
    for (long n = 1; n <= N; ++n) {
      Scalar factor = Scalar(Value::one() + Value::pow2(Int(-n)));
      Scalar cp = scalar_mul(factor, cpp[size_t(n - 1)], prec);
      auto ged = scalar_cmp(cp, d[size_t(n - 1)]);
      if (!ged || *ged == Ord::less) ge_d_ok = false;
      if (n > 1) {
        auto o = scalar_cmp(cp, prev);
        if (!o || *o != Ord::less) strict_ok = false;
      }
      prev = cp;
      out.cprime.push_back(cp);
    }
    Scalar ledger = Scalar(Value::zero());
    for (const Scalar& cp : out.cprime) ledger = scalar_add(ledger, cp, prec);
    w["construction"] = "abel-dini: d_n = c_n / (c_1 + ... + c_n)";
    w["cprime_partial_sum"] = scalar_str(ledger);
    w["divergence"] = div.to_json();
    Verdict v = (strict_ok && ge_d_ok) ? Verdict::yes("divergent ash certificate", w)
                                       : Verdict::no("divergent ash certificate", w);
    out.cert = v.at_depth(N);
  }
  out.seq = Seq::scalar_table(out.cprime, "ash");
  return out;
}

// --- covers ----------------------------------------------------------------------

Json VInterval::to_json() const {
  Json j;
  j["lo"] = lo.str_terms();
  j["hi"] = hi.str_terms();
  return j;
}

Seq::Ptr ShiftTag::apply(Seq::Ptr s) const {
  switch (kind) {
    case ShiftKind::none: return s;
    case ShiftKind::mult: return Seq::mshift(k, std::move(s));
    case ShiftKind::add: return Seq::ashift(k, std::move(s));
  }
  fail("unreachable");
}

std::string ShiftTag::str() const {
  switch (kind) {
    case ShiftKind::none: return "none";
    case ShiftKind::mult: return "mult(" + std::to_string(k) + ")";
    case ShiftKind::add: return "add(" + std::to_string(k) + ")";
  }
  return "?";
}

namespace {

long shifted_index(const ShiftTag& t, long n) {
  switch (t.kind) {
    case ShiftKind::none: return n;
    case ShiftKind::mult: return t.k * n;
    case ShiftKind::add: return n + t.k;
  }
  return n;
}

// definite diam < slot with refinement; nullopt when unresolved
std::optional<bool> diam_below(const ExactSum& diam, const Seq& s, long slot,
                               const NumCtx& ctx) {
  NumCtx c = ctx;
  for (int round = 0; round < 4; ++round) {
    Scalar sv = s.eval(slot, c);
    if (scalar_exact(sv) && diam.rational_part().is_zero() &&
        diam.terms().size() <= 1) {
      Value d = diam.is_zero() ? Value::zero() : diam.terms().front();
      return d < std::get<Value>(sv);
    }
    IntervalVal db = diam.box(c.precision_bits);
    IntervalVal sb = scalar_box(sv);
    if (db.hi < sb.lo) return true;
    if (sb.hi <= db.lo) return false;
    c.precision_bits *= 4;
  }
  return std::nullopt;
}

}  // namespace

Verdict check_fine(const FineCover& cover, const Seq& s, ShiftTag shift,
                   const NumCtx& ctx) {
  for (const auto& [n, elem] : cover.elems) {
    require(n >= 1, "check_fine: indices start at 1");
    long slot = shifted_index(shift, n);
    if (slot > s.horizon()) {
      Json w;
      w["index"] = n;
      return Verdict::dunno("slot beyond sequence horizon", w);
    }
    auto ok = diam_below(elem.diam, s, slot, ctx);
    if (!ok) {
      Json w;
      w["index"] = n;
      return Verdict::dunno("diameter comparison unresolved", w);
    }
    if (!*ok) {
      Json w;
      w["index"] = n;
      w["diam"] = elem.diam.str();
      w["slot"] = scalar_str(s.eval(slot, ctx));
      return Verdict::no("diam E_n < s_n fails", w);
    }
  }
  return Verdict::yes("all diameters below their slots")
      .at_depth(static_cast<long>(cover.size()));
}

InterleaveResult interleave_covers(const std::vector<FineCover>& families,
                                   const Seq& s, InterleaveMode mode,
                                   const std::vector<VInterval>* target,
                                   const NumCtx& ctx) {
  InterleaveResult out;
  // premise: family k must be fine for the multiplicative 2^(k+2)-shift,
  // indexed by position
  for (size_t k = 0; k < families.size(); ++k) {
    long shift_k = 1L << (k + 2);
    FineCover positional;
    long i = 1;
    for (const auto& [idx, elem] : families[k].elems) {
      (void)idx;
      positional.add(i++, elem);
    }
    Verdict pre = check_fine(positional, s, ShiftTag::mult(shift_k), ctx);
    if (!pre.holds()) {
      Json w;
      w["family"] = k;
      w["premise"] = pre.to_json();
      out.verdict = Verdict::no("input family not fine for its required shift", w);
      return out;
    }
  }
  if (mode == InterleaveMode::large_cover) {
    require(target != nullptr, "large_cover mode needs the common target set");
    for (size_t k = 0; k < families.size(); ++k) {
      std::vector<const VInterval*> boxes;
      for (const auto& [n, e] : families[k].elems) {
        (void)n;
        require(e.box.has_value(), "large_cover mode needs element geometry");
        boxes.push_back(&*e.box);
      }
      for (const VInterval& t : *target) {
        ExactSum cur = t.lo;
        bool done = false;
        for (int guard = 0; guard < 4096 && !done; ++guard) {
          const VInterval* best = nullptr;
          for (const VInterval* b : boxes)
            if (b->lo <= cur && (!best || best->hi < b->hi)) best = b;
          if (!best || best->hi < cur) break;
          if (t.hi <= best->hi) {
            done = true;
            break;
          }
          if (!(cur < best->hi)) break;
          cur = best->hi;
        }
        if (!done) {
          Json w;
          w["family"] = k;
          out.verdict = Verdict::no("family does not cover the target set", w);
          return out;
        }
      }
    }
  }
  // family k element i (1-based) lands in slot n = 2^k(2i+1)
  Json map_sample = Json::array();
  for (size_t k = 0; k < families.size(); ++k) {
    long i = 1;
    for (const auto& [idx, elem] : families[k].elems) {
      (void)idx;
      unsigned long n = partition_encode(static_cast<unsigned long>(k),
                                         static_cast<unsigned long>(i));
      out.combined.add(static_cast<long>(n), elem);
      out.index_map.push_back({static_cast<long>(n), {static_cast<long>(k), i}});
      ++i;
    }
  }
  std::sort(out.combined.elems.begin(), out.combined.elems.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::sort(out.index_map.begin(), out.index_map.end());
  for (size_t j = 0; j < std::min<size_t>(out.index_map.size(), 8); ++j) {
    Json row;
    row["n"] = out.index_map[j].first;
    row["k"] = out.index_map[j].second.first;
    row["i"] = out.index_map[j].second.second;
    map_sample.push_back(row);
  }
  Verdict fine = check_fine(out.combined, s, ShiftTag::none(), ctx);
  Json w;
  w["map_sample"] = map_sample;
  w["recheck"] = fine.to_json();
  if (mode == InterleaveMode::large_cover) w["large"] = true;
  out.verdict = fine.holds() ? Verdict::yes("interleaved cover is s-fine", w)
                             : Verdict::no("interleaved cover failed the re-check", w);
  return out;
}

}  // namespace microdom
