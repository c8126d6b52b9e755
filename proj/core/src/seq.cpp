#include "microdom/seq.hpp"

#include <climits>

namespace microdom {

namespace {

std::string rat_str(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

// eps^k for a possibly huge integer k >= 1: exact for power-of-two eps or
// small expansions, enclosure through the log domain otherwise.
Scalar pow_int_big(const Value& eps, const Int& k, const NumCtx& ctx) {
  if (eps.is_pow2()) return Value::pow2(eps.exp() * k);
  long bl;
  if (eps.is_dyadic())
    bl = static_cast<long>(mpz_sizeinbase(eps.mant().get_mpz_t(), 2));
  else
    bl = static_cast<long>(
        std::max(mpz_sizeinbase(eps.rat().get_num().get_mpz_t(), 2),
                 mpz_sizeinbase(eps.rat().get_den().get_mpz_t(), 2)));
  if (k.fits_slong_p() && Int(bl) * k <= (Value::kBitBudget >> 4))
    return eps.pow_int(k.get_si());
  IntervalVal lg = eval_log2(eps, ctx);
  IntervalVal y = iv_mul(lg, IntervalVal(Value::integer(k)), ctx.precision_bits + 8);
  return exp2_enclosure(y, ctx);
}

class GeometricSeq final : public Seq {
 public:
  explicit GeometricSeq(const Rat& lambda) : lam_(Value::from_mpq(lambda)) {
    require(lam_.sign() > 0 && lam_ < Value::one(), "geom: lambda must be in (0,1)");
  }
  SeqKind kind() const override { return SeqKind::geometric; }
  std::string spec_str() const override { return "geom(" + lam_.str() + ")"; }
  Scalar eval_level0(const NumCtx&) const override { return Value::one(); }
  std::optional<bool> lp_member(const Rat&, const NumCtx&) const override {
    return true;  // geometric series converge for every p > 0
  }
  std::optional<Scalar> tail_sum(long n, const NumCtx&) const override {
    // sum_{i>=n} lam^i = lam^n / (1-lam)
    return lam_.pow_int(n) / (Value::one() - lam_);
  }
  const Value& lambda() const { return lam_; }

 protected:
  Scalar eval_impl(long n, const NumCtx&) const override { return lam_.pow_int(n); }

 private:
  Value lam_;
};

class HarmonicPowerSeq final : public Seq {
 public:
  explicit HarmonicPowerSeq(const Rat& p) : p_(p) {
    require(sgn(p.get_num()) > 0, "harm: p must be > 0");
  }
  SeqKind kind() const override { return SeqKind::harmonic_power; }
  std::string spec_str() const override { return "harm(" + rat_str(p_) + ")"; }
  Scalar eval_level0(const NumCtx&) const override { return Value::one(); }
  std::optional<bool> lp_member(const Rat& q, const NumCtx&) const override {
    return Rat(q * p_) > 1;  // sum (n+1)^(-pq) converges iff pq > 1
  }
  std::optional<Scalar> tail_sum(long n, const NumCtx& ctx) const override;
  const Rat& p() const { return p_; }

 protected:
  Scalar eval_impl(long n, const NumCtx& ctx) const override {
    return pow_rat(Value::integer(n + 1), Rat(-p_), ctx);
  }

 private:
  Rat p_;
};

std::optional<Scalar> HarmonicPowerSeq::tail_sum(long n, const NumCtx& ctx) const {
  if (p_ <= 1) return std::nullopt;  // divergent
  return zeta_tail_em(n + 1, p_, ctx);
}

class Pow2ExpSeq final : public Seq {
 public:
  explicit Pow2ExpSeq(const Rat& p) : p_(p) {
    require(sgn(p.get_num()) > 0, "pow2exp: p must be > 0");
  }
  SeqKind kind() const override { return SeqKind::pow2exp; }
  std::string spec_str() const override { return "pow2exp(" + rat_str(p_) + ")"; }
  Scalar eval_level0(const NumCtx&) const override { return Value::one(); }
  std::optional<bool> lp_member(const Rat&, const NumCtx&) const override { return true; }
  std::optional<Scalar> tail_sum(long n, const NumCtx& ctx) const override;
  const Rat& p() const { return p_; }

 protected:
  Scalar eval_impl(long n, const NumCtx& ctx) const override {
    Scalar e = pow_rat(Value::integer(n), p_, ctx);  // n^p
    if (scalar_exact(e)) {
      const Value& t = std::get<Value>(e);
      if (t.is_integer()) return Value::pow2(-t.floor_int());
    }
    return exp2_enclosure(iv_neg(scalar_box(e)), ctx);
  }

 private:
  Rat p_;
};

class DblExpSeq final : public Seq {
 public:
  explicit DblExpSeq(const Value& eps) : eps_(eps) {
    require(eps.sign() > 0 && eps < Value::one(), "dblexp: eps must be in (0,1)");
  }
  SeqKind kind() const override { return SeqKind::dblexp; }
  std::string spec_str() const override { return "dblexp(" + eps_.str() + ")"; }
  Scalar eval_level0(const NumCtx&) const override { return eps_; }
  std::optional<bool> lp_member(const Rat&, const NumCtx&) const override { return true; }
  std::optional<Scalar> tail_sum(long n, const NumCtx& ctx) const override;
  const Value& eps() const { return eps_; }

 protected:
  Scalar eval_impl(long n, const NumCtx& ctx) const override {
    Int k;
    mpz_ui_pow_ui(k.get_mpz_t(), 2, static_cast<unsigned long>(n));
    return pow_int_big(eps_, k, ctx);
  }

 private:
  Value eps_;
};

class FactExpSeq final : public Seq {
 public:
  explicit FactExpSeq(const Value& eps) : eps_(eps) {
    require(eps.sign() > 0 && eps < Value::one(), "factexp: eps must be in (0,1)");
  }
  SeqKind kind() const override { return SeqKind::factexp; }
  std::string spec_str() const override { return "factexp(" + eps_.str() + ")"; }
  Scalar eval_level0(const NumCtx&) const override { return eps_; }
  std::optional<bool> lp_member(const Rat&, const NumCtx&) const override { return true; }
  std::optional<Scalar> tail_sum(long n, const NumCtx& ctx) const override;
  const Value& eps() const { return eps_; }

 protected:
  Scalar eval_impl(long n, const NumCtx& ctx) const override {
    Int k;
    mpz_fac_ui(k.get_mpz_t(), static_cast<unsigned long>(n));
    return pow_int_big(eps_, k, ctx);
  }

 private:
  Value eps_;
};

class LogFamilySeq final : public Seq {
 public:
  explicit LogFamilySeq(const Value& eps) : eps_(eps) {
    require(eps.sign() > 0 && eps < Value::one(), "logfam: eps must be in (0,1)");
  }
  SeqKind kind() const override { return SeqKind::log_family; }
  std::string spec_str() const override { return "logfam(" + eps_.str() + ")"; }
  Scalar eval_level0(const NumCtx&) const override { return Value::one(); }
  std::optional<bool> lp_member(const Rat& q, const NumCtx& ctx) const override;
  const Value& eps() const { return eps_; }

 protected:
  Scalar eval_impl(long n, const NumCtx& ctx) const override {
    // eps^(ln(n+1)) = 2^(log2(eps) * log2(n+1) * ln 2)
    NumCtx c2{ctx.precision_bits + 16, ctx.max_refine};
    IntervalVal lge = eval_log2(eps_, c2);
    IntervalVal lgn = eval_log2(Value::integer(n + 1), c2);
    IntervalVal l2 = ln2_enclosure(c2.precision_bits);
    IntervalVal y = iv_mul(iv_mul(lge, lgn, c2.precision_bits), l2, c2.precision_bits);
    return exp2_enclosure(y, ctx);
  }

 private:
  Value eps_;
};

std::optional<bool> LogFamilySeq::lp_member(const Rat& q, const NumCtx& ctx) const {
  // member of l^q iff q * ln(1/eps) > 1
  NumCtx c{std::max(96L, ctx.precision_bits), ctx.max_refine};
  for (long round = 0; round < ctx.max_refine; ++round) {
    IntervalVal lge = eval_log2(eps_, c);
    IntervalVal l2 = ln2_enclosure(c.precision_bits);
    IntervalVal t = iv_mul(iv_mul(iv_neg(lge), l2, c.precision_bits),
                           IntervalVal(Value::from_mpq(q)), c.precision_bits);
    if (t.lo > Value::one()) return true;
    if (t.hi < Value::one()) return false;
    c.precision_bits *= 2;
  }
  return std::nullopt;
}

}  // namespace

// Euler-Maclaurin enclosure for sum_{m>=M} m^-p:
//   T0 = M^(1-p)/(p-1), T1 = M^-p/2, T2 = p*M^(-p-1)/12,
//   remainder in [-p(p+1)(p+2) M^(-p-3)/720, 0] (enveloping series; x^-p is
//   completely monotone). Cross-checked against a brute-force oracle in tests.
Scalar zeta_tail_em(long M_, const Rat& p, const NumCtx& ctx) {
  require(p > 1, "zeta_tail_em: requires p > 1");
  Value M = Value::integer(M_);
  long prec = ctx.precision_bits + 16;
  NumCtx c2{prec, ctx.max_refine};
  Scalar Mp = scalar_pow_rat(Scalar(M), Rat(-p), c2);           // M^-p
  Scalar M1p = scalar_pow_rat(Scalar(M), Rat(Rat(1) - p), c2);  // M^(1-p)
  Value pm1 = Value::from_mpq(Rat(p - 1));
  Value pv = Value::from_mpq(p);
  Scalar t0 = scalar_div(M1p, Scalar(pm1), prec);
  Scalar t1 = scalar_mul(Mp, Scalar(Value::half()), prec);
  Scalar t2 = scalar_div(scalar_mul(scalar_div(Mp, Scalar(M), prec), Scalar(pv), prec),
                         Scalar(Value::integer(12)), prec);
  Scalar sum3 = scalar_add(scalar_add(t0, t1, prec), t2, prec);
  Scalar M3 = scalar_div(scalar_div(scalar_div(Mp, Scalar(M), prec), Scalar(M), prec),
                         Scalar(M), prec);
  Value coef = Value::from_mpq(Rat(p * (p + 1) * (p + 2))) / Value::integer(720);
  Scalar rem = scalar_mul(M3, Scalar(coef), prec);
  IntervalVal s3 = scalar_box(sum3), rb = scalar_box(rem);
  return Scalar(IntervalVal(sub_dir(s3.lo, rb.hi, prec, Round::down), s3.hi));
}

// a few exact terms plus a geometric bound with the observed ratio
std::optional<Scalar> geometric_ratio_tail(const Seq& s, long n, long k_terms,
                                           const NumCtx& ctx) {
  long prec = ctx.precision_bits + 16;
  Scalar acc = Scalar(Value::zero());
  for (long i = n; i < n + k_terms; ++i) acc = scalar_add(acc, s.eval(i, ctx), prec);
  Scalar head = s.eval(n + k_terms, ctx);
  Scalar next = s.eval(n + k_terms + 1, ctx);
  IntervalVal rho = scalar_box(scalar_div(next, head, prec));
  if (!(rho.hi < Value::one())) return std::nullopt;
  IntervalVal h = scalar_box(head);
  // rest in [head, head/(1-rho_hi)]; the denominator is rounded down so the
  // quotient stays an upper bound (and 1-rho is never expanded exactly across
  // a huge scale gap)
  Value denom = sub_dir(Value::one(), rho.hi, prec, Round::down);
  Value rest_hi = div_dir(h.hi, denom, prec, Round::up);
  IntervalVal rest(h.lo, rest_hi);
  IntervalVal a = scalar_box(acc);
  return Scalar(iv_add(a, rest, prec));
}

namespace {

std::optional<Scalar> Pow2ExpSeq::tail_sum(long n, const NumCtx& ctx) const {
  if (p_ < 1) return std::nullopt;
  if (p_ == 1) {  // 2^-n: geometric
    return Scalar(Value::pow2(Int(-n + 1)));
  }
  return geometric_ratio_tail(*this, n, 16, ctx);
}

std::optional<Scalar> DblExpSeq::tail_sum(long n, const NumCtx& ctx) const {
  return geometric_ratio_tail(*this, n, 4, ctx);
}

std::optional<Scalar> FactExpSeq::tail_sum(long n, const NumCtx& ctx) const {
  return geometric_ratio_tail(*this, n, 2, ctx);
}

class TableSeq final : public Seq {
 public:
  explicit TableSeq(std::vector<Value> vals) : vals_(std::move(vals)) {
    require(!vals_.empty(), "table: empty");
    for (size_t i = 0; i < vals_.size(); ++i) {
      require(vals_[i].sign() > 0, "table: entries must be positive");
      if (i > 0)
        require(vals_[i] < vals_[i - 1], "table: entries must be strictly decreasing");
    }
  }
  SeqKind kind() const override { return SeqKind::table; }
  std::string spec_str() const override {
    return "table:#" + std::to_string(vals_.size());
  }
  long horizon() const override { return static_cast<long>(vals_.size()); }
  const std::vector<Value>& values() const { return vals_; }

 protected:
  Scalar eval_impl(long n, const NumCtx&) const override {
    require(n <= horizon(), "table: index beyond table length");
    return vals_[static_cast<size_t>(n - 1)];
  }

 private:
  std::vector<Value> vals_;
};

class ScalarTableSeq final : public Seq {
 public:
  ScalarTableSeq(std::vector<Scalar> vals, std::string label)
      : vals_(std::move(vals)), label_(std::move(label)) {
    require(!vals_.empty(), "scalar_table: empty");
  }
  SeqKind kind() const override { return SeqKind::scalar_table; }
  std::string spec_str() const override {
    return label_ + ":#" + std::to_string(vals_.size());
  }
  long horizon() const override { return static_cast<long>(vals_.size()); }

 protected:
  Scalar eval_impl(long n, const NumCtx&) const override {
    require(n <= horizon(), "scalar_table: index beyond length");
    return vals_[static_cast<size_t>(n - 1)];
  }

 private:
  std::vector<Scalar> vals_;
  std::string label_;
};

}  // namespace

Scalar Seq::eval(long n, const NumCtx& ctx) const {
  require(n >= 1, "seq_eval: index base is 1");
  std::pair<long, long> key{n, ctx.precision_bits};
  {
    std::lock_guard<std::mutex> lk(memo_mu_);
    auto it = memo_.find(key.first * 1000003 + key.second);
    if (it != memo_.end()) return it->second;
  }
  Scalar v = eval_impl(n, ctx);
  {
    std::lock_guard<std::mutex> lk(memo_mu_);
    if (memo_.size() < (1u << 20))
      memo_.emplace(key.first * 1000003 + key.second, v);
  }
  return v;
}

Scalar Seq::eval_level0(const NumCtx&) const {
  fail("eval_level0: no closed form for this kind (" + spec_str() + ")");
}

long Seq::horizon() const { return LONG_MAX; }

std::optional<bool> Seq::lp_member(const Rat&, const NumCtx&) const {
  return std::nullopt;
}

std::optional<Scalar> Seq::tail_sum(long, const NumCtx&) const { return std::nullopt; }

Seq::Ptr Seq::geometric(const Rat& lambda) {
  return std::make_shared<GeometricSeq>(lambda);
}
Seq::Ptr Seq::harmonic_power(const Rat& p) {
  return std::make_shared<HarmonicPowerSeq>(p);
}
Seq::Ptr Seq::pow2exp(const Rat& p) { return std::make_shared<Pow2ExpSeq>(p); }
Seq::Ptr Seq::dblexp(const Value& e) { return std::make_shared<DblExpSeq>(e); }
Seq::Ptr Seq::factexp(const Value& e) { return std::make_shared<FactExpSeq>(e); }
Seq::Ptr Seq::log_family(const Value& e) { return std::make_shared<LogFamilySeq>(e); }
Seq::Ptr Seq::table(std::vector<Value> v) {
  return std::make_shared<TableSeq>(std::move(v));
}
Seq::Ptr Seq::scalar_table(std::vector<Scalar> v, std::string label) {
  return std::make_shared<ScalarTableSeq>(std::move(v), std::move(label));
}

Seq::Ptr Seq::mshift(long k, Ptr base) {
  require(k >= 1, "mshift: k must be a positive integer");
  return std::make_shared<DerivedSeq>(TransformKind::mshift, k, Value::one(), Rat(1),
                                      std::move(base));
}
Seq::Ptr Seq::ashift(long k, Ptr base) {
  require(k >= 1, "ashift: k must be a positive integer");
  return std::make_shared<DerivedSeq>(TransformKind::ashift, k, Value::one(), Rat(1),
                                      std::move(base));
}
Seq::Ptr Seq::scale(const Value& q, Ptr base) {
  require(q.sign() > 0, "scale: q must be > 0");
  return std::make_shared<DerivedSeq>(TransformKind::scale, 0, q, Rat(1),
                                      std::move(base));
}
Seq::Ptr Seq::power(const Rat& q, Ptr base) {
  require(sgn(q.get_num()) > 0, "power: q must be > 0");
  return std::make_shared<DerivedSeq>(TransformKind::power, 0, Value::one(), q,
                                      std::move(base));
}

DerivedSeq::DerivedSeq(TransformKind t, long k, Value q, Rat e, Ptr base)
    : t_(t), k_(k), q_(std::move(q)), e_(std::move(e)), base_(std::move(base)) {}

std::string DerivedSeq::spec_str() const {
  switch (t_) {
    case TransformKind::mshift:
      return "mshift(" + std::to_string(k_) + "," + base_->spec_str() + ")";
    case TransformKind::ashift:
      return "ashift(" + std::to_string(k_) + "," + base_->spec_str() + ")";
    case TransformKind::scale:
      return "scale(" + q_.str() + "," + base_->spec_str() + ")";
    case TransformKind::power:
      return "power(" + rat_str(e_) + "," + base_->spec_str() + ")";
  }
  return "?";
}

Scalar DerivedSeq::eval_impl(long n, const NumCtx& ctx) const {
  switch (t_) {
    case TransformKind::mshift: {
      require(n <= LONG_MAX / k_, "mshift: index overflow");
      return base_->eval(k_ * n, ctx);
    }
    case TransformKind::ashift:
      return base_->eval(n + k_, ctx);
    case TransformKind::scale:
      return scalar_mul(Scalar(q_), base_->eval(n, ctx), ctx.precision_bits);
    case TransformKind::power:
      return scalar_pow_rat(base_->eval(n, ctx), e_, ctx);
  }
  fail("unreachable");
}

Scalar DerivedSeq::eval_level0(const NumCtx& ctx) const {
  switch (t_) {
    case TransformKind::mshift:
      return base_->eval_level0(ctx);
    case TransformKind::ashift:
      return base_->eval(k_, ctx);
    case TransformKind::scale:
      return scalar_mul(Scalar(q_), base_->eval_level0(ctx), ctx.precision_bits);
    case TransformKind::power:
      return scalar_pow_rat(base_->eval_level0(ctx), e_, ctx);
  }
  fail("unreachable");
}

long DerivedSeq::horizon() const {
  long h = base_->horizon();
  if (h == LONG_MAX) return h;
  switch (t_) {
    case TransformKind::mshift: return h / k_;
    case TransformKind::ashift: return std::max(0L, h - k_);
    default: return h;
  }
}

std::optional<bool> DerivedSeq::lp_member(const Rat& p, const NumCtx& ctx) const {
  // index shifts and positive scalings preserve l^p membership of a monotone
  // sequence; (s^q) in l^p iff s in l^(pq)
  switch (t_) {
    case TransformKind::mshift:
    case TransformKind::ashift:
    case TransformKind::scale:
      return base_->lp_member(p, ctx);
    case TransformKind::power:
      return base_->lp_member(Rat(p * e_), ctx);
  }
  return std::nullopt;
}

std::optional<Scalar> DerivedSeq::tail_sum(long n, const NumCtx& ctx) const {
  switch (t_) {
    case TransformKind::ashift:
      return base_->tail_sum(n + k_, ctx);
    case TransformKind::scale: {
      auto t = base_->tail_sum(n, ctx);
      if (!t) return std::nullopt;
      return scalar_mul(Scalar(q_), *t, ctx.precision_bits);
    }
    default:
      return std::nullopt;
  }
}

ResolvedSeq resolve_chain(const Seq& s) {
  ResolvedSeq r;
  const Seq* cur = &s;
  while (cur->kind() == SeqKind::derived) {
    const auto* d = static_cast<const DerivedSeq*>(cur);
    switch (d->transform()) {
      case TransformKind::power: r.power_acc *= d->power_e(); break;
      case TransformKind::scale: r.has_scale = true; break;
      default: r.has_shift = true; break;
    }
    cur = d->base().get();
  }
  r.base = cur;
  return r;
}

SeqFamily SeqFamily::closure(Seq::Ptr s, long K) {
  SeqFamily f;
  f.kind = Kind::closure;
  f.base = std::move(s);
  f.K = K;
  return f;
}

SeqFamily SeqFamily::shift_completion(Seq::Ptr s, long K) {
  SeqFamily f;
  f.kind = Kind::shift_completion;
  f.base = std::move(s);
  f.K = K;
  return f;
}

std::vector<Seq::Ptr> SeqFamily::enumerate() const {
  std::vector<Seq::Ptr> out;
  switch (kind) {
    case Kind::closure:
      require(K >= 1, "closure: K >= 1");
      for (long k = 1; k <= K; ++k)
        out.push_back(k == 1 ? base : Seq::mshift(k, base));
      break;
    case Kind::shift_completion:
      require(K >= 1, "shift_completion: K >= 1");
      for (long k = 1; k <= K; ++k) out.push_back(Seq::ashift(k, base));
      break;
    case Kind::scaled:
      for (const Value& q : scales) out.push_back(Seq::scale(q, base));
      break;
    case Kind::explicit_list:
      out = members;
      break;
  }
  return out;
}

std::string SeqFamily::spec_str() const {
  switch (kind) {
    case Kind::closure: return "clos(" + base->spec_str() + ",K=" + std::to_string(K) + ")";
    case Kind::shift_completion:
      return "hat(" + base->spec_str() + ",K=" + std::to_string(K) + ")";
    case Kind::scaled: return "scaled(" + base->spec_str() + ")";
    case Kind::explicit_list: return "family:#" + std::to_string(members.size());
  }
  return "?";
}

}  // namespace microdom
