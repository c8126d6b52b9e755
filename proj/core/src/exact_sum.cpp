#include "microdom/exact_sum.hpp"

#include <algorithm>

namespace microdom {

namespace {

long blen(const Int& z) { return static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2)); }

// true when term b (lower) is strictly separated below term a's range
bool separated(const Value& a, const Value& b) {
  // b.exp + bitlen(b.mant) + 1 < a.exp
  return b.exp() + blen(b.mant()) + 1 < a.exp();
}

}  // namespace

void ExactSum::insert_dyadic(const Value& v0) {
  Value v = v0;
  // position by exponent (descending)
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), v,
      [](const Value& a, const Value& b) { return a.exp() > b.exp(); });
  size_t idx = static_cast<size_t>(it - terms_.begin());
  terms_.insert(it, v);
  // merge with neighbors while ranges touch; merged sums stay small because
  // merging only happens across small exponent gaps
  bool changed = true;
  while (changed) {
    changed = false;
    if (idx + 1 < terms_.size() && !separated(terms_[idx], terms_[idx + 1])) {
      Value m = terms_[idx] + terms_[idx + 1];
      terms_.erase(terms_.begin() + idx + 1);
      if (m.is_zero()) {
        terms_.erase(terms_.begin() + idx);
        if (idx > 0) --idx;
        changed = !terms_.empty();
        continue;
      }
      terms_[idx] = m;
      changed = true;
    }
    if (idx > 0 && idx < terms_.size() && !separated(terms_[idx - 1], terms_[idx])) {
      Value m = terms_[idx - 1] + terms_[idx];
      terms_.erase(terms_.begin() + idx);
      --idx;
      if (m.is_zero()) {
        terms_.erase(terms_.begin() + idx);
        changed = !terms_.empty();
        if (idx > 0) --idx;
        continue;
      }
      terms_[idx] = m;
      changed = true;
    }
  }
}

void ExactSum::add(const Value& v) {
  if (v.is_zero()) return;
  if (v.is_rational()) {
    rat_ = rat_ + v;
    return;
  }
  insert_dyadic(v);
}

ExactSum& ExactSum::operator+=(const ExactSum& o) {
  rat_ = rat_ + o.rat_;
  for (const Value& t : o.terms_) insert_dyadic(t);
  return *this;
}

ExactSum& ExactSum::operator-=(const ExactSum& o) {
  rat_ = rat_ - o.rat_;
  for (const Value& t : o.terms_) insert_dyadic(-t);
  return *this;
}

ExactSum ExactSum::operator-() const {
  ExactSum r;
  r.rat_ = -rat_;
  r.terms_.reserve(terms_.size());
  for (const Value& t : terms_) r.terms_.push_back(-t);
  return r;
}

ExactSum ExactSum::scale_int(long k) const {
  ExactSum r;
  if (k == 0) return r;
  r.rat_ = rat_ * Value::integer(k);
  for (const Value& t : terms_) r.insert_dyadic(t * Value::integer(k));
  return r;
}

int ExactSum::sign() const {
  if (terms_.empty()) return rat_.sign();
  if (rat_.is_zero()) return terms_.front().sign();
  // mixed: compare the rational part against the dyadic part through bounds;
  // structurally the parts live at wildly different scales, so a few
  // refinements decide. Exact cancellation is impossible (a rational with an
  // odd prime factor in the denominator never equals a finite dyadic sum).
  long prec = 128;
  for (int round = 0; round < 24; ++round) {
    IntervalVal dy = box_dyadic_only(prec);
    Value rlo = rat_.round_bits(prec, Round::down);
    Value rhi = rat_.round_bits(prec, Round::up);
    Value slo = add_dir(dy.lo, rlo, prec, Round::down);
    Value shi = add_dir(dy.hi, rhi, prec, Round::up);
    if (slo.sign() > 0) return 1;
    if (shi.sign() < 0) return -1;
    prec *= 2;
  }
  fail("ExactSum::sign: mixed rational/dyadic sum did not resolve");
}

IntervalVal ExactSum::box_dyadic_only(long prec) const {
  IntervalVal acc(Value::zero());
  for (const Value& t : terms_) {
    acc = IntervalVal(add_dir(acc.lo, t, prec, Round::down),
                      add_dir(acc.hi, t, prec, Round::up));
  }
  return acc;
}

IntervalVal ExactSum::box(long prec) const {
  IntervalVal acc = box_dyadic_only(prec);
  if (!rat_.is_zero()) {
    acc = IntervalVal(add_dir(acc.lo, rat_.round_bits(prec, Round::down), prec, Round::down),
                      add_dir(acc.hi, rat_.round_bits(prec, Round::up), prec, Round::up));
  }
  return acc;
}

Ord ExactSum::cmp(const ExactSum& a, const ExactSum& b) {
  ExactSum d = a;
  d -= b;
  return ord_of_int(d.sign());
}

Value ExactSum::to_value() const {
  Value acc = rat_;
  for (const Value& t : terms_) acc = acc + t;
  return acc;
}

std::vector<std::string> ExactSum::str_terms() const {
  std::vector<std::string> out;
  out.reserve(terms_.size() + 1);
  for (const Value& t : terms_) out.push_back(t.str());
  if (!rat_.is_zero()) out.push_back(rat_.str());
  if (out.empty()) out.push_back("0");
  return out;
}

std::string ExactSum::str() const {
  auto parts = str_terms();
  std::string s = parts.front();
  for (size_t i = 1; i < parts.size(); ++i) {
    if (!parts[i].empty() && parts[i].front() == '-')
      s += " - " + parts[i].substr(1);
    else
      s += " + " + parts[i];
  }
  return s;
}

}  // namespace microdom
