#pragma once

#include <vector>

#include "microdom/value.hpp"

namespace microdom {

/// Exact scalar represented as a sparse sum of canonical dyadics plus one
/// rational part. Interval endpoints in the adversarial constructions mix
/// scales like 2^-4 and 2^-4^256; a single canonical dyadic would need a
/// mantissa spanning the whole gap, while the sparse sum keeps every
/// operation polynomial in the number of terms.
///
/// Canonical form: dyadic terms sorted by strictly decreasing exponent with
/// pairwise separated bit ranges (term j+1 lies strictly below term j's ulp),
/// so the leading term determines the sign outright.
class ExactSum {
 public:
  ExactSum() = default;
  explicit ExactSum(const Value& v) { add(v); }

  void add(const Value& v);
  ExactSum& operator+=(const ExactSum& o);
  ExactSum& operator-=(const ExactSum& o);
  friend ExactSum operator+(ExactSum a, const ExactSum& b) { return a += b; }
  friend ExactSum operator-(ExactSum a, const ExactSum& b) { return a -= b; }
  ExactSum operator-() const;
  ExactSum scale_int(long k) const;

  bool is_zero() const { return terms_.empty() && rat_.is_zero(); }
  int sign() const;

  static Ord cmp(const ExactSum& a, const ExactSum& b);
  bool operator==(const ExactSum& o) const { return cmp(*this, o) == Ord::equal; }
  bool operator<(const ExactSum& o) const { return cmp(*this, o) == Ord::less; }
  bool operator<=(const ExactSum& o) const { return cmp(*this, o) != Ord::greater; }
  bool operator>(const ExactSum& o) const { return cmp(*this, o) == Ord::greater; }
  bool operator>=(const ExactSum& o) const { return cmp(*this, o) != Ord::less; }

  /// Collapse to a single Value; throws when the expansion exceeds the budget.
  Value to_value() const;
  /// Outward-rounded enclosure with ~prec-bit endpoints.
  IntervalVal box(long prec) const;

  const std::vector<Value>& terms() const { return terms_; }
  const Value& rational_part() const { return rat_; }

  /// Terms in the value grammar, largest scale first (rational part last).
  std::vector<std::string> str_terms() const;
  std::string str() const;

 private:
  std::vector<Value> terms_;  // canonical dyadics, exponent strictly decreasing
  Value rat_;                 // zero or canonical rational

  void insert_dyadic(const Value& v);
  IntervalVal box_dyadic_only(long prec) const;
};

/// Closed interval with ExactSum endpoints; the geometry type used by the
/// adversarial constructions and the cover-decision engine.
struct SumInterval {
  ExactSum lo, hi;

  ExactSum length() const { return hi - lo; }
  bool contains(const SumInterval& inner) const {
    return lo <= inner.lo && inner.hi <= hi;
  }
  bool disjoint(const SumInterval& o) const { return hi < o.lo || o.hi < lo; }
  bool contains_point(const ExactSum& p) const { return lo <= p && p <= hi; }
};

}  // namespace microdom
