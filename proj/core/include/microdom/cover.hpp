#pragma once

#include <optional>
#include <vector>

#include "microdom/exact_sum.hpp"
#include "microdom/seq.hpp"
#include "microdom/verdict.hpp"

namespace microdom {

/// Closed interval with exact endpoints.
struct VInterval {
  ExactSum lo, hi;

  VInterval() = default;
  VInterval(ExactSum l, ExactSum h) : lo(std::move(l)), hi(std::move(h)) {}
  VInterval(const Value& l, const Value& h) : lo(ExactSum(l)), hi(ExactSum(h)) {}

  ExactSum length() const { return hi - lo; }
  bool contains(const VInterval& inner) const {
    return lo <= inner.lo && inner.hi <= hi;
  }
  bool contains_point(const ExactSum& p) const { return lo <= p && p <= hi; }
  bool disjoint(const VInterval& o) const { return hi < o.lo || o.hi < lo; }
  Json to_json() const;
};

/// Cover element: an interval with exact endpoints, or an abstract set known
/// only by its diameter.
struct CoverElement {
  std::optional<VInterval> box;
  ExactSum diam;

  static CoverElement of_diam(const Value& d) {
    CoverElement e;
    e.diam = ExactSum(d);
    return e;
  }
  static CoverElement of_box(VInterval iv) {
    CoverElement e;
    e.diam = iv.length();
    e.box = std::move(iv);
    return e;
  }
};

enum class ShiftKind { none, mult, add };

struct ShiftTag {
  ShiftKind kind = ShiftKind::none;
  long k = 1;

  static ShiftTag none() { return {}; }
  static ShiftTag mult(long k) { return {ShiftKind::mult, k}; }
  static ShiftTag add(long k) { return {ShiftKind::add, k}; }

  Seq::Ptr apply(Seq::Ptr s) const;
  std::string str() const;
};

/// Indexed family of sets with the fineness contract diam E_n < s_n
/// (after the shift) for every index n in the explicit finite index set.
struct FineCover {
  std::vector<std::pair<long, CoverElement>> elems;  // (index, element)

  void add(long n, CoverElement e) { elems.emplace_back(n, std::move(e)); }
  size_t size() const { return elems.size(); }
};

/// Verifies diam E_n < s_n per index; witness carries the first failing index.
Verdict check_fine(const FineCover& cover, const Seq& s, ShiftTag shift,
                   const NumCtx& ctx = {});

enum class InterleaveMode { ideal_union, large_cover };

struct InterleaveResult {
  FineCover combined;                         // indices 2^k(2i+1)
  std::vector<std::pair<long, std::pair<long, long>>> index_map;  // n -> (k,i)
  Verdict verdict;
};

/// The sigma-ideal mechanism: family k (0-based), certified fine for
/// s^(x2^(k+2)), lands in the odd-multiples-of-2^k slots n = 2^k(2i+1); the
/// output is re-verified s-fine index by index. In large_cover mode every
/// family must cover the given target set, making the output a large cover.
InterleaveResult interleave_covers(const std::vector<FineCover>& families,
                                   const Seq& s,
                                   InterleaveMode mode = InterleaveMode::ideal_union,
                                   const std::vector<VInterval>* target = nullptr,
                                   const NumCtx& ctx = {});

}  // namespace microdom
