#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "microdom/seq.hpp"
#include "microdom/verdict.hpp"

namespace microdom {

enum class GaugeKind {
  power,         // r^alpha
  recip_log,     // -1/log2 r
  recip_loglog,  // 1/log2 log2 (1/r)
  pwl,           // exact piecewise-linear segments
  tau,           // t/(log2(1/t))^beta composed with a base gauge
  power_of,      // base^alpha
  scaled,        // c * base
  spliced,       // plateau/power pieces (dim2 construction)
};

/// Gauge: nondecreasing, right-continuous, positive on (0, valid_below].
/// Immutable; evaluation is exact where the kind permits and an enclosure
/// otherwise. The strictly_increasing flag is set only when an inverse is
/// actually provided.
class Gauge {
 public:
  using Ptr = std::shared_ptr<const Gauge>;

  virtual ~Gauge() = default;

  virtual GaugeKind kind() const = 0;
  virtual std::string spec_str() const = 0;
  virtual bool continuous() const = 0;
  virtual bool strictly_increasing() const = 0;
  /// The "for all r small enough" threshold: claims bind on (0, valid_below].
  virtual Value valid_below() const { return Value::half(); }
  /// Smallest r this gauge can evaluate (pwl families are partial below
  /// their last breakpoint); zero when unbounded.
  virtual Value domain_low() const { return Value::zero(); }

  /// Requires 0 < r; r above valid_below is allowed where the kind extends.
  virtual Scalar eval(const Value& r, const NumCtx& ctx = {}) const = 0;
  Scalar eval_scalar(const Scalar& r, const NumCtx& ctx = {}) const;

  /// Generalized inverse inf{u : phi(u) >= t}; with strict=true requires a
  /// continuous strictly increasing gauge and returns the exact preimage.
  virtual Scalar inverse(const Value& t, bool strict, const NumCtx& ctx) const;

  // --- factories ---------------------------------------------------------
  static Ptr power(const Rat& alpha);
  static Ptr recip_log();
  static Ptr recip_loglog();
  /// Segment list, r strictly decreasing, values positive; extends constant
  /// above the top breakpoint.
  static Ptr pwl_points(std::vector<std::pair<Value, Value>> breakpoints);
  static Ptr tau(long beta, Ptr base);
  static Ptr power_of(Ptr base, const Rat& alpha);
  static Ptr scaled(Ptr base, const Value& c);

  const Rat* power_exponent() const;  // non-null for kind power / power_of
};

/// Piecewise-linear gauge over half-open segments [r_lo, r_hi) with linear
/// interpolation, constant above the top, undefined below the bottom. Jumps
/// between segments are allowed (right-continuous increasing steps).
class PwlGauge final : public Gauge {
 public:
  struct Segment {
    Value r_lo, r_hi;
    Value v_lo, v_hi;  // values at r_lo and at r_hi^-
  };

  /// Continuous chain through breakpoints.
  static std::shared_ptr<const PwlGauge> through(
      std::vector<std::pair<Value, Value>> pts);
  /// Explicit segments (ash2 grow-mode uses jumps).
  static std::shared_ptr<const PwlGauge> of_segments(std::vector<Segment> segs,
                                                     bool continuous);

  GaugeKind kind() const override { return GaugeKind::pwl; }
  std::string spec_str() const override;
  bool continuous() const override { return continuous_; }
  bool strictly_increasing() const override { return strictly_increasing_; }
  Value valid_below() const override { return top_r_; }
  Value domain_low() const override { return bottom_r_; }
  Scalar eval(const Value& r, const NumCtx& ctx) const override;
  Scalar inverse(const Value& t, bool strict, const NumCtx& ctx) const override;

  const std::vector<Segment>& segments() const { return segs_; }

 private:
  PwlGauge(std::vector<Segment> segs, bool cont);
  std::vector<Segment> segs_;  // ascending in r
  bool continuous_ = true;
  bool strictly_increasing_ = true;
  Value top_r_, bottom_r_, top_v_;
};

/// Spliced gauge for the dimension construction: alternating power pieces
/// r^(alpha + 1/n) and plateaus, with possibly enclosure-valued splice
/// points. Continuity at the splices makes boundary ambiguity harmless:
/// evaluation hulls all pieces that may contain r.
class SplicedGauge final : public Gauge {
 public:
  struct Piece {
    IntervalVal lo, hi;       // piece extent (may be enclosures)
    bool plateau = false;
    Scalar plateau_value = Scalar(Value::zero());
    Rat exponent;             // for power pieces
  };

  SplicedGauge(std::vector<Piece> pieces, Value top);

  GaugeKind kind() const override { return GaugeKind::spliced; }
  std::string spec_str() const override { return "spliced"; }
  bool continuous() const override { return true; }
  bool strictly_increasing() const override { return false; }  // plateaus
  Value valid_below() const override { return top_; }
  Scalar eval(const Value& r, const NumCtx& ctx) const override;

  const std::vector<Piece>& pieces() const { return pieces_; }

 private:
  std::vector<Piece> pieces_;  // ascending in r
  Value top_;
};

/// The sequence n -> phi(s_n), wired into the l^p machinery through a
/// closed-form shape classification of the composed values.
class ComposedSeq final : public Seq {
 public:
  ComposedSeq(Gauge::Ptr phi, Seq::Ptr s, const NumCtx& ctx);

  SeqKind kind() const override { return SeqKind::composed; }
  std::string spec_str() const override;
  long horizon() const override { return s_->horizon(); }
  std::optional<bool> lp_member(const Rat& p, const NumCtx& ctx) const override;
  std::optional<Scalar> tail_sum(long n, const NumCtx& ctx) const override;

  const Gauge::Ptr& gauge() const { return phi_; }
  const Seq::Ptr& base() const { return s_; }

 protected:
  Scalar eval_impl(long n, const NumCtx& ctx) const override;

 private:
  // closed-form shape of the values phi(s_n):
  //   all_p:  member of every l^p
  //   never:  member of no l^p
  //   poly:   values ~ n^-q (log n)^-b; member(p) iff pq > 1 or (pq = 1, pb > 1)
  enum class Shape { all_p, never, poly, none };
  Shape shape_ = Shape::none;
  Rat q_, b_;
  Gauge::Ptr phi_;
  Seq::Ptr s_;
  void classify();
};

Seq::Ptr compose_seq(Gauge::Ptr phi, Seq::Ptr s, const NumCtx& ctx = {});

// --- order, doubling, calibration -----------------------------------------

enum class RatioClass { to_zero, bounded, to_infinity, unknown };

/// Report on limsup_{r->0} psi(r)/phi(r) and its reciprocal, sampled along
/// r = 2^-n unless a symbolic rule applies. Following the definitions:
/// phi ⪯ psi iff limsup psi/phi < oo; phi ≺ psi iff it is 0; ≈ requires both
/// directions bounded.
struct GaugeOrderReport {
  RatioClass psi_over_phi = RatioClass::unknown;
  RatioClass phi_over_psi = RatioClass::unknown;
  std::string verdict;  // "phi prec psi" | "psi prec phi" | "approx" |
                        // "phi preceq psi" | "psi preceq phi" |
                        // "incomparable-at-depth" | "unknown"
  bool symbolic = false;
  long horizon = 0;
  Json samples;

  bool phi_preceq_psi() const {
    return psi_over_phi == RatioClass::to_zero || psi_over_phi == RatioClass::bounded;
  }
  bool phi_prec_psi() const { return psi_over_phi == RatioClass::to_zero; }
  bool approx() const {
    return psi_over_phi == RatioClass::bounded && phi_over_psi == RatioClass::bounded;
  }
  Json to_json() const;
};

GaugeOrderReport gauge_order(const Gauge& phi, const Gauge& psi, long N,
                             const NumCtx& ctx = {});

/// phi(2r) <= L phi(r) (strict: <) on the dyadic grid r = 2^-n, n <= N, plus
/// breakpoint checks for pwl gauges.
Verdict gauge_doubling(const Gauge& phi, const Value& L, bool strict, long N,
                       const NumCtx& ctx = {});

/// Premise: phi is 2^alpha-doubling on the grid. Conclusion check: the
/// proof's explicit bound r^alpha/phi(r) <= R0^alpha/phi(R0/2) on the grid.
Verdict doubling2_check(const Gauge& phi, const Rat& alpha, long N,
                        const NumCtx& ctx = {});

struct AsympReport {
  IntervalVal band{Value::zero(), Value::zero()};  // [min, max] of n phi(s_n)
  bool exact = false;                              // all window values exact
  Verdict verdict;
};

/// min/max of n*phi(s_n) over the tail window [N/2, N].
AsympReport asymp_check(const Gauge& phi, const Seq& s, long N,
                        const NumCtx& ctx = {});

/// Piecewise-linear gauge through (s_n, 1/n) for n <= N, constant above s_1.
/// Requires exactly evaluable s.
Gauge::Ptr gauge_from_seq(const Seq& s, long N, const NumCtx& ctx = {});

}  // namespace microdom
