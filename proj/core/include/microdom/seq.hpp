#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "microdom/transcend.hpp"
#include "microdom/value.hpp"

namespace microdom {

enum class SeqKind {
  geometric,       // lambda^n
  harmonic_power,  // (n+1)^-p
  pow2exp,         // 2^-(n^p)
  dblexp,          // eps^(2^n)
  factexp,         // eps^(n!)
  log_family,      // eps^(ln(n+1))
  table,
  scalar_table,  // construction outputs (exact-or-enclosure entries)
  composed,      // gauge o seq (defined in gauge.hpp)
  derived,       // transform wrapper
};

/// Element of the set of strictly decreasing positive sequences with limit 0.
/// Index base is 1. Structured kinds prove the membership invariants
/// symbolically from their parameter ranges; tables are checked entry by
/// entry up to their length.
class Seq {
 public:
  using Ptr = std::shared_ptr<const Seq>;

  virtual ~Seq() = default;

  virtual SeqKind kind() const = 0;
  virtual std::string spec_str() const = 0;

  /// n >= 1. Exact Value where the kind permits, enclosure otherwise.
  Scalar eval(long n, const NumCtx& ctx = {}) const;

  /// Natural extension of the defining formula to n = 0; used as the level-0
  /// radius by the Cantor constructions. Throws for kinds with no formula.
  virtual Scalar eval_level0(const NumCtx& ctx) const;

  /// Largest index with a defined value (tables); LONG_MAX otherwise.
  virtual long horizon() const;

  /// Symbolic l^p membership where the kind admits one.
  virtual std::optional<bool> lp_member(const Rat& p, const NumCtx& ctx) const;

  /// Enclosure (or exact value) of sum_{i>=n} s_i where a certified tail
  /// form exists for the kind.
  virtual std::optional<Scalar> tail_sum(long n, const NumCtx& ctx) const;

  // --- factories ---------------------------------------------------------
  static Ptr geometric(const Rat& lambda);
  static Ptr harmonic_power(const Rat& p);
  static Ptr pow2exp(const Rat& p);
  static Ptr dblexp(const Value& eps);
  static Ptr factexp(const Value& eps);
  static Ptr log_family(const Value& eps);
  static Ptr table(std::vector<Value> values);
  static Ptr scalar_table(std::vector<Scalar> values, std::string label);

  static Ptr mshift(long k, Ptr base);
  static Ptr ashift(long k, Ptr base);
  static Ptr scale(const Value& q, Ptr base);
  static Ptr power(const Rat& q, Ptr base);

  /// The binary geometric sequence 2^-n.
  static Ptr g() { return geometric(Rat(1, 2)); }
  /// The harmonic sequence 1/(n+1).
  static Ptr h() { return harmonic_power(Rat(1)); }

 protected:
  virtual Scalar eval_impl(long n, const NumCtx& ctx) const = 0;

 private:
  mutable std::mutex memo_mu_;
  mutable std::map<long, Scalar> memo_;
};

/// Transform wrapper metadata, exposed for rule tables.
enum class TransformKind { mshift, ashift, scale, power };

class DerivedSeq final : public Seq {
 public:
  DerivedSeq(TransformKind t, long k, Value q, Rat e, Ptr base);

  SeqKind kind() const override { return SeqKind::derived; }
  std::string spec_str() const override;
  Scalar eval_level0(const NumCtx& ctx) const override;
  long horizon() const override;
  std::optional<bool> lp_member(const Rat& p, const NumCtx& ctx) const override;
  std::optional<Scalar> tail_sum(long n, const NumCtx& ctx) const override;

  TransformKind transform() const { return t_; }
  long shift_k() const { return k_; }
  const Value& scale_q() const { return q_; }
  const Rat& power_e() const { return e_; }
  const Ptr& base() const { return base_; }

 protected:
  Scalar eval_impl(long n, const NumCtx& ctx) const override;

 private:
  TransformKind t_;
  long k_;   // mshift/ashift parameter
  Value q_;  // scale factor
  Rat e_;    // power exponent
  Ptr base_;
};

/// View through the transform chain: the base kind plus the accumulated
/// power exponent (index shifts and positive scalings do not change l^p
/// membership of a monotone sequence; a power q maps l^p to l^(p/q)).
struct ResolvedSeq {
  const Seq* base = nullptr;
  Rat power_acc = Rat(1);
  bool has_scale = false;
  bool has_shift = false;
};
ResolvedSeq resolve_chain(const Seq& s);

/// Euler-Maclaurin enclosure of sum_{m>=M} m^-p for p > 1 (three terms plus
/// an enveloping remainder bound).
Scalar zeta_tail_em(long M, const Rat& p, const NumCtx& ctx);

/// Tail enclosure sum_{i>=n} s_i from k exact terms plus a geometric bound
/// with the observed ratio; valid when s_{i+1}/s_i is nonincreasing. Returns
/// nullopt when the observed ratio does not certify (ratio >= 1).
std::optional<Scalar> geometric_ratio_tail(const Seq& s, long n, long k_terms,
                                           const NumCtx& ctx);

/// Truncated enumeration of the closure / shift-completion families.
struct SeqFamily {
  enum class Kind { closure, shift_completion, scaled, explicit_list };
  Kind kind = Kind::closure;
  Seq::Ptr base;
  long K = 1;                   // enumeration bound
  std::vector<Value> scales;    // for Kind::scaled
  std::vector<Seq::Ptr> members;  // for Kind::explicit_list

  static SeqFamily closure(Seq::Ptr s, long K);
  static SeqFamily shift_completion(Seq::Ptr s, long K);
  std::vector<Seq::Ptr> enumerate() const;
  std::string spec_str() const;
};

}  // namespace microdom
