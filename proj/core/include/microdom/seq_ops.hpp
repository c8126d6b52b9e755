#pragma once

#include <utility>
#include <vector>

#include "microdom/cover.hpp"
#include "microdom/seq.hpp"
#include "microdom/verdict.hpp"

namespace microdom {

/// Pointwise order on sequences: holds (symbolically for recognized kind
/// pairs, otherwise at the checked depth), or fails with a witness index.
Verdict seq_leq(const Seq& s, const Seq& t, long N, const NumCtx& ctx = {});

struct LpOptions {
  Value divergence_bound = Value::integer(1L << 20);
  std::optional<Value> table_tail_ratio;  // declared geometric tail model
};

/// l^p membership with a partial-sum ledger. Structured kinds classify
/// symbolically; tables certify divergence past the bound or convergence
/// under a declared tail model, and report unknown otherwise.
Verdict lp_test(const Seq& s, const Rat& p, long N, const NumCtx& ctx = {},
                const LpOptions& opts = {});

struct CorridorFlags {
  Verdict in_plus;   // member of l^beta for every beta > alpha
  Verdict in_minus;  // member of some l^beta with beta < alpha
};
CorridorFlags lp_corridor_classify(const Seq& s, const Rat& alpha,
                                   const NumCtx& ctx = {});

enum class DoublingMode { two_doubling, doubling };

/// two_doubling: s_{2n} <= s_n/2; doubling: search k <= kmax with
/// s^(xk) <= s/2. Symbolic closure where the kind permits.
Verdict seq_doubling_test(const Seq& s, DoublingMode mode, long kmax, long N,
                          const NumCtx& ctx = {});

/// n = 2^k(2i+1): bijection between the positive integers and omega x omega.
unsigned long partition_encode(unsigned long k, unsigned long i);
std::pair<unsigned long, unsigned long> partition_decode(unsigned long n);

enum class GrowthCond { cond_1sn, cond_3sn, cond_simple3 };

/// cond_1sn: s_n >= 4^n s_{n+1} for all n <= N.
/// cond_3sn: exists m <= param_max, n0 <= N with s_n > 2^n s_{mn} on [n0, N].
/// cond_simple3: exists j <= param_max, n0 with s_{n+j} <= j s_{2n} on [n0, N].
Verdict growth_condition(const Seq& s, GrowthCond cond, long param_max, long N,
                         const NumCtx& ctx = {});

enum class AshMode { summable, divergent };

struct AshOptions {
  std::optional<Value> table_tail_ratio;  // tail model for table inputs
  Value divergence_bound = Value::integer(1L << 10);
};

struct AshResult {
  std::vector<Scalar> cprime;  // c'_1 .. c'_N
  Verdict cert;
  Seq::Ptr seq;  // scalar_table view of cprime
};

/// Lemma-ash transforms. Summable: r_n = tail sums, d_n = c_n/sqrt(r_n),
/// minimizing index, c'_n = d_nhat + 2^-n. Divergent: Abel-Dini auxiliary
/// d_n = c_n / (c_1+...+c_n), c''_n = max_{i>=n} d_i over the truncation,
/// c'_n = (1+2^-n) c''_n.
AshResult ash_transform(const Seq& c, AshMode mode, long N, const NumCtx& ctx = {},
                        const AshOptions& opts = {});

}  // namespace microdom
