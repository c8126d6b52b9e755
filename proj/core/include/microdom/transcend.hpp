#pragma once

#include "microdom/value.hpp"

namespace microdom {

/// Enclosure of log2(x) of width <= 2^-ctx.precision_bits (exact point when x
/// is a signed power of two). Requires x > 0.
IntervalVal eval_log2(const Value& x, const NumCtx& ctx = {});
IntervalVal eval_log2(const IntervalVal& x, const NumCtx& ctx = {});

/// Directed sqrt: a dyadic with ~bits significant bits on the requested side
/// of the true square root. Requires x >= 0.
Value sqrt_dir(const Value& x, long bits, Round dir);
IntervalVal sqrt_enclosure(const Value& x, const NumCtx& ctx = {});
IntervalVal sqrt_enclosure(const IntervalVal& x, const NumCtx& ctx = {});

/// Directed 2^y; exact when y is an integer within budget.
Value exp2_dir(const Value& y, long bits, Round dir);
IntervalVal exp2_enclosure(const IntervalVal& y, const NumCtx& ctx = {});

/// x^(a/b) for x > 0. Exact Value on the closed fast paths (power-of-two base
/// with divisible exponent, perfect-root mantissa, perfect-root rationals);
/// enclosure via exp2(alpha * log2 x) otherwise.
Scalar pow_rat(const Value& x, const Rat& alpha, const NumCtx& ctx = {});
IntervalVal pow_rat_box(const IntervalVal& x, const Rat& alpha, const NumCtx& ctx = {});
Scalar scalar_pow_rat(const Scalar& x, const Rat& alpha, const NumCtx& ctx = {});

/// Enclosure of ln 2 (natural log) with exact rational endpoints.
IntervalVal ln2_enclosure(long bits);

}  // namespace microdom
