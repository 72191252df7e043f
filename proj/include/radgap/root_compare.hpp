#pragma once

// Exact ordering of fractional parts of integer roots.
//
// The engine must pick, among per-band candidates, the radicand whose
// fractional part n^(1/alpha) - k sits closest to the query point. At the
// interesting scales those fractional parts collide in double precision, so
// ordering is decided on integers only: compare floor(n^(1/alpha) * 2^s)
// at increasing fixed-point shifts s until the interval bounds separate.
// The first rung works in 128-bit arithmetic; escalation (rare, only for
// near-ties) switches to arbitrary precision.
//
// Ties are impossible for the inputs the engine produces: a difference of
// two irrational roots is never an integer unless both radicands are
// perfect alpha-th powers, and those are excluded from every sequence.

#include <boost/multiprecision/cpp_int.hpp>

#include "radgap/core.hpp"

namespace radgap {

using bigint = boost::multiprecision::cpp_int;

namespace detail {

inline bigint integer_root_big(const bigint& n, unsigned alpha) {
    if (n < 2) return n;
    const unsigned bits = unsigned(boost::multiprecision::msb(n)) + 1;
    bigint x = bigint(1) << ((bits + alpha - 1) / alpha);
    while (true) {
        const bigint xa1 = ipow(x, alpha - 1);
        const bigint next = bigint(((alpha - 1) * x + n / xa1) / alpha);
        if (next >= x) break;
        x = next;
    }
    while (ipow(x, alpha) > n) --x;
    for (bigint up = bigint(x + 1); ipow(up, alpha) <= n; ++up) x = up;
    return x;
}

} // namespace detail

/// A fractional part of an integer root: value = radicand^(1/alpha) - band.
struct FracRoot {
    u64 radicand = 0;
    u64 band = 0;
};

/// Sign of (a.radicand^(1/alpha) - a.band) - (b.radicand^(1/alpha) - b.band),
/// decided exactly.
inline int compare_frac_roots(const FracRoot& a, const FracRoot& b, unsigned alpha) {
    if (alpha < 2) throw std::domain_error("compare_frac_roots: alpha must be >= 2");
    if (a.radicand == b.radicand) {
        // equal roots: the difference reduces to b.band - a.band
        const i64 dk = i64(b.band) - i64(a.band);
        return dk > 0 ? 1 : dk < 0 ? -1 : 0;
    }
    // perfect powers have rational (integer) roots and admit exact handling
    const u64 ra = integer_root(a.radicand, alpha);
    const u64 rb = integer_root(b.radicand, alpha);
    const bool pa = ipow(ra, alpha) == a.radicand;
    const bool pb = ipow(rb, alpha) == b.radicand;
    if (pa && pb) {
        const i64 va = i64(ra) - i64(a.band), vb = i64(rb) - i64(b.band);
        return va > vb ? 1 : va < vb ? -1 : 0;
    }

    // fixed-point rung in 128 bits
    const unsigned max_bits = std::max(bit_length(a.radicand), bit_length(b.radicand));
    const unsigned s0 = max_bits < 120 ? (126 - max_bits) / alpha : 0;
    if (s0 > 0) {
        const u128 fa = integer_root_u128(u128(a.radicand) << (s0 * alpha), alpha);
        const u128 fb = integer_root_u128(u128(b.radicand) << (s0 * alpha), alpha);
        // x_a*2^s0 lies in [fa - a.band*2^s0, fa - a.band*2^s0 + 1)
        const i128 diff = i128(fa) - i128(fb) -
                          (i128(a.band) - i128(b.band)) * (i128(1) << s0);
        if (diff >= 2) return 1;
        if (diff <= -2) return -1;
    }

    // escalate in arbitrary precision until the enclosing intervals separate
    for (unsigned s = 128; s <= 4096; s *= 2) {
        const bigint fa = detail::integer_root_big(bigint(a.radicand) << (s * alpha), alpha);
        const bigint fb = detail::integer_root_big(bigint(b.radicand) << (s * alpha), alpha);
        const bigint diff = fa - fb - ((bigint(a.band) - bigint(b.band)) << s);
        if (diff >= 2) return 1;
        if (diff <= -2) return -1;
    }
    throw std::logic_error("compare_frac_roots: unresolvable near-tie (perfect powers?)");
}

} // namespace radgap
