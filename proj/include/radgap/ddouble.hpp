#pragma once

// Double-word ("double-double") arithmetic: an unevaluated sum of two
// doubles giving ~106 mantissa bits (~32 significant decimal digits).
// Error-free transforms follow the usual two_sum / fma-based two_prod
// construction. This is the working precision for gap widths, where the
// interesting signal sits many orders of magnitude below the roots
// themselves.

#include <cmath>
#include <cstdint>

#include "radgap/core.hpp"

namespace radgap {

struct DDouble {
    double hi = 0.0;
    double lo = 0.0;

    DDouble() = default;
    constexpr DDouble(double h) : hi(h), lo(0.0) {}
    constexpr DDouble(double h, double l) : hi(h), lo(l) {}

    double value() const { return hi + lo; }
};

namespace dd {

inline DDouble two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    const double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

inline DDouble quick_two_sum(double a, double b) {
    // requires |a| >= |b|
    const double s = a + b;
    return {s, b - (s - a)};
}

inline DDouble two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline DDouble add(DDouble a, DDouble b) {
    DDouble s = two_sum(a.hi, b.hi);
    DDouble t = two_sum(a.lo, b.lo);
    double lo = s.lo + t.hi;
    DDouble r = quick_two_sum(s.hi, lo);
    lo = r.lo + t.lo;
    return quick_two_sum(r.hi, lo);
}

inline DDouble neg(DDouble a) { return {-a.hi, -a.lo}; }

inline DDouble sub(DDouble a, DDouble b) { return add(a, neg(b)); }

inline DDouble mul(DDouble a, DDouble b) {
    DDouble p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline DDouble div(DDouble a, DDouble b) {
    const double q1 = a.hi / b.hi;
    DDouble r = sub(a, mul(b, DDouble(q1)));
    const double q2 = r.hi / b.hi;
    r = sub(r, mul(b, DDouble(q2)));
    const double q3 = r.hi / b.hi;
    DDouble q = quick_two_sum(q1, q2);
    return add(q, DDouble(q3));
}

// exact: both halves are <= 32-bit integers, exactly representable
inline DDouble from_u64(u64 v) {
    const double h = double(v >> 32) * 0x1p32;
    const double l = double(v & 0xffffffffull);
    return two_sum(h, l);
}

inline DDouble pow_int(DDouble base, unsigned exp) {
    DDouble r(1.0);
    while (exp--) r = mul(r, base);
    return r;
}

inline int cmp(DDouble a, DDouble b) {
    if (a.hi < b.hi) return -1;
    if (a.hi > b.hi) return 1;
    if (a.lo < b.lo) return -1;
    if (a.lo > b.lo) return 1;
    return 0;
}

inline DDouble dd_abs(DDouble a) { return a.hi < 0 || (a.hi == 0 && a.lo < 0) ? neg(a) : a; }

inline DDouble sqrt(DDouble a) {
    if (a.hi == 0.0) return DDouble(0.0);
    const double s = std::sqrt(a.hi);
    // one Newton step in double-double from the double seed
    DDouble t = div(a, DDouble(s));
    t = add(t, DDouble(s));
    return mul(t, DDouble(0.5));
}

/// n^(1/alpha) to full double-double accuracy (n a 64-bit integer).
inline DDouble nth_root_u64(u64 n, unsigned alpha) {
    if (alpha < 2) throw std::domain_error("nth_root_u64: alpha must be >= 2");
    if (n == 0) return DDouble(0.0);
    const DDouble nn = from_u64(n);
    if (alpha == 2) return sqrt(nn);
    DDouble r(std::pow(double(n), 1.0 / double(alpha)));
    // two Newton steps: double seed -> ~1e-32 relative
    for (int i = 0; i < 2; ++i) {
        DDouble ra1 = pow_int(r, alpha - 1);
        DDouble f = sub(mul(ra1, r), nn);
        r = sub(r, div(f, mul(DDouble(double(alpha)), ra1)));
    }
    return r;
}

/// Cancellation-safe n_hi^(1/alpha) - n_lo^(1/alpha), evaluated as the
/// factored difference (n_hi - n_lo) / sum_i n_hi^(i/alpha) n_lo^((alpha-1-i)/alpha)
/// rather than as a subtraction of two nearby roots.
inline DDouble root_difference(u64 n_lo, u64 n_hi, unsigned alpha) {
    const DDouble rl = nth_root_u64(n_lo, alpha);
    const DDouble rh = nth_root_u64(n_hi, alpha);
    DDouble denom(0.0);
    for (unsigned i = 0; i < alpha; ++i)
        denom = add(denom, mul(pow_int(rh, i), pow_int(rl, alpha - 1 - i)));
    const DDouble num = n_hi >= n_lo ? from_u64(n_hi - n_lo) : neg(from_u64(n_lo - n_hi));
    return div(num, denom);
}

/// Fractional part of n^(1/alpha) given its integer part k, via the factored
/// form (n - k^alpha) / sum_i root^i k^(alpha-1-i); exact to ~1e-31 relative.
inline DDouble frac_of_root(u64 n, u64 k, unsigned alpha) {
    const DDouble root = nth_root_u64(n, alpha);
    const DDouble kk = from_u64(k);
    DDouble denom(0.0);
    for (unsigned i = 0; i < alpha; ++i)
        denom = add(denom, mul(pow_int(root, i), pow_int(kk, alpha - 1 - i)));
    return div(from_u64(n - ipow(k, alpha)), denom);
}

/// (k+1) - n^(1/alpha) for n in band k, again via the factored difference.
inline DDouble dist_below_next_int(u64 n, u64 k, unsigned alpha) {
    const DDouble root = nth_root_u64(n, alpha);
    const DDouble up = from_u64(k + 1);
    DDouble denom(0.0);
    for (unsigned i = 0; i < alpha; ++i)
        denom = add(denom, mul(pow_int(root, i), pow_int(up, alpha - 1 - i)));
    return div(from_u64(ipow(k + 1, alpha) - n), denom);
}

} // namespace dd

} // namespace radgap
