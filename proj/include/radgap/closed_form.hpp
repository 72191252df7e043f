#pragma once

// Exact evaluators for the limiting gap widths around rational points in
// the fractional parts of radical sequences, plus the brute-force residue
// oracle that validates every algebraic reduction behind them.
//
// All results are exact rationals. The base square-root case at reduced
// p/q is gcd(2,q)/q; restricting radicands to the progression a*n+b widens
// it by the gap of a quadratic polynomial over Z_a; order-alpha radicals
// give d/q^(alpha-1) with a prime-local gcd-type factor d (see gap_higher).

#include <cassert>
#include <string>

#include "radgap/core.hpp"

namespace radgap {

enum class FormulaPath {
    sqrt_gcd,          // gcd(2,q)/q with the integer class mapped to 2
    dilated_residue,   // (d/q) * residue-gap factor over Z_a
    dilated_case2,     // explicit a=2 case split on q mod 4
    at_zero_residue,   // 1 + least positive residue of -k^2 mod a
    higher_gcd,        // gcd(alpha, q^(alpha-1)) / q^(alpha-1)
    oracle_unreduced,  // brute-force enumeration of the unreduced residue set
    integer_half_gaps, // right + left half-gap around the integer class
};

inline const char* to_string(FormulaPath p) {
    switch (p) {
        case FormulaPath::sqrt_gcd: return "sqrt-gcd";
        case FormulaPath::dilated_residue: return "dilated-residue";
        case FormulaPath::dilated_case2: return "dilated-case2";
        case FormulaPath::at_zero_residue: return "at-zero-residue";
        case FormulaPath::higher_gcd: return "higher-gcd";
        case FormulaPath::oracle_unreduced: return "oracle-unreduced";
        case FormulaPath::integer_half_gaps: return "integer-half-gaps";
    }
    return "?";
}

/// Exact non-negative rational, deliberately left unreduced so results keep
/// the d/q, d/q^(alpha-1) shape they were produced in.
struct ExactRatio {
    u64 num = 0;
    u64 den = 1;

    bool same_value(const ExactRatio& o) const {
        return u128(num) * o.den == u128(o.num) * den;
    }
    bool operator>=(const ExactRatio& o) const {
        return u128(num) * o.den >= u128(o.num) * den;
    }
    Rational reduced() const { return Rational(num, den); }
    double value() const { return double(num) / double(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
};

struct ClosedFormValue {
    ExactRatio value;
    u64 d = 1;          // gcd factor of the linear reduction
    u64 gap_factor = 1; // residue-gap multiplier over Z_a (1 when a = 1)
    FormulaPath path = FormulaPath::sqrt_gcd;
};

struct ClosedFormQuery {
    Rational x;
    unsigned alpha = 2;
    u64 a = 1; // dilution: radicands restricted to a*n + b
    u64 b = 0; // offset, b < a

    void validate() const {
        if (alpha < 2) throw std::domain_error("ClosedFormQuery: alpha must be >= 2");
        if (a < 1) throw std::domain_error("ClosedFormQuery: dilution a must be positive");
        if (b >= a) throw std::domain_error("ClosedFormQuery: offset b must satisfy b < a");
        if (Rational(1, 1) < x) throw std::domain_error("ClosedFormQuery: x must lie in [0,1]");
    }
};

namespace detail {

inline void assert_sane(const ClosedFormValue& v, u64 a, unsigned alpha) {
    // loose sanity bound: every rational gap is positive and <= 2*a*alpha
    assert(v.value.num > 0);
    assert(u128(v.value.num) <= u128(2) * a * alpha * v.value.den);
    (void)v;
    (void)a;
    (void)alpha;
}

// the Z_a evaluators enumerate a residues; refuse absurd dilutions
inline void check_dilution_guard(u64 a) {
    if (a > (u64(1) << 26))
        throw guard_error("dilution a exceeds the 2^26 enumeration guard");
}

} // namespace detail

/// Limiting scaled gap around an integer for radicands in the class b = 0 mod a:
/// 1 + min over k != 0 of the least positive residue of -k^2 mod a
/// (a residue of 0 counts as a full period a). Reproduces 2 for a = 1.
inline ClosedFormValue gap_dilated_at_zero(u64 a) {
    if (a < 1) throw std::domain_error("gap_dilated_at_zero: a must be positive");
    detail::check_dilution_guard(a);
    u64 best = 1; // a = 1: the class next to a perfect square is always occupied
    if (a > 1) {
        best = a;
        for (u64 k = 1; k < a; ++k) {
            u64 r = (a - mulmod_u64(k, k, a)) % a;
            if (r == 0) r = a;
            best = std::min(best, r);
        }
    }
    ClosedFormValue out;
    out.value = {1 + best, 1};
    out.d = 1;
    out.gap_factor = best;
    out.path = FormulaPath::at_zero_residue;
    detail::assert_sane(out, a, 2);
    return out;
}

/// G(p/q) for the plain square-root sequence: 2 at the integer class,
/// 2/q for even q, 1/q for odd q > 1.
inline ClosedFormValue gap_sqrt(Rational x) {
    if (Rational(1, 1) < x) throw std::domain_error("gap_sqrt: x must lie in [0,1]");
    ClosedFormValue out;
    out.path = FormulaPath::sqrt_gcd;
    out.d = std::gcd<u64>(2, x.den);
    if (x.is_integer()) {
        out.value = {2, 1};
    } else {
        out.value = {out.d, x.den};
    }
    detail::assert_sane(out, 1, 2);
    return out;
}

/// Generalized square-root gap for radicands restricted to a*n + b.
/// Evaluates (d/q) * gap{ floor((p^2-b q^2)/(q d)) + (2/d)Cp + (q/d)C^2 mod a },
/// the zero residue counting as an upper boundary. Queries at the integer
/// class delegate to gap_dilated_at_zero.
inline ClosedFormValue gap_dilated(const ClosedFormQuery& query) {
    query.validate();
    if (query.alpha != 2)
        throw std::domain_error("gap_dilated: defined for alpha = 2 (see gap_higher / oracle)");
    const u64 p = query.x.num, q = query.x.den, a = query.a, b = query.b;
    if (q == 1) return gap_dilated_at_zero(a);
    detail::check_dilution_guard(a);
    if (q > (u64(1) << 31)) throw guard_error("gap_dilated: q exceeds the 2^31 guard");

    const u64 d = std::gcd<u64>(2, q);
    // lift p^2 - b q^2 into [0, a q d) so the floor matches the non-negative split;
    // the lift shifts the floor by multiples of a, invisible mod a
    const i128 aqd = i128(a) * q * d;
    i128 v = i128(p) * p - i128(b) * q * q;
    v %= aqd;
    if (v < 0) v += aqd;
    const u64 floor_term = u64(u128(v) / (q * d));

    std::vector<u64> residues;
    residues.reserve(size_t(a));
    const u64 lin = mulmod_u64((2 / d) % a, p % a, a);
    const u64 quad = (q / d) % a;
    for (u64 c = 0; c < a; ++c) {
        u64 w = floor_term % a;
        w = (w + mulmod_u64(lin, c, a)) % a;
        w = (w + mulmod_u64(quad, mulmod_u64(c, c, a), a)) % a;
        residues.push_back(w);
    }
    const u64 factor = residue_gap_around_zero(ResidueSet(a, std::move(residues)), true);

    ClosedFormValue out;
    out.value = {d * factor, q};
    out.d = d;
    out.gap_factor = factor;
    out.path = FormulaPath::dilated_residue;
    detail::assert_sane(out, a, 2);
    return out;
}

/// Fast explicit form of gap_dilated for a = 2, split on q mod 4.
inline ClosedFormValue gap_dilated_case2(Rational x) {
    if (Rational(1, 1) < x) throw std::domain_error("gap_dilated_case2: x must lie in [0,1]");
    const u64 q = x.den;
    ClosedFormValue out;
    out.path = FormulaPath::dilated_case2;
    out.d = std::gcd<u64>(2, q);
    if (q % 2 == 1) {
        out.value = {1, q};
        out.gap_factor = 1;
    } else if (q % 4 == 2) {
        out.value = {4, q};
        out.gap_factor = 2;
    } else {
        out.value = {2, q};
        out.gap_factor = 1;
    }
    detail::assert_sane(out, 2, 2);
    return out;
}

/// Order-alpha radical gap at reduced p/q, i.e. d/q^(alpha-1).
///
/// The residue set {(kq+p)^alpha mod q^alpha} is the image of the alpha-th
/// power map on the class p mod q, which is a single full residue class
/// modulo M = prod_{l | q} l^min(alpha*e, e + v_l(alpha) + chi), so the gap
/// is M/q^alpha and d = M/q. At odd primes (and at l=2 with e >= 2) the
/// linear binomial term sets the level and d reduces to the familiar
/// gcd(alpha, q^(alpha-1)). At l=2 with e=1 and even alpha the image of odd
/// 2^a-th powers is 1 + 2^(a+2)Z, one level coarser than the linear
/// estimate (chi = 1), which doubles d for q = 2 mod 4 whenever the clip at
/// q^alpha leaves room; the unreduced oracle and large-N measurements both
/// confirm the extra factor (e.g. alpha=4, x=1/2 converges to 1, not 1/2).
inline ClosedFormValue gap_higher(Rational x, unsigned alpha) {
    if (alpha < 2) throw std::domain_error("gap_higher: alpha must be >= 2");
    if (Rational(1, 1) < x) throw std::domain_error("gap_higher: x must lie in [0,1]");
    const u64 q = x.den;
    if (q < 2)
        throw std::domain_error("gap_higher: defined on the open interval (use the integer-class path)");
    u128 den128;
    if (!checked_pow_u128(q, alpha - 1, den128) || den128 > ~u64(0))
        throw guard_error("gap_higher: q^(alpha-1) exceeds 64 bits");
    const u64 den = u64(den128);

    u64 d = 1;
    const auto apply_prime = [&](u64 l, unsigned e) {
        unsigned a = 0;
        for (u64 t = alpha; t % l == 0; t /= l) ++a;
        const unsigned chi = (l == 2 && e == 1 && a >= 1) ? 1u : 0u;
        const u64 m = std::min<u64>(u64(alpha) * e, u64(e) + a + chi);
        d *= ipow(l, unsigned(m - e));
    };
    u64 rest = q;
    for (u64 l = 2; l * l <= rest; l += (l == 2 ? 1 : 2)) {
        if (rest % l) continue;
        unsigned e = 0;
        while (rest % l == 0) {
            rest /= l;
            ++e;
        }
        apply_prime(l, e);
    }
    if (rest > 1) apply_prime(rest, 1);

    ClosedFormValue out;
    out.value = {d, den};
    out.d = d;
    out.gap_factor = 1;
    out.path = FormulaPath::higher_gcd;
    detail::assert_sane(out, 1, alpha);
    return out;
}

/// Limiting gap around the integer class for order-alpha radicands (a = 1):
/// both half-gaps are bounded by the classes adjacent to perfect powers,
/// giving 1 + 1. For alpha = 2 the dilution-aware form is used instead.
inline ClosedFormValue gap_at_integer(unsigned alpha, u64 a) {
    if (alpha < 2) throw std::domain_error("gap_at_integer: alpha must be >= 2");
    if (alpha == 2) return gap_dilated_at_zero(a);
    if (a != 1)
        throw std::domain_error("gap_at_integer: no closed form for alpha > 2 with dilution");
    ClosedFormValue out;
    out.value = {2, 1};
    out.d = 1;
    out.gap_factor = 1;
    out.path = FormulaPath::integer_half_gaps;
    return out;
}

/// Enumeration caps for the brute-force oracle.
struct OracleLimits {
    u64 max_q = 64;
    u64 max_a = 64;
    unsigned max_alpha = 6;
    u64 max_enum = u64(1) << 26;
};

/// Ground-truth oracle: enumerates the unreduced residue set
///   { (kq+p)^alpha - b q^alpha  mod  a q^alpha | k in Z_{a q^(alpha-1)} },
/// applies the residue gap around zero and divides by q^alpha. No algebraic
/// reduction at all, hence the tight enumeration guards.
inline ExactRatio oracle_unreduced_gap(Rational x, unsigned alpha, u64 a, u64 b,
                                       const OracleLimits& limits = {}) {
    if (alpha < 2) throw std::domain_error("oracle_unreduced_gap: alpha must be >= 2");
    if (a < 1 || b >= a) throw std::domain_error("oracle_unreduced_gap: need a >= 1, b < a");
    const u64 p = x.num, q = x.den;
    if (q < 2)
        throw std::domain_error("oracle_unreduced_gap: x must lie strictly inside (0,1)");
    if (q > limits.max_q || a > limits.max_a || alpha > limits.max_alpha)
        throw guard_error("oracle_unreduced_gap: query exceeds enumeration guards");

    u128 qa128;
    if (!checked_pow_u128(q, alpha, qa128) || qa128 > (~u64(0)) / a)
        throw guard_error("oracle_unreduced_gap: modulus a*q^alpha exceeds 64 bits");
    const u64 q_alpha = u64(qa128);
    const u64 modulus = a * q_alpha;
    const u64 period = a * (q_alpha / q); // a * q^(alpha-1)
    if (period > limits.max_enum)
        throw guard_error("oracle_unreduced_gap: enumeration budget exceeded");

    const u64 shift = mulmod_u64(b % modulus, q_alpha % modulus, modulus);
    std::vector<u64> residues;
    residues.reserve(size_t(period));
    for (u64 k = 0; k < period; ++k) {
        const u64 base = (mulmod_u64(k, q, modulus) + p) % modulus;
        const u64 v = powmod_u64(base, alpha, modulus);
        residues.push_back((v + modulus - shift) % modulus);
    }
    const u64 gap = residue_gap_around_zero(ResidueSet(modulus, std::move(residues)), true);
    return ExactRatio{gap, q_alpha};
}

} // namespace radgap
