#pragma once

// Exact integer and rational primitives shared by the whole library:
// reduced fractions, periodically extended residue sets and their gap
// operator, integer nth roots, and Farey enumeration.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace radgap {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

/// Refusal of a request that would blow past a configured resource guard.
/// Distinct from std::domain_error so callers can map it to its own exit code.
struct guard_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline unsigned bit_length(u64 v) { return unsigned(std::bit_width(v)); }

inline unsigned bit_length(u128 v) {
    const u64 hi = u64(v >> 64);
    return hi ? 64 + bit_length(hi) : bit_length(u64(v));
}

template <class T>
constexpr T ipow(T base, unsigned exp) {
    T r = T(1);
    while (exp--) r *= base;
    return r;
}

/// base^exp if it fits in 128 bits, otherwise no value.
inline bool checked_pow_u128(u128 base, unsigned exp, u128& out) {
    u128 r = 1;
    while (exp--) {
        if (base != 0 && r > ~u128(0) / base) return false;
        r *= base;
    }
    out = r;
    return true;
}

inline u64 mulmod_u64(u64 a, u64 b, u64 m) { return u64((u128(a) * b) % m); }

inline u64 powmod_u64(u64 base, unsigned exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod_u64(r, base, m);
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    return r;
}

namespace detail {

// Newton iteration from an integer power-of-two seed above the root.
// All arithmetic stays integral; the intermediate x^(alpha-1) cannot
// overflow because the seed is within one bit of the true root.
template <class T>
T integer_root_impl(T n, unsigned alpha, unsigned bits) {
    T x = T(1);
    x <<= (bits + alpha - 1) / alpha;
    while (true) {
        T xa1 = ipow(x, alpha - 1);
        T next = ((alpha - 1) * x + n / xa1) / alpha;
        if (next >= x) break;
        x = next;
    }
    while (ipow(x, alpha) > n) --x;
    while (ipow(x + 1, alpha) <= n) ++x;
    return x;
}

} // namespace detail

/// Largest k with k^alpha <= n, computed purely in integer arithmetic.
inline u64 integer_root(u64 n, unsigned alpha) {
    if (alpha < 2) throw std::domain_error("integer_root: alpha must be >= 2");
    if (n < 2) return n;
    return detail::integer_root_impl<u64>(n, alpha, bit_length(n));
}

inline u128 integer_root_u128(u128 n, unsigned alpha) {
    if (alpha < 2) throw std::domain_error("integer_root: alpha must be >= 2");
    if (n < 2) return u64(n);
    return detail::integer_root_impl<u128>(n, alpha, bit_length(n));
}

/// Reduced non-negative fraction. den >= 1 always; gcd(num, den) == 1.
struct Rational {
    u64 num = 0;
    u64 den = 1;

    Rational() = default;
    Rational(u64 p, u64 q) {
        if (q == 0) throw std::domain_error("Rational: zero denominator");
        const u64 g = std::gcd(p, q);
        num = p / g;
        den = q / g;
    }

    double value() const { return double(num) / double(den); }

    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const { return u128(num) * o.den < u128(o.num) * den; }
    bool operator<=(const Rational& o) const { return u128(num) * o.den <= u128(o.num) * den; }

    bool is_integer() const { return den == 1; }

    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    /// Parses "p/q" (or a bare integer "p"). Throws std::domain_error on malformed input.
    static Rational parse(const std::string& text);
};

inline Rational reduce_fraction(i64 p, u64 q) {
    if (q == 0) throw std::domain_error("reduce_fraction: q must be positive");
    if (p < 0) throw std::domain_error("reduce_fraction: negative numerator");
    return Rational(u64(p), q);
}

inline Rational Rational::parse(const std::string& text) {
    const auto slash = text.find('/');
    try {
        size_t used = 0;
        if (slash == std::string::npos) {
            const u64 p = std::stoull(text, &used);
            if (used != text.size()) throw std::domain_error("");
            return Rational(p, 1);
        }
        const u64 p = std::stoull(text.substr(0, slash), &used);
        if (used != slash) throw std::domain_error("");
        const std::string den_part = text.substr(slash + 1);
        const u64 q = std::stoull(den_part, &used);
        if (used != den_part.size()) throw std::domain_error("");
        return Rational(p, q);
    } catch (const std::domain_error&) {
        throw std::domain_error("not a rational: '" + text + "' (expected p/q)");
    } catch (const std::exception&) {
        throw std::domain_error("not a rational: '" + text + "' (expected p/q)");
    }
}

/// The arithmetic progression {offset + modulus*n | n in Z}, offset normalized to [0, modulus).
struct PeriodicClass {
    u64 offset = 0;
    u64 modulus = 1;

    bool operator==(const PeriodicClass& o) const {
        return offset == o.offset && modulus == o.modulus;
    }
};

/// {a + b n mod c} collapses to the single class {a mod gcd(b, c)}.
inline PeriodicClass absorb_period(i64 offset, i64 stride, u64 modulus) {
    if (modulus == 0) throw std::domain_error("absorb_period: modulus must be positive");
    const u64 s = stride < 0 ? u64(-stride) : u64(stride);
    const u64 g = std::gcd(s, modulus);
    i64 r = offset % i64(g);
    if (r < 0) r += i64(g);
    return PeriodicClass{u64(r), g};
}

/// Finite set of residues in [0, modulus), kept sorted and deduplicated.
struct ResidueSet {
    u64 modulus = 1;
    std::vector<u64> values;

    ResidueSet(u64 mod, std::vector<u64> vals) : modulus(mod), values(std::move(vals)) {
        if (modulus == 0) throw std::domain_error("ResidueSet: modulus must be positive");
        for (auto& v : values) v %= modulus;
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
    }
};

/// Width of the gap around 0 in the periodic extension of the set.
/// With zero_is_upper_boundary (the default), a residue equal to 0 is read
/// as 0+eps and bounds the gap from above; the width then collapses to
/// modulus - (max - min).
inline u64 residue_gap_around_zero(const ResidueSet& set, bool zero_is_upper_boundary = true) {
    if (set.values.empty())
        throw std::domain_error("residue_gap_around_zero: empty residue set");
    const u64 lo = set.values.front();
    const u64 hi = set.values.back();
    if (zero_is_upper_boundary || lo != 0)
        return set.modulus - (hi - lo);
    // 0 bounds from below; the gap runs to the next strictly positive residue
    // (or to the periodic copy of 0 at the modulus).
    return set.values.size() > 1 ? set.values[1] : set.modulus;
}

/// All reduced fractions in [0, 1] with denominator <= max_q, ascending.
inline std::vector<Rational> farey_sequence(u64 max_q) {
    if (max_q == 0) throw std::domain_error("farey_sequence: max_q must be >= 1");
    std::vector<Rational> out;
    out.emplace_back(0, 1);
    u64 a = 0, b = 1, c = 1, d = max_q;
    while (c <= max_q) {
        out.emplace_back(c, d);
        const u64 k = (max_q + b) / d;
        const u64 c2 = k * c - a, d2 = k * d - b;
        a = c;
        b = d;
        c = c2;
        d = d2;
        if (a == 1 && b == 1) break;
    }
    return out;
}

} // namespace radgap
