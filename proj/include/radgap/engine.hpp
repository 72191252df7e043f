#pragma once

// Finite-N empirical machinery. Builds the fractional-part sets of radical
// sequences, measures the exact gap bracketing a rational point, and scales
// it by alpha * N^((alpha-1)/alpha) so the values converge to the closed
// forms.
//
// Gap brackets are found per integer band k: the band threshold is the
// exact integer pair ((kq+p)^alpha, q^alpha), candidates are snapped to the
// admissible residue class, and every ordering decision is made on integers
// (see root_compare.hpp). Only the final width is evaluated in extended
// precision. Complexity O(N^(1/alpha)) per query.

#include <cmath>
#include <future>
#include <optional>
#include <thread>
#include <vector>

#include "radgap/closed_form.hpp"
#include "radgap/core.hpp"
#include "radgap/ddouble.hpp"
#include "radgap/root_compare.hpp"

namespace radgap {

/// One side of a gap has no admissible radicand at this N.
struct unbounded_gap_error : std::domain_error {
    enum class Side { below, above };
    Side side;
    explicit unbounded_gap_error(Side s)
        : std::domain_error(s == Side::below ? "gap unbounded below (N too small)"
                                             : "gap unbounded above (N too small)"),
          side(s) {}
};

/// The radical sequence family {(a*t + b)^(1/alpha) | a*t + b <= N}.
/// Perfect alpha-th powers never enter the fractional-part set.
struct SequenceSpec {
    unsigned alpha = 2;
    u64 a = 1;
    u64 b = 0;
    u64 n_limit = 0;

    void validate() const {
        if (alpha < 2) throw std::domain_error("SequenceSpec: alpha must be >= 2");
        if (a < 1) throw std::domain_error("SequenceSpec: dilution a must be positive");
        if (b >= a) throw std::domain_error("SequenceSpec: offset b must satisfy b < a");
        if (n_limit < 1) throw std::domain_error("SequenceSpec: N must be positive");
        if (n_limit > (u64(1) << 62)) throw guard_error("SequenceSpec: N exceeds 2^62 guard");
    }

    u64 min_radicand() const { return b >= 1 ? b : a; }

    bool admissible(u64 n) const {
        if (n < min_radicand() || n > n_limit || n % a != b % a) return false;
        return ipow(integer_root(n, alpha), alpha) != n;
    }
};

/// Exact bracketing of the gap around a point: the nearest admissible
/// radicands on each side and the width between their fractional parts.
struct GapMeasurement {
    Rational center;
    u64 lower_radicand = 0;
    u64 upper_radicand = 0;
    u64 lower_band = 0;
    u64 upper_band = 0;
    DDouble width;
    u64 n_limit = 0;
};

struct ScaledApproximant {
    GapMeasurement measurement;
    DDouble scale;        // alpha * N^((alpha-1)/alpha); 2*sqrt(N) for alpha = 2
    DDouble scaled_width; // width * scale
};

inline unsigned resolve_threads(unsigned threads) {
    if (threads != 0) return threads;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc ? hc : 1;
}

namespace detail {

// Runs fn(chunk_index, lo, hi) over a partition of [begin, end); chunk_index
// is always < resolve_threads(threads). Exceptions propagate.
template <class Fn>
void parallel_chunks(u64 begin, u64 end, unsigned threads, u64 min_chunk, Fn&& fn) {
    if (end <= begin) return;
    const u64 span = end - begin;
    u64 nchunks = std::min<u64>(resolve_threads(threads), (span + min_chunk - 1) / min_chunk);
    if (nchunks <= 1) {
        fn(0, begin, end);
        return;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(size_t(nchunks));
    const u64 step = span / nchunks, rem = span % nchunks;
    u64 lo = begin;
    for (u64 c = 0; c < nchunks; ++c) {
        const u64 hi = lo + step + (c < rem ? 1 : 0);
        futures.push_back(std::async(std::launch::async,
                                     [&fn, c, lo, hi] { fn(c, lo, hi); }));
        lo = hi;
    }
    for (auto& f : futures) f.get();
}

struct BandCandidates {
    std::optional<FracRoot> low;  // largest fractional part below the threshold
    std::optional<FracRoot> high; // smallest fractional part above it
};

// keep the candidate whose fractional part is larger
inline void keep_max(std::optional<FracRoot>& best, const FracRoot& cand, unsigned alpha) {
    if (!best || compare_frac_roots(cand, *best, alpha) > 0) best = cand;
}

inline void keep_min(std::optional<FracRoot>& best, const FracRoot& cand, unsigned alpha) {
    if (!best || compare_frac_roots(cand, *best, alpha) < 0) best = cand;
}

// snap n down to the residue class b mod a
inline bool align_down(u64& n, u64 a, u64 b) {
    const u64 r = (n % a + a - b % a) % a;
    if (n < r) return false;
    n -= r;
    return true;
}

// snap n up to the residue class b mod a (may overflow-free: n small vs 2^62)
inline void align_up(u64& n, u64 a, u64 b) {
    n += (b % a + a - n % a) % a;
}

inline bool is_perfect_power(u64 n, unsigned alpha) {
    return ipow(integer_root(n, alpha), alpha) == n;
}

// Largest admissible n with n*q^alpha < threshold, n in (k^alpha, band_hi].
inline std::optional<FracRoot> lower_candidate(const SequenceSpec& spec, u64 k, u64 band_hi,
                                               u128 threshold, u128 q_alpha) {
    const u64 band_lo = ipow(k, spec.alpha);
    u64 n = u64((threshold - 1) / q_alpha);
    n = std::min(n, band_hi);
    if (n <= band_lo) return std::nullopt;
    if (!align_down(n, spec.a, spec.b)) return std::nullopt;
    while (n > band_lo && n >= spec.min_radicand()) {
        if (!is_perfect_power(n, spec.alpha)) return FracRoot{n, k};
        if (n < spec.a) break;
        n -= spec.a;
    }
    return std::nullopt;
}

// Smallest admissible n with n*q^alpha > threshold, n in (k^alpha, band_hi].
inline std::optional<FracRoot> upper_candidate(const SequenceSpec& spec, u64 k, u64 band_hi,
                                               u128 threshold, u128 q_alpha) {
    u64 n = u64(threshold / q_alpha) + 1;
    n = std::max(n, spec.min_radicand());
    align_up(n, spec.a, spec.b);
    while (n <= band_hi) {
        if (!is_perfect_power(n, spec.alpha)) return FracRoot{n, k};
        n += spec.a;
    }
    return std::nullopt;
}

inline DDouble scale_factor(const SequenceSpec& spec) {
    // alpha * N^((alpha-1)/alpha) = alpha * N / N^(1/alpha)
    const DDouble n = dd::from_u64(spec.n_limit);
    const DDouble root = dd::nth_root_u64(spec.n_limit, spec.alpha);
    return dd::div(dd::mul(DDouble(double(spec.alpha)), n), root);
}

} // namespace detail

/// Exact gap around a rational point strictly inside (0,1).
/// Throws unbounded_gap_error if one side has no admissible radicand.
inline GapMeasurement exact_gap_at(const SequenceSpec& spec, Rational x, unsigned threads = 0) {
    spec.validate();
    if (x.num == 0 || x.is_integer())
        throw std::domain_error("exact_gap_at: x must lie strictly inside (0,1); "
                                "use exact_gap_at_integer for the integer class");
    const u64 p = x.num, q = x.den;
    const u64 bands = integer_root(spec.n_limit, spec.alpha);

    u128 q_alpha, max_threshold;
    if (!checked_pow_u128(q, spec.alpha, q_alpha) ||
        !checked_pow_u128(u128(bands + 1) * q, spec.alpha, max_threshold))
        throw guard_error("exact_gap_at: (kq+p)^alpha exceeds 128 bits; reduce N or q");

    const unsigned nslots = resolve_threads(threads);
    std::vector<detail::BandCandidates> slots(nslots);
    detail::parallel_chunks(1, bands + 1, threads, 64, [&](u64 c, u64 lo, u64 hi) {
        detail::BandCandidates best;
        for (u64 k = lo; k < hi; ++k) {
            u128 threshold;
            checked_pow_u128(u128(k) * q + p, spec.alpha, threshold);
            const u64 band_hi = std::min(ipow(k + 1, spec.alpha) - 1, spec.n_limit);
            if (auto cand = detail::lower_candidate(spec, k, band_hi, threshold, q_alpha))
                detail::keep_max(best.low, *cand, spec.alpha);
            if (auto cand = detail::upper_candidate(spec, k, band_hi, threshold, q_alpha))
                detail::keep_min(best.high, *cand, spec.alpha);
        }
        slots[c] = best;
    });

    detail::BandCandidates best;
    for (const auto& s : slots) {
        if (s.low) detail::keep_max(best.low, *s.low, spec.alpha);
        if (s.high) detail::keep_min(best.high, *s.high, spec.alpha);
    }
    if (!best.low) throw unbounded_gap_error(unbounded_gap_error::Side::below);
    if (!best.high) throw unbounded_gap_error(unbounded_gap_error::Side::above);

    GapMeasurement m;
    m.center = x;
    m.lower_radicand = best.low->radicand;
    m.lower_band = best.low->band;
    m.upper_radicand = best.high->radicand;
    m.upper_band = best.high->band;
    m.n_limit = spec.n_limit;
    const DDouble f_lo = dd::frac_of_root(m.lower_radicand, m.lower_band, spec.alpha);
    const DDouble f_hi = dd::frac_of_root(m.upper_radicand, m.upper_band, spec.alpha);
    m.width = dd::sub(f_hi, f_lo);
    return m;
}

/// Wrap-around gap at the integer congruence class:
/// (1 - max fractional part) + (min fractional part).
/// lower_radicand bounds from below (left of the integer), upper from above.
inline GapMeasurement exact_gap_at_integer(const SequenceSpec& spec, unsigned threads = 0) {
    spec.validate();
    const u64 bands = integer_root(spec.n_limit, spec.alpha);
    const unsigned nslots = resolve_threads(threads);
    std::vector<detail::BandCandidates> slots(nslots);
    detail::parallel_chunks(1, bands + 1, threads, 64, [&](u64 c, u64 lo, u64 hi) {
        detail::BandCandidates best;
        for (u64 k = lo; k < hi; ++k) {
            const u64 band_lo = ipow(k, spec.alpha);
            const u64 band_hi = std::min(ipow(k + 1, spec.alpha) - 1, spec.n_limit);
            if (band_hi <= band_lo) continue;
            // smallest admissible fractional part in the band
            u64 n = std::max(band_lo + 1, spec.min_radicand());
            detail::align_up(n, spec.a, spec.b);
            while (n <= band_hi) {
                if (!detail::is_perfect_power(n, spec.alpha)) {
                    detail::keep_min(best.high, FracRoot{n, k}, spec.alpha);
                    break;
                }
                n += spec.a;
            }
            // largest admissible fractional part in the band
            n = band_hi;
            if (detail::align_down(n, spec.a, spec.b)) {
                while (n > band_lo && n >= spec.min_radicand()) {
                    if (!detail::is_perfect_power(n, spec.alpha)) {
                        detail::keep_max(best.low, FracRoot{n, k}, spec.alpha);
                        break;
                    }
                    if (n < spec.a) break;
                    n -= spec.a;
                }
            }
        }
        slots[c] = best;
    });

    detail::BandCandidates best;
    for (const auto& s : slots) {
        if (s.low) detail::keep_max(best.low, *s.low, spec.alpha);
        if (s.high) detail::keep_min(best.high, *s.high, spec.alpha);
    }
    if (!best.low) throw unbounded_gap_error(unbounded_gap_error::Side::below);
    if (!best.high) throw unbounded_gap_error(unbounded_gap_error::Side::above);

    GapMeasurement m;
    m.center = Rational(0, 1);
    m.lower_radicand = best.low->radicand;
    m.lower_band = best.low->band;
    m.upper_radicand = best.high->radicand;
    m.upper_band = best.high->band;
    m.n_limit = spec.n_limit;
    const DDouble left = dd::dist_below_next_int(m.lower_radicand, m.lower_band, spec.alpha);
    const DDouble right = dd::frac_of_root(m.upper_radicand, m.upper_band, spec.alpha);
    m.width = dd::add(left, right);
    return m;
}

inline ScaledApproximant scaled_gap(const SequenceSpec& spec, Rational x, unsigned threads = 0) {
    ScaledApproximant out;
    out.measurement = x.is_integer() ? exact_gap_at_integer(spec, threads)
                                     : exact_gap_at(spec, x, threads);
    out.scale = detail::scale_factor(spec);
    out.scaled_width = dd::mul(out.measurement.width, out.scale);
    return out;
}

struct ProfilePoint {
    Rational x;
    ScaledApproximant approx;
};

/// Scaled gaps at every Farey point of order max_q (the integer-class
/// wrap gap is attached to both endpoints 0/1 and 1/1). Deterministic order;
/// interior points evaluate in parallel.
inline std::vector<ProfilePoint> gap_profile(const SequenceSpec& spec, u64 max_q,
                                             unsigned threads = 0) {
    spec.validate();
    if (max_q < 2) throw std::domain_error("gap_profile: max_q must be >= 2");
    const std::vector<Rational> farey = farey_sequence(max_q);
    std::vector<ProfilePoint> out(farey.size());

    ScaledApproximant integer_gap;
    integer_gap.measurement = exact_gap_at_integer(spec, threads);
    integer_gap.scale = detail::scale_factor(spec);
    integer_gap.scaled_width = dd::mul(integer_gap.measurement.width, integer_gap.scale);

    detail::parallel_chunks(0, farey.size(), threads, 1, [&](u64, u64 lo, u64 hi) {
        for (u64 i = lo; i < hi; ++i) {
            out[i].x = farey[i];
            out[i].approx = farey[i].is_integer() ? integer_gap
                                                  : scaled_gap(spec, farey[i], 1);
        }
    });
    return out;
}

/// Scaled gap at x for each N of an ascending schedule.
inline std::vector<ScaledApproximant> convergence_series(SequenceSpec spec, Rational x,
                                                         const std::vector<u64>& schedule,
                                                         unsigned threads = 0) {
    if (schedule.empty()) throw std::domain_error("convergence_series: empty schedule");
    for (size_t i = 1; i < schedule.size(); ++i)
        if (schedule[i] <= schedule[i - 1])
            throw std::domain_error("convergence_series: schedule must be ascending");
    std::vector<ScaledApproximant> out;
    out.reserve(schedule.size());
    for (const u64 n : schedule) {
        spec.n_limit = n;
        out.push_back(scaled_gap(spec, x, threads));
    }
    return out;
}

/// All admissible radicands n <= N, ascending.
inline std::vector<u64> enumerate_radicands(const SequenceSpec& spec) {
    spec.validate();
    std::vector<u64> out;
    for (u64 n = spec.min_radicand(); n <= spec.n_limit && n >= spec.min_radicand();
         n += spec.a) {
        if (!detail::is_perfect_power(n, spec.alpha)) out.push_back(n);
    }
    return out;
}

/// Fractional parts of the admissible radicands' roots, ascending, in
/// double-double precision.
inline std::vector<DDouble> sorted_fracs_dd(const SequenceSpec& spec) {
    std::vector<DDouble> fr;
    for (const u64 n : enumerate_radicands(spec))
        fr.push_back(dd::frac_of_root(n, integer_root(n, spec.alpha), spec.alpha));
    std::sort(fr.begin(), fr.end(), [](DDouble a, DDouble b) { return dd::cmp(a, b) < 0; });
    return fr;
}

} // namespace radgap
