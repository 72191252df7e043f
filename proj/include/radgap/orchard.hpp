#pragma once

// Euclid's orchard projection. A family of rays m(k) = c(x) + 2kx is shone
// through the integer lattice (k, m); every lattice point hit by a ray casts
// a point shadow on the screen at k_max. The leftover illuminated segments,
// scaled by 2(k_max + x_mid), reproduce the gap function: the parabolic
// intercept c(x) = x^2 makes shadows land exactly at fractional parts of
// square roots, and any non-singular intercept converges to the same
// pattern.

#include <optional>
#include <utility>

#include "radgap/closed_form.hpp"
#include "radgap/engine.hpp"

namespace radgap {

/// Every ray of the family passes through infinitely many lattice points:
/// the screen shows an image of the rational set instead of gaps.
struct singular_intercept_error : std::domain_error {
    std::vector<Rational> rational_shadows;
    bool truncated = false;
    singular_intercept_error(std::vector<Rational> shadows, bool trunc)
        : std::domain_error("singular intercept: the whole sequence is rational"),
          rational_shadows(std::move(shadows)),
          truncated(trunc) {}
};

struct OrchardScene {
    enum class Intercept { parabolic, linear, custom };

    u64 k_max = 1;
    Intercept intercept = Intercept::parabolic;
    double c1 = 0.0, c2 = 0.0; // linear intercept c(x) = c1 + c2*x
    std::optional<Rational> c1_exact, c2_exact; // set when c1/c2 arrive as exact rationals
    std::vector<std::pair<double, double>> knots; // custom tabulated c(x), ascending in x
    u64 a = 1, b = 0;    // only lattice points with k^2 + m = b mod a cast shadows
    double window_lo = 0.0, window_hi = 1.0;

    void validate() const {
        if (k_max < 1) throw std::domain_error("OrchardScene: k_max must be >= 1");
        if (k_max > (u64(1) << 20)) throw guard_error("OrchardScene: k_max exceeds 2^20 guard");
        if (a < 1 || b >= a) throw std::domain_error("OrchardScene: need a >= 1, b < a");
        if (!(window_lo >= 0.0 && window_lo < window_hi && window_hi <= 1.0))
            throw std::domain_error("OrchardScene: window must be a sub-interval of [0,1]");
        if (intercept == Intercept::linear && !(2.0 + c2 > 0.0))
            throw std::domain_error("OrchardScene: linear intercept needs 2k + c2 > 0");
        if (intercept == Intercept::custom) {
            if (knots.size() < 2)
                throw std::domain_error("OrchardScene: custom intercept needs >= 2 knots");
            for (size_t i = 1; i < knots.size(); ++i) {
                if (knots[i].first <= knots[i - 1].first)
                    throw std::domain_error("OrchardScene: knots must ascend in x");
                const double slope = (knots[i].second - knots[i - 1].second) /
                                     (knots[i].first - knots[i - 1].first);
                if (!(slope + 2.0 > 0.0))
                    throw std::domain_error("OrchardScene: custom intercept not invertible");
            }
        }
    }
};

/// A lattice point's shadow: the unique x in the window with m = c(x) + 2kx.
struct ShadowPoint {
    DDouble x;
    u64 band = 0; // k
    u64 m = 0;
};

struct IlluminationSegment {
    DDouble x_lo, x_hi;
    DDouble raw_length;
    DDouble scaled_length; // 2 (k_max + x_mid) * raw_length
};

namespace detail {

inline std::vector<Rational> rational_shadow_image(const OrchardScene& scene, u64 k_cap) {
    std::vector<Rational> out;
    for (u64 k = 1; k <= std::min(scene.k_max, k_cap); ++k) {
        for (u64 m = 1; m < 2 * k; ++m) {
            if ((ipow(k, 2u) + m) % scene.a != scene.b) continue;
            const Rational r(m, 2 * k);
            const double v = r.value();
            if (v > scene.window_lo && v < scene.window_hi) out.push_back(r);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline double custom_intercept_at(const OrchardScene& scene, double x) {
    const auto& kn = scene.knots;
    if (x <= kn.front().first) return kn.front().second;
    if (x >= kn.back().first) return kn.back().second;
    size_t i = 1;
    while (kn[i].first < x) ++i;
    const double t = (x - kn[i - 1].first) / (kn[i].first - kn[i - 1].first);
    return kn[i - 1].second + t * (kn[i].second - kn[i - 1].second);
}

// solve c(x) + 2kx = m for the piecewise-linear tabulated intercept
inline std::optional<double> custom_invert(const OrchardScene& scene, u64 k, double m) {
    const auto f = [&](double x) { return custom_intercept_at(scene, x) + 2.0 * double(k) * x; };
    double lo = scene.window_lo, hi = scene.window_hi;
    if (m <= f(lo) || m >= f(hi)) return std::nullopt;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < m ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// All shadow points of the scene, sorted by screen position.
inline std::vector<ShadowPoint> shadow_points(const OrchardScene& scene, unsigned threads = 0) {
    scene.validate();
    using Intercept = OrchardScene::Intercept;
    if (scene.intercept == Intercept::linear && scene.c1 == 0.0 && scene.c2 == 0.0)
        throw singular_intercept_error(detail::rational_shadow_image(scene, 64),
                                       scene.k_max > 64);

    const unsigned nslots = resolve_threads(threads);
    std::vector<std::vector<ShadowPoint>> parts(nslots);
    const DDouble win_lo(scene.window_lo), win_hi(scene.window_hi);

    detail::parallel_chunks(1, scene.k_max + 1, threads, 16, [&](u64 c, u64 lo, u64 hi) {
        auto& out = parts[c];
        for (u64 k = lo; k < hi; ++k) {
            if (scene.intercept == Intercept::parabolic) {
                for (u64 m = 1; m <= 2 * k; ++m) {
                    const u64 n = k * k + m;
                    if (n % scene.a != scene.b) continue;
                    const DDouble x = dd::frac_of_root(n, k, 2);
                    if (dd::cmp(x, win_lo) > 0 && dd::cmp(x, win_hi) < 0)
                        out.push_back({x, k, m});
                }
            } else if (scene.intercept == Intercept::linear) {
                const double den = 2.0 * double(k) + scene.c2;
                const double m_lo = scene.c1 + den * scene.window_lo;
                const double m_hi = scene.c1 + den * scene.window_hi;
                const i64 first = i64(std::floor(m_lo)) + 1;
                for (i64 m = std::max<i64>(first, 1); double(m) < m_hi; ++m) {
                    if ((u128(k) * k + u64(m)) % scene.a != scene.b) continue;
                    const DDouble x = dd::div(dd::sub(DDouble(double(m)), DDouble(scene.c1)),
                                              DDouble(den));
                    if (dd::cmp(x, win_lo) > 0 && dd::cmp(x, win_hi) < 0)
                        out.push_back({x, k, u64(m)});
                }
            } else {
                const double m_hi = detail::custom_intercept_at(scene, scene.window_hi) +
                                    2.0 * double(k) * scene.window_hi;
                for (i64 m = 1; double(m) < m_hi; ++m) {
                    if ((u128(k) * k + u64(m)) % scene.a != scene.b) continue;
                    if (auto x = detail::custom_invert(scene, k, double(m)))
                        out.push_back({DDouble(*x), k, u64(m)});
                }
            }
        }
    });

    std::vector<ShadowPoint> shadows;
    size_t total = 0;
    for (const auto& p : parts) total += p.size();
    shadows.reserve(total);
    for (auto& p : parts) shadows.insert(shadows.end(), p.begin(), p.end());
    std::sort(shadows.begin(), shadows.end(), [](const ShadowPoint& l, const ShadowPoint& r) {
        const int c = dd::cmp(l.x, r.x);
        if (c != 0) return c < 0;
        if (l.band != r.band) return l.band < r.band;
        return l.m < r.m;
    });
    // coincident shadows (rays through several lattice points) collapse to one
    shadows.erase(std::unique(shadows.begin(), shadows.end(),
                              [](const ShadowPoint& l, const ShadowPoint& r) {
                                  return dd::cmp(l.x, r.x) == 0;
                              }),
                  shadows.end());
    return shadows;
}

/// The complement of the shadow set within the window: disjoint sorted
/// segments tiling the window, each carrying 2(k_max + x_mid) * length.
inline std::vector<IlluminationSegment> illumination_pattern(const OrchardScene& scene,
                                                             unsigned threads = 0) {
    const std::vector<ShadowPoint> shadows = shadow_points(scene, threads);
    std::vector<IlluminationSegment> segments;
    segments.reserve(shadows.size() + 1);
    const DDouble k_max(double(scene.k_max));
    DDouble prev(scene.window_lo);
    const auto emit = [&](DDouble lo, DDouble hi) {
        if (dd::cmp(lo, hi) >= 0) return;
        IlluminationSegment seg;
        seg.x_lo = lo;
        seg.x_hi = hi;
        seg.raw_length = dd::sub(hi, lo);
        const DDouble mid = dd::mul(dd::add(lo, hi), DDouble(0.5));
        seg.scaled_length = dd::mul(dd::mul(DDouble(2.0), dd::add(k_max, mid)), seg.raw_length);
        segments.push_back(seg);
    };
    for (const ShadowPoint& s : shadows) {
        emit(prev, s.x);
        prev = s.x;
    }
    emit(prev, DDouble(scene.window_hi));
    return segments;
}

struct ClosedFormComparison {
    Rational x;
    double scaled_length = 0;
    ExactRatio closed_form;
    double rel_err = 0;
    bool singular = false; // the point is itself a shadow (rational term leak)
};

namespace detail {

// Some ray of the family passes through a lattice point exactly at x = p/q,
// i.e. c1 + (c2 + 2k) p/q is an integer for some k. With c1 = a1/b1 and
// c2 = a2/b2 that linear congruence in k is solvable iff
//   b1 b2 gcd(2p, q)  divides  a1 b2 q + a2 b1 p.
// Only decidable when the coefficients arrived as exact rationals.
inline bool rational_point_singular(const OrchardScene& scene, Rational x) {
    if (scene.intercept != OrchardScene::Intercept::linear) return false;
    if (!scene.c1_exact || !scene.c2_exact) return false; // undecidable for float input
    const u128 num = u128(scene.c1_exact->num) * scene.c2_exact->den * x.den +
                     u128(scene.c2_exact->num) * x.num * scene.c1_exact->den;
    const u128 modulus = u128(scene.c1_exact->den) * scene.c2_exact->den *
                         std::gcd<u64>(2 * x.num, x.den);
    return num % modulus == 0;
}

} // namespace detail

/// Pairs the illuminated segment around each interior Farey point with the
/// closed-form gap value. Points that coincide with a shadow are flagged
/// singular rather than failing the whole comparison.
inline std::vector<ClosedFormComparison> compare_to_closed_form(const OrchardScene& scene,
                                                                u64 max_q,
                                                                unsigned threads = 0) {
    if (max_q < 2) throw std::domain_error("compare_to_closed_form: max_q must be >= 2");
    const std::vector<IlluminationSegment> segments = illumination_pattern(scene, threads);
    std::vector<ClosedFormComparison> out;
    for (const Rational& x : farey_sequence(max_q)) {
        if (x.is_integer()) continue;
        const double v = x.value();
        if (!(v > scene.window_lo && v < scene.window_hi)) continue;
        ClosedFormComparison cmp;
        cmp.x = x;
        cmp.closed_form = scene.a == 1
                              ? gap_sqrt(x).value
                              : gap_dilated({x, 2, scene.a, scene.b}).value;
        const DDouble xd = dd::div(dd::from_u64(x.num), dd::from_u64(x.den));
        if (detail::rational_point_singular(scene, x)) {
            cmp.singular = true;
            out.push_back(cmp);
            continue;
        }
        // binary search for the segment with x_lo < x < x_hi
        size_t lo = 0, hi = segments.size();
        while (lo + 1 < hi) {
            const size_t mid = (lo + hi) / 2;
            if (dd::cmp(segments[mid].x_lo, xd) <= 0)
                lo = mid;
            else
                hi = mid;
        }
        const IlluminationSegment& seg = segments[lo];
        if (dd::cmp(seg.x_lo, xd) >= 0 || dd::cmp(seg.x_hi, xd) <= 0) {
            cmp.singular = true; // the Farey point is a shadow
        } else {
            cmp.scaled_length = seg.scaled_length.value();
            cmp.rel_err = std::abs(cmp.scaled_length - cmp.closed_form.value()) /
                          cmp.closed_form.value();
        }
        out.push_back(cmp);
    }
    return out;
}

} // namespace radgap
