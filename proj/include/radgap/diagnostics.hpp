#pragma once

// Background-gap diagnostics: the distribution of scaled gap widths away
// from rational points, and the visibility estimate for higher-order
// radicals (how large N must get before rational spikes clear the noise).

#include <cmath>

#include "radgap/engine.hpp"

namespace radgap {

struct HistogramBin {
    double lo = 0, hi = 0;
    u64 count = 0;
};

struct BackgroundOptions {
    u64 sample_budget = 0;          // sampling mode budget when full sort is off limits
    u64 full_sort_limit = 10000000; // guard on N for the in-memory path
    unsigned bins = 48;
    unsigned threads = 0;
};

struct BackgroundScan {
    std::vector<HistogramBin> bins; // log-spaced over [max/1e4, max]
    u64 below_range = 0;            // gaps smaller than the lowest bin edge
    u64 gap_count = 0;
    double scale = 0;        // alpha * N^((alpha-1)/alpha)
    double mean_raw = 0;     // mean unscaled gap
    double mean_scaled = 0;
    double median_scaled = 0;
    double max_scaled = 0;
    double tail_power_exponent = 0; // Hill fit of the density exponent, top decade
    double tail_exp_rate = 0;       // exponential-rate fit of the same tail
    bool sampled = false;
    u64 n_limit = 0;
};

namespace detail {

inline void finish_scan(BackgroundScan& scan, std::vector<double>& scaled, unsigned bins) {
    scan.gap_count = scaled.size();
    if (scaled.empty()) return;
    std::sort(scaled.begin(), scaled.end());
    scan.max_scaled = scaled.back();
    double sum = 0;
    for (const double w : scaled) sum += w;
    scan.mean_scaled = sum / double(scaled.size());
    scan.mean_raw = scan.mean_scaled / scan.scale;
    scan.median_scaled = scaled[scaled.size() / 2];

    const double hi = scan.max_scaled * (1.0 + 1e-12);
    const double lo = hi / 1e4;
    const double ratio = std::pow(hi / lo, 1.0 / double(bins));
    scan.bins.resize(bins);
    for (unsigned i = 0; i < bins; ++i) {
        scan.bins[i].lo = lo * std::pow(ratio, double(i));
        scan.bins[i].hi = lo * std::pow(ratio, double(i + 1));
    }
    for (const double w : scaled) {
        if (w < lo) {
            ++scan.below_range;
            continue;
        }
        auto idx = size_t(std::log(w / lo) / std::log(ratio));
        if (idx >= bins) idx = bins - 1;
        ++scan.bins[idx].count;
    }

    // both tail fits over the top decade; the distribution is reported, not judged
    const double tmin = scan.max_scaled / 10.0;
    double log_sum = 0, excess_sum = 0;
    u64 n_tail = 0;
    for (auto it = scaled.rbegin(); it != scaled.rend() && *it >= tmin; ++it) {
        log_sum += std::log(*it / tmin);
        excess_sum += *it - tmin;
        ++n_tail;
    }
    scan.tail_power_exponent =
        n_tail >= 2 && log_sum > 0 ? -(1.0 + double(n_tail) / log_sum) : 0.0;
    scan.tail_exp_rate = n_tail >= 2 && excess_sum > 0 ? double(n_tail) / excess_sum : 0.0;
}

} // namespace detail

/// Distribution of consecutive-gap widths (scaled) over the whole unit
/// interval. Full-sort mode enumerates every fractional part (guarded by
/// full_sort_limit); beyond the guard a positive sample_budget switches to
/// measuring gaps at a fixed low-discrepancy set of points.
inline BackgroundScan background_scan(const SequenceSpec& spec,
                                      const BackgroundOptions& options = {}) {
    spec.validate();
    BackgroundScan scan;
    scan.n_limit = spec.n_limit;
    scan.scale = detail::scale_factor(spec).value();

    if (spec.n_limit <= options.full_sort_limit) {
        const std::vector<u64> radicands = enumerate_radicands(spec);
        if (radicands.empty()) return scan;
        std::vector<double> fracs;
        fracs.reserve(radicands.size());
        for (const u64 n : radicands) {
            const u64 k = integer_root(n, spec.alpha);
            const double root = spec.alpha == 2 ? std::sqrt(double(n))
                                                : std::pow(double(n), 1.0 / double(spec.alpha));
            fracs.push_back(std::min(std::max(root - double(k), 0.0), 1.0));
        }
        std::sort(fracs.begin(), fracs.end());
        std::vector<double> scaled;
        scaled.reserve(fracs.size());
        for (size_t i = 1; i < fracs.size(); ++i)
            scaled.push_back((fracs[i] - fracs[i - 1]) * scan.scale);
        // wrap-around gap across the integer
        scaled.push_back((fracs.front() + 1.0 - fracs.back()) * scan.scale);
        detail::finish_scan(scan, scaled, options.bins);
        return scan;
    }

    if (options.sample_budget == 0)
        throw guard_error("background_scan: N exceeds the full-sort guard (" +
                          std::to_string(options.full_sort_limit) +
                          "); set a sample budget or raise the guard");

    // sampling mode: gaps at fractional parts of multiples of the golden ratio,
    // quantized to a dyadic rational fine enough to sit between set points
    // yet coarse enough for the exact 128-bit threshold arithmetic
    const u64 bands = integer_root(spec.n_limit, spec.alpha);
    const int s = int(126 / spec.alpha) - int(bit_length(bands + 1)) - 1;
    if (s < 8)
        throw guard_error("background_scan: N too large for sampling-mode quantization");
    const int shift = std::min(s, 44);
    const u64 den = u64(1) << shift;
    constexpr double kGolden = 0.6180339887498949;

    scan.sampled = true;
    std::vector<double> scaled(options.sample_budget, 0.0);
    detail::parallel_chunks(0, options.sample_budget, options.threads, 1,
                            [&](u64, u64 lo, u64 hi) {
        for (u64 j = lo; j < hi; ++j) {
            double x = std::fmod(double(j + 1) * kGolden, 1.0);
            u64 p = u64(std::llround(x * double(den))) | 1; // odd: reduced by construction
            if (p >= den) p = den - 1;
            const ScaledApproximant g = scaled_gap(spec, Rational(p, den), 1);
            scaled[j] = g.scaled_width.value();
        }
    });
    detail::finish_scan(scan, scaled, options.bins);
    return scan;
}

/// Root of N * exp(-3 eps N^(1/3)) = 1 on the descending branch (the N
/// beyond which outliers above level eps die out). The left side peaks at
/// (eps*e)^-3; for eps > 1/e it never reaches 1 and the estimate
/// degenerates to 1: the signal clears the noise from the start.
inline double min_n_estimate(double eps) {
    if (!(eps > 0)) throw std::domain_error("min_n_estimate: eps must be positive");
    const auto f = [eps](double n) { return n * std::exp(-3.0 * eps * std::cbrt(n)); };
    const double n_peak = 1.0 / (eps * eps * eps);
    if (f(n_peak) < 1.0) return 1.0;
    double lo = n_peak, hi = n_peak;
    do {
        hi *= 2.0;
    } while (f(hi) >= 1.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) >= 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace radgap
