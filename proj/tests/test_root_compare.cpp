#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "radgap/ddouble.hpp"
#include "radgap/root_compare.hpp"

using namespace radgap;

TEST_CASE("compare_frac_roots orders well-separated fractional parts") {
    // sqrt(2)-1 = 0.414..., sqrt(3)-1 = 0.732..., sqrt(5)-2 = 0.236...
    CHECK(compare_frac_roots({2, 1}, {3, 1}, 2) < 0);
    CHECK(compare_frac_roots({3, 1}, {5, 2}, 2) > 0);
    CHECK(compare_frac_roots({2, 1}, {2, 1}, 2) == 0);
    // equal radicands, different bands
    CHECK(compare_frac_roots({2, 1}, {2, 0}, 2) < 0);
}

TEST_CASE("perfect powers compare exactly") {
    CHECK(compare_frac_roots({16, 3}, {25, 4}, 2) == 0); // 4-3 == 5-4
    CHECK(compare_frac_roots({16, 4}, {25, 4}, 2) < 0);  // 0 < 1
    CHECK(compare_frac_roots({27, 2}, {8, 1}, 3) == 0);  // 3-2 == 2-1
    CHECK(compare_frac_roots({27, 2}, {10, 2}, 3) > 0);  // 1 > 10^(1/3)-2
}

TEST_CASE("near-ties beyond the 128-bit rung escalate and stay correct") {
    // sqrt(a^2-1) = a - 1/(2a) - ..., so the fractional parts of consecutive
    // such radicands differ by ~1/(2a^2) - far below the level-0 resolution
    const u64 a = u64(1) << 25;
    const FracRoot lhs{a * a - 1, a - 1};         // frac = 1 - (a - sqrt(a^2-1))
    const FracRoot rhs{(a + 1) * (a + 1) - 1, a}; // frac = 1 - ((a+1) - sqrt(...))
    CHECK(compare_frac_roots(lhs, rhs, 2) < 0);
    CHECK(compare_frac_roots(rhs, lhs, 2) > 0);

    // same construction one order up: fracs differ by ~1/(3a^3)
    const u64 c = u64(1) << 14;
    const FracRoot l3{c * c * c - 1, c - 1};
    const FracRoot r3{(c + 1) * (c + 1) * (c + 1) - 1, c};
    CHECK(compare_frac_roots(l3, r3, 3) < 0);
}

TEST_CASE("comparator agrees with double-double on random band candidates") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 500; ++trial) {
        const unsigned alpha = unsigned(rng() % 4 + 2);
        const u64 k1 = rng() % 2000 + 1, k2 = rng() % 2000 + 1;
        const u64 lo1 = ipow(k1, alpha), lo2 = ipow(k2, alpha);
        const u64 n1 = lo1 + rng() % (ipow(k1 + 1, alpha) - lo1 - 1) + 1;
        const u64 n2 = lo2 + rng() % (ipow(k2 + 1, alpha) - lo2 - 1) + 1;
        const int exact = compare_frac_roots({n1, k1}, {n2, k2}, alpha);
        const DDouble f1 = dd::frac_of_root(n1, k1, alpha);
        const DDouble f2 = dd::frac_of_root(n2, k2, alpha);
        // double-double has ~1e-30 headroom here; random pairs never tie
        CHECK(exact == dd::cmp(f1, f2));
    }
}
