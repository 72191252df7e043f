// A short tour of the library: exact limits, finite-N measurements, and
// the orchard view of the same gap, printed side by side.

#include <cstdio>

#include "radgap/closed_form.hpp"
#include "radgap/engine.hpp"
#include "radgap/orchard.hpp"

using namespace radgap;

int main() {
    // limiting gap widths around 1/2 for a few sequence families
    std::printf("limits at x = 1/2\n");
    std::printf("  sqrt(n)          G = %s\n", gap_sqrt(Rational(1, 2)).value.str().c_str());
    std::printf("  sqrt(5n)         G = %s\n",
                gap_dilated({Rational(1, 2), 2, 5, 0}).value.str().c_str());
    std::printf("  n^(1/3)          G = %s\n",
                gap_higher(Rational(1, 2), 3).value.str().c_str());
    std::printf("  oracle sqrt(5n)  G = %s\n",
                oracle_unreduced_gap(Rational(1, 2), 2, 5, 0).str().c_str());

    // the finite-N approximant closes in on the limit
    std::printf("\nscaled approximants at x = 1/2, sqrt(5n)\n");
    const SequenceSpec base{2, 5, 0, 1};
    for (const auto& g : convergence_series(base, Rational(1, 2), {10000, 100000, 1000000})) {
        std::printf("  N = %-8llu bracket [%llu, %llu]  scaled = %.6f\n",
                    (unsigned long long)g.measurement.n_limit,
                    (unsigned long long)g.measurement.lower_radicand,
                    (unsigned long long)g.measurement.upper_radicand,
                    g.scaled_width.value());
    }

    // the same gap as an illuminated stretch of the orchard screen
    OrchardScene scene;
    scene.k_max = 316; // here N is k_max^2, so this matches N = 1e5 above
    scene.a = 5;
    const auto segments = illumination_pattern(scene);
    const DDouble half(0.5);
    for (const auto& s : segments) {
        if (dd::cmp(s.x_lo, half) < 0 && dd::cmp(half, s.x_hi) < 0) {
            std::printf("\norchard screen at k_max = %llu\n"
                        "  segment around 1/2: [%.9f, %.9f], scaled length %.6f\n",
                        (unsigned long long)scene.k_max, s.x_lo.value(), s.x_hi.value(),
                        s.scaled_length.value());
            break;
        }
    }
    return 0;
}
