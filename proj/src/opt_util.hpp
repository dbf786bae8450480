#pragma once

#include <cmath>
#include <functional>
#include <limits>

namespace wxeb::detail {

struct GridPoint {
    double a = 0.0;
    double b = 0.0;
    double value = -std::numeric_limits<double>::infinity();
};

/// Coarse grid over [a_lo,a_hi] x [b_lo,b_hi] followed by shrinking local
/// grid refinement around the incumbent. Infeasible points return -inf from
/// `eval`. The incumbent never worsens.
inline GridPoint maximize_2d(const std::function<double(double, double)>& eval, double a_lo, double a_hi,
                             double b_lo, double b_hi, int coarse_a, int coarse_b, int rounds) {
    GridPoint best;
    const double step_a0 = (a_hi - a_lo) / coarse_a;
    const double step_b0 = (b_hi - b_lo) / coarse_b;
    for (int i = 0; i <= coarse_a; ++i) {
        for (int j = 0; j <= coarse_b; ++j) {
            const double a = a_lo + i * step_a0;
            const double b = b_lo + j * step_b0;
            const double v = eval(a, b);
            if (v > best.value) best = {a, b, v};
        }
    }
    double span_a = step_a0;
    double span_b = step_b0;
    for (int r = 0; r < rounds; ++r) {
        const GridPoint center = best;
        constexpr int kLocal = 10;  // 21 points per axis
        for (int i = -kLocal; i <= kLocal; ++i) {
            for (int j = -kLocal; j <= kLocal; ++j) {
                const double a = std::min(a_hi, std::max(a_lo, center.a + i * span_a / kLocal));
                const double b = std::min(b_hi, std::max(b_lo, center.b + j * span_b / kLocal));
                const double v = eval(a, b);
                if (v > best.value) best = {a, b, v};
            }
        }
        span_a /= kLocal;
        span_b /= kLocal;
    }
    return best;
}

}  // namespace wxeb::detail
