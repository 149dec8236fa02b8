#pragma once

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mbo {

/// Box-plot summary: quartiles by linear interpolation, Tukey 1.5*IQR
/// whiskers clipped to the most extreme data inside the fences.
struct SummaryStats {
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_lo = 0.0;
    double whisker_hi = 0.0;
    std::vector<double> outliers;
    long n = 0;
};

/// p-quantile of sorted data, linear interpolation at rank h = (n-1)*p.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("quantile_sorted: empty input");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline SummaryStats summarize(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("summarize: empty input");
    std::sort(values.begin(), values.end());

    SummaryStats s;
    s.n = static_cast<long>(values.size());
    s.q1 = quantile_sorted(values, 0.25);
    s.median = quantile_sorted(values, 0.50);
    s.q3 = quantile_sorted(values, 0.75);

    const double iqr = s.q3 - s.q1;
    const double fence_lo = s.q1 - 1.5 * iqr;
    const double fence_hi = s.q3 + 1.5 * iqr;

    s.whisker_lo = s.q3;  // overwritten below; fences always contain [q1,q3] data
    s.whisker_hi = s.q1;
    bool any_inside = false;
    for (double v : values) {
        if (v < fence_lo || v > fence_hi) {
            s.outliers.push_back(v);
        } else {
            if (!any_inside) {
                s.whisker_lo = v;
                s.whisker_hi = v;
                any_inside = true;
            } else {
                if (v < s.whisker_lo) s.whisker_lo = v;
                if (v > s.whisker_hi) s.whisker_hi = v;
            }
        }
    }
    if (!any_inside) {  // degenerate; cannot happen with finite data, keep sane
        s.whisker_lo = s.q1;
        s.whisker_hi = s.q3;
    }
    return s;
}

}  // namespace mbo
