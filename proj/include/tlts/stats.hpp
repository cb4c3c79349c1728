#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

#include "tlts/errors.hpp"

namespace tlts {

inline double mean(const std::vector<double>& x) {
    if (x.empty()) throw insufficient_data_error("mean of empty series");
    double s = 0.0;
    for (double v : x) s += v;
    return s / static_cast<double>(x.size());
}

/// Sample standard deviation (n-1 denominator); 0 for fewer than two values.
inline double sample_sd(const std::vector<double>& x) {
    if (x.size() < 2) return 0.0;
    const double m = mean(x);
    double s = 0.0;
    for (double v : x) s += (v - m) * (v - m);
    return std::sqrt(s / static_cast<double>(x.size() - 1));
}

/// Empirical quantile of a sorted sample, linearly interpolated between
/// order statistics placed at plotting positions k/(n+1), k = 1..n.
/// Clamps to the extreme order statistics outside that range.
inline double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw insufficient_data_error("quantile of empty sample");
    if (!(p > 0.0 && p < 1.0)) throw domain_error("quantile probability must lie in (0,1)");
    const std::size_t n = sorted.size();
    const double pos = p * static_cast<double>(n + 1);
    if (pos <= 1.0) return sorted.front();
    if (pos >= static_cast<double>(n)) return sorted.back();
    const std::size_t k = static_cast<std::size_t>(pos);  // 1-based lower order statistic
    const double frac = pos - static_cast<double>(k);
    return sorted[k - 1] + frac * (sorted[k] - sorted[k - 1]);
}

inline double quantile(std::vector<double> x, double p) {
    std::sort(x.begin(), x.end());
    return quantile_sorted(x, p);
}

/// Number of sample values <= x in a sorted sample.
inline std::size_t count_leq_sorted(const std::vector<double>& sorted, double x) {
    return static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin());
}

/// Kolmogorov-Smirnov distance between a sample and a continuous CDF.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw insufficient_data_error("KS distance of empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

/// Asymptotic KS critical value at significance alpha = 0.01.
inline double ks_critical_001(std::size_t n) {
    return 1.6276236115189502 / std::sqrt(static_cast<double>(n));
}

/// Biased-denominator autocorrelation at lag h.
inline double sample_acf(const std::vector<double>& x, std::size_t h) {
    if (x.size() <= h) throw insufficient_data_error("series shorter than requested lag");
    const double m = mean(x);
    double c0 = 0.0;
    for (double v : x) c0 += (v - m) * (v - m);
    if (c0 == 0.0) return 0.0;
    double ch = 0.0;
    for (std::size_t t = 0; t + h < x.size(); ++t) ch += (x[t] - m) * (x[t + h] - m);
    return ch / c0;
}

namespace detail {

/// Inverse standard normal CDF (Acklam's rational approximation, refined by
/// one Halley step; absolute error well below 1e-12 on (0,1)).
inline double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw domain_error("normal quantile probability must lie in (0,1)");
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * 3.14159265358979323846) * std::exp(x * x / 2.0);
    return x - u / (1.0 + x * u / 2.0);
}

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

}  // namespace detail
}  // namespace tlts
