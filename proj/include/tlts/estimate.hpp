#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "tlts/errors.hpp"
#include "tlts/stats.hpp"

namespace tlts {

/// Empirical TPDF estimate for lags 1..H. sigma_hat[i] and n_exceed[i] refer
/// to lag i+1. Lags whose exceedance count falls below 30 carry a low-count
/// flag; the factor-2 normalization can push values marginally above 1, and
/// anything beyond 1.1 is flagged out of range (it usually means the input
/// was not on the standardized scale). sigma_hat(0) is not estimated:
/// preprocessing fixes sigma(0) = 1.
struct TpdfEstimate {
    std::vector<double> sigma_hat;
    std::vector<std::size_t> n_exceed;
    std::vector<bool> low_count;
    std::vector<bool> out_of_range;
    double r0_quantile = 0.975;

    std::size_t max_lag() const { return sigma_hat.size(); }
    double at_lag(std::size_t h) const {
        if (h == 0 || h > sigma_hat.size()) throw domain_error("TPDF estimate lag out of range");
        return sigma_hat[h - 1];
    }
};

/// Bias correction before TPDF estimation: subtract the series mean, then
/// replace negative values by 0.
inline std::vector<double> bias_correct(const std::vector<double>& z) {
    const double m = mean(z);
    std::vector<double> out(z.size());
    for (std::size_t t = 0; t < z.size(); ++t) out[t] = std::max(z[t] - m, 0.0);
    return out;
}

namespace detail {

/// Shared estimator core. For each lag h it thresholds the lag-h pair radii
/// at their empirical r0_quantile and averages w_t * w_{t+h} over the
/// exceeding pairs, scaled by 2. `signed_values` admits series taking both
/// signs (two-sided baseline); the published estimator is for nonnegative
/// series.
inline TpdfEstimate estimate_tpdf_core(const std::vector<double>& x, std::size_t max_lag,
                                       double r0_quantile, bool signed_values) {
    if (max_lag == 0) throw domain_error("estimate_tpdf requires max_lag >= 1");
    if (!(r0_quantile > 0.0 && r0_quantile < 1.0))
        throw domain_error("radial threshold quantile must lie in (0,1)");
    if (!signed_values)
        for (double v : x)
            if (v < 0.0) throw domain_error("estimate_tpdf requires a nonnegative series");
    if (x.size() <= max_lag + 30)
        throw insufficient_data_error("series too short for the requested number of lags");

    TpdfEstimate est;
    est.r0_quantile = r0_quantile;
    est.sigma_hat.resize(max_lag);
    est.n_exceed.resize(max_lag);
    est.low_count.resize(max_lag);
    est.out_of_range.resize(max_lag);
    std::vector<double> radii;
    for (std::size_t h = 1; h <= max_lag; ++h) {
        const std::size_t m = x.size() - h;
        radii.resize(m);
        for (std::size_t t = 0; t < m; ++t) radii[t] = std::hypot(x[t], x[t + h]);
        std::vector<double> sorted = radii;
        std::sort(sorted.begin(), sorted.end());
        const double r0 = quantile_sorted(sorted, r0_quantile);

        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t t = 0; t < m; ++t) {
            if (radii[t] > r0) {
                sum += x[t] * x[t + h] / (radii[t] * radii[t]);
                ++count;
            }
        }
        if (count == 0) throw estimation_error("no radial exceedances at lag " + std::to_string(h));
        est.sigma_hat[h - 1] = 2.0 * sum / static_cast<double>(count);
        est.n_exceed[h - 1] = count;
        est.low_count[h - 1] = count < 30;
        est.out_of_range[h - 1] = !signed_values && est.sigma_hat[h - 1] > 1.1;
    }
    return est;
}

}  // namespace detail

/// TPDF estimator: sigma_hat(h) = 2 / sum I(r_t > r0) * sum w_t w_{t+h}
/// I(r_t > r0), with the radial threshold taken per lag at the r0_quantile
/// of that lag's pair radii. Input must be nonnegative (typically the
/// bias-corrected Frechet-scale series).
inline TpdfEstimate estimate_tpdf(const std::vector<double>& x, std::size_t max_lag,
                                  double r0_quantile = 0.975) {
    return detail::estimate_tpdf_core(x, max_lag, r0_quantile, /*signed_values=*/false);
}

/// Empirical tail dependence chi(h) at probability level u: the proportion
/// of lag-h successors whose rank-based margin also exceeds u, among times
/// whose margin exceeds u.
inline double estimate_chi(const std::vector<double>& x, std::size_t lag, double u) {
    if (!(u > 0.5 && u < 1.0)) throw domain_error("chi level u must lie in (0.5, 1)");
    if (x.size() <= lag) throw insufficient_data_error("series shorter than requested lag");
    std::vector<double> sorted = x;
    std::sort(sorted.begin(), sorted.end());
    const double n1 = static_cast<double>(x.size() + 1);
    std::vector<bool> exceeds(x.size());
    for (std::size_t t = 0; t < x.size(); ++t)
        exceeds[t] = static_cast<double>(count_leq_sorted(sorted, x[t])) / n1 > u;
    std::size_t conditioning = 0;
    std::size_t joint = 0;
    for (std::size_t t = 0; t + lag < x.size(); ++t) {
        if (!exceeds[t]) continue;
        ++conditioning;
        if (exceeds[t + lag]) ++joint;
    }
    if (conditioning == 0) throw estimation_error("no exceedances at the conditioning level");
    return static_cast<double>(joint) / static_cast<double>(conditioning);
}

}  // namespace tlts
