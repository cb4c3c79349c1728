#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tlts/errors.hpp"
#include "tlts/optim.hpp"
#include "tlts/stats.hpp"
#include "tlts/transformed.hpp"

namespace tlts {

/// Diurnal-cycle removal result: anomalies plus the 24 hour-of-day means
/// needed to invert the step.
struct DiurnalFit {
    std::array<double, 24> hourly_means{};
    std::vector<double> anomalies;
};

/// Subtracts the all-data mean of each hour of the 24-hour cycle.
inline DiurnalFit remove_diurnal(const std::vector<double>& values, const std::vector<int>& hour_of_day) {
    if (values.size() != hour_of_day.size()) throw domain_error("values and hours differ in length");
    std::array<double, 24> sums{};
    std::array<std::size_t, 24> counts{};
    for (std::size_t t = 0; t < values.size(); ++t) {
        const int h = hour_of_day[t];
        if (h < 0 || h > 23) throw domain_error("hour of day outside 0..23");
        sums[static_cast<std::size_t>(h)] += values[t];
        ++counts[static_cast<std::size_t>(h)];
    }
    DiurnalFit fit;
    for (std::size_t h = 0; h < 24; ++h) {
        if (counts[h] == 0)
            throw insufficient_data_error("no observations for hour " + std::to_string(h) +
                                          " of the diurnal cycle");
        fit.hourly_means[h] = sums[h] / static_cast<double>(counts[h]);
    }
    fit.anomalies.resize(values.size());
    for (std::size_t t = 0; t < values.size(); ++t)
        fit.anomalies[t] = values[t] - fit.hourly_means[static_cast<std::size_t>(hour_of_day[t])];
    return fit;
}

/// Semi-parametric marginal model: rank-based empirical CDF below the
/// threshold mu_hat (the empirical 1 - tail_prob quantile) and a generalized
/// Pareto tail above it. Supports the round trip between the data scale and
/// the Frechet(alpha = 2) scale.
struct MarginalModel {
    std::optional<std::array<double, 24>> hourly_means;
    std::vector<double> body;  // full sorted sample
    double mu_hat = 0.0;
    double gpd_scale = 1.0;
    double gpd_shape = 0.0;
    double tail_prob = 0.025;
};

namespace detail {

struct GpdEstimate {
    double scale = 1.0;
    double shape = 0.0;
    bool mle_converged = false;
};

/// Probability-weighted-moment estimate from survivor-weighted moments
/// a_s = E[Y (1-F(Y))^s]:  shape = 2 - a0/(a0 - 2 a1), scale = 2 a0 a1 /
/// (a0 - 2 a1), with a1 estimated by the unbiased plotting position.
inline GpdEstimate gpd_pwm(const std::vector<double>& sorted_excesses) {
    const std::size_t m = sorted_excesses.size();
    double a0 = 0.0, a1 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        a0 += sorted_excesses[i];
        a1 += sorted_excesses[i] * static_cast<double>(m - 1 - i) / static_cast<double>(m - 1);
    }
    a0 /= static_cast<double>(m);
    a1 /= static_cast<double>(m);
    GpdEstimate est;
    const double denom = a0 - 2.0 * a1;
    if (denom <= 0.0) {
        est.scale = a0;  // degenerate moments; exponential fallback
        est.shape = 0.0;
        return est;
    }
    est.shape = 2.0 - a0 / denom;
    est.scale = 2.0 * a0 * a1 / denom;
    if (!(est.scale > 0.0)) est.scale = a0;
    return est;
}

inline double gpd_negloglik(double log_scale, double shape, const std::vector<double>& excesses) {
    constexpr double kBig = 1e12;
    if (shape <= -0.5 || !std::isfinite(log_scale) || !std::isfinite(shape)) return kBig;
    const double scale = std::exp(log_scale);
    const double m = static_cast<double>(excesses.size());
    double nll = m * log_scale;
    if (std::abs(shape) < 1e-8) {
        for (double y : excesses) nll += y / scale;
        return nll;
    }
    const double c = 1.0 + 1.0 / shape;
    for (double y : excesses) {
        const double t = 1.0 + shape * y / scale;
        if (t <= 0.0) return kBig;
        nll += c * std::log(t);
    }
    return nll;
}

/// GPD fit by maximum likelihood (Nelder-Mead on (log scale, shape) from a
/// PWM start, shape constrained above -0.5). Falls back to the PWM estimate
/// when the search does not converge.
inline GpdEstimate fit_gpd(std::vector<double> excesses) {
    std::sort(excesses.begin(), excesses.end());
    GpdEstimate start = gpd_pwm(excesses);
    start.shape = std::clamp(start.shape, -0.45, 5.0);

    const auto objective = [&excesses](const std::vector<double>& p) {
        return gpd_negloglik(p[0], p[1], excesses);
    };
    const SimplexResult opt =
        nelder_mead(objective, {std::log(start.scale), start.shape}, 0.1, 1e-10, 500);
    if (opt.converged && opt.value < 1e12) {
        GpdEstimate est;
        est.scale = std::exp(opt.x[0]);
        est.shape = opt.x[1];
        est.mle_converged = true;
        return est;
    }
    return start;
}

}  // namespace detail

/// Fits the marginal model: threshold at the empirical (1 - tail_prob)
/// quantile, GPD on the excesses by maximum likelihood, full sorted sample
/// as the body. Requires at least 50 exceedances. Fitting notes (MLE
/// fallback, suspicious bounded-tail endpoint) are appended to `warnings`
/// when a sink is supplied.
inline MarginalModel fit_marginal(std::vector<double> x, double tail_prob = 0.025,
                                  std::vector<std::string>* warnings = nullptr) {
    if (!(tail_prob > 0.0 && tail_prob < 0.5)) throw domain_error("tail probability must lie in (0, 0.5)");
    std::sort(x.begin(), x.end());
    MarginalModel model;
    model.tail_prob = tail_prob;
    model.mu_hat = quantile_sorted(x, 1.0 - tail_prob);

    std::vector<double> excesses;
    for (auto it = std::upper_bound(x.begin(), x.end(), model.mu_hat); it != x.end(); ++it)
        excesses.push_back(*it - model.mu_hat);
    if (excesses.size() < 50)
        throw insufficient_data_error("fewer than 50 exceedances above the marginal threshold");

    const detail::GpdEstimate gpd = detail::fit_gpd(std::move(excesses));
    if (!gpd.mle_converged && warnings)
        warnings->push_back("GPD maximum likelihood did not converge; using probability-weighted moments");
    model.gpd_scale = gpd.scale;
    model.gpd_shape = gpd.shape;
    model.body = std::move(x);

    if (model.gpd_shape < 0.0) {
        const double endpoint = model.mu_hat - model.gpd_scale / model.gpd_shape;
        if (endpoint <= model.body.back() && warnings)
            warnings->push_back("fitted GPD upper endpoint does not exceed the sample maximum");
    }
    return model;
}

/// Estimated distribution function: rank-based empirical CDF with an (n+1)
/// denominator below mu_hat, GPD above, clamped to the open interval (0,1).
inline double cdf(const MarginalModel& model, double x) {
    const double n1 = static_cast<double>(model.body.size() + 1);
    if (x <= model.mu_hat) {
        const double k = static_cast<double>(count_leq_sorted(model.body, x));
        // Floor keeps the CDF strictly positive; cap keeps the junction with
        // the GPD piece monotone in the presence of ties at the threshold.
        return std::min(std::max(k, 1.0) / n1, 1.0 - model.tail_prob);
    }
    double survivor;
    if (std::abs(model.gpd_shape) < 1e-8) {
        survivor = std::exp(-(x - model.mu_hat) / model.gpd_scale);
    } else {
        const double t = 1.0 + model.gpd_shape * (x - model.mu_hat) / model.gpd_scale;
        survivor = t > 0.0 ? std::pow(t, -1.0 / model.gpd_shape) : 0.0;
    }
    return std::min(1.0 - model.tail_prob * survivor, 1.0 - 1e-15);
}

/// Quantile function: analytic GPD inversion in the tail, linear
/// interpolation of the order statistics at plotting positions k/(n+1) in
/// the body.
inline double marginal_quantile(const MarginalModel& model, double p) {
    if (!(p > 0.0 && p < 1.0)) throw domain_error("quantile probability must lie in (0,1)");
    if (p >= 1.0 - model.tail_prob) {
        const double ratio = (1.0 - p) / model.tail_prob;
        if (std::abs(model.gpd_shape) < 1e-8) return model.mu_hat - model.gpd_scale * std::log(ratio);
        return model.mu_hat +
               model.gpd_scale / model.gpd_shape * (std::pow(ratio, -model.gpd_shape) - 1.0);
    }
    return quantile_sorted(model.body, p);
}

/// Maps a data-scale value to the Frechet(alpha = 2) scale, z = G^{-1}(F(x)).
inline double to_frechet(const MarginalModel& model, double x) {
    return frechet_quantile(cdf(model, x));
}

/// Inverse of to_frechet, x = F^{-1}(G(z)); requires z > 0. G(z) is nudged
/// into the open interval so extreme z map to the distribution's extremes
/// instead of overflowing the quantile domain.
inline double from_frechet(const MarginalModel& model, double z) {
    if (!(z > 0.0)) throw domain_error("Frechet-scale values must be positive");
    const double p = std::clamp(frechet_cdf(z), 1e-300, 1.0 - 1.1e-16);
    return marginal_quantile(model, p);
}

}  // namespace tlts
