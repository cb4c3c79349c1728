#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tlts/arma.hpp"
#include "tlts/errors.hpp"
#include "tlts/estimate.hpp"
#include "tlts/optim.hpp"

namespace tlts {

enum class ModelFamily { ma1, ar1, arma11 };

inline const char* family_name(ModelFamily f) {
    switch (f) {
        case ModelFamily::ma1: return "MA1";
        case ModelFamily::ar1: return "AR1";
        case ModelFamily::arma11: return "ARMA11";
    }
    return "?";
}

struct FitFlags {
    bool boundary = false;         // an estimate pinned at the parameter box edge
    bool zero_tpdf = false;        // fitted model TPDF is identically zero over the fit lags
    bool identifiability = false;  // other parameters reproduce the same TPDF
};

/// Result of least-squares fitting one model family to an empirical TPDF.
/// Parameter order: MA1 {theta}, AR1 {phi}, ARMA11 {phi, theta}.
struct FitResult {
    ModelFamily family = ModelFamily::ma1;
    std::vector<double> params;
    double ss = std::numeric_limits<double>::infinity();
    FitFlags flags;
    bool failed = false;
    std::string message;
};

namespace detail {

/// Classical ARMA(1,1) autocorrelation, rho(h) = (phi+theta) phi^(h-1)
/// (1+phi theta) / (1+2 phi theta+theta^2). Coincides with the normalized
/// lag inner product gamma(h)/gamma(0) of the psi weights.
inline void arma11_acf(double phi, double theta, std::size_t max_lag, std::vector<double>& out) {
    out.assign(max_lag, 0.0);
    const double denom = 1.0 + 2.0 * phi * theta + theta * theta;
    if (denom == 0.0) return;
    const double c = (phi + theta) * (1.0 + phi * theta) / denom;
    double p = 1.0;
    for (std::size_t h = 1; h <= max_lag; ++h) {
        out[h - 1] = c * p;
        p *= phi;
    }
}

using SigmaEvaluator = std::function<void(const std::vector<double>&, std::size_t, std::vector<double>&)>;

struct LsqFit {
    std::vector<double> params;
    double ss = std::numeric_limits<double>::infinity();
};

inline double param_norm2(const std::vector<double>& p) {
    double s = 0.0;
    for (double v : p) s += v * v;
    return s;
}

/// Grid values i*step clamped into [lo, hi], endpoints included.
inline std::vector<double> grid_axis(double lo, double hi, double step) {
    std::vector<double> axis;
    const long first = static_cast<long>(std::ceil(lo / step - 1e-9));
    const long last = static_cast<long>(std::floor(hi / step + 1e-9));
    for (long i = first; i <= last; ++i) axis.push_back(std::clamp(static_cast<double>(i) * step, lo, hi));
    if (axis.empty() || axis.front() > lo) axis.insert(axis.begin(), lo);
    if (axis.back() < hi) axis.push_back(hi);
    return axis;
}

/// Dense grid scan followed by simplex refinement. Exact SS ties are broken
/// toward the smaller parameter L2 norm, and the refinement stage never
/// replaces the grid result with a worse one.
inline LsqFit least_squares_fit(const std::vector<double>& target, const SigmaEvaluator& eval,
                                const std::vector<std::vector<double>>& axes,
                                const std::vector<std::pair<double, double>>& box) {
    const std::size_t dim = axes.size();
    const std::size_t lags = target.size();
    std::vector<double> model;

    const auto objective = [&](const std::vector<double>& params) {
        for (std::size_t k = 0; k < dim; ++k)
            if (params[k] < box[k].first || params[k] > box[k].second)
                return std::numeric_limits<double>::infinity();
        eval(params, lags, model);
        double ss = 0.0;
        for (std::size_t i = 0; i < lags; ++i) {
            const double d = target[i] - model[i];
            ss += d * d;
        }
        return ss;
    };

    LsqFit best;
    double best_norm = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> point(dim);
    for (;;) {
        for (std::size_t k = 0; k < dim; ++k) point[k] = axes[k][idx[k]];
        const double ss = objective(point);
        const double norm = param_norm2(point);
        if (ss < best.ss || (ss == best.ss && norm < best_norm)) {
            best.ss = ss;
            best.params = point;
            best_norm = norm;
        }
        std::size_t k = 0;
        while (k < dim && ++idx[k] == axes[k].size()) idx[k++] = 0;
        if (k == dim) break;
    }
    if (!std::isfinite(best.ss)) throw fit_error("empty feasible parameter set");

    const SimplexResult refined = nelder_mead(objective, best.params, 0.005, 1e-14, 400);
    const double refined_norm = param_norm2(refined.x);
    if (refined.value < best.ss || (refined.value == best.ss && refined_norm < best_norm)) {
        best.params = refined.x;
        best.ss = refined.value;
    }
    return best;
}

inline SigmaEvaluator family_evaluator(ModelFamily family) {
    switch (family) {
        case ModelFamily::ma1:
            return [](const std::vector<double>& p, std::size_t lags, std::vector<double>& out) {
                ma1_sigma(p[0], lags, out);
            };
        case ModelFamily::ar1:
            return [](const std::vector<double>& p, std::size_t lags, std::vector<double>& out) {
                ar1_sigma(p[0], lags, out);
            };
        case ModelFamily::arma11:
            return [](const std::vector<double>& p, std::size_t lags, std::vector<double>& out) {
                arma11_sigma(p[0], p[1], lags, out);
            };
    }
    throw unsupported_error("unknown model family");
}

}  // namespace detail

/// Least-squares fit of a model family's closed-form TPDF to the empirical
/// TPDF over lags 1..fit_lags: dense 0.01 grid, then simplex refinement.
/// Parameter boxes: theta in [0,1] for MA(1) (sigma(1) = theta/(1+theta^2)
/// is symmetric under theta -> 1/theta, so nothing above 1 is lost),
/// |phi| <= 0.999999 and |theta| <= 0.999999 otherwise.
inline FitResult fit_model(const TpdfEstimate& est, ModelFamily family, std::size_t fit_lags = 30) {
    if (est.max_lag() < fit_lags)
        throw insufficient_data_error("empirical TPDF has fewer lags than the fit range");
    if (fit_lags == 0) throw domain_error("fit range must include at least one lag");
    const std::vector<double> target(est.sigma_hat.begin(),
                                     est.sigma_hat.begin() + static_cast<std::ptrdiff_t>(fit_lags));

    constexpr double kEdge = 0.999999;
    std::vector<std::vector<double>> axes;
    std::vector<std::pair<double, double>> box;
    switch (family) {
        case ModelFamily::ma1:
            axes = {detail::grid_axis(0.0, 1.0, 0.01)};
            box = {{0.0, 1.0}};
            break;
        case ModelFamily::ar1:
            axes = {detail::grid_axis(-0.99, 0.99, 0.01)};
            box = {{-kEdge, kEdge}};
            break;
        case ModelFamily::arma11:
            axes = {detail::grid_axis(-0.99, 0.99, 0.01), detail::grid_axis(-0.99, 0.99, 0.01)};
            box = {{-kEdge, kEdge}, {-kEdge, kEdge}};
            break;
    }

    const detail::SigmaEvaluator eval = detail::family_evaluator(family);
    const detail::LsqFit lsq = detail::least_squares_fit(target, eval, axes, box);

    FitResult result;
    result.family = family;
    result.params = lsq.params;
    result.ss = lsq.ss;

    for (std::size_t k = 0; k < box.size(); ++k)
        if (std::abs(result.params[k] - box[k].first) <= 1e-6 ||
            std::abs(result.params[k] - box[k].second) <= 1e-6)
            result.flags.boundary = true;

    std::vector<double> model;
    eval(result.params, fit_lags, model);
    result.flags.zero_tpdf = std::all_of(model.begin(), model.end(), [](double v) { return v == 0.0; });
    if (family == ModelFamily::arma11) {
        // Degenerate corners where distinct parameters share one TPDF: the
        // all-zero quadrant, phi near 0 (collapses to MA(1)) and
        // phi + theta near 0 (AR and MA parts cancel).
        const double phi = result.params[0];
        const double theta = result.params[1];
        result.flags.identifiability =
            result.flags.zero_tpdf || std::abs(phi) <= 0.005 || std::abs(phi + theta) <= 0.005;
    }
    return result;
}

/// Fits all three families and ranks them by SS ascending. Per-family
/// failures become flagged entries; the set always comes back complete.
inline std::vector<FitResult> fit_all(const TpdfEstimate& est, std::size_t fit_lags = 30) {
    std::vector<FitResult> results;
    for (ModelFamily family : {ModelFamily::ma1, ModelFamily::ar1, ModelFamily::arma11}) {
        try {
            results.push_back(fit_model(est, family, fit_lags));
        } catch (const error& e) {
            FitResult failure;
            failure.family = family;
            failure.failed = true;
            failure.message = e.what();
            results.push_back(failure);
        }
    }
    std::stable_sort(results.begin(), results.end(),
                     [](const FitResult& a, const FitResult& b) { return a.ss < b.ss; });
    return results;
}

}  // namespace tlts
