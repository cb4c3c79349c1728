#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

namespace tlts::detail {

struct SimplexResult {
    std::vector<double> x;
    double value = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
};

/// Nelder-Mead downhill simplex. The objective may return +infinity to mark
/// infeasible points. Stops when the simplex value spread drops below
/// `value_tol` or after `max_iter` iterations.
inline SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                 std::vector<double> start, double step = 0.05,
                                 double value_tol = 1e-13, std::size_t max_iter = 2000) {
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> pts(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += step;
    std::vector<double> vals(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) vals[i] = f(pts[i]);

    SimplexResult result;
    auto record = [&](std::size_t iterations, bool converged) {
        const std::size_t best = static_cast<std::size_t>(
            std::min_element(vals.begin(), vals.end()) - vals.begin());
        result.x = pts[best];
        result.value = vals[best];
        result.iterations = iterations;
        result.converged = converged;
    };

    for (std::size_t iter = 0; iter < max_iter; ++iter) {
        std::vector<std::size_t> order(dim + 1);
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t lo = order.front();
        const std::size_t hi = order.back();
        const std::size_t second_hi = order[dim > 0 ? dim - 1 : 0];

        if (std::isfinite(vals[hi]) && vals[hi] - vals[lo] <= value_tol) {
            record(iter, true);
            return result;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == hi) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += pts[i][k];
        }
        for (double& c : centroid) c /= static_cast<double>(dim);

        auto blend = [&](double t) {
            std::vector<double> p(dim);
            for (std::size_t k = 0; k < dim; ++k) p[k] = centroid[k] + t * (centroid[k] - pts[hi][k]);
            return p;
        };

        std::vector<double> reflected = blend(1.0);
        const double fr = f(reflected);
        if (fr < vals[lo]) {
            std::vector<double> expanded = blend(2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                pts[hi] = std::move(expanded);
                vals[hi] = fe;
            } else {
                pts[hi] = std::move(reflected);
                vals[hi] = fr;
            }
        } else if (fr < vals[second_hi]) {
            pts[hi] = std::move(reflected);
            vals[hi] = fr;
        } else {
            std::vector<double> contracted = blend(-0.5);
            const double fc = f(contracted);
            if (fc < vals[hi]) {
                pts[hi] = std::move(contracted);
                vals[hi] = fc;
            } else {
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == lo) continue;
                    for (std::size_t k = 0; k < dim; ++k) pts[i][k] = pts[lo][k] + 0.5 * (pts[i][k] - pts[lo][k]);
                    vals[i] = f(pts[i]);
                }
            }
        }
    }
    record(max_iter, false);
    return result;
}

}  // namespace tlts::detail
