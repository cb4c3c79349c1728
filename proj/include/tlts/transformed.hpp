#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "tlts/errors.hpp"
#include "tlts/random.hpp"

namespace tlts {

/// Softplus transform f(y) = log(1 + exp(y)), the bijection behind the
/// transformed-linear operations. Evaluated in a form that never overflows.
inline double softplus(double y) {
    return y > 0.0 ? y + std::log1p(std::exp(-y)) : std::log1p(std::exp(y));
}

/// Inverse transform f^{-1}(x) = log(exp(x) - 1), defined for x > 0 only.
inline double inv_softplus(double x) {
    if (!(x > 0.0)) throw domain_error("transformed-linear preimage undefined at 0");
    return x > 30.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

/// Transformed-linear addition: f(f^{-1}(x1) + f^{-1}(x2)).
inline double t_add(double x1, double x2) {
    return softplus(inv_softplus(x1) + inv_softplus(x2));
}

/// Transformed-linear scalar multiplication: f(a * f^{-1}(x)).
/// Negative a is allowed; the result collapses toward the light lower tail.
inline double t_scale(double a, double x) {
    return softplus(a * inv_softplus(x));
}

/// CDF of the unit Frechet distribution with tail index 2, G(x) = exp(-x^-2).
inline double frechet_cdf(double x) {
    return x > 0.0 ? std::exp(-1.0 / (x * x)) : 0.0;
}

/// Quantile of G, (-log p)^{-1/2}.
inline double frechet_quantile(double p) {
    return 1.0 / std::sqrt(-std::log(p));
}

/// Noise specification for the generating sequence. The tail index is fixed
/// at 2; the marginal is exactly Frechet, G(x) = exp(-x^-2), so the noise has
/// tail ratio 1 and satisfies the lower-tail condition (it is positive with a
/// superpolynomially light lower tail).
struct NoiseSpec {
    double alpha;
    std::uint64_t seed;

    explicit NoiseSpec(std::uint64_t seed_, double alpha_ = 2.0) : alpha(alpha_), seed(seed_) {
        if (alpha != 2.0) throw domain_error("noise tail index is fixed at 2");
    }
};

/// n iid draws of the noise via the quantile transform Z = (-log U)^{-1/2}.
/// Deterministic given the seed.
inline std::vector<double> sample_noise(const NoiseSpec& spec, std::size_t n) {
    if (n == 0) throw domain_error("sample_noise requires n >= 1");
    RandomStream rng(spec.seed);
    std::vector<double> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = frechet_quantile(rng.uniform());
    return z;
}

}  // namespace tlts
