#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "tlts/arma.hpp"
#include "tlts/errors.hpp"
#include "tlts/random.hpp"
#include "tlts/transformed.hpp"

namespace tlts {

/// Which tail balance the plain-linear baseline noise uses: positive-only
/// noise (Frechet, upper tail only) or sign-symmetrized Frechet noise with
/// equal mass in both tails.
enum class NoiseDomain { positive_only, two_sided };

/// Request for one realization of a transformed-linear model. The model is
/// either an ARMA specification or an explicit coefficient sequence; burn-in
/// defaults to the coefficient truncation length so every emitted value uses
/// a full coefficient window.
struct SimulationRequest {
    std::variant<ArmaSpec, CoefficientSequence> model;
    std::size_t n = 0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> burn_in;
};

namespace detail {

/// ARMA recursion with zero initial conditions: y_t = sum phi_k y_{t-k} +
/// v_t + sum theta_k v_{t-k}. Equals the truncated convolution of the psi
/// weights with the available noise window.
inline std::vector<double> arma_filter(const ArmaSpec& spec, const std::vector<double>& noise) {
    const std::size_t p = spec.ar.size();
    const std::size_t q = spec.ma.size();
    std::vector<double> y(noise.size(), 0.0);
    for (std::size_t t = 0; t < noise.size(); ++t) {
        double v = noise[t];
        for (std::size_t k = 1; k <= q && k <= t; ++k) v += spec.ma[k - 1] * noise[t - k];
        for (std::size_t k = 1; k <= p && k <= t; ++k) v += spec.ar[k - 1] * y[t - k];
        y[t] = v;
    }
    return y;
}

inline std::vector<double> convolve(const std::vector<double>& psi, const std::vector<double>& noise) {
    std::vector<double> y(noise.size(), 0.0);
    for (std::size_t t = 0; t < noise.size(); ++t) {
        double v = 0.0;
        for (std::size_t j = 0; j < psi.size() && j <= t; ++j) v += psi[j] * noise[t - j];
        y[t] = v;
    }
    return y;
}

}  // namespace detail

/// Realization of the transformed-linear model. The preimage series
/// y_t = sum_j psi_j f^{-1}(z_{t-j}) is built by linear filtering and the
/// transform f applied once at the end; this equals the iterated
/// t_add/t_scale evaluation because the operations are defined through
/// preimages. The first burn-in values are discarded.
inline std::vector<double> simulate_transformed(const SimulationRequest& req) {
    if (req.n == 0) throw domain_error("simulation length must be at least 1");
    const bool have_spec = std::holds_alternative<ArmaSpec>(req.model);
    std::size_t window = 0;
    if (have_spec) {
        const auto& spec = std::get<ArmaSpec>(req.model);
        validate_spec(spec);
        if (!is_causal(spec)) throw causality_error("cannot simulate a noncausal model");
        window = adaptive_truncation_length(spec);
    } else {
        window = std::get<CoefficientSequence>(req.model).psi.size();
    }
    const std::size_t burn_in = req.burn_in.value_or(window);

    std::vector<double> noise = sample_noise(NoiseSpec(req.seed), req.n + burn_in);
    for (double& v : noise) v = inv_softplus(v);

    std::vector<double> preimage = have_spec
        ? detail::arma_filter(std::get<ArmaSpec>(req.model), noise)
        : detail::convolve(std::get<CoefficientSequence>(req.model).psi, noise);

    std::vector<double> out(req.n);
    for (std::size_t t = 0; t < req.n; ++t) out[t] = softplus(preimage[burn_in + t]);
    return out;
}

/// Classical Gaussian-noise ARMA realization (comparison baseline).
inline std::vector<double> simulate_gaussian_arma(const ArmaSpec& spec, std::size_t n, std::uint64_t seed) {
    if (n == 0) throw domain_error("simulation length must be at least 1");
    validate_spec(spec);
    if (!is_causal(spec)) throw causality_error("cannot simulate a noncausal model");
    const std::size_t burn_in = adaptive_truncation_length(spec);
    RandomStream rng(seed);
    std::vector<double> noise(n + burn_in);
    for (double& v : noise) v = rng.normal();
    std::vector<double> y = detail::arma_filter(spec, noise);
    return {y.begin() + static_cast<std::ptrdiff_t>(burn_in), y.end()};
}

/// Ordinary (untransformed) linear filter of heavy-tailed noise. The
/// positive-only domain keeps Frechet noise and requires every psi weight to
/// be nonnegative; the two-sided domain gives the Frechet magnitudes an
/// independent uniform sign, putting mass 1/2 in each tail.
inline std::vector<double> simulate_linear_rv(const ArmaSpec& spec, std::size_t n, std::uint64_t seed,
                                              NoiseDomain domain) {
    if (n == 0) throw domain_error("simulation length must be at least 1");
    validate_spec(spec);
    if (!is_causal(spec)) throw causality_error("cannot simulate a noncausal model");
    const std::size_t burn_in = adaptive_truncation_length(spec);
    if (domain == NoiseDomain::positive_only) {
        const CoefficientSequence psi = psi_weights(spec, std::max<std::size_t>(burn_in, 1));
        for (double v : psi.psi)
            if (v < 0.0)
                throw domain_error("positive-only linear model requires nonnegative psi weights");
    }
    RandomStream rng(seed);
    std::vector<double> noise(n + burn_in);
    for (double& v : noise) {
        v = frechet_quantile(rng.uniform());
        if (domain == NoiseDomain::two_sided) v *= rng.sign();
    }
    std::vector<double> y = detail::arma_filter(spec, noise);
    return {y.begin() + static_cast<std::ptrdiff_t>(burn_in), y.end()};
}

}  // namespace tlts
