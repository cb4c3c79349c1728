#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "tlts/errors.hpp"

namespace tlts {

/// Transformed ARMA(p,q) specification: AR coefficients phi_1..phi_p and MA
/// coefficients theta_1..theta_q. The AR polynomial is 1 - phi_1 z - ... -
/// phi_p z^p and the MA polynomial 1 + theta_1 z + ... + theta_q z^q; they
/// may not share a root. p = q = 0 is the pure noise model.
struct ArmaSpec {
    std::vector<double> ar;
    std::vector<double> ma;
};

namespace detail {

/// Roots of c0 + c1 z + ... + cn z^n via companion-matrix eigenvalues.
/// Exact trailing zeros reduce the degree. Degree 0 has no roots.
inline std::vector<std::complex<double>> polynomial_roots(std::vector<double> coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    if (coeffs.size() <= 1) return {};
    const auto n = static_cast<Eigen::Index>(coeffs.size() - 1);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (Eigen::Index i = 0; i < n; ++i)
        companion(i, n - 1) = -coeffs[static_cast<std::size_t>(i)] / coeffs.back();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    std::vector<std::complex<double>> roots(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) roots[static_cast<std::size_t>(i)] = solver.eigenvalues()(i);
    return roots;
}

inline std::vector<std::complex<double>> ar_poly_roots(const std::vector<double>& ar) {
    std::vector<double> c{1.0};
    for (double a : ar) c.push_back(-a);
    return polynomial_roots(std::move(c));
}

inline std::vector<std::complex<double>> ma_poly_roots(const std::vector<double>& ma) {
    std::vector<double> c{1.0};
    for (double b : ma) c.push_back(b);
    return polynomial_roots(std::move(c));
}

inline double min_modulus(const std::vector<std::complex<double>>& roots) {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : roots) m = std::min(m, std::abs(r));
    return m;
}

/// True iff every root lies strictly outside the unit circle. A root within
/// 1e-10 of the circle means no stationary solution exists.
inline bool roots_outside_unit_circle(const std::vector<std::complex<double>>& roots,
                                      const char* boundary_message) {
    bool outside = true;
    for (const auto& r : roots) {
        const double mod = std::abs(r);
        if (std::abs(mod - 1.0) <= 1e-10) throw boundary_error(boundary_message);
        if (mod < 1.0) outside = false;
    }
    return outside;
}

inline void check_no_common_roots(const ArmaSpec& spec) {
    if (spec.ar.empty() || spec.ma.empty()) return;
    const auto ar_roots = ar_poly_roots(spec.ar);
    const auto ma_roots = ma_poly_roots(spec.ma);
    for (const auto& a : ar_roots)
        for (const auto& b : ma_roots)
            if (std::abs(a - b) <= 1e-8)
                throw domain_error("AR and MA polynomials share a common root");
}

}  // namespace detail

/// True iff the AR polynomial has all roots outside the unit circle, so the
/// model admits a causal MA(infinity) representation. A root on the circle
/// (within 1e-10) raises boundary_error: no stationary solution.
inline bool is_causal(const ArmaSpec& spec) {
    return detail::roots_outside_unit_circle(detail::ar_poly_roots(spec.ar),
                                             "AR polynomial root on the unit circle: no stationary solution");
}

/// True iff the MA polynomial has all roots outside the unit circle, so the
/// noise admits an AR(infinity) representation in past observations.
inline bool is_invertible(const ArmaSpec& spec) {
    return detail::roots_outside_unit_circle(detail::ma_poly_roots(spec.ma),
                                             "MA polynomial root on the unit circle: model not invertible");
}

inline void validate_spec(const ArmaSpec& spec) { detail::check_no_common_roots(spec); }

/// Non-fatal identifiability notes. A pure MA(q) with theta_q <= 0 is
/// accepted (fitting may explore such points) but its TPDF coincides with
/// that of a lower-order MA model, so the order is not identified.
inline std::vector<std::string> spec_warnings(const ArmaSpec& spec) {
    std::vector<std::string> warnings;
    if (spec.ar.empty() && !spec.ma.empty() && spec.ma.back() <= 0.0)
        warnings.push_back("theta_q <= 0: the TPDF matches a lower-order MA model");
    return warnings;
}

/// Truncated psi-weight sequence of a causal MA(infinity) representation,
/// psi_0 = 1. Finite sequences (hand-built, or from a pure MA model) are
/// exact: coefficients beyond the stored range are identically zero.
/// Truncations of ARMA models instead carry a geometric decay certificate
/// |psi_j| <= decay_scale * decay_rate^j used to bound the dropped tail.
struct CoefficientSequence {
    std::vector<double> psi;
    bool exact = true;
    double decay_rate = 0.0;
    double decay_scale = 0.0;

    CoefficientSequence() = default;

    /// Treats `coefficients` as the complete sequence (zero beyond the end).
    explicit CoefficientSequence(std::vector<double> coefficients) : psi(std::move(coefficients)) {
        if (psi.empty() || psi[0] != 1.0) throw domain_error("coefficient sequence must start with psi_0 = 1");
    }

    std::size_t size() const { return psi.size(); }

    /// Certified bound on sum_{j > m} |psi_j|.
    double tail_sum_beyond(std::size_t m) const {
        double s = 0.0;
        for (std::size_t j = m + 1; j < psi.size(); ++j) s += std::abs(psi[j]);
        if (exact) return s;
        const std::size_t start = std::max(m + 1, psi.size());
        if (decay_rate >= 1.0) return std::numeric_limits<double>::infinity();
        return s + decay_scale * std::pow(decay_rate, static_cast<double>(start)) / (1.0 - decay_rate);
    }
};

namespace detail {

inline std::vector<double> psi_recursion(const ArmaSpec& spec, std::size_t n) {
    std::vector<double> psi(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double v = 0.0;
        if (j == 0)
            v = 1.0;
        else if (j <= spec.ma.size())
            v = spec.ma[j - 1];
        for (std::size_t k = 1; k <= spec.ar.size() && k <= j; ++k)
            v += spec.ar[k - 1] * psi[j - k];
        psi[j] = v;
    }
    return psi;
}

inline void attach_decay_certificate(CoefficientSequence& seq, const ArmaSpec& spec) {
    if (spec.ar.empty()) return;  // finite sequence, already exact
    seq.exact = false;
    const double min_mod = min_modulus(ar_poly_roots(spec.ar));
    seq.decay_rate = 1.0 / min_mod + 1e-6;
    double scale = 0.0;
    double rpow = 1.0;
    for (std::size_t j = 0; j < seq.psi.size(); ++j) {
        if (rpow < 1e-280) break;  // beyond here both psi_j and r^j underflow
        scale = std::max(scale, std::abs(seq.psi[j]) / rpow);
        rpow *= seq.decay_rate;
    }
    seq.decay_scale = scale;
}

}  // namespace detail

/// First n psi-weights of the causal representation, by the recursion
/// psi_j = theta_j + sum_k phi_k psi_{j-k} with theta_0 = 1, theta_j = 0 for
/// j > q and psi_j = 0 for j < 0.
inline CoefficientSequence psi_weights(const ArmaSpec& spec, std::size_t n) {
    validate_spec(spec);
    if (!is_causal(spec)) throw causality_error("model is not causal: AR root inside the unit circle");
    if (n < std::max(spec.ar.size(), spec.ma.size() + 1))
        throw domain_error("psi truncation shorter than max(p, q+1)");
    CoefficientSequence seq;
    seq.psi = detail::psi_recursion(spec, n);
    // Pure MA stays exact (psi_j = 0 beyond q); ARMA truncations get a
    // geometric decay certificate from the AR roots.
    if (!spec.ar.empty()) detail::attach_decay_certificate(seq, spec);
    return seq;
}

/// First n pi-weights of the invertible representation, by the recursion
/// pi_j = -phi_j - sum_k theta_k pi_{j-k} with phi_0 = -1, phi_j = 0 for
/// j > p and pi_j = 0 for j < 0.
inline std::vector<double> pi_weights(const ArmaSpec& spec, std::size_t n) {
    validate_spec(spec);
    if (!is_invertible(spec)) throw invertibility_error("model is not invertible: MA root inside the unit circle");
    if (n == 0) throw domain_error("pi truncation must be nonempty");
    std::vector<double> pi(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double v = 0.0;
        if (j == 0)
            v = 1.0;
        else if (j <= spec.ar.size())
            v = -spec.ar[j - 1];
        for (std::size_t k = 1; k <= spec.ma.size() && k <= j; ++k)
            v -= spec.ma[k - 1] * pi[j - k];
        pi[j] = v;
    }
    return pi;
}

/// Truncation length chosen so the certified tail sum_{j > n} |psi_j| drops
/// below 1e-12, capped at 10,000. Pure MA models are exact at q+1.
inline std::size_t adaptive_truncation_length(const ArmaSpec& spec) {
    constexpr std::size_t kCap = 10000;
    constexpr double kTailTarget = 1e-12;
    if (spec.ar.empty()) return spec.ma.size() + 1;
    const std::size_t probe = std::max<std::size_t>({256, spec.ar.size(), spec.ma.size() + 1});
    CoefficientSequence seq = psi_weights(spec, probe);
    if (seq.decay_rate >= 1.0) return kCap;
    if (seq.decay_scale == 0.0) return probe;
    const double needed =
        std::log(kTailTarget * (1.0 - seq.decay_rate) / seq.decay_scale) / std::log(seq.decay_rate);
    std::size_t n = probe;
    if (needed > static_cast<double>(probe))
        n = needed >= static_cast<double>(kCap) ? kCap : static_cast<std::size_t>(needed) + 1;
    // The certificate constant can grow slightly on the longer range; verify
    // and extend once if necessary.
    CoefficientSequence full = psi_weights(spec, n);
    while (n < kCap && full.tail_sum_beyond(n - 1) > kTailTarget) {
        n = std::min(kCap, n * 2);
        full = psi_weights(spec, n);
    }
    return n;
}

/// Psi-weights at the adaptive truncation length.
inline CoefficientSequence psi_weights_adaptive(const ArmaSpec& spec) {
    return psi_weights(spec, adaptive_truncation_length(spec));
}

/// Lag-indexed TPDF values sigma(0..H); sigma(0) is the tail ratio.
struct Tpdf {
    std::vector<double> sigma;

    std::size_t max_lag() const { return sigma.empty() ? 0 : sigma.size() - 1; }
};

/// Tail ratio sum_j max(psi_j, 0)^2.
inline double tail_ratio(const CoefficientSequence& seq) {
    double s = 0.0;
    for (double v : seq.psi)
        if (v > 0.0) s += v * v;
    return s;
}

/// TPDF of the MA(infinity) representation, sigma(h) = sum_j psi_j^(0)
/// psi_{j+h}^(0) evaluated over the stored truncation. The dropped tail of
/// sigma is bounded by the squared certified coefficient tail; the bound must
/// clear 1e-9 or the truncation is rejected.
inline Tpdf tpdf_numeric(const CoefficientSequence& seq, std::size_t max_lag) {
    const std::size_t n = seq.psi.size();
    if (!seq.exact) {
        // Every dropped product pairs two coefficients beyond index n-1-max_lag,
        // so the dropped part of sigma is bounded by the squared tail sum.
        const std::size_t m = n > max_lag + 1 ? n - max_lag - 1 : 1;
        const double tail = seq.tail_sum_beyond(m - 1);
        if (!(tail * tail <= 1e-9))
            throw truncation_error("psi truncation too short to certify the TPDF at the requested lags");
    }
    std::vector<double> pos(n);
    for (std::size_t j = 0; j < n; ++j) pos[j] = seq.psi[j] > 0.0 ? seq.psi[j] : 0.0;
    Tpdf out;
    out.sigma.assign(max_lag + 1, 0.0);
    for (std::size_t h = 0; h <= max_lag; ++h) {
        double s = 0.0;
        for (std::size_t j = 0; j + h < n; ++j) s += pos[j] * pos[j + h];
        out.sigma[h] = s;
    }
    return out;
}

/// Inner product of two elements of the MA(infinity) space, sum_j
/// psi_{t,j} psi_{s,j} over the common truncation.
inline double inner_product(const CoefficientSequence& a, const CoefficientSequence& b) {
    const std::size_t n = std::min(a.psi.size(), b.psi.size());
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += a.psi[j] * b.psi[j];
    return s;
}

/// Lag-h inner product gamma(h) = sum_j psi_j psi_{j+h}. Equals the TPDF
/// sigma(h) when every coefficient is nonnegative.
inline double gamma_lag(const CoefficientSequence& seq, std::size_t h) {
    double s = 0.0;
    for (std::size_t j = 0; j + h < seq.psi.size(); ++j) s += seq.psi[j] * seq.psi[j + h];
    return s;
}

namespace detail {

/// Normalized ARMA(1,1) TPDF for lags 1..max_lag. Uses the continuous
/// extension sigma(h) = 0 on phi + theta = 0 (the representation degenerates
/// to pure noise there). The four sign quadrants:
///   phi >= 0, phi+theta > 0:  (phi+theta) phi^(h-1) (1+phi theta) / (1+2 phi theta+theta^2)
///   phi >= 0, phi+theta < 0:  0
///   phi <  0, phi+theta > 0:  h even (phi+theta)^2 phi^h / D, h odd (phi+theta) phi^(h-1) (1-phi^4) / D,
///                             D = 1 - phi^4 + (phi+theta)^2
///   phi <  0, phi+theta < 0:  h even (phi+theta) phi^(h-1) (1+theta phi^3) / (1+phi^2 theta^2+2 phi^3 theta), h odd 0
inline void arma11_sigma(double phi, double theta, std::size_t max_lag, std::vector<double>& out) {
    out.assign(max_lag, 0.0);
    const double s = phi + theta;
    if (s == 0.0) return;
    if (phi >= 0.0) {
        if (s < 0.0) return;
        const double c = s * (1.0 + phi * theta) / (1.0 + 2.0 * phi * theta + theta * theta);
        double p = 1.0;  // phi^(h-1)
        for (std::size_t h = 1; h <= max_lag; ++h) {
            out[h - 1] = c * p;
            p *= phi;
        }
        return;
    }
    const double phi4 = phi * phi * phi * phi;
    if (s > 0.0) {
        const double d = 1.0 - phi4 + s * s;
        double p = 1.0;  // phi^(h-1)
        for (std::size_t h = 1; h <= max_lag; ++h) {
            out[h - 1] = (h % 2 == 0) ? s * s * (p * phi) / d : s * p * (1.0 - phi4) / d;
            p *= phi;
        }
    } else {
        const double d = 1.0 + phi * phi * theta * theta + 2.0 * phi * phi * phi * theta;
        double p = 1.0;  // phi^(h-1)
        for (std::size_t h = 1; h <= max_lag; ++h) {
            if (h % 2 == 0) out[h - 1] = s * p * (1.0 + theta * phi * phi * phi) / d;
            p *= phi;
        }
    }
}

inline void ar1_sigma(double phi, std::size_t max_lag, std::vector<double>& out) {
    out.assign(max_lag, 0.0);
    double p = 1.0;
    for (std::size_t h = 1; h <= max_lag; ++h) {
        p *= phi;
        out[h - 1] = p > 0.0 ? p : 0.0;
    }
}

inline void ma1_sigma(double theta, std::size_t max_lag, std::vector<double>& out) {
    out.assign(max_lag, 0.0);
    if (max_lag >= 1 && theta > 0.0) out[0] = theta / (1.0 + theta * theta);
}

}  // namespace detail

/// Closed-form TPDF with tail-ratio-1 normalization (sigma(0) = 1) for the
/// three fitted families: MA(1), AR(1) and ARMA(1,1). For ARMA(1,1) the
/// parameters must satisfy phi + theta != 0.
inline Tpdf tpdf_closed(const ArmaSpec& spec, std::size_t max_lag) {
    const std::size_t p = spec.ar.size();
    const std::size_t q = spec.ma.size();
    std::vector<double> tail;
    if (p == 0 && q == 1) {
        detail::ma1_sigma(spec.ma[0], max_lag, tail);
    } else if (p == 1 && q == 0) {
        if (std::abs(spec.ar[0]) >= 1.0) throw causality_error("AR(1) closed form requires |phi| < 1");
        detail::ar1_sigma(spec.ar[0], max_lag, tail);
    } else if (p == 1 && q == 1) {
        if (std::abs(spec.ar[0]) >= 1.0) throw causality_error("ARMA(1,1) closed form requires |phi| < 1");
        if (spec.ar[0] + spec.ma[0] == 0.0)
            throw domain_error("ARMA(1,1) closed form requires phi + theta != 0");
        detail::arma11_sigma(spec.ar[0], spec.ma[0], max_lag, tail);
    } else {
        throw unsupported_error("closed-form TPDF covers MA(1), AR(1) and ARMA(1,1) only");
    }
    Tpdf out;
    out.sigma.reserve(max_lag + 1);
    out.sigma.push_back(1.0);
    out.sigma.insert(out.sigma.end(), tail.begin(), tail.end());
    return out;
}

}  // namespace tlts
