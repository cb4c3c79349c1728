#include <Eigen/Eigenvalues>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "tlts/arma.hpp"

using namespace tlts;

namespace {

// Independent geometric-series oracle for the normalized ARMA(1,1) TPDF in
// the all-positive-coefficient quadrant (phi > 0, phi + theta > 0):
//   sigma(h) = [s phi^(h-1) + s^2 phi^h / (1-phi^2)] / [1 + s^2 / (1-phi^2)].
double arma11_quadrant1_oracle(double phi, double theta, int h) {
    const double s = phi + theta;
    const double num = s * std::pow(phi, h - 1) + s * s * std::pow(phi, h) / (1.0 - phi * phi);
    const double denom = 1.0 + s * s / (1.0 - phi * phi);
    return num / denom;
}

double min_toeplitz_eigenvalue(const Tpdf& tpdf) {
    const auto n = static_cast<Eigen::Index>(tpdf.sigma.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = tpdf.sigma[static_cast<std::size_t>(std::abs(i - j))];
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues().minCoeff();
}

}  // namespace

TEST_CASE("psi weight recursion", "[arma]") {
    const auto ar1 = psi_weights(ArmaSpec{{0.9}, {}}, 50);
    for (int j = 0; j < 20; ++j) CHECK(ar1.psi[j] == Catch::Approx(std::pow(0.9, j)).epsilon(1e-13));

    const double phi = 0.93, theta = -0.51;
    const auto arma11 = psi_weights(ArmaSpec{{phi}, {theta}}, 50);
    CHECK(arma11.psi[0] == 1.0);
    for (int j = 1; j < 30; ++j)
        CHECK(arma11.psi[j] == Catch::Approx((phi + theta) * std::pow(phi, j - 1)).epsilon(1e-12));

    // Hand-run recursion for ARMA(2,1).
    const auto arma21 = psi_weights(ArmaSpec{{0.5, 0.2}, {0.4}}, 10);
    CHECK(arma21.psi[0] == 1.0);
    CHECK(arma21.psi[1] == Catch::Approx(0.9).epsilon(1e-15));
    CHECK(arma21.psi[2] == Catch::Approx(0.65).epsilon(1e-15));
    CHECK(arma21.psi[3] == Catch::Approx(0.505).epsilon(1e-15));

    CHECK_THROWS_AS(psi_weights(ArmaSpec{{1.1}, {}}, 10), causality_error);
    CHECK_THROWS_AS(psi_weights(ArmaSpec{{0.5, 0.2}, {0.4}}, 1), domain_error);
}

TEST_CASE("pi weight recursion", "[arma]") {
    const auto ma1 = pi_weights(ArmaSpec{{}, {0.5}}, 4);
    CHECK(ma1[0] == 1.0);
    CHECK(ma1[1] == Catch::Approx(-0.5).epsilon(1e-15));
    CHECK(ma1[2] == Catch::Approx(0.25).epsilon(1e-15));
    CHECK(ma1[3] == Catch::Approx(-0.125).epsilon(1e-15));

    const auto ar1 = pi_weights(ArmaSpec{{0.9}, {}}, 6);
    CHECK(ar1[0] == 1.0);
    CHECK(ar1[1] == Catch::Approx(-0.9).epsilon(1e-15));
    for (int j = 2; j < 6; ++j) CHECK(ar1[j] == 0.0);

    // ARMA(1,1) inversion: pi_j = -(phi+theta)(-theta)^(j-1) for j >= 1.
    const double phi = 0.4, theta = 0.6;
    const auto arma11 = pi_weights(ArmaSpec{{phi}, {theta}}, 20);
    CHECK(arma11[0] == 1.0);
    for (int j = 1; j < 20; ++j)
        CHECK(arma11[j] == Catch::Approx(-(phi + theta) * std::pow(-theta, j - 1)).margin(1e-14));

    CHECK_THROWS_AS(pi_weights(ArmaSpec{{}, {1.4}}, 10), invertibility_error);
}

TEST_CASE("causality and invertibility", "[arma]") {
    CHECK(is_causal(ArmaSpec{{0.9}, {}}));
    CHECK_FALSE(is_causal(ArmaSpec{{1.1}, {}}));
    CHECK_FALSE(is_causal(ArmaSpec{{0.5, 0.6}, {}}));  // root inside the unit circle
    CHECK(is_causal(ArmaSpec{{}, {}}));

    CHECK(is_invertible(ArmaSpec{{}, {0.5}}));
    CHECK_FALSE(is_invertible(ArmaSpec{{}, {-1.2}}));

    CHECK_THROWS_AS(is_causal(ArmaSpec{{1.0}, {}}), boundary_error);
    CHECK_THROWS_AS(is_causal(ArmaSpec{{1.0 + 1e-12}, {}}), boundary_error);
    CHECK_THROWS_AS(is_invertible(ArmaSpec{{}, {1.0}}), boundary_error);

    // AR and MA polynomials must not share a root.
    CHECK_THROWS_AS(validate_spec(ArmaSpec{{0.5}, {-0.5}}), domain_error);
    CHECK_THROWS_AS(psi_weights(ArmaSpec{{0.5}, {-0.5}}, 10), domain_error);
    CHECK_NOTHROW(validate_spec(ArmaSpec{{0.5}, {0.5}}));
}

TEST_CASE("numeric TPDF from psi weights", "[arma]") {
    const auto ma1 = tpdf_numeric(psi_weights(ArmaSpec{{}, {1.0}}, 10), 5);
    CHECK(ma1.sigma[0] == 2.0);
    CHECK(ma1.sigma[1] == 1.0);
    for (int h = 2; h <= 5; ++h) CHECK(ma1.sigma[h] == 0.0);
    CHECK(ma1.sigma[1] / ma1.sigma[0] == Catch::Approx(1.0 / (1.0 + 1.0)).epsilon(1e-15));

    const auto ar1 = tpdf_numeric(psi_weights_adaptive(ArmaSpec{{0.9}, {}}), 30);
    for (int h = 0; h <= 30; ++h)
        CHECK(ar1.sigma[h] / ar1.sigma[0] == Catch::Approx(std::pow(0.9, h)).margin(1e-10));

    const auto mixed = tpdf_numeric(CoefficientSequence({1.0, -0.5, 0.25}), 3);
    CHECK(mixed.sigma[1] == 0.0);
    CHECK(mixed.sigma[2] == 0.25);
    CHECK(mixed.sigma[3] == 0.0);

    // An uncertified truncation of a persistent model is rejected.
    CHECK_THROWS_AS(tpdf_numeric(psi_weights(ArmaSpec{{0.999}, {}}, 300), 30), truncation_error);
}

TEST_CASE("closed-form TPDFs", "[arma]") {
    const auto ma1 = tpdf_closed(ArmaSpec{{}, {1.0}}, 5);
    CHECK(ma1.sigma[0] == 1.0);
    CHECK(ma1.sigma[1] == Catch::Approx(0.5).epsilon(1e-15));
    CHECK(ma1.sigma[2] == 0.0);
    CHECK(tpdf_closed(ArmaSpec{{}, {-0.4}}, 3).sigma[1] == 0.0);

    const auto table1 = tpdf_closed(ArmaSpec{{0.93}, {-0.51}}, 3);
    CHECK(table1.sigma[1] == Catch::Approx(arma11_quadrant1_oracle(0.93, -0.51, 1)).epsilon(1e-14));
    CHECK(table1.sigma[1] == Catch::Approx(0.70880898876404494).epsilon(1e-14));
    CHECK(table1.sigma[2] == Catch::Approx(arma11_quadrant1_oracle(0.93, -0.51, 2)).epsilon(1e-14));

    // phi < 0, phi+theta > 0: odd lags keep only the cross term, even lags
    // only the matched-sign tail. Hand-run values from the psi series
    // psi_j = 0.3 (-0.5)^(j-1), zeroing the negative entries.
    const auto mixed = tpdf_closed(ArmaSpec{{-0.5}, {0.8}}, 4);
    CHECK(mixed.sigma[1] == Catch::Approx(0.3 * 0.9375 / (0.9375 + 0.09)).epsilon(1e-14));
    CHECK(mixed.sigma[1] == Catch::Approx(0.2737).epsilon(1e-3));
    CHECK(mixed.sigma[2] == Catch::Approx(0.09 * 0.25 / (0.9375 + 0.09)).epsilon(1e-14));

    // phi < 0, phi+theta < 0: odd lags vanish, even lags survive.
    // By hand for (phi, theta) = (-0.5, -0.2): sigma(2) = 0.35875 / 1.06.
    const auto negative = tpdf_closed(ArmaSpec{{-0.5}, {-0.2}}, 4);
    CHECK(negative.sigma[1] == 0.0);
    CHECK(negative.sigma[3] == 0.0);
    CHECK(negative.sigma[2] == Catch::Approx(0.35875 / 1.06).epsilon(1e-14));

    CHECK_THROWS_AS(tpdf_closed(ArmaSpec{{0.5, 0.2}, {0.4}}, 5), unsupported_error);
    CHECK_THROWS_AS(tpdf_closed(ArmaSpec{{0.5}, {-0.5}}, 5), domain_error);
    CHECK_THROWS_AS(tpdf_closed(ArmaSpec{{1.2}, {0.5}}, 5), causality_error);
}

TEST_CASE("closed form equals the normalized numeric TPDF", "[arma]") {
    std::mt19937_64 gen(31);
    std::uniform_real_distribution<double> coeff(-0.99, 0.99);
    int quadrants[4] = {0, 0, 0, 0};
    for (int rep = 0; rep < 250; ++rep) {
        const double phi = coeff(gen);
        const double theta = coeff(gen);
        if (std::abs(phi + theta) <= 1e-3) continue;
        quadrants[(phi > 0 ? 0 : 2) + (phi + theta > 0 ? 0 : 1)]++;
        const auto closed = tpdf_closed(ArmaSpec{{phi}, {theta}}, 30);
        const auto numeric = tpdf_numeric(psi_weights(ArmaSpec{{phi}, {theta}}, 2000), 30);
        CHECK(numeric.sigma[0] > 0.0);
        for (int h = 0; h <= 30; ++h) {
            CHECK(std::abs(closed.sigma[h] - numeric.sigma[h] / numeric.sigma[0]) <= 1e-8);
            CHECK(closed.sigma[h] >= 0.0);
            CHECK(closed.sigma[h] <= closed.sigma[0]);
            CHECK(numeric.sigma[h] >= 0.0);
            CHECK(numeric.sigma[h] <= numeric.sigma[0]);
        }
    }
    for (int q = 0; q < 4; ++q) CHECK(quadrants[q] > 0);
}

TEST_CASE("MA(q) TPDF cuts off beyond q", "[arma]") {
    std::mt19937_64 gen(37);
    std::uniform_real_distribution<double> coeff(-0.9, 0.9);
    std::uniform_int_distribution<int> order(1, 8);
    for (int rep = 0; rep < 50; ++rep) {
        const int q = order(gen);
        std::vector<double> ma(q);
        for (double& v : ma) v = coeff(gen);
        ma.back() = std::abs(ma.back()) + 0.05;  // theta_q > 0 keeps the order identified
        const auto tpdf = tpdf_numeric(psi_weights(ArmaSpec{{}, ma}, q + 1), 2 * q + 4);
        for (int h = q + 1; h <= 2 * q + 4; ++h) CHECK(tpdf.sigma[h] == 0.0);
    }
}

TEST_CASE("AR(1) closed form across the parameter range", "[arma]") {
    for (double phi : {-0.99, -0.7, -0.3, -0.05, 0.05, 0.4, 0.9, 0.99}) {
        const auto closed = tpdf_closed(ArmaSpec{{phi}, {}}, 30);
        const auto numeric = tpdf_numeric(psi_weights(ArmaSpec{{phi}, {}}, 4000), 30);
        for (int h = 0; h <= 30; ++h) {
            CHECK(closed.sigma[h] == Catch::Approx(std::max(0.0, std::pow(phi, h))).margin(1e-10));
            CHECK(std::abs(closed.sigma[h] - numeric.sigma[h] / numeric.sigma[0]) <= 1e-10);
        }
    }
}

TEST_CASE("tail ratio", "[arma]") {
    CHECK(tail_ratio(CoefficientSequence({1.0})) == 1.0);
    CHECK(tail_ratio(psi_weights(ArmaSpec{{}, {1.0}}, 5)) == 2.0);
    // Geometric sum oracle: sum phi^(2j) = 1/(1-phi^2).
    CHECK(tail_ratio(psi_weights_adaptive(ArmaSpec{{0.9}, {}})) ==
          Catch::Approx(1.0 / (1.0 - 0.81)).epsilon(1e-12));
}

TEST_CASE("tail ratio of truncations converges to the infinite model's", "[arma]") {
    // AR(1) phi=0.9: the order-q truncation has tail ratio sum_{j<=q} 0.81^j,
    // increasing to the geometric limit 1/(1-0.81).
    const double limit = 1.0 / (1.0 - 0.81);
    double prev = 0.0;
    for (std::size_t q : {1u, 2u, 5u, 10u, 50u, 200u}) {
        const auto truncated = CoefficientSequence(psi_weights(ArmaSpec{{0.9}, {}}, q + 1).psi);
        const double ratio = tail_ratio(truncated);
        CHECK(ratio > prev);
        CHECK(ratio <= limit + 1e-12);
        prev = ratio;
    }
    CHECK(limit - prev < 1e-8);
}

TEST_CASE("inner product and lag inner product", "[arma]") {
    const auto ar1 = psi_weights_adaptive(ArmaSpec{{0.9}, {}});
    CHECK(gamma_lag(ar1, 0) >= 1.0);
    CHECK(gamma_lag(ar1, 0) == Catch::Approx(inner_product(ar1, ar1)).epsilon(1e-15));
    CHECK(gamma_lag(ar1, 1) == Catch::Approx(0.9 / (1.0 - 0.81)).epsilon(1e-12));

    // gamma coincides with sigma while every coefficient is nonnegative...
    const auto positive = psi_weights_adaptive(ArmaSpec{{0.6}, {0.3}});
    const auto sigma = tpdf_numeric(positive, 10);
    for (std::size_t h = 0; h <= 10; ++h)
        CHECK(gamma_lag(positive, h) == Catch::Approx(sigma.sigma[h]).epsilon(1e-14));

    // ...and differs once coefficients go negative.
    const CoefficientSequence mixed({1.0, -0.5});
    CHECK(gamma_lag(mixed, 1) == -0.5);
    CHECK(tpdf_numeric(mixed, 1).sigma[1] == 0.0);
}

TEST_CASE("psi and pi weights convolve to the identity", "[arma]") {
    std::mt19937_64 gen(41);
    std::uniform_real_distribution<double> coeff(-0.6, 0.6);
    for (int rep = 0; rep < 50; ++rep) {
        ArmaSpec spec{{coeff(gen)}, {coeff(gen)}};
        if (std::abs(spec.ar[0] + spec.ma[0]) < 1e-3) continue;
        const std::size_t n = 400;
        const auto psi = psi_weights(spec, n);
        const auto pi = pi_weights(spec, n);
        for (std::size_t j = 0; j < 50; ++j) {
            double conv = 0.0;
            for (std::size_t k = 0; k <= j; ++k) conv += psi.psi[k] * pi[j - k];
            CHECK(std::abs(conv - (j == 0 ? 1.0 : 0.0)) <= 1e-10);
        }
    }
}

TEST_CASE("geometric decay certificate holds for computed weights", "[arma]") {
    std::mt19937_64 gen(43);
    std::uniform_real_distribution<double> coeff(-0.9, 0.9);
    for (int rep = 0; rep < 25; ++rep) {
        ArmaSpec spec{{coeff(gen), 0.4 * coeff(gen)}, {coeff(gen)}};
        bool usable = false;
        try {
            usable = is_causal(spec) && is_invertible(spec);
            validate_spec(spec);
        } catch (const error&) {
            continue;
        }
        if (!usable) continue;
        const auto seq = psi_weights(spec, 2000);
        const double r = seq.decay_rate;
        const double c = seq.decay_scale;
        CHECK(r < 1.0);
        CHECK(std::isfinite(c));
        double rpow = 1.0;
        for (std::size_t j = 0; j < seq.psi.size() && rpow >= 1e-280; ++j) {
            CHECK(std::abs(seq.psi[j]) <= c * rpow * (1.0 + 1e-12));
            rpow *= r;
        }
        // The certified tail bound dominates the actually stored tail.
        for (std::size_t m : {100ul, 500ul, 1000ul}) {
            double stored = 0.0;
            for (std::size_t j = m + 1; j < seq.psi.size(); ++j) stored += std::abs(seq.psi[j]);
            CHECK(stored <= seq.tail_sum_beyond(m) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("TPDF Toeplitz matrices are nonnegative definite", "[arma]") {
    for (double theta : {0.2, 0.6, 1.0}) CHECK(min_toeplitz_eigenvalue(tpdf_closed(ArmaSpec{{}, {theta}}, 30)) >= -1e-10);
    for (double phi : {-0.9, -0.4, 0.5, 0.95}) CHECK(min_toeplitz_eigenvalue(tpdf_closed(ArmaSpec{{phi}, {}}, 30)) >= -1e-10);
    for (double phi : {-0.8, -0.3, 0.4, 0.9}) {
        for (double theta : {-0.7, -0.2, 0.3, 0.8}) {
            if (std::abs(phi + theta) < 1e-3) continue;
            CHECK(min_toeplitz_eigenvalue(tpdf_closed(ArmaSpec{{phi}, {theta}}, 30)) >= -1e-10);
        }
    }
}

TEST_CASE("MA order identifiability warnings", "[arma]") {
    CHECK(spec_warnings(ArmaSpec{{}, {0.5, -0.2}}).size() == 1);
    CHECK(spec_warnings(ArmaSpec{{}, {0.5, 0.0}}).size() == 1);
    CHECK(spec_warnings(ArmaSpec{{}, {0.5, 0.2}}).empty());
    CHECK(spec_warnings(ArmaSpec{{0.4}, {-0.2}}).empty());  // ARMA: sign of theta_q informs the TPDF
    CHECK(spec_warnings(ArmaSpec{{}, {}}).empty());

    // theta_q <= 0 is accepted, not rejected.
    CHECK_NOTHROW(psi_weights(ArmaSpec{{}, {0.5, -0.2}}, 10));
}

TEST_CASE("adaptive truncation certifies the coefficient tail", "[arma]") {
    const ArmaSpec spec{{0.9}, {0.5}};
    const std::size_t n = adaptive_truncation_length(spec);
    CHECK(n <= 10000);
    const auto seq = psi_weights(spec, n);
    CHECK(seq.tail_sum_beyond(n - 1) < 1e-12);
    CHECK(adaptive_truncation_length(ArmaSpec{{}, {0.3, 0.2}}) == 3);

    // Extremely persistent models hit the cap instead of erroring.
    CHECK(adaptive_truncation_length(ArmaSpec{{0.99999}, {}}) == 10000);
}
