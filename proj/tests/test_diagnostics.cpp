#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "tlts/diagnostics.hpp"

using namespace tlts;

TEST_CASE("run lengths by hand", "[diagnostics]") {
    // Sorted sample (0,0,5,5,5); the 0.4 plotting-position quantile is 2, so
    // the runs above it are (5,5) and (5).
    const RunLengthSummary rl = run_lengths({0.0, 5.0, 5.0, 0.0, 5.0}, 0.4);
    REQUIRE(rl.runs == std::vector<std::size_t>{2, 1});
    CHECK(rl.mean == Catch::Approx(1.5).epsilon(1e-15));
    CHECK(rl.sd == Catch::Approx(std::sqrt(0.5)).epsilon(1e-12));
    CHECK_FALSE(rl.empty);

    // Runs touching the boundaries count.
    const RunLengthSummary edges = run_lengths({5.0, 0.0, 0.0, 0.0, 5.0}, 0.5);
    CHECK(edges.runs == std::vector<std::size_t>{1, 1});

    // Nothing above the threshold: flagged, moments undefined.
    const RunLengthSummary none = run_lengths(std::vector<double>(10, 1.0), 0.5);
    CHECK(none.empty);
    CHECK(std::isnan(none.mean));
}

TEST_CASE("run decomposition is exact", "[diagnostics]") {
    std::mt19937_64 gen(3);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> x(5000);
    for (double& v : x) v = unif(gen);
    for (double q : {0.5, 0.9, 0.99}) {
        const RunLengthSummary rl = run_lengths(x, q);
        std::size_t total = 0;
        for (std::size_t r : rl.runs) total += r;
        std::size_t above = 0;
        for (double v : x)
            if (v > rl.threshold) ++above;
        CHECK(total == above);
    }
}

TEST_CASE("iid series has nearly geometric runs", "[diagnostics][montecarlo]") {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> x(100000);
    for (double& v : x) v = unif(gen);
    const RunLengthSummary rl = run_lengths(x, 0.95);
    CHECK(std::abs(rl.mean - 1.0 / 0.95) < 0.03);
}

TEST_CASE("rolling sum quantiles", "[diagnostics][montecarlo]") {
    const std::vector<double> constant(100, 2.5);
    for (double v : sum_quantiles(constant, 3, {0.1, 0.5, 0.9})) CHECK(v == Catch::Approx(7.5).epsilon(1e-15));

    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> x(100000);
    for (double& v : x) v = unif(gen);
    const auto q = sum_quantiles(x, 3, {0.25, 0.5, 0.75, 0.95});
    CHECK(q[1] == Catch::Approx(1.5).margin(0.02));  // Irwin-Hall median
    for (std::size_t i = 1; i < q.size(); ++i) CHECK(q[i] >= q[i - 1]);

    CHECK_THROWS_AS(sum_quantiles({1.0, 2.0}, 3, {0.5}), insufficient_data_error);
    CHECK_THROWS_AS(sum_quantiles(constant, 0, {0.5}), domain_error);
}

TEST_CASE("model comparison report", "[diagnostics][montecarlo]") {
    // Synthetic surrogate generated by the fitted model itself.
    SimulationRequest req;
    req.model = ArmaSpec{{0.93}, {-0.51}};
    req.n = 20000;
    req.seed = 404;
    const std::vector<double> data = simulate_transformed(req);
    const MarginalModel marginal = fit_marginal(data);

    std::vector<double> frechet(data.size());
    for (std::size_t t = 0; t < data.size(); ++t) frechet[t] = to_frechet(marginal, data[t]);
    const FitResult fit = fit_model(estimate_tpdf(bias_correct(frechet), 30), ModelFamily::arma11);

    const ComparisonReport report = compare_models(data, marginal, fit, 20000, 505);
    REQUIRE(report.columns.size() == 5);
    CHECK(report.columns[0].name == "Actual");
    for (const auto& col : report.columns) {
        INFO(col.name << (col.failed ? " failed: " + col.message : ""));
        CHECK_FALSE(col.failed);
        REQUIRE(col.run_mean.size() == report.probs.size());
        REQUIRE(col.sum_q.size() == report.probs.size());
    }

    // Deterministic given the seed.
    const ComparisonReport again = compare_models(data, marginal, fit, 20000, 505);
    for (std::size_t c = 0; c < report.columns.size(); ++c) {
        CHECK(report.columns[c].run_mean == again.columns[c].run_mean);
        CHECK(report.columns[c].sum_q == again.columns[c].sum_q);
        CHECK(report.columns[c].seed == again.columns[c].seed);
    }

    // The asymptotically dependent model holds runs together at high
    // thresholds; the Gaussian baseline does not.
    const ModelColumn& translin = report.columns[1];
    const ModelColumn& gaussian = report.columns[2];
    CHECK(translin.run_mean[2] > gaussian.run_mean[2]);  // q = 0.99
    CHECK(translin.run_mean[3] > gaussian.run_mean[3]);  // q = 0.995

    // Positive-restricted linear model overshoots the run lengths when the
    // underlying MA coefficient is negative.
    const ModelColumn& positive = report.columns[4];
    CHECK(positive.run_mean[0] > translin.run_mean[0]);
}
