#include <Eigen/Eigenvalues>
#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "tlts/angular.hpp"

using namespace tlts;

namespace {

// Two measures are equal when every atom of one has a matching atom of the
// other (point within tol in L2, mass within tol) and the counts agree.
bool measures_equal(const DiscreteAngularMeasure& a, const DiscreteAngularMeasure& b, double tol) {
    if (a.dimension != b.dimension || a.atoms.size() != b.atoms.size()) return false;
    std::vector<bool> used(b.atoms.size(), false);
    for (const auto& atom : a.atoms) {
        bool found = false;
        for (std::size_t j = 0; j < b.atoms.size(); ++j) {
            if (used[j]) continue;
            if ((atom.point - b.atoms[j].point).norm() <= tol && std::abs(atom.mass - b.atoms[j].mass) <= tol) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

Eigen::MatrixXd random_nonnegative_matrix(std::mt19937_64& gen, Eigen::Index p, Eigen::Index q) {
    std::uniform_real_distribution<double> value(0.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Eigen::MatrixXd a(p, q);
    for (Eigen::Index i = 0; i < p; ++i)
        for (Eigen::Index j = 0; j < q; ++j) a(i, j) = unit(gen) < 0.25 ? 0.0 : value(gen);
    a(0, 0) = std::max(a(0, 0), 0.5);  // keep at least one nonzero column
    return a;
}

}  // namespace

TEST_CASE("angular measure from coefficient columns", "[angular]") {
    const auto h = angular_from_coefficients(Eigen::MatrixXd::Identity(2, 2));
    REQUIRE(h.atoms.size() == 2);
    CHECK(h.atoms[0].point(0) == 1.0);
    CHECK(h.atoms[0].mass == 1.0);
    CHECK(h.atoms[1].point(1) == 1.0);
    CHECK(h.atoms[1].mass == 1.0);

    Eigen::MatrixXd column(2, 1);
    column << 1.0, 1.0;
    const auto dep = angular_from_coefficients(column);
    REQUIRE(dep.atoms.size() == 1);
    CHECK(dep.atoms[0].point(0) == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(dep.atoms[0].mass == Catch::Approx(2.0).epsilon(1e-15));

    // Negative entries are zeroed before the column is read off.
    Eigen::MatrixXd ar_like(2, 2);
    ar_like << 1.0, 0.0, -0.5, 1.0;
    const auto zeroed = angular_from_coefficients(ar_like);
    REQUIRE(zeroed.atoms.size() == 2);
    CHECK(zeroed.atoms[0].point(0) == 1.0);
    CHECK(zeroed.atoms[0].point(1) == 0.0);
    CHECK(zeroed.atoms[0].mass == 1.0);
    CHECK(zeroed.atoms[1].point(1) == 1.0);
    CHECK(zeroed.atoms[1].mass == 1.0);

    CHECK_THROWS_AS(angular_from_coefficients(-Eigen::MatrixXd::Ones(3, 2)), degenerate_measure_error);
}

TEST_CASE("marginalization of a discrete angular measure", "[angular]") {
    const auto h = angular_from_coefficients(Eigen::MatrixXd::Identity(2, 2));
    const auto m = marginalize(h, {0});
    REQUIRE(m.atoms.size() == 1);
    CHECK(m.atoms[0].point(0) == 1.0);
    CHECK(m.atoms[0].mass == 1.0);

    Eigen::MatrixXd column(2, 1);
    column << 1.0, 1.0;
    const auto dep = marginalize(angular_from_coefficients(column), {0});
    REQUIRE(dep.atoms.size() == 1);
    CHECK(dep.atoms[0].mass == Catch::Approx(1.0).epsilon(1e-15));  // 2 * (1/2)

    CHECK_THROWS_AS(marginalize(h, {}), domain_error);
    CHECK_THROWS_AS(marginalize(h, {0, 1}), domain_error);
    CHECK_THROWS_AS(marginalize(h, {5}), domain_error);
    const auto h3 = angular_from_coefficients(Eigen::MatrixXd::Identity(3, 3));
    CHECK_THROWS_AS(marginalize(h3, {0, 0}), domain_error);

    DiscreteAngularMeasure bad;
    bad.dimension = 2;
    bad.atoms.push_back({Eigen::Vector2d(0.5, 0.5), 1.0});
    CHECK_THROWS_AS(marginalize(bad, {0}), domain_error);
}

TEST_CASE("marginalization merges colliding atoms", "[angular]") {
    DiscreteAngularMeasure h;
    h.dimension = 3;
    h.atoms.push_back({Eigen::Vector3d(1.0, 0.0, 0.0), 1.5});
    h.atoms.push_back({Eigen::Vector3d(1.0 / std::sqrt(2.0), 0.0, 1.0 / std::sqrt(2.0)), 2.0});
    const auto m = marginalize(h, {0, 1});
    REQUIRE(m.atoms.size() == 1);
    CHECK(m.atoms[0].point(0) == Catch::Approx(1.0).epsilon(1e-15));
    CHECK(m.atoms[0].mass == Catch::Approx(1.5 + 2.0 * 0.5).epsilon(1e-15));

    DiscreteAngularMeasure orth;
    orth.dimension = 2;
    orth.atoms.push_back({Eigen::Vector2d(0.0, 1.0), 1.0});
    CHECK_THROWS_AS(marginalize(orth, {0}), degenerate_measure_error);
}

TEST_CASE("pairwise TPDF from the angular measure", "[angular]") {
    const auto indep = angular_from_coefficients(Eigen::MatrixXd::Identity(2, 2));
    CHECK(tpdf_from_angular(indep, 0, 1) == 0.0);

    Eigen::MatrixXd column(2, 1);
    column << 1.0, 1.0;
    CHECK(tpdf_from_angular(angular_from_coefficients(column), 0, 1) == Catch::Approx(1.0).epsilon(1e-15));

    Eigen::MatrixXd ar_pair(2, 2);
    ar_pair << 1.0, 0.0, 0.9, 1.0;
    CHECK(tpdf_from_angular(angular_from_coefficients(ar_pair), 0, 1) == Catch::Approx(0.9).epsilon(1e-14));

    CHECK_THROWS_AS(tpdf_from_angular(indep, 0, 7), domain_error);
}

TEST_CASE("TPDM assembly", "[angular]") {
    const auto indep = angular_from_coefficients(Eigen::MatrixXd::Identity(3, 3));
    CHECK(tpdm(indep).isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-14));

    Eigen::MatrixXd column(2, 1);
    column << 1.0, 1.0;
    CHECK(tpdm(angular_from_coefficients(column)).isApprox(Eigen::MatrixXd::Ones(2, 2), 1e-14));

    std::mt19937_64 gen(11);
    std::uniform_int_distribution<int> dims(2, 6);
    std::uniform_int_distribution<int> cols(1, 8);
    for (int rep = 0; rep < 50; ++rep) {
        const auto h = angular_from_coefficients(random_nonnegative_matrix(gen, dims(gen), cols(gen)));
        const Eigen::MatrixXd sigma = tpdm(h);
        CHECK(sigma.isApprox(sigma.transpose(), 1e-14));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sigma);
        CHECK(eig.eigenvalues().minCoeff() >= -1e-10);
    }
}

TEST_CASE("marginal consistency and dimension independence", "[angular]") {
    std::mt19937_64 gen(23);
    std::uniform_int_distribution<int> dims(2, 6);
    std::uniform_int_distribution<int> cols(1, 8);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    for (int rep = 0; rep < 200; ++rep) {
        const Eigen::Index p = dims(gen);
        const Eigen::MatrixXd a = random_nonnegative_matrix(gen, p, cols(gen));
        const auto h = angular_from_coefficients(a);

        // Random proper subset of the coordinates.
        std::vector<std::size_t> keep;
        for (Eigen::Index i = 0; i < p; ++i)
            if (unit(gen) < 0.5) keep.push_back(static_cast<std::size_t>(i));
        if (keep.empty()) keep.push_back(0);
        if (keep.size() == static_cast<std::size_t>(p)) keep.pop_back();

        Eigen::MatrixXd rows(static_cast<Eigen::Index>(keep.size()), a.cols());
        for (std::size_t k = 0; k < keep.size(); ++k) rows.row(static_cast<Eigen::Index>(k)) = a.row(static_cast<Eigen::Index>(keep[k]));
        bool subset_degenerate = rows.cwiseMax(0.0).colwise().norm().maxCoeff() == 0.0;
        if (subset_degenerate) continue;

        // Marginalizing the joint measure reproduces the measure built from
        // the kept coefficient rows.
        const auto marginal = marginalize(h, keep);
        const auto direct = angular_from_coefficients(rows);
        // Merge atoms of `direct` that collide (the marginal is merged).
        DiscreteAngularMeasure merged;
        merged.dimension = direct.dimension;
        for (const auto& atom : direct.atoms) {
            bool found = false;
            for (auto& existing : merged.atoms)
                if ((existing.point - atom.point).norm() <= 1e-10) {
                    existing.mass += atom.mass;
                    found = true;
                    break;
                }
            if (!found) merged.atoms.push_back(atom);
        }
        CHECK(measures_equal(marginal, merged, 1e-12));

        // Total mass transforms by the squared kept-coordinate norm.
        double expected_mass = 0.0;
        for (const auto& atom : h.atoms) {
            double norm2 = 0.0;
            for (std::size_t i : keep) {
                const double w = atom.point(static_cast<Eigen::Index>(i));
                norm2 += w * w;
            }
            expected_mass += atom.mass * norm2;
        }
        CHECK(marginal.total_mass() == Catch::Approx(expected_mass).margin(1e-12));

        // Pairwise TPDF does not depend on the ambient dimension (p > 2;
        // at p = 2 the bivariate marginal is the joint measure itself).
        for (Eigen::Index i = 0; p > 2 && i < p; ++i) {
            for (Eigen::Index j = i + 1; j < p; ++j) {
                const double from_joint = tpdf_from_angular(h, static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                try {
                    const auto bivariate = marginalize(h, {static_cast<std::size_t>(i), static_cast<std::size_t>(j)});
                    CHECK(std::abs(tpdf_from_angular(bivariate, 0, 1) - from_joint) <= 1e-12);
                } catch (const degenerate_measure_error&) {
                    CHECK(from_joint == 0.0);  // every atom orthogonal to both coordinates
                }
            }
        }
    }
}
