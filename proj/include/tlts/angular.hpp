#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <vector>

#include "tlts/errors.hpp"

namespace tlts {

/// One point mass of a discrete angular measure: a direction on the
/// nonnegative L2 unit sphere and the mass it carries.
struct AngularAtom {
    Eigen::VectorXd point;
    double mass;
};

/// Discrete angular measure on the nonnegative unit sphere in `dimension`
/// coordinates. Atom points have unit L2 norm and nonnegative entries.
struct DiscreteAngularMeasure {
    std::size_t dimension = 0;
    std::vector<AngularAtom> atoms;

    double total_mass() const {
        double m = 0.0;
        for (const auto& a : atoms) m += a.mass;
        return m;
    }
};

namespace detail {

inline void check_measure(const DiscreteAngularMeasure& h) {
    for (const auto& a : h.atoms) {
        if (static_cast<std::size_t>(a.point.size()) != h.dimension)
            throw domain_error("angular atom dimension mismatch");
        if (std::abs(a.point.norm() - 1.0) > 1e-12)
            throw domain_error("angular atom point is not on the unit sphere");
        if ((a.point.array() < 0.0).any())
            throw domain_error("angular atom point has a negative coordinate");
        if (!(a.mass > 0.0)) throw domain_error("angular atom mass must be positive");
    }
}

}  // namespace detail

/// Angular measure of the vector A^(0) Z where Z has iid noise components:
/// one atom per nonzero column of A^(0) = max(A, 0), at direction
/// a_j / ||a_j|| with mass ||a_j||^2. Columns that vanish after zeroing the
/// negative entries contribute nothing.
inline DiscreteAngularMeasure angular_from_coefficients(const Eigen::MatrixXd& coefficients) {
    DiscreteAngularMeasure h;
    h.dimension = static_cast<std::size_t>(coefficients.rows());
    for (Eigen::Index j = 0; j < coefficients.cols(); ++j) {
        Eigen::VectorXd col = coefficients.col(j).cwiseMax(0.0);
        const double norm = col.norm();
        if (norm > 0.0) h.atoms.push_back({col / norm, norm * norm});
    }
    if (h.atoms.empty())
        throw degenerate_measure_error("all coefficient columns vanish after zeroing");
    return h;
}

/// Marginal angular measure over the kept coordinates: each atom (w, m) with
/// nonzero restriction w_(l) maps to (w_(l)/||w_(l)||, m ||w_(l)||^2); atoms
/// orthogonal to the kept coordinates drop out. Resulting points closer than
/// 1e-10 in L2 distance are merged by mass addition, since the measure is
/// defined by mass, not atom multiplicity.
inline DiscreteAngularMeasure marginalize(const DiscreteAngularMeasure& h,
                                          const std::vector<std::size_t>& keep) {
    detail::check_measure(h);
    if (keep.empty() || keep.size() >= h.dimension)
        throw domain_error("marginalize requires 1 <= l < p kept coordinates");
    for (std::size_t k = 0; k < keep.size(); ++k) {
        if (keep[k] >= h.dimension) throw domain_error("marginalize index out of range");
        for (std::size_t j = k + 1; j < keep.size(); ++j)
            if (keep[j] == keep[k]) throw domain_error("marginalize indices must be distinct");
    }

    DiscreteAngularMeasure out;
    out.dimension = keep.size();
    for (const auto& atom : h.atoms) {
        Eigen::VectorXd sub(static_cast<Eigen::Index>(keep.size()));
        for (std::size_t k = 0; k < keep.size(); ++k)
            sub(static_cast<Eigen::Index>(k)) = atom.point(static_cast<Eigen::Index>(keep[k]));
        const double norm = sub.norm();
        if (norm == 0.0) continue;
        sub /= norm;
        const double mass = atom.mass * norm * norm;
        bool merged = false;
        for (auto& existing : out.atoms) {
            if ((existing.point - sub).norm() <= 1e-10) {
                existing.mass += mass;
                merged = true;
                break;
            }
        }
        if (!merged) out.atoms.push_back({sub, mass});
    }
    if (out.atoms.empty())
        throw degenerate_measure_error("marginal measure has no atoms");
    return out;
}

/// TPDF value sigma(X_i, X_j) = sum over atoms of mass * w_i * w_j.
inline double tpdf_from_angular(const DiscreteAngularMeasure& h, std::size_t i, std::size_t j) {
    if (i >= h.dimension || j >= h.dimension) throw domain_error("tpdf_from_angular index out of range");
    double s = 0.0;
    for (const auto& atom : h.atoms)
        s += atom.mass * atom.point(static_cast<Eigen::Index>(i)) * atom.point(static_cast<Eigen::Index>(j));
    return s;
}

/// Tail pairwise dependence matrix: entry (i,j) is tpdf_from_angular(h,i,j).
/// Symmetric and nonnegative definite by construction.
inline Eigen::MatrixXd tpdm(const DiscreteAngularMeasure& h) {
    const auto p = static_cast<Eigen::Index>(h.dimension);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(p, p);
    for (const auto& atom : h.atoms) m += atom.mass * atom.point * atom.point.transpose();
    return m;
}

}  // namespace tlts
