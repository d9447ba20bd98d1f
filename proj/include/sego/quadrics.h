#pragma once

#include "sego/poly.h"

#include <Eigen/Core>
#include <vector>

namespace sego {

// Quadric q(v) = v' S v + b' v + c over three unknowns.
struct Quadric {
    Eigen::Matrix3d S = Eigen::Matrix3d::Zero(); // symmetric
    Eigen::Vector3d b = Eigen::Vector3d::Zero();
    double c = 0.0;

    double eval(const Eigen::Vector3d &v) const { return v.dot(S * v) + b.dot(v) + c; }
    double max_abs_coeff() const;
};

Quadric quadric_from_poly(const MultiPoly &p); // first three variable slots
MultiPoly quadric_to_poly(const Quadric &q);

// Real roots of c[0] + c[1] x + ... + c[8] x^8 via the balanced companion
// matrix; near-zero leading coefficients reduce the degree. Roots are
// polished by a few Newton steps.
std::vector<double> roots_deg8(const std::array<double, 9> &coeffs);
std::vector<double> roots_of_poly(std::vector<double> coeffs); // ascending, any degree <= 8

struct QuadricSolveOptions {
    bool condition_check = true; // pick the hidden variable by condition number
    double singular_threshold = 1e12;
    int max_rotations = 3; // variable-space retries when all pivots are bad
};

// Common real points of three quadrics (at most eight for generic input) by
// hiding one variable and root-finding a single degree-8 polynomial.
std::vector<Eigen::Vector3d> solve_three_quadrics(const Quadric &q1, const Quadric &q2,
                                                  const Quadric &q3,
                                                  const QuadricSolveOptions &opts = {});

std::vector<Eigen::Vector3d> solve_three_quadrics(const MultiPoly &p1, const MultiPoly &p2,
                                                  const MultiPoly &p3,
                                                  const QuadricSolveOptions &opts = {});

} // namespace sego
