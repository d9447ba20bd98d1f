#include "sego/quadrics.h"

#include "sego/errors.h"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace sego {

namespace {

// Dense univariate polynomial, ascending coefficients.
using Poly1 = std::vector<double>;

Poly1 p_add(const Poly1 &a, const Poly1 &b) {
    Poly1 r(std::max(a.size(), b.size()), 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i)
        r[i] += b[i];
    return r;
}

Poly1 p_sub(const Poly1 &a, const Poly1 &b) {
    Poly1 nb = b;
    for (double &c : nb)
        c = -c;
    return p_add(a, nb);
}

Poly1 p_mul(const Poly1 &a, const Poly1 &b) {
    if (a.empty() || b.empty())
        return {};
    Poly1 r(a.size() + b.size() - 1, 0.0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] += a[i] * b[j];
    return r;
}

Poly1 p_scale(const Poly1 &a, double s) {
    Poly1 r = a;
    for (double &c : r)
        c *= s;
    return r;
}

double p_eval(const Poly1 &a, double x) {
    double s = 0.0;
    for (size_t i = a.size(); i-- > 0;)
        s = s * x + a[i];
    return s;
}

double p_eval_deriv(const Poly1 &a, double x) {
    double s = 0.0;
    for (size_t i = a.size(); i-- > 1;)
        s = s * x + a[i] * double(i);
    return s;
}

// One row of the resultant system: three entry polynomials multiplying
// [y, z, 1].
struct PolyRow {
    Poly1 c[3];
};

void balance_companion(Eigen::MatrixXd &A) {
    const int n = static_cast<int>(A.rows());
    for (int sweep = 0; sweep < 5; ++sweep) {
        bool converged = true;
        for (int i = 0; i < n; ++i) {
            double r = 0.0, c = 0.0;
            for (int j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                c += std::abs(A(j, i));
                r += std::abs(A(i, j));
            }
            if (c == 0.0 || r == 0.0)
                continue;
            double f = 1.0;
            double s = c + r;
            while (c < r / 2.0) {
                c *= 2.0;
                r /= 2.0;
                f *= 2.0;
            }
            while (c > r * 2.0) {
                c /= 2.0;
                r *= 2.0;
                f /= 2.0;
            }
            if (c + r < 0.95 * s) {
                converged = false;
                A.col(i) *= f;
                A.row(i) /= f;
            }
        }
        if (converged)
            break;
    }
}

} // namespace

double Quadric::max_abs_coeff() const {
    double m = std::abs(c);
    m = std::max(m, b.cwiseAbs().maxCoeff());
    m = std::max(m, S.cwiseAbs().maxCoeff());
    return m;
}

Quadric quadric_from_poly(const MultiPoly &p) {
    Quadric q;
    for (const auto &[m, coef] : p.terms) {
        if (m.e[3] != 0 || m.degree() > 2)
            throw_invalid_input("quadric_from_poly: not a quadric in three variables");
        int idx[3] = {m.e[0], m.e[1], m.e[2]};
        if (m.degree() == 0) {
            q.c += coef;
        } else if (m.degree() == 1) {
            for (int i = 0; i < 3; ++i)
                if (idx[i] == 1)
                    q.b[i] += coef;
        } else {
            int vars[2], k = 0;
            for (int i = 0; i < 3; ++i)
                for (int r = 0; r < idx[i]; ++r)
                    vars[k++] = i;
            if (vars[0] == vars[1])
                q.S(vars[0], vars[0]) += coef;
            else {
                q.S(vars[0], vars[1]) += coef / 2.0;
                q.S(vars[1], vars[0]) += coef / 2.0;
            }
        }
    }
    return q;
}

MultiPoly quadric_to_poly(const Quadric &q) {
    MultiPoly p;
    auto mono = [](int i) {
        Monomial m;
        m.e[i] = 1;
        return m;
    };
    for (int i = 0; i < 3; ++i) {
        p.add_term(mono(i) * mono(i), q.S(i, i));
        for (int j = i + 1; j < 3; ++j)
            p.add_term(mono(i) * mono(j), 2.0 * q.S(i, j));
        p.add_term(mono(i), q.b[i]);
    }
    p.add_term(Monomial(), q.c);
    p.normalize();
    return p;
}

std::vector<double> roots_of_poly(std::vector<double> coeffs) {
    double maxc = 0.0;
    for (double c : coeffs)
        maxc = std::max(maxc, std::abs(c));
    if (maxc == 0.0)
        throw_invalid_input("roots_of_poly: zero polynomial");
    while (coeffs.size() > 1 && std::abs(coeffs.back()) < 1e-14 * maxc)
        coeffs.pop_back();
    const int deg = static_cast<int>(coeffs.size()) - 1;
    if (deg <= 0)
        return {};
    if (deg == 1)
        return {-coeffs[0] / coeffs[1]};

    Eigen::MatrixXd C = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i)
        C(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i)
        C(i, deg - 1) = -coeffs[i] / coeffs[deg];
    balance_companion(C);

    Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
    if (es.info() != Eigen::Success)
        throw_numeric_failure("roots_of_poly: eigendecomposition failed");

    std::vector<double> roots;
    for (int i = 0; i < deg; ++i) {
        std::complex<double> l = es.eigenvalues()(i);
        if (std::abs(l.imag()) > 1e-6 * (1.0 + std::abs(l.real())))
            continue;
        double r = l.real();
        for (int it = 0; it < 5; ++it) {
            double f = p_eval(coeffs, r);
            double df = p_eval_deriv(coeffs, r);
            if (df == 0.0)
                break;
            double step = f / df;
            if (!std::isfinite(step))
                break;
            double rn = r - step;
            if (std::abs(p_eval(coeffs, rn)) >= std::abs(f))
                break;
            r = rn;
        }
        roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

std::vector<double> roots_deg8(const std::array<double, 9> &coeffs) {
    return roots_of_poly(std::vector<double>(coeffs.begin(), coeffs.end()));
}

namespace {

// Coefficient layout of one quadric with variable h hidden: A holds the
// [p^2, q^2, pq] block over the remaining variables (p, q), M(h) the
// [p, q, 1] block with entries polynomial in h.
struct HiddenLayout {
    Eigen::Matrix3d A;
    Eigen::Matrix3d M0, M1, M2;
};

HiddenLayout hide_variable(const std::array<Quadric, 3> &qs, int h) {
    int p = (h + 1) % 3, q = (h + 2) % 3;
    HiddenLayout L;
    L.M2.setZero();
    for (int i = 0; i < 3; ++i) {
        const Quadric &Q = qs[i];
        L.A(i, 0) = Q.S(p, p);
        L.A(i, 1) = Q.S(q, q);
        L.A(i, 2) = 2.0 * Q.S(p, q);
        L.M0(i, 0) = Q.b[p];
        L.M0(i, 1) = Q.b[q];
        L.M0(i, 2) = Q.c;
        L.M1(i, 0) = 2.0 * Q.S(h, p);
        L.M1(i, 1) = 2.0 * Q.S(h, q);
        L.M1(i, 2) = Q.b[h];
        L.M2(i, 2) = Q.S(h, h);
    }
    return L;
}

double condition_number(const Eigen::Matrix3d &A) {
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(A);
    double smin = svd.singularValues()(2);
    if (smin <= 0.0)
        return std::numeric_limits<double>::infinity();
    return svd.singularValues()(0) / smin;
}

std::vector<Eigen::Vector3d> solve_hidden(const std::array<Quadric, 3> &qs, int h, bool *ok) {
    *ok = false;
    HiddenLayout L = hide_variable(qs, h);
    Eigen::PartialPivLU<Eigen::Matrix3d> lu(L.A);
    Eigen::Matrix3d W0 = -lu.solve(L.M0);
    Eigen::Matrix3d W1 = -lu.solve(L.M1);
    Eigen::Matrix3d W2 = -lu.solve(L.M2);
    if (!W0.allFinite() || !W1.allFinite() || !W2.allFinite())
        return {};

    // W rows express [p^2, q^2, pq] in terms of [p, q, 1].
    auto entry = [&](int i, int j) { return Poly1{W0(i, j), W1(i, j), W2(i, j)}; };
    PolyRow w[3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            w[i].c[j] = entry(i, j);

    auto combine = [&](const Poly1 &a, int row) {
        PolyRow r;
        for (int j = 0; j < 3; ++j)
            r.c[j] = p_mul(a, w[row].c[j]);
        return r;
    };
    auto row_add = [&](const PolyRow &a, const PolyRow &b) {
        PolyRow r;
        for (int j = 0; j < 3; ++j)
            r.c[j] = p_add(a.c[j], b.c[j]);
        return r;
    };
    auto row_sub = [&](const PolyRow &a, const PolyRow &b) {
        PolyRow r;
        for (int j = 0; j < 3; ++j)
            r.c[j] = p_sub(a.c[j], b.c[j]);
        return r;
    };

    PolyRow rows[3];
    // p*(pq) - q*(p^2) = 0
    {
        PolyRow r = row_sub(row_add(combine(w[2].c[0], 0), combine(w[2].c[1], 2)),
                            row_add(combine(w[0].c[0], 2), combine(w[0].c[1], 1)));
        r.c[0] = p_add(r.c[0], w[2].c[2]);
        r.c[1] = p_sub(r.c[1], w[0].c[2]);
        rows[0] = r;
    }
    // q*(pq) - p*(q^2) = 0
    {
        PolyRow r = row_sub(row_add(combine(w[2].c[0], 2), combine(w[2].c[1], 1)),
                            row_add(combine(w[1].c[0], 0), combine(w[1].c[1], 2)));
        r.c[0] = p_sub(r.c[0], w[1].c[2]);
        r.c[1] = p_add(r.c[1], w[2].c[2]);
        rows[1] = r;
    }
    // (p^2)(q^2) - (pq)^2 = 0
    {
        auto bilinear = [&](const PolyRow &u, const PolyRow &v) {
            PolyRow r = combine(p_mul(u.c[0], v.c[0]), 0);
            r = row_add(r, combine(p_mul(u.c[1], v.c[1]), 1));
            r = row_add(r, combine(p_add(p_mul(u.c[0], v.c[1]), p_mul(u.c[1], v.c[0])), 2));
            r.c[0] = p_add(r.c[0], p_add(p_mul(u.c[0], v.c[2]), p_mul(u.c[2], v.c[0])));
            r.c[1] = p_add(r.c[1], p_add(p_mul(u.c[1], v.c[2]), p_mul(u.c[2], v.c[1])));
            r.c[2] = p_add(r.c[2], p_mul(u.c[2], v.c[2]));
            return r;
        };
        rows[2] = row_sub(bilinear(w[0], w[1]), bilinear(w[2], w[2]));
    }

    // det of the 3x3 polynomial matrix by cofactor expansion
    auto det2 = [&](int r0, int r1, int c0, int c1) {
        return p_sub(p_mul(rows[r0].c[c0], rows[r1].c[c1]), p_mul(rows[r0].c[c1], rows[r1].c[c0]));
    };
    Poly1 det = p_mul(rows[0].c[0], det2(1, 2, 1, 2));
    det = p_sub(det, p_mul(rows[0].c[1], det2(1, 2, 0, 2)));
    det = p_add(det, p_mul(rows[0].c[2], det2(1, 2, 0, 1)));

    double det_scale = 0.0;
    for (double c : det)
        det_scale = std::max(det_scale, std::abs(c));
    double bound = 1.0;
    for (const PolyRow &r : rows) {
        double rn = 0.0;
        for (const Poly1 &c : r.c)
            for (double v : c)
                rn = std::max(rn, std::abs(v));
        bound *= std::max(rn, 1e-300);
    }
    if (det_scale < 1e-13 * bound)
        return {}; // vanishing resultant: solution family, not isolated roots

    std::vector<double> hs;
    try {
        hs = roots_of_poly(det);
    } catch (const Error &) {
        return {};
    }

    std::vector<Eigen::Vector3d> sols;
    for (double r : hs) {
        Eigen::Matrix3d Cr;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                Cr(i, j) = p_eval(rows[i].c[j], r);
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(Cr, Eigen::ComputeFullV);
        Eigen::Vector3d v = svd.matrixV().col(2);
        if (std::abs(v(2)) < 1e-12)
            continue;
        Eigen::Vector3d sol;
        sol[h] = r;
        sol[(h + 1) % 3] = v(0) / v(2);
        sol[(h + 2) % 3] = v(1) / v(2);
        sols.push_back(sol);
    }
    *ok = true;
    return sols;
}

Quadric rotate_quadric(const Quadric &q, const Eigen::Matrix3d &Q) {
    Quadric r;
    r.S = Q.transpose() * q.S * Q;
    r.b = Q.transpose() * q.b;
    r.c = q.c;
    return r;
}

// ---- rank-deficient quadratic-form spans ---------------------------------
//
// When combinations of the three quadratic forms vanish (spheres are the
// textbook case: every form is the identity), the hidden-variable pivot can
// never be regular in any rotated frame. Those combinations are linear
// equations, so the system reduces to conics on a plane, a quadratic on a
// line, or a plain linear solve.

Quadric combine(const std::array<Quadric, 3> &qs, const Eigen::Vector3d &w) {
    Quadric r;
    r.S = w[0] * qs[0].S + w[1] * qs[1].S + w[2] * qs[2].S;
    r.b = w[0] * qs[0].b + w[1] * qs[1].b + w[2] * qs[2].b;
    r.c = w[0] * qs[0].c + w[1] * qs[1].c + w[2] * qs[2].c;
    return r;
}

// conic in two variables: a20 t1^2 + a11 t1 t2 + a02 t2^2 + a10 t1 + a01 t2 + a00
struct Conic {
    double a20 = 0, a11 = 0, a02 = 0, a10 = 0, a01 = 0, a00 = 0;

    double eval(double t1, double t2) const {
        return a20 * t1 * t1 + a11 * t1 * t2 + a02 * t2 * t2 + a10 * t1 + a01 * t2 + a00;
    }
    double scale() const {
        return std::max({std::abs(a20), std::abs(a11), std::abs(a02), std::abs(a10),
                         std::abs(a01), std::abs(a00)});
    }
};

Conic restrict_to_plane(const Quadric &q, const Eigen::Vector3d &p, const Eigen::Vector3d &d1,
                        const Eigen::Vector3d &d2) {
    Conic c;
    c.a20 = d1.dot(q.S * d1);
    c.a02 = d2.dot(q.S * d2);
    c.a11 = 2.0 * d1.dot(q.S * d2);
    Eigen::Vector3d g = 2.0 * q.S * p + q.b;
    c.a10 = g.dot(d1);
    c.a01 = g.dot(d2);
    c.a00 = q.eval(p);
    return c;
}

// common points of two conics via the Sylvester resultant in t1
std::vector<Eigen::Vector2d> intersect_conics(const Conic &A, const Conic &B) {
    auto a2 = Poly1{A.a20};
    auto a1 = Poly1{A.a10, A.a11};
    auto a0 = Poly1{A.a00, A.a01, A.a02};
    auto b2 = Poly1{B.a20};
    auto b1 = Poly1{B.a10, B.a11};
    auto b0 = Poly1{B.a00, B.a01, B.a02};

    // 4x4 Sylvester determinant, expanded blockwise
    auto det2 = [](const Poly1 &a, const Poly1 &b, const Poly1 &c, const Poly1 &d) {
        return p_sub(p_mul(a, d), p_mul(b, c));
    };
    Poly1 ab12 = det2(a2, a1, b2, b1);
    Poly1 ab02 = det2(a2, a0, b2, b0);
    Poly1 ab01 = det2(a1, a0, b1, b0);
    Poly1 res = p_sub(p_mul(ab02, ab02), p_mul(ab12, ab01));

    double rs = 0.0;
    for (double v : res)
        rs = std::max(rs, std::abs(v));
    double as = std::max(A.scale(), 1e-300), bs = std::max(B.scale(), 1e-300);
    if (rs < 1e-13 * as * as * bs * bs)
        throw_degenerate_instance("intersect_conics: conics share a component");

    std::vector<Eigen::Vector2d> out;
    for (double t2 : roots_of_poly(res)) {
        // collect t1 candidates from both conics
        std::vector<double> cands;
        for (const Conic &C : {A, B}) {
            double qa = C.a20;
            double qb = C.a10 + C.a11 * t2;
            double qc = C.a00 + C.a01 * t2 + C.a02 * t2 * t2;
            if (std::abs(qa) > 1e-14 * C.scale()) {
                double disc = qb * qb - 4 * qa * qc;
                if (disc >= -1e-10 * (qb * qb + std::abs(4 * qa * qc))) {
                    double sq = std::sqrt(std::max(disc, 0.0));
                    cands.push_back((-qb + sq) / (2 * qa));
                    cands.push_back((-qb - sq) / (2 * qa));
                }
            } else if (std::abs(qb) > 1e-14 * C.scale()) {
                cands.push_back(-qc / qb);
            }
        }
        double best = std::numeric_limits<double>::infinity();
        double best_t1 = 0.0;
        for (double t1 : cands) {
            double r = std::abs(A.eval(t1, t2)) / as + std::abs(B.eval(t1, t2)) / bs;
            if (r < best) {
                best = r;
                best_t1 = t1;
            }
        }
        double mag = std::max({1.0, std::abs(best_t1), std::abs(t2)});
        if (best < 1e-6 * mag * mag)
            out.emplace_back(best_t1, t2);
    }
    return out;
}

std::vector<Eigen::Vector3d> solve_rank_deficient(const std::array<Quadric, 3> &qs,
                                                  const Eigen::Matrix3d &V, int rank,
                                                  double scale) {
    // combinations with vanishing quadratic part are linear equations
    std::vector<Eigen::Vector3d> lin_b;
    std::vector<double> lin_c;
    for (int k = rank; k < 3; ++k) {
        Quadric lq = combine(qs, V.col(k));
        if (lq.b.norm() < 1e-10 * std::max(scale, std::abs(lq.c))) {
            if (std::abs(lq.c) > 1e-10 * scale)
                return {}; // inconsistent: no solutions at all
            throw_degenerate_instance("solve_three_quadrics: dependent equations");
        }
        lin_b.push_back(lq.b);
        lin_c.push_back(lq.c);
    }

    if (rank == 0) {
        // three linear equations
        Eigen::Matrix3d A;
        Eigen::Vector3d rhs;
        for (int i = 0; i < 3; ++i) {
            A.row(i) = lin_b[i].transpose();
            rhs(i) = -lin_c[i];
        }
        Eigen::ColPivHouseholderQR<Eigen::Matrix3d> qr(A);
        qr.setThreshold(1e-12);
        if (qr.rank() < 3)
            throw_degenerate_instance("solve_three_quadrics: linear system is rank-deficient");
        return {qr.solve(rhs)};
    }

    if (rank == 1) {
        // two planes meet in a line; one quadric remains
        Eigen::Vector3d n1 = lin_b[0], n2 = lin_b[1];
        Eigen::Vector3d d = n1.cross(n2);
        if (d.norm() < 1e-12 * n1.norm() * n2.norm())
            throw_degenerate_instance("solve_three_quadrics: coincident planes");
        d.normalize();
        Eigen::Matrix3d A;
        A.row(0) = n1.transpose();
        A.row(1) = n2.transpose();
        A.row(2) = d.transpose();
        Eigen::Vector3d p = A.partialPivLu().solve(Eigen::Vector3d(-lin_c[0], -lin_c[1], 0.0));

        Quadric q = combine(qs, V.col(0));
        double qa = d.dot(q.S * d);
        double qb = (2.0 * q.S * p + q.b).dot(d);
        double qc = q.eval(p);
        double s = std::max({std::abs(qa), std::abs(qb), std::abs(qc)});
        if (s < 1e-12 * std::max(scale, 1.0))
            throw_degenerate_instance("solve_three_quadrics: quadric vanishes on the line");
        std::vector<Eigen::Vector3d> out;
        if (std::abs(qa) > 1e-14 * s) {
            double disc = qb * qb - 4 * qa * qc;
            if (disc >= 0) {
                out.push_back(p + ((-qb + std::sqrt(disc)) / (2 * qa)) * d);
                out.push_back(p + ((-qb - std::sqrt(disc)) / (2 * qa)) * d);
            }
        } else if (std::abs(qb) > 1e-14 * s) {
            out.push_back(p + (-qc / qb) * d);
        }
        return out;
    }

    // rank == 2: one plane; two independent conics on it
    Eigen::Vector3d n = lin_b[0];
    Eigen::Vector3d p = -lin_c[0] * n / n.squaredNorm();
    Eigen::Vector3d d1 = n.unitOrthogonal();
    Eigen::Vector3d d2 = n.cross(d1).normalized();
    Conic A = restrict_to_plane(combine(qs, V.col(0)), p, d1, d2);
    Conic B = restrict_to_plane(combine(qs, V.col(1)), p, d1, d2);
    if (A.scale() < 1e-12 * scale || B.scale() < 1e-12 * scale)
        throw_degenerate_instance("solve_three_quadrics: conic vanishes on the plane");
    std::vector<Eigen::Vector3d> out;
    for (const auto &t : intersect_conics(A, B))
        out.push_back(p + t.x() * d1 + t.y() * d2);
    return out;
}

Eigen::Matrix3d retry_rotation(int k) {
    // fixed generic rotations; axis/angle chosen away from any symmetry
    const Eigen::Vector3d axes[3] = {{0.36, 0.48, 0.8}, {-0.64, 0.6, 0.48}, {0.28, -0.8, 0.53}};
    Eigen::Vector3d a = axes[k % 3].normalized();
    double ang = 0.9 + 0.37 * k;
    Eigen::Matrix3d K;
    K << 0, -a.z(), a.y(), a.z(), 0, -a.x(), -a.y(), a.x(), 0;
    return Eigen::Matrix3d::Identity() + std::sin(ang) * K + (1 - std::cos(ang)) * K * K;
}

} // namespace

std::vector<Eigen::Vector3d> solve_three_quadrics(const Quadric &q1, const Quadric &q2,
                                                  const Quadric &q3,
                                                  const QuadricSolveOptions &opts) {
    std::array<Quadric, 3> qs = {q1, q2, q3};

    // combinations with vanishing quadratic part need the reduced paths
    Eigen::Matrix<double, 3, 6> F;
    const double s2 = std::sqrt(2.0);
    for (int i = 0; i < 3; ++i)
        F.row(i) << qs[i].S(0, 0), qs[i].S(1, 1), qs[i].S(2, 2), s2 * qs[i].S(0, 1),
            s2 * qs[i].S(0, 2), s2 * qs[i].S(1, 2);
    Eigen::JacobiSVD<Eigen::Matrix<double, 3, 6>> svd(F, Eigen::ComputeFullU);
    double smax = svd.singularValues()(0);
    int form_rank = 0;
    for (int i = 0; i < 3; ++i)
        if (svd.singularValues()(i) > 1e-10 * smax)
            ++form_rank;
    if (form_rank < 3) {
        double scale = std::max({qs[0].max_abs_coeff(), qs[1].max_abs_coeff(),
                                 qs[2].max_abs_coeff(), 1e-300});
        return solve_rank_deficient(qs, svd.matrixU(), form_rank, scale);
    }

    Eigen::Matrix3d Q = Eigen::Matrix3d::Identity();

    for (int attempt = 0; attempt <= opts.max_rotations; ++attempt) {
        std::array<Quadric, 3> cur = qs;
        if (attempt > 0) {
            Q = retry_rotation(attempt - 1);
            for (auto &q : cur)
                q = rotate_quadric(q, Q);
        }

        int best_h = 0;
        if (opts.condition_check) {
            double best = std::numeric_limits<double>::infinity();
            for (int h = 0; h < 3; ++h) {
                double c = condition_number(hide_variable(cur, h).A);
                double score = std::abs(c - 1.0);
                if (score < best) {
                    best = score;
                    best_h = h;
                }
            }
            if (!std::isfinite(best) || best + 1.0 > opts.singular_threshold)
                continue; // try a rotated variable space
        } else {
            if (condition_number(hide_variable(cur, best_h).A) > opts.singular_threshold)
                continue;
        }

        bool ok = false;
        std::vector<Eigen::Vector3d> sols = solve_hidden(cur, best_h, &ok);
        if (!ok)
            continue;
        if (attempt > 0)
            for (auto &s : sols)
                s = Q * s;
        return sols;
    }
    throw_degenerate_instance("solve_three_quadrics: no usable hidden-variable pivot");
}

std::vector<Eigen::Vector3d> solve_three_quadrics(const MultiPoly &p1, const MultiPoly &p2,
                                                  const MultiPoly &p3,
                                                  const QuadricSolveOptions &opts) {
    return solve_three_quadrics(quadric_from_poly(p1), quadric_from_poly(p2),
                                quadric_from_poly(p3), opts);
}

} // namespace sego
