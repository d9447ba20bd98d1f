#pragma once

#include "sego/errors.h"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace sego {

// Monomial over up to four variables; unused slots stay zero.
struct Monomial {
    std::array<uint8_t, 4> e = {0, 0, 0, 0};

    Monomial() = default;
    Monomial(int e0, int e1, int e2, int e3 = 0)
        : e{static_cast<uint8_t>(e0), static_cast<uint8_t>(e1), static_cast<uint8_t>(e2),
            static_cast<uint8_t>(e3)} {}

    int degree() const { return e[0] + e[1] + e[2] + e[3]; }

    Monomial operator*(const Monomial &o) const {
        return Monomial(e[0] + o.e[0], e[1] + o.e[1], e[2] + o.e[2], e[3] + o.e[3]);
    }

    uint32_t key() const {
        return uint32_t(e[0]) | (uint32_t(e[1]) << 8) | (uint32_t(e[2]) << 16) |
               (uint32_t(e[3]) << 24);
    }

    bool operator==(const Monomial &o) const = default;
};

// Graded reverse lexicographic order with variable precedence e[0] > e[1] > ...
inline bool grevlex_less(const Monomial &a, const Monomial &b) {
    int da = a.degree(), db = b.degree();
    if (da != db)
        return da < db;
    for (int i = 3; i >= 0; --i) {
        int d = int(a.e[i]) - int(b.e[i]);
        if (d != 0)
            return d > 0; // larger trailing exponent = smaller monomial
    }
    return false;
}

inline bool grevlex_greater(const Monomial &a, const Monomial &b) { return grevlex_less(b, a); }

// Sparse polynomial with terms kept in descending grevlex order.
struct MultiPoly {
    std::vector<std::pair<Monomial, double>> terms;

    void normalize();
    void add_term(const Monomial &m, double c) { terms.emplace_back(m, c); }

    MultiPoly operator*(const MultiPoly &o) const;
    MultiPoly operator*(const Monomial &m) const;
    MultiPoly operator*(double s) const;
    MultiPoly operator+(const MultiPoly &o) const;
    MultiPoly operator-(const MultiPoly &o) const;

    int degree() const;
    double eval(const std::array<double, 4> &x) const;
    double coeff(const Monomial &m) const;
    double max_abs_coeff() const;
};

// All monomials of total degree <= max_degree in the first n_vars variables,
// in descending grevlex order.
std::vector<Monomial> monomials_up_to_degree(int n_vars, int max_degree);

// Every product equation x multiplier, expanded and term-collected.
std::vector<MultiPoly> expand_and_multiply(const std::vector<MultiPoly> &equations,
                                           const std::vector<Monomial> &multipliers);

} // namespace sego
