#include "sego/poly.h"

#include <algorithm>
#include <cmath>

namespace sego {

void MultiPoly::normalize() {
    std::sort(terms.begin(), terms.end(),
              [](const auto &a, const auto &b) { return grevlex_greater(a.first, b.first); });
    std::vector<std::pair<Monomial, double>> merged;
    merged.reserve(terms.size());
    for (const auto &[m, c] : terms) {
        if (!merged.empty() && merged.back().first == m)
            merged.back().second += c;
        else
            merged.emplace_back(m, c);
    }
    merged.erase(std::remove_if(merged.begin(), merged.end(),
                                [](const auto &t) { return t.second == 0.0; }),
                 merged.end());
    terms = std::move(merged);
}

MultiPoly MultiPoly::operator*(const MultiPoly &o) const {
    MultiPoly r;
    r.terms.reserve(terms.size() * o.terms.size());
    for (const auto &[ma, ca] : terms)
        for (const auto &[mb, cb] : o.terms)
            r.terms.emplace_back(ma * mb, ca * cb);
    r.normalize();
    return r;
}

MultiPoly MultiPoly::operator*(const Monomial &m) const {
    MultiPoly r;
    r.terms.reserve(terms.size());
    for (const auto &[ma, ca] : terms)
        r.terms.emplace_back(ma * m, ca);
    return r; // shifting preserves the term order
}

MultiPoly MultiPoly::operator*(double s) const {
    MultiPoly r = *this;
    for (auto &[m, c] : r.terms)
        c *= s;
    r.normalize();
    return r;
}

MultiPoly MultiPoly::operator+(const MultiPoly &o) const {
    MultiPoly r;
    r.terms.reserve(terms.size() + o.terms.size());
    r.terms.insert(r.terms.end(), terms.begin(), terms.end());
    r.terms.insert(r.terms.end(), o.terms.begin(), o.terms.end());
    r.normalize();
    return r;
}

MultiPoly MultiPoly::operator-(const MultiPoly &o) const { return *this + o * -1.0; }

int MultiPoly::degree() const {
    int d = 0;
    for (const auto &[m, c] : terms)
        d = std::max(d, m.degree());
    return d;
}

double MultiPoly::eval(const std::array<double, 4> &x) const {
    double s = 0.0;
    for (const auto &[m, c] : terms) {
        double v = c;
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < m.e[i]; ++k)
                v *= x[i];
        s += v;
    }
    return s;
}

double MultiPoly::coeff(const Monomial &m) const {
    for (const auto &[mm, c] : terms)
        if (mm == m)
            return c;
    return 0.0;
}

double MultiPoly::max_abs_coeff() const {
    double s = 0.0;
    for (const auto &[m, c] : terms)
        s = std::max(s, std::abs(c));
    return s;
}

std::vector<Monomial> monomials_up_to_degree(int n_vars, int max_degree) {
    if (n_vars < 1 || n_vars > 4)
        throw_invalid_input("monomials_up_to_degree: n_vars must be 1..4");
    std::vector<Monomial> out;
    int lim = max_degree;
    for (int e0 = 0; e0 <= lim; ++e0)
        for (int e1 = 0; e1 <= (n_vars > 1 ? lim - e0 : 0); ++e1)
            for (int e2 = 0; e2 <= (n_vars > 2 ? lim - e0 - e1 : 0); ++e2)
                for (int e3 = 0; e3 <= (n_vars > 3 ? lim - e0 - e1 - e2 : 0); ++e3)
                    out.emplace_back(e0, e1, e2, e3);
    std::sort(out.begin(), out.end(), grevlex_greater);
    return out;
}

std::vector<MultiPoly> expand_and_multiply(const std::vector<MultiPoly> &equations,
                                           const std::vector<Monomial> &multipliers) {
    std::vector<MultiPoly> out;
    out.reserve(equations.size() * multipliers.size());
    for (const auto &eq : equations)
        for (const auto &m : multipliers)
            out.push_back(eq * m);
    return out;
}

} // namespace sego
