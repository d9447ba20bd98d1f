#include "sego/template_solver.h"

#include "sego/errors.h"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>

namespace sego {

EliminationTemplate::EliminationTemplate(std::vector<std::vector<Monomial>> gen_supports,
                                         std::vector<std::pair<int, Monomial>> rows,
                                         std::vector<Monomial> basis,
                                         std::vector<Monomial> targets)
    : gen_supports_(std::move(gen_supports)), rows_(std::move(rows)), basis_(std::move(basis)) {
    // column set = union of shifted supports
    std::set<uint32_t> basis_keys;
    for (const auto &m : basis_)
        basis_keys.insert(m.key());

    std::vector<Monomial> nonbasis;
    std::set<uint32_t> seen;
    for (const auto &[g, mult] : rows_) {
        for (const auto &m : gen_supports_[g]) {
            Monomial p = m * mult;
            if (basis_keys.count(p.key()) || !seen.insert(p.key()).second)
                continue;
            nonbasis.push_back(p);
        }
    }
    std::sort(nonbasis.begin(), nonbasis.end(), grevlex_greater);
    n_nonbasis_ = static_cast<int>(nonbasis.size());

    columns_ = std::move(nonbasis);
    columns_.insert(columns_.end(), basis_.begin(), basis_.end());
    for (int i = 0; i < static_cast<int>(columns_.size()); ++i)
        col_index_[columns_[i].key()] = i;

    row_cols_.resize(rows_.size());
    for (size_t r = 0; r < rows_.size(); ++r) {
        const auto &[g, mult] = rows_[r];
        row_cols_[r].reserve(gen_supports_[g].size());
        for (const auto &m : gen_supports_[g])
            row_cols_[r].push_back(col_index_.at((m * mult).key()));
    }

    for (const Monomial &t : targets) {
        int col = column_of(t);
        if (col < 0)
            throw_invalid_input("elimination template does not cover a target monomial");
        if (col < n_nonbasis_)
            target_cols_.push_back(col);
    }
}

bool EliminationTemplate::targets_expressed(const std::vector<bool> &expressed) const {
    for (int col : target_cols_)
        if (!expressed[col])
            return false;
    return true;
}

int EliminationTemplate::column_of(const Monomial &m) const {
    auto it = col_index_.find(m.key());
    return it == col_index_.end() ? -1 : it->second;
}

Eigen::MatrixXd EliminationTemplate::instantiate_rows(const std::vector<Eigen::VectorXd> &coeffs,
                                                      const std::vector<int> &which) const {
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(which.size(), columns_.size());
    for (size_t i = 0; i < which.size(); ++i) {
        int r = which[i];
        int g = rows_[r].first;
        const auto &cols = row_cols_[r];
        const Eigen::VectorXd &c = coeffs[g];
        for (size_t k = 0; k < cols.size(); ++k)
            T(i, cols[k]) += c[k];
        double m = T.row(i).cwiseAbs().maxCoeff();
        if (m > 0.0)
            T.row(i) /= m;
    }
    return T;
}

Eigen::MatrixXd EliminationTemplate::instantiate(const std::vector<Eigen::VectorXd> &coeffs) const {
    std::vector<int> all(rows_.size());
    for (size_t i = 0; i < all.size(); ++i)
        all[i] = static_cast<int>(i);
    return instantiate_rows(coeffs, all);
}

// Gauss-Jordan over the fixed column order (non-basis first): columns the
// row space cannot pivot are skipped. The pivot row of a reachable non-basis
// monomial is its unique expression with zeros on every other pivot column,
// so its basis coefficients are exactly the quotient-ring reduction.
Eigen::MatrixXd EliminationTemplate::gauss_jordan(Eigen::MatrixXd T, std::vector<bool> *expressed,
                                                  std::vector<int> *pivot_rows) const {
    const int nr = static_cast<int>(T.rows());
    const int nb = static_cast<int>(basis_.size());
    if (expressed)
        expressed->assign(n_nonbasis_, false);
    std::vector<int> origin(nr);
    for (int i = 0; i < nr; ++i)
        origin[i] = i;

    int row = 0;
    Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n_nonbasis_, nb);
    std::vector<int> pivot_of_col(n_nonbasis_, -1);
    for (int c = 0; c < n_nonbasis_ && row < nr; ++c) {
        int best = -1;
        double bestv = 1e-10;
        for (int r = row; r < nr; ++r) {
            double v = std::abs(T(r, c));
            if (v > bestv) {
                bestv = v;
                best = r;
            }
        }
        if (best < 0)
            continue; // unreachable monomial
        T.row(best).swap(T.row(row));
        std::swap(origin[best], origin[row]);
        T.row(row) /= T(row, c);
        for (int r = 0; r < nr; ++r) {
            if (r == row)
                continue;
            double f = T(r, c);
            if (f != 0.0) {
                T.row(r) -= f * T.row(row);
                T(r, c) = 0.0;
            }
        }
        pivot_of_col[c] = row;
        if (pivot_rows)
            pivot_rows->push_back(origin[row]);
        ++row;
    }
    for (int c = 0; c < n_nonbasis_; ++c) {
        if (pivot_of_col[c] < 0)
            continue;
        X.row(c) = -T.row(pivot_of_col[c]).tail(nb);
        if (expressed)
            (*expressed)[c] = true;
    }
    return X;
}

bool EliminationTemplate::accumulate_selection(const std::vector<Eigen::VectorXd> &coeffs) {
    std::vector<bool> expressed;
    std::vector<int> pivots;
    gauss_jordan(instantiate(coeffs), &expressed, &pivots);
    if (!targets_expressed(expressed))
        return false;
    pivots.insert(pivots.end(), selected_.begin(), selected_.end());
    std::sort(pivots.begin(), pivots.end());
    pivots.erase(std::unique(pivots.begin(), pivots.end()), pivots.end());
    selected_ = std::move(pivots);
    return true;
}

Eigen::MatrixXd EliminationTemplate::reduce(const std::vector<Eigen::VectorXd> &coeffs,
                                            std::vector<bool> *expressed) const {
    std::vector<bool> local;
    std::vector<bool> *flags = expressed ? expressed : &local;
    if (!selected_.empty() && std::getenv("SEGO_NO_ROW_SELECTION") == nullptr) {
        Eigen::MatrixXd X = gauss_jordan(instantiate_rows(coeffs, selected_), flags, nullptr);
        if (targets_expressed(*flags))
            return X;
        // the pruned subset lost rank on this instance; use every row
    }
    return gauss_jordan(instantiate(coeffs), flags, nullptr);
}

Eigen::MatrixXd action_matrix_from_reduction(const EliminationTemplate &T, const Eigen::MatrixXd &X,
                                             const std::vector<bool> &expressed, int action_var) {
    const auto &basis = T.basis();
    const int n = static_cast<int>(basis.size());
    Monomial av;
    av.e[action_var] = 1;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        Monomial m = basis[i] * av;
        int col = T.column_of(m);
        if (col < 0)
            throw_numeric_failure("action monomial missing from template columns");
        if (col >= T.num_nonbasis()) {
            A(i, col - T.num_nonbasis()) = 1.0;
        } else {
            if (!expressed[col])
                throw_degenerate_instance("action monomial lost in the template reduction");
            A.row(i) = X.row(col);
        }
    }
    return A;
}

Eigen::MatrixXd reduce_template(const EliminationTemplate &T,
                                const std::vector<Eigen::VectorXd> &coeffs, int action_var) {
    std::vector<bool> expressed;
    Eigen::MatrixXd X = T.reduce(coeffs, &expressed);
    return action_matrix_from_reduction(T, X, expressed, action_var);
}

std::vector<std::array<double, 4>> eigen_solutions(const Eigen::MatrixXd &A,
                                                   const std::vector<Monomial> &basis, int n_vars,
                                                   const EigenSolutionOptions &opts) {
    if (!A.allFinite())
        throw_numeric_failure("eigen_solutions: non-finite action matrix");
    Eigen::EigenSolver<Eigen::MatrixXd> es(A);
    if (es.info() != Eigen::Success)
        throw_numeric_failure("eigen_solutions: eigendecomposition failed");

    int idx_one = -1;
    std::array<int, 4> idx_var = {-1, -1, -1, -1};
    for (int i = 0; i < static_cast<int>(basis.size()); ++i) {
        if (basis[i].degree() == 0)
            idx_one = i;
        for (int v = 0; v < n_vars; ++v) {
            Monomial mv;
            mv.e[v] = 1;
            if (basis[i] == mv)
                idx_var[v] = i;
        }
    }
    if (idx_one < 0)
        throw_invalid_input("eigen_solutions: basis must contain the unit monomial");
    for (int v = 0; v < n_vars; ++v)
        if (idx_var[v] < 0)
            throw_invalid_input("eigen_solutions: basis must contain all single variables");

    std::vector<std::array<double, 4>> out;
    for (int k = 0; k < A.rows(); ++k) {
        std::complex<double> lambda = es.eigenvalues()(k);
        if (std::abs(lambda.imag()) > opts.imag_tol * (1.0 + std::abs(lambda.real())))
            continue;
        Eigen::VectorXcd vc = es.eigenvectors().col(k);
        // rotate the phase so the dominant component is real
        int dom;
        vc.cwiseAbs().maxCoeff(&dom);
        std::complex<double> phase = vc(dom) / std::abs(vc(dom));
        Eigen::VectorXd v = (vc / phase).real();
        if (std::abs(v(idx_one)) < 1e-12 * v.cwiseAbs().maxCoeff())
            continue;
        v /= v(idx_one);

        std::array<double, 4> x = {0, 0, 0, 0};
        for (int vi = 0; vi < n_vars; ++vi)
            x[vi] = v(idx_var[vi]);

        bool consistent = true;
        for (int i = 0; i < static_cast<int>(basis.size()) && consistent; ++i) {
            if (basis[i].degree() < 2)
                continue;
            double prod = 1.0;
            for (int vi = 0; vi < 4; ++vi)
                for (int r = 0; r < basis[i].e[vi]; ++r)
                    prod *= x[vi];
            double ref = std::max({1.0, std::abs(prod), std::abs(v(i))});
            if (std::abs(v(i) - prod) > opts.consistency_tol * ref)
                consistent = false;
        }
        if (consistent)
            out.push_back(x);
    }
    return out;
}

std::vector<std::array<double, 4>>
eigen_solutions_action(const Eigen::MatrixXd &A, const std::vector<Monomial> &basis, int n_vars,
                       int action_var, const EigenSolutionOptions &opts) {
    if (!A.allFinite())
        throw_numeric_failure("eigen_solutions_action: non-finite action matrix");
    const int n = static_cast<int>(basis.size());

    // residue monomials: the basis with the action variable divided out
    std::vector<Monomial> residues;
    std::vector<int> residue_of(n), power_of(n);
    for (int i = 0; i < n; ++i) {
        Monomial r = basis[i];
        power_of[i] = r.e[action_var];
        r.e[action_var] = 0;
        int idx = -1;
        for (size_t k = 0; k < residues.size(); ++k)
            if (residues[k] == r)
                idx = static_cast<int>(k);
        if (idx < 0) {
            idx = static_cast<int>(residues.size());
            residues.push_back(r);
        }
        residue_of[i] = idx;
    }
    const int nr = static_cast<int>(residues.size());

    int res_one = -1;
    std::array<int, 4> res_var = {-1, -1, -1, -1};
    for (int k = 0; k < nr; ++k) {
        if (residues[k].degree() == 0)
            res_one = k;
        for (int v = 0; v < n_vars; ++v) {
            Monomial mv;
            mv.e[v] = 1;
            if (residues[k] == mv)
                res_var[v] = k;
        }
    }
    if (res_one < 0)
        throw_invalid_input("eigen_solutions_action: basis must contain the unit monomial");

    Eigen::EigenSolver<Eigen::MatrixXd> es(A, false);
    if (es.info() != Eigen::Success)
        throw_numeric_failure("eigen_solutions_action: eigendecomposition failed");

    std::vector<std::array<double, 4>> out;
    for (int k = 0; k < n; ++k) {
        std::complex<double> lambda = es.eigenvalues()(k);
        if (std::abs(lambda.imag()) > opts.imag_tol * (1.0 + std::abs(lambda.real())))
            continue;
        double z = lambda.real();

        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, nr);
        for (int i = 0; i < n; ++i)
            M(i, residue_of[i]) = std::pow(z, power_of[i]);
        Eigen::MatrixXd K = A * M - z * M;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(K, Eigen::ComputeFullV);
        Eigen::VectorXd w = svd.matrixV().col(nr - 1);
        if (std::abs(w(res_one)) < 1e-12 * w.cwiseAbs().maxCoeff())
            continue;
        w /= w(res_one);

        std::array<double, 4> x = {0, 0, 0, 0};
        x[action_var] = z;
        bool have_all = true;
        for (int v = 0; v < n_vars; ++v) {
            if (v == action_var)
                continue;
            if (res_var[v] < 0) {
                have_all = false;
                break;
            }
            x[v] = w(res_var[v]);
        }
        if (!have_all)
            throw_invalid_input("eigen_solutions_action: basis must contain all single variables");

        bool consistent = true;
        for (int r = 0; r < nr && consistent; ++r) {
            if (residues[r].degree() < 2)
                continue;
            double prod = 1.0;
            for (int vi = 0; vi < 4; ++vi)
                for (int e = 0; e < residues[r].e[vi]; ++e)
                    prod *= x[vi];
            double ref = std::max({1.0, std::abs(prod), std::abs(w(r))});
            if (std::abs(w(r) - prod) > opts.consistency_tol * ref)
                consistent = false;
        }
        if (consistent)
            out.push_back(x);
    }
    return out;
}

std::vector<Monomial> discover_standard_monomials(const std::vector<MultiPoly> &rows,
                                                  double pivot_tol) {
    std::vector<Monomial> cols;
    {
        std::set<uint32_t> seen;
        for (const auto &p : rows)
            for (const auto &[m, c] : p.terms)
                if (seen.insert(m.key()).second)
                    cols.push_back(m);
    }
    std::sort(cols.begin(), cols.end(), grevlex_greater);
    std::unordered_map<uint32_t, int> idx;
    for (int i = 0; i < static_cast<int>(cols.size()); ++i)
        idx[cols[i].key()] = i;

    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(rows.size(), cols.size());
    for (size_t r = 0; r < rows.size(); ++r) {
        for (const auto &[m, c] : rows[r].terms)
            T(r, idx[m.key()]) += c;
        double mx = T.row(r).cwiseAbs().maxCoeff();
        if (mx > 0.0)
            T.row(r) /= mx;
    }

    // Gauss-Jordan with row pivoting, fixed column order.
    int nr = static_cast<int>(rows.size()), nc = static_cast<int>(cols.size());
    int row = 0;
    std::vector<int> pivot_cols;
    for (int c = 0; c < nc && row < nr; ++c) {
        int best = -1;
        double bestv = 0.0;
        for (int r = row; r < nr; ++r)
            if (std::abs(T(r, c)) > bestv) {
                bestv = std::abs(T(r, c));
                best = r;
            }
        if (bestv < pivot_tol)
            continue;
        T.row(best).swap(T.row(row));
        T.row(row) /= T(row, c);
        for (int r = 0; r < nr; ++r)
            if (r != row && T(r, c) != 0.0)
                T.row(r) -= T(r, c) * T.row(row);
        pivot_cols.push_back(c);
        ++row;
    }

    std::vector<Monomial> standard;
    std::set<int> piv(pivot_cols.begin(), pivot_cols.end());
    for (int c = 0; c < nc; ++c)
        if (!piv.count(c))
            standard.push_back(cols[c]);
    std::sort(standard.begin(), standard.end(), grevlex_less);
    return standard;
}

} // namespace sego
