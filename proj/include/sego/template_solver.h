#pragma once

#include "sego/poly.h"

#include <Eigen/Core>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

namespace sego {

// Elimination template with a fixed symbolic structure: every row is one
// generator polynomial shifted by a multiplier monomial. Columns are ordered
// [non-basis monomials, descending grevlex | quotient basis]. Reduction
// expresses reachable non-basis monomials as basis combinations; `targets`
// names the monomials an action matrix will need (the reduction falls back
// to the full row set when a pruned subset misses one).
class EliminationTemplate {
  public:
    EliminationTemplate(std::vector<std::vector<Monomial>> gen_supports,
                        std::vector<std::pair<int, Monomial>> rows, std::vector<Monomial> basis,
                        std::vector<Monomial> targets = {});

    int num_rows() const { return static_cast<int>(rows_.size()); }
    int num_cols() const { return static_cast<int>(columns_.size()); }
    int num_nonbasis() const { return n_nonbasis_; }
    const std::vector<Monomial> &columns() const { return columns_; }
    const std::vector<Monomial> &basis() const { return basis_; }
    int column_of(const Monomial &m) const; // -1 when the monomial is absent

    // Dense template for one instance; coeffs[g] is aligned with the
    // generator's structural support.
    Eigen::MatrixXd instantiate(const std::vector<Eigen::VectorXd> &coeffs) const;

    // Accumulates the pivot rows of a generic instance into the pruned row
    // subset. Returns true when all targets were expressible.
    bool accumulate_selection(const std::vector<Eigen::VectorXd> &coeffs);
    bool has_selection() const { return !selected_.empty(); }
    int selection_size() const { return static_cast<int>(selected_.size()); }

    // Basis-combination expressions of the non-basis monomials. Row i of the
    // result corresponds to non-basis column i; expressed[i] reports whether
    // the row space reaches that monomial.
    Eigen::MatrixXd reduce(const std::vector<Eigen::VectorXd> &coeffs,
                           std::vector<bool> *expressed = nullptr) const;

  private:
    Eigen::MatrixXd instantiate_rows(const std::vector<Eigen::VectorXd> &coeffs,
                                     const std::vector<int> &which) const;
    Eigen::MatrixXd gauss_jordan(Eigen::MatrixXd T, std::vector<bool> *expressed,
                                 std::vector<int> *pivot_rows) const;
    bool targets_expressed(const std::vector<bool> &expressed) const;

    std::vector<std::vector<Monomial>> gen_supports_;
    std::vector<std::pair<int, Monomial>> rows_;
    std::vector<Monomial> columns_;
    std::vector<Monomial> basis_;
    std::vector<int> target_cols_;
    int n_nonbasis_ = 0;
    std::unordered_map<uint32_t, int> col_index_;
    std::vector<std::vector<int>> row_cols_; // scatter targets per row
    std::vector<int> selected_;
};

// Action matrix for multiplication by one variable, assembled from the
// reduction X of a template whose basis equals `basis`.
Eigen::MatrixXd action_matrix_from_reduction(const EliminationTemplate &T, const Eigen::MatrixXd &X,
                                             const std::vector<bool> &expressed, int action_var);

// Variable assignments read from the eigenvectors of an action matrix.
// Solutions with significant imaginary parts or inconsistent higher-order
// monomial coordinates are discarded.
struct EigenSolutionOptions {
    double imag_tol = 1e-6;
    double consistency_tol = 1e-4;
};

std::vector<std::array<double, 4>> eigen_solutions(const Eigen::MatrixXd &A,
                                                   const std::vector<Monomial> &basis, int n_vars,
                                                   const EigenSolutionOptions &opts = {});

// Extraction that solves the structured null-space system of (A - lambda I)
// for each kept eigenvalue instead of reading one eigenvector: with the
// action variable fixed at the eigenvalue, the basis collapses onto a small
// set of residue monomials and every action-matrix row constrains them.
// Considerably more robust under clustered spectra.
std::vector<std::array<double, 4>>
eigen_solutions_action(const Eigen::MatrixXd &A, const std::vector<Monomial> &basis, int n_vars,
                       int action_var, const EigenSolutionOptions &opts = {});

// Convenience wrapper matching the single-template flow: reduce, then build
// the action matrix for `action_var`.
Eigen::MatrixXd reduce_template(const EliminationTemplate &T,
                                const std::vector<Eigen::VectorXd> &coeffs, int action_var);

// Standard monomials of the row space on a generic instance: non-pivot
// columns of the row-reduced template under pure descending grevlex column
// order. Used at bring-up to pin down quotient bases.
std::vector<Monomial> discover_standard_monomials(const std::vector<MultiPoly> &rows,
                                                  double pivot_tol = 1e-8);

} // namespace sego
