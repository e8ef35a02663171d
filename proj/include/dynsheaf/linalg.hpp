#pragma once

#include "dynsheaf/poly.hpp"

#include <Eigen/Dense>

#include <functional>
#include <string>
#include <vector>

namespace dynsheaf {

/// Matrix of complex scalars with basis labels on both sides. Labels are
/// duplicate-free and their count matches the entry grid.
struct LabeledMatrix {
    std::vector<std::string> row_labels;
    std::vector<std::string> col_labels;
    Eigen::MatrixXcd m;

    LabeledMatrix() : m(0, 0) {}
    LabeledMatrix(std::vector<std::string> rows, std::vector<std::string> cols);

    int rows() const { return static_cast<int>(m.rows()); }
    int cols() const { return static_cast<int>(m.cols()); }
    void check() const; // label invariants
};

struct RankKernel {
    int rank = 0;
    LabeledMatrix kernel; // orthonormal kernel basis, one column per vector
    double sigma_max = 0;
    double smallest_retained = 0;  // smallest singular value counted into the rank
    double largest_discarded = 0;  // largest singular value below the cutoff
};

/// SVD rank with relative cutoff eps_rank * max(sigma_max, reference_scale).
/// Throws AmbiguousRank when a singular value sits within a factor 10 of the
/// cutoff. reference_scale guards matrices that are legitimately ~0.
RankKernel rank_and_kernel(const LabeledMatrix& M, const Tolerances& tol,
                           double reference_scale = 0.0);

struct FitResult {
    Eigen::VectorXcd coeffs;
    double residual = 0; // max absolute misfit over the samples
};

/// Least squares fit of values[i] ~ sum_j coeffs[j] * basis(j, inputs[i]).
/// Throws OverdeterminedInconsistent when the residual exceeds eps_residual.
FitResult fit_in_basis(const std::vector<Cx>& inputs, const std::vector<Cx>& values,
                       int basis_size, const std::function<Cx(int, Cx)>& basis_evaluator,
                       const Tolerances& tol);

} // namespace dynsheaf
