#include "dynsheaf/linalg.hpp"

#include "dynsheaf/errors.hpp"

#include <set>

namespace dynsheaf {

LabeledMatrix::LabeledMatrix(std::vector<std::string> rows, std::vector<std::string> cols)
    : row_labels(std::move(rows)), col_labels(std::move(cols)) {
    m = Eigen::MatrixXcd::Zero(row_labels.size(), col_labels.size());
    check();
}

void LabeledMatrix::check() const {
    std::set<std::string> r(row_labels.begin(), row_labels.end());
    std::set<std::string> c(col_labels.begin(), col_labels.end());
    if ((int)r.size() != rows() || (int)c.size() != cols())
        throw Error("DuplicateLabel", "basis labels must be duplicate-free");
    if ((int)row_labels.size() != m.rows() || (int)col_labels.size() != m.cols())
        throw DimensionMismatch("label count does not match entry grid");
}

RankKernel rank_and_kernel(const LabeledMatrix& M, const Tolerances& tol,
                           double reference_scale) {
    RankKernel out;
    int n = M.cols();
    if (n == 0) {
        out.kernel = LabeledMatrix({}, {});
        return out;
    }
    if (M.rows() == 0) {
        // No constraints: the whole domain is kernel.
        out.rank = 0;
        out.kernel.row_labels = M.col_labels;
        for (int j = 0; j < n; ++j) out.kernel.col_labels.push_back("ker" + std::to_string(j));
        out.kernel.m = Eigen::MatrixXcd::Identity(n, n);
        return out;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M.m, Eigen::ComputeThinU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    out.sigma_max = smax;
    double cutoff = tol.eps_rank * std::max(smax, reference_scale);
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) {
        if (sv(i) >= cutoff && sv(i) > 0) ++rank;
    }
    for (int i = 0; i < sv.size(); ++i) {
        double s = sv(i);
        if (s > 0 && cutoff > 0 && s > cutoff / 10 && s < cutoff * 10)
            throw AmbiguousRank("singular value " + std::to_string(s) +
                                " within factor 10 of cutoff " + std::to_string(cutoff));
    }
    out.rank = rank;
    out.smallest_retained = rank > 0 ? sv(rank - 1) : 0.0;
    out.largest_discarded = rank < sv.size() ? sv(rank) : 0.0;
    out.kernel.row_labels = M.col_labels;
    int kdim = n - rank;
    for (int j = 0; j < kdim; ++j) out.kernel.col_labels.push_back("ker" + std::to_string(j));
    out.kernel.m = svd.matrixV().rightCols(kdim);
    return out;
}

FitResult fit_in_basis(const std::vector<Cx>& inputs, const std::vector<Cx>& values,
                       int basis_size, const std::function<Cx(int, Cx)>& basis_evaluator,
                       const Tolerances& tol) {
    if ((int)inputs.size() < basis_size)
        throw PreconditionViolation("need at least as many samples as basis elements");
    Eigen::MatrixXcd A(inputs.size(), basis_size);
    Eigen::VectorXcd b(inputs.size());
    for (size_t i = 0; i < inputs.size(); ++i) {
        b(i) = values[i];
        for (int j = 0; j < basis_size; ++j) A(i, j) = basis_evaluator(j, inputs[i]);
    }
    FitResult r;
    if (basis_size == 0) {
        r.coeffs = Eigen::VectorXcd(0);
    } else {
        r.coeffs = A.colPivHouseholderQr().solve(b);
    }
    Eigen::VectorXcd mis = basis_size ? (A * r.coeffs - b).eval() : (-b).eval();
    r.residual = mis.size() ? mis.cwiseAbs().maxCoeff() : 0.0;
    if (r.residual > tol.eps_residual)
        throw OverdeterminedInconsistent("fit residual " + std::to_string(r.residual) +
                                         " exceeds eps_residual");
    return r;
}

} // namespace dynsheaf
