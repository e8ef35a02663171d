#include "dynsheaf/pairs_ext.hpp"

#include "dynsheaf/errors.hpp"

#include <algorithm>
#include <numeric>

namespace dynsheaf {

DynPair make_pair(const Eigen::MatrixXcd& phi) {
    if (phi.rows() != phi.cols()) throw DimensionMismatch("endomorphism must be square");
    return {phi};
}

LabeledMatrix difference_operator(const DynPair& a, const DynPair& b) {
    int n = a.dim(), m = b.dim();
    std::vector<std::string> labels;
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i)
            labels.push_back("E" + std::to_string(i) + std::to_string(j));
    LabeledMatrix S(labels, labels);
    // S(theta) = theta * phi - psi * theta on matrix units E_{ij} (i: row in
    // W, j: column over V); column index of E_{ij} is j*m + i.
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) {
            int col = j * m + i;
            // theta phi: (E_ij phi)_{ik} = phi(j,k) -> entry rows (i,k)
            for (int k = 0; k < n; ++k) S.m(k * m + i, col) += a.phi(j, k);
            // psi theta: (psi E_ij)_{kj} = psi(k,i)
            for (int k = 0; k < m; ++k) S.m(j * m + k, col) -= b.phi(k, i);
        }
    return S;
}

PairHomExt pair_hom_ext(const DynPair& a, const DynPair& b, const Tolerances& tol) {
    LabeledMatrix S = difference_operator(a, b);
    PairHomExt out;
    if (S.cols() == 0) {
        out.hom_dim = 0;
        out.ext1_dim = 0;
        return out;
    }
    RankKernel rk = rank_and_kernel(S, tol);
    out.hom_dim = S.cols() - rk.rank;
    out.ext1_dim = S.rows() - rk.rank;
    out.hom_basis = rk.kernel;
    return out;
}

Eigen::MatrixXcd extension_matrix(const CocycleClass& c) {
    int n = c.source.dim(), m = c.target.dim();
    if (c.h.rows() != m || c.h.cols() != n)
        throw DimensionMismatch("cocycle dimensions do not match the pairs");
    Eigen::MatrixXcd E = Eigen::MatrixXcd::Zero(m + n, m + n);
    E.topLeftCorner(m, m) = c.target.phi;
    E.topRightCorner(m, n) = c.h;
    E.bottomRightCorner(n, n) = c.source.phi;
    return E;
}

bool is_split(const CocycleClass& c, const Tolerances& tol) {
    // h lies in the image of S(theta) = psi theta - theta phi ?
    int n = c.source.dim(), m = c.target.dim();
    Eigen::MatrixXcd S(m * n, m * n);
    S.setZero();
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) {
            int col = j * m + i;
            for (int k = 0; k < m; ++k) S(j * m + k, col) += c.target.phi(k, i);
            for (int k = 0; k < n; ++k) S(k * m + i, col) -= c.source.phi(j, k);
        }
    Eigen::VectorXcd rhs(m * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i) rhs(j * m + i) = c.h(i, j);
    if (m * n == 0) return true;
    Eigen::VectorXcd sol = S.completeOrthogonalDecomposition().solve(rhs);
    double resid = (S * sol - rhs).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
    return resid <= std::sqrt(tol.eps_rank) * scale;
}

CocycleClass baer_sum(const CocycleClass& c1, const CocycleClass& c2) {
    if (c1.source.dim() != c2.source.dim() || c1.target.dim() != c2.target.dim())
        throw DimensionMismatch("Baer sum needs matching source and target pairs");
    return {c1.source, c1.target, c1.h + c2.h};
}

SpectralReport two_column_assemble(const std::vector<SpectralRow>& rows, const Tolerances& tol) {
    SpectralReport rep;
    int chi_columns = 0;
    for (size_t q = 0; q < rows.size(); ++q) {
        const SpectralRow& r = rows[q];
        if (r.d.rows() != r.e1 || r.d.cols() != r.e0)
            throw DimensionMismatch("row " + std::to_string(q) +
                                    ": differential shape does not match the dims");
        int rank = 0;
        std::vector<std::string> klabels;
        if (r.e0 == 0) {
            rank = 0;
        } else if (r.e1 == 0) {
            rank = 0;
        } else {
            RankKernel rk = rank_and_kernel(r.d, tol);
            rank = rk.rank;
            klabels = rk.kernel.row_labels;
        }
        rep.K.push_back(r.e0 - rank);
        rep.C.push_back(r.e1 - rank);
        rep.kernel_labels.push_back(klabels);
        chi_columns += (q % 2 == 0 ? 1 : -1) * (r.e0 - r.e1);
    }
    for (size_t n = 0; n <= rows.size(); ++n) {
        int c_prev = n == 0 ? 0 : rep.C[n - 1];
        int k_here = n < rows.size() ? rep.K[n] : 0;
        rep.H.push_back(c_prev + k_here);
    }
    int chi_H = 0;
    for (size_t n = 0; n < rep.H.size(); ++n) chi_H += (n % 2 == 0 ? 1 : -1) * rep.H[n];
    if (chi_H != chi_columns)
        throw DimensionMismatch("Euler characteristic mismatch across sheets");
    rep.euler = chi_H;
    return rep;
}

namespace {

// Elements of a product of cyclic groups as mixed-radix tuples.
struct AbelianGroup {
    std::vector<int> factors;
    int order() const {
        int n = 1;
        for (int f : factors) n *= f;
        return n;
    }
    std::vector<int> element(int idx) const {
        std::vector<int> e(factors.size());
        for (size_t i = 0; i < factors.size(); ++i) {
            e[i] = idx % factors[i];
            idx /= factors[i];
        }
        return e;
    }
    int index(const std::vector<int>& e) const {
        int idx = 0;
        for (size_t i = factors.size(); i-- > 0;) idx = idx * factors[i] + e[i];
        return idx;
    }
    int add(int a, int b) const {
        auto ea = element(a), eb = element(b);
        for (size_t i = 0; i < factors.size(); ++i) ea[i] = (ea[i] + eb[i]) % factors[i];
        return index(ea);
    }
};

} // namespace

int torsor_count(const std::vector<int>& cyclic_factors) {
    AbelianGroup G{cyclic_factors};
    for (int f : cyclic_factors)
        if (f < 1) throw PreconditionViolation("cyclic factors must be positive");
    int n = G.order();
    if (n > 64) throw PreconditionViolation("group too large to enumerate");

    // A torsor pair is the group with right translation action plus an
    // equivariant structure endomorphism T; equivariance forces T to be the
    // left translation by T(identity), so candidates are indexed by x in G.
    // Pairs x, y are equivalent when some equivariant bijection (again a
    // left translation, by a) satisfies L_a T_x = T_y L_a pointwise.
    std::vector<char> used(n, 0);
    int classes = 0;
    for (int x = 0; x < n; ++x) {
        if (used[x]) continue;
        ++classes;
        for (int a = 0; a < n; ++a) {
            // L_a T_x (g) = a + x + g; T_y L_a (g) = y + a + g: y = a + x - a.
            for (int y = 0; y < n; ++y) {
                bool commutes = true;
                for (int g = 0; g < n && commutes; ++g)
                    commutes = G.add(a, G.add(x, g)) == G.add(y, G.add(a, g));
                if (commutes) used[y] = 1;
            }
        }
    }
    return classes;
}

bool h2_line_bundle_check(int D) {
    if (D < 1) throw PreconditionViolation("degree must be at least 1");
    return D - 1 != 0;
}

} // namespace dynsheaf
