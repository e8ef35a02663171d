#pragma once

#include "dynsheaf/linalg.hpp"

#include <vector>

namespace dynsheaf {

/// Dynamical pair: a finite-dimensional vector space with an endomorphism.
struct DynPair {
    Eigen::MatrixXcd phi; // square
    int dim() const { return static_cast<int>(phi.rows()); }
};

DynPair make_pair(const Eigen::MatrixXcd& phi);

/// Sylvester-type difference operator S(theta) = theta phi_a - psi_b theta on
/// Hom(V_a, V_b), as a matrix in the matrix-unit basis (column-major labels).
LabeledMatrix difference_operator(const DynPair& a, const DynPair& b);

struct PairHomExt {
    int hom_dim = 0;
    int ext1_dim = 0;
    LabeledMatrix hom_basis; // kernel vectors of the difference operator
};

/// hom = ker S, ext1 = coker S; positive-degree Ext of plain vector spaces
/// vanish, so the two-column sequence collapses to this single row.
PairHomExt pair_hom_ext(const DynPair& a, const DynPair& b, const Tolerances& tol);

/// A 1-extension class of (V, phi) by (W, psi) represented by its cocycle
/// h: V -> W; the middle object is [[psi, h], [0, phi]] on W + V.
struct CocycleClass {
    DynPair source; // (V, phi)
    DynPair target; // (W, psi)
    Eigen::MatrixXcd h;
};

Eigen::MatrixXcd extension_matrix(const CocycleClass& c);
/// Split iff h = psi theta - theta phi is solvable.
bool is_split(const CocycleClass& c, const Tolerances& tol);
CocycleClass baer_sum(const CocycleClass& c1, const CocycleClass& c2);

/// One row of the two-column first sheet: dims of E^{0,q}, E^{1,q} and the
/// differential between them.
struct SpectralRow {
    int e0 = 0;
    int e1 = 0;
    LabeledMatrix d; // e1 x e0
};

struct SpectralReport {
    std::vector<int> K; // K^q = dim ker d^{0,q}
    std::vector<int> C; // C^q = dim coker d^{0,q}
    std::vector<int> H; // H^n = C^{n-1} + K^n
    int euler = 0;
    std::vector<std::vector<std::string>> kernel_labels; // per row
};

/// Assembles the degenerate-at-second-sheet bookkeeping: H^n splits as
/// coker(d^{0,n-1}) + ker(d^{0,n}); the alternating sums of H and of the
/// column dimensions are asserted equal.
SpectralReport two_column_assemble(const std::vector<SpectralRow>& rows, const Tolerances& tol);

/// Finite abelian group given by cyclic factors. Torsor pairs (right
/// translation structure maps) counted up to equivariant equivalence; equals
/// the group order over a simply connected base.
int torsor_count(const std::vector<int>& cyclic_factors);

/// Vanishing of the second cohomology with integral twist via the line
/// bundle degree argument: multiplication by D - 1 on Z is injective iff
/// D > 1.
bool h2_line_bundle_check(int D);

} // namespace dynsheaf
