#pragma once

#include "dynsheaf/cycles.hpp"
#include "dynsheaf/divisor.hpp"
#include "dynsheaf/linalg.hpp"

namespace dynsheaf {

/// Matrix of d^{0,0} = df - f* between jet spaces of vector fields supported
/// on an e-dynamical pair: domain jets of order mult_d0(x) at x in |d0|,
/// codomain jets of order mult_d1(x) at x in |d1|. The block at a codomain
/// point x takes df from the domain slot at x and f* from the slot at f(x).
LabeledMatrix d00_matrix(const RationalMap& f, const Divisor& d0, const Divisor& d1,
                         const Tolerances& tol);

struct HomExt {
    int hom = 0;  // dim ker d00
    int ext1 = 0; // dim coker d00
};

HomExt hom_ext_dims(const RationalMap& f, const Divisor& d0, const Divisor& d1,
                    const Tolerances& tol);

int hom_dim(const RationalMap& f, const Divisor& d0, const Divisor& d1,
            const Tolerances& tol);

/// Closed-form local dimension of Hom(Omega, O_{N[x]}) at a classified cycle:
/// reduction to the fixed point of f^period, then the case table
///   superattracting: min(N-1, deg-1)
///   attracting/repelling/irrationally indifferent: 1 for N >= 2, 0 for N = 1
///   parabolic (invariants q, nu, N_x = nu q):
///     N <= N_x: #resonant indices {0 <= i < N : i = 1 mod q}
///     N_x <= N <= 2 N_x + 1: nu
///     N = 2 N_x + 2: nu + 1
/// Throws CaseUndetermined beyond the covered ranges.
int e0_closed_form(const RationalMap& f, const Cycle& c, int N, const Tolerances& tol);

struct PreimageTreeDims {
    int closed_form = 0;
    int brute_force = 0;
    Divisor gamma_p; // Gamma_f meet Delta_p^(n)
};

/// Lemma-style preimage tree count at a noncritical base point: closed form
/// max(deg(Gamma_f ^ Delta_p^(n)), 1) against the jet kernel of the pair
/// ([p] + Delta_p^(n), Delta_p^(n)).
PreimageTreeDims preimage_tree_dim(const RationalMap& f, const ProjPoint& p, int n,
                                   const Tolerances& tol);

struct GlobalDeformationDims {
    int hom = 0;       // invariant global vector fields (expected 0)
    int coker = 0;     // tangent dimension of the moduli quotient: 2D-2
    double sigma_min_rel = 0;
    LabeledMatrix matrix;
};

/// d^{0,0} on global vector fields: H0(T) -> H0(f*T) with bases
/// {d/dz, z d/dz, z^2 d/dz} and {z^j / Q^2 f* d/dz}.
GlobalDeformationDims global_deformation_dims(const RationalMap& f, const Tolerances& tol);

} // namespace dynsheaf
