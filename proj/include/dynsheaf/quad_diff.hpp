#pragma once

#include "dynsheaf/divisor.hpp"
#include "dynsheaf/linalg.hpp"

#include <optional>

namespace dynsheaf {

/// Finite-dimensional space of meromorphic quadratic differentials with pole
/// bound Delta: elements z^j dz^2 / prod (z - a_i)^{m_i} over the finite
/// support, 0 <= j <= deg Delta - 4. Dimension max(0, deg Delta - 3).
struct QDSpace {
    Divisor bound;
    std::vector<std::pair<Cx, int>> finite_poles;
    int max_j = -1;
    int dim = 0;

    Poly denominator() const;
    Cx eval_basis(int j, Cx z) const;
    std::string basis_label(int j) const;
};

QDSpace qd_basis(const Divisor& delta);

struct QuadDifferential {
    QDSpace space;
    Eigen::VectorXcd coeff;

    Cx eval(Cx z) const;
    /// Numerator/denominator of the rational coefficient R with q = R dz^2.
    std::pair<Poly, Poly> rational() const;
};

QuadDifferential qd_from_coeffs(const QDSpace& space, const Eigen::VectorXcd& coeff);

/// Exact expansion of R = num/den dz^2 into the given space; the division
/// must come out exact and within the degree budget, else BasisOverflow.
QuadDifferential expand_in(const QDSpace& space, const Poly& num, const Poly& den);

/// Pointwise pole bound of f^* q for q with pole bound delta, from the order
/// law ord_x f*q = deg_x(f) (ord_{f(x)} q + 2) - 2.
Divisor pullback_pole_bound(const RationalMap& f, const Divisor& delta, const Tolerances& tol);

/// q(f(z)) f'(z)^2 dz^2 expanded exactly into the pullback bound space.
QuadDifferential pullback_qd(const RationalMap& f, const QuadDifferential& q,
                             const Tolerances& tol);

/// Pushforward sum over inverse branches, sampled at deterministic generic
/// points and fitted into the basis of delta_target.
QuadDifferential pushforward_qd(const RationalMap& f, const QuadDifferential& q,
                                const Divisor& delta_target, const Tolerances& tol);

struct NablaReport {
    LabeledMatrix nabla;   // coefficient-basis matrix of incl - f_*
    Eigen::MatrixXcd frame; // same operator in orthonormalized sample frames
    int source_dim = 0;
    int target_dim = 0;
    int ext2_dim = 0;
    double smallest_singular_value = 0; // +inf when the source is empty
};

/// nabla_f = incl - f_*: H0(O2(+d1 - Gamma_f)) -> H0(O2(+d0)); the kernel
/// dimension realizes ext^2(Omega, O(-pair)) by duality. Requires
/// Gamma_f <= d1 and the pair e-dynamical.
NablaReport nabla_and_ext2(const RationalMap& f, const EDivisorPair& pair,
                           const Tolerances& tol);

/// Matrix of f_* f^* on the basis of qd_basis(delta); the identity check
/// f_* f^* = D id exercises the full pullback/pushforward pipeline.
LabeledMatrix pushforward_pullback_matrix(const RationalMap& f, const Divisor& delta,
                                          const Tolerances& tol);

/// Postcritically finite with exactly four postcritical points, all of
/// orbifold weight two: every point of f^{-1}(P) is either in P and
/// unramified or a simple critical point outside P.
bool lattes_2222_signature(const RationalMap& f, const Tolerances& tol);

/// Ramification divisor as a Divisor value.
Divisor ramification_divisor(const RationalMap& f, const Tolerances& tol);

} // namespace dynsheaf
