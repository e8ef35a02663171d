#include "dynsheaf/quad_diff.hpp"

#include "dynsheaf/errors.hpp"
#include "dynsheaf/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dynsheaf {

Poly QDSpace::denominator() const {
    Poly den = Poly::constant(Cx(1));
    for (auto& [a, m] : finite_poles)
        for (int k = 0; k < m; ++k) den = den * Poly({-a, Cx(1)});
    return den;
}

Cx QDSpace::eval_basis(int j, Cx z) const {
    Cx num = std::pow(z, j);
    Cx den(1);
    for (auto& [a, m] : finite_poles)
        for (int k = 0; k < m; ++k) den *= (z - a);
    return num / den;
}

std::string QDSpace::basis_label(int j) const { return "z^" + std::to_string(j) + "/den"; }

QDSpace qd_basis(const Divisor& delta) {
    if (!delta.is_effective()) throw PreconditionViolation("qd_basis needs an effective bound");
    QDSpace s;
    s.bound = delta;
    for (auto& [p, m] : delta.entries())
        if (!p.is_infinity()) s.finite_poles.push_back({p.value(), m});
    s.max_j = delta.degree() - 4;
    s.dim = std::max(0, delta.degree() - 3);
    return s;
}

Cx QuadDifferential::eval(Cx z) const {
    Cx v(0);
    for (int j = 0; j < space.dim; ++j) v += coeff(j) * space.eval_basis(j, z);
    return v;
}

std::pair<Poly, Poly> QuadDifferential::rational() const {
    std::vector<Cx> num(space.max_j + 1 > 0 ? space.max_j + 1 : 1, Cx(0));
    for (int j = 0; j < space.dim; ++j) num[j] = coeff(j);
    return {Poly(std::move(num)), space.denominator()};
}

QuadDifferential qd_from_coeffs(const QDSpace& space, const Eigen::VectorXcd& coeff) {
    if ((int)coeff.size() != space.dim)
        throw DimensionMismatch("coefficient count does not match the space dimension");
    return {space, coeff};
}

QuadDifferential expand_in(const QDSpace& space, const Poly& num, const Poly& den) {
    // R = num/den = C / space_denominator, so C = num * space_den / den must
    // divide out exactly. The division remainder is noisy at large dynamic
    // range, so the quotient is certified by evaluation instead.
    Poly target_den = space.denominator();
    Poly prod = num * target_den;
    auto [quot, rem] = prod.divmod(den);
    if (quot.degree() > space.max_j)
        throw BasisOverflow("numerator degree " + std::to_string(quot.degree()) +
                            " exceeds the space budget " + std::to_string(space.max_j));
    int checked = 0;
    for (int k = 0; k < 64 && checked < 8; ++k) {
        double theta = 2 * M_PI * (0.137 + 0.61803398875 * k);
        Cx z = 1.7 * Cx(std::cos(theta), std::sin(theta));
        Cx dv = den.eval(z), tv = target_den.eval(z);
        if (std::abs(dv) < 1e-6 || std::abs(tv) < 1e-6) continue;
        Cx lhs = num.eval(z) / dv;
        Cx rhs = quot.eval(z) / tv;
        if (std::abs(lhs - rhs) > 1e-8 * std::max(1.0, std::abs(lhs)))
            throw BasisOverflow("pole structure does not fit the target space");
        ++checked;
    }
    if (checked < 8) throw BasisOverflow("could not certify the expansion");
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(space.dim);
    for (int j = 0; j < space.dim; ++j) c(j) = quot.coeff(j);
    return {space, c};
}

Divisor pullback_pole_bound(const RationalMap& f, const Divisor& delta, const Tolerances& tol) {
    Divisor fiber = pullback_divisor(f, delta, tol);
    // fiber multiplicity at x equals deg_x(f) * mult_delta(f(x)) summed over
    // the support of delta; recover deg_x via the ramification divisor.
    Divisor gamma = ramification_divisor(f, tol);
    std::vector<std::pair<ProjPoint, int>> e;
    for (auto& [x, mtot] : fiber.entries()) {
        int degx = gamma.multiplicity_at(x) + 1;
        int m = delta.multiplicity_at(f.apply(x));
        int bound = degx * (m - 2) + 2;
        if (bound > 0) e.push_back({x, bound});
    }
    return Divisor(e, tol.eps_point);
}

QuadDifferential pullback_qd(const RationalMap& f, const QuadDifferential& q,
                             const Tolerances& tol) {
    auto [num, den] = q.rational();
    // R(f) = num(f)/den(f) with f = P/Q, homogenized at common length L.
    int L = std::max(num.degree(), den.degree());
    L = std::max(L, 0);
    std::vector<Poly> Ppow(L + 1), Qpow(L + 1);
    Ppow[0] = Poly::constant(Cx(1));
    Qpow[0] = Poly::constant(Cx(1));
    for (int j = 1; j <= L; ++j) {
        Ppow[j] = Ppow[j - 1] * f.P;
        Qpow[j] = Qpow[j - 1] * f.Q;
    }
    auto hom = [&](const Poly& p) {
        Poly res;
        for (int j = 0; j <= L; ++j) res = res + Ppow[j] * Qpow[L - j] * p.coeff(j);
        return res;
    };
    Poly W = f.wronskian();
    // q(f) f'^2 = [num_hat W^2] / [den_hat Q^4]
    Poly big_num = hom(num) * W * W;
    Poly big_den = hom(den) * f.Q * f.Q * f.Q * f.Q;
    QDSpace target = qd_basis(pullback_pole_bound(f, q.space.bound, tol));
    return expand_in(target, big_num, big_den);
}

namespace {

struct FiberSampler {
    const RationalMap& f;
    std::vector<Cx> critical_values;
    std::vector<Cx> avoid_poles;
    Rng rng;
    double radius = 2.0;

    FiberSampler(const RationalMap& f_, const Tolerances& tol)
        : f(f_), rng(tol.rng_seed) {
        CriticalData cd = critical_data(f_, tol);
        for (auto& v : cd.critical_values)
            if (!v.is_infinity()) critical_values.push_back(v.value());
    }

    // A sample w on the circle with a clean fiber; returns the fiber too.
    std::pair<Cx, std::vector<Cx>> draw(const Tolerances& tol) {
        for (int attempt = 0; attempt < 400; ++attempt) {
            Cx w = radius * rng.unit_circle();
            bool ok = true;
            for (auto& cv : critical_values)
                if (std::abs(w - cv) < 1e-3) ok = false;
            for (auto& p : avoid_poles)
                if (std::abs(w - p) < 1e-2) ok = false;
            if (!ok) continue;
            Poly fiber_poly = f.P - f.Q * w;
            if (fiber_poly.degree() != f.D) continue; // a branch escaped to infinity
            std::vector<Cx> fiber;
            bool clean = true;
            for (auto& rc : roots_with_multiplicity(fiber_poly, tol)) {
                if (rc.multiplicity != 1) clean = false;
                for (int k = 0; k < rc.multiplicity; ++k) fiber.push_back(rc.value);
            }
            if (!clean) continue;
            Poly W = f.wronskian();
            for (auto& z : fiber) {
                Cx qz = f.Q.eval(z);
                Cx deriv = W.eval(z) / (qz * qz);
                if (std::abs(deriv) < 1e-6) clean = false;
            }
            if (!clean) continue;
            return {w, fiber};
        }
        throw NearCriticalSample("no usable sample point after resampling");
    }
};

Cx derivative_at(const RationalMap& f, const Poly& W, Cx z) {
    Cx qz = f.Q.eval(z);
    return W.eval(z) / (qz * qz);
}

} // namespace

QuadDifferential pushforward_qd(const RationalMap& f, const QuadDifferential& q,
                                const Divisor& delta_target, const Tolerances& tol) {
    QDSpace target = qd_basis(delta_target);
    int M = target.dim + 8;
    FiberSampler sampler(f, tol);
    for (auto& [p, m] : delta_target.entries())
        if (!p.is_infinity()) sampler.avoid_poles.push_back(p.value());
    Poly W = f.wronskian();

    // Absolute evaluation bound of q at z: the fit cannot be more accurate
    // than the cancellation floor of the coefficient representation.
    auto eval_bound = [&](Cx z) {
        double num = 0, zp = 1, az = std::abs(z);
        for (int j = 0; j < q.space.dim; ++j) {
            num += std::abs(q.coeff(j)) * zp;
            zp *= az;
        }
        double den = 1;
        for (auto& [a, mm] : q.space.finite_poles)
            for (int k = 0; k < mm; ++k) den *= std::abs(z - a);
        return num / den;
    };
    std::vector<Cx> inputs, values;
    double noise_scale = 0;
    for (int i = 0; i < M; ++i) {
        auto [w, fiber] = sampler.draw(tol);
        Cx sum(0);
        double bound(0);
        for (auto& z : fiber) {
            Cx d = derivative_at(f, W, z);
            sum += q.eval(z) / (d * d);
            bound += eval_bound(z) / std::norm(d);
        }
        inputs.push_back(w);
        values.push_back(sum);
        noise_scale = std::max(noise_scale, bound);
    }
    for (auto& v : values) noise_scale = std::max(noise_scale, std::abs(v));
    Tolerances fit_tol = tol;
    fit_tol.eps_residual = tol.eps_residual * std::max(1.0, noise_scale);
    FitResult fit = fit_in_basis(
        inputs, values, target.dim,
        [&](int j, Cx z) { return target.eval_basis(j, z); }, fit_tol);
    return {target, fit.coeffs};
}

NablaReport nabla_and_ext2(const RationalMap& f, const EDivisorPair& pair,
                           const Tolerances& tol) {
    Divisor gamma = ramification_divisor(f, tol);
    if (!gamma.leq(pair.d1))
        throw PreconditionViolation("nabla needs Gamma_f <= Delta_1");
    if (!e_dynamical_check(f, pair.d0, pair.d1, tol))
        throw PreconditionViolation("nabla needs an e-dynamical pair");
    QDSpace source = qd_basis(pair.d1 - gamma);
    QDSpace target = qd_basis(pair.d0);

    NablaReport rep;
    rep.source_dim = source.dim;
    rep.target_dim = target.dim;
    if (source.dim == 0) {
        std::vector<std::string> rows;
        for (int r = 0; r < target.dim; ++r) rows.push_back("t" + std::to_string(r));
        rep.nabla = LabeledMatrix(rows, {});
        rep.ext2_dim = 0;
        rep.smallest_singular_value = std::numeric_limits<double>::infinity();
        return rep;
    }

    int M = std::max(source.dim, target.dim) + 8;
    FiberSampler sampler(f, tol);
    for (auto& [p, m] : pair.d0.entries())
        if (!p.is_infinity()) sampler.avoid_poles.push_back(p.value());
    Poly W = f.wronskian();

    Eigen::MatrixXcd V(M, source.dim), T(M, target.dim), S(M, source.dim);
    std::vector<Cx> inputs;
    for (int i = 0; i < M; ++i) {
        auto [w, fiber] = sampler.draw(tol);
        inputs.push_back(w);
        for (int j = 0; j < source.dim; ++j) {
            Cx incl = source.eval_basis(j, w);
            Cx push(0);
            for (auto& z : fiber) {
                Cx d = derivative_at(f, W, z);
                push += source.eval_basis(j, z) / (d * d);
            }
            V(i, j) = incl - push;
            S(i, j) = incl;
        }
        for (int j = 0; j < target.dim; ++j) T(i, j) = target.eval_basis(j, w);
    }
    // Coefficient matrix: T C = V in the least squares sense with certified
    // residual (the pole bound guarantees an exact representation).
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qrT(T);
    Eigen::MatrixXcd C = qrT.solve(V);
    double resid = (T * C - V).cwiseAbs().maxCoeff();
    double scale = std::max(1.0, V.cwiseAbs().maxCoeff());
    if (resid > tol.eps_residual * scale)
        throw OverdeterminedInconsistent("nabla column fit residual " + std::to_string(resid));

    std::vector<std::string> rows, cols;
    for (int r = 0; r < target.dim; ++r) rows.push_back("t:" + target.basis_label(r));
    for (int c = 0; c < source.dim; ++c) cols.push_back("s:" + source.basis_label(c));
    rep.nabla = LabeledMatrix(rows, cols);
    rep.nabla.m = C;

    // Orthonormalize both sides against the sample inner product so the
    // reported margin is a property of the operator, not of the raw
    // partial-fraction bases (which degenerate when poles nearly collide).
    Eigen::HouseholderQR<Eigen::MatrixXcd> qrS(S);
    Eigen::MatrixXcd Rs =
        qrS.matrixQR().topRows(source.dim).template triangularView<Eigen::Upper>();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qrT2(T);
    Eigen::MatrixXcd Qt = qrT2.householderQ() * Eigen::MatrixXcd::Identity(M, target.dim);
    Eigen::MatrixXcd A =
        Qt.adjoint() * V * Rs.template triangularView<Eigen::Upper>().solve(
                               Eigen::MatrixXcd::Identity(source.dim, source.dim));
    LabeledMatrix Am;
    for (int r = 0; r < target.dim; ++r) Am.row_labels.push_back("ft" + std::to_string(r));
    for (int c = 0; c < source.dim; ++c) Am.col_labels.push_back("fs" + std::to_string(c));
    Am.m = A;
    RankKernel rk = rank_and_kernel(Am, tol, 1.0);
    rep.frame = A;
    rep.ext2_dim = source.dim - rk.rank;
    // With a trivial kernel the margin is sigma_min; with a detected kernel
    // it is the size of the singular values treated as zero.
    rep.smallest_singular_value =
        rep.ext2_dim == 0 ? rk.smallest_retained : rk.largest_discarded;
    return rep;
}

LabeledMatrix pushforward_pullback_matrix(const RationalMap& f, const Divisor& delta,
                                          const Tolerances& tol) {
    QDSpace space = qd_basis(delta);
    std::vector<std::string> labels;
    for (int j = 0; j < space.dim; ++j) labels.push_back(space.basis_label(j));
    LabeledMatrix M(labels, labels);
    for (int j = 0; j < space.dim; ++j) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(space.dim);
        e(j) = Cx(1);
        QuadDifferential b{space, e};
        QuadDifferential pb = pullback_qd(f, b, tol);
        QuadDifferential cycle = pushforward_qd(f, pb, delta, tol);
        for (int i = 0; i < space.dim; ++i) M.m(i, j) = cycle.coeff(i);
    }
    return M;
}

Divisor ramification_divisor(const RationalMap& f, const Tolerances& tol) {
    CriticalData cd = critical_data(f, tol);
    std::vector<std::pair<ProjPoint, int>> e;
    for (size_t i = 0; i < cd.critical_points.size(); ++i)
        e.push_back({cd.critical_points[i], cd.local_degrees[i] - 1});
    return Divisor(e, tol.eps_point);
}

bool lattes_2222_signature(const RationalMap& f, const Tolerances& tol) {
    PostcriticalReport rep = postcritical(f, 40, tol);
    if (!rep.stabilized || rep.delta_f != 0) return false;
    const auto& P = rep.s_sets.back();
    if (P.size() != 4) return false;
    Divisor gamma = ramification_divisor(f, tol);
    std::vector<std::pair<ProjPoint, int>> pe;
    for (auto& p : P) pe.push_back({p, 1});
    Divisor Pdiv(pe, tol.eps_point);
    for (auto& p : P)
        if (gamma.multiplicity_at(p) != 0) return false; // postcritical point is critical
    Divisor fiber = pullback_divisor(f, Pdiv, tol);
    for (auto& [x, m] : fiber.entries()) {
        int degx = gamma.multiplicity_at(x) + 1;
        if (Pdiv.contains(x)) {
            if (degx != 1) return false;
        } else {
            if (degx != 2) return false;
        }
    }
    return true;
}

} // namespace dynsheaf
