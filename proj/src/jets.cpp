#include "dynsheaf/jets.hpp"

#include "dynsheaf/errors.hpp"

#include <algorithm>

namespace dynsheaf {

namespace {

struct Slot {
    ProjPoint x;
    int order = 0;
    int offset = 0;
    double scale = 1.0;
};

std::vector<Slot> make_slots(const Divisor& d) {
    std::vector<Slot> slots;
    int off = 0;
    for (auto& [p, m] : d.entries()) {
        if (m <= 0) throw PreconditionViolation("jet spaces need an effective divisor");
        slots.push_back({p, m, off, chart_scale(p)});
        off += m;
    }
    return slots;
}

int find_slot(const std::vector<Slot>& slots, const ProjPoint& p, double eps) {
    for (size_t i = 0; i < slots.size(); ++i)
        if (chordal(slots[i].x, p) < eps) return static_cast<int>(i);
    return -1;
}

std::vector<std::string> slot_labels(const std::vector<Slot>& slots, const char* tag) {
    std::vector<std::string> out;
    for (size_t i = 0; i < slots.size(); ++i)
        for (int j = 0; j < slots[i].order; ++j)
            out.push_back(std::string(tag) + std::to_string(i) + "[" + slots[i].x.str() +
                          "]:" + std::to_string(j));
    return out;
}

} // namespace

LabeledMatrix d00_matrix(const RationalMap& f, const Divisor& d0, const Divisor& d1,
                         const Tolerances& tol) {
    if (!d1.leq(d0)) throw PreconditionViolation("d00_matrix: d1 must be bounded by d0");
    auto dom = make_slots(d0);
    auto cod = make_slots(d1);
    LabeledMatrix M(slot_labels(cod, "q"), slot_labels(dom, "p"));

    for (auto& target : cod) {
        int i_here = find_slot(dom, target.x, tol.eps_point);
        if (i_here < 0) throw PreconditionViolation("codomain point missing from the domain");
        ProjPoint image = f.apply(target.x);
        int i_image = find_slot(dom, image, tol.eps_point);
        if (i_image < 0)
            throw PreconditionViolation("image " + image.str() + " of " + target.x.str() +
                                        " missing from the domain (pair not e-dynamical)");
        const Slot& here = dom[i_here];
        const Slot& src = dom[i_image];
        int n1 = target.order;
        LocalSeries ls = local_series(f, target.x, n1 + 1, here.scale, src.scale);
        const JetSeries& F = ls.series;
        JetSeries dF = F.derivative(); // order n1

        // df: t(z) |-> t(z) * F'(z), from the slot at the point itself.
        for (int j = 0; j < here.order; ++j) {
            for (int r = j; r < n1; ++r) {
                Cx v = dF.coeff(r - j);
                M.m(target.offset + r, here.offset + j) += v;
            }
        }
        // f*: s |-> s o F, from the slot at the image point.
        JetSeries Fpow = JetSeries::zero(n1);
        if (n1 > 0) Fpow.c[0] = Cx(1);
        for (int j = 0; j < src.order; ++j) {
            if (j > 0) Fpow = Fpow * F.truncated(n1);
            for (int r = 0; r < n1; ++r)
                M.m(target.offset + r, src.offset + j) -= Fpow.coeff(r);
        }
    }
    return M;
}

HomExt hom_ext_dims(const RationalMap& f, const Divisor& d0, const Divisor& d1,
                    const Tolerances& tol) {
    LabeledMatrix M = d00_matrix(f, d0, d1, tol);
    if (M.cols() == 0) return {0, M.rows()};
    RankKernel rk = rank_and_kernel(M, tol);
    return {M.cols() - rk.rank, M.rows() - rk.rank};
}

int hom_dim(const RationalMap& f, const Divisor& d0, const Divisor& d1,
            const Tolerances& tol) {
    return hom_ext_dims(f, d0, d1, tol).hom;
}

int e0_closed_form(const RationalMap& f, const Cycle& c, int N, const Tolerances& tol) {
    if (!c.classified()) throw Unclassified("e0_closed_form needs a classified cycle");
    if (N < 1) throw PreconditionViolation("jet order must be positive");
    switch (c.cls) {
        case CycleClass::superattracting: {
            // local degree of the return map at the fixed point of f^p
            int deg = 1;
            CriticalData cd = critical_data(f, tol);
            for (auto& p : c.points) {
                int d = 1;
                for (size_t i = 0; i < cd.critical_points.size(); ++i)
                    if (chordal(p, cd.critical_points[i]) < tol.eps_point)
                        d = cd.local_degrees[i];
                deg *= d;
            }
            return std::min(N - 1, deg - 1);
        }
        case CycleClass::attracting:
        case CycleClass::repelling:
            return N >= 2 ? 1 : 0;
        case CycleClass::irrationally_indifferent:
            // Formally linearizable at every finite jet order regardless of
            // Siegel/Cremer, which jets cannot distinguish.
            return N >= 2 ? 1 : 0;
        case CycleClass::parabolic: {
            const ParabolicData& pd = *c.parabolic;
            int Nx = pd.N;
            if (N <= Nx) {
                int count = 0;
                for (int i = 0; i < N; ++i)
                    if (((i - 1) % pd.q + pd.q) % pd.q == 0) ++count;
                return count;
            }
            if (N <= 2 * Nx + 1) return pd.nu;
            if (N == 2 * Nx + 2) return pd.nu + 1;
            throw CaseUndetermined("parabolic closed form stated only up to 2N+2");
        }
        default:
            throw Unclassified("unexpected cycle class");
    }
}

PreimageTreeDims preimage_tree_dim(const RationalMap& f, const ProjPoint& p, int n,
                                   const Tolerances& tol) {
    CriticalData cd = critical_data(f, tol);
    for (auto& c : cd.critical_points)
        if (chordal(p, c) < tol.eps_point)
            throw CriticalBasePoint("preimage tree rooted at a critical point");

    // Collect the n-th iterated preimage as a point set.
    PointSet O(tol.eps_point);
    std::vector<ProjPoint> level{p};
    for (int step = 0; step < n; ++step) {
        std::vector<ProjPoint> next;
        for (auto& y : level) {
            Divisor fiber = pullback_divisor(f, single_point(y, 1, tol.eps_point), tol);
            for (auto& [x, m] : fiber.entries()) next.push_back(x);
        }
        PointSet lv(tol.eps_point);
        for (auto& x : next) lv.insert(x);
        level = lv.points();
        for (auto& x : level) O.insert(x);
    }
    std::vector<std::pair<ProjPoint, int>> e;
    bool p_periodic = false;
    for (auto& x : O.points()) {
        if (chordal(x, p) < tol.eps_point) p_periodic = true;
        int deg = 1;
        for (size_t i = 0; i < cd.critical_points.size(); ++i)
            if (chordal(x, cd.critical_points[i]) < tol.eps_point)
                deg = cd.local_degrees[i];
        e.push_back({x, deg});
    }
    Divisor delta(e, tol.eps_point);
    std::vector<std::pair<ProjPoint, int>> ge;
    for (size_t i = 0; i < cd.critical_points.size(); ++i)
        ge.push_back({cd.critical_points[i], cd.local_degrees[i] - 1});
    Divisor gamma_f(ge, tol.eps_point);

    PreimageTreeDims out;
    out.gamma_p = gamma_f.meet(delta);
    if (p_periodic) {
        // The base point revisits its own tree, so [p] + Delta_p carries
        // multiplicity two at p. The diagonal solution of the tree case is
        // cut by the return equation (rho - 1) t0 = 0, and the leftover
        // second-order jet at p adds one dimension on top of the critical
        // count. Needs rho != 1; a parabolic return is outside the formula.
        Cx rho(1);
        ProjPoint y = p;
        for (int step = 0; step < n; ++step) {
            auto [img, der] = eval_and_local_derivative(f, y);
            rho *= der;
            y = img;
            if (chordal(y, p) < tol.eps_point) break;
        }
        if (std::abs(rho - Cx(1)) < 1e-6)
            throw CaseUndetermined("parabolic return of the base point");
        out.closed_form = out.gamma_p.degree() + 1;
    } else {
        out.closed_form = std::max(out.gamma_p.degree(), 1);
    }
    Divisor d0 = delta + single_point(p, 1, tol.eps_point);
    out.brute_force = hom_dim(f, d0, delta, tol);
    return out;
}

GlobalDeformationDims global_deformation_dims(const RationalMap& f, const Tolerances& tol) {
    if (f.D < 2) throw PreconditionViolation("global deformations need degree >= 2");
    Poly W = f.wronskian();
    int rows = 2 * f.D + 1;
    std::vector<std::string> row_labels, col_labels{"d/dz", "z d/dz", "z^2 d/dz"};
    for (int r = 0; r < rows; ++r) row_labels.push_back("z^" + std::to_string(r));
    LabeledMatrix M(row_labels, col_labels);
    // Column v: coefficients of v(z) W(z) - (f* v)(z) Q(z)^2 where
    // f* 1 = Q^2/Q^2, f* z = PQ/Q^2, f* z^2 = P^2/Q^2.
    Poly Q2 = f.Q * f.Q;
    Poly PQ = f.P * f.Q;
    Poly P2 = f.P * f.P;
    Poly cols[3] = {W - Q2, Poly::identity() * W - PQ,
                    Poly::identity() * Poly::identity() * W - P2};
    for (int c = 0; c < 3; ++c)
        for (int r = 0; r < rows; ++r) M.m(r, c) = cols[c].coeff(r);

    GlobalDeformationDims out;
    RankKernel rk = rank_and_kernel(M, tol);
    out.hom = M.cols() - rk.rank;
    out.coker = rows - rk.rank;
    out.sigma_min_rel = rk.sigma_max > 0 ? rk.smallest_retained / rk.sigma_max : 0.0;
    out.matrix = std::move(M);
    return out;
}

} // namespace dynsheaf
