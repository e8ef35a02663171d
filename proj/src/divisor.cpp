#include "dynsheaf/divisor.hpp"

#include "dynsheaf/cycles.hpp"
#include "dynsheaf/errors.hpp"
#include "dynsheaf/roots.hpp"

#include <algorithm>

namespace dynsheaf {

Divisor::Divisor(const std::vector<std::pair<ProjPoint, int>>& entries, double eps)
    : eps_(eps) {
    for (auto& [p, m] : entries) {
        if (m == 0) continue;
        bool merged = false;
        for (auto& [q, mq] : pts_) {
            if (chordal(p, q) < eps_) {
                mq += m;
                merged = true;
                break;
            }
        }
        if (!merged) pts_.push_back({p, m});
    }
    normalize();
}

void Divisor::normalize() {
    pts_.erase(std::remove_if(pts_.begin(), pts_.end(),
                              [](const auto& e) { return e.second == 0; }),
               pts_.end());
    std::sort(pts_.begin(), pts_.end(),
              [](const auto& a, const auto& b) { return point_less(a.first, b.first); });
}

int Divisor::degree() const {
    int d = 0;
    for (auto& [p, m] : pts_) d += m;
    return d;
}

int Divisor::multiplicity_at(const ProjPoint& p) const {
    for (auto& [q, m] : pts_)
        if (chordal(p, q) < eps_) return m;
    return 0;
}

Divisor Divisor::operator+(const Divisor& o) const {
    std::vector<std::pair<ProjPoint, int>> e = pts_;
    e.insert(e.end(), o.pts_.begin(), o.pts_.end());
    return Divisor(e, eps_ > 0 ? eps_ : o.eps_);
}

Divisor Divisor::operator-(const Divisor& o) const {
    std::vector<std::pair<ProjPoint, int>> e = pts_;
    for (auto& [p, m] : o.pts_) e.push_back({p, -m});
    return Divisor(e, eps_ > 0 ? eps_ : o.eps_);
}

Divisor Divisor::meet(const Divisor& o) const {
    std::vector<std::pair<ProjPoint, int>> e;
    for (auto& [p, m] : pts_) {
        int mo = o.multiplicity_at(p);
        int mn = std::min(m, mo);
        if (mn != 0) e.push_back({p, mn});
    }
    // Points only in o can still matter when multiplicities are negative.
    for (auto& [p, mo] : o.pts_) {
        if (multiplicity_at(p) != 0) continue;
        int mn = std::min(0, mo);
        if (mn != 0) e.push_back({p, mn});
    }
    return Divisor(e, eps_ > 0 ? eps_ : o.eps_);
}

bool Divisor::leq(const Divisor& o) const {
    for (auto& [p, m] : pts_)
        if (m > o.multiplicity_at(p)) return false;
    for (auto& [p, mo] : o.pts_)
        if (multiplicity_at(p) == 0 && 0 > mo) return false;
    return true;
}

bool Divisor::is_effective() const {
    for (auto& [p, m] : pts_)
        if (m < 0) return false;
    return true;
}

Divisor single_point(const ProjPoint& p, int mult, double eps) {
    return Divisor({{p, mult}}, eps);
}

Divisor pullback_divisor(const RationalMap& f, const Divisor& d, const Tolerances& tol) {
    std::vector<std::pair<ProjPoint, int>> entries;
    for (auto& [y, m] : d.entries()) {
        int fiber_total = 0;
        if (!y.is_infinity()) {
            Cx y0 = y.value();
            Poly fiber = f.P - f.Q * y0;
            if (fiber.is_zero()) throw FiberDegreeMismatch("fiber polynomial vanished");
            if (fiber.degree() > 0)
                for (auto& rc : roots_with_multiplicity(fiber, tol)) {
                    entries.push_back({ProjPoint::affine(rc.value), m * rc.multiplicity});
                    fiber_total += rc.multiplicity;
                }
            int at_inf = f.D - std::max(fiber.degree(), 0);
            if (at_inf > 0) {
                entries.push_back({ProjPoint::infinity(), m * at_inf});
                fiber_total += at_inf;
            }
        } else {
            if (!f.Q.is_zero() && f.Q.degree() > 0)
                for (auto& rc : roots_with_multiplicity(f.Q, tol)) {
                    entries.push_back({ProjPoint::affine(rc.value), m * rc.multiplicity});
                    fiber_total += rc.multiplicity;
                }
            int at_inf = f.D - std::max(f.Q.degree(), 0);
            if (at_inf > 0) {
                entries.push_back({ProjPoint::infinity(), m * at_inf});
                fiber_total += at_inf;
            }
        }
        if (fiber_total != f.D)
            throw FiberDegreeMismatch("fiber of " + y.str() + " has degree " +
                                      std::to_string(fiber_total));
    }
    Divisor out(entries, tol.eps_point);
    if (out.degree() != f.D * d.degree())
        throw FiberDegreeMismatch("deg f* d != D deg d after clustering");
    return out;
}

bool dynamical_check(const RationalMap& f, const Divisor& d, const Tolerances& tol) {
    return d.leq(pullback_divisor(f, d, tol));
}

bool e_dynamical_check(const RationalMap& f, const Divisor& d0, const Divisor& d1,
                       const Tolerances& tol) {
    return d1.leq(d0.meet(pullback_divisor(f, d0, tol)));
}

namespace {

int sharp_rigid_multiplicity(const Cycle& c) {
    switch (c.cls) {
        case CycleClass::attracting:
        case CycleClass::irrationally_indifferent:
            return 2;
        case CycleClass::repelling:
            return 1;
        case CycleClass::parabolic:
            return c.parabolic->repelling_side ? 2 * c.parabolic->N + 1
                                               : 2 * c.parabolic->N + 2;
        default:
            throw Unclassified("cycle must be classified and not superattracting");
    }
}

} // namespace

Divisor rigid_divisor(const RationalMap& f, const std::vector<Cycle>& cycles, bool sharp,
                      const Tolerances& tol) {
    (void)f;
    (void)sharp; // the bounds are attained: we always build the sharp divisor
    std::vector<std::pair<ProjPoint, int>> e;
    for (auto& c : cycles) {
        if (c.cls == CycleClass::superattracting)
            throw SuperattractingPresent("superattracting cycle in a rigid divisor");
        int m = sharp_rigid_multiplicity(c);
        for (auto& p : c.points) e.push_back({p, m});
    }
    return Divisor(e, tol.eps_point);
}

Divisor rigid_cycles_xf(const RationalMap& f, const std::vector<Cycle>& cycles,
                        const Tolerances& tol) {
    (void)f;
    std::vector<std::pair<ProjPoint, int>> e;
    for (auto& c : cycles) {
        if (!c.classified()) throw Unclassified("cycle must be classified");
        int m = (c.cls == CycleClass::repelling) ? 1 : 2;
        for (auto& p : c.points) e.push_back({p, m});
    }
    return Divisor(e, tol.eps_point);
}

namespace {

// S_1, ..., S_{n_top} where S_1 = S_f and S_{n+1} = S_n union f^n(S_f).
std::vector<std::vector<ProjPoint>> s_chain(const RationalMap& f, int n_top,
                                            const CriticalData& cd, const Tolerances& tol) {
    PointSet S(tol.eps_point);
    for (auto& v : cd.critical_values) S.insert(v);
    std::vector<std::vector<ProjPoint>> out{S.points()};
    std::vector<ProjPoint> A = cd.critical_values;
    for (int n = 1; n < n_top; ++n) {
        for (auto& p : A) p = f.apply(p);
        PointSet An(tol.eps_point);
        for (auto& p : A) An.insert(p);
        A = An.points();
        for (auto& p : A) S.insert(p);
        out.push_back(S.points());
    }
    return out;
}

Divisor lambda_single(const std::vector<ProjPoint>& s_set, const CriticalData& cd,
                      const Tolerances& tol) {
    PointSet support(tol.eps_point);
    for (auto& p : cd.critical_points) support.insert(p);
    for (auto& p : s_set) support.insert(p);
    std::vector<std::pair<ProjPoint, int>> e;
    for (auto& p : support.points()) {
        int deg = 1;
        for (size_t i = 0; i < cd.critical_points.size(); ++i)
            if (chordal(p, cd.critical_points[i]) < tol.eps_point) {
                deg = cd.local_degrees[i];
                break;
            }
        e.push_back({p, deg});
    }
    return Divisor(e, tol.eps_point);
}

} // namespace

EDivisorPair lambda_truncated(const RationalMap& f, int N, const Tolerances& tol) {
    PostcriticalReport rep = postcritical(f, std::max(N + 2, 40), tol);
    if (!rep.stabilized) throw NotStabilized("postcritical set did not stabilize");
    if (N < rep.horizon)
        throw PreconditionViolation("truncation order below the stabilization horizon");
    CriticalData cd = critical_data(f, tol);
    auto chain = s_chain(f, N + 1, cd, tol);
    EDivisorPair pair;
    pair.d1 = lambda_single(chain[N - 1], cd, tol);
    pair.d0 = lambda_single(chain[N], cd, tol);
    if (!e_dynamical_check(f, pair.d0, pair.d1, tol))
        throw PreconditionViolation("lambda pair failed the e-dynamical check");
    return pair;
}

EDivisorPair claim_divisor(const RationalMap& f, const std::vector<Cycle>& cycles, int N,
                           const Tolerances& tol) {
    for (auto& c : cycles)
        if (c.cls == CycleClass::superattracting)
            throw SuperattractingPresent("claim divisor excludes superattracting cycles");
    EDivisorPair pair = lambda_truncated(f, N, tol);
    CriticalData cd = critical_data(f, tol);
    auto chain = s_chain(f, N + 1, cd, tol);
    const auto& top = chain.back();
    Divisor extra({}, tol.eps_point);
    for (auto& c : cycles) {
        int m = sharp_rigid_multiplicity(c);
        bool in_postcritical = true;
        for (auto& p : c.points) {
            bool found = false;
            for (auto& q : top)
                if (chordal(p, q) < tol.eps_point) {
                    found = true;
                    break;
                }
            if (!found) in_postcritical = false;
        }
        int add = in_postcritical ? m - 1 : m;
        std::vector<std::pair<ProjPoint, int>> e;
        for (auto& p : c.points) e.push_back({p, add});
        extra = extra + Divisor(e, tol.eps_point);
    }
    pair.d0 = pair.d0 + extra;
    pair.d1 = pair.d1 + extra;
    int delta = postcritical(f, 40, tol).delta_f;
    if (pair.d0.degree() - pair.d1.degree() != delta)
        throw DeltaMismatch("claim divisor degree difference " +
                            std::to_string(pair.d0.degree() - pair.d1.degree()) +
                            " != delta_f " + std::to_string(delta));
    if (!e_dynamical_check(f, pair.d0, pair.d1, tol))
        throw PreconditionViolation("claim pair failed the e-dynamical check");
    return pair;
}

} // namespace dynsheaf
