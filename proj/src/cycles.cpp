#include "dynsheaf/cycles.hpp"

#include "dynsheaf/errors.hpp"
#include "dynsheaf/roots.hpp"

#include <algorithm>
#include <cmath>

namespace dynsheaf {

std::string to_string(CycleClass c) {
    switch (c) {
        case CycleClass::superattracting: return "superattracting";
        case CycleClass::attracting: return "attracting";
        case CycleClass::repelling: return "repelling";
        case CycleClass::parabolic: return "parabolic";
        case CycleClass::irrationally_indifferent: return "irrationally_indifferent";
        default: return "unclassified";
    }
}

JetSeries cycle_return_series(const RationalMap& f, const Cycle& c, int order) {
    JetSeries g = JetSeries::identity(order);
    for (size_t i = 0; i < c.points.size(); ++i) {
        LocalSeries ls = local_series(f, c.points[i], order);
        g = ls.series.compose(g);
    }
    return g;
}

namespace {

// Conjugate g by phi = zeta + c zeta^j (exact on jets).
JetSeries conjugate_by_shift(const JetSeries& g, Cx c, int j) {
    int n = g.order();
    JetSeries phi = JetSeries::identity(n);
    if (j < n) phi.c[j] = c;
    JetSeries inv = phi.reversion();
    return inv.compose(g.compose(phi));
}

// Conjugate g by zeta -> lambda zeta: coefficients a_k -> a_k lambda^(k-1).
JetSeries conjugate_by_scaling(const JetSeries& g, Cx lambda) {
    JetSeries r = g;
    Cx pw = Cx(1) / lambda;
    for (int k = 0; k < r.order(); ++k) {
        r.c[k] *= pw;
        pw *= lambda;
    }
    return r;
}

// Extract the parabolic invariants of a return series with multiplier a
// primitive q-th root of unity by reduction to the preferred form
// rho zeta (1 + zeta^N + alpha zeta^{2N} + O(zeta^{2N+1})).
ParabolicData parabolic_invariants(const RationalMap& f, const Cycle& c, int q,
                                   const CycleSearchConfig& cfg) {
    // Locate N+1 = vanishing order of f^{kq} - id at the cycle point.
    int N = -1;
    int order = 8;
    while (order <= cfg.jet_order_cap) {
        JetSeries g = cycle_return_series(f, c, order);
        JetSeries h = g;
        for (int i = 1; i < q; ++i) h = g.compose(h);
        double scale = 0;
        for (auto& v : h.c) scale = std::max(scale, std::abs(v));
        for (int k = 2; k < h.order(); ++k) {
            if (std::abs(h.coeff(k) - (k == 1 ? Cx(1) : Cx(0))) > 1e-8 * std::max(1.0, scale)) {
                N = k - 1;
                break;
            }
        }
        if (N > 0) break;
        order *= 2;
    }
    if (N <= 0) throw JetOrderInsufficient("no resonant term found up to the jet order cap");
    if (N % q != 0)
        throw JetOrderInsufficient("fixed point multiplicity not congruent to 1 mod q");

    ParabolicData pd;
    pd.q = q;
    pd.N = N;
    pd.nu = N / q;

    int order_full = 2 * N + 3;
    JetSeries g = cycle_return_series(f, c, order_full);
    Cx rho = g.coeff(1);
    // Snap the multiplier onto the exact root of unity; the geometry already
    // certified it to root_unity_tol.
    double arg = std::arg(rho);
    double snapped = std::round(arg * q / (2 * M_PI)) * 2 * M_PI / q;
    rho = Cx(std::cos(snapped), std::sin(snapped));
    g.c[1] = rho;

    double coeff_scale = 0;
    for (auto& v : g.c) coeff_scale = std::max(coeff_scale, std::abs(v));

    for (int s = 2; s <= 2 * N + 1; ++s) {
        bool resonant = ((s - 1) % q) == 0;
        if (!resonant) {
            Cx as = g.coeff(s);
            Cx rate = std::pow(rho, s) - rho;
            g = conjugate_by_shift(g, -as / rate, s);
            continue;
        }
        if (s < N + 1) {
            // must already vanish; anything else contradicts the multiplicity
            if (std::abs(g.coeff(s)) > 1e-6 * std::max(1.0, coeff_scale))
                throw JetOrderInsufficient("resonant term below the multiplicity order");
            g.c[s] = Cx(0);
            continue;
        }
        if (s == N + 1) {
            Cx aN = g.coeff(s);
            if (std::abs(aN) < 1e-12)
                throw JetOrderInsufficient("leading parabolic coefficient vanished");
            Cx lambda = std::pow(rho / aN, 1.0 / N);
            g = conjugate_by_scaling(g, lambda);
            continue;
        }
        if (s < 2 * N + 1) {
            // resonant intermediate term: kill with a resonant change at j=s-N
            int j = s - N;
            Cx as = g.coeff(s);
            // Newton in c; the dependence is polynomial with nonzero slope.
            Cx cc(0);
            for (int it = 0; it < 8 && std::abs(as) > 1e-14 * std::max(1.0, coeff_scale); ++it) {
                double h0 = std::max(1e-6, 1e-3 * std::abs(as));
                Cx f0 = conjugate_by_shift(g, cc, j).coeff(s);
                Cx f1 = conjugate_by_shift(g, cc + h0, j).coeff(s);
                Cx slope = (f1 - f0) / h0;
                if (std::abs(slope) < 1e-12) break;
                cc -= f0 / slope;
                as = conjugate_by_shift(g, cc, j).coeff(s);
            }
            g = conjugate_by_shift(g, cc, j);
            continue;
        }
        // s == 2N+1: the invariant position
        pd.alpha = g.coeff(s) / rho;
    }
    pd.beta = Cx(0.5 * (N + 1)) - pd.alpha;
    pd.repelling_side = pd.beta.real() > 1e-9;
    return pd;
}

} // namespace

Cycle classify_cycle(const RationalMap& f, Cycle c, const CycleSearchConfig& cfg,
                     const Tolerances& tol) {
    c.period = static_cast<int>(c.points.size());
    Cx rho(1);
    for (auto& p : c.points) rho *= eval_and_local_derivative(f, p).second;
    c.multiplier = rho;

    // Superattracting means a critical point on the orbit.
    CriticalData cd = critical_data(f, tol);
    bool super = std::abs(rho) < cfg.superattracting_tol;
    for (auto& p : c.points)
        for (auto& q : cd.critical_points)
            if (chordal(p, q) < tol.eps_point) super = true;
    if (super) {
        c.cls = CycleClass::superattracting;
        return c;
    }
    if (std::abs(std::abs(rho) - 1.0) >= cfg.root_unity_tol) {
        c.cls = std::abs(rho) < 1 ? CycleClass::attracting : CycleClass::repelling;
        return c;
    }
    // Indifferent: look for a root of unity.
    int q = 0;
    Cx pw(1);
    for (int cand = 1; cand <= cfg.q_max; ++cand) {
        pw *= rho;
        if (std::abs(pw - Cx(1)) < cfg.root_unity_tol) {
            q = cand;
            break;
        }
    }
    if (q == 0) {
        c.cls = CycleClass::irrationally_indifferent;
        return c;
    }
    c.cls = CycleClass::parabolic;
    c.parabolic = parabolic_invariants(f, c, q, cfg);
    return c;
}

std::vector<Cycle> cycles_up_to_period(const RationalMap& f, const CycleSearchConfig& cfg,
                                       const Tolerances& tol) {
    std::vector<Cycle> cycles;
    PointSet seen(tol.eps_point);

    for (int k = 1; k <= cfg.k_max; ++k) {
        double dcheck = std::pow(static_cast<double>(f.D), k);
        if (dcheck > cfg.degree_cap) throw DegreeCap("period search exceeds the degree cap");
        RationalMap fk = iterate(f, k, tol, cfg.degree_cap);
        Poly G = fk.P - Poly::identity() * fk.Q;
        std::vector<ProjPoint> candidates;
        if (!G.is_zero() && G.degree() > 0)
            for (auto& rc : roots_with_multiplicity(G, tol))
                candidates.push_back(ProjPoint::affine(rc.value));
        int expected = static_cast<int>(dcheck) + 1;
        if (G.degree() < expected) candidates.push_back(ProjPoint::infinity());

        for (auto& x : candidates) {
            if (seen.find(x)) continue;
            // Trace the orbit and find the exact period.
            std::vector<ProjPoint> orbit{x};
            int period = 0;
            ProjPoint y = x;
            for (int step = 1; step <= k; ++step) {
                y = f.apply(y);
                if (chordal(y, x) < tol.eps_point) {
                    period = step;
                    break;
                }
                orbit.push_back(y);
            }
            if (period == 0)
                throw ClusterAmbiguity("orbit of a period-" + std::to_string(k) +
                                       " candidate did not close up");
            if (k % period != 0)
                throw ClusterAmbiguity("return time " + std::to_string(period) +
                                       " does not divide " + std::to_string(k));
            orbit.resize(period);
            // Canonical rotation: start at the least point.
            int start = 0;
            for (int i = 1; i < period; ++i)
                if (point_less(orbit[i], orbit[start])) start = i;
            std::rotate(orbit.begin(), orbit.begin() + start, orbit.end());
            for (auto& p : orbit) seen.insert(p);
            Cycle c;
            c.points = orbit;
            c.period = period;
            cycles.push_back(classify_cycle(f, c, cfg, tol));
        }
    }
    std::sort(cycles.begin(), cycles.end(), [](const Cycle& a, const Cycle& b) {
        if (a.period != b.period) return a.period < b.period;
        return point_less(a.points[0], b.points[0]);
    });
    return cycles;
}

int gamma_of(const Cycle& c) {
    switch (c.cls) {
        case CycleClass::superattracting:
        case CycleClass::repelling:
            return 0;
        case CycleClass::attracting:
        case CycleClass::irrationally_indifferent:
            return 1;
        case CycleClass::parabolic:
            return c.parabolic->repelling_side ? c.parabolic->nu : c.parabolic->nu + 1;
        default:
            throw Unclassified("gamma of an unclassified cycle");
    }
}

GammaReport gamma(const RationalMap& f, const std::vector<Cycle>& cycles) {
    (void)f;
    GammaReport rep;
    for (auto& c : cycles) {
        rep.gamma_values.push_back(gamma_of(c));
        rep.gamma_total += rep.gamma_values.back();
    }
    return rep;
}

} // namespace dynsheaf
