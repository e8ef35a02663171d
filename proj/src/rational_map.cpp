#include "dynsheaf/rational_map.hpp"

#include "dynsheaf/errors.hpp"
#include "dynsheaf/roots.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dynsheaf {

ProjPoint RationalMap::apply(const ProjPoint& x) const {
    Cx pa = P.eval_homogeneous(x.a, x.b, D);
    Cx qa = Q.eval_homogeneous(x.a, x.b, D);
    return ProjPoint::homogeneous(pa, qa);
}

RationalMap make_map(const Poly& P_in, const Poly& Q_in, const Tolerances& tol) {
    if (P_in.is_zero() && Q_in.is_zero())
        throw PreconditionViolation("make_map: both polynomials are zero");
    Poly P = P_in, Q = Q_in;
    bool reduced = false;
    // Remove shared roots detected within eps_point.
    if (!P.is_zero() && !Q.is_zero() && P.degree() > 0 && Q.degree() > 0) {
        auto pr = roots_with_multiplicity(P, tol);
        auto qr = roots_with_multiplicity(Q, tol);
        for (auto& rp : pr) {
            for (auto& rq : qr) {
                int shared = std::min(rp.multiplicity, rq.multiplicity);
                if (shared <= 0) continue;
                double sep = std::abs(rp.value - rq.value) /
                             std::max(1.0, std::abs(rp.value));
                if (sep < tol.eps_point * 10) {
                    Poly factor({-rp.value, Cx(1)});
                    for (int k = 0; k < shared; ++k) {
                        P = P.divmod(factor).first;
                        Q = Q.divmod(factor).first;
                    }
                    rp.multiplicity -= shared;
                    rq.multiplicity -= shared;
                    reduced = true;
                }
            }
        }
    }
    RationalMap f;
    f.reduced_common_factor = reduced;
    // Normalize: Q monic when nonzero, otherwise P monic.
    if (!Q.is_zero()) {
        Cx s = Q.lead();
        f.P = P * (Cx(1) / s);
        f.Q = Q * (Cx(1) / s);
    } else {
        Cx s = P.lead();
        f.P = P * (Cx(1) / s);
        f.Q = Q;
    }
    f.D = std::max(f.P.degree(), f.Q.degree());
    if (f.D < 1) throw DegreeZero("reduced map is constant");
    return f;
}

double chart_scale(const ProjPoint& x) {
    if (x.is_infinity()) return 1.0;
    return std::max(1.0, std::abs(x.value()));
}

LocalSeries local_series(const RationalMap& f, const ProjPoint& x, int order,
                         double scale_override, double image_scale_override) {
    LocalSeries out;
    out.center = x;
    out.image = f.apply(x);
    out.chart_scale = scale_override > 0 ? scale_override : 1.0;
    out.image_scale = image_scale_override > 0 ? image_scale_override : 1.0;

    const int D = f.D;
    Poly A, B; // f written in the source chart: numerator/denominator in zeta
    if (!x.is_infinity()) {
        Cx x0 = x.value();
        // z = x0 + s*zeta
        Poly Ps = f.P.taylor_shift(x0);
        Poly Qs = f.Q.taylor_shift(x0);
        // substitute zeta -> s*zeta
        auto scale_arg = [&](Poly p) {
            std::vector<Cx> c = p.coeffs();
            Cx pw(1);
            for (auto& v : c) {
                v *= pw;
                pw *= out.chart_scale;
            }
            return Poly(std::move(c));
        };
        A = scale_arg(Ps);
        B = scale_arg(Qs);
    } else {
        // z = 1/w: f(1/w) = revP(w)/revQ(w) at common length D.
        A = f.P.reverse(D);
        B = f.Q.reverse(D);
    }
    // Now f(chart(zeta)) = A(zeta)/B(zeta); move to the target chart.
    Poly num, den;
    if (!out.image.is_infinity()) {
        Cx y0 = out.image.value();
        // (A/B - y0)/s' = (A - y0 B) / (s' B)
        num = A - B * y0;
        den = B * Cx(out.image_scale);
    } else {
        // w-chart at the target: 1/(A/B) = B/A
        num = B;
        den = A;
    }
    out.series = JetSeries::from_rational(num, den, order);
    // The constant term is zero by construction; clamp numerical dust.
    if (!out.series.c.empty()) out.series.c[0] = Cx(0);
    return out;
}

std::pair<ProjPoint, Cx> eval_and_local_derivative(const RationalMap& f, const ProjPoint& x) {
    LocalSeries ls = local_series(f, x, 2);
    return {ls.image, ls.series.coeff(1)};
}

RationalMap iterate(const RationalMap& f, int k, const Tolerances& tol, int degree_cap) {
    if (k < 1) throw PreconditionViolation("iterate: k must be positive");
    double dcheck = std::pow(static_cast<double>(f.D), k);
    if (dcheck > degree_cap) throw DegreeCap("D^k exceeds the degree cap");
    RationalMap g = f;
    for (int i = 1; i < k; ++i) {
        // g <- f o g: substitute (gP, gQ) into f homogeneously.
        int L = f.D;
        std::vector<Poly> gPpow(L + 1), gQpow(L + 1);
        gPpow[0] = Poly::constant(Cx(1));
        gQpow[0] = Poly::constant(Cx(1));
        for (int j = 1; j <= L; ++j) {
            gPpow[j] = gPpow[j - 1] * g.P;
            gQpow[j] = gQpow[j - 1] * g.Q;
        }
        auto hom = [&](const Poly& coeffs) {
            Poly res;
            for (int j = 0; j <= L; ++j)
                res = res + gPpow[j] * gQpow[L - j] * coeffs.coeff(j);
            return res;
        };
        g = make_map(hom(f.P), hom(f.Q), tol);
    }
    return g;
}

CriticalData critical_data(const RationalMap& f, const Tolerances& tol) {
    if (f.D < 2) throw PreconditionViolation("critical_data needs degree >= 2");
    CriticalData out;
    Poly W = f.wronskian();
    int ram_total = 0;
    if (!W.is_zero() && W.degree() > 0) {
        for (auto& rc : roots_with_multiplicity(W, tol)) {
            out.critical_points.push_back(ProjPoint::affine(rc.value));
            out.local_degrees.push_back(rc.multiplicity + 1);
            ram_total += rc.multiplicity;
        }
    }
    // Contribution of infinity read from the w-chart series.
    {
        LocalSeries ls = local_series(f, ProjPoint::infinity(), f.D + 2);
        int ord = 0;
        double mx = 0;
        for (auto& c : ls.series.c) mx = std::max(mx, std::abs(c));
        for (int k = 1; k < ls.series.order(); ++k) {
            if (std::abs(ls.series.coeff(k)) > 1e-9 * std::max(1.0, mx)) {
                ord = k;
                break;
            }
        }
        if (ord == 0) throw RamificationDegreeMismatch("cannot read local degree at infinity");
        if (ord > 1) {
            out.critical_points.push_back(ProjPoint::infinity());
            out.local_degrees.push_back(ord);
            ram_total += ord - 1;
        }
    }
    if (ram_total != 2 * f.D - 2)
        throw RamificationDegreeMismatch("deg Gamma_f = " + std::to_string(ram_total) +
                                         ", expected " + std::to_string(2 * f.D - 2));
    PointSet values(tol.eps_point);
    for (auto& c : out.critical_points) values.insert(f.apply(c));
    out.critical_values = values.points();
    return out;
}

int local_degree(const RationalMap& f, const ProjPoint& x, const Tolerances& tol) {
    (void)tol;
    LocalSeries ls = local_series(f, x, f.D + 2);
    double mx = 0;
    for (auto& c : ls.series.c) mx = std::max(mx, std::abs(c));
    for (int k = 1; k < ls.series.order(); ++k)
        if (std::abs(ls.series.coeff(k)) > 1e-9 * std::max(1.0, mx)) return k;
    throw RamificationDegreeMismatch("local degree unreadable at " + x.str());
}

PostcriticalReport postcritical(const RationalMap& f, int n_max, const Tolerances& tol) {
    if (n_max < 2) throw PreconditionViolation("postcritical needs n_max >= 2");
    PostcriticalReport rep;
    CriticalData cd = critical_data(f, tol);

    PointSet S(tol.eps_point);
    for (auto& v : cd.critical_values) S.insert(v);
    std::vector<ProjPoint> A = cd.critical_values; // A_n = f^n(S_f), starts at n=0
    rep.s_sets.push_back(S.points());

    for (int n = 1; n <= n_max; ++n) {
        for (auto& p : A) p = f.apply(p);
        // cluster the iterated set onto itself first
        PointSet An(tol.eps_point);
        for (auto& p : A) An.insert(p);
        A = An.points();
        int before = S.size();
        for (auto& p : A) S.insert(p);
        rep.increments.push_back(S.size() - before);
        rep.s_sets.push_back(S.points());
        size_t m = rep.increments.size();
        if (m >= 3 && rep.increments[m - 1] == rep.increments[m - 2] &&
            rep.increments[m - 2] == rep.increments[m - 3]) {
            rep.stabilized = true;
            rep.horizon = static_cast<int>(m);
            rep.delta_f = rep.increments.back();
            break;
        }
    }
    if (!rep.stabilized) {
        rep.horizon = static_cast<int>(rep.increments.size());
        rep.delta_f = rep.increments.empty() ? 0 : rep.increments.back();
    }
    // a_n must be non-increasing; a violation signals clustering trouble.
    for (size_t i = 1; i < rep.increments.size(); ++i)
        if (rep.increments[i] > rep.increments[i - 1])
            throw ClusterAmbiguity("postcritical increments increased");
    return rep;
}

RationalMap mobius_conjugate(const RationalMap& f, const std::array<Cx, 4>& M,
                             const Tolerances& tol) {
    Cx a = M[0], b = M[1], c = M[2], d = M[3];
    Cx det = a * d - b * c;
    if (std::abs(det) < 1e-12) throw SingularMobius("Mobius matrix is singular");
    // M(z) = (a z + b)/(c z + d); result = M^{-1} o f o M.
    // First f o M homogeneously: substitute (num, den) = (a z + b, c z + d).
    Poly mz({b, a});
    Poly mw({d, c});
    auto hom = [&](const Poly& coeffs, int L) {
        std::vector<Poly> zp(L + 1), wp(L + 1);
        zp[0] = Poly::constant(Cx(1));
        wp[0] = Poly::constant(Cx(1));
        for (int j = 1; j <= L; ++j) {
            zp[j] = zp[j - 1] * mz;
            wp[j] = wp[j - 1] * mw;
        }
        Poly res;
        for (int j = 0; j <= L; ++j) res = res + zp[j] * wp[L - j] * coeffs.coeff(j);
        return res;
    };
    Poly fp = hom(f.P, f.D);
    Poly fq = hom(f.Q, f.D);
    // M^{-1}(z) = (d z - b)/(-c z + a): apply to the pair (fp, fq).
    Poly num = fp * d - fq * b;
    Poly den = fq * a - fp * c;
    return make_map(num, den, tol);
}

} // namespace dynsheaf
