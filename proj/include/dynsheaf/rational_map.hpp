#pragma once

#include "dynsheaf/poly.hpp"
#include "dynsheaf/projective.hpp"

#include <array>
#include <vector>

namespace dynsheaf {

class Divisor; // divisor.hpp

/// Rational self-map of the sphere as a coprime pair P/Q, Q monic when
/// nonzero. D = max(deg P, deg Q).
struct RationalMap {
    Poly P, Q;
    int D = 0;
    bool reduced_common_factor = false; // a shared factor was removed at construction

    ProjPoint apply(const ProjPoint& x) const; // homogeneous evaluation, overflow-free
    Cx apply_affine(Cx z) const { return P.eval(z) / Q.eval(z); }
    Poly wronskian() const { return P.derivative() * Q - P * Q.derivative(); }
};

RationalMap make_map(const Poly& P, const Poly& Q, const Tolerances& tol = {});

/// Centered local data of f at x: F = series of f in the charts at x and
/// f(x), F(0)=0. Charts are affine zeta = (z-x)/s, or w = 1/z at infinity.
struct LocalSeries {
    ProjPoint center;
    ProjPoint image;
    JetSeries series;     // F, centered, to the requested order
    double chart_scale;   // s at the source
    double image_scale;   // s at the target
};

/// Chart scale used at x; 1 at infinity, max(1,|x|) at finite points so
/// escaping orbits keep O(1) series coefficients.
double chart_scale(const ProjPoint& x);

LocalSeries local_series(const RationalMap& f, const ProjPoint& x, int order,
                         double scale_override = -1.0, double image_scale_override = -1.0);

/// f(x) together with the derivative of the chart representative at 0.
std::pair<ProjPoint, Cx> eval_and_local_derivative(const RationalMap& f, const ProjPoint& x);

RationalMap iterate(const RationalMap& f, int k, const Tolerances& tol = {},
                    int degree_cap = 4096);

struct CriticalData {
    std::vector<ProjPoint> critical_points;
    std::vector<int> local_degrees;      // deg_x(f) per critical point
    std::vector<ProjPoint> critical_values; // S_f, deduplicated
};

CriticalData critical_data(const RationalMap& f, const Tolerances& tol);

/// deg_x(f) at an arbitrary point (1 away from the critical set).
int local_degree(const RationalMap& f, const ProjPoint& x, const Tolerances& tol);

struct PostcriticalReport {
    std::vector<std::vector<ProjPoint>> s_sets; // S_1, S_2, ...
    std::vector<int> increments;                // a_n = #S_{n+1} - #S_n
    int delta_f = 0;
    bool stabilized = false;
    int horizon = 0; // first n with three equal consecutive increments
};

PostcriticalReport postcritical(const RationalMap& f, int n_max, const Tolerances& tol);

/// M^{-1} o f o M for an invertible 2x2 matrix M acting as a Mobius map.
RationalMap mobius_conjugate(const RationalMap& f, const std::array<Cx, 4>& M,
                             const Tolerances& tol = {});

} // namespace dynsheaf
