#pragma once

#include "dynsheaf/cycles.hpp"
#include "dynsheaf/projective.hpp"
#include "dynsheaf/rational_map.hpp"

#include <vector>

namespace dynsheaf {

/// Finite formal sum of sphere points with integer multiplicities. The
/// support is deduplicated under eps_point at construction; zero
/// multiplicities are purged.
class Divisor {
public:
    Divisor() = default;
    Divisor(const std::vector<std::pair<ProjPoint, int>>& entries, double eps);

    int degree() const;
    int size() const { return static_cast<int>(pts_.size()); }
    const std::vector<std::pair<ProjPoint, int>>& entries() const { return pts_; }
    int multiplicity_at(const ProjPoint& p) const;
    bool contains(const ProjPoint& p) const { return multiplicity_at(p) != 0; }
    double eps() const { return eps_; }

    Divisor operator+(const Divisor& o) const;
    Divisor operator-(const Divisor& o) const;
    /// Pointwise min on the merged support.
    Divisor meet(const Divisor& o) const;
    /// Every multiplicity of *this <= the one of o.
    bool leq(const Divisor& o) const;
    bool is_effective() const;
    bool same_as(const Divisor& o) const { return leq(o) && o.leq(*this); }

private:
    double eps_ = 1e-7;
    std::vector<std::pair<ProjPoint, int>> pts_;
    void normalize();
};

Divisor single_point(const ProjPoint& p, int mult, double eps);

/// f*[y] = sum over the fiber of deg_x(f) [x]; degree multiplies by D.
Divisor pullback_divisor(const RationalMap& f, const Divisor& d, const Tolerances& tol);

bool dynamical_check(const RationalMap& f, const Divisor& d, const Tolerances& tol);

struct EDivisorPair {
    Divisor d0, d1;
};

bool e_dynamical_check(const RationalMap& f, const Divisor& d0, const Divisor& d1,
                       const Tolerances& tol);

/// Sharp rigid divisor supported on the given classified cycles: multiplicity
/// 2 at attracting / irrationally indifferent, 2N+1 at parabolic-repelling,
/// 2N+2 at parabolic-nonrepelling, 1 at repelling. Superattracting cycles are
/// rejected. With sharp=false the same values act as upper bounds and the
/// returned divisor still uses them (the sharp case).
Divisor rigid_divisor(const RationalMap& f, const std::vector<Cycle>& cycles, bool sharp,
                      const Tolerances& tol);

/// X/f variant used for reduced "rigid cycles": multiplicity 2 on nonrepelling
/// cycles (superattracting included), 1 on repelling ones.
Divisor rigid_cycles_xf(const RationalMap& f, const std::vector<Cycle>& cycles,
                        const Tolerances& tol);

/// Truncated critical divisor pair (Lambda^{N+1}, Lambda^N) where
/// Lambda^N = sum_{x in C_f union S_{f^N}} deg_x(f) [x].
EDivisorPair lambda_truncated(const RationalMap& f, int N, const Tolerances& tol);

/// Lambda pair plus sharp rigid summands over the chosen cycles, with the
/// postcritical adjustment; degree difference must equal delta_f.
EDivisorPair claim_divisor(const RationalMap& f, const std::vector<Cycle>& cycles, int N,
                           const Tolerances& tol);

} // namespace dynsheaf
