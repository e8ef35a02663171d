#pragma once

#include "dynsheaf/poly.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dynsheaf {

/// Point of the Riemann sphere in unit-normalized homogeneous coordinates
/// (a : b), affine value a/b. Equality is chordal distance below eps_point.
struct ProjPoint {
    Cx a{0.0};
    Cx b{1.0};

    static ProjPoint affine(Cx z);
    static ProjPoint infinity();
    static ProjPoint homogeneous(Cx a, Cx b);

    bool is_infinity(double eps = 1e-7) const { return std::abs(b) < eps; }
    Cx value() const { return a / b; } // infinite result at infinity
    std::string str() const;
};

/// Chordal distance |a1 b2 - a2 b1| for unit-normalized representatives.
double chordal(const ProjPoint& p, const ProjPoint& q);

bool point_less(const ProjPoint& p, const ProjPoint& q);

/// Deduplicating point container: inserts cluster onto existing members
/// within eps (single linkage through the stored representative).
class PointSet {
public:
    explicit PointSet(double eps) : eps_(eps) {}
    /// Returns the index of the matching or newly created point.
    int insert(const ProjPoint& p);
    std::optional<int> find(const ProjPoint& p) const;
    const ProjPoint& operator[](int i) const { return pts_[i]; }
    int size() const { return static_cast<int>(pts_.size()); }
    const std::vector<ProjPoint>& points() const { return pts_; }

private:
    double eps_;
    std::vector<ProjPoint> pts_;
};

} // namespace dynsheaf
