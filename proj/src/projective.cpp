#include "dynsheaf/projective.hpp"

#include <cmath>
#include <sstream>

namespace dynsheaf {

ProjPoint ProjPoint::homogeneous(Cx a, Cx b) {
    double n = std::sqrt(std::norm(a) + std::norm(b));
    if (n == 0) return {Cx(0), Cx(1)};
    ProjPoint p{a / n, b / n};
    // Fix the phase so equal points get near-equal representatives: make the
    // dominant coordinate real positive.
    Cx pivot = std::abs(p.b) >= std::abs(p.a) ? p.b : p.a;
    if (std::abs(pivot) > 0) {
        Cx phase = pivot / std::abs(pivot);
        p.a /= phase;
        p.b /= phase;
    }
    return p;
}

ProjPoint ProjPoint::affine(Cx z) { return homogeneous(z, Cx(1)); }

ProjPoint ProjPoint::infinity() { return {Cx(1), Cx(0)}; }

std::string ProjPoint::str() const {
    std::ostringstream os;
    if (is_infinity()) {
        os << "inf";
    } else {
        Cx z = value();
        os << z.real();
        if (std::abs(z.imag()) > 1e-12) os << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    }
    return os.str();
}

double chordal(const ProjPoint& p, const ProjPoint& q) {
    return std::abs(p.a * q.b - q.a * p.b);
}

bool point_less(const ProjPoint& p, const ProjPoint& q) {
    bool pi = p.is_infinity(), qi = q.is_infinity();
    if (pi != qi) return qi; // finite points first
    if (pi && qi) return false;
    Cx a = p.value(), b = q.value();
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
}

int PointSet::insert(const ProjPoint& p) {
    if (auto i = find(p)) return *i;
    pts_.push_back(p);
    return static_cast<int>(pts_.size()) - 1;
}

std::optional<int> PointSet::find(const ProjPoint& p) const {
    int best = -1;
    double bestd = eps_;
    for (size_t i = 0; i < pts_.size(); ++i) {
        double d = chordal(pts_[i], p);
        if (d < bestd) {
            bestd = d;
            best = static_cast<int>(i);
        }
    }
    if (best < 0) return std::nullopt;
    return best;
}

} // namespace dynsheaf
