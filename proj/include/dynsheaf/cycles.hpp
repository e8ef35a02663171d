#pragma once

#include "dynsheaf/rational_map.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dynsheaf {

enum class CycleClass {
    unclassified,
    superattracting,
    attracting,
    repelling,
    parabolic,
    irrationally_indifferent,
};

std::string to_string(CycleClass c);

/// Invariants of a parabolic cycle: multiplier a primitive q-th root of
/// unity, N+1 the fixed-point multiplicity of f^{kq}, nu = N/q, alpha the
/// formal invariant of the preferred coordinate, beta = (N+1)/2 - alpha.
struct ParabolicData {
    int q = 0;
    int N = 0;
    int nu = 0;
    Cx alpha{0};
    Cx beta{0};
    bool repelling_side = false; // Re(beta) > 0
};

struct Cycle {
    std::vector<ProjPoint> points; // ordered orbit
    int period = 0;
    Cx multiplier{0};
    CycleClass cls = CycleClass::unclassified;
    std::optional<ParabolicData> parabolic;
    bool classified() const { return cls != CycleClass::unclassified; }
};

struct CycleSearchConfig {
    int k_max = 2;
    int q_max = 24;
    double root_unity_tol = 1e-6;
    double superattracting_tol = 1e-9;
    int degree_cap = 4096;
    int jet_order_cap = 64;
};

/// All cycles of period <= k_max: roots of the homogenized fixed point
/// equation of f^k grouped into orbits, deduplicated across k, classified.
std::vector<Cycle> cycles_up_to_period(const RationalMap& f, const CycleSearchConfig& cfg,
                                       const Tolerances& tol);

/// Fills multiplier, class and parabolic data of a cycle given by its orbit.
Cycle classify_cycle(const RationalMap& f, Cycle c, const CycleSearchConfig& cfg,
                     const Tolerances& tol);

/// Centered series of f^period along the orbit of c (product chart series).
JetSeries cycle_return_series(const RationalMap& f, const Cycle& c, int order);

/// gamma weight of one classified cycle: 0 superattracting/repelling,
/// 1 attracting/irrationally indifferent, nu parabolic-repelling,
/// nu+1 parabolic-nonrepelling.
int gamma_of(const Cycle& c);

struct GammaReport {
    std::vector<int> gamma_values; // parallel to the input cycle list
    int gamma_total = 0;           // gamma_A
};

GammaReport gamma(const RationalMap& f, const std::vector<Cycle>& cycles);

} // namespace dynsheaf
