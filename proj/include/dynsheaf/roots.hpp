#pragma once

#include "dynsheaf/poly.hpp"

#include <vector>

namespace dynsheaf {

struct RootCluster {
    Cx value;
    int multiplicity;
};

/// All complex roots of p with multiplicities. Aberth-Ehrlich simultaneous
/// iteration started from a perturbed circle, followed by cluster analysis:
/// estimates are merged when their inclusion radii overlap, so an m-fold root
/// that converged to a tight m-cluster is reported once with multiplicity m.
/// Multiplicities sum to deg p. Throws NonConvergence after
/// tol.max_root_iterations.
std::vector<RootCluster> roots_with_multiplicity(const Poly& p, const Tolerances& tol);

} // namespace dynsheaf
