#pragma once

#include "dynsheaf/cycles.hpp"
#include "dynsheaf/divisor.hpp"
#include "dynsheaf/jets.hpp"
#include "dynsheaf/pairs_ext.hpp"
#include "dynsheaf/quad_diff.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace dynsheaf {

struct AnalyzeConfig {
    int k_max = 2;
    int horizon_N = -1; // -1: stabilization horizon + 1, with fallback
    Tolerances tol;
};

enum class CheckState { pass, fail, skipped };

struct IdentityCheck {
    std::string name;
    CheckState state = CheckState::skipped;
    double lhs = 0, rhs = 0;
    std::string note;
};

struct CycleSummary {
    Cycle cycle;
    int gamma = 0;
    std::optional<int> sharp_hom; // jet kernel of the sharp rigid pair
};

struct AnalysisReport {
    std::string expression;
    int D = 0;
    int deg_gamma_f = 0;
    std::vector<std::pair<std::string, int>> ramification; // point, deg_x - 1
    std::vector<std::string> critical_values;
    std::vector<int> postcritical_sizes; // #S_1, #S_2, ...
    int delta_f = 0;
    bool delta_stabilized = false;
    int truncation_N = 0;
    bool lattes_2222 = false;
    bool map_was_reduced = false;

    std::vector<CycleSummary> cycles; // everything found up to k_max
    int gamma_A = 0;                  // nonrepelling, non-superattracting cycles

    std::optional<EDivisorPair> lambda_pair;
    std::optional<EDivisorPair> claim_pair;
    std::optional<Divisor> rigid; // sharp rigid divisor over the chosen cycles

    std::optional<HomExt> lambda_dims;
    std::optional<HomExt> claim_dims;
    std::optional<GlobalDeformationDims> global_dims;
    std::optional<NablaReport> nabla;
    std::optional<SpectralReport> ideal_spectral; // Ext^*(Omega, O(-Delta))

    std::vector<IdentityCheck> identities;
    std::vector<std::string> warnings;
    AnalyzeConfig config;

    bool all_identities_pass() const;
    nlohmann::json to_json() const;
    /// Conjugation-invariant subset used by the invariance checks.
    nlohmann::json invariant_block() const;
    std::string text_summary() const;
};

AnalysisReport analyze(const RationalMap& f, const AnalyzeConfig& cfg,
                       const std::string& expression = "");

nlohmann::json divisor_to_json(const Divisor& d);
nlohmann::json point_to_json(const ProjPoint& p);
nlohmann::json quad_differential_to_json(const QuadDifferential& q);

} // namespace dynsheaf
