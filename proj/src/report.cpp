#include "dynsheaf/report.hpp"

#include "dynsheaf/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dynsheaf {

using nlohmann::json;

json point_to_json(const ProjPoint& p) {
    return json::array({p.a.real(), p.a.imag(), p.b.real(), p.b.imag()});
}

json divisor_to_json(const Divisor& d) {
    json arr = json::array();
    for (auto& [p, m] : d.entries()) arr.push_back({{"point", point_to_json(p)}, {"mult", m}});
    return arr;
}

json quad_differential_to_json(const QuadDifferential& q) {
    json coeffs = json::array();
    for (int j = 0; j < q.space.dim; ++j)
        coeffs.push_back(json::array({q.coeff(j).real(), q.coeff(j).imag()}));
    return {{"pole_divisor", divisor_to_json(q.space.bound)}, {"coefficients", coeffs}};
}

namespace {

json cx_to_json(Cx z) { return json::array({z.real(), z.imag()}); }

double round6(double v) {
    double r = std::round(v * 1e6) / 1e6;
    return r == 0 ? 0.0 : r; // normalize the sign of zero
}

json identity_to_json(const IdentityCheck& c) {
    const char* st = c.state == CheckState::pass ? "pass"
                     : c.state == CheckState::fail ? "fail"
                                                    : "skipped";
    json j{{"name", c.name}, {"state", st}, {"lhs", c.lhs}, {"rhs", c.rhs}};
    if (!c.note.empty()) j["note"] = c.note;
    return j;
}

IdentityCheck make_check(const std::string& name, double lhs, double rhs, double eps = 0) {
    IdentityCheck c;
    c.name = name;
    c.lhs = lhs;
    c.rhs = rhs;
    c.state = std::abs(lhs - rhs) <= eps ? CheckState::pass : CheckState::fail;
    return c;
}

IdentityCheck skipped_check(const std::string& name, const std::string& why) {
    IdentityCheck c;
    c.name = name;
    c.state = CheckState::skipped;
    c.note = why;
    return c;
}

} // namespace

bool AnalysisReport::all_identities_pass() const {
    for (auto& c : identities)
        if (c.state == CheckState::fail) return false;
    return true;
}

AnalysisReport analyze(const RationalMap& f, const AnalyzeConfig& cfg,
                       const std::string& expression) {
    if (f.D < 2) throw PreconditionViolation("analysis needs degree >= 2");
    const Tolerances& tol = cfg.tol;
    AnalysisReport rep;
    rep.expression = expression;
    rep.config = cfg;
    rep.D = f.D;
    rep.map_was_reduced = f.reduced_common_factor;

    CriticalData cd = critical_data(f, tol);
    Divisor gamma_div = ramification_divisor(f, tol);
    rep.deg_gamma_f = gamma_div.degree();
    for (auto& [p, m] : gamma_div.entries()) rep.ramification.push_back({p.str(), m});
    for (auto& v : cd.critical_values) rep.critical_values.push_back(v.str());
    rep.identities.push_back(
        make_check("ramification_degree_2D_minus_2", rep.deg_gamma_f, 2 * f.D - 2));

    PostcriticalReport pc = postcritical(f, 40, tol);
    for (auto& s : pc.s_sets) rep.postcritical_sizes.push_back(static_cast<int>(s.size()));
    rep.delta_f = pc.delta_f;
    rep.delta_stabilized = pc.stabilized;
    if (!pc.stabilized)
        rep.warnings.push_back("postcritical increments did not stabilize; delta_f is a "
                               "best-effort value");

    rep.lattes_2222 = lattes_2222_signature(f, tol);

    // Cycles and gamma.
    CycleSearchConfig ccfg;
    ccfg.k_max = cfg.k_max;
    std::vector<Cycle> all_cycles;
    try {
        all_cycles = cycles_up_to_period(f, ccfg, tol);
    } catch (const Error& e) {
        rep.warnings.push_back(std::string("cycle search: ") + e.what());
    }
    std::vector<Cycle> chosen; // nonrepelling, not superattracting
    for (auto& c : all_cycles) {
        CycleSummary cs;
        cs.cycle = c;
        cs.gamma = gamma_of(c);
        if (c.cls != CycleClass::superattracting) {
            // local check: jet kernel of the sharp rigid pair equals gamma
            try {
                Divisor sharp = rigid_divisor(f, {c}, true, tol);
                cs.sharp_hom = hom_dim(f, sharp, sharp, tol);
            } catch (const Error& e) {
                rep.warnings.push_back(std::string("sharp rigid check: ") + e.what());
            }
        }
        if (c.cls == CycleClass::attracting || c.cls == CycleClass::parabolic ||
            c.cls == CycleClass::irrationally_indifferent)
            chosen.push_back(c);
        rep.cycles.push_back(std::move(cs));
    }
    GammaReport gr = gamma(f, chosen);
    rep.gamma_A = gr.gamma_total;

    {
        bool all = true;
        bool any = false;
        for (auto& cs : rep.cycles)
            if (cs.sharp_hom) {
                any = true;
                all = all && *cs.sharp_hom == cs.gamma;
            }
        IdentityCheck c;
        c.name = "local_hom_equals_gamma";
        c.state = !any ? CheckState::skipped : (all ? CheckState::pass : CheckState::fail);
        rep.identities.push_back(c);
    }
    {
        IdentityCheck c;
        c.name = "fatou_shishikura_gamma_le_delta";
        c.lhs = rep.gamma_A;
        c.rhs = rep.delta_f;
        c.state = rep.gamma_A <= rep.delta_f ? CheckState::pass : CheckState::fail;
        rep.identities.push_back(c);
    }

    if (!chosen.empty()) {
        try {
            rep.rigid = rigid_divisor(f, chosen, true, tol);
        } catch (const Error& e) {
            rep.warnings.push_back(std::string("rigid divisor: ") + e.what());
        }
    }

    // Truncated critical divisor and the composite pair; when the requested
    // horizon makes the chain collide numerically, retry one step lower.
    auto build_pair = [&](int N) {
        rep.lambda_pair = lambda_truncated(f, N, tol);
        rep.claim_pair = claim_divisor(f, chosen, N, tol);
        rep.truncation_N = N;
    };
    int N_request = cfg.horizon_N > 0 ? cfg.horizon_N : pc.horizon + 1;
    try {
        try {
            build_pair(N_request);
        } catch (const Error& e) {
            if (cfg.horizon_N > 0 || N_request <= pc.horizon) throw;
            rep.warnings.push_back(std::string("claim divisor at N=") +
                                   std::to_string(N_request) + " failed (" + e.what() +
                                   "); retrying at the stabilization horizon");
            build_pair(pc.horizon);
        }
    } catch (const Error& e) {
        rep.warnings.push_back(std::string("divisor construction: ") + e.what());
    }

    if (rep.lambda_pair) {
        try {
            rep.lambda_dims = hom_ext_dims(f, rep.lambda_pair->d0, rep.lambda_pair->d1, tol);
            rep.identities.push_back(make_check("hom_lambda_equals_deg_gamma",
                                                rep.lambda_dims->hom, rep.deg_gamma_f));
            rep.identities.push_back(make_check("ext1_lambda_equals_deg_gamma_minus_delta",
                                                rep.lambda_dims->ext1,
                                                rep.deg_gamma_f - rep.delta_f));
        } catch (const Error& e) {
            rep.warnings.push_back(std::string("lambda dims: ") + e.what());
        }
    } else {
        rep.identities.push_back(skipped_check("hom_lambda_equals_deg_gamma", "no lambda pair"));
        rep.identities.push_back(
            skipped_check("ext1_lambda_equals_deg_gamma_minus_delta", "no lambda pair"));
    }

    if (rep.claim_pair) {
        try {
            rep.claim_dims = hom_ext_dims(f, rep.claim_pair->d0, rep.claim_pair->d1, tol);
            rep.identities.push_back(make_check("hom_claim_equals_2D_minus_2_plus_gamma",
                                                rep.claim_dims->hom,
                                                2 * f.D - 2 + rep.gamma_A));
            rep.identities.push_back(
                make_check("ext1_claim_equals_2D_minus_2_plus_gamma_minus_delta",
                           rep.claim_dims->ext1, 2 * f.D - 2 + rep.gamma_A - rep.delta_f));
        } catch (const Error& e) {
            rep.warnings.push_back(std::string("claim dims: ") + e.what());
        }
    } else {
        rep.identities.push_back(
            skipped_check("hom_claim_equals_2D_minus_2_plus_gamma", "no claim pair"));
        rep.identities.push_back(
            skipped_check("ext1_claim_equals_2D_minus_2_plus_gamma_minus_delta",
                          "no claim pair"));
    }

    try {
        rep.global_dims = global_deformation_dims(f, tol);
        rep.identities.push_back(
            make_check("global_invariant_fields_vanish", rep.global_dims->hom, 0));
        rep.identities.push_back(
            make_check("global_coker_2D_minus_2", rep.global_dims->coker, 2 * f.D - 2));
    } catch (const Error& e) {
        rep.warnings.push_back(std::string("global deformations: ") + e.what());
    }

    if (rep.claim_pair) {
        try {
            rep.nabla = nabla_and_ext2(f, *rep.claim_pair, tol);
            IdentityCheck c;
            c.name = rep.lattes_2222 ? "thurston_ext2_equals_one" : "epstein_ext2_vanishes";
            c.lhs = rep.nabla->ext2_dim;
            c.rhs = rep.lattes_2222 ? 1 : 0;
            c.state = c.lhs == c.rhs ? CheckState::pass : CheckState::fail;
            std::ostringstream os;
            os << "margin " << rep.nabla->smallest_singular_value;
            c.note = os.str();
            rep.identities.push_back(c);
        } catch (const Error& e) {
            rep.warnings.push_back(std::string("nabla/ext2: ") + e.what());
            rep.identities.push_back(skipped_check("epstein_ext2_vanishes", e.what()));
        }
    }

    // Ext^*(Omega, O(-Delta)) assembled through the two-column engine:
    // row 0 over global vector fields bounded below by Delta_0, row 1 the
    // Serre-dual of nabla.
    if (rep.claim_pair && rep.nabla) {
        try {
            int deg0 = rep.claim_pair->d0.degree();
            int deg1 = rep.claim_pair->d1.degree();
            SpectralRow r0;
            r0.e0 = std::max(0, 3 - deg0);
            r0.e1 = std::max(0, 2 * f.D + 1 - deg1);
            std::vector<std::string> rl, cl;
            for (int i = 0; i < r0.e1; ++i) rl.push_back("h0ft" + std::to_string(i));
            for (int i = 0; i < r0.e0; ++i) cl.push_back("h0t" + std::to_string(i));
            r0.d = LabeledMatrix(rl, cl);
            if (r0.e0 > 0)
                throw PreconditionViolation("divisor too small for the ideal assembly");
            SpectralRow r1;
            r1.e0 = std::max(0, deg0 - 3);
            r1.e1 = std::max(0, deg1 - (2 * f.D + 1));
            LabeledMatrix dT(rep.nabla->nabla.col_labels, rep.nabla->nabla.row_labels);
            dT.m = rep.nabla->nabla.m.transpose();
            if (dT.rows() != r1.e1 || dT.cols() != r1.e0)
                throw DimensionMismatch("serre-dual differential shape");
            r1.d = dT;
            rep.ideal_spectral = two_column_assemble({r0, r1}, tol);
            int ext1_ideal = rep.ideal_spectral->H.size() > 1 ? rep.ideal_spectral->H[1] : 0;
            int ext2_ideal = rep.ideal_spectral->H.size() > 2 ? rep.ideal_spectral->H[2] : 0;
            rep.identities.push_back(make_check("riemann_roch_ext1_minus_ext2",
                                                ext1_ideal - ext2_ideal,
                                                2 * f.D - 2 + (deg0 - deg1)));
        } catch (const Error& e) {
            rep.warnings.push_back(std::string("ideal spectral assembly: ") + e.what());
            rep.identities.push_back(skipped_check("riemann_roch_ext1_minus_ext2", e.what()));
        }
    } else {
        rep.identities.push_back(
            skipped_check("riemann_roch_ext1_minus_ext2", "no claim pair"));
    }
    return rep;
}

json AnalysisReport::to_json() const {
    json j;
    j["schema"] = "dynsheaf/1";
    j["expression"] = expression;
    j["degree"] = D;
    j["deg_gamma_f"] = deg_gamma_f;
    j["ramification"] = json::array();
    for (auto& [p, m] : ramification) j["ramification"].push_back({{"point", p}, {"mult", m}});
    j["critical_values"] = critical_values;
    j["postcritical_sizes"] = postcritical_sizes;
    j["delta_f"] = delta_f;
    j["delta_stabilized"] = delta_stabilized;
    j["truncation_N"] = truncation_N;
    j["lattes_2222"] = lattes_2222;
    j["map_was_reduced"] = map_was_reduced;
    j["gamma_A"] = gamma_A;

    json cyc = json::array();
    for (auto& cs : cycles) {
        json c;
        c["period"] = cs.cycle.period;
        c["class"] = to_string(cs.cycle.cls);
        c["multiplier"] = cx_to_json(cs.cycle.multiplier);
        json pts = json::array();
        for (auto& p : cs.cycle.points) pts.push_back(point_to_json(p));
        c["points"] = pts;
        c["gamma"] = cs.gamma;
        if (cs.cycle.parabolic) {
            const auto& pd = *cs.cycle.parabolic;
            c["parabolic"] = {{"q", pd.q},         {"N", pd.N},
                              {"nu", pd.nu},       {"alpha", cx_to_json(pd.alpha)},
                              {"beta", cx_to_json(pd.beta)},
                              {"repelling_side", pd.repelling_side}};
        }
        if (cs.sharp_hom) c["sharp_hom"] = *cs.sharp_hom;
        cyc.push_back(c);
    }
    j["cycles"] = cyc;

    if (lambda_pair)
        j["lambda_pair"] = {{"d0", divisor_to_json(lambda_pair->d0)},
                            {"d1", divisor_to_json(lambda_pair->d1)}};
    if (claim_pair)
        j["claim_pair"] = {{"d0", divisor_to_json(claim_pair->d0)},
                           {"d1", divisor_to_json(claim_pair->d1)}};
    if (rigid) j["rigid_divisor"] = divisor_to_json(*rigid);
    json dims;
    if (lambda_dims) dims["hom_lambda"] = lambda_dims->hom, dims["ext1_lambda"] = lambda_dims->ext1;
    if (claim_dims) dims["hom_claim"] = claim_dims->hom, dims["ext1_claim"] = claim_dims->ext1;
    if (global_dims) {
        dims["global_hom"] = global_dims->hom;
        dims["global_coker"] = global_dims->coker;
        dims["global_sigma_min_rel"] = global_dims->sigma_min_rel;
    }
    if (nabla) {
        dims["ext2"] = nabla->ext2_dim;
        dims["ext2_margin"] = nabla->smallest_singular_value;
        dims["nabla_source_dim"] = nabla->source_dim;
        dims["nabla_target_dim"] = nabla->target_dim;
    }
    if (ideal_spectral) {
        dims["ideal_H"] = ideal_spectral->H;
        dims["ideal_K"] = ideal_spectral->K;
        dims["ideal_C"] = ideal_spectral->C;
    }
    j["dims"] = dims;

    json ids = json::array();
    for (auto& c : identities) ids.push_back(identity_to_json(c));
    j["identities"] = ids;
    j["warnings"] = warnings;
    j["tolerances"] = {{"eps_point", config.tol.eps_point},
                       {"eps_rank", config.tol.eps_rank},
                       {"eps_residual", config.tol.eps_residual},
                       {"max_root_iterations", config.tol.max_root_iterations},
                       {"rng_seed", config.tol.rng_seed}};
    j["config"] = {{"k_max", config.k_max}, {"horizon_N", config.horizon_N}};
    return j;
}

json AnalysisReport::invariant_block() const {
    json j;
    j["degree"] = D;
    j["deg_gamma_f"] = deg_gamma_f;
    j["delta_f"] = delta_f;
    j["gamma_A"] = gamma_A;
    j["lattes_2222"] = lattes_2222;
    // cycle content up to relabeling: sorted (period, class, gamma, rounded multiplier)
    std::vector<std::string> keys;
    for (auto& cs : cycles) {
        std::ostringstream os;
        os << cs.cycle.period << "|" << to_string(cs.cycle.cls) << "|" << cs.gamma << "|"
           << round6(cs.cycle.multiplier.real()) << "," << round6(cs.cycle.multiplier.imag());
        if (cs.cycle.parabolic)
            os << "|q" << cs.cycle.parabolic->q << "N" << cs.cycle.parabolic->N << "b"
               << round6(cs.cycle.parabolic->beta.real());
        keys.push_back(os.str());
    }
    std::sort(keys.begin(), keys.end());
    j["cycles"] = keys;
    if (lambda_dims) {
        j["hom_lambda"] = lambda_dims->hom;
        j["ext1_lambda"] = lambda_dims->ext1;
    }
    if (claim_dims) {
        j["hom_claim"] = claim_dims->hom;
        j["ext1_claim"] = claim_dims->ext1;
    }
    if (global_dims) {
        j["global_hom"] = global_dims->hom;
        j["global_coker"] = global_dims->coker;
    }
    if (nabla) j["ext2"] = nabla->ext2_dim;
    std::vector<std::string> id_keys;
    for (auto& c : identities)
        id_keys.push_back(c.name + "=" + (c.state == CheckState::pass ? "pass"
                                          : c.state == CheckState::fail ? "fail"
                                                                        : "skipped"));
    std::sort(id_keys.begin(), id_keys.end());
    j["identity_states"] = id_keys;
    return j;
}

std::string AnalysisReport::text_summary() const {
    std::ostringstream os;
    os << "map: " << expression << "\n";
    os << "degree D = " << D << ", deg Gamma_f = " << deg_gamma_f << ", delta_f = " << delta_f
       << (delta_stabilized ? "" : " (not stabilized)") << ", N = " << truncation_N << "\n";
    if (lattes_2222) os << "postcritical signature (2,2,2,2): Lattes candidate\n";
    os << "cycles (k_max = " << config.k_max << "):\n";
    for (auto& cs : cycles) {
        os << "  period " << cs.cycle.period << " " << to_string(cs.cycle.cls) << " |rho|="
           << std::abs(cs.cycle.multiplier) << " gamma=" << cs.gamma;
        if (cs.cycle.parabolic)
            os << " (q=" << cs.cycle.parabolic->q << ", N=" << cs.cycle.parabolic->N
               << ", nu=" << cs.cycle.parabolic->nu
               << ", Re beta=" << cs.cycle.parabolic->beta.real() << ")";
        if (cs.sharp_hom) os << " sharp_hom=" << *cs.sharp_hom;
        os << "\n";
    }
    os << "gamma_A = " << gamma_A << " (lower bound for gamma_f: cycles up to period "
       << config.k_max << " only)\n";
    if (lambda_dims)
        os << "lambda pair: hom = " << lambda_dims->hom << ", ext1 = " << lambda_dims->ext1
           << "\n";
    if (claim_dims)
        os << "claim pair: hom = " << claim_dims->hom << ", ext1 = " << claim_dims->ext1 << "\n";
    if (global_dims)
        os << "global deformations: hom = " << global_dims->hom
           << ", coker = " << global_dims->coker << "\n";
    if (nabla)
        os << "ext2 = " << nabla->ext2_dim << " (margin " << nabla->smallest_singular_value
           << ")\n";
    os << "identities:\n";
    for (auto& c : identities) {
        const char* st = c.state == CheckState::pass ? "pass"
                         : c.state == CheckState::fail ? "FAIL"
                                                        : "skipped";
        os << "  [" << st << "] " << c.name;
        if (c.state != CheckState::skipped) os << " (" << c.lhs << " vs " << c.rhs << ")";
        if (!c.note.empty()) os << " -- " << c.note;
        os << "\n";
    }
    for (auto& w : warnings) os << "warning: " << w << "\n";
    return os.str();
}

} // namespace dynsheaf
