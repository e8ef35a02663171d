#include "dynsheaf/acceptance_suite.hpp"
#include "dynsheaf/errors.hpp"
#include "dynsheaf/pairs_ext.hpp"
#include "dynsheaf/parser.hpp"
#include "dynsheaf/report.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <fstream>
#include <iostream>

using namespace dynsheaf;
using nlohmann::json;

namespace {

int cmd_analyze(const std::string& expr, const AnalyzeConfig& cfg, bool as_json) {
    RationalMap f = parse_map(expr, cfg.tol);
    AnalysisReport rep = analyze(f, cfg, expr);
    if (as_json)
        std::cout << rep.to_json().dump(2) << "\n";
    else
        std::cout << rep.text_summary();
    return rep.all_identities_pass() ? 0 : 1;
}

int cmd_verify(const std::string& suite) {
    auto results = run_suite(suite);
    bool all = true;
    for (auto& r : results) {
        std::cout << (r.pass ? "[pass] " : "[FAIL] ") << r.name;
        if (!r.detail.empty()) std::cout << " -- " << r.detail;
        std::cout << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "suite passed" : "suite FAILED") << " (" << results.size()
              << " checks)\n";
    return all ? 0 : 1;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
    int rows = static_cast<int>(j.size());
    int cols = rows ? static_cast<int>(j[0].size()) : 0;
    Eigen::MatrixXcd m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const auto& v = j[r][c];
            if (v.is_array())
                m(r, c) = Cx(v[0].get<double>(), v[1].get<double>());
            else
                m(r, c) = Cx(v.get<double>(), 0.0);
        }
    return m;
}

int cmd_pairs(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return 2;
    }
    json j = json::parse(in);
    Tolerances tol;
    DynPair a = make_pair(matrix_from_json(j.at("phi")));
    DynPair b = make_pair(matrix_from_json(j.at("psi")));
    PairHomExt he = pair_hom_ext(a, b, tol);
    json out{{"hom_dim", he.hom_dim}, {"ext1_dim", he.ext1_dim}};
    if (j.contains("h")) {
        CocycleClass c{a, b, matrix_from_json(j.at("h"))};
        out["is_split"] = is_split(c, tol);
        Eigen::MatrixXcd E = extension_matrix(c);
        json em = json::array();
        for (int r = 0; r < E.rows(); ++r) {
            json row = json::array();
            for (int cc = 0; cc < E.cols(); ++cc)
                row.push_back(json::array({E(r, cc).real(), E(r, cc).imag()}));
            em.push_back(row);
        }
        out["extension_matrix"] = em;
    }
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_torsors(const std::string& group) {
    // formats: "Z/4", "Z/2 x Z/3", or "2,3"
    std::vector<int> factors;
    std::string token;
    auto flush = [&]() {
        if (token.empty()) return;
        size_t slash = token.find('/');
        std::string num = slash == std::string::npos ? token : token.substr(slash + 1);
        factors.push_back(std::stoi(num));
        token.clear();
    };
    for (char c : group) {
        if (c == 'x' || c == 'X' || c == ',' || c == '*') {
            flush();
        } else if (!std::isspace((unsigned char)c)) {
            token += c;
        }
    }
    flush();
    if (factors.empty()) {
        std::cerr << "empty group description\n";
        return 2;
    }
    int count = torsor_count(factors);
    json out{{"factors", factors}, {"torsor_classes", count}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

int cmd_spectral(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return 2;
    }
    json j = json::parse(in);
    Tolerances tol;
    std::vector<SpectralRow> rows;
    for (auto& rj : j.at("rows")) {
        SpectralRow r;
        r.e0 = rj.at("e0").get<int>();
        r.e1 = rj.at("e1").get<int>();
        std::vector<std::string> rl, cl;
        for (int i = 0; i < r.e1; ++i) rl.push_back("r" + std::to_string(i));
        for (int i = 0; i < r.e0; ++i) cl.push_back("c" + std::to_string(i));
        r.d = LabeledMatrix(rl, cl);
        if (rj.contains("d")) r.d.m = matrix_from_json(rj.at("d"));
        rows.push_back(std::move(r));
    }
    SpectralReport rep = two_column_assemble(rows, tol);
    json out{{"K", rep.K}, {"C", rep.C}, {"H", rep.H}, {"euler", rep.euler}};
    std::cout << out.dump(2) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"dynamical invariants of rational self-maps of the sphere"};
    app.require_subcommand(1);

    std::string expr, suite, path, group;
    AnalyzeConfig cfg;
    bool as_json = false, as_text = false;

    auto* a = app.add_subcommand("analyze", "full invariant report for a map expression");
    a->add_option("expr", expr, "map expression, e.g. \"z^2-1\" or \"(z^2+1)/(2*z)\"")
        ->required();
    a->add_option("--kmax", cfg.k_max, "cycle search period bound");
    a->add_option("--N", cfg.horizon_N, "truncation horizon (default: auto)");
    a->add_option("--seed", cfg.tol.rng_seed, "rng seed");
    a->add_option("--eps-point", cfg.tol.eps_point, "point identification radius");
    a->add_option("--eps-rank", cfg.tol.eps_rank, "relative singular value cutoff");
    a->add_option("--eps-residual", cfg.tol.eps_residual, "fit acceptance residual");
    a->add_option("--max-root-iters", cfg.tol.max_root_iterations, "root iteration cap");
    a->add_flag("--json", as_json, "JSON output");
    a->add_flag("--text", as_text, "text output (default)");

    auto* v = app.add_subcommand("verify", "run a named verification suite");
    v->add_option("suite", suite, "one of: core, lattes, all")->required();

    auto* p = app.add_subcommand("pairs", "hom/ext of dynamical pairs from a JSON file");
    p->add_option("file", path, "JSON with phi, psi and optional cocycle h")->required();

    auto* t = app.add_subcommand("torsors", "torsor class count of a finite abelian group");
    t->add_option("group", group, "e.g. \"Z/4\" or \"Z/2 x Z/3\"")->required();

    auto* s = app.add_subcommand("spectral", "assemble a two-column spectral report");
    s->add_option("file", path, "JSON: {\"rows\":[{\"e0\",\"e1\",\"d\"}...]}")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (a->parsed()) return cmd_analyze(expr, cfg, as_json && !as_text);
        if (v->parsed()) {
            if (!suite_exists(suite)) {
                std::cerr << "unknown suite '" << suite << "'; available:";
                for (auto& n : suite_names()) std::cerr << " " << n;
                std::cerr << "\n";
                return 2;
            }
            return cmd_verify(suite);
        }
        if (p->parsed()) return cmd_pairs(path);
        if (t->parsed()) return cmd_torsors(group);
        if (s->parsed()) return cmd_spectral(path);
    } catch (const SyntaxError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const NonRationalExpression& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const DegreeZero& e) {
        std::cerr << "degree error: " << e.what() << "\n";
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
