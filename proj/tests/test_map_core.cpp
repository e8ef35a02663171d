#include "dynsheaf/divisor.hpp"
#include "dynsheaf/errors.hpp"
#include "dynsheaf/parser.hpp"
#include "dynsheaf/quad_diff.hpp"
#include "dynsheaf/rational_map.hpp"

#include <doctest.h>

#include <cmath>

using namespace dynsheaf;

namespace {
const Tolerances tol;
}

TEST_CASE("make_map normalization and reduction") {
    RationalMap f = make_map(Poly({Cx(0), Cx(0), Cx(1)}), Poly({Cx(1)}), tol);
    CHECK(f.D == 2);
    CHECK_FALSE(f.reduced_common_factor);

    // (z^2, z) reduces to (z, 1) with a warning flag
    RationalMap g = make_map(Poly({Cx(0), Cx(0), Cx(1)}), Poly({Cx(0), Cx(1)}), tol);
    CHECK(g.D == 1);
    CHECK(g.reduced_common_factor);

    RationalMap h = make_map(Poly({Cx(1), Cx(0), Cx(1)}), Poly({Cx(0), Cx(2)}), tol);
    CHECK(h.D == 2);

    CHECK_THROWS_AS(make_map(Poly({Cx(3)}), Poly({Cx(1)}), tol), DegreeZero);
}

TEST_CASE("evaluation and local derivatives in charts") {
    RationalMap f = parse_map("z^2", tol);
    auto [y1, d1] = eval_and_local_derivative(f, ProjPoint::affine(Cx(1)));
    CHECK(chordal(y1, ProjPoint::affine(Cx(1))) < 1e-12);
    CHECK(std::abs(d1 - Cx(2)) < 1e-12);

    auto [y2, d2] = eval_and_local_derivative(f, ProjPoint::infinity());
    CHECK(y2.is_infinity());
    CHECK(std::abs(d2) < 1e-12); // w |-> w^2 has derivative 0 at 0

    RationalMap inv = parse_map("1/z", tol);
    auto [y3, d3] = eval_and_local_derivative(inv, ProjPoint::affine(Cx(0)));
    CHECK(y3.is_infinity());
    CHECK(std::abs(std::abs(d3) - 1.0) < 1e-12); // w = 1/f(z) = z near 0
    // chart factors cancel around the 2-cycle {0, inf}: f o f = id
    auto [y4, d4] = eval_and_local_derivative(inv, ProjPoint::infinity());
    CHECK(std::abs(d3 * d4 - Cx(1)) < 1e-12);
}

TEST_CASE("iterate") {
    RationalMap f = parse_map("z^2", tol);
    RationalMap f2 = iterate(f, 2, tol);
    CHECK(f2.D == 4);
    CHECK(std::abs(f2.apply_affine(Cx(3)) - Cx(81)) < 1e-9);

    RationalMap g = parse_map("z^2-1", tol);
    RationalMap g2 = iterate(g, 2, tol);
    CHECK(g2.D == 4);
    CHECK(std::abs(g2.apply_affine(Cx(2)) - ((Cx(4) - 1.0) * (Cx(4) - 1.0) - 1.0)) < 1e-9);

    RationalMap h = parse_map("z^2+0.3", tol);
    CHECK(iterate(h, 3, tol).D == 8);
    CHECK_THROWS_AS(iterate(f, 13, tol), DegreeCap);
}

TEST_CASE("critical data") {
    SUBCASE("z^2") {
        CriticalData cd = critical_data(parse_map("z^2", tol), tol);
        REQUIRE(cd.critical_points.size() == 2);
        Divisor gamma = ramification_divisor(parse_map("z^2", tol), tol);
        CHECK(gamma.degree() == 2);
        CHECK(gamma.multiplicity_at(ProjPoint::affine(Cx(0))) == 1);
        CHECK(gamma.multiplicity_at(ProjPoint::infinity()) == 1);
        REQUIRE(cd.critical_values.size() == 2);
    }
    SUBCASE("z^2-1 critical values") {
        CriticalData cd = critical_data(parse_map("z^2-1", tol), tol);
        bool has_minus1 = false, has_inf = false;
        for (auto& v : cd.critical_values) {
            if (v.is_infinity()) has_inf = true;
            else if (std::abs(v.value() + Cx(1)) < 1e-9) has_minus1 = true;
        }
        CHECK(has_minus1);
        CHECK(has_inf);
    }
    SUBCASE("z^3+1 ramification 2[0]+2[inf]") {
        Divisor gamma = ramification_divisor(parse_map("z^3+1", tol), tol);
        CHECK(gamma.degree() == 4);
        CHECK(gamma.multiplicity_at(ProjPoint::affine(Cx(0))) == 2);
        CHECK(gamma.multiplicity_at(ProjPoint::infinity()) == 2);
    }
}

TEST_CASE("postcritical increments and delta") {
    SUBCASE("z^2: both critical points fixed") {
        PostcriticalReport rep = postcritical(parse_map("z^2", tol), 40, tol);
        CHECK(rep.stabilized);
        CHECK(rep.delta_f == 0);
        CHECK(rep.s_sets.back().size() == 2);
    }
    SUBCASE("z^2+1: one escaping tail") {
        PostcriticalReport rep = postcritical(parse_map("z^2+1", tol), 40, tol);
        CHECK(rep.stabilized);
        CHECK(rep.delta_f == 1);
    }
    SUBCASE("z^2-1: superattracting 2-cycle") {
        PostcriticalReport rep = postcritical(parse_map("z^2-1", tol), 40, tol);
        CHECK(rep.stabilized);
        CHECK(rep.delta_f == 0);
        CHECK(rep.s_sets.back().size() == 3); // {-1, 0, inf}
    }
    SUBCASE("increments never increase") {
        for (const char* e : {"z^2+1", "z^2+0.1", "z+z^2"}) {
            PostcriticalReport rep = postcritical(parse_map(e, tol), 40, tol);
            for (size_t i = 1; i < rep.increments.size(); ++i)
                CHECK(rep.increments[i] <= rep.increments[i - 1]);
        }
    }
    SUBCASE("too short a run reports not-stabilized honestly") {
        PostcriticalReport rep = postcritical(parse_map("z^2+1", tol), 2, tol);
        CHECK_FALSE(rep.stabilized);
        CHECK(rep.delta_f >= 1); // best-effort value still reported
    }
}

TEST_CASE("mobius conjugation preserves the invariants") {
    RationalMap f = parse_map("z^2", tol);
    // 1/z commutes with z^2 up to conjugation: M^-1 f M = z^2
    RationalMap g = mobius_conjugate(f, {Cx(0), Cx(1), Cx(1), Cx(0)}, tol);
    CHECK(g.D == 2);
    CHECK(std::abs(g.apply_affine(Cx(2)) - Cx(4)) < 1e-9);

    CHECK_THROWS_AS(mobius_conjugate(f, {Cx(1), Cx(2), Cx(2), Cx(4)}, tol), SingularMobius);

    Rng rng(5);
    RationalMap h = parse_map("z^2-1", tol);
    PostcriticalReport base = postcritical(h, 40, tol);
    Divisor gbase = ramification_divisor(h, tol);
    for (int trial = 0; trial < 3; ++trial) {
        std::array<Cx, 4> M;
        double det = 0;
        do {
            for (auto& v : M) v = Cx(rng.uniform(-1, 1), rng.uniform(-1, 1));
            det = std::abs(M[0] * M[3] - M[1] * M[2]);
        } while (det < 0.3);
        RationalMap conj = mobius_conjugate(h, M, tol);
        CHECK(conj.D == h.D);
        CHECK(ramification_divisor(conj, tol).degree() == gbase.degree());
        CHECK(postcritical(conj, 40, tol).delta_f == base.delta_f);
    }
}

TEST_CASE("period-k point count equals D^k + 1") {
    RationalMap f = parse_map("z^2-0.7", tol);
    for (int k = 1; k <= 3; ++k) {
        RationalMap fk = iterate(f, k, tol);
        Poly G = fk.P - Poly::identity() * fk.Q;
        int finite = G.degree();
        int expected = static_cast<int>(std::pow(2.0, k)) + 1;
        int at_inf = expected - finite; // infinity is a fixed point here
        CHECK(at_inf >= 0);
        CHECK(finite + at_inf == expected);
    }
}

TEST_CASE("riemann-hurwitz over random maps") {
    Rng rng(42);
    int done = 0;
    for (int trial = 0; trial < 40 && done < 6; ++trial) {
        int D = 2 + static_cast<int>(rng.next_u64() % 2);
        std::vector<Cx> pc(D + 1), qc(D);
        for (auto& v : pc) v = Cx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        for (auto& v : qc) v = Cx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        pc.back() += Cx(1.5);
        try {
            RationalMap f = make_map(Poly(pc), Poly(qc), tol);
            if (f.D != D) continue;
            CHECK(ramification_divisor(f, tol).degree() == 2 * D - 2);
            ++done;
        } catch (const NonConvergence&) {
        }
    }
    CHECK(done == 6);
}
