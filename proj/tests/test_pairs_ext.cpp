#include "dynsheaf/errors.hpp"
#include "dynsheaf/pairs_ext.hpp"

#include <doctest.h>

using namespace dynsheaf;

namespace {
const Tolerances tol;

DynPair scalar(Cx v) {
    Eigen::MatrixXcd m(1, 1);
    m(0, 0) = v;
    return make_pair(m);
}
} // namespace

TEST_CASE("pair hom/ext on scalars") {
    PairHomExt a = pair_hom_ext(scalar(Cx(2)), scalar(Cx(3)), tol);
    CHECK(a.hom_dim == 0);
    CHECK(a.ext1_dim == 0);
    PairHomExt b = pair_hom_ext(scalar(Cx(0.5, 0.5)), scalar(Cx(0.5, 0.5)), tol);
    CHECK(b.hom_dim == 1);
    CHECK(b.ext1_dim == 1);
}

TEST_CASE("nilpotent Jordan blocks against enumeration") {
    Eigen::MatrixXcd J(2, 2);
    J.setZero();
    J(0, 1) = 1; // nilpotent 2-block
    PairHomExt got = pair_hom_ext(make_pair(J), make_pair(J), tol);
    // commuting maps with a single nilpotent block: {aI + bJ}: dim 2
    CHECK(got.hom_dim == 2);
    CHECK(got.ext1_dim == 2);
}

TEST_CASE("similarity invariance of the dims") {
    Rng rng(3);
    Eigen::MatrixXcd phi(3, 3), psi(2, 2), P(3, 3), Q(2, 2);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) phi(i, j) = Cx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) psi(i, j) = Cx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    do {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) P(i, j) = Cx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    } while (std::abs(P.determinant()) < 0.1);
    do {
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) Q(i, j) = Cx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    } while (std::abs(Q.determinant()) < 0.1);
    PairHomExt base = pair_hom_ext(make_pair(phi), make_pair(psi), tol);
    PairHomExt conj = pair_hom_ext(make_pair(P.inverse() * phi * P),
                                   make_pair(Q.inverse() * psi * Q), tol);
    CHECK(base.hom_dim == conj.hom_dim);
    CHECK(base.ext1_dim == conj.ext1_dim);
}

TEST_CASE("cocycle calculus") {
    SUBCASE("zero cocycle splits") {
        Eigen::MatrixXcd h(1, 1);
        h.setZero();
        CocycleClass c{scalar(Cx(0.3)), scalar(Cx(0.9)), h};
        CHECK(is_split(c, tol));
    }
    SUBCASE("equal scalars with h=1 do not split") {
        Eigen::MatrixXcd h(1, 1);
        h(0, 0) = 1;
        CocycleClass c{scalar(Cx(0.7)), scalar(Cx(0.7)), h};
        CHECK_FALSE(is_split(c, tol));
        Eigen::MatrixXcd E = extension_matrix(c);
        CHECK(E.rows() == 2);
        CHECK(std::abs(E(0, 1) - Cx(1)) < 1e-14);
        // Baer sum with the inverse splits
        CocycleClass neg = c;
        neg.h = -c.h;
        CHECK(is_split(baer_sum(c, neg), tol));
    }
    SUBCASE("baer sum is commutative and associative on cocycles") {
        Rng rng(11);
        Eigen::MatrixXcd phi(2, 2), psi(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                phi(i, j) = Cx(rng.uniform(-1, 1));
                psi(i, j) = Cx(rng.uniform(-1, 1));
            }
        auto mk = [&](double s) {
            Eigen::MatrixXcd h(2, 2);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) h(i, j) = Cx(s * rng.uniform(-1, 1));
            return CocycleClass{make_pair(phi), make_pair(psi), h};
        };
        CocycleClass a = mk(1), b = mk(2), c = mk(0.5);
        Eigen::MatrixXcd ab_c = baer_sum(baer_sum(a, b), c).h;
        Eigen::MatrixXcd a_bc = baer_sum(a, baer_sum(b, c)).h;
        CHECK((ab_c - a_bc).cwiseAbs().maxCoeff() < 1e-14);
        CHECK((baer_sum(a, b).h - baer_sum(b, a).h).cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("two-column assembly") {
    SUBCASE("contractible De Rham row") {
        SpectralRow row;
        row.e0 = 1;
        row.e1 = 1;
        row.d = LabeledMatrix({"r"}, {"c"}); // zero map
        SpectralReport rep = two_column_assemble({row}, tol);
        REQUIRE(rep.H.size() == 2);
        CHECK(rep.H[0] == 1);
        CHECK(rep.H[1] == 1);
    }
    SUBCASE("all-zero rows vanish") {
        SpectralRow row;
        row.e0 = 0;
        row.e1 = 0;
        row.d = LabeledMatrix({}, {});
        SpectralReport rep = two_column_assemble({row, row}, tol);
        for (int h : rep.H) CHECK(h == 0);
    }
    SUBCASE("engine consistency with pair_hom_ext") {
        Rng rng(21);
        Eigen::MatrixXcd phi(2, 2), psi(3, 3);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) phi(i, j) = Cx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) psi(i, j) = Cx(rng.uniform(-1, 1), rng.uniform(-1, 1));
        DynPair a = make_pair(phi), b = make_pair(psi);
        PairHomExt he = pair_hom_ext(a, b, tol);
        SpectralRow row;
        row.e0 = 6;
        row.e1 = 6;
        row.d = difference_operator(a, b);
        SpectralReport rep = two_column_assemble({row}, tol);
        CHECK(rep.H[0] == he.hom_dim);
        CHECK(rep.H[1] == he.ext1_dim);
    }
    SUBCASE("global deformation rows through the engine") {
        // H0(T) -> H0(f*T) for z^2 as the only nonzero row: H = (0, 2D-2, 0).
        Eigen::MatrixXcd d(5, 3);
        d.setZero();
        d(0, 0) = -1;
        d(1, 0) = 2;
        d(2, 1) = 1;
        d(3, 2) = 2;
        d(4, 2) = -1;
        SpectralRow r0;
        r0.e0 = 3;
        r0.e1 = 5;
        r0.d = LabeledMatrix({"w0", "w1", "w2", "w3", "w4"}, {"v0", "v1", "v2"});
        r0.d.m = d;
        SpectralRow r1;
        r1.e0 = 0;
        r1.e1 = 0;
        r1.d = LabeledMatrix({}, {});
        SpectralReport rep = two_column_assemble({r0, r1}, tol);
        REQUIRE(rep.H.size() == 3);
        CHECK(rep.H[0] == 0);
        CHECK(rep.H[1] == 2);
        CHECK(rep.H[2] == 0);
    }
    SUBCASE("shape mismatch throws") {
        SpectralRow row;
        row.e0 = 2;
        row.e1 = 1;
        row.d = LabeledMatrix({"r"}, {"c"});
        CHECK_THROWS_AS(two_column_assemble({row}, tol), DimensionMismatch);
    }
}

TEST_CASE("torsor counts") {
    CHECK(torsor_count({1}) == 1);
    for (int n = 2; n <= 6; ++n) CHECK(torsor_count({n}) == n);
    CHECK(torsor_count({2, 3}) == 6);
    CHECK(torsor_count({2, 2}) == 4);
}

TEST_CASE("line bundle degree argument") {
    CHECK_FALSE(h2_line_bundle_check(1));
    CHECK(h2_line_bundle_check(2));
    CHECK(h2_line_bundle_check(5));
}
