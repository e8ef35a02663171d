#include "dynsheaf/errors.hpp"
#include "dynsheaf/linalg.hpp"

#include <doctest.h>

#include <cmath>

using namespace dynsheaf;

TEST_CASE("rank and kernel on stock matrices") {
    Tolerances tol;
    SUBCASE("identity 3x3") {
        LabeledMatrix M({"r0", "r1", "r2"}, {"c0", "c1", "c2"});
        M.m = Eigen::MatrixXcd::Identity(3, 3);
        RankKernel rk = rank_and_kernel(M, tol);
        CHECK(rk.rank == 3);
        CHECK(rk.kernel.cols() == 0);
    }
    SUBCASE("zero 2x5") {
        LabeledMatrix M({"r0", "r1"}, {"c0", "c1", "c2", "c3", "c4"});
        RankKernel rk = rank_and_kernel(M, tol);
        CHECK(rk.rank == 0);
        CHECK(rk.kernel.cols() == 5);
    }
    SUBCASE("rank-2 from two outer products") {
        Eigen::VectorXcd u1(4), v1(4), u2(4), v2(4);
        u1 << Cx(1), Cx(2), Cx(0, 1), Cx(-1);
        v1 << Cx(0.5), Cx(1), Cx(1), Cx(2);
        u2 << Cx(1, 1), Cx(0), Cx(3), Cx(1);
        v2 << Cx(2), Cx(-1), Cx(0, 1), Cx(1);
        LabeledMatrix M({"r0", "r1", "r2", "r3"}, {"c0", "c1", "c2", "c3"});
        M.m = u1 * v1.transpose() + u2 * v2.transpose();
        RankKernel rk = rank_and_kernel(M, tol);
        CHECK(rk.rank == 2);
        CHECK(rk.kernel.cols() == 2);
    }
}

TEST_CASE("rank invariant under permutation and unitary scaling") {
    Tolerances tol;
    Rng rng(123);
    Eigen::MatrixXcd A(4, 3);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 3; ++j) A(i, j) = Cx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    A.col(2) = A.col(0) + A.col(1); // rank 2
    LabeledMatrix M({"r0", "r1", "r2", "r3"}, {"c0", "c1", "c2"});
    M.m = A;
    int base = rank_and_kernel(M, tol).rank;
    CHECK(base == 2);
    // permute rows and multiply by a unit phase
    Eigen::MatrixXcd B = A;
    B.row(0).swap(B.row(3));
    B *= Cx(0.6, 0.8); // |phase| = 1
    LabeledMatrix M2({"r0", "r1", "r2", "r3"}, {"c0", "c1", "c2"});
    M2.m = B;
    CHECK(rank_and_kernel(M2, tol).rank == base);
}

TEST_CASE("ambiguous rank is reported, not guessed") {
    Tolerances tol;
    LabeledMatrix M({"r0", "r1"}, {"c0", "c1"});
    M.m.setZero();
    M.m(0, 0) = Cx(1);
    M.m(1, 1) = Cx(5e-8); // within a factor 10 of the relative cutoff 1e-8
    CHECK_THROWS_AS(rank_and_kernel(M, tol), AmbiguousRank);
}

TEST_CASE("fit_in_basis") {
    Tolerances tol;
    SUBCASE("constant in {1, z}") {
        std::vector<Cx> in{Cx(0), Cx(1), Cx(2), Cx(0, 1), Cx(3)};
        std::vector<Cx> val(in.size(), Cx(5));
        FitResult r = fit_in_basis(in, val, 2,
                                   [](int j, Cx z) { return j == 0 ? Cx(1) : z; }, tol);
        CHECK(std::abs(r.coeffs(0) - Cx(5)) < 1e-12);
        CHECK(std::abs(r.coeffs(1)) < 1e-12);
        CHECK(r.residual < 1e-12);
    }
    SUBCASE("1/z in {1/z}") {
        std::vector<Cx> in, val;
        for (int k = 0; k < 8; ++k) {
            Cx z(std::cos(0.7 * k + 0.3) * 2, std::sin(0.7 * k + 0.3) * 2);
            in.push_back(z);
            val.push_back(Cx(1) / z);
        }
        FitResult r = fit_in_basis(in, val, 1, [](int, Cx z) { return Cx(1) / z; }, tol);
        CHECK(std::abs(r.coeffs(0) - Cx(1)) < 1e-12);
    }
    SUBCASE("inconsistent overdetermined data throws") {
        std::vector<Cx> in{Cx(0), Cx(1), Cx(2)};
        std::vector<Cx> val{Cx(0), Cx(1), Cx(5)}; // not constant
        CHECK_THROWS_AS(fit_in_basis(in, val, 1, [](int, Cx) { return Cx(1); }, tol),
                        OverdeterminedInconsistent);
    }
}
