#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dgforge/matrix.hpp"

using namespace dgforge;

static Matrix from_rows(const Field& f, std::vector<std::vector<long>> rows) {
    std::size_t r = rows.size(), c = r ? rows[0].size() : 0;
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < c; ++j) m.at(i, j) = Scalar(f, rows[i][j]);
    return m;
}

TEST_CASE("scalar arithmetic is canonical") {
    Field q = rationals();
    Scalar a = Scalar::parse(q, "2/4");
    CHECK(a.str() == "1/2");
    CHECK((a + a).str() == "1");
    CHECK((a * Scalar(q, 3)).str() == "3/2");
    CHECK(a.inverse().str() == "2");
    CHECK_THROWS_AS(Scalar::zero(q).inverse(), ValidationError);
    CHECK(Scalar::parse(q, "-6/4").str() == "-3/2");
}

TEST_CASE("prime field scalars") {
    Field f5 = prime_field(5);
    CHECK_THROWS_AS(prime_field(6), ValidationError);
    Scalar a(f5, 3), b(f5, 4);
    CHECK((a * b).str() == "2");
    CHECK((a + b).str() == "2");
    CHECK(a.inverse().str() == "2");
    CHECK(Scalar::parse(f5, "1/2").str() == "3");
    CHECK_THROWS_AS(a + Scalar(rationals(), 1), ValidationError);
}

TEST_CASE("row reduce: identity, zero, rank-1") {
    Field q = rationals();
    auto id2 = Matrix::identity(q, 2);
    auto rr = row_reduce(id2);
    CHECK(rr.reduced == id2);
    CHECK(rr.rank == 2);
    CHECK(rr.pivots == std::vector<std::size_t>{0, 1});

    auto z = Matrix::zero(q, 3, 4);
    auto rz = row_reduce(z);
    CHECK(rz.reduced == z);
    CHECK(rz.rank == 0);
    CHECK(rz.pivots.empty());

    // [[1,2],[2,4]] -> [[1,2],[0,0]], rank 1 (hand Gaussian elimination)
    auto m = from_rows(q, {{1, 2}, {2, 4}});
    auto rm = row_reduce(m);
    CHECK(rm.rank == 1);
    CHECK(rm.reduced == from_rows(q, {{1, 2}, {0, 0}}));
}

TEST_CASE("kernel basis") {
    Field q = rationals();
    CHECK(kernel_basis(Matrix::identity(q, 3)).cols() == 0);
    auto kz = kernel_basis(Matrix::zero(q, 4, 4));
    CHECK(kz == Matrix::identity(q, 4));
    // [[1,1]] -> span{(1,-1)} up to scale
    auto k = kernel_basis(from_rows(q, {{1, 1}}));
    CHECK(k.cols() == 1);
    CHECK((k.at(0, 0) + k.at(1, 0)).is_zero());
    CHECK_FALSE(k.at(0, 0).is_zero());
}

TEST_CASE("solve linear") {
    Field q = rationals();
    auto rhs = from_rows(q, {{5}, {7}});
    auto sol = solve_linear(Matrix::identity(q, 2), rhs);
    REQUIRE(sol);
    CHECK(*sol == rhs);

    CHECK_FALSE(solve_linear(Matrix::zero(q, 2, 2), rhs));

    auto m = from_rows(q, {{2}});
    auto s = solve_linear(m, from_rows(q, {{3}}));
    REQUIRE(s);
    CHECK(s->at(0, 0).str() == "3/2");
}

TEST_CASE("rank-nullity and idempotence on random matrices") {
    Field q = rationals();
    std::mt19937 rng(20240817);
    std::uniform_int_distribution<int> dim(1, 7), val(-4, 4);
    for (int trial = 0; trial < 40; ++trial) {
        std::size_t r = dim(rng), c = dim(rng);
        Matrix m(q, r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m.at(i, j) = Scalar(q, val(rng));
        auto rr = row_reduce(m);
        Matrix k = kernel_basis(m);
        CHECK(rr.rank + k.cols() == c);
        CHECK((m * k).is_zero());
        CHECK(rank(k) == k.cols());
        auto again = row_reduce(rr.reduced);
        CHECK(again.reduced == rr.reduced);
    }
}

TEST_CASE("rank-nullity over a prime field") {
    Field f7 = prime_field(7);
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> dim(1, 6), val(0, 6);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t r = dim(rng), c = dim(rng);
        Matrix m(f7, r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) m.at(i, j) = Scalar(f7, val(rng));
        Matrix k = kernel_basis(m);
        CHECK(rank(m) + k.cols() == c);
        CHECK((m * k).is_zero());
    }
}
