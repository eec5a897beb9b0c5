#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "test_fixtures.hpp"

using namespace dgforge;
using namespace dgforge::testing;

TEST_CASE("checkPure") {
    SUBCASE("the zero table is pure of every weight") {
        std::map<BiDeg, std::size_t> empty;
        CHECK(check_pure(empty, 0).pure);
        CHECK(check_pure(empty, 3).pure);
    }
    SUBCASE("a nonzero unital algebra is never pure of weight 3") {
        auto r = gamma5();
        std::map<BiDeg, std::size_t> dims;
        for (const auto& d : r->support()) dims[d] = r->dim(d);
        auto p = check_pure(dims, 3);
        CHECK_FALSE(p.pure);
        CHECK(*p.counterexample == BiDeg{0, 0});  // 1 lives in R^{00}
    }
    SUBCASE("H(GAMMA5) is pure of weight 0") {
        auto table = cohomology_table(*gamma5());
        CHECK(check_pure(table, 0).pure);
        CHECK(table.at({0, 0}) == 1);
        CHECK(table.at({1, 1}) == 1);
        CHECK(table.size() == 2);
    }
}

TEST_CASE("gamma") {
    SUBCASE("module concentrated strictly above the diagonal is kept whole") {
        BigradedSpec s;
        s.field = rationals();
        s.name = "upper";
        s.basis = {{0, 0, "1"}, {0, 1, "x"}, {1, 2, "y"}};
        s.unit_name = "1";
        auto r = make_bigraded_algebra(s);
        auto m = regular_bimodule_as_module(r);
        auto g = gamma(m);
        CHECK(g.module->dim({0, 1}) == 1);
        CHECK(g.module->dim({1, 2}) == 1);
    }
    SUBCASE("the 2x2 proof figure keeps R01, Z00, Z11 and kills R10") {
        auto g = gamma(grid2x2());
        CHECK(g.algebra->dim({0, 0}) == 1);  // Z^{00} = <1>
        CHECK(g.algebra->dim({0, 1}) == 1);  // R^{01}
        CHECK(g.algebra->dim({1, 1}) == 1);  // Z^{11} = <w>
        CHECK(g.algebra->dim({1, 0}) == 0);  // killed
    }
    SUBCASE("GAMMA5: Gamma spans {1, a, b, c}") {
        auto g = gamma(gamma5());
        CHECK(g.algebra->dim({0, 0}) == 1);
        CHECK(g.algebra->dim({1, 1}) == 1);
        CHECK(g.algebra->dim({1, 2}) == 1);
        CHECK(g.algebra->dim({2, 2}) == 1);
    }
    SUBCASE("gamma is idempotent") {
        for (auto r : {gamma5(), grid2x2(), wsub()}) {
            auto g = gamma(r);
            auto gg = gamma(g.algebra);
            for (const auto& d : g.algebra->support())
                CHECK(gg.algebra->dim(d) == g.algebra->dim(d));
        }
    }
}

TEST_CASE("formality witness") {
    SUBCASE("zero differential, pure: Gamma(R) = R and the projection is an iso") {
        BigradedSpec s;
        s.field = rationals();
        s.name = "purezero";
        s.basis = {{0, 0, "1"}, {1, 1, "x"}};
        s.unit_name = "1";
        s.products = {{"x", "x", {}}};
        auto r = make_bigraded_algebra(s);
        auto w = formality_witness(r);
        CHECK(w.pass);
        CHECK(w.gamma_algebra->dim({0, 0}) == 1);
        CHECK(w.gamma_algebra->dim({1, 1}) == 1);
    }
    SUBCASE("GAMMA5 passes; H has dims 1 at (0,0) and 1 at (1,1)") {
        auto w = formality_witness(gamma5());
        CHECK(w.pass);
        CHECK(w.h_algebra->dim({0, 0}) == 1);
        CHECK(w.h_algebra->dim({1, 1}) == 1);
        CHECK(w.h_algebra->support().size() == 2);
        for (const auto& row : w.inclusion.rows)
            CHECK((row.rank_induced == row.h_source && row.rank_induced == row.h_target));
    }
    SUBCASE("impure H is refused with a counterexample bidegree") {
        auto w = formality_witness(gamma5_impure());
        CHECK_FALSE(w.pass);
        REQUIRE(w.purity.counterexample.has_value());
        CHECK(*w.purity.counterexample == BiDeg{2, 1});
    }
    SUBCASE("the inclusion induces isos at i <= j even when purity fails") {
        auto g = gamma(gamma5_impure());
        auto rep = bigraded_quasi_iso(g.inclusion);
        CHECK_FALSE(rep.is_quasi_iso);  // fails below the diagonal
        for (const auto& row : rep.rows)
            if (row.deg.first <= row.deg.second) {
                CHECK(row.rank_induced == row.h_source);
                CHECK(row.rank_induced == row.h_target);
            }
    }
}

TEST_CASE("weighted sub witness") {
    SUBCASE("single idempotent with weight 0 reproduces the formality tables") {
        auto r = gamma5();
        // gamma5 carries no idempotent list; rebuild it with one.
        BigradedSpec s;
        s.field = rationals();
        s.name = "GAMMA5e";
        s.basis = {{0, 0, "1"}, {1, 1, "a"}, {1, 2, "b"}, {2, 2, "c"}};
        s.unit_name = "1";
        s.idempotents = {{"*", {{"1", one()}}}};
        s.weights = {0};
        s.differential = {{"b", {{"c", one()}}}};
        auto re = make_bigraded_algebra(s);
        auto w = weighted_sub_witness(re);
        REQUIRE(w.pass);
        auto f = formality_witness(r);
        REQUIRE(f.pass);
        REQUIRE(w.inclusion.rows.size() == f.inclusion.rows.size());
        for (std::size_t k = 0; k < w.inclusion.rows.size(); ++k) {
            CHECK(w.inclusion.rows[k].deg == f.inclusion.rows[k].deg);
            CHECK(w.inclusion.rows[k].h_source == f.inclusion.rows[k].h_source);
            CHECK(w.inclusion.rows[k].h_target == f.inclusion.rows[k].h_target);
            CHECK(w.inclusion.rows[k].rank_induced == f.inclusion.rows[k].rank_induced);
        }
        REQUIRE(w.projection.rows.size() == f.projection.rows.size());
        for (std::size_t k = 0; k < w.projection.rows.size(); ++k) {
            CHECK(w.projection.rows[k].deg == f.projection.rows[k].deg);
            CHECK(w.projection.rows[k].h_source == f.projection.rows[k].h_source);
            CHECK(w.projection.rows[k].h_target == f.projection.rows[k].h_target);
            CHECK(w.projection.rows[k].rank_induced == f.projection.rows[k].rank_induced);
        }
    }
    SUBCASE("WSUB passes with weights (0, 1)") {
        auto w = weighted_sub_witness(wsub());
        CHECK(w.pass);
        CHECK(w.sub_algebra->dim({0, 0}) == 2);  // both idempotents kept
        CHECK(w.sub_algebra->dim({0, 1}) == 1);  // t kept at its threshold
    }
    SUBCASE("breaking blockwise purity refuses with the block named") {
        // Same algebra, but claimed weights (0, 0): block (e2, e1) must then
        // be pure of weight 0, and t sits at (0,1).
        BigradedSpec s;
        s.field = rationals();
        s.name = "WSUBbad";
        s.basis = {{0, 0, "e1"}, {0, 0, "e2"}, {0, 1, "t"}};
        s.unit_combination = {{"e1", one()}, {"e2", one()}};
        s.products = {{"e1", "e1", {{"e1", one()}}}, {"e2", "e2", {{"e2", one()}}},
                      {"e1", "e2", {}},              {"e2", "e1", {}},
                      {"e2", "t", {{"t", one()}}},   {"t", "e1", {{"t", one()}}},
                      {"e1", "t", {}},               {"t", "e2", {}},
                      {"t", "t", {}}};
        s.idempotents = {{"e1", {{"e1", one()}}}, {"e2", {{"e2", one()}}}};
        s.weights = {0, 0};
        auto r = make_bigraded_algebra(s);
        auto w = weighted_sub_witness(r);
        CHECK_FALSE(w.pass);
        REQUIRE(w.impure_block.has_value());
        CHECK(w.impure_block->second == BiDeg{0, 1});
    }
}

TEST_CASE("gamma of bimodules") {
    SUBCASE("A over itself restricts to Gamma(A)") {
        auto r = gamma5();
        auto bm = bigraded_regular_bimodule(r);
        auto g = gamma(bm);
        auto ga = gamma(r);
        for (const auto& d : ga.algebra->support())
            CHECK(g.bimodule->dim(d) == ga.algebra->dim(d));
    }
    SUBCASE("bimodule concentrated below the diagonal dies") {
        auto r = grid2x2();
        auto bm = bigraded_regular_bimodule(r);
        auto g = gamma(bm);
        CHECK(g.bimodule->dim({1, 0}) == 0);
    }
}

TEST_CASE("multiplication quasi-isomorphisms") {
    auto b = wsub();
    auto m = regular_bimodule_as_module(b);

    SUBCASE("f = id gives w = 1 and all three maps pass") {
        BigradedModMorphism f;
        f.source = m;
        f.target = m;
        for (const auto& d : b->support())
            f.comp[d] = Matrix::identity(b->field, b->dim(d));
        auto res = multiplication_quasi_isos(b, m, f);
        CHECK(res.pass);
        CHECK(res.w.coords == b->unit);
    }
    SUBCASE("f = 2 id gives w = 2 and still passes") {
        BigradedModMorphism f;
        f.source = m;
        f.target = m;
        for (const auto& d : b->support())
            f.comp[d] = Matrix::identity(b->field, b->dim(d)).scaled(Scalar(b->field, 2));
        auto res = multiplication_quasi_isos(b, m, f);
        CHECK(res.pass);
        CHECK(res.w.coords == b->unit.scaled(Scalar(b->field, 2)));
    }
    SUBCASE("a non-quasi-isomorphism is rejected") {
        BigradedModMorphism f;
        f.source = m;
        f.target = m;  // zero map
        auto res = multiplication_quasi_isos(b, m, f);
        CHECK_FALSE(res.pass);
    }
}
