#pragma once

// Shared fixture builders for the test suites.

#include "dgforge/bigraded.hpp"

namespace dgforge::testing {

inline Scalar one() { return Scalar::one(rationals()); }

// H^*_{C*}(pt): polynomial generator c in degree 2, truncated at D.
inline AlgPtr eqpt(int D = 6, const std::string& name = "eqpt") {
    DGAlgebraSpec s;
    s.field = rationals();
    s.name = name;
    s.hi = D;
    s.basis.push_back({0, "1"});
    auto pow_name = [](int k) { return k == 1 ? std::string("c") : "c" + std::to_string(k); };
    for (int d = 2; d <= D; d += 2) s.basis.push_back({d, pow_name(d / 2)});
    for (int i = 2; i <= D; i += 2)
        for (int j = 2; i + j <= D; j += 2)
            s.products.push_back({pow_name(i / 2), pow_name(j / 2), {{pow_name((i + j) / 2), one()}}});
    s.unit_name = "1";
    s.idempotents = {{"pt", {{"1", one()}}}};
    return make_dg_algebra(s);
}

// Q[c]/(c^{k+1}) on the window [0, D] (degrees above 2k empty).
inline AlgPtr eqpt_stage(int k, int D, const std::string& name) {
    DGAlgebraSpec s;
    s.field = rationals();
    s.name = name;
    s.hi = D;
    s.basis.push_back({0, "1"});
    auto pow_name = [](int t) { return t == 1 ? std::string("c") : "c" + std::to_string(t); };
    for (int d = 2; d <= std::min(D, 2 * k); d += 2) s.basis.push_back({d, pow_name(d / 2)});
    for (int i = 2; i <= 2 * k; i += 2)
        for (int j = 2; j <= 2 * k; j += 2) {
            if (i + j > D) continue;
            std::vector<std::pair<std::string, Scalar>> res;
            if (i + j <= 2 * k) res.push_back({pow_name((i + j) / 2), one()});
            s.products.push_back({pow_name(i / 2), pow_name(j / 2), res});
        }
    s.unit_name = "1";
    s.idempotents = {{"pt", {{"1", one()}}}};
    return make_dg_algebra(s);
}

// Truncation morphism between two polynomial-generator truncations.
inline DGAMorphism truncation(const AlgPtr& a, const AlgPtr& b) {
    DGAMorphism f;
    f.source = a;
    f.target = b;
    for (int d = a->lo; d <= std::min(a->hi, b->hi); ++d) {
        Matrix m(a->field, b->dim(d), a->dim(d));
        for (std::size_t i = 0; i < std::min(a->dim(d), b->dim(d)); ++i)
            m.at(i, i) = Scalar::one(a->field);
        f.comp[d] = m;
    }
    f.validate();
    return f;
}

// GAMMA5: 1 at (0,0); a at (1,1), da = 0; b at (1,2), db = c; c at (2,2);
// products of non-unit elements vanish.
inline BiAlgPtr gamma5() {
    BigradedSpec s;
    s.field = rationals();
    s.name = "GAMMA5";
    s.basis = {{0, 0, "1"}, {1, 1, "a"}, {1, 2, "b"}, {2, 2, "c"}};
    s.unit_name = "1";
    s.differential = {{"b", {{"c", one()}}}};
    return make_bigraded_algebra(s);
}

// GAMMA5 with an extra cocycle breaking the purity of H at (2,1).
inline BiAlgPtr gamma5_impure() {
    BigradedSpec s;
    s.field = rationals();
    s.name = "GAMMA5impure";
    s.basis = {{0, 0, "1"}, {1, 1, "a"}, {1, 2, "b"}, {2, 2, "c"}, {2, 1, "z"}};
    s.unit_name = "1";
    s.differential = {{"b", {{"c", one()}}}};
    return make_bigraded_algebra(s);
}

// The 2x2 grid of the formality proposition's proof figure, with a unit
// adjoined: u at (0,0) with du = z at (1,0); v at (0,1) with dv = w at (1,1).
inline BiAlgPtr grid2x2() {
    BigradedSpec s;
    s.field = rationals();
    s.name = "grid2x2";
    s.basis = {{0, 0, "1"}, {0, 0, "u"}, {1, 0, "z"}, {0, 1, "v"}, {1, 1, "w"}};
    s.unit_name = "1";
    s.differential = {{"u", {{"z", one()}}}, {"v", {{"w", one()}}}};
    return make_bigraded_algebra(s);
}

// WSUB: idempotents e1, e2 with weights 0, 1 and a one-dimensional block
// e2 R e1 spanned by t at bidegree (0,1); differential zero.
inline BiAlgPtr wsub() {
    BigradedSpec s;
    s.field = rationals();
    s.name = "WSUB";
    s.basis = {{0, 0, "e1"}, {0, 0, "e2"}, {0, 1, "t"}};
    s.unit_combination = {{"e1", one()}, {"e2", one()}};
    s.products = {{"e1", "e1", {{"e1", one()}}}, {"e2", "e2", {{"e2", one()}}},
                  {"e1", "e2", {}},              {"e2", "e1", {}},
                  {"e2", "t", {{"t", one()}}},   {"t", "e1", {{"t", one()}}},
                  {"e1", "t", {}},               {"t", "e2", {}},
                  {"t", "t", {}}};
    s.idempotents = {{"e1", {{"e1", one()}}}, {"e2", {{"e2", one()}}}};
    s.weights = {0, 1};
    return make_bigraded_algebra(s);
}

// The extension algebra of the P1Q simples, taken as a positively graded
// algebra with zero differential: degree dims (2, 2, 1).
inline AlgPtr p1e() {
    DGAlgebraSpec s;
    s.field = rationals();
    s.name = "P1E";
    s.hi = 2;
    s.basis = {{0, "es"}, {0, "eb"}, {1, "al"}, {1, "be"}, {2, "ga"}};
    s.unit_combination = {{"es", one()}, {"eb", one()}};
    // al spans e_b E^1 e_s, be spans e_s E^1 e_b, ga spans e_s E^2 e_s;
    // the only nonzero degree-1 composition is be * al = ga.
    s.products = {{"es", "es", {{"es", one()}}},
                  {"eb", "eb", {{"eb", one()}}},
                  {"al", "es", {{"al", one()}}},
                  {"eb", "al", {{"al", one()}}},
                  {"es", "be", {{"be", one()}}},
                  {"be", "eb", {{"be", one()}}},
                  {"es", "ga", {{"ga", one()}}},
                  {"ga", "es", {{"ga", one()}}},
                  {"be", "al", {{"ga", one()}}}};
    s.idempotents = {{"s", {{"es", one()}}}, {"b", {{"eb", one()}}}};
    s.bounded = true;
    return make_dg_algebra(s);
}

}  // namespace dgforge::testing
