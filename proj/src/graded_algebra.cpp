#include "dgforge/graded_algebra.hpp"

#include <algorithm>
#include <sstream>

namespace dgforge {

bool DGAlgebra::has_zero_differential() const {
    for (const auto& [d, m] : diff)
        if (!m.is_zero()) return false;
    return true;
}

Elem DGAlgebra::basis_elem(int d, std::size_t i) const {
    Elem e = zero(d);
    e.coords.at(i, 0) = Scalar::one(field);
    return e;
}

std::optional<std::size_t> DGAlgebra::idempotent_index(const std::string& label) const {
    for (std::size_t i = 0; i < idems.size(); ++i)
        if (idems[i].label == label) return i;
    return std::nullopt;
}

Elem DGAlgebra::idempotent_elem(const std::string& label) const {
    auto i = idempotent_index(label);
    if (!i) throw ValidationError(name + ": unknown idempotent label '" + label + "'");
    return Elem{0, idems[*i].coords};
}

Elem DGAlgebra::mul(const Elem& x, const Elem& y) const {
    if (bounded) {
        // Everything outside the window is genuinely zero.
        if (!in_window(x.deg) || !in_window(y.deg) || !in_window(x.deg + y.deg))
            return zero(x.deg + y.deg);
    } else if (!mul_known(x.deg, y.deg)) {
        throw ValidationError(name + ": product in degree " + std::to_string(x.deg + y.deg) +
                              " is outside the certified window");
    }
    Elem r = zero(x.deg + y.deg);
    auto it = mult.find({x.deg, y.deg});
    if (it == mult.end()) return r;
    for (const auto& e : it->second) {
        Scalar c = x.coords.at(e.a, 0) * y.coords.at(e.b, 0) * e.coef;
        if (!c.is_zero()) r.coords.at(e.c, 0) += c;
    }
    return r;
}

Matrix DGAlgebra::diff_matrix(int d) const {
    auto it = diff.find(d);
    if (it != diff.end()) return it->second;
    return Matrix::zero(field, dim(d + 1), dim(d));
}

Elem DGAlgebra::d(const Elem& x) const {
    if (!in_window(x.deg + 1)) return zero(x.deg + 1);
    return Elem{x.deg + 1, diff_matrix(x.deg) * x.coords};
}

Matrix DGAlgebra::left_mult_matrix(const Elem& x, int j) const {
    Matrix m = Matrix::zero(field, dim(x.deg + j), dim(j));
    auto it = mult.find({x.deg, j});
    if (it == mult.end()) return m;
    for (const auto& e : it->second) {
        Scalar c = x.coords.at(e.a, 0) * e.coef;
        if (!c.is_zero()) m.at(e.c, e.b) += c;
    }
    return m;
}

Matrix DGAlgebra::right_mult_matrix(const Elem& x, int j) const {
    Matrix m = Matrix::zero(field, dim(x.deg + j), dim(j));
    auto it = mult.find({j, x.deg});
    if (it == mult.end()) return m;
    for (const auto& e : it->second) {
        Scalar c = x.coords.at(e.b, 0) * e.coef;
        if (!c.is_zero()) m.at(e.c, e.a) += c;
    }
    return m;
}

Matrix DGAlgebra::slice_basis(const std::string& x, int k, const std::string& y) const {
    Elem ex = idempotent_elem(x), ey = idempotent_elem(y);
    if (!in_window(k)) return Matrix::zero(field, 0, 0);
    Matrix proj = left_mult_matrix(ex, k) * right_mult_matrix(ey, k);
    return column_space_basis(proj);
}

std::vector<std::size_t> DGAlgebra::dims_table() const {
    std::vector<std::size_t> t;
    for (int d = lo; d <= hi; ++d) t.push_back(dim(d));
    return t;
}

void DGAlgebra::validate_core() const {
    if (lo > hi) throw ValidationError(name + ": empty degree window");
    if (static_cast<int>(basis_names.size()) != hi - lo + 1)
        throw ValidationError(name + ": basis table size disagrees with window");
    if (!in_window(0) || unit.rows() != dim(0) || unit.cols() != 1)
        throw ValidationError(name + ": unit coordinates malformed");
    for (const auto& [key, entries] : mult) {
        auto [i, j] = key;
        if (!mul_known(i, j))
            throw ValidationError(name + ": structure constants recorded outside window");
        for (const auto& e : entries)
            if (e.a >= dim(i) || e.b >= dim(j) || e.c >= dim(i + j))
                throw ValidationError(name + ": structure constant index out of range");
    }
    for (const auto& [d0, m] : diff) {
        if (!in_window(d0) || !in_window(d0 + 1))
            throw ValidationError(name + ": differential recorded outside window");
        if (m.rows() != dim(d0 + 1) || m.cols() != dim(d0))
            throw ValidationError(name + ": differential matrix shape at degree " +
                                  std::to_string(d0));
    }

    Elem u = unit_elem();
    for (int dg = lo; dg <= hi; ++dg) {
        if (!mul_known(0, dg)) continue;
        for (std::size_t i = 0; i < dim(dg); ++i) {
            Elem b = basis_elem(dg, i);
            if (!(mul(u, b).coords == b.coords))
                throw ValidationError(name + ": unit fails on the left of " + basis_name(dg, i));
            if (!(mul(b, u).coords == b.coords))
                throw ValidationError(name + ": unit fails on the right of " + basis_name(dg, i));
        }
    }

    // Associativity on basis triples whose partial products are all known.
    for (int i = lo; i <= hi; ++i)
        for (int j = lo; j <= hi; ++j)
            for (int k = lo; k <= hi; ++k) {
                if (!in_window(i + j + k)) continue;
                if (!mul_known(i, j) || !mul_known(j, k)) continue;
                for (std::size_t a = 0; a < dim(i); ++a)
                    for (std::size_t b = 0; b < dim(j); ++b)
                        for (std::size_t c = 0; c < dim(k); ++c) {
                            Elem lhs = mul(mul(basis_elem(i, a), basis_elem(j, b)), basis_elem(k, c));
                            Elem rhs = mul(basis_elem(i, a), mul(basis_elem(j, b), basis_elem(k, c)));
                            if (!(lhs.coords == rhs.coords))
                                throw ValidationError(name + ": associativity fails on (" +
                                                      basis_name(i, a) + ", " + basis_name(j, b) +
                                                      ", " + basis_name(k, c) + ")");
                        }
            }

    // d^2 = 0 wherever both applications stay in-window.
    for (int dg = lo; dg + 2 <= hi; ++dg)
        if (!(diff_matrix(dg + 1) * diff_matrix(dg)).is_zero())
            throw ValidationError(name + ": d^2 != 0 starting at degree " + std::to_string(dg));

    // Leibniz rule d(ab) = (da)b + (-1)^i a(db) on pairs with i+j+1 in-window.
    for (int i = lo; i <= hi; ++i)
        for (int j = lo; j <= hi; ++j) {
            if (!in_window(i + j) || !in_window(i + j + 1)) continue;
            bool da_ok = in_window(i + 1), db_ok = in_window(j + 1);
            for (std::size_t a = 0; a < dim(i); ++a)
                for (std::size_t b = 0; b < dim(j); ++b) {
                    Elem x = basis_elem(i, a), y = basis_elem(j, b);
                    Elem lhs = d(mul(x, y));
                    Elem rhs = zero(i + j + 1);
                    if (da_ok) rhs.coords = rhs.coords + mul(d(x), y).coords;
                    if (db_ok) {
                        Elem t = mul(x, d(y));
                        rhs.coords = (i % 2 == 0) ? rhs.coords + t.coords : rhs.coords - t.coords;
                    }
                    if (!(lhs.coords == rhs.coords))
                        throw ValidationError(name + ": Leibniz rule fails on (" +
                                              basis_name(i, a) + ", " + basis_name(j, b) + ")");
                }
        }

    if (!idems.empty()) {
        for (const auto& e : idems)
            if (e.coords.rows() != dim(0) || e.coords.cols() != 1)
                throw ValidationError(name + ": idempotent " + e.label + " coordinates malformed");
        for (const auto& ex : idems)
            for (const auto& ey : idems) {
                Elem p = mul(Elem{0, ex.coords}, Elem{0, ey.coords});
                const Matrix expect =
                    (&ex == &ey) ? ex.coords : Matrix::zero(field, dim(0), 1);
                if (!(p.coords == expect))
                    throw ValidationError(name + ": idempotent pair (" + ex.label + ", " +
                                          ey.label + ") violates orthogonality");
            }
        Matrix sum = Matrix::zero(field, dim(0), 1);
        for (const auto& e : idems) sum = sum + e.coords;
        if (!(sum == unit))
            throw ValidationError(name + ": idempotents do not sum to the unit");
        if (in_window(1))
            for (const auto& e : idems)
                if (!(diff_matrix(0) * e.coords).is_zero())
                    throw ValidationError(name + ": d(" + e.label + ") != 0");
    }
}

void DGAlgebra::validate_positive() const {
    if (lo != 0)
        throw ValidationError(name + ": not positively graded (window starts at " +
                              std::to_string(lo) + ")");
    if (idems.empty())
        throw ValidationError(name + ": no idempotent decomposition of degree 0");
    // A^0 must split as a product of base-field copies indexed by W: the
    // idempotents are a basis of A^0. Orthogonality is checked in the core.
    if (idems.size() != dim(0))
        throw ValidationError(name + ": degree-0 dimension " + std::to_string(dim(0)) +
                              " differs from idempotent count " + std::to_string(idems.size()));
    Matrix span(field, dim(0), idems.size());
    for (std::size_t i = 0; i < idems.size(); ++i) span.set_column(i, idems[i].coords);
    if (rank(span) != idems.size())
        throw ValidationError(name + ": idempotents do not span the degree-0 part");
    if (in_window(1) && !diff_matrix(0).is_zero())
        throw ValidationError(name + ": differential does not vanish on degree 0");
}

namespace {

std::vector<std::pair<std::string, Scalar>> unit_as_combination(const DGAlgebraSpec& spec) {
    if (!spec.unit_combination.empty()) return spec.unit_combination;
    if (spec.unit_name.empty())
        throw ValidationError(spec.name + ": no unit specified");
    return {{spec.unit_name, Scalar::one(spec.field)}};
}

}  // namespace

AlgPtr make_dg_algebra(const DGAlgebraSpec& spec) {
    auto alg = std::make_shared<DGAlgebra>();
    alg->field = spec.field;
    alg->name = spec.name;
    alg->lo = spec.lo;
    alg->hi = spec.hi;
    alg->bounded = spec.bounded;
    alg->basis_names.assign(static_cast<std::size_t>(spec.hi - spec.lo + 1), {});

    std::map<std::string, std::pair<int, std::size_t>> index;
    for (const auto& [deg, nm] : spec.basis) {
        if (deg < spec.lo || deg > spec.hi)
            throw ValidationError(spec.name + ": basis element " + nm + " outside window");
        if (index.count(nm))
            throw ValidationError(spec.name + ": duplicate basis name " + nm);
        auto& row = alg->basis_names[static_cast<std::size_t>(deg - spec.lo)];
        index[nm] = {deg, row.size()};
        row.push_back(nm);
    }
    auto lookup = [&](const std::string& nm) {
        auto it = index.find(nm);
        if (it == index.end())
            throw ValidationError(spec.name + ": unknown basis name " + nm);
        return it->second;
    };
    auto combination = [&](const std::vector<std::pair<std::string, Scalar>>& terms,
                           int expected_deg, const char* what) {
        Matrix v = Matrix::zero(spec.field, alg->dim(expected_deg), 1);
        for (const auto& [nm, c] : terms) {
            auto [dg, i] = lookup(nm);
            if (dg != expected_deg)
                throw ValidationError(spec.name + ": " + std::string(what) + " mixes degrees at " + nm);
            v.at(i, 0) += c;
        }
        return v;
    };

    auto unit_terms = unit_as_combination(spec);
    alg->unit = combination(unit_terms, 0, "unit");

    std::map<std::pair<std::string, std::string>, const ProductRule*> explicit_products;
    for (const auto& rule : spec.products) explicit_products[{rule.a, rule.b}] = &rule;

    // Auto-fill products with a single-basis-element unit unless overridden.
    std::vector<ProductRule> fill;
    if (!spec.unit_name.empty()) {
        for (const auto& [nm, at] : index) {
            (void)at;
            Scalar one = Scalar::one(spec.field);
            if (!explicit_products.count({spec.unit_name, nm}))
                fill.push_back({spec.unit_name, nm, {{nm, one}}});
            if (nm != spec.unit_name && !explicit_products.count({nm, spec.unit_name}))
                fill.push_back({nm, spec.unit_name, {{nm, one}}});
        }
    }

    auto add_rule = [&](const ProductRule& rule) {
        auto [di, a] = lookup(rule.a);
        auto [dj, b] = lookup(rule.b);
        if (di + dj < spec.lo || di + dj > spec.hi) {
            if (!rule.result.empty())
                throw ValidationError(spec.name + ": product " + rule.a + "*" + rule.b +
                                      " lands outside the window");
            return;
        }
        for (const auto& [nm, c] : rule.result) {
            auto [dc, ci] = lookup(nm);
            if (dc != di + dj)
                throw ValidationError(spec.name + ": product " + rule.a + "*" + rule.b +
                                      " has a wrong-degree term " + nm);
            if (!c.is_zero()) alg->mult[{di, dj}].push_back({a, b, ci, c});
        }
    };
    for (const auto& rule : spec.products) add_rule(rule);
    for (const auto& rule : fill) add_rule(rule);

    for (const auto& [label, terms] : spec.idempotents)
        alg->idems.push_back({label, combination(terms, 0, "idempotent")});

    for (const auto& [nm, terms] : spec.differential) {
        auto [dg, i] = lookup(nm);
        if (dg + 1 > spec.hi)
            throw ValidationError(spec.name + ": d(" + nm + ") leaves the window");
        auto it = alg->diff.find(dg);
        if (it == alg->diff.end())
            it = alg->diff.emplace(dg, Matrix::zero(spec.field, alg->dim(dg + 1), alg->dim(dg))).first;
        Matrix v = combination(terms, dg + 1, "differential");
        for (std::size_t r = 0; r < v.rows(); ++r) it->second.at(r, i) += v.at(r, 0);
    }

    alg->validate_core();
    if (spec.positively_graded_checks) alg->validate_positive();
    return alg;
}

AlgPtr field_algebra(const Field& f) {
    DGAlgebraSpec spec;
    spec.field = f;
    spec.name = "k";
    spec.lo = 0;
    spec.hi = 0;
    spec.basis = {{0, "1"}};
    spec.unit_name = "1";
    spec.idempotents = {{"*", {{"1", Scalar::one(f)}}}};
    spec.bounded = true;
    return make_dg_algebra(spec);
}

Matrix DGAMorphism::matrix(int d) const {
    auto it = comp.find(d);
    if (it != comp.end()) return it->second;
    return Matrix::zero(source->field, target->dim(d), source->dim(d));
}

Elem DGAMorphism::apply(const Elem& x) const { return Elem{x.deg, matrix(x.deg) * x.coords}; }

void DGAMorphism::validate() const {
    if (source->field != target->field)
        throw ValidationError("morphism mixes base fields");
    for (const auto& [dg, m] : comp)
        if (m.rows() != target->dim(dg) || m.cols() != source->dim(dg))
            throw ValidationError("morphism matrix shape at degree " + std::to_string(dg));
    if (!(matrix(0) * source->unit == target->unit))
        throw ValidationError("morphism is not unital");
    for (int i = source->lo; i <= source->hi; ++i)
        for (int j = source->lo; j <= source->hi; ++j) {
            if (!source->mul_known(i, j) || !target->mul_known(i, j)) continue;
            for (std::size_t a = 0; a < source->dim(i); ++a)
                for (std::size_t b = 0; b < source->dim(j); ++b) {
                    Elem x = source->basis_elem(i, a), y = source->basis_elem(j, b);
                    Elem lhs = apply(source->mul(x, y));
                    Elem rhs = target->mul(apply(x), apply(y));
                    if (!(lhs.coords == rhs.coords))
                        throw ValidationError("morphism not multiplicative on (" +
                                              source->basis_name(i, a) + ", " +
                                              source->basis_name(j, b) + ")");
                }
        }
    for (int dg = source->lo; dg + 1 <= source->hi; ++dg) {
        if (!target->in_window(dg) || !target->in_window(dg + 1)) continue;
        Matrix lhs = matrix(dg + 1) * source->diff_matrix(dg);
        Matrix rhs = target->diff_matrix(dg) * matrix(dg);
        if (!(lhs == rhs))
            throw ValidationError("morphism does not commute with d at degree " +
                                  std::to_string(dg));
    }
}

DGAMorphism identity_morphism(const AlgPtr& a) {
    DGAMorphism f;
    f.source = a;
    f.target = a;
    for (int d = a->lo; d <= a->hi; ++d) f.comp[d] = Matrix::identity(a->field, a->dim(d));
    return f;
}

}  // namespace dgforge
