#include "dgforge/bigraded.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <tuple>

namespace dgforge {

namespace {

// Column complex of a sparse bigraded table: fixed j, graded by i.
template <class DimFn, class DiffFn>
Complex column_complex(const Field& f, int ilo, int ihi, bool bounded, int j, DimFn dim,
                       DiffFn diffm) {
    Complex c;
    c.field = f;
    c.lo = ilo;
    c.hi = ihi;
    c.bounded = bounded;
    for (int i = ilo; i <= ihi; ++i) c.dims.push_back(dim(BiDeg{i, j}));
    for (int i = ilo; i < ihi; ++i) {
        Matrix m = diffm(BiDeg{i, j});
        if (!m.is_zero()) c.diff[i] = m;
    }
    return c;
}

std::vector<int> columns_of(const std::vector<BiDeg>& supp) {
    std::set<int> js;
    for (const auto& d : supp) js.insert(d.second);
    return {js.begin(), js.end()};
}

}  // namespace

std::size_t BigradedDGAlgebra::dim(BiDeg d) const {
    auto it = basis.find(d);
    return it == basis.end() ? 0 : it->second.size();
}

BiElem BigradedDGAlgebra::basis_elem(BiDeg d, std::size_t k) const {
    BiElem e = zero(d);
    e.coords.at(k, 0) = Scalar::one(field);
    return e;
}

Matrix BigradedDGAlgebra::diff_matrix(BiDeg d) const {
    auto it = diff.find(d);
    if (it != diff.end()) return it->second;
    return Matrix::zero(field, dim({d.first + 1, d.second}), dim(d));
}

BiElem BigradedDGAlgebra::mul(const BiElem& x, const BiElem& y) const {
    BiDeg out{x.deg.first + y.deg.first, x.deg.second + y.deg.second};
    if (!bounded && !in_window(out))
        throw ValidationError(name + ": bigraded product lands outside the certified window");
    BiElem r = zero(out);
    auto it = mult.find({x.deg, y.deg});
    if (it == mult.end()) return r;
    for (const auto& e : it->second) {
        Scalar c = x.coords.at(e.a, 0) * y.coords.at(e.b, 0) * e.coef;
        if (!c.is_zero()) r.coords.at(e.c, 0) += c;
    }
    return r;
}

BiElem BigradedDGAlgebra::d(const BiElem& x) const {
    return BiElem{{x.deg.first + 1, x.deg.second}, diff_matrix(x.deg) * x.coords};
}

Matrix BigradedDGAlgebra::left_mult_matrix(const BiElem& x, BiDeg d) const {
    BiDeg out{x.deg.first + d.first, x.deg.second + d.second};
    Matrix m = Matrix::zero(field, dim(out), dim(d));
    auto it = mult.find({x.deg, d});
    if (it == mult.end()) return m;
    for (const auto& e : it->second) {
        Scalar c = x.coords.at(e.a, 0) * e.coef;
        if (!c.is_zero()) m.at(e.c, e.b) += c;
    }
    return m;
}

Matrix BigradedDGAlgebra::right_mult_matrix(const BiElem& x, BiDeg d) const {
    BiDeg out{x.deg.first + d.first, x.deg.second + d.second};
    Matrix m = Matrix::zero(field, dim(out), dim(d));
    auto it = mult.find({d, x.deg});
    if (it == mult.end()) return m;
    for (const auto& e : it->second) {
        Scalar c = x.coords.at(e.b, 0) * e.coef;
        if (!c.is_zero()) m.at(e.c, e.a) += c;
    }
    return m;
}

std::vector<BiDeg> BigradedDGAlgebra::support() const {
    std::vector<BiDeg> s;
    for (const auto& [d, names] : basis)
        if (!names.empty()) s.push_back(d);
    return s;
}

void BigradedDGAlgebra::validate() const {
    if (dim({0, 0}) == 0 || unit.rows() != dim({0, 0}) || unit.is_zero())
        throw ValidationError(name + ": unit must be a nonzero element of R^{00}");
    auto supp = support();
    for (const auto& d0 : supp)
        for (std::size_t k = 0; k < dim(d0); ++k) {
            BiElem b = basis_elem(d0, k);
            if (!(mul(unit_elem(), b).coords == b.coords) ||
                !(mul(b, unit_elem()).coords == b.coords))
                throw ValidationError(name + ": unit fails on " + basis_name(d0, k));
        }
    for (const auto& dx : supp)
        for (const auto& dy : supp)
            for (const auto& dz : supp) {
                BiDeg total{dx.first + dy.first + dz.first, dx.second + dy.second + dz.second};
                if (!bounded &&
                    !(in_window({dx.first + dy.first, dx.second + dy.second}) &&
                      in_window({dy.first + dz.first, dy.second + dz.second}) &&
                      in_window(total)))
                    continue;
                for (std::size_t a = 0; a < dim(dx); ++a)
                    for (std::size_t b = 0; b < dim(dy); ++b)
                        for (std::size_t c = 0; c < dim(dz); ++c) {
                            BiElem lhs = mul(mul(basis_elem(dx, a), basis_elem(dy, b)),
                                             basis_elem(dz, c));
                            BiElem rhs = mul(basis_elem(dx, a),
                                             mul(basis_elem(dy, b), basis_elem(dz, c)));
                            if (!(lhs.coords == rhs.coords))
                                throw ValidationError(name + ": associativity fails on (" +
                                                      basis_name(dx, a) + ", " +
                                                      basis_name(dy, b) + ", " +
                                                      basis_name(dz, c) + ")");
                        }
            }
    for (const auto& d0 : supp) {
        Matrix d1 = diff_matrix(d0);
        Matrix d2 = diff_matrix({d0.first + 1, d0.second});
        if (!(d2 * d1).is_zero())
            throw ValidationError(name + ": d^2 != 0 at (" + std::to_string(d0.first) + "," +
                                  std::to_string(d0.second) + ")");
    }
    // Leibniz rule d(ab) = (da)b + (-1)^i a(db), a in R^{ij}.
    for (const auto& dx : supp)
        for (const auto& dy : supp) {
            BiDeg pd{dx.first + dy.first, dx.second + dy.second};
            BiDeg pd1{pd.first + 1, pd.second};
            if (!bounded && !(in_window(pd) && in_window(pd1))) continue;
            for (std::size_t a = 0; a < dim(dx); ++a)
                for (std::size_t b = 0; b < dim(dy); ++b) {
                    BiElem x = basis_elem(dx, a), y = basis_elem(dy, b);
                    Matrix lhs = d(mul(x, y)).coords;
                    Matrix rhs = mul(d(x), y).coords;
                    Matrix t = mul(x, d(y)).coords;
                    rhs = (dx.first % 2 == 0) ? rhs + t : rhs - t;
                    if (!(lhs == rhs))
                        throw ValidationError(name + ": Leibniz rule fails on (" +
                                              basis_name(dx, a) + ", " + basis_name(dy, b) + ")");
                }
        }
    if (!idems.empty()) {
        if (!weights.empty() && weights.size() != idems.size())
            throw ValidationError(name + ": weight list length differs from idempotent count");
        for (const auto& ex : idems)
            for (const auto& ey : idems) {
                BiElem p = mul(BiElem{{0, 0}, ex.coords}, BiElem{{0, 0}, ey.coords});
                const Matrix expect =
                    (&ex == &ey) ? ex.coords : Matrix::zero(field, dim({0, 0}), 1);
                if (!(p.coords == expect))
                    throw ValidationError(name + ": idempotent pair (" + ex.label + ", " +
                                          ey.label + ") violates orthogonality");
            }
        Matrix sum = Matrix::zero(field, dim({0, 0}), 1);
        for (const auto& e : idems) sum = sum + e.coords;
        if (!(sum == unit))
            throw ValidationError(name + ": idempotents do not sum to the unit");
        for (const auto& e : idems)
            if (!(diff_matrix({0, 0}) * e.coords).is_zero())
                throw ValidationError(name + ": d(" + e.label + ") != 0");
    }
}

BiAlgPtr make_bigraded_algebra(const BigradedSpec& spec) {
    auto alg = std::make_shared<BigradedDGAlgebra>();
    alg->field = spec.field;
    alg->name = spec.name;
    alg->bounded = spec.bounded;
    std::map<std::string, std::pair<BiDeg, std::size_t>> index;
    bool first = true;
    for (const auto& [i, j, nm] : spec.basis) {
        BiDeg d{i, j};
        if (index.count(nm)) throw ValidationError(spec.name + ": duplicate basis name " + nm);
        index[nm] = {d, alg->basis[d].size()};
        alg->basis[d].push_back(nm);
        if (first) {
            alg->ilo = alg->ihi = i;
            alg->jlo = alg->jhi = j;
            first = false;
        } else {
            alg->ilo = std::min(alg->ilo, i);
            alg->ihi = std::max(alg->ihi, i);
            alg->jlo = std::min(alg->jlo, j);
            alg->jhi = std::max(alg->jhi, j);
        }
    }
    auto lookup = [&](const std::string& nm) {
        auto it = index.find(nm);
        if (it == index.end()) throw ValidationError(spec.name + ": unknown basis name " + nm);
        return it->second;
    };
    auto combination = [&](const std::vector<std::pair<std::string, Scalar>>& terms, BiDeg expect,
                           const char* what) {
        Matrix v = Matrix::zero(spec.field, alg->dim(expect), 1);
        for (const auto& [nm, c] : terms) {
            auto [dg, i] = lookup(nm);
            if (dg != expect)
                throw ValidationError(spec.name + ": " + std::string(what) +
                                      " mixes bidegrees at " + nm);
            v.at(i, 0) += c;
        }
        return v;
    };
    if (!spec.unit_combination.empty())
        alg->unit = combination(spec.unit_combination, {0, 0}, "unit");
    else if (!spec.unit_name.empty())
        alg->unit = combination({{spec.unit_name, Scalar::one(spec.field)}}, {0, 0}, "unit");
    else
        throw ValidationError(spec.name + ": no unit specified");

    std::set<std::pair<std::string, std::string>> explicit_products;
    for (const auto& rule : spec.products) explicit_products.insert({rule.a, rule.b});
    auto add_rule = [&](const ProductRule& rule) {
        auto [di, a] = lookup(rule.a);
        auto [dj, b] = lookup(rule.b);
        BiDeg out{di.first + dj.first, di.second + dj.second};
        for (const auto& [nm, c] : rule.result) {
            auto [dc, ci] = lookup(nm);
            if (dc != out)
                throw ValidationError(spec.name + ": product " + rule.a + "*" + rule.b +
                                      " has a wrong-bidegree term " + nm);
            if (!c.is_zero()) alg->mult[{di, dj}].push_back({a, b, ci, c});
        }
    };
    for (const auto& rule : spec.products) add_rule(rule);
    if (!spec.unit_name.empty())
        for (const auto& [nm, at] : index) {
            (void)at;
            Scalar one = Scalar::one(spec.field);
            if (!explicit_products.count({spec.unit_name, nm}))
                add_rule({spec.unit_name, nm, {{nm, one}}});
            if (nm != spec.unit_name && !explicit_products.count({nm, spec.unit_name}))
                add_rule({nm, spec.unit_name, {{nm, one}}});
        }
    for (const auto& [label, terms] : spec.idempotents)
        alg->idems.push_back({label, combination(terms, {0, 0}, "idempotent")});
    alg->weights = spec.weights;
    for (const auto& [nm, terms] : spec.differential) {
        auto [dg, i] = lookup(nm);
        BiDeg out{dg.first + 1, dg.second};
        auto it = alg->diff.find(dg);
        if (it == alg->diff.end())
            it = alg->diff.emplace(dg, Matrix::zero(spec.field, alg->dim(out), alg->dim(dg))).first;
        Matrix v = combination(terms, out, "differential");
        for (std::size_t r = 0; r < v.rows(); ++r) it->second.at(r, i) += v.at(r, 0);
    }
    alg->validate();
    return alg;
}

std::size_t BigradedDGModule::dim(BiDeg d) const {
    auto it = basis.find(d);
    return it == basis.end() ? 0 : it->second.size();
}

Matrix BigradedDGModule::diff_matrix(BiDeg d) const {
    auto it = diff.find(d);
    if (it != diff.end()) return it->second;
    return Matrix::zero(owner->field, dim({d.first + 1, d.second}), dim(d));
}

Matrix BigradedDGModule::act_matrix(const BiElem& a, BiDeg mdeg) const {
    BiDeg out{mdeg.first + a.deg.first, mdeg.second + a.deg.second};
    Matrix m = Matrix::zero(owner->field, dim(out), dim(mdeg));
    auto it = act.find({mdeg, a.deg});
    if (it == act.end()) return m;
    for (const auto& e : it->second) {
        Scalar c = a.coords.at(e.b, 0) * e.coef;
        if (!c.is_zero()) m.at(e.c, e.a) += c;
    }
    return m;
}

std::vector<BiDeg> BigradedDGModule::support() const {
    std::vector<BiDeg> s;
    for (const auto& [d, names] : basis)
        if (!names.empty()) s.push_back(d);
    return s;
}

void BigradedDGModule::validate() const {
    for (const auto& d0 : support()) {
        Matrix d1 = diff_matrix(d0);
        Matrix d2 = diff_matrix({d0.first + 1, d0.second});
        if (!(d2 * d1).is_zero())
            throw ValidationError(name + ": module d^2 != 0");
        if (!(act_matrix(owner->unit_elem(), d0) ==
              Matrix::identity(owner->field, dim(d0))))
            throw ValidationError(name + ": unit does not act as identity");
    }
    auto supp = support();
    auto asupp = owner->support();
    for (const auto& md : supp)
        for (const auto& da : asupp)
            for (const auto& db : asupp) {
                for (std::size_t a = 0; a < owner->dim(da); ++a)
                    for (std::size_t b = 0; b < owner->dim(db); ++b) {
                        BiElem xa = owner->basis_elem(da, a), xb = owner->basis_elem(db, b);
                        BiDeg mid{md.first + da.first, md.second + da.second};
                        Matrix lhs = act_matrix(xb, mid) * act_matrix(xa, md);
                        Matrix rhs = act_matrix(owner->mul(xa, xb), md);
                        if (!(lhs == rhs))
                            throw ValidationError(name + ": action not associative");
                    }
            }
    // Module Leibniz d(m a) = (dm) a + (-1)^i m (da), m in M^{ij}.
    for (const auto& md : supp)
        for (const auto& da : asupp)
            for (std::size_t a = 0; a < owner->dim(da); ++a) {
                BiElem xa = owner->basis_elem(da, a);
                BiDeg out{md.first + da.first, md.second + da.second};
                Matrix lhs = diff_matrix(out) * act_matrix(xa, md);
                Matrix rhs = act_matrix(xa, {md.first + 1, md.second}) * diff_matrix(md);
                Matrix t = act_matrix(owner->d(xa), md);
                rhs = (md.first % 2 == 0) ? rhs + t : rhs - t;
                if (!(lhs == rhs))
                    throw ValidationError(name + ": module Leibniz rule fails");
            }
}

BiModPtr regular_bimodule_as_module(const BiAlgPtr& a) {
    auto m = std::make_shared<BigradedDGModule>();
    m->owner = a;
    m->name = a->name + " over itself";
    m->basis = a->basis;
    for (const auto& [key, entries] : a->mult) m->act[key] = entries;
    m->diff = a->diff;
    m->validate();
    return m;
}

Matrix BigradedAlgMorphism::matrix(BiDeg d) const {
    auto it = comp.find(d);
    if (it != comp.end()) return it->second;
    return Matrix::zero(source->field, target->dim(d), source->dim(d));
}

void BigradedAlgMorphism::validate() const {
    if (!(matrix({0, 0}) * source->unit == target->unit))
        throw ValidationError("bigraded morphism is not unital");
    auto supp = source->support();
    for (const auto& dx : supp)
        for (const auto& dy : supp)
            for (std::size_t a = 0; a < source->dim(dx); ++a)
                for (std::size_t b = 0; b < source->dim(dy); ++b) {
                    BiElem x = source->basis_elem(dx, a), y = source->basis_elem(dy, b);
                    BiElem lhs0 = source->mul(x, y);
                    Matrix lhs = matrix(lhs0.deg) * lhs0.coords;
                    BiElem fx{dx, matrix(dx) * x.coords}, fy{dy, matrix(dy) * y.coords};
                    Matrix rhs = target->mul(fx, fy).coords;
                    if (!(lhs == rhs))
                        throw ValidationError("bigraded morphism not multiplicative on (" +
                                              source->basis_name(dx, a) + ", " +
                                              source->basis_name(dy, b) + ")");
                }
    for (const auto& d0 : supp) {
        BiDeg up{d0.first + 1, d0.second};
        Matrix lhs = matrix(up) * source->diff_matrix(d0);
        Matrix rhs = target->diff_matrix(d0) * matrix(d0);
        if (!(lhs == rhs))
            throw ValidationError("bigraded morphism does not commute with d");
    }
}

Matrix BigradedModMorphism::matrix(BiDeg d) const {
    auto it = comp.find(d);
    if (it != comp.end()) return it->second;
    return Matrix::zero(source->owner->field, target->dim(d), source->dim(d));
}

void BigradedModMorphism::validate() const {
    auto supp = source->support();
    for (const auto& d0 : supp) {
        BiDeg up{d0.first + 1, d0.second};
        if (!(matrix(up) * source->diff_matrix(d0) == target->diff_matrix(d0) * matrix(d0)))
            throw ValidationError("bigraded module morphism not a chain map");
    }
    for (const auto& md : supp)
        for (const auto& da : source->owner->support())
            for (std::size_t a = 0; a < source->owner->dim(da); ++a) {
                BiElem xa = source->owner->basis_elem(da, a);
                BiDeg out{md.first + da.first, md.second + da.second};
                Matrix lhs = matrix(out) * source->act_matrix(xa, md);
                Matrix rhs = target->act_matrix(xa, md) * matrix(md);
                if (!(lhs == rhs))
                    throw ValidationError("bigraded module morphism not linear over the algebra");
            }
}

PurityResult check_pure(const std::map<BiDeg, std::size_t>& dim_table, int w) {
    PurityResult r;
    r.weight = w;
    for (const auto& [d, n] : dim_table)
        if (n > 0 && d.second != d.first + w) {
            r.counterexample = d;
            return r;
        }
    r.pure = true;
    return r;
}

std::map<BiDeg, std::size_t> cohomology_table(const BigradedDGAlgebra& r) {
    std::map<BiDeg, std::size_t> table;
    for (int j : columns_of(r.support())) {
        Complex col = column_complex(
            r.field, r.ilo, r.ihi, r.bounded, j, [&](BiDeg d) { return r.dim(d); },
            [&](BiDeg d) { return r.diff_matrix(d); });
        CohomologyData h = cohomology_data(col);
        for (int i = h.lo; i <= h.hi; ++i)
            if (h.h_dim(i) > 0) table[{i, j}] = h.h_dim(i);
    }
    return table;
}

namespace {

// Build the subalgebra spanned by chosen columns per bidegree, together with
// its inclusion into r. Throws ConsistencyError if the columns are not closed
// under multiplication or the differential.
GammaAlgebra subalgebra_from_columns(const BiAlgPtr& r, std::map<BiDeg, Matrix> cols,
                                     const std::string& name) {
    auto sub = std::make_shared<BigradedDGAlgebra>();
    sub->field = r->field;
    sub->name = name;
    sub->ilo = r->ilo;
    sub->ihi = r->ihi;
    sub->jlo = r->jlo;
    sub->jhi = r->jhi;
    sub->bounded = r->bounded;
    for (const auto& [d, m] : cols) {
        if (m.cols() == 0) continue;
        std::vector<std::string> names;
        for (std::size_t k = 0; k < m.cols(); ++k)
            names.push_back("s" + std::to_string(d.first) + "_" + std::to_string(d.second) + "_" +
                            std::to_string(k));
        sub->basis[d] = std::move(names);
    }
    auto col_of = [&](BiDeg d) -> Matrix {
        auto it = cols.find(d);
        if (it != cols.end()) return it->second;
        return Matrix::zero(r->field, r->dim(d), 0);
    };
    for (const auto& [dx, mx] : cols)
        for (const auto& [dy, my] : cols) {
            if (mx.cols() == 0 || my.cols() == 0) continue;
            BiDeg out{dx.first + dy.first, dx.second + dy.second};
            if (!r->bounded && !r->in_window(out)) continue;
            auto& entries = sub->mult[{dx, dy}];
            for (std::size_t a = 0; a < mx.cols(); ++a)
                for (std::size_t b = 0; b < my.cols(); ++b) {
                    BiElem prod = r->mul(BiElem{dx, mx.column(a)}, BiElem{dy, my.column(b)});
                    if (prod.is_zero()) continue;
                    auto sol = solve_linear(col_of(out), prod.coords);
                    if (!sol)
                        throw ConsistencyError(name + ": subspace not closed under product");
                    for (std::size_t c = 0; c < sol->rows(); ++c)
                        if (!sol->at(c, 0).is_zero()) entries.push_back({a, b, c, sol->at(c, 0)});
                }
        }
    {
        auto sol = solve_linear(col_of({0, 0}), r->unit);
        if (!sol) throw ConsistencyError(name + ": unit not contained in the subalgebra");
        sub->unit = *sol;
    }
    for (const auto& e : r->idems) {
        auto sol = solve_linear(col_of({0, 0}), e.coords);
        if (!sol) throw ConsistencyError(name + ": idempotent " + e.label + " not contained");
        sub->idems.push_back({e.label, *sol});
    }
    sub->weights = r->weights;
    for (const auto& [d0, m] : cols) {
        if (m.cols() == 0) continue;
        BiDeg up{d0.first + 1, d0.second};
        Matrix im = r->diff_matrix(d0) * m;
        if (im.is_zero()) continue;
        auto sol = solve_linear(col_of(up), im);
        if (!sol) throw ConsistencyError(name + ": subspace not closed under d");
        sub->diff[d0] = *sol;
    }
    sub->validate();
    GammaAlgebra res;
    res.algebra = sub;
    res.inclusion.source = sub;
    res.inclusion.target = r;
    for (const auto& [d, m] : cols)
        if (m.cols() > 0) res.inclusion.comp[d] = m;
    res.inclusion.validate();
    return res;
}

std::map<BiDeg, Matrix> gamma_columns(const Field& field, const std::vector<BiDeg>& supp,
                                      const std::function<std::size_t(BiDeg)>& dim,
                                      const std::function<Matrix(BiDeg)>& diffm) {
    std::map<BiDeg, Matrix> cols;
    for (const auto& d : supp) {
        if (d.first < d.second) {
            cols[d] = Matrix::identity(field, dim(d));
        } else if (d.first == d.second) {
            Matrix k = kernel_basis(diffm(d));
            if (k.cols() > 0) cols[d] = k;
        }
    }
    return cols;
}

}  // namespace

GammaAlgebra gamma(const BiAlgPtr& r) {
    auto cols = gamma_columns(
        r->field, r->support(), [&](BiDeg d) { return r->dim(d); },
        [&](BiDeg d) { return r->diff_matrix(d); });
    return subalgebra_from_columns(r, std::move(cols), "Gamma(" + r->name + ")");
}

GammaModule gamma(const BiModPtr& m) {
    auto galg = gamma(m->owner);
    auto cols = gamma_columns(
        m->owner->field, m->support(), [&](BiDeg d) { return m->dim(d); },
        [&](BiDeg d) { return m->diff_matrix(d); });
    auto sub = std::make_shared<BigradedDGModule>();
    sub->owner = galg.algebra;
    sub->name = "Gamma(" + m->name + ")";
    auto col_of = [&](BiDeg d) -> Matrix {
        auto it = cols.find(d);
        if (it != cols.end()) return it->second;
        return Matrix::zero(m->owner->field, m->dim(d), 0);
    };
    for (const auto& [d, mat] : cols) {
        if (mat.cols() == 0) continue;
        std::vector<std::string> names;
        for (std::size_t k = 0; k < mat.cols(); ++k)
            names.push_back("gm" + std::to_string(d.first) + "_" + std::to_string(d.second) + "_" +
                            std::to_string(k));
        sub->basis[d] = std::move(names);
    }
    for (const auto& [md, mmat] : cols)
        for (const auto& [ad, acols] : galg.inclusion.comp) {
            BiDeg out{md.first + ad.first, md.second + ad.second};
            auto& entries = sub->act[{md, ad}];
            for (std::size_t s = 0; s < mmat.cols(); ++s)
                for (std::size_t b = 0; b < acols.cols(); ++b) {
                    BiElem a_in_r{ad, acols.column(b)};
                    Matrix v = m->act_matrix(a_in_r, md) * mmat.column(s);
                    if (v.is_zero()) continue;
                    auto sol = solve_linear(col_of(out), v);
                    if (!sol)
                        throw ConsistencyError("Gamma(M): subspace not closed under the action");
                    for (std::size_t c = 0; c < sol->rows(); ++c)
                        if (!sol->at(c, 0).is_zero()) entries.push_back({s, b, c, sol->at(c, 0)});
                }
        }
    for (const auto& [d0, mat] : cols) {
        BiDeg up{d0.first + 1, d0.second};
        Matrix im = m->diff_matrix(d0) * mat;
        if (im.is_zero()) continue;
        auto sol = solve_linear(col_of(up), im);
        if (!sol) throw ConsistencyError("Gamma(M): subspace not closed under d");
        sub->diff[d0] = *sol;
    }
    sub->validate();
    GammaModule res;
    res.module = sub;
    res.inclusion_cols = std::move(cols);
    return res;
}

Matrix BigradedCohomology::h_coords(BiDeg d, const Matrix& cocycle) const {
    auto it = classes.find(d);
    if (it == classes.end()) {
        if (!cocycle.is_zero())
            throw ConsistencyError("class of a cocycle at a bidegree with H = 0");
        return Matrix::zero(algebra->field, 0, cocycle.cols());
    }
    const auto& dg = it->second;
    Matrix span = Matrix::hcat(dg.image, dg.reps);
    auto sol = solve_linear(span, cocycle);
    if (!sol) throw ConsistencyError("not a cocycle at the requested bidegree");
    Matrix h(algebra->field, dg.reps.cols(), cocycle.cols());
    for (std::size_t i = 0; i < dg.reps.cols(); ++i)
        for (std::size_t j = 0; j < cocycle.cols(); ++j)
            h.at(i, j) = sol->at(dg.image.cols() + i, j);
    return h;
}

std::map<BiDeg, std::size_t> BigradedCohomology::dims() const {
    std::map<BiDeg, std::size_t> t;
    for (const auto& [d, names] : algebra->basis)
        if (!names.empty()) t[d] = names.size();
    return t;
}

BigradedCohomology bigraded_cohomology(const BiAlgPtr& r) {
    BigradedCohomology res;
    auto h = std::make_shared<BigradedDGAlgebra>();
    h->field = r->field;
    h->name = "H(" + r->name + ")";
    h->ilo = r->ilo;
    h->ihi = r->ihi;
    h->jlo = r->jlo;
    h->jhi = r->jhi;
    h->bounded = r->bounded;
    for (int j : columns_of(r->support())) {
        Complex col = column_complex(
            r->field, r->ilo, r->ihi, r->bounded, j, [&](BiDeg d) { return r->dim(d); },
            [&](BiDeg d) { return r->diff_matrix(d); });
        CohomologyData data = cohomology_data(col);
        for (int i = data.lo; i <= data.hi; ++i) {
            const auto& dg = data.at[static_cast<std::size_t>(i - data.lo)];
            BiDeg d{i, j};
            if (col.dim(i) > 0) res.classes[d] = dg;  // kept even when H = 0 there
            if (dg.reps.cols() == 0) continue;
            std::vector<std::string> names;
            for (std::size_t k = 0; k < dg.reps.cols(); ++k)
                names.push_back("h" + std::to_string(i) + "_" + std::to_string(j) + "_" +
                                std::to_string(k));
            h->basis[d] = std::move(names);
        }
    }
    res.algebra = h;  // h_coords below needs the field and the class table
    for (const auto& [dx, cx] : res.classes)
        for (const auto& [dy, cy] : res.classes) {
            if (cx.reps.cols() == 0 || cy.reps.cols() == 0) continue;
            BiDeg out{dx.first + dy.first, dx.second + dy.second};
            if (!r->bounded && !r->in_window(out)) continue;
            auto& entries = h->mult[{dx, dy}];
            for (std::size_t a = 0; a < cx.reps.cols(); ++a)
                for (std::size_t b = 0; b < cy.reps.cols(); ++b) {
                    BiElem prod =
                        r->mul(BiElem{dx, cx.reps.column(a)}, BiElem{dy, cy.reps.column(b)});
                    Matrix cls = res.h_coords(out, prod.coords);
                    for (std::size_t c = 0; c < cls.rows(); ++c)
                        if (!cls.at(c, 0).is_zero()) entries.push_back({a, b, c, cls.at(c, 0)});
                }
        }
    h->unit = res.h_coords({0, 0}, r->unit);
    for (const auto& e : r->idems) h->idems.push_back({e.label, res.h_coords({0, 0}, e.coords)});
    h->weights = r->weights;
    h->validate();
    return res;
}

namespace {

BiQuasiIsoReport bigraded_quasi_iso_generic(
    const Field& field, int ilo, int ihi, bool bounded, const std::vector<BiDeg>& all_support,
    const std::function<std::size_t(BiDeg)>& sdim, const std::function<Matrix(BiDeg)>& sdiff,
    const std::function<std::size_t(BiDeg)>& tdim, const std::function<Matrix(BiDeg)>& tdiff,
    const std::function<Matrix(BiDeg)>& fmat) {
    BiQuasiIsoReport rep;
    rep.is_quasi_iso = true;
    for (int j : columns_of(all_support)) {
        Complex src = column_complex(field, ilo, ihi, bounded, j, sdim, sdiff);
        Complex tgt = column_complex(field, ilo, ihi, bounded, j, tdim, tdiff);
        std::map<int, Matrix> f;
        for (int i = ilo; i <= ihi; ++i) f[i] = fmat(BiDeg{i, j});
        QuasiIsoReport col = is_quasi_iso(src, tgt, f);
        if (!col.chain_map) {
            rep.is_quasi_iso = false;
            rep.failure = "column " + std::to_string(j) + ": " + col.failure;
            return rep;
        }
        for (const auto& row : col.rows) {
            if (row.h_source == 0 && row.h_target == 0) continue;
            rep.rows.push_back({{row.deg, j}, row.h_source, row.h_target, row.rank_induced});
            if (!(row.rank_induced == row.h_source && row.rank_induced == row.h_target)) {
                rep.is_quasi_iso = false;
                if (rep.failure.empty())
                    rep.failure = "cohomology not matched at (" + std::to_string(row.deg) + "," +
                                  std::to_string(j) + ")";
            }
        }
    }
    return rep;
}

}  // namespace

BiQuasiIsoReport bigraded_quasi_iso(const BigradedAlgMorphism& f) {
    auto supp = f.source->support();
    auto tsupp = f.target->support();
    supp.insert(supp.end(), tsupp.begin(), tsupp.end());
    int ilo = std::min(f.source->ilo, f.target->ilo);
    int ihi = std::max(f.source->ihi, f.target->ihi);
    return bigraded_quasi_iso_generic(
        f.source->field, ilo, ihi, f.source->bounded && f.target->bounded, supp,
        [&](BiDeg d) { return f.source->dim(d); }, [&](BiDeg d) { return f.source->diff_matrix(d); },
        [&](BiDeg d) { return f.target->dim(d); }, [&](BiDeg d) { return f.target->diff_matrix(d); },
        [&](BiDeg d) { return f.matrix(d); });
}

BiQuasiIsoReport bigraded_module_quasi_iso(const BiModPtr& src, const BiModPtr& tgt,
                                           const std::map<BiDeg, Matrix>& f) {
    auto supp = src->support();
    auto tsupp = tgt->support();
    supp.insert(supp.end(), tsupp.begin(), tsupp.end());
    if (supp.empty()) {
        BiQuasiIsoReport rep;
        rep.is_quasi_iso = true;
        return rep;
    }
    int ilo = supp.front().first, ihi = supp.front().first;
    for (const auto& d : supp) {
        ilo = std::min(ilo, d.first);
        ihi = std::max(ihi, d.first);
    }
    auto fmat = [&](BiDeg d) {
        auto it = f.find(d);
        if (it != f.end()) return it->second;
        return Matrix::zero(src->owner->field, tgt->dim(d), src->dim(d));
    };
    return bigraded_quasi_iso_generic(
        src->owner->field, ilo, ihi, true, supp, [&](BiDeg d) { return src->dim(d); },
        [&](BiDeg d) { return src->diff_matrix(d); }, [&](BiDeg d) { return tgt->dim(d); },
        [&](BiDeg d) { return tgt->diff_matrix(d); }, fmat);
}

FormalityWitness formality_witness(const BiAlgPtr& r) {
    FormalityWitness w;
    auto htable = cohomology_table(*r);
    w.purity = check_pure(htable, 0);
    if (!w.purity.pure) {
        w.failure = "H is not pure of weight 0";
        return w;
    }
    auto g = gamma(r);
    w.gamma_algebra = g.algebra;
    auto H = bigraded_cohomology(r);
    w.h_algebra = H.algebra;

    w.inclusion = bigraded_quasi_iso(g.inclusion);

    // Componentwise projection Gamma(R) -> H(R): the class map on the
    // diagonal, zero elsewhere (purity forces H = 0 off the diagonal).
    BigradedAlgMorphism proj;
    proj.source = g.algebra;
    proj.target = H.algebra;
    for (const auto& [d, cols] : g.inclusion.comp) {
        if (d.first != d.second) continue;
        proj.comp[d] = H.h_coords(d, cols);
    }
    proj.validate();  // multiplicativity of the projection is machine-checked
    w.projection = bigraded_quasi_iso(proj);

    w.pass = w.inclusion.is_quasi_iso && w.projection.is_quasi_iso;
    if (!w.pass)
        w.failure = !w.inclusion.is_quasi_iso ? "inclusion fails: " + w.inclusion.failure
                                              : "projection fails: " + w.projection.failure;
    return w;
}

WeightedSubWitness weighted_sub_witness(const BiAlgPtr& r) {
    WeightedSubWitness w;
    if (r->idems.empty()) {
        w.failure = "no idempotent decomposition supplied";
        return w;
    }
    std::vector<int> weights = r->weights;
    if (weights.empty()) weights.assign(r->idems.size(), 0);

    const std::size_t k = r->idems.size();
    auto block_cols = [&](BiDeg d, std::size_t a, std::size_t b) {
        BiElem ea{{0, 0}, r->idems[a].coords}, eb{{0, 0}, r->idems[b].coords};
        Matrix proj = r->left_mult_matrix(ea, d) * r->right_mult_matrix(eb, d);
        return column_space_basis(proj);
    };
    // Blockwise purity of H: H(e_a R e_b) must be pure of weight n_a - n_b.
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) {
            std::map<BiDeg, std::size_t> hdim;
            for (int j : columns_of(r->support())) {
                std::map<int, Matrix> cols;
                for (int i = r->ilo; i <= r->ihi; ++i) cols[i] = block_cols({i, j}, a, b);
                Complex c;
                c.field = r->field;
                c.lo = r->ilo;
                c.hi = r->ihi;
                c.bounded = r->bounded;
                for (int i = r->ilo; i <= r->ihi; ++i) c.dims.push_back(cols[i].cols());
                for (int i = r->ilo; i < r->ihi; ++i) {
                    Matrix im = r->diff_matrix({i, j}) * cols[i];
                    auto sol = solve_linear(cols[i + 1], im);
                    if (!sol) throw ConsistencyError("block not stable under d");
                    if (!sol->is_zero()) c.diff[i] = *sol;
                }
                CohomologyData data = cohomology_data(c);
                for (int i = data.lo; i <= data.hi; ++i)
                    if (data.h_dim(i) > 0) hdim[{i, j}] = data.h_dim(i);
            }
            PurityResult p = check_pure(hdim, weights[a] - weights[b]);
            if (!p.pure) {
                w.impure_block = {{a, b}, *p.counterexample};
                w.failure = "block (" + r->idems[a].label + ", " + r->idems[b].label +
                            ") impure at (" + std::to_string(p.counterexample->first) + "," +
                            std::to_string(p.counterexample->second) + ")";
                return w;
            }
        }

    // S^{ij}_{ab}: the full block when i + n_a - n_b < j, its cocycles when
    // equal, zero when greater.
    std::map<BiDeg, Matrix> cols;
    for (const auto& d : r->support()) {
        std::vector<Matrix> parts;
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                Matrix blk = block_cols(d, a, b);
                if (blk.cols() == 0) continue;
                int threshold = d.first + weights[a] - weights[b];
                if (threshold < d.second) {
                    parts.push_back(blk);
                } else if (threshold == d.second) {
                    Matrix ker = kernel_basis(r->diff_matrix(d) * blk);
                    if (ker.cols() > 0) parts.push_back(blk * ker);
                }
            }
        if (parts.empty()) continue;
        Matrix all = parts[0];
        for (std::size_t t = 1; t < parts.size(); ++t) all = Matrix::hcat(all, parts[t]);
        if (all.cols() > 0) cols[d] = all;
    }
    auto sub = subalgebra_from_columns(r, std::move(cols), "Sub(" + r->name + ")");
    w.sub_algebra = sub.algebra;
    auto H = bigraded_cohomology(r);
    w.h_algebra = H.algebra;
    w.inclusion = bigraded_quasi_iso(sub.inclusion);

    BigradedAlgMorphism proj;
    proj.source = sub.algebra;
    proj.target = H.algebra;
    for (const auto& [d, colm] : sub.inclusion.comp) {
        Matrix out(r->field, H.classes.count(d) ? H.classes.at(d).reps.cols() : 0, colm.cols());
        for (std::size_t c = 0; c < colm.cols(); ++c) {
            Matrix v = colm.column(c);
            // Class map only where the column is a cocycle (threshold blocks);
            // elsewhere the matching block of H vanishes by purity.
            if ((r->diff_matrix(d) * v).is_zero()) {
                Matrix cls = H.h_coords(d, v);
                for (std::size_t rr = 0; rr < cls.rows(); ++rr) out.at(rr, c) = cls.at(rr, 0);
            }
        }
        if (out.rows() > 0) proj.comp[d] = out;
    }
    proj.validate();
    w.projection = bigraded_quasi_iso(proj);
    w.pass = w.inclusion.is_quasi_iso && w.projection.is_quasi_iso;
    if (!w.pass)
        w.failure = !w.inclusion.is_quasi_iso ? "inclusion fails: " + w.inclusion.failure
                                              : "projection fails: " + w.projection.failure;
    return w;
}

std::size_t BigradedBimodule::dim(BiDeg d) const {
    auto it = basis.find(d);
    return it == basis.end() ? 0 : it->second.size();
}

Matrix BigradedBimodule::diff_matrix(BiDeg d) const {
    auto it = diff.find(d);
    if (it != diff.end()) return it->second;
    return Matrix::zero(left_owner->field, dim({d.first + 1, d.second}), dim(d));
}

Matrix BigradedBimodule::left_act_matrix(const BiElem& a, BiDeg mdeg) const {
    BiDeg out{mdeg.first + a.deg.first, mdeg.second + a.deg.second};
    Matrix m = Matrix::zero(left_owner->field, dim(out), dim(mdeg));
    auto it = left_act.find({a.deg, mdeg});
    if (it == left_act.end()) return m;
    for (const auto& e : it->second) {
        Scalar c = a.coords.at(e.a, 0) * e.coef;
        if (!c.is_zero()) m.at(e.c, e.b) += c;
    }
    return m;
}

Matrix BigradedBimodule::right_act_matrix(const BiElem& r0, BiDeg mdeg) const {
    BiDeg out{mdeg.first + r0.deg.first, mdeg.second + r0.deg.second};
    Matrix m = Matrix::zero(left_owner->field, dim(out), dim(mdeg));
    auto it = right_act.find({mdeg, r0.deg});
    if (it == right_act.end()) return m;
    for (const auto& e : it->second) {
        Scalar c = r0.coords.at(e.b, 0) * e.coef;
        if (!c.is_zero()) m.at(e.c, e.a) += c;
    }
    return m;
}

std::vector<BiDeg> BigradedBimodule::support() const {
    std::vector<BiDeg> s;
    for (const auto& [d, names] : basis)
        if (!names.empty()) s.push_back(d);
    return s;
}

void BigradedBimodule::validate() const {
    for (const auto& d0 : support()) {
        if (!(diff_matrix({d0.first + 1, d0.second}) * diff_matrix(d0)).is_zero())
            throw ValidationError(name + ": bimodule d^2 != 0");
        if (!(left_act_matrix(left_owner->unit_elem(), d0) ==
              Matrix::identity(left_owner->field, dim(d0))) ||
            !(right_act_matrix(right_owner->unit_elem(), d0) ==
              Matrix::identity(right_owner->field, dim(d0))))
            throw ValidationError(name + ": unit action fails");
    }
    for (const auto& md : support()) {
        for (const auto& da : left_owner->support())
            for (std::size_t a = 0; a < left_owner->dim(da); ++a) {
                BiElem xa = left_owner->basis_elem(da, a);
                BiDeg out{md.first + da.first, md.second + da.second};
                Matrix lhs = diff_matrix(out) * left_act_matrix(xa, md);
                Matrix rhs = left_act_matrix(xa, {md.first + 1, md.second}) * diff_matrix(md);
                if (da.first % 2 != 0) rhs = rhs.scaled(-Scalar::one(left_owner->field));
                rhs = rhs + left_act_matrix(left_owner->d(xa), md);
                if (!(lhs == rhs)) throw ValidationError(name + ": left Leibniz fails");
            }
        for (const auto& dr : right_owner->support())
            for (std::size_t a = 0; a < right_owner->dim(dr); ++a) {
                BiElem xr = right_owner->basis_elem(dr, a);
                BiDeg out{md.first + dr.first, md.second + dr.second};
                Matrix lhs = diff_matrix(out) * right_act_matrix(xr, md);
                Matrix rhs = right_act_matrix(xr, {md.first + 1, md.second}) * diff_matrix(md);
                Matrix t = right_act_matrix(right_owner->d(xr), md);
                rhs = (md.first % 2 == 0) ? rhs + t : rhs - t;
                if (!(lhs == rhs)) throw ValidationError(name + ": right Leibniz fails");
            }
        for (const auto& da : left_owner->support())
            for (const auto& dr : right_owner->support())
                for (std::size_t a = 0; a < left_owner->dim(da); ++a)
                    for (std::size_t b = 0; b < right_owner->dim(dr); ++b) {
                        BiElem xa = left_owner->basis_elem(da, a);
                        BiElem xr = right_owner->basis_elem(dr, b);
                        BiDeg mid{md.first + da.first, md.second + da.second};
                        Matrix lhs = right_act_matrix(xr, mid) * left_act_matrix(xa, md);
                        BiDeg midr{md.first + dr.first, md.second + dr.second};
                        Matrix rhs = left_act_matrix(xa, midr) * right_act_matrix(xr, md);
                        if (!(lhs == rhs))
                            throw ValidationError(name + ": bimodule actions do not commute");
                    }
    }
}

BiBimodPtr bigraded_regular_bimodule(const BiAlgPtr& a) {
    auto b = std::make_shared<BigradedBimodule>();
    b->left_owner = a;
    b->right_owner = a;
    b->name = a->name + " as bimodule";
    b->basis = a->basis;
    for (const auto& [key, entries] : a->mult) {
        b->left_act[key] = entries;
        b->right_act[key] = entries;
    }
    b->diff = a->diff;
    b->validate();
    return b;
}

GammaBimodule gamma(const BiBimodPtr& m) {
    auto gl = gamma(m->left_owner);
    auto gr = (m->right_owner.get() == m->left_owner.get()) ? gl : gamma(m->right_owner);
    auto cols = gamma_columns(
        m->left_owner->field, m->support(), [&](BiDeg d) { return m->dim(d); },
        [&](BiDeg d) { return m->diff_matrix(d); });
    auto sub = std::make_shared<BigradedBimodule>();
    sub->left_owner = gl.algebra;
    sub->right_owner = gr.algebra;
    sub->name = "Gamma(" + m->name + ")";
    auto col_of = [&](BiDeg d) -> Matrix {
        auto it = cols.find(d);
        if (it != cols.end()) return it->second;
        return Matrix::zero(m->left_owner->field, m->dim(d), 0);
    };
    for (const auto& [d, mat] : cols) {
        if (mat.cols() == 0) continue;
        std::vector<std::string> names;
        for (std::size_t k = 0; k < mat.cols(); ++k)
            names.push_back("gb" + std::to_string(d.first) + "_" + std::to_string(d.second) + "_" +
                            std::to_string(k));
        sub->basis[d] = std::move(names);
    }
    auto restrict_action = [&](bool left) {
        const auto& inc = left ? gl.inclusion.comp : gr.inclusion.comp;
        for (const auto& [md, mmat] : cols)
            for (const auto& [ad, acols] : inc) {
                BiDeg out{md.first + ad.first, md.second + ad.second};
                for (std::size_t s = 0; s < mmat.cols(); ++s)
                    for (std::size_t b = 0; b < acols.cols(); ++b) {
                        BiElem a_in{ad, acols.column(b)};
                        Matrix v = left ? m->left_act_matrix(a_in, md) * mmat.column(s)
                                        : m->right_act_matrix(a_in, md) * mmat.column(s);
                        if (v.is_zero()) continue;
                        auto sol = solve_linear(col_of(out), v);
                        if (!sol)
                            throw ConsistencyError("Gamma(bimodule): not closed under action");
                        for (std::size_t c = 0; c < sol->rows(); ++c)
                            if (!sol->at(c, 0).is_zero()) {
                                if (left)
                                    sub->left_act[{ad, md}].push_back({b, s, c, sol->at(c, 0)});
                                else
                                    sub->right_act[{md, ad}].push_back({s, b, c, sol->at(c, 0)});
                            }
                    }
            }
    };
    restrict_action(true);
    restrict_action(false);
    for (const auto& [d0, mat] : cols) {
        BiDeg up{d0.first + 1, d0.second};
        Matrix im = m->diff_matrix(d0) * mat;
        if (im.is_zero()) continue;
        auto sol = solve_linear(col_of(up), im);
        if (!sol) throw ConsistencyError("Gamma(bimodule): not closed under d");
        sub->diff[d0] = *sol;
    }
    sub->validate();
    GammaBimodule res;
    res.bimodule = sub;
    res.inclusion_cols = std::move(cols);
    return res;
}

namespace {

// Right multiplication by a fixed degree-(0,0) module element, as matrices
// B^{d} -> M^{d}.
std::map<BiDeg, Matrix> right_mult_by(const BiModPtr& m, const Matrix& w_coords,
                                      const BiAlgPtr& b) {
    std::map<BiDeg, Matrix> f;
    for (const auto& d : b->support()) {
        Matrix col(b->field, m->dim(d), b->dim(d));
        for (std::size_t x = 0; x < b->dim(d); ++x) {
            BiElem xb = b->basis_elem(d, x);
            Matrix v = m->act_matrix(xb, {0, 0}) * w_coords;
            for (std::size_t r0 = 0; r0 < v.rows(); ++r0) col.at(r0, x) = v.at(r0, 0);
        }
        f[d] = col;
    }
    return f;
}

}  // namespace

MultiplicationQuasiIsos multiplication_quasi_isos(const BiAlgPtr& b, const BiModPtr& m,
                                                  const BigradedModMorphism& f) {
    MultiplicationQuasiIsos res;
    f.validate();
    auto breg = regular_bimodule_as_module(b);
    BiQuasiIsoReport frep = bigraded_module_quasi_iso(breg, m, f.comp);
    if (!frep.is_quasi_iso) {
        res.failure = "f is not a quasi-isomorphism: " + frep.failure;
        return res;
    }
    res.w = BiElem{{0, 0}, f.matrix({0, 0}) * b->unit};
    if (!(m->diff_matrix({0, 0}) * res.w.coords).is_zero()) {
        res.failure = "w = f(1) is not a cocycle";
        return res;
    }

    auto wmaps = right_mult_by(m, res.w.coords, b);
    res.on_b = bigraded_module_quasi_iso(breg, m, wmaps);

    // Restriction Gamma(B) -> Gamma(M) in the kept bases.
    auto gb = gamma(b);
    auto gm = gamma(m);
    std::map<BiDeg, Matrix> gmaps;
    for (const auto& [d, bcols] : gb.inclusion.comp) {
        Matrix img = wmaps.count(d) ? wmaps.at(d) * bcols
                                    : Matrix::zero(b->field, m->dim(d), bcols.cols());
        Matrix kept = gm.inclusion_cols.count(d) ? gm.inclusion_cols.at(d)
                                                 : Matrix::zero(b->field, m->dim(d), 0);
        auto sol = solve_linear(kept, img);
        if (!sol) throw ConsistencyError("w-multiplication leaves Gamma(M)");
        gmaps[d] = *sol;
    }
    auto gbm = regular_bimodule_as_module(gb.algebra);
    res.on_gamma = bigraded_module_quasi_iso(gbm, gm.module, gmaps);

    // Induced map H(B) -> H(M); both differentials vanish, so the evidence is
    // a direct rank table on representatives.
    auto HB = bigraded_cohomology(b);
    res.on_h.is_quasi_iso = true;
    {
        std::map<BiDeg, CohomologyData::Degree> hm;
        auto supp = m->support();
        if (!supp.empty()) {
            int ilo = supp.front().first, ihi = supp.front().first;
            for (const auto& d : supp) {
                ilo = std::min(ilo, d.first);
                ihi = std::max(ihi, d.first);
            }
            for (int j : columns_of(supp)) {
                Complex col = column_complex(
                    b->field, ilo, ihi, true, j, [&](BiDeg d) { return m->dim(d); },
                    [&](BiDeg d) { return m->diff_matrix(d); });
                CohomologyData data = cohomology_data(col);
                for (int i = data.lo; i <= data.hi; ++i)
                    if (data.h_dim(i) > 0)
                        hm[{i, j}] = data.at[static_cast<std::size_t>(i - data.lo)];
            }
        }
        std::set<BiDeg> degs;
        for (const auto& [d, c] : HB.classes) degs.insert(d);
        for (const auto& [d, c] : hm) degs.insert(d);
        for (const auto& d : degs) {
            std::size_t hb = HB.classes.count(d) ? HB.classes.at(d).reps.cols() : 0;
            std::size_t hmd = hm.count(d) ? hm.at(d).reps.cols() : 0;
            std::size_t rk = 0;
            if (hb > 0 && hmd > 0) {
                Matrix mapped = wmaps.at(d) * HB.classes.at(d).reps;
                const auto& dg = hm.at(d);
                Matrix span = Matrix::hcat(dg.image, dg.reps);
                auto sol = solve_linear(span, mapped);
                if (!sol) throw ConsistencyError("H-level multiplication not a cocycle map");
                Matrix cls(b->field, dg.reps.cols(), mapped.cols());
                for (std::size_t i2 = 0; i2 < dg.reps.cols(); ++i2)
                    for (std::size_t j2 = 0; j2 < mapped.cols(); ++j2)
                        cls.at(i2, j2) = sol->at(dg.image.cols() + i2, j2);
                rk = rank(cls);
            }
            res.on_h.rows.push_back({d, hb, hmd, rk});
            if (!(rk == hb && rk == hmd)) {
                res.on_h.is_quasi_iso = false;
                if (res.on_h.failure.empty())
                    res.on_h.failure = "H-level fails at (" + std::to_string(d.first) + "," +
                                       std::to_string(d.second) + ")";
            }
        }
    }
    res.pass = res.on_b.is_quasi_iso && res.on_gamma.is_quasi_iso && res.on_h.is_quasi_iso;
    if (!res.pass && res.failure.empty()) res.failure = "a multiplication map fails";
    return res;
}

}  // namespace dgforge
