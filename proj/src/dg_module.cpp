#include "dgforge/dg_module.hpp"

#include <algorithm>
#include <sstream>

namespace dgforge {

Matrix Complex::diff_matrix(int d) const {
    auto it = diff.find(d);
    if (it != diff.end()) return it->second;
    return Matrix::zero(field, dim(d + 1), dim(d));
}

std::size_t CohomologyData::h_dim(int d) const {
    if (d < lo || d > hi) return 0;
    return at[static_cast<std::size_t>(d - lo)].reps.cols();
}

Matrix CohomologyData::h_coords(int d, const Matrix& v) const {
    const Degree& dg = at[static_cast<std::size_t>(d - lo)];
    if (!columns_contained(dg.cocycles, v))
        throw ConsistencyError("h_coords applied to a non-cocycle");
    // v = image * y + reps * h; we want h.
    Matrix span = Matrix::hcat(dg.image, dg.reps);
    auto sol = solve_linear(span, v);
    if (!sol) throw ConsistencyError("cocycle not expressible in image+representatives");
    Matrix h(field, dg.reps.cols(), v.cols());
    for (std::size_t i = 0; i < dg.reps.cols(); ++i)
        for (std::size_t j = 0; j < v.cols(); ++j)
            h.at(i, j) = sol->at(dg.image.cols() + i, j);
    return h;
}

std::vector<std::size_t> CohomologyData::h_dims_table() const {
    std::vector<std::size_t> t;
    for (int d = lo; d <= hi; ++d) t.push_back(h_dim(d));
    return t;
}

CohomologyData cohomology_data(const Complex& c) {
    CohomologyData res;
    res.field = c.field;
    // A truncated complex certifies H only through hi-1 (ker d_i needs one
    // degree of look-ahead); a bounded complex is exact on the full window.
    res.lo = c.lo;
    res.hi = c.bounded ? c.hi : c.hi - 1;
    if (c.lo == c.hi) res.hi = c.lo;  // single-degree complex: d is zero anyway
    for (int d = res.lo; d <= res.hi; ++d) {
        CohomologyData::Degree deg;
        deg.cocycles = kernel_basis(c.diff_matrix(d));
        Matrix prev = (d - 1 >= c.lo) ? c.diff_matrix(d - 1)
                                      : Matrix::zero(c.field, c.dim(d), 0);
        deg.image = column_space_basis(prev);
        // Extend the image basis to a basis of the cocycles; the pivots of
        // [image | cocycles] landing in the cocycle block are representatives.
        Matrix probe = Matrix::hcat(deg.image, deg.cocycles);
        RowReduceResult rr = row_reduce(probe);
        Matrix reps(c.field, c.dim(d), rr.rank - deg.image.cols());
        std::size_t t = 0;
        for (std::size_t p : rr.pivots)
            if (p >= deg.image.cols())
                reps.set_column(t++, deg.cocycles.column(p - deg.image.cols()));
        deg.reps = reps;
        res.at.push_back(std::move(deg));
    }
    return res;
}

QuasiIsoReport is_quasi_iso(const Complex& src, const Complex& tgt,
                            const std::map<int, Matrix>& f) {
    QuasiIsoReport rep;
    auto fm = [&](int d) {
        auto it = f.find(d);
        if (it != f.end()) return it->second;
        return Matrix::zero(src.field, tgt.dim(d), src.dim(d));
    };
    int lo = std::min(src.lo, tgt.lo), hi = std::max(src.hi, tgt.hi);
    for (int d = lo; d < hi; ++d) {
        Matrix lhs = tgt.diff_matrix(d) * fm(d);
        Matrix rhs = fm(d + 1) * src.diff_matrix(d);
        if (!(lhs == rhs)) {
            rep.chain_map = false;
            rep.failure = "not a chain map at degree " + std::to_string(d);
            return rep;
        }
    }
    CohomologyData hs = cohomology_data(src), ht = cohomology_data(tgt);
    // A degree is certified when both sides' cohomology is known there: for a
    // truncated complex that is its reported H-window, for a bounded complex
    // every degree (H vanishes outside the support).
    auto src_known = [&](int d) { return src.bounded || d <= hs.hi; };
    auto tgt_known = [&](int d) { return tgt.bounded || d <= ht.hi; };
    int all_lo = std::min(hs.lo, ht.lo), all_hi = std::max(hs.hi, ht.hi);
    rep.certified_lo = all_lo;
    rep.certified_hi = all_hi;
    rep.is_quasi_iso = true;
    for (int d = all_lo; d <= all_hi; ++d) {
        if (!src_known(d) || !tgt_known(d)) {
            rep.window_capped = true;
            rep.certified_hi = std::min(rep.certified_hi, d - 1);
            continue;
        }
        std::size_t a = hs.h_dim(d);
        std::size_t b = ht.h_dim(d);
        std::size_t rk = 0;
        if (a > 0 && b > 0) {
            Matrix reps = hs.at[static_cast<std::size_t>(d - hs.lo)].reps;
            Matrix mapped = fm(d) * reps;
            Matrix classes = ht.h_coords(d, mapped);
            rk = rank(classes);
        }
        rep.rows.push_back({d, a, b, rk});
        if (!(rk == a && rk == b)) {
            rep.is_quasi_iso = false;
            if (rep.failure.empty())
                rep.failure = "cohomology not matched at degree " + std::to_string(d);
        }
    }
    return rep;
}

Matrix DGModule::diff_matrix(int d) const {
    auto it = diff.find(d);
    if (it != diff.end()) return it->second;
    return Matrix::zero(owner->field, dim(d + 1), dim(d));
}

Matrix DGModule::act_matrix(const Elem& a, int mdeg) const {
    Matrix r = Matrix::zero(owner->field, dim(mdeg + a.deg), dim(mdeg));
    auto it = act.find({mdeg, a.deg});
    if (it == act.end()) return r;
    for (const auto& e : it->second) {
        Scalar c = a.coords.at(e.b, 0) * e.coef;
        if (!c.is_zero()) r.at(e.c, e.a) += c;
    }
    return r;
}

Complex DGModule::complex_view() const {
    Complex c;
    c.field = owner->field;
    c.lo = lo;
    c.hi = hi;
    c.bounded = bounded;
    c.dims = dims_;
    c.diff = diff;
    return c;
}

void DGModule::validate() const {
    if (lo > hi) throw ValidationError(name + ": empty module window");
    for (const auto& [d0, m] : diff)
        if (m.rows() != dim(d0 + 1) || m.cols() != dim(d0))
            throw ValidationError(name + ": module differential shape at degree " +
                                  std::to_string(d0));
    for (int d0 = lo; d0 + 2 <= hi; ++d0)
        if (!(diff_matrix(d0 + 1) * diff_matrix(d0)).is_zero())
            throw ValidationError(name + ": module d^2 != 0 at degree " + std::to_string(d0));

    // Unit acts as identity.
    Elem u = owner->unit_elem();
    for (int d0 = lo; d0 <= hi; ++d0)
        if (!(act_matrix(u, d0) == Matrix::identity(owner->field, dim(d0))))
            throw ValidationError(name + ": unit does not act as identity at degree " +
                                  std::to_string(d0));

    // (m a) b = m (ab) on basis triples that stay in both windows.
    for (int md = lo; md <= hi; ++md)
        for (int i = owner->lo; i <= owner->hi; ++i)
            for (int j = owner->lo; j <= owner->hi; ++j) {
                if (!owner->mul_known(i, j)) continue;
                if (!in_window(md + i + j)) continue;
                if (!bounded && md + i > hi) continue;
                for (std::size_t a = 0; a < owner->dim(i); ++a)
                    for (std::size_t b = 0; b < owner->dim(j); ++b) {
                        Elem xa = owner->basis_elem(i, a), xb = owner->basis_elem(j, b);
                        Matrix lhs = act_matrix(xb, md + i) * act_matrix(xa, md);
                        Matrix rhs = act_matrix(owner->mul(xa, xb), md);
                        if (!(lhs == rhs))
                            throw ValidationError(name + ": action not associative on (" +
                                                  owner->basis_name(i, a) + ", " +
                                                  owner->basis_name(j, b) + ") at degree " +
                                                  std::to_string(md));
                    }
            }

    // Module Leibniz rule d(m a) = (dm) a + (-1)^{deg m} m (da).
    for (int md = lo; md <= hi; ++md)
        for (int i = owner->lo; i <= owner->hi; ++i) {
            if (!in_window(md + i + 1)) continue;
            if (!bounded && md + i > hi) continue;
            for (std::size_t a = 0; a < owner->dim(i); ++a) {
                Elem xa = owner->basis_elem(i, a);
                Matrix lhs = diff_matrix(md + i) * act_matrix(xa, md);
                Matrix rhs = act_matrix(xa, md + 1) * diff_matrix(md);
                if (owner->in_window(i + 1)) {
                    Elem da = owner->d(xa);
                    Matrix t = act_matrix(da, md);
                    rhs = (md % 2 == 0) ? rhs + t : rhs - t;
                }
                if (!(lhs == rhs))
                    throw ValidationError(name + ": module Leibniz rule fails for " +
                                          owner->basis_name(i, a) + " at degree " +
                                          std::to_string(md));
            }
        }
}

ModPtr free_module(const AlgPtr& owner, const std::string& label, int shift,
                   const std::string& name) {
    auto m = std::make_shared<DGModule>();
    m->owner = owner;
    m->name = name.empty() ? "{" + std::to_string(shift) + "}e_" + label + "A" : name;
    m->lo = owner->lo - shift;
    m->hi = owner->hi - shift;
    m->bounded = owner->bounded;
    std::map<int, Matrix> slice;  // per module degree: slice basis of e_x A^{deg+shift}
    Elem ex = owner->idempotent_elem(label);
    for (int d = m->lo; d <= m->hi; ++d) {
        Matrix lm = owner->left_mult_matrix(ex, d + shift);
        slice[d] = column_space_basis(lm);
        m->dims_.push_back(slice[d].cols());
    }
    // Action: slice-basis element s, algebra basis a: coords of s*a in the
    // target slice basis.
    for (int d = m->lo; d <= m->hi; ++d)
        for (int j = owner->lo; j <= owner->hi; ++j) {
            if (!m->in_window(d + j) || !owner->mul_known(d + shift, j)) continue;
            auto& entries = m->act[{d, j}];
            for (std::size_t s = 0; s < slice[d].cols(); ++s) {
                Elem sv{d + shift, slice[d].column(s)};
                for (std::size_t b = 0; b < owner->dim(j); ++b) {
                    Elem prod = owner->mul(sv, owner->basis_elem(j, b));
                    auto sol = solve_linear(slice[d + j], prod.coords);
                    if (!sol)
                        throw ConsistencyError("free module action leaves the slice");
                    for (std::size_t c = 0; c < sol->rows(); ++c)
                        if (!sol->at(c, 0).is_zero())
                            entries.push_back({s, b, c, sol->at(c, 0)});
                }
            }
        }
    // Differential: restriction of d_A with the usual shift sign (-1)^shift.
    for (int d = m->lo; d + 1 <= m->hi; ++d) {
        Matrix da = owner->diff_matrix(d + shift) * slice[d];
        auto sol = solve_linear(slice[d + 1], da);
        if (!sol) throw ConsistencyError("free module differential leaves the slice");
        Matrix dm = (shift % 2 == 0) ? *sol : sol->scaled(-Scalar::one(owner->field));
        if (!dm.is_zero()) m->diff[d] = dm;
    }
    m->hp_certified = true;
    m->validate();
    return m;
}

ModuleCohomology cohomology(const ModPtr& m) {
    CohomologyData data = cohomology_data(m->complex_view());
    auto h = std::make_shared<DGModule>();
    h->owner = m->owner;
    h->name = "H(" + m->name + ")";
    h->lo = data.lo;
    h->hi = data.hi;
    h->bounded = m->bounded;
    for (int d = data.lo; d <= data.hi; ++d) h->dims_.push_back(data.h_dim(d));
    // Induced action on representatives (checked well defined: products of
    // cocycles with algebra elements are cocycles by the Leibniz rule).
    for (int d = data.lo; d <= data.hi; ++d)
        for (int j = m->owner->lo; j <= m->owner->hi; ++j) {
            if (d + j < data.lo || d + j > data.hi) continue;
            auto& entries = h->act[{d, j}];
            const Matrix& reps = data.at[static_cast<std::size_t>(d - data.lo)].reps;
            for (std::size_t b = 0; b < m->owner->dim(j); ++b) {
                Elem xa = m->owner->basis_elem(j, b);
                Matrix mapped = m->act_matrix(xa, d) * reps;
                Matrix cls = data.h_coords(d + j, mapped);
                for (std::size_t s = 0; s < cls.cols(); ++s)
                    for (std::size_t c = 0; c < cls.rows(); ++c)
                        if (!cls.at(c, s).is_zero()) entries.push_back({s, b, c, cls.at(c, s)});
            }
        }
    h->validate();
    return {h, std::move(data)};
}

AlgebraCohomology cohomology(const AlgPtr& a) {
    Complex cx;
    cx.field = a->field;
    cx.lo = a->lo;
    cx.hi = a->hi;
    cx.bounded = a->bounded;
    cx.dims = a->dims_table();
    cx.diff = a->diff;
    CohomologyData data = cohomology_data(cx);

    auto h = std::make_shared<DGAlgebra>();
    h->field = a->field;
    h->name = "H(" + a->name + ")";
    h->lo = data.lo;
    h->hi = data.hi;
    h->bounded = a->bounded;
    for (int d = data.lo; d <= data.hi; ++d) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < data.h_dim(d); ++i)
            names.push_back("h" + std::to_string(d) + "_" + std::to_string(i));
        h->basis_names.push_back(std::move(names));
    }
    auto reps_of = [&](int d) -> const Matrix& {
        return data.at[static_cast<std::size_t>(d - data.lo)].reps;
    };
    for (int i = data.lo; i <= data.hi; ++i)
        for (int j = data.lo; j <= data.hi; ++j) {
            if (i + j < data.lo || i + j > data.hi) continue;
            if (!a->mul_known(i, j)) continue;
            auto& entries = h->mult[{i, j}];
            for (std::size_t x = 0; x < data.h_dim(i); ++x)
                for (std::size_t y = 0; y < data.h_dim(j); ++y) {
                    Elem ex{i, reps_of(i).column(x)}, ey{j, reps_of(j).column(y)};
                    Matrix cls = data.h_coords(i + j, a->mul(ex, ey).coords);
                    for (std::size_t c = 0; c < cls.rows(); ++c)
                        if (!cls.at(c, 0).is_zero()) entries.push_back({x, y, c, cls.at(c, 0)});
                }
        }
    h->unit = data.h_coords(0, a->unit);
    for (const auto& e : a->idems)
        h->idems.push_back({e.label, data.h_coords(0, e.coords)});
    h->validate_core();
    return {h, std::move(data)};
}

QuasiIsoReport is_quasi_iso(const DGAMorphism& f) {
    Complex s, t;
    s.field = f.source->field;
    s.lo = f.source->lo;
    s.hi = f.source->hi;
    s.bounded = f.source->bounded;
    s.dims = f.source->dims_table();
    s.diff = f.source->diff;
    t.field = f.target->field;
    t.lo = f.target->lo;
    t.hi = f.target->hi;
    t.bounded = f.target->bounded;
    t.dims = f.target->dims_table();
    t.diff = f.target->diff;
    return is_quasi_iso(s, t, f.comp);
}

Matrix DGModuleMorphism::matrix(int d) const {
    auto it = comp.find(d);
    if (it != comp.end()) return it->second;
    return Matrix::zero(source->owner->field, target->dim(d), source->dim(d));
}

void DGModuleMorphism::validate() const {
    if (source->owner.get() != target->owner.get())
        throw ValidationError("module morphism endpoints have different owners");
    const auto& a = source->owner;
    for (int d = std::min(source->lo, target->lo); d < std::max(source->hi, target->hi); ++d) {
        Matrix lhs = target->diff_matrix(d) * matrix(d);
        Matrix rhs = matrix(d + 1) * source->diff_matrix(d);
        if (!(lhs == rhs))
            throw ValidationError("module morphism not a chain map at degree " +
                                  std::to_string(d));
    }
    for (int d = source->lo; d <= source->hi; ++d)
        for (int j = a->lo; j <= a->hi; ++j) {
            if (!source->in_window(d + j) || !target->in_window(d + j)) continue;
            for (std::size_t b = 0; b < a->dim(j); ++b) {
                Elem xa = a->basis_elem(j, b);
                Matrix lhs = matrix(d + j) * source->act_matrix(xa, d);
                Matrix rhs = target->act_matrix(xa, d) * matrix(d);
                if (!(lhs == rhs))
                    throw ValidationError("module morphism not A-linear at degree " +
                                          std::to_string(d));
            }
        }
}

QuasiIsoReport is_quasi_iso(const DGModuleMorphism& f) {
    return is_quasi_iso(f.source->complex_view(), f.target->complex_view(), f.comp);
}

Matrix HomComplex::flatten(const HomElement& e) const {
    std::size_t total = 0;
    for (int i = m->lo; i <= m->hi; ++i) total += n->dim(i + e.deg) * m->dim(i);
    Matrix v(m->owner->field, total, 1);
    std::size_t off = 0;
    for (int i = m->lo; i <= m->hi; ++i) {
        std::size_t r = n->dim(i + e.deg), c = m->dim(i);
        auto it = e.blocks.find(i);
        if (it != e.blocks.end())
            for (std::size_t x = 0; x < r; ++x)
                for (std::size_t y = 0; y < c; ++y) v.at(off + x * c + y, 0) = it->second.at(x, y);
        off += r * c;
    }
    return v;
}

Matrix HomComplex::coords(const HomElement& e) const {
    const auto& bas = basis[static_cast<std::size_t>(e.deg - cx.lo)];
    Matrix span(m->owner->field, flatten(e).rows(), bas.size());
    for (std::size_t k = 0; k < bas.size(); ++k) span.set_column(k, flatten(bas[k]));
    auto sol = solve_linear(span, flatten(e));
    if (!sol) throw ConsistencyError("hom element not in the computed basis span");
    return *sol;
}

HomElement HomComplex::element(int t, const Matrix& coeffs) const {
    const auto& bas = basis[static_cast<std::size_t>(t - cx.lo)];
    HomElement e;
    e.deg = t;
    for (int i = m->lo; i <= m->hi; ++i) {
        if (n->dim(i + t) == 0 || m->dim(i) == 0) continue;
        Matrix blk = Matrix::zero(m->owner->field, n->dim(i + t), m->dim(i));
        for (std::size_t k = 0; k < bas.size(); ++k) {
            auto it = bas[k].blocks.find(i);
            if (it == bas[k].blocks.end()) continue;
            blk = blk + it->second.scaled(coeffs.at(k, 0));
        }
        e.blocks[i] = blk;
    }
    return e;
}

HomElement HomComplex::identity() const {
    HomElement e;
    e.deg = 0;
    for (int i = m->lo; i <= m->hi; ++i)
        if (m->dim(i) > 0) e.blocks[i] = Matrix::identity(m->owner->field, m->dim(i));
    return e;
}

HomElement HomComplex::compose(const HomElement& f, const HomElement& g) const {
    HomElement r;
    r.deg = f.deg + g.deg;
    for (const auto& [i, gb] : g.blocks) {
        auto it = f.blocks.find(i + g.deg);
        if (it == f.blocks.end()) continue;
        Matrix prod = it->second * gb;
        if (!prod.is_zero()) r.blocks[i] = prod;
    }
    return r;
}

HomComplex hom_complex(const ModPtr& m, const ModPtr& n) {
    if (m->owner.get() != n->owner.get())
        throw ValidationError("hom complex requires a common owner algebra");
    const auto& alg = m->owner;
    const Field& f = alg->field;
    HomComplex hc;
    hc.m = m;
    hc.n = n;
    hc.cx.field = f;
    hc.cx.lo = n->lo - m->hi;
    hc.cx.hi = n->hi - m->lo;
    hc.cx.bounded = m->bounded && n->bounded;

    for (int t = hc.cx.lo; t <= hc.cx.hi; ++t) {
        // Unknowns: blocks F_i, flattened; constraints: A-linearity
        // F_{i+j}(x * a) = F_i(x) * a whenever every piece is in-window.
        std::vector<std::size_t> offsets;
        std::size_t total = 0;
        for (int i = m->lo; i <= m->hi; ++i) {
            offsets.push_back(total);
            total += n->dim(i + t) * m->dim(i);
        }
        std::vector<Matrix> rows;
        std::size_t nrows = 0;
        auto unknown = [&](int i, std::size_t x, std::size_t y) {
            return offsets[static_cast<std::size_t>(i - m->lo)] + x * m->dim(i) + y;
        };
        for (int i = m->lo; i <= m->hi; ++i)
            for (int j = alg->lo; j <= alg->hi; ++j) {
                // Windows are truncated at the top only: components above hi
                // are unknown for non-bounded modules, components below lo are
                // genuinely zero. A constraint is skipped when it touches an
                // unknown component, and kept (with vanished terms dropped)
                // when the component is a genuine zero.
                if (!m->bounded && i + j > m->hi) continue;
                if (!n->bounded && (i + t > n->hi || i + j + t > n->hi)) continue;
                if (!n->in_window(i + j + t)) continue;  // target is zero: vacuous
                for (std::size_t b = 0; b < alg->dim(j); ++b) {
                    Elem xa = alg->basis_elem(j, b);
                    Matrix actm = m->act_matrix(xa, i);       // M^i -> M^{i+j}
                    Matrix actn = n->act_matrix(xa, i + t);   // N^{i+t} -> N^{i+j+t}
                    // For each basis x of M^i and output coordinate r of
                    // N^{i+j+t}: sum_z F_{i+j}[r,z] actm[z,x] - sum_w actn[r,w] F_i[w,x] = 0.
                    for (std::size_t x = 0; x < m->dim(i); ++x)
                        for (std::size_t r = 0; r < n->dim(i + j + t); ++r) {
                            Matrix row(f, 1, total);
                            bool nonzero = false;
                            for (std::size_t z = 0; z < m->dim(i + j); ++z)
                                if (!actm.at(z, x).is_zero()) {
                                    row.at(0, unknown(i + j, r, z)) += actm.at(z, x);
                                    nonzero = true;
                                }
                            for (std::size_t w = 0; w < n->dim(i + t); ++w)
                                if (!actn.at(r, w).is_zero()) {
                                    row.at(0, unknown(i, w, x)) -= actn.at(r, w);
                                    nonzero = true;
                                }
                            if (nonzero) {
                                rows.push_back(row);
                                ++nrows;
                            }
                        }
                }
            }
        Matrix sys(f, nrows, total);
        for (std::size_t r = 0; r < nrows; ++r)
            for (std::size_t c = 0; c < total; ++c) sys.at(r, c) = rows[r].at(0, c);
        Matrix ker = total == 0 ? Matrix(f, 0, 0) : kernel_basis(sys);
        std::vector<HomElement> bas;
        for (std::size_t k = 0; k < ker.cols(); ++k) {
            HomElement e;
            e.deg = t;
            for (int i = m->lo; i <= m->hi; ++i) {
                std::size_t r = n->dim(i + t), c = m->dim(i);
                if (r == 0 || c == 0) continue;
                Matrix blk(f, r, c);
                bool nz = false;
                for (std::size_t x = 0; x < r; ++x)
                    for (std::size_t y = 0; y < c; ++y) {
                        blk.at(x, y) = ker.at(unknown(i, x, y), k);
                        nz = nz || !blk.at(x, y).is_zero();
                    }
                if (nz) e.blocks[i] = blk;
            }
            bas.push_back(std::move(e));
        }
        hc.cx.dims.push_back(bas.size());
        hc.basis.push_back(std::move(bas));
    }

    // Differential d f = d_N o f - (-1)^t f o d_M expressed in the bases.
    for (int t = hc.cx.lo; t < hc.cx.hi; ++t) {
        const auto& bas = hc.basis[static_cast<std::size_t>(t - hc.cx.lo)];
        if (bas.empty()) continue;
        std::size_t tgt_dim = hc.cx.dim(t + 1);
        Matrix dm(f, tgt_dim, bas.size());
        const auto& tgt_bas = hc.basis[static_cast<std::size_t>(t + 1 - hc.cx.lo)];
        Matrix span(f, hc.flatten(HomElement{t + 1, {}}).rows(), tgt_bas.size());
        for (std::size_t k = 0; k < tgt_bas.size(); ++k) span.set_column(k, hc.flatten(tgt_bas[k]));
        for (std::size_t k = 0; k < bas.size(); ++k) {
            HomElement df;
            df.deg = t + 1;
            for (int i = m->lo; i <= m->hi; ++i) {
                Matrix blk = Matrix::zero(f, n->dim(i + t + 1), m->dim(i));
                auto it = bas[k].blocks.find(i);
                if (it != bas[k].blocks.end()) blk = blk + n->diff_matrix(i + t) * it->second;
                auto it2 = bas[k].blocks.find(i + 1);
                if (it2 != bas[k].blocks.end()) {
                    Matrix term = it2->second * m->diff_matrix(i);
                    blk = (t % 2 == 0) ? blk - term : blk + term;
                }
                if (!blk.is_zero()) df.blocks[i] = blk;
            }
            auto sol = solve_linear(span, hc.flatten(df));
            if (!sol)
                throw ConsistencyError("hom complex differential leaves the component");
            dm.set_column(k, *sol);
        }
        if (!dm.is_zero()) hc.cx.diff[t] = dm;
    }
    return hc;
}

AlgPtr end_dg_algebra(const ModPtr& m) {
    HomComplex hc = hom_complex(m, m);
    auto alg = std::make_shared<DGAlgebra>();
    alg->field = m->owner->field;
    alg->name = "End(" + m->name + ")";
    alg->lo = hc.cx.lo;
    alg->hi = hc.cx.hi;
    alg->bounded = hc.cx.bounded;
    for (int t = hc.cx.lo; t <= hc.cx.hi; ++t) {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < hc.cx.dim(t); ++i)
            names.push_back("f" + std::to_string(t) + "_" + std::to_string(i));
        alg->basis_names.push_back(std::move(names));
    }
    alg->diff = hc.cx.diff;
    for (int i = hc.cx.lo; i <= hc.cx.hi; ++i)
        for (int j = hc.cx.lo; j <= hc.cx.hi; ++j) {
            if (i + j < hc.cx.lo || i + j > hc.cx.hi) continue;
            auto& entries = alg->mult[{i, j}];
            const auto& bi = hc.basis[static_cast<std::size_t>(i - hc.cx.lo)];
            const auto& bj = hc.basis[static_cast<std::size_t>(j - hc.cx.lo)];
            for (std::size_t a = 0; a < bi.size(); ++a)
                for (std::size_t b = 0; b < bj.size(); ++b) {
                    Matrix cls = hc.coords(hc.compose(bi[a], bj[b]));
                    for (std::size_t c = 0; c < cls.rows(); ++c)
                        if (!cls.at(c, 0).is_zero()) entries.push_back({a, b, c, cls.at(c, 0)});
                }
        }
    alg->unit = hc.coords(hc.identity());
    alg->validate_core();
    return alg;
}

std::size_t derived_hom_dim(const ModPtr& m, const ModPtr& n, int shift) {
    if (!m->hp_certified)
        throw ValidationError(
            "derived Hom refused: source carries no homotopically-projective certificate");
    HomComplex hc = hom_complex(m, n);
    CohomologyData h = cohomology_data(hc.cx);
    if (shift < h.lo || shift > h.hi) return 0;
    return h.h_dim(shift);
}

ModPtr extend_scalars(const ModPtr& m, const DGAMorphism& phi) {
    if (m->owner.get() != phi.source.get())
        throw ValidationError("extend_scalars: module owner differs from morphism source");
    const AlgPtr& B = phi.target;
    const Field& f = B->field;
    auto out = std::make_shared<DGModule>();
    out->owner = B;
    out->name = m->name + " (x) " + B->name;
    out->lo = m->lo + B->lo;
    out->hi = m->bounded && B->bounded ? m->hi + B->hi : m->hi;
    out->bounded = m->bounded && B->bounded;

    // Generators of degree n: (i, mi, bj) with i in M-window, n-i in B-window.
    struct Gen {
        int i;
        std::size_t mi, bj;
    };
    std::map<int, std::vector<Gen>> gens;
    for (int n = out->lo; n <= out->hi; ++n)
        for (int i = m->lo; i <= m->hi; ++i) {
            int j = n - i;
            if (!B->in_window(j)) continue;
            for (std::size_t x = 0; x < m->dim(i); ++x)
                for (std::size_t y = 0; y < B->dim(j); ++y) gens[n].push_back({i, x, y});
        }
    auto gen_index = [&](int n, int i, std::size_t mi, std::size_t bj) -> std::size_t {
        const auto& g = gens[n];
        for (std::size_t k = 0; k < g.size(); ++k)
            if (g[k].i == i && g[k].mi == mi && g[k].bj == bj) return k;
        throw ConsistencyError("generator lookup failed");
    };

    // Relations per degree: (x * a) (x) b  -  x (x) (phi(a) * b).
    std::map<int, Matrix> rel;  // columns = relation vectors in generator coordinates
    for (int n = out->lo; n <= out->hi; ++n) {
        std::vector<Matrix> cols;
        for (int i = m->lo; i <= m->hi; ++i)
            for (int k = m->owner->lo; k <= m->owner->hi; ++k) {
                if (!m->bounded && i + k > m->hi) continue;
                int j = n - i - k;
                if (!B->in_window(j) || !B->mul_known(k, j)) continue;
                for (std::size_t x = 0; x < m->dim(i); ++x)
                    for (std::size_t a = 0; a < m->owner->dim(k); ++a)
                        for (std::size_t y = 0; y < B->dim(j); ++y) {
                            Matrix v(f, gens[n].size(), 1);
                            Elem xa = m->owner->basis_elem(k, a);
                            Matrix ma = m->act_matrix(xa, i);  // column x gives x*a coords
                            for (std::size_t z = 0; z < m->dim(i + k); ++z)
                                if (!ma.at(z, x).is_zero())
                                    v.at(gen_index(n, i + k, z, y), 0) += ma.at(z, x);
                            Elem pa = phi.apply(xa);
                            Elem pb = B->mul(pa, B->basis_elem(j, y));
                            for (std::size_t w = 0; w < B->dim(k + j); ++w)
                                if (!pb.coords.at(w, 0).is_zero())
                                    v.at(gen_index(n, i, x, w), 0) -= pb.coords.at(w, 0);
                            if (!v.is_zero()) cols.push_back(v);
                        }
            }
        Matrix r(f, gens[n].size(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c) r.set_column(c, cols[c]);
        rel[n] = std::move(r);
    }

    // Quotient bases: generators not pivotal in the relation span.
    std::map<int, std::vector<std::size_t>> kept;       // generator indices kept
    std::map<int, Matrix> reduce_map;                   // gens -> kept coordinates
    for (int n = out->lo; n <= out->hi; ++n) {
        RowReduceResult rr = row_reduce(rel[n].transposed());
        std::vector<bool> pivotal(gens[n].size(), false);
        for (std::size_t p : rr.pivots) pivotal[p] = true;
        std::vector<std::size_t>& k = kept[n];
        for (std::size_t g = 0; g < gens[n].size(); ++g)
            if (!pivotal[g]) k.push_back(g);
        // Reduction map onto the kept generators. In RREF every pivot column
        // is a unit column, so each pivotal generator rewrites directly as a
        // combination of kept ones.
        Matrix red(f, k.size(), gens[n].size());
        std::map<std::size_t, std::size_t> kept_pos;
        for (std::size_t t = 0; t < k.size(); ++t) {
            kept_pos[k[t]] = t;
            red.at(t, k[t]) = Scalar::one(f);
        }
        for (std::size_t r0 = 0; r0 < rr.rank; ++r0) {
            std::size_t piv = rr.pivots[r0];
            for (std::size_t g = piv + 1; g < gens[n].size(); ++g) {
                const Scalar& c = rr.reduced.at(r0, g);
                if (c.is_zero() || pivotal[g]) continue;
                red.at(kept_pos[g], piv) -= c;
            }
        }
        reduce_map[n] = std::move(red);
        out->dims_.push_back(k.size());
    }

    // Action of B and the differential, computed on generators then reduced.
    for (int n = out->lo; n <= out->hi; ++n)
        for (int j = B->lo; j <= B->hi; ++j) {
            if (!out->in_window(n + j)) continue;
            auto& entries = out->act[{n, j}];
            for (std::size_t t = 0; t < kept[n].size(); ++t) {
                const Gen& g = gens[n][kept[n][t]];
                for (std::size_t b = 0; b < B->dim(j); ++b) {
                    if (!B->mul_known(n - g.i, j)) continue;
                    Elem bb = B->mul(B->basis_elem(n - g.i, g.bj), B->basis_elem(j, b));
                    Matrix v(f, gens[n + j].size(), 1);
                    for (std::size_t w = 0; w < bb.coords.rows(); ++w)
                        if (!bb.coords.at(w, 0).is_zero())
                            v.at(gen_index(n + j, g.i, g.mi, w), 0) += bb.coords.at(w, 0);
                    Matrix cls = reduce_map[n + j] * v;
                    for (std::size_t c = 0; c < cls.rows(); ++c)
                        if (!cls.at(c, 0).is_zero()) entries.push_back({t, b, c, cls.at(c, 0)});
                }
            }
        }
    for (int n = out->lo; n + 1 <= out->hi; ++n) {
        Matrix dm(f, kept[n + 1].size(), kept[n].size());
        for (std::size_t t = 0; t < kept[n].size(); ++t) {
            const Gen& g = gens[n][kept[n][t]];
            Matrix v(f, gens[n + 1].size(), 1);
            // d(x (x) b) = dx (x) b + (-1)^{deg x} x (x) db
            if (m->in_window(g.i + 1)) {
                Matrix dx = m->diff_matrix(g.i);
                for (std::size_t z = 0; z < m->dim(g.i + 1); ++z)
                    if (!dx.at(z, g.mi).is_zero())
                        v.at(gen_index(n + 1, g.i + 1, z, g.bj), 0) += dx.at(z, g.mi);
            }
            int j = n - g.i;
            if (B->in_window(j + 1)) {
                Matrix db = B->diff_matrix(j);
                for (std::size_t w = 0; w < B->dim(j + 1); ++w)
                    if (!db.at(w, g.bj).is_zero()) {
                        Scalar c = db.at(w, g.bj);
                        if (g.i % 2 != 0) c = -c;
                        v.at(gen_index(n + 1, g.i, g.mi, w), 0) += c;
                    }
            }
            dm.set_column(t, reduce_map[n + 1] * v);
        }
        if (!dm.is_zero()) out->diff[n] = dm;
    }
    out->hp_certified = m->hp_certified;
    out->validate();
    return out;
}

Matrix DGBimodule::diff_matrix(int d) const {
    auto it = diff.find(d);
    if (it != diff.end()) return it->second;
    return Matrix::zero(left_owner->field, dim(d + 1), dim(d));
}

Matrix DGBimodule::left_act_matrix(const Elem& a, int mdeg) const {
    Matrix r = Matrix::zero(left_owner->field, dim(mdeg + a.deg), dim(mdeg));
    auto it = left_act.find({a.deg, mdeg});
    if (it == left_act.end()) return r;
    for (const auto& e : it->second) {
        Scalar c = a.coords.at(e.a, 0) * e.coef;
        if (!c.is_zero()) r.at(e.c, e.b) += c;
    }
    return r;
}

Matrix DGBimodule::right_act_matrix(const Elem& r0, int mdeg) const {
    Matrix r = Matrix::zero(left_owner->field, dim(mdeg + r0.deg), dim(mdeg));
    auto it = right_act.find({mdeg, r0.deg});
    if (it == right_act.end()) return r;
    for (const auto& e : it->second) {
        Scalar c = r0.coords.at(e.b, 0) * e.coef;
        if (!c.is_zero()) r.at(e.c, e.a) += c;
    }
    return r;
}

Complex DGBimodule::complex_view() const {
    Complex c;
    c.field = left_owner->field;
    c.lo = lo;
    c.hi = hi;
    c.bounded = bounded;
    c.dims = dims_;
    c.diff = diff;
    return c;
}

void DGBimodule::validate() const {
    const auto& A = left_owner;
    const auto& R = right_owner;
    for (int d0 = lo; d0 + 2 <= hi; ++d0)
        if (!(diff_matrix(d0 + 1) * diff_matrix(d0)).is_zero())
            throw ValidationError(name + ": bimodule d^2 != 0");
    for (int d0 = lo; d0 <= hi; ++d0) {
        if (!(left_act_matrix(A->unit_elem(), d0) == Matrix::identity(A->field, dim(d0))))
            throw ValidationError(name + ": left unit fails at degree " + std::to_string(d0));
        if (!(right_act_matrix(R->unit_elem(), d0) == Matrix::identity(R->field, dim(d0))))
            throw ValidationError(name + ": right unit fails at degree " + std::to_string(d0));
    }
    // Left Leibniz: d(a m) = (da) m + (-1)^{deg a} a dm.
    for (int md = lo; md <= hi; ++md)
        for (int i = A->lo; i <= A->hi; ++i) {
            if (!in_window(md + i) || !in_window(md + i + 1)) continue;
            for (std::size_t a = 0; a < A->dim(i); ++a) {
                Elem xa = A->basis_elem(i, a);
                Matrix lhs = diff_matrix(md + i) * left_act_matrix(xa, md);
                Matrix rhs = left_act_matrix(xa, md + 1) * diff_matrix(md);
                if (i % 2 != 0) rhs = rhs.scaled(-Scalar::one(A->field));
                if (A->in_window(i + 1)) rhs = rhs + left_act_matrix(A->d(xa), md);
                if (!(lhs == rhs))
                    throw ValidationError(name + ": left Leibniz fails for " +
                                          A->basis_name(i, a));
            }
        }
    // Right Leibniz: d(m r) = (dm) r + (-1)^{deg m} m dr.
    for (int md = lo; md <= hi; ++md)
        for (int i = R->lo; i <= R->hi; ++i) {
            if (!in_window(md + i) || !in_window(md + i + 1)) continue;
            for (std::size_t a = 0; a < R->dim(i); ++a) {
                Elem xr = R->basis_elem(i, a);
                Matrix lhs = diff_matrix(md + i) * right_act_matrix(xr, md);
                Matrix rhs = right_act_matrix(xr, md + 1) * diff_matrix(md);
                if (R->in_window(i + 1)) {
                    Matrix t = right_act_matrix(R->d(xr), md);
                    rhs = (md % 2 == 0) ? rhs + t : rhs - t;
                }
                if (!(lhs == rhs))
                    throw ValidationError(name + ": right Leibniz fails for " +
                                          R->basis_name(i, a));
            }
        }
    // Actions commute: (a m) r = a (m r).
    for (int md = lo; md <= hi; ++md)
        for (int i = A->lo; i <= A->hi; ++i)
            for (int j = R->lo; j <= R->hi; ++j) {
                if (!in_window(md + i) || !in_window(md + j) || !in_window(md + i + j)) continue;
                for (std::size_t a = 0; a < A->dim(i); ++a)
                    for (std::size_t r0 = 0; r0 < R->dim(j); ++r0) {
                        Elem xa = A->basis_elem(i, a), xr = R->basis_elem(j, r0);
                        Matrix lhs = right_act_matrix(xr, md + i) * left_act_matrix(xa, md);
                        Matrix rhs = left_act_matrix(xa, md + j) * right_act_matrix(xr, md);
                        if (!(lhs == rhs))
                            throw ValidationError(name + ": actions do not commute on (" +
                                                  A->basis_name(i, a) + ", " +
                                                  R->basis_name(j, r0) + ")");
                    }
            }
}

BimodPtr regular_bimodule(const AlgPtr& a) {
    auto b = std::make_shared<DGBimodule>();
    b->left_owner = a;
    b->right_owner = a;
    b->name = a->name + " as bimodule";
    b->lo = a->lo;
    b->hi = a->hi;
    b->bounded = a->bounded;
    for (int d = a->lo; d <= a->hi; ++d) b->dims_.push_back(a->dim(d));
    for (const auto& [key, entries] : a->mult) {
        b->left_act[key] = entries;
        b->right_act[key] = entries;
    }
    b->diff = a->diff;
    b->validate();
    return b;
}

Matrix BimoduleMorphism::matrix(int d) const {
    auto it = comp.find(d);
    if (it != comp.end()) return it->second;
    return Matrix::zero(source->left_owner->field, target->dim(d), source->dim(d));
}

void BimoduleMorphism::validate() const {
    const auto& B = source->left_owner;
    const auto& S = source->right_owner;
    for (int d = source->lo; d < source->hi; ++d) {
        if (!target->in_window(d) || !target->in_window(d + 1)) continue;
        if (!(target->diff_matrix(d) * matrix(d) == matrix(d + 1) * source->diff_matrix(d)))
            throw ValidationError("bimodule morphism not a chain map at degree " +
                                  std::to_string(d));
    }
    for (int d = source->lo; d <= source->hi; ++d) {
        for (int i = B->lo; i <= B->hi; ++i) {
            if (!source->in_window(d + i) || !target->in_window(d + i) || !target->in_window(d))
                continue;
            for (std::size_t a = 0; a < B->dim(i); ++a) {
                Elem xb = B->basis_elem(i, a);
                Matrix lhs = matrix(d + i) * source->left_act_matrix(xb, d);
                Matrix rhs = target->left_act_matrix(phi.apply(xb), d) * matrix(d);
                if (!(lhs == rhs))
                    throw ValidationError("bimodule morphism not left-linear over phi");
            }
        }
        for (int j = S->lo; j <= S->hi; ++j) {
            if (!source->in_window(d + j) || !target->in_window(d + j) || !target->in_window(d))
                continue;
            for (std::size_t a = 0; a < S->dim(j); ++a) {
                Elem xs = S->basis_elem(j, a);
                Matrix lhs = matrix(d + j) * source->right_act_matrix(xs, d);
                Matrix rhs = target->right_act_matrix(psi.apply(xs), d) * matrix(d);
                if (!(lhs == rhs))
                    throw ValidationError("bimodule morphism not right-linear over psi");
            }
        }
    }
}

BimoduleWitnessReport bimodule_tensor_equivalence_witness(const BimoduleMorphism& chi,
                                                          const Elem& n0) {
    BimoduleWitnessReport rep;
    const auto& N = chi.source;
    const auto& M = chi.target;
    const auto& S = N->right_owner;
    const auto& R = M->right_owner;
    if (n0.deg != 0) {
        rep.failure = "element is not of degree 0";
        return rep;
    }
    if (N->in_window(1) && !(N->diff_matrix(0) * n0.coords).is_zero()) {
        rep.failure = "element is not a cocycle";
        return rep;
    }
    // f : S -> N, s |-> n0 * s.
    std::map<int, Matrix> fmat;
    for (int d = S->lo; d <= S->hi; ++d) {
        if (!N->in_window(d)) continue;
        Matrix col(S->field, N->dim(d), S->dim(d));
        for (std::size_t b = 0; b < S->dim(d); ++b) {
            Elem xs = S->basis_elem(d, b);
            Matrix v = N->right_act_matrix(xs, 0) * n0.coords;
            for (std::size_t r0 = 0; r0 < v.rows(); ++r0) col.at(r0, b) = v.at(r0, 0);
        }
        fmat[d] = col;
    }
    Complex sc;
    sc.field = S->field;
    sc.lo = S->lo;
    sc.hi = S->hi;
    sc.bounded = S->bounded;
    sc.dims = S->dims_table();
    sc.diff = S->diff;
    rep.s_to_n = is_quasi_iso(sc, N->complex_view(), fmat);

    // g : R -> M, r |-> chi(n0) * r.
    Matrix chin = chi.matrix(0) * n0.coords;
    std::map<int, Matrix> gmat;
    for (int d = R->lo; d <= R->hi; ++d) {
        if (!M->in_window(d)) continue;
        Matrix col(R->field, M->dim(d), R->dim(d));
        for (std::size_t b = 0; b < R->dim(d); ++b) {
            Elem xr = R->basis_elem(d, b);
            Matrix v = M->right_act_matrix(xr, 0) * chin;
            for (std::size_t r0 = 0; r0 < v.rows(); ++r0) col.at(r0, b) = v.at(r0, 0);
        }
        gmat[d] = col;
    }
    Complex rc;
    rc.field = R->field;
    rc.lo = R->lo;
    rc.hi = R->hi;
    rc.bounded = R->bounded;
    rc.dims = R->dims_table();
    rc.diff = R->diff;
    rep.r_to_m = is_quasi_iso(rc, M->complex_view(), gmat);

    rep.pass = rep.s_to_n.is_quasi_iso && rep.r_to_m.is_quasi_iso;
    if (!rep.pass && rep.failure.empty())
        rep.failure = !rep.s_to_n.is_quasi_iso ? "S -> N fails: " + rep.s_to_n.failure
                                               : "R -> M fails: " + rep.r_to_m.failure;
    return rep;
}

}  // namespace dgforge
