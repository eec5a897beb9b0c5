#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "dgforge/matrix.hpp"

namespace dgforge {

// Homogeneous element: degree plus coordinate column in that degree's basis.
struct Elem {
    int deg = 0;
    Matrix coords;  // column vector

    bool is_zero() const { return coords.is_zero(); }
};

// One structure-constant entry: x_a * y_b contributes coef * z_c.
struct StructEntry {
    std::size_t a, b, c;
    Scalar coef;
};

using StructTable = std::map<std::pair<int, int>, std::vector<StructEntry>>;

struct Idempotent {
    std::string label;
    Matrix coords;  // degree-0 coordinates
};

// Graded algebra over an exact field, finite basis per degree on a bounded
// window [lo, hi], with structure constants recorded for products landing in
// the window. A zero differential makes it an ordinary graded algebra.
//
// Truncation-window semantics: products with total degree outside the window
// are unknown (not zero); every operation reports how far its output is
// certified exact.
class DGAlgebra {
  public:
    Field field;
    std::string name;
    int lo = 0, hi = 0;
    // bounded: the algebra is genuinely supported on [lo, hi]; anything
    // outside is zero. Otherwise the window is a truncation and products or
    // differentials leaving it are unknown, not zero.
    bool bounded = false;
    std::vector<std::vector<std::string>> basis_names;  // index: deg - lo
    StructTable mult;
    Matrix unit;                       // degree-0 coordinates
    std::vector<Idempotent> idems;     // W; may be empty for plain complexes
    std::map<int, Matrix> diff;        // d_i : A^i -> A^{i+1}; absent entries are zero

    bool in_window(int d) const { return d >= lo && d <= hi; }
    std::size_t dim(int d) const {
        return in_window(d) ? basis_names[static_cast<std::size_t>(d - lo)].size() : 0;
    }
    const std::string& basis_name(int d, std::size_t i) const {
        return basis_names[static_cast<std::size_t>(d - lo)][i];
    }
    bool has_zero_differential() const;

    Elem zero(int d) const { return Elem{d, Matrix::zero(field, dim(d), 1)}; }
    Elem basis_elem(int d, std::size_t i) const;
    Elem unit_elem() const { return Elem{0, unit}; }
    std::optional<std::size_t> idempotent_index(const std::string& label) const;
    Elem idempotent_elem(const std::string& label) const;

    bool mul_known(int i, int j) const {
        return bounded || (in_window(i) && in_window(j) && in_window(i + j));
    }
    Elem mul(const Elem& x, const Elem& y) const;        // throws if product degree unknown
    Elem d(const Elem& x) const;                          // zero when deg+1 leaves the window
    Matrix diff_matrix(int d) const;                      // d_d, zero matrix if absent

    // Matrix of (x * ?) : A^j -> A^{i+j} for homogeneous x of degree i.
    Matrix left_mult_matrix(const Elem& x, int j) const;
    // Matrix of (? * x) : A^j -> A^{i+j}.
    Matrix right_mult_matrix(const Elem& x, int j) const;

    // Basis (as columns) of the slice e_x A^k e_y.
    Matrix slice_basis(const std::string& x, int k, const std::string& y) const;

    // Core invariants: dimensions, two-sided unit, associativity, d^2 = 0,
    // Leibniz, idempotent axioms. Throws ValidationError naming the first
    // violated identity.
    void validate_core() const;
    // (P1)-(P3): window starts at 0, degree-0 part splits as a product of
    // base-field copies indexed by the idempotents, d vanishes on A^0.
    void validate_positive() const;

    std::vector<std::size_t> dims_table() const;
};

using AlgPtr = std::shared_ptr<const DGAlgebra>;

// Declarative construction, the cli fixture path.
struct ProductRule {
    std::string a, b;
    std::vector<std::pair<std::string, Scalar>> result;
};

struct DGAlgebraSpec {
    Field field;
    std::string name;
    int lo = 0, hi = 0;
    std::vector<std::pair<int, std::string>> basis;  // (degree, name); names unique
    std::vector<ProductRule> products;               // unspecified pairs multiply to zero
    // Unit: either the name of a single basis element (products with it are
    // auto-filled unless overridden) or an explicit combination.
    std::string unit_name;
    std::vector<std::pair<std::string, Scalar>> unit_combination;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, Scalar>>>> idempotents;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, Scalar>>>> differential;
    bool positively_graded_checks = true;  // run validate_positive()
    bool bounded = false;                  // window is the full support, not a truncation
};

AlgPtr make_dg_algebra(const DGAlgebraSpec& spec);

// The base field as a one-dimensional algebra concentrated in degree zero.
AlgPtr field_algebra(const Field& f);

// Morphism of dg algebras, one matrix per degree of the common window.
struct DGAMorphism {
    AlgPtr source, target;
    std::map<int, Matrix> comp;

    Matrix matrix(int d) const;  // zero matrix when absent
    Elem apply(const Elem& x) const;
    // Unital, multiplicative, commutes with differentials; throws on failure.
    void validate() const;
};

DGAMorphism identity_morphism(const AlgPtr& a);

}  // namespace dgforge
