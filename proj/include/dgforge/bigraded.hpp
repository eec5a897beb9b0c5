#pragma once

#include "dgforge/dg_module.hpp"

namespace dgforge {

using BiDeg = std::pair<int, int>;  // (i, j); the differential has bidegree (1, 0)

struct BiElem {
    BiDeg deg{0, 0};
    Matrix coords;
    bool is_zero() const { return coords.is_zero(); }
};

// Z^2-graded algebra with differential of bidegree (1,0) and Leibniz sign
// (-1)^i for a in R^{ij}. Components are stored sparsely; missing bidegrees
// are zero. `bounded` has the same meaning as for DGAlgebra, with the i-axis
// truncated at the top when false.
class BigradedDGAlgebra {
  public:
    Field field;
    std::string name;
    int ilo = 0, ihi = 0, jlo = 0, jhi = 0;
    bool bounded = true;
    std::map<BiDeg, std::vector<std::string>> basis;
    std::map<std::pair<BiDeg, BiDeg>, std::vector<StructEntry>> mult;
    Matrix unit;  // coordinates at (0,0)
    std::vector<Idempotent> idems;  // at (0,0)
    std::vector<int> weights;       // n_alpha per idempotent; empty if unweighted
    std::map<BiDeg, Matrix> diff;   // (i,j) -> (i+1,j)

    bool in_window(BiDeg d) const {
        return d.first >= ilo && d.first <= ihi && d.second >= jlo && d.second <= jhi;
    }
    std::size_t dim(BiDeg d) const;
    const std::string& basis_name(BiDeg d, std::size_t k) const { return basis.at(d)[k]; }
    BiElem zero(BiDeg d) const { return BiElem{d, Matrix::zero(field, dim(d), 1)}; }
    BiElem basis_elem(BiDeg d, std::size_t k) const;
    BiElem unit_elem() const { return BiElem{{0, 0}, unit}; }
    Matrix diff_matrix(BiDeg d) const;
    BiElem mul(const BiElem& x, const BiElem& y) const;
    BiElem d(const BiElem& x) const;
    Matrix left_mult_matrix(const BiElem& x, BiDeg d) const;
    Matrix right_mult_matrix(const BiElem& x, BiDeg d) const;

    std::vector<BiDeg> support() const;
    void validate() const;
};

using BiAlgPtr = std::shared_ptr<const BigradedDGAlgebra>;

// Declarative construction from named basis elements.
struct BigradedSpec {
    Field field;
    std::string name;
    bool bounded = true;
    std::vector<std::tuple<int, int, std::string>> basis;  // (i, j, name)
    std::vector<ProductRule> products;
    std::string unit_name;
    std::vector<std::pair<std::string, Scalar>> unit_combination;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, Scalar>>>> idempotents;
    std::vector<int> weights;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, Scalar>>>> differential;
};

BiAlgPtr make_bigraded_algebra(const BigradedSpec& spec);

// Right dgg module over a bigraded algebra.
class BigradedDGModule {
  public:
    BiAlgPtr owner;
    std::string name;
    std::map<BiDeg, std::vector<std::string>> basis;
    std::map<std::pair<BiDeg, BiDeg>, std::vector<StructEntry>> act;  // (mdeg, adeg)
    std::map<BiDeg, Matrix> diff;

    std::size_t dim(BiDeg d) const;
    Matrix diff_matrix(BiDeg d) const;
    Matrix act_matrix(const BiElem& a, BiDeg mdeg) const;
    std::vector<BiDeg> support() const;
    void validate() const;
};

using BiModPtr = std::shared_ptr<const BigradedDGModule>;

BiModPtr regular_bimodule_as_module(const BiAlgPtr& a);  // A over itself

// Morphism of bigraded algebras (per-bidegree matrices).
struct BigradedAlgMorphism {
    BiAlgPtr source, target;
    std::map<BiDeg, Matrix> comp;
    Matrix matrix(BiDeg d) const;
    void validate() const;  // unital, multiplicative, commutes with d
};

struct BigradedModMorphism {
    BiModPtr source, target;
    std::map<BiDeg, Matrix> comp;
    Matrix matrix(BiDeg d) const;
    void validate() const;
};

// Purity: nonzero only on the line j = i + w.
struct PurityResult {
    bool pure = false;
    int weight = 0;
    std::optional<BiDeg> counterexample;
};

PurityResult check_pure(const std::map<BiDeg, std::size_t>& dim_table, int w);

// Per-bidegree cohomology dimensions (certified through ihi-1 when truncated).
std::map<BiDeg, std::size_t> cohomology_table(const BigradedDGAlgebra& r);

// Per-bidegree quasi-isomorphism evidence.
struct BiRankRow {
    BiDeg deg;
    std::size_t h_source, h_target, rank_induced;
};

struct BiQuasiIsoReport {
    bool is_quasi_iso = false;
    std::vector<BiRankRow> rows;
    std::string failure;
};

BiQuasiIsoReport bigraded_quasi_iso(const BigradedAlgMorphism& f);
BiQuasiIsoReport bigraded_module_quasi_iso(const BiModPtr& src, const BiModPtr& tgt,
                                           const std::map<BiDeg, Matrix>& f);

// Gamma truncation of a module: full above the diagonal, cocycles on it,
// zero below; returns the submodule over gamma(owner) and its inclusion.
struct GammaModule {
    BiModPtr module;              // over gamma(owner)
    std::map<BiDeg, Matrix> inclusion_cols;  // columns: the kept subspace of each component
};

struct GammaAlgebra {
    BiAlgPtr algebra;
    BigradedAlgMorphism inclusion;
};

GammaAlgebra gamma(const BiAlgPtr& r);
GammaModule gamma(const BiModPtr& m);

// H(R) as a bigraded algebra with zero differential, plus class projections.
struct BigradedCohomology {
    BiAlgPtr algebra;
    // For each bidegree with nonzero H: cocycle/image/reps data of the column complex.
    std::map<BiDeg, CohomologyData::Degree> classes;
    Matrix h_coords(BiDeg d, const Matrix& cocycle) const;
    std::map<BiDeg, std::size_t> dims() const;
};

BigradedCohomology bigraded_cohomology(const BiAlgPtr& r);

// Formality witness via Gamma: requires H(R) pure of weight 0.
struct FormalityWitness {
    bool pass = false;
    PurityResult purity;          // of H(R)
    std::string failure;
    BiAlgPtr gamma_algebra;
    BiAlgPtr h_algebra;
    BiQuasiIsoReport inclusion;   // Gamma(R) -> R
    BiQuasiIsoReport projection;  // Gamma(R) -> H(R)
};

FormalityWitness formality_witness(const BiAlgPtr& r);

// Weighted Sub construction for an idempotent-decomposed algebra: the
// subalgebra keeps block (a,b) at bidegree (i,j) fully when i+n_a-n_b < j,
// its cocycles when equal, nothing when greater.
struct WeightedSubWitness {
    bool pass = false;
    std::string failure;
    // first violated block and bidegree when purity fails
    std::optional<std::pair<std::pair<std::size_t, std::size_t>, BiDeg>> impure_block;
    BiAlgPtr sub_algebra;
    BiAlgPtr h_algebra;
    BiQuasiIsoReport inclusion;   // S -> R
    BiQuasiIsoReport projection;  // S -> H(R)
};

WeightedSubWitness weighted_sub_witness(const BiAlgPtr& r);

// Bigraded bimodule over a pair of dgg algebras.
class BigradedBimodule {
  public:
    BiAlgPtr left_owner, right_owner;
    std::string name;
    std::map<BiDeg, std::vector<std::string>> basis;
    std::map<std::pair<BiDeg, BiDeg>, std::vector<StructEntry>> left_act;   // (adeg, mdeg)
    std::map<std::pair<BiDeg, BiDeg>, std::vector<StructEntry>> right_act;  // (mdeg, rdeg)
    std::map<BiDeg, Matrix> diff;

    std::size_t dim(BiDeg d) const;
    Matrix diff_matrix(BiDeg d) const;
    Matrix left_act_matrix(const BiElem& a, BiDeg mdeg) const;
    Matrix right_act_matrix(const BiElem& r, BiDeg mdeg) const;
    std::vector<BiDeg> support() const;
    void validate() const;
};

using BiBimodPtr = std::shared_ptr<const BigradedBimodule>;

BiBimodPtr bigraded_regular_bimodule(const BiAlgPtr& a);

struct GammaBimodule {
    BiBimodPtr bimodule;  // over (gamma(A), gamma(B))
    std::map<BiDeg, Matrix> inclusion_cols;
};

GammaBimodule gamma(const BiBimodPtr& m);

// The three multiplication quasi-isomorphisms attached to a module
// quasi-isomorphism f : B -> M: by w = f(1) on B, on Gamma(B), and on H(B).
struct MultiplicationQuasiIsos {
    bool pass = false;
    std::string failure;
    BiElem w;  // f(1), a degree-(0,0) cocycle of M
    BiQuasiIsoReport on_b;      // B -> M
    BiQuasiIsoReport on_gamma;  // Gamma(B) -> Gamma(M)
    BiQuasiIsoReport on_h;      // H(B) -> H(M)
};

MultiplicationQuasiIsos multiplication_quasi_isos(const BiAlgPtr& b, const BiModPtr& m,
                                                  const BigradedModMorphism& f);

}  // namespace dgforge
