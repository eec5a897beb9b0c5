#pragma once

#include "dgforge/graded_algebra.hpp"

namespace dgforge {

// Bare cochain complex view: per-degree dimensions and differentials.
struct Complex {
    Field field;
    int lo = 0, hi = -1;
    bool bounded = false;  // true: supported exactly on the window
    std::vector<std::size_t> dims;
    std::map<int, Matrix> diff;

    bool in_window(int d) const { return d >= lo && d <= hi; }
    std::size_t dim(int d) const {
        return in_window(d) ? dims[static_cast<std::size_t>(d - lo)] : 0;
    }
    Matrix diff_matrix(int d) const;
};

// Cocycle/coboundary data per degree, with representative choices fixed once
// so that induced maps are reproducible.
struct CohomologyData {
    struct Degree {
        Matrix cocycles;  // columns: basis of ker d
        Matrix image;     // columns: basis of im d (from one degree below)
        Matrix reps;      // columns: chosen representatives of H
    };
    Field field;
    int lo = 0, hi = -1;  // degrees with certified cohomology
    std::vector<Degree> at;

    std::size_t h_dim(int d) const;
    // Coordinates of a cocycle's class in the chosen representative basis.
    // Throws ConsistencyError if v is not a cocycle.
    Matrix h_coords(int d, const Matrix& v) const;
    std::vector<std::size_t> h_dims_table() const;
};

// H^i is certified for lo <= i <= hi-1 (computing ker d_i needs one degree of
// look-ahead); the result window records this.
CohomologyData cohomology_data(const Complex& c);

struct QuasiIsoRow {
    int deg;
    std::size_t h_source, h_target, rank_induced;
};

struct QuasiIsoReport {
    bool is_quasi_iso = false;
    bool chain_map = true;
    int certified_lo = 0, certified_hi = -1;
    bool window_capped = false;  // true when the verdict holds only as far as certified
    std::vector<QuasiIsoRow> rows;
    std::string failure;         // first failing degree, when not a quasi-iso
};

// f is given per degree; missing degrees are zero maps.
QuasiIsoReport is_quasi_iso(const Complex& src, const Complex& tgt,
                            const std::map<int, Matrix>& f);

// DG right module over a dg algebra, graded components on a bounded window.
class DGModule {
  public:
    AlgPtr owner;
    std::string name;
    int lo = 0, hi = -1;
    bool bounded = false;  // supported exactly on the window
    std::vector<std::size_t> dims_;
    StructTable act;  // (mdeg, adeg) -> entries (m, a, m'): basis action m * a
    std::map<int, Matrix> diff;
    bool hp_certified = false;  // homotopically projective certificate, set by trusted builders

    bool in_window(int d) const { return d >= lo && d <= hi; }
    std::size_t dim(int d) const {
        return in_window(d) ? dims_[static_cast<std::size_t>(d - lo)] : 0;
    }
    Matrix diff_matrix(int d) const;
    // Matrix of (? * a) : M^mdeg -> M^{mdeg + deg a}.
    Matrix act_matrix(const Elem& a, int mdeg) const;

    Complex complex_view() const;
    void validate() const;
};

using ModPtr = std::shared_ptr<const DGModule>;

// {shift} e_x A as a dg module; homotopically projective by construction.
ModPtr free_module(const AlgPtr& owner, const std::string& label, int shift = 0,
                   const std::string& name = "");

// Cohomology of a module (same owner, zero differential) or algebra.
struct ModuleCohomology {
    ModPtr module;
    CohomologyData data;
};
ModuleCohomology cohomology(const ModPtr& m);

struct AlgebraCohomology {
    AlgPtr algebra;
    CohomologyData data;
};
AlgebraCohomology cohomology(const AlgPtr& a);

QuasiIsoReport is_quasi_iso(const DGAMorphism& f);

// Module morphism over a fixed owner: per-degree matrices.
struct DGModuleMorphism {
    ModPtr source, target;
    std::map<int, Matrix> comp;
    Matrix matrix(int d) const;
    void validate() const;  // A-linear chain map
};

QuasiIsoReport is_quasi_iso(const DGModuleMorphism& f);

// Hom complex of two dg modules over the same algebra: degree-t component is
// the space of graded A-linear maps of degree t, differential
// df = d o f - (-1)^t f o d.
struct HomElement {
    int deg = 0;
    std::map<int, Matrix> blocks;  // F_i : M^i -> N^{i+deg}
};

struct HomComplex {
    ModPtr m, n;
    Complex cx;                                   // flattened complex over the base field
    std::vector<std::vector<HomElement>> basis;   // per hom-degree (index: t - cx.lo)

    Matrix flatten(const HomElement& e) const;
    Matrix coords(const HomElement& e) const;     // coordinates in the chosen basis
    HomElement element(int t, const Matrix& coeffs) const;
    HomElement identity() const;                  // only for m == n windows
    HomElement compose(const HomElement& f, const HomElement& g) const;  // f after g
};

HomComplex hom_complex(const ModPtr& m, const ModPtr& n);

// End complex as a dg algebra with composition product; the identity is the
// unit. Window may contain negative degrees.
AlgPtr end_dg_algebra(const ModPtr& m);

// Hom in the derived category as H^0 of the Hom complex; refuses unless the
// source carries a homotopically-projective certificate.
std::size_t derived_hom_dim(const ModPtr& m, const ModPtr& n, int shift);

// M tensor_A B along phi : A -> B, computed as the honest quotient of
// M (x)_k B by m*a (x) b - m (x) phi(a) b. Exact through degree hi(M).
ModPtr extend_scalars(const ModPtr& m, const DGAMorphism& phi);

// DG bimodule: left module over `left`, right module over `right`.
class DGBimodule {
  public:
    AlgPtr left_owner, right_owner;
    std::string name;
    int lo = 0, hi = -1;
    bool bounded = false;
    std::vector<std::size_t> dims_;
    StructTable left_act;   // (adeg, mdeg) -> entries (a, m, m'): a * m
    StructTable right_act;  // (mdeg, rdeg) -> entries (m, r, m'): m * r
    std::map<int, Matrix> diff;

    bool in_window(int d) const { return d >= lo && d <= hi; }
    std::size_t dim(int d) const {
        return in_window(d) ? dims_[static_cast<std::size_t>(d - lo)] : 0;
    }
    Matrix diff_matrix(int d) const;
    Matrix left_act_matrix(const Elem& a, int mdeg) const;
    Matrix right_act_matrix(const Elem& r, int mdeg) const;
    Complex complex_view() const;
    void validate() const;
};

using BimodPtr = std::shared_ptr<const DGBimodule>;

// A as a bimodule over itself.
BimodPtr regular_bimodule(const AlgPtr& a);

// Morphism of bimodules over a pair of algebra morphisms (phi, psi): source is
// a (B,S)-bimodule, target an (A,R)-bimodule restricted along (phi, psi).
struct BimoduleMorphism {
    BimodPtr source, target;
    DGAMorphism phi, psi;
    std::map<int, Matrix> comp;
    Matrix matrix(int d) const;
    void validate() const;
};

struct BimoduleWitnessReport {
    bool pass = false;
    std::string failure;
    QuasiIsoReport s_to_n;  // s |-> n * s
    QuasiIsoReport r_to_m;  // r |-> chi(n) * r
};

// Verifies the two multiplication maps attached to a degree-0 cocycle n of N.
BimoduleWitnessReport bimodule_tensor_equivalence_witness(const BimoduleMorphism& chi,
                                                          const Elem& n0);

}  // namespace dgforge
