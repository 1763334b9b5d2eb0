#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "ajchains/homology_engine.hpp"
#include "ajchains/simplicial_core.hpp"
#include "ajchains/thom_cap.hpp"

namespace ajchains {

struct NotGoodTriangulation : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotAdmissible : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotProper : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Face {
    std::string name;
    int codim = 1;  // complex codimension
    Subcomplex cells;
};

// Intersection H_I of the faces in `mask`, as a complex on its own (vertex ids
// are those of the ambient complex).
struct Stratum {
    unsigned mask = 0;
    int codim = 0;
    std::unique_ptr<SimplicialComplex> complex;
    Subcomplex divisor;  // D ∩ H_I
    Chain fundamental;
    int real_dim() const { return complex->dim(); }
};

class FaceConfiguration {
public:
    // fundamental cycle of a stratum given as a complex; the default orients
    // each stratum by fundamental_cycle()
    using CycleProvider = std::function<Chain(unsigned mask, const SimplicialComplex& stratum)>;

    FaceConfiguration(const SimplicialComplex& k, Subcomplex d, std::vector<Face> faces, CycleProvider cycles = {});

    const SimplicialComplex& ambient() const { return *k_; }
    const Subcomplex& divisor() const { return d_; }
    int num_faces() const { return static_cast<int>(faces_.size()); }
    const Face& face(int i) const { return faces_[i]; }

    // nullptr when H_I is empty
    const Stratum* stratum(unsigned mask) const;
    std::vector<unsigned> strata_masks() const;  // nonempty strata, by popcount then mask
    // H_J as a subcomplex of the stratum complex of `within` (J ⊇ within)
    Subcomplex sub_stratum(unsigned within, unsigned mask) const;

    // D and every union of faces and every nonempty H_I full
    void check_good() const;

private:
    const SimplicialComplex* k_;
    Subcomplex d_;
    std::vector<Face> faces_;
    std::map<unsigned, Stratum> strata_;
    std::map<unsigned, std::vector<int>> stratum_vertices_;
};

// dim(σ ∩ (H_J - D)) ≤ dim S - 2 codim(H_J) for every stratum H_J ⊊ H_I,
// with S a subcomplex of the stratum I
bool is_admissible(const FaceConfiguration& cfg, const Subcomplex& s, unsigned within = 0);
bool is_admissible_simplex(const FaceConfiguration& cfg, unsigned within, int dim_s, const Simplex& sigma);
// |γ| and |δγ|, both taken modulo D, are admissible
bool is_delta_admissible(const FaceConfiguration& cfg, const Chain& x, unsigned within = 0);

// basis of AC_k(H_I, D ∩ H_I) in the coordinates of relative_cells(H_I, D ∩ H_I, k)
SparseMatrix admissible_chain_basis(const FaceConfiguration& cfg, unsigned mask, int k);

// Sign of δ on column p of the total complex. The other option is kept only
// so tests can show it fails d² = 0.
enum class TotalSign { column_parity, none };
inline constexpr TotalSign kTotalSign = TotalSign::column_parity;

struct Block {
    unsigned mask = 0;
    int p = 0;
    int chain_degree = 0;
    int offset = 0;
    std::vector<int> cells;  // relative cells of the stratum complex
};

struct ACDoubleComplex {
    // total complex: group j is ⊕_I AC_{dim H_I - (j - #I)}(H_I, D ∩ H_I)
    CochainComplex total;
    // same ambient spaces and differential, identity spans (all chains)
    CochainComplex comparison;
    std::vector<std::vector<Block>> blocks;  // per total degree
    bool comparison_is_complex = false;
    // total-degree -> ambient coordinate of (mask, chain degree, cell)
    int coordinate(int j, unsigned mask, int cell) const;
};

ACDoubleComplex build_ac_double_complex(const FaceConfiguration& cfg, TotalSign sign = kTotalSign);

// AC_*(H_I) -> C_*(H_I) as cochain complexes graded by dim H_I - k
struct ColumnComparison {
    unsigned mask = 0;
    CochainComplex ac, full;
    bool quasi_iso = false;
};
std::vector<ColumnComparison> compare_columns(const FaceConfiguration& cfg);

// Cochains on C(D, K) relative to C(D, K) ∩ (union of faces), integral.
// Computes H^*(X - D, H) since D is full.
CochainComplex complement_pair_complex(const FaceConfiguration& cfg);

struct ComparisonReport {
    std::vector<CohomologyGroup> ac, complement;
    std::vector<ColumnComparison> columns;
    bool columns_quasi_iso = false;
    bool ranks_match = false;
    bool comparison_is_complex = false;
    bool inclusion_quasi_iso = false;  // only meaningful if comparison_is_complex
    bool ok() const { return columns_quasi_iso && ranks_match && (!comparison_is_complex || inclusion_quasi_iso); }
};
ComparisonReport compare_with_complement(const FaceConfiguration& cfg);

// both composites of two face maps on a chain of the ambient complex
struct CommutationReport {
    Chain first_then_second, second_then_first;  // indexed in the stratum {i, j}
    bool equal = false;
};

// Face map ∂_{H_α} from the stratum `mask` to mask | α, with the result
// expressed in the target stratum's indices. Cached per configuration.
class FaceMapCache {
public:
    explicit FaceMapCache(const FaceConfiguration& cfg, ThomSolveOptions opt = {}) : cfg_(&cfg), opt_(opt) {}
    Chain apply(unsigned mask, int alpha, const Chain& x);
    const FaceMap& get(unsigned mask, int alpha);
    const FaceConfiguration& configuration() const { return *cfg_; }

private:
    const FaceConfiguration* cfg_;
    ThomSolveOptions opt_;
    std::map<std::pair<unsigned, int>, std::unique_ptr<FaceMap>> maps_;
};

CommutationReport face_map_commutation_check(const FaceConfiguration& cfg, int i, int j, const Chain& x,
                                             ThomSolveOptions opt = {});
// same, reusing the face maps of `cache` across calls
CommutationReport face_map_commutation_check(FaceMapCache& cache, int i, int j, const Chain& x);

// (ℙ¹)^k with the 2k coordinate faces, D = {some z_i = 1}, strata oriented as
// lower models. Faces are listed as (axis, at infinity); by default z_i = 0 is
// face 2i and z_i = ∞ is face 2i + 1.
FaceConfiguration projective_configuration(int k, std::vector<std::pair<int, bool>> order = {});

}  // namespace ajchains
