#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ajchains {

using Integer = mpz_class;
using Rational = mpq_class;

// sorted by index, no zero entries
using SparseVec = std::vector<std::pair<int, Rational>>;

struct SparseMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<SparseVec> col;

    SparseMatrix() = default;
    SparseMatrix(int r, int c) : rows(r), cols(c), col(c) {}

    static SparseMatrix identity(int n);
    void add(int r, int c, const Rational& v);
    Rational at(int r, int c) const;
    SparseMatrix transpose() const;
    bool is_zero() const;
    size_t nnz() const;
};

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
SparseVec mat_vec(const SparseMatrix& a, const SparseVec& x);
SparseVec axpy(const SparseVec& x, const Rational& s, const SparseVec& y);  // x + s*y
SparseVec scaled(const SparseVec& x, const Rational& s);
SparseMatrix hconcat(const SparseMatrix& a, const SparseMatrix& b);

// Incremental echelon form over Q. Each stored vector has its pivot at its
// smallest index. Optionally carries a tag vector through every reduction.
class Echelon {
public:
    explicit Echelon(int tag_dim = 0) : tag_dim_(tag_dim) {}

    // returns true if v was independent of what is stored (and stores it)
    bool insert(const SparseVec& v, const SparseVec& tag = {});
    // reduce v completely; tag receives the accumulated combination (negated)
    SparseVec reduce(const SparseVec& v, SparseVec* tag = nullptr) const;
    int rank() const { return static_cast<int>(rows_.size()); }
    const std::map<int, int>& pivots() const { return pivot_; }
    const SparseVec& row(int i) const { return rows_[i]; }
    const SparseVec& row_tag(int i) const { return tags_[i]; }

private:
    int tag_dim_;
    std::vector<SparseVec> rows_;
    std::vector<SparseVec> tags_;
    std::map<int, int> pivot_;
};

int rank(const SparseMatrix& m);
int rank_of_columns(const std::vector<SparseVec>& cols);
SparseMatrix kernel_basis(const SparseMatrix& m);

struct NoSolution : std::runtime_error {
    NoSolution() : std::runtime_error("linear system has no solution") {}
};

// Particular solution of A x = b. Free unknowns are set to zero; the order in
// which unknowns become pivots follows `priority` (a permutation of columns)
// when given, so different priorities give different particular solutions.
SparseVec solve(const SparseMatrix& a, const SparseVec& b,
                const std::vector<int>* priority = nullptr);

// ---- integer side

struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Integer> a;

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}
    Integer& operator()(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    const Integer& operator()(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }
    static IntMatrix identity(int n);
    IntMatrix operator*(const IntMatrix& o) const;
    bool operator==(const IntMatrix& o) const = default;
};

struct SmithForm {
    IntMatrix u, d, v;  // u * m * v == d, u and v unimodular
    std::vector<Integer> divisors;  // nonzero diagonal, each divides the next
};

SmithForm smith_normal_form(const IntMatrix& m);

// Nonzero invariant factors of an integer matrix given column-sparse.
// Unit pivots are eliminated sparsely before the dense Smith reduction.
std::vector<Integer> elementary_divisors(const SparseMatrix& m);

// ---- complexes

struct NotAComplex : std::runtime_error {
    explicit NotAComplex(const std::string& s) : std::runtime_error(s) {}
};
struct NotChainMap : std::runtime_error {
    explicit NotChainMap(const std::string& s) : std::runtime_error(s) {}
};

// Cochain complex of subspaces: group j is the column span of span[j] inside an
// ambient space; d[j] maps ambient(j) to ambient(j+1). A plain complex has
// identity spans.
struct CochainComplex {
    int lo = 0;
    std::vector<int> ambient;
    std::vector<SparseMatrix> span;
    std::vector<SparseMatrix> d;
    bool integral = false;  // plain complex with integer differentials

    int hi() const { return lo + static_cast<int>(ambient.size()) - 1; }
    bool has(int j) const { return j >= lo && j <= hi(); }
    static CochainComplex plain(int lo, std::vector<SparseMatrix> d, std::vector<int> dims);
};

struct CohomologyGroup {
    int degree = 0;
    int rank = 0;
    std::vector<Integer> torsion;
    bool torsion_certified = false;
};

void check_complex(const CochainComplex& c);
int group_dimension(const CochainComplex& c, int j);
CohomologyGroup cohomology(const CochainComplex& c, int j);
std::vector<CohomologyGroup> cohomology_all(const CochainComplex& c);

struct CohomologyBasis {
    Echelon boundaries_and_reps{0};
    std::vector<SparseVec> reps;  // ambient cocycles
};

CohomologyBasis cohomology_basis(const CochainComplex& c, int j);

// f[j] maps ambient(j) of src to ambient(j) of dst
using ChainMap = std::vector<SparseMatrix>;

void check_chain_map(const ChainMap& f, const CochainComplex& src, const CochainComplex& dst);
// Matrix of H^j(f) in the computed bases: rows index dst reps, cols src reps.
std::vector<std::vector<Rational>> induced_map_on_cohomology(
    const ChainMap& f, const CochainComplex& src, const CochainComplex& dst, int j);
bool is_quasi_iso(const ChainMap& f, const CochainComplex& src, const CochainComplex& dst);

std::string format_rational(const Rational& q);

}  // namespace ajchains
