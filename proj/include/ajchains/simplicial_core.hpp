#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "ajchains/homology_engine.hpp"

namespace ajchains {

using Simplex = std::vector<int>;  // strictly increasing vertex ids

struct SimplexHash {
    size_t operator()(const Simplex& s) const noexcept {
        size_t h = 1469598103934665603ull;
        for (int v : s) h = (h ^ static_cast<size_t>(v)) * 1099511628211ull;
        return h;
    }
};

struct InvalidSimplex : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotPseudomanifold : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotOrientable : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotFull : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct UnknownTag : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class SimplicialComplex {
public:
    SimplicialComplex() = default;

    // closes the given simplices under faces
    static SimplicialComplex from_simplices(int num_vertices, const std::vector<Simplex>& gens);

    int num_vertices() const { return nverts_; }
    int dim() const { return static_cast<int>(cells_.size()) - 1; }
    int count(int k) const { return k >= 0 && k <= dim() ? static_cast<int>(cells_[k].size()) : 0; }
    const Simplex& simplex(int k, int i) const { return cells_[k][i]; }
    int index(const Simplex& s) const;
    bool contains(const Simplex& s) const { return index(s) >= 0; }
    // index of the face omitting vertex j, for j = 0..k
    const std::vector<int>& faces(int k, int i) const { return faces_[k][i]; }
    // (coface index, position of the omitted vertex)
    const std::vector<std::pair<int, int>>& cofaces(int k, int i) const { return cofaces_[k][i]; }
    std::vector<Simplex> top_simplices() const;  // maximal simplices
    bool is_pure() const;

    std::vector<std::vector<int>> labels;  // optional per-vertex coordinate tuple

private:
    int nverts_ = 0;
    std::vector<std::vector<Simplex>> cells_;
    std::vector<std::unordered_map<Simplex, int, SimplexHash>> index_;
    std::vector<std::vector<std::vector<int>>> faces_;
    std::vector<std::vector<std::vector<std::pair<int, int>>>> cofaces_;
};

// Set of simplices of a complex closed under faces.
class Subcomplex {
public:
    Subcomplex() = default;
    explicit Subcomplex(const SimplicialComplex& k);

    static Subcomplex closure(const SimplicialComplex& k, const std::vector<Simplex>& gens);
    static Subcomplex full_on(const SimplicialComplex& k, const std::vector<int>& verts);
    static Subcomplex whole(const SimplicialComplex& k);

    bool contains(int dim, int i) const { return dim < static_cast<int>(in_.size()) && in_[dim][i]; }
    bool contains(const Simplex& s) const;
    void insert(int dim, int i);  // also inserts faces
    bool empty() const;
    int count(int dim) const;
    int dim() const;
    std::vector<int> vertices() const;
    bool has_vertex(int v) const { return contains(Simplex{v}); }
    const SimplicialComplex& complex() const { return *k_; }

    Subcomplex unite(const Subcomplex& o) const;
    Subcomplex intersect(const Subcomplex& o) const;
    bool operator==(const Subcomplex& o) const { return in_ == o.in_; }

private:
    const SimplicialComplex* k_ = nullptr;
    std::vector<std::vector<char>> in_;
};

bool is_full(const Subcomplex& l);
// simplices disjoint from L
Subcomplex simplicial_complement(const Subcomplex& l);
// faces of simplices meeting L
Subcomplex simplicial_neighborhood(const Subcomplex& l);

// chains and cochains: coefficient per simplex index in one degree
struct Chain {
    int degree = 0;
    std::map<int, Rational> c;

    void add(int i, const Rational& v);
    bool is_zero() const { return c.empty(); }
    bool operator==(const Chain& o) const { return degree == o.degree && c == o.c; }
    Chain operator+(const Chain& o) const;
    Chain operator-(const Chain& o) const;
    Chain operator*(const Rational& s) const;
};
using Cochain = Chain;

Chain boundary(const SimplicialComplex& k, const Chain& x);
Chain coboundary(const SimplicialComplex& k, const Cochain& u);
Chain mod_out(const Chain& x, const Subcomplex& d);  // drop simplices in d
// face closure of the simplices with nonzero coefficient
Subcomplex support(const SimplicialComplex& k, const Chain& x);
bool supported_in(const Chain& x, const Subcomplex& l);
Rational evaluate(const Cochain& u, const Chain& x);

SparseMatrix boundary_matrix(const SimplicialComplex& k, int deg);
// boundary C_deg(K,D) -> C_{deg-1}(K,D) in the bases of simplices not in D,
// listed by `relative_cells`
std::vector<int> relative_cells(const SimplicialComplex& k, const Subcomplex& d, int deg);
SparseMatrix relative_boundary_matrix(const SimplicialComplex& k, const Subcomplex& d, int deg);

// Coherent orientation of a closed pseudomanifold (each component seeded with
// the orientation of its first top simplex times `seed_sign`).
Chain fundamental_cycle(const SimplicialComplex& k, int seed_sign = 1);

// sign of the permutation sorting `verts`; 0 if a vertex repeats
int sort_sign(std::vector<int>& verts);

// ---- products

struct ProductComplex {
    SimplicialComplex complex;
    int n1 = 0, n2 = 0;  // vertex counts of the factors
    int vertex(int v1, int v2) const { return v1 * n2 + v2; }
};

ProductComplex product(const SimplicialComplex& a, const SimplicialComplex& b);
Chain cross_product(const ProductComplex& p, const SimplicialComplex& a, const Chain& x,
                    const SimplicialComplex& b, const Chain& y);
// product of subcomplexes as a subcomplex of the product triangulation
Subcomplex product_subcomplex(const ProductComplex& p, const Subcomplex& a, const Subcomplex& b);

// ---- subdivision

struct Subdivision {
    SimplicialComplex complex;
    // for each new vertex, the simplex of the old complex it is the barycenter of
    std::vector<Simplex> carrier;
    // old vertex ids are kept; barycenters are appended
    std::map<Simplex, int> barycenter;
    Chain apply(const SimplicialComplex& old, const Chain& x) const;  // subdivision operator
    Subcomplex image(const Subcomplex& s) const;                      // unchanged simplices of s
};

// derived subdivision starring every simplex not in s
Subdivision barycentric_subdivision_mod(const SimplicialComplex& k, const Subcomplex& s);

// rank of each vertex in an ordering where the vertices of l come last
std::vector<int> good_ordering(const SimplicialComplex& k, const Subcomplex& l, unsigned seed = 0);

// copy of a subcomplex as a complex on its own, keeping vertex ids
SimplicialComplex as_complex(const Subcomplex& s);

}  // namespace ajchains
