#pragma once

#include <stdexcept>
#include <vector>

#include "ajchains/admissible_complex.hpp"
#include "ajchains/projective_model.hpp"
#include "ajchains/thom_cap.hpp"

namespace ajchains {

struct AxisMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// g = (ε; σ) acting by (g·z)_{σ(i)} = z_i^{ε_i}
struct CubeSymmetry {
    std::vector<int> eps;   // ±1 per axis
    std::vector<int> perm;  // axis i moves to perm[i]

    static CubeSymmetry identity(int n);
    int n() const { return static_cast<int>(eps.size()); }
    int sign() const;
    CubeSymmetry operator*(const CubeSymmetry& h) const;  // (g h)·z = g·(h·z)
    bool operator==(const CubeSymmetry& o) const { return eps == o.eps && perm == o.perm; }
};

std::vector<CubeSymmetry> cube_group(int n);

// on chains of projective_model(n)
Chain act(const CubeSymmetry& g, const Chain& x, int n);
// (1/|G_n|) Σ sign(g) g·x
Chain alt_project(const Chain& x, int n);

// H_{i,β}, axis counted from 0. Positions run 0, ∞ | ∞, 0 | 0, ∞ | ∞, 0 ...
struct FaceIndex {
    int axis = 0;
    bool at_infinity = false;
    int position() const;
    static FaceIndex at(int position);
};

// parities; to_sign turns a parity into ±1
namespace signs {
int eps1(int x, int y);
int eps2(int x, int y);
int eps3(int j, int a);
int eps_ci(int c, int i, int p);
inline int to_sign(int parity) { return parity % 2 ? -1 : 1; }
}  // namespace signs

// face map of projective_model(n) onto {z_axis = 0 or ∞}, shared and cached
const FaceMap& model_face_map(int n, int axis, bool at_infinity);
// ∂^axis_β followed by deleting the coordinate; lands on projective_model(n - 1)
Chain model_face(int n, int axis, bool at_infinity, const Chain& x);
// Σ_j (-1)^j (∂^j_0 - ∂^j_∞), j from 0; throws NotAdmissible unless x is
// δ-admissible for the coordinate faces
Chain cubical_boundary(const Chain& x, int n);
// the configuration of projective_configuration(n) shared by the cubical code
const FaceConfiguration& coordinate_configuration(int n);

struct CubicalBlock {
    int a = 0;             // cube level: chains live on projective_model(n - a)
    int chain_degree = 0;
    int offset = 0;
    std::vector<int> cells;
};

struct CubicalComplex {
    int n = 0;
    CochainComplex total;  // spans: alternating admissible chains
    std::vector<std::vector<CubicalBlock>> blocks;
    int coordinate(int j, int a, int cell) const;
};

CubicalComplex build_cubical_ac_complex(int n);

// faces of (ℙ¹)^n numbered by FaceIndex position
FaceConfiguration cubical_configuration(int n);

// γ_I ↦ Alt((-1)^{Σ positions in I} γ_I), strata identified with lower models;
// `src` must come from cubical_configuration(n)
ChainMap sigma_map(const ACDoubleComplex& src, const FaceConfiguration& cfg, const CubicalComplex& dst);

}  // namespace ajchains
