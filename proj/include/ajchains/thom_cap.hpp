#pragma once

#include <map>
#include <memory>

#include "ajchains/simplicial_core.hpp"

namespace ajchains {

// u ∩ [v0..vk] = u([v0..vp]) [vp..vk], vertices taken in the order given by
// `rank` (rank[v] is the position of vertex v)
Chain cap_product(const SimplicialComplex& k, const Cochain& u, const Chain& x, const std::vector<int>& rank);

struct ThomSolveOptions {
    unsigned ordering_seed = 0;  // tie-break shuffle of the good ordering
    unsigned unknown_seed = 0;   // elimination priority of the unknowns
};

// Face map C_k(M) -> C_{k-2p}(L) for a full subcomplex L of real codimension
// 2p: subdivide M away from L, take a good ordering and cap with a cocycle
// representing the Thom class of L.
class FaceMap {
public:
    FaceMap(const SimplicialComplex& m, const Subcomplex& l, int codim, const Chain& eta_m, const Chain& eta_l,
            ThomSolveOptions opt = {});

    // result is indexed by simplices of m and supported in l
    Chain apply(const Chain& x) const;

    const SimplicialComplex& subdivided() const { return sd_.complex; }
    const Cochain& thom_cocycle() const { return thom_; }
    const Cochain& correction() const { return beta_; }
    const std::vector<int>& ordering() const { return rank_; }
    int codim() const { return codim_; }
    // T vanishes on C(L), dT = 0 and T ∩ η - δβ = η_L
    bool verify() const;

private:
    const SimplicialComplex* m_;
    Subcomplex l_;
    int codim_;
    Subdivision sd_;
    Subcomplex lsd_;
    std::vector<int> rank_;
    Chain eta_sd_, eta_l_sd_;
    Cochain thom_, beta_;
    mutable std::map<std::pair<int, int>, Chain> cache_;
};

}  // namespace ajchains
