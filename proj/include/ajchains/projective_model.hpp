#pragma once

#include <map>

#include "ajchains/simplicial_core.hpp"

namespace ajchains {

// Octahedral triangulation of the Riemann sphere. Vertex ids:
// 0 -> 1, 1 -> -1, 2 -> i, 3 -> -i, 4 -> 0, 5 -> inf.
namespace sphere {
inline constexpr int one = 0;
inline constexpr int minus_one = 1;
inline constexpr int plus_i = 2;
inline constexpr int minus_i = 3;
inline constexpr int zero = 4;
inline constexpr int infinity = 5;
// z -> 1/z on vertex ids
inline constexpr int inverse[6] = {0, 1, 3, 2, 5, 4};
}  // namespace sphere

SimplicialComplex octahedron();

// The product of k copies of the sphere with the staircase triangulation.
// Vertex labels are the tuples of sphere vertex ids.
struct ProjectiveModel {
    int k = 0;
    SimplicialComplex complex;
    Chain fundamental;
    std::map<std::vector<int>, int> vertex_of_label;

    int vertex(const std::vector<int>& label) const { return vertex_of_label.at(label); }
    // {z_axis = 0} or {z_axis = inf}, axis counted from 0
    Subcomplex face(int axis, bool at_infinity) const;
    // union of {z_i = 1}
    Subcomplex divisor() const;
    // fundamental cycle of a face, oriented as the lower model
    Chain face_cycle(int axis, bool at_infinity) const;
};

const ProjectiveModel& projective_model(int k);

// Transport a chain supported on {z_axis = const} to the model with that
// coordinate deleted. Vertex order is preserved, so no signs appear.
Chain drop_coordinate(const ProjectiveModel& hi, const Chain& x, int axis, const ProjectiveModel& lo);
// Inverse of drop_coordinate: insert the constant vertex `value` at `axis`.
Chain insert_coordinate(const ProjectiveModel& lo, const Chain& x, int axis, int value, const ProjectiveModel& hi);

// Action of z_axis -> 1/z_axis and of a permutation of coordinates
// (coordinate i moves to perm[i]) on vertex ids of the model.
std::vector<int> vertex_action(const ProjectiveModel& m, const std::vector<int>& inverted,
                               const std::vector<int>& perm);
// push a chain along a vertex map (simplicial automorphism)
Chain push_chain(const SimplicialComplex& k, const Chain& x, const std::vector<int>& vmap);

}  // namespace ajchains
