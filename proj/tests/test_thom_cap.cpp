#include <doctest.h>

#include <random>

#include "ajchains/projective_model.hpp"
#include "ajchains/thom_cap.hpp"

using namespace ajchains;

namespace {

Chain random_chain(const SimplicialComplex& k, int deg, std::mt19937& rng) {
    std::uniform_int_distribution<int> v(-2, 2);
    Chain c;
    c.degree = deg;
    for (int i = 0; i < k.count(deg); ++i) c.add(i, v(rng));
    return c;
}

std::vector<int> random_rank(int n, std::mt19937& rng) {
    std::vector<int> r(n);
    for (int i = 0; i < n; ++i) r[i] = i;
    std::shuffle(r.begin(), r.end(), rng);
    return r;
}

Chain point(const SimplicialComplex& k, int v) {
    Chain c;
    c.degree = 0;
    c.add(k.index({v}), 1);
    return c;
}

}  // namespace

TEST_CASE("cap product boundary formula") {
    const auto& p2 = projective_model(2);
    const SimplicialComplex& k = p2.complex;
    std::mt19937 rng(4);
    for (int trial = 0; trial < 6; ++trial) {
        auto rank = random_rank(k.num_vertices(), rng);
        for (int p = 0; p <= 2; ++p)
            for (int deg = p + 1; deg <= 4; deg += 2) {
                Cochain u = random_chain(k, p, rng);
                Chain x = random_chain(k, deg, rng);
                Chain lhs = boundary(k, cap_product(k, u, x, rank));
                Chain rhs = cap_product(k, u, boundary(k, x), rank) - cap_product(k, coboundary(k, u), x, rank);
                if (p % 2) rhs = rhs * Rational(-1);
                CHECK(lhs == rhs);
            }
    }
}

TEST_CASE("sphere model: orientation, symmetry and fullness") {
    const auto& p1 = projective_model(1);
    CHECK(p1.complex.count(0) == 6);
    CHECK(p1.complex.count(1) == 12);
    CHECK(p1.complex.count(2) == 8);
    CHECK(boundary(p1.complex, p1.fundamental).is_zero());
    auto inv = vertex_action(p1, {1}, {0});
    CHECK(push_chain(p1.complex, p1.fundamental, inv) == p1.fundamental);
    CHECK(is_full(p1.face(0, false).unite(p1.face(0, true))));

    const auto& p2 = projective_model(2);
    CHECK(p2.complex.count(4) == 384);
    CHECK(boundary(p2.complex, p2.fundamental).is_zero());
    for (auto g : std::vector<std::pair<std::vector<int>, std::vector<int>>>{
             {{1, 0}, {0, 1}}, {{0, 1}, {0, 1}}, {{0, 0}, {1, 0}}, {{1, 1}, {1, 0}}}) {
        auto vm = vertex_action(p2, g.first, g.second);
        CHECK(push_chain(p2.complex, p2.fundamental, vm) == p2.fundamental);
    }
    CHECK(is_full(p2.divisor()));
    Subcomplex faces = p2.face(0, false).unite(p2.face(0, true)).unite(p2.face(1, false)).unite(p2.face(1, true));
    CHECK(is_full(faces));
    for (int axis = 0; axis < 2; ++axis) {
        Chain fc = p2.face_cycle(axis, true);
        CHECK(supported_in(fc, p2.face(axis, true)));
        CHECK(boundary(p2.complex, fc).is_zero());
    }
}

TEST_CASE("face map on the sphere sends the fundamental class to the point") {
    const auto& p1 = projective_model(1);
    for (bool inf : {false, true}) {
        Subcomplex l = p1.face(0, inf);
        Chain eta_l = point(p1.complex, inf ? sphere::infinity : sphere::zero);
        FaceMap f(p1.complex, l, 1, p1.fundamental, eta_l);
        CHECK(f.verify());
        CHECK(f.apply(p1.fundamental) == eta_l);

        FaceMap g(p1.complex, l, 1, p1.fundamental, eta_l, {3, 17});
        CHECK(g.verify());
        CHECK_FALSE(g.thom_cocycle() == f.thom_cocycle());
        CHECK(g.apply(p1.fundamental) == eta_l);
    }
}

TEST_CASE("face map commutes with the boundary") {
    const auto& p1 = projective_model(1);
    Subcomplex l = p1.face(0, false);
    FaceMap f(p1.complex, l, 1, p1.fundamental, point(p1.complex, sphere::zero));
    std::mt19937 rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        Chain x = random_chain(p1.complex, 2, rng);
        CHECK(boundary(p1.complex, f.apply(x)).is_zero());
        Chain y = random_chain(p1.complex, 2, rng);
        CHECK(f.apply(boundary(p1.complex, boundary(p1.complex, y))).is_zero());
    }
}

TEST_CASE("iterated face maps on the square of the sphere") {
    const auto& p2 = projective_model(2);
    const auto& p1 = projective_model(1);
    // route 1: {z1 = 0} then {z2 = 0}
    FaceMap first(p2.complex, p2.face(0, false), 1, p2.fundamental, p2.face_cycle(0, false));
    CHECK(first.verify());
    Chain on_face = first.apply(p2.fundamental);
    CHECK(on_face == p2.face_cycle(0, false));
    Chain lowered = drop_coordinate(p2, on_face, 0, p1);
    CHECK(lowered == p1.fundamental);
    FaceMap second(p1.complex, p1.face(0, false), 1, p1.fundamental, point(p1.complex, sphere::zero));
    CHECK(second.apply(lowered) == point(p1.complex, sphere::zero));

    // second Thom cocycle on the big complex agrees on the fundamental class
    FaceMap alt(p2.complex, p2.face(1, true), 1, p2.fundamental, p2.face_cycle(1, true), {5, 23});
    CHECK(alt.verify());
    CHECK(alt.apply(p2.fundamental) == p2.face_cycle(1, true));
}

TEST_CASE("non-full faces are rejected") {
    auto k = SimplicialComplex::from_simplices(4, {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}});
    auto two = Subcomplex::closure(k, {{0}, {1}});
    Chain eta = fundamental_cycle(k);
    CHECK_THROWS_AS(FaceMap(k, two, 1, eta, Chain{}), NotFull);
}
