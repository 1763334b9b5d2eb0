#include <doctest.h>

#include <random>

#include "ajchains/cubical_alt.hpp"

using namespace ajchains;

namespace {

Chain random_admissible(int n, int deg, std::mt19937& rng) {
    const FaceConfiguration& cfg = coordinate_configuration(n);
    const ProjectiveModel& m = projective_model(n);
    SparseMatrix b = admissible_chain_basis(cfg, 0, deg);
    auto cells = relative_cells(m.complex, m.divisor(), deg);
    std::uniform_int_distribution<int> coef(-2, 2);
    Chain x;
    x.degree = deg;
    for (const auto& col : b.col) {
        int s = coef(rng);
        for (const auto& [r, v] : col) x.add(cells[r], v * s);
    }
    return x;
}

Chain random_chain(int n, int deg, std::mt19937& rng) {
    const auto& k = projective_model(n).complex;
    std::uniform_int_distribution<int> coef(-2, 2);
    Chain x;
    x.degree = deg;
    for (int i = 0; i < k.count(deg); ++i) x.add(i, coef(rng));
    return x;
}

}  // namespace

TEST_CASE("cube group: order, law and sign character") {
    for (int n = 1; n <= 3; ++n) {
        auto g = cube_group(n);
        int fact = 1;
        for (int i = 2; i <= n; ++i) fact *= i;
        CHECK(static_cast<int>(g.size()) == (1 << n) * fact);
        for (const auto& a : g)
            for (const auto& b : g) {
                CHECK((a * b).sign() == a.sign() * b.sign());
                CHECK((a * CubeSymmetry::identity(n)) == a);
            }
    }
    CHECK_THROWS_AS(cube_group(1)[0] * cube_group(2)[0], AxisMismatch);
}

TEST_CASE("cube group acts on chains of the model") {
    std::mt19937 rng(3);
    auto g = cube_group(2);
    Chain x = random_chain(2, 2, rng);
    CHECK(act(CubeSymmetry::identity(2), x, 2) == x);
    for (const auto& a : g)
        for (const auto& b : g) CHECK(act(a * b, x, 2) == act(a, act(b, x, 2), 2));
    CHECK_THROWS_AS(act(g[0], x, 1), AxisMismatch);

    // inversion of an axis exchanges the faces 0 and ∞ of that axis
    const auto& m = projective_model(2);
    CubeSymmetry inv{{-1, 1}, {0, 1}};
    CHECK(act(inv, m.face_cycle(0, false), 2) == m.face_cycle(0, true));
    CHECK(act(inv, m.face_cycle(1, false), 2) == m.face_cycle(1, false));
}

TEST_CASE("alternating projector") {
    std::mt19937 rng(11);
    Chain x = random_chain(1, 1, rng);
    CubeSymmetry inv{{-1}, {0}};
    CHECK(alt_project(x, 1) == (x - act(inv, x, 1)) * Rational(1, 2));
    for (int n = 1; n <= 2; ++n) {
        Chain y = random_chain(n, 2, rng);
        Chain a = alt_project(y, n);
        CHECK(alt_project(a, n) == a);
    }
    // η is fixed by the inversion, which has sign -1
    const auto& m = projective_model(1);
    CHECK(alt_project(m.fundamental, 1).is_zero());
}

TEST_CASE("face positions") {
    std::vector<std::pair<int, bool>> want = {{0, false}, {0, true}, {1, true}, {1, false},
                                              {2, false}, {2, true}, {3, true}, {3, false}};
    for (int q = 0; q < 8; ++q) {
        FaceIndex f = FaceIndex::at(q);
        CHECK(f.axis == want[q].first);
        CHECK(f.at_infinity == want[q].second);
        CHECK(f.position() == q);
    }
}

TEST_CASE("sign functions") {
    using namespace signs;
    CHECK(eps1(0, 0) == 0);
    CHECK(eps1(1, 0) == 1);
    CHECK(eps1(1, 1) == 0);
    CHECK(eps1(2, 1) == 1);
    CHECK(eps2(0, 1) == 1);
    CHECK(eps2(1, 1) == 0);
    CHECK(eps2(2, 2) == 1);
    CHECK(eps3(0, 0) == 0);
    CHECK(eps3(1, 0) == 1);
    CHECK(eps3(2, 1) == 0);
    CHECK(eps3(3, 0) == 0);
    // ε(c, i; p) = 1 + i(c + 1 + p) + c(c - 1)/2
    CHECK(eps_ci(0, 0, 2) == 1);
    CHECK(eps_ci(0, 1, 2) == 0);
    CHECK(eps_ci(1, 0, 2) == 1);
    CHECK(eps_ci(2, 1, 3) == 0);
    CHECK(eps_ci(0, 1, 3) == 1);
    CHECK(to_sign(3) == -1);
    CHECK(to_sign(0) == 1);
}

TEST_CASE("cubical boundary") {
    const auto& m2 = projective_model(2);
    const auto& m1 = projective_model(1);
    Chain b = cubical_boundary(m2.fundamental, 2);
    // (∂_0^1 - ∂_∞^1) - (∂_0^2 - ∂_∞^2): each face sends η to the lower η
    CHECK(b.is_zero());
    Chain f = model_face(2, 0, false, m2.fundamental);
    CHECK(f == m1.fundamental);
    CHECK(model_face(1, 0, true, m1.fundamental) == projective_model(0).fundamental);
    CHECK(cubical_boundary(m1.fundamental, 1).is_zero());

    std::mt19937 rng(21);
    for (int trial = 0; trial < 4; ++trial) {
        Chain x = random_admissible(2, 4, rng);
        Chain y = cubical_boundary(x, 2);
        CHECK(cubical_boundary(y, 1).is_zero());
        Chain z = random_admissible(2, 3, rng);
        CHECK(cubical_boundary(alt_project(z, 2), 2) == alt_project(cubical_boundary(z, 2), 1));
    }

    Chain bad;
    bad.degree = 2;
    bad.add(m1.complex.index({sphere::one, sphere::plus_i, sphere::zero}), 1);
    CHECK_THROWS_AS(cubical_boundary(bad, 1), NotAdmissible);
}

TEST_CASE("cubical complex of the point") {
    for (int n = 0; n <= 2; ++n) {
        CubicalComplex cc = build_cubical_ac_complex(n);
        CHECK_NOTHROW(check_complex(cc.total));
        auto h = cohomology_all(cc.total);
        for (const auto& g : h) CHECK(g.rank == (g.degree == n ? 1 : 0));
    }
}

TEST_CASE("Alt after sigma is a quasi-isomorphism") {
    for (int n = 1; n <= 2; ++n) {
        FaceConfiguration cfg = cubical_configuration(n);
        ACDoubleComplex dc = build_ac_double_complex(cfg);
        CubicalComplex cc = build_cubical_ac_complex(n);
        ChainMap f = sigma_map(dc, cfg, cc);
        CHECK_NOTHROW(check_chain_map(f, dc.total, cc.total));
        CHECK(is_quasi_iso(f, dc.total, cc.total));
        auto h = cohomology_all(dc.total);
        for (const auto& g : h) CHECK(g.rank == (g.degree == n ? 1 : 0));
    }
}
