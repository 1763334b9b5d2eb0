#include <doctest.h>

#include <random>

#include "ajchains/homology_engine.hpp"

using namespace ajchains;

namespace {

SparseMatrix from_dense(const std::vector<std::vector<int>>& rows) {
    int r = static_cast<int>(rows.size());
    int c = r ? static_cast<int>(rows[0].size()) : 0;
    SparseMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m.add(i, j, rows[i][j]);
    return m;
}

SparseMatrix random_matrix(std::mt19937& rng, int r, int c, double fill) {
    std::uniform_real_distribution<double> u(0, 1);
    std::uniform_int_distribution<int> v(-3, 3);
    SparseMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j)
            if (u(rng) < fill) m.add(i, j, v(rng));
    return m;
}

// Bareiss determinant, independent of the elimination code under test
Integer det(std::vector<std::vector<Integer>> a) {
    int n = static_cast<int>(a.size());
    if (n == 0) return 1;
    Integer prev = 1;
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (a[k][k] == 0) {
            int s = k + 1;
            while (s < n && a[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(a[k], a[s]);
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i)
            for (int j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

Integer gcd_of_minors(const IntMatrix& m, int k) {
    Integer g = 0;
    std::vector<int> rs(k), cs(k);
    auto next = [](std::vector<int>& s, int n) {
        int k = static_cast<int>(s.size());
        int i = k - 1;
        while (i >= 0 && s[i] == n - k + i) --i;
        if (i < 0) return false;
        ++s[i];
        for (int j = i + 1; j < k; ++j) s[j] = s[j - 1] + 1;
        return true;
    };
    for (int i = 0; i < k; ++i) rs[i] = i;
    do {
        for (int i = 0; i < k; ++i) cs[i] = i;
        do {
            std::vector<std::vector<Integer>> sub(k, std::vector<Integer>(k));
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) sub[a][b] = m(rs[a], cs[b]);
            Integer d = det(sub);
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
        } while (next(cs, m.cols));
    } while (next(rs, m.rows));
    return g;
}

}  // namespace

TEST_CASE("rank and kernel of a small matrix") {
    SparseMatrix m = from_dense({{1, 2, 3}, {2, 4, 6}, {1, 0, 1}});
    CHECK(rank(m) == 2);
    SparseMatrix k = kernel_basis(m);
    CHECK(k.cols == 1);
    CHECK(multiply(m, k).is_zero());
}

TEST_CASE("kernel dimension plus rank equals width on random matrices") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 40; ++trial) {
        int r = 1 + trial % 7, c = 1 + (trial * 3) % 9;
        SparseMatrix m = random_matrix(rng, r, c, 0.4);
        SparseMatrix k = kernel_basis(m);
        CHECK(k.cols + rank(m) == c);
        CHECK(multiply(m, k).is_zero());
        CHECK(rank(k) == k.cols);
        CHECK(rank(m) == rank(m.transpose()));
    }
}

TEST_CASE("solve returns a solution for every priority order") {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        SparseMatrix a = random_matrix(rng, 5, 8, 0.5);
        SparseVec x0;
        for (int j = 0; j < 8; ++j)
            if (j % 2 == 0) {
                Rational q(j + 1, 3);
                q.canonicalize();
                x0.push_back({j, q});
            }
        SparseVec b = mat_vec(a, x0);
        std::vector<int> order(8);
        for (int i = 0; i < 8; ++i) order[i] = 7 - i;
        CHECK(mat_vec(a, solve(a, b)) == b);
        CHECK(mat_vec(a, solve(a, b, &order)) == b);
    }
    SparseMatrix a = from_dense({{1, 1}, {1, 1}});
    CHECK_THROWS_AS(solve(a, SparseVec{{0, Rational(1)}}), NoSolution);
}

TEST_CASE("Smith form: transforms, divisibility and minors") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> v(-6, 6);
    for (int trial = 0; trial < 25; ++trial) {
        int r = 2 + trial % 3, c = 2 + (trial / 3) % 3;
        IntMatrix m(r, c);
        for (auto& x : m.a) x = v(rng);
        SmithForm s = smith_normal_form(m);
        CHECK(s.u * m * s.v == s.d);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j)
                if (i != j) CHECK(s.d(i, j) == 0);
        for (size_t i = 1; i < s.divisors.size(); ++i) CHECK(s.divisors[i] % s.divisors[i - 1] == 0);
        CHECK(abs(det(std::vector<std::vector<Integer>>{
                  [&] {
                      std::vector<std::vector<Integer>> u(r, std::vector<Integer>(r));
                      for (int i = 0; i < r; ++i)
                          for (int j = 0; j < r; ++j) u[i][j] = s.u(i, j);
                      return u;
                  }()})) == 1);
        // d_1 ... d_k = gcd of k x k minors
        Integer prod = 1;
        for (int k = 1; k <= std::min(r, c); ++k) {
            Integer g = gcd_of_minors(m, k);
            if (k <= static_cast<int>(s.divisors.size())) {
                prod *= s.divisors[k - 1];
                CHECK(prod == g);
            } else {
                CHECK(g == 0);
            }
        }
        SparseMatrix sm(r, c);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < c; ++j) sm.add(i, j, Rational(m(i, j)));
        CHECK(elementary_divisors(sm) == s.divisors);
    }
}

TEST_CASE("cohomology of plain complexes with torsion") {
    // Z --2--> Z
    SparseMatrix d(1, 1);
    d.add(0, 0, 2);
    auto c = CochainComplex::plain(0, {d}, {1, 1});
    CHECK(cohomology(c, 0).rank == 0);
    auto h1 = cohomology(c, 1);
    CHECK(h1.rank == 0);
    REQUIRE(h1.torsion.size() == 1);
    CHECK(h1.torsion[0] == 2);
}

TEST_CASE("non-complexes and non-chain-maps are rejected") {
    SparseMatrix d0(1, 1), d1(1, 1);
    d0.add(0, 0, 1);
    d1.add(0, 0, 1);
    auto bad = CochainComplex::plain(0, {d0, d1}, {1, 1, 1});
    CHECK_THROWS_AS(check_complex(bad), NotAComplex);

    // circle: two vertices, two edges
    SparseMatrix cd(2, 2);
    cd.add(0, 0, -1);
    cd.add(1, 0, 1);
    cd.add(0, 1, 1);
    cd.add(1, 1, -1);
    auto circle = CochainComplex::plain(0, {cd}, {2, 2});
    ChainMap id{SparseMatrix::identity(2), SparseMatrix::identity(2)};
    CHECK(is_quasi_iso(id, circle, circle));
    ChainMap zero{SparseMatrix(2, 2), SparseMatrix(2, 2)};
    CHECK_FALSE(is_quasi_iso(zero, circle, circle));
    ChainMap broken{SparseMatrix::identity(2), SparseMatrix(2, 2)};
    CHECK_THROWS_AS(check_chain_map(broken, circle, circle), NotChainMap);
    auto m = induced_map_on_cohomology(id, circle, circle, 1);
    REQUIRE(m.size() == 1);
    CHECK(m[0][0] == 1);
}

TEST_CASE("subspace complexes use spanning sets") {
    // ambient Q^3 -> Q^3 identity, but degree 0 only spans e0+e1 (twice, redundantly)
    CochainComplex c;
    c.lo = 0;
    c.ambient = {3, 3};
    SparseMatrix s0(3, 2);
    s0.add(0, 0, 1);
    s0.add(1, 0, 1);
    s0.add(0, 1, 2);
    s0.add(1, 1, 2);
    c.span = {s0, SparseMatrix::identity(3)};
    c.d = {SparseMatrix::identity(3)};
    check_complex(c);
    CHECK(group_dimension(c, 0) == 1);
    CHECK(cohomology(c, 0).rank == 0);
    CHECK(cohomology(c, 1).rank == 2);
}
