#include <doctest.h>

#include <cmath>
#include <numbers>

#include "ajchains/polylog_aj.hpp"

using namespace ajchains;

namespace {

const Complex tpi(0, 2 * std::numbers::pi);

double rel(Complex a, Complex b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("rho cells") {
    PolyChain r1 = rho_cells(1, 0, 0.3);
    REQUIRE(r1.terms.size() == 1);
    CHECK(r1.y_dim == 0);
    CHECK(r1.cube_dim == 1);
    CHECK(r1.terms[0].cell.dim() == 0);
    auto z = r1.terms[0].cell.coordinates({});
    CHECK(std::abs(z[0].v - 0.7) < 1e-15);

    // (x, 1 - x, 1 - a/x) with sign (-1)^{p-k}
    PolyChain r2 = rho_cells(3, 1, 0.4);
    CHECK(r2.terms[0].coef == -1);
    CHECK(r2.y_dim == 1);
    CHECK(r2.cube_dim == 2);
    Complex x(0.3, -1.2);
    auto w = r2.terms[0].cell.coordinates({x.real(), x.imag()});
    CHECK(std::abs(w[0].v - x) < 1e-14);
    CHECK(std::abs(w[1].v - (1.0 - x)) < 1e-14);
    CHECK(std::abs(w[2].v - (1.0 - 0.4 / x)) < 1e-14);

    // the ratio pattern 1 - x_j / x_{j-1}
    PolyChain r3 = rho_cells(3, 0, 0.4);
    Complex y(-0.5, 0.25);
    auto v = r3.terms[0].cell.coordinates({x.real(), x.imag(), y.real(), y.imag()});
    CHECK(std::abs(v[3].v - (1.0 - y / x)) < 1e-14);
    CHECK(std::abs(v[4].v - (1.0 - 0.4 / y)) < 1e-14);

    CHECK((r2 * Rational(3)).terms[0].coef == -3);
    CHECK_THROWS_AS(rho_cells(2, 0, 1.0), BadParameter);
    CHECK_THROWS_AS(rho_cells(2, 0, 0.0), BadParameter);
    CHECK_THROWS_AS(rho_cells(2, 2, 0.5), BadParameter);
    CHECK_NOTHROW(rho_cells(2, 0, 2.5));

    ParamChain pc = rho_cycle(2, 0, 0.4);
    REQUIRE(pc.terms.size() == 1);
    const ParamCell& cell = pc.terms[0].second;
    CHECK(cell.dim() == 2);
    CHECK_FALSE(cell.incidences.empty());
    CHECK(cell.check_incidences(12, 5));
}

TEST_CASE("eta cells") {
    PolyChain e = eta_cells(3, 0, 1, 0.5);
    const PolyCell& c = e.terms[0].cell;
    // one free x_1 and t_1 <= t_2 <= a
    CHECK(c.dim() == 4);
    CHECK(c.chain.size() == 2);
    CHECK(e.y_dim == 2);
    CHECK(e.cube_dim == 2);
    Complex x(0.7, 0.2);
    auto z = c.coordinates({x.real(), x.imag(), 0.1, 0.3});
    CHECK(std::abs(z[0].v - x) < 1e-14);
    CHECK(std::abs(z[1].v - 0.3) < 1e-14);
    CHECK(std::abs(z[2].v - (1.0 - x)) < 1e-14);
    CHECK(std::abs(z[3].v - (1.0 - 0.1 / x)) < 1e-14);

    // i = 0 has no x; the cube coordinate is 1 - t_0
    auto z0 = eta_cells(2, 0, 0, 0.5).terms[0].cell.coordinates({0.1, 0.2});
    CHECK(std::abs(z0[0].v - 0.2) < 1e-15);
    CHECK(std::abs(z0[1].v - 0.9) < 1e-15);

    CHECK_THROWS_AS(eta_cells(2, 0, 2, 0.5), BadIndex);
    CHECK_THROWS_AS(eta_cells(2, 2, 0, 0.5), BadIndex);
    CHECK_THROWS_AS(eta_cells(2, 0, -1, 0.5), BadIndex);
    CHECK_THROWS_AS(eta_chain(2, 0, 0, 1.5), BadParameter);

    // ∫ dt_1/t_1 ∫_0^{t_1} dt_0/(1 - t_0) on the canonical orientation
    ParamChain pc = eta_chain(2, 0, 0, 0.3);
    LogForm phi = LogForm::dlog(2, {0, 1});
    Integral I = integrate(pc, phi);
    CHECK(I.converged);
    double li2 = 0.32612951007547606;
    CHECK(std::abs(I.value - Complex(eta_orientation(2, 0, 0) * li2)) < 1e-10);
}

TEST_CASE("boundary operators on cells") {
    // δη_1(0) = {1 - a} - {1}, the second lies in D
    PolyChain b = chain_boundary(eta_cells(1, 0, 0, 0.3));
    REQUIRE(b.terms.size() == 1);
    CHECK(b.terms[0].coef == eta_orientation(1, 0, 0));
    CHECK(std::abs(b.terms[0].cell.coordinates({})[0].v - 0.7) < 1e-15);

    PolyChain e = eta_cells(2, 0, 0, 0.3);
    PolyChain y = y_boundary(e, 0.3);
    CHECK(y.y_dim == 2);
    CHECK(y.terms.size() == 4);

    // ∂_□ρ_2: x = 1 and x = a survive, the other two land in D
    PolyChain r = cube_boundary(rho_cells(2, 0, 0.3));
    CHECK(r.terms.size() == 2);
    CHECK(r.cube_dim == 1);

    // pullback of ρ_2 to x = 0 lies in D
    CHECK(v_pullback(rho_cells(2, 0, 0.3), 0, false).terms.empty());
    CHECK(v_pullback(rho_cells(2, 0, 0.3), 0, false, true).terms.size() == 1);
}

TEST_CASE("sampled comparison") {
    PolyChain r = rho_cells(2, 0, 0.3);
    SampledComparison same = compare_sampled(r, r, 20);
    CHECK(same.pass());
    CHECK(same.samples == 40);
    CHECK(same.exact);
    SampledComparison flipped = compare_sampled(r, -r, 20);
    CHECK(flipped.opposite == flipped.samples);
    CHECK_FALSE(flipped.pass());
    SampledComparison twice = compare_sampled(r * Rational(2), r, 10);
    CHECK(twice.pass());
    CHECK_FALSE(twice.exact);
    CHECK_FALSE(compare_sampled(r, rho_cells(2, 0, 0.31), 10).pass());
}

TEST_CASE("orientation table is the one the relations force") {
    for (int p = 2; p <= 3; ++p) {
        auto solved = solve_eta_orientations(p, 0.4, 40);
        for (auto [ci, o] : solved) {
            CHECK(o != 0);
            CHECK(o == eta_orientation(p, ci.first, ci.second));
        }
        CHECK(static_cast<int>(solved.size()) == p * (p + 1) / 2);
    }
}

TEST_CASE("boundary relations") {
    for (int p = 2; p <= 3; ++p) {
        BoundaryReport rep = check_boundary_relations(p, 0.4, 100);
        for (const auto& r : rep.relations) {
            INFO(r.name);
            CHECK(r.pass);
        }
        CHECK(rep.pass());
        CHECK_FALSE(check_boundary_relations(p, 0.4, 100, 0.45).pass());
    }
    CHECK(check_boundary_relations(2, 0.7, 100).pass());
}

TEST_CASE("polylog series") {
    CHECK(std::abs(li_oracle(1, 0.3) - 0.35667494393873244) < 1e-14);
    double ln2 = std::log(2.0), pi2 = std::numbers::pi * std::numbers::pi;
    CHECK(std::abs(li_oracle(2, 0.5) - (pi2 / 12 - ln2 * ln2 / 2)) < 1e-14);
    double z3 = 1.2020569031595942;
    CHECK(std::abs(li_oracle(3, 0.5) - (7 * z3 / 8 - pi2 * ln2 / 12 + ln2 * ln2 * ln2 / 6)) < 1e-14);
    Complex a(0.2, 0.5);
    CHECK(std::abs(li_oracle(1, a) + std::log(1.0 - a)) < 1e-14);
    CHECK(li_oracle(2, 0.0) == Complex(0));
    CHECK_THROWS_AS(li_oracle(2, 1.0), OutOfRadius);
    CHECK_THROWS_AS(li_oracle(2, Complex(0, -1.2)), OutOfRadius);
}

TEST_CASE("face index set") {
    auto s = face_index_set(4);
    REQUIRE(s.size() == 6);
    CHECK(s[0] == std::make_pair(1, true));
    CHECK(s[1] == std::make_pair(1, false));
    CHECK(s[2] == std::make_pair(2, false));
    CHECK(s[3] == std::make_pair(2, true));
    CHECK(s[4] == std::make_pair(3, true));
}

TEST_CASE("Abel-Jacobi value, weight 2") {
    AJResult r = aj_evaluate(2, {}, 0.3, 1e-6);
    CHECK(r.pass);
    CHECK(r.weight == 2);
    CHECK(r.two_pi_i == -2);
    CHECK(rel(r.total, 0.32612951007547606 / (tpi * tpi)) < 1e-6);
    REQUIRE(r.terms.size() == 2);
    CHECK(std::abs(r.terms[1].value) < 1e-6);
    CHECK(r.type_vanishing);

    for (int q : {0, 1}) {
        AJResult s = aj_evaluate(2, {q}, 0.3, 1e-6);
        CHECK(s.pass);
        CHECK(rel(s.total, 0.35667494393873244 / tpi) < 1e-6);
    }

    CHECK_THROWS_AS(aj_evaluate(2, {}, 1.0), BadParameter);
    CHECK_THROWS_AS(aj_evaluate(4, {}, 0.5), BadParameter);
    CHECK_THROWS_AS(aj_evaluate(3, {0, 1}, 0.5), BadIndex);
    CHECK_THROWS_AS(aj_evaluate(2, {2}, 0.5), BadIndex);

    // a flipped ε sign is caught
    CHECK_FALSE(aj_evaluate(2, {}, 0.3, 1e-6, true).pass);
}

TEST_CASE("Abel-Jacobi value, weight 3") {
    AJResult r = aj_evaluate(3, {}, 0.5, 1e-6);
    REQUIRE(r.terms.size() == 3);
    CHECK(std::abs(r.terms[1].value) < 1e-6);
    CHECK(std::abs(r.terms[2].value) < 1e-6);
    // modulus agrees whatever the sign
    CHECK(std::abs(std::abs(r.total) - 0.53721319360804020 / std::pow(2 * std::numbers::pi, 3)) < 1e-12);
    CHECK(rel(r.oracle, 0.53721319360804020 / (tpi * tpi * tpi)) < 1e-12);
    CHECK(r.pass);
}

TEST_CASE("Alt tag: integrals on the representative") {
    for (int i = 0; i < 2; ++i) {
        PolyChain e = eta_cells(2, 0, i, 0.3);
        int n = 2 + i;
        LogForm phi = wedge(LogForm::omega(n, 0, 1), LogForm::omega(n, 1, i + 1));
        ParamChain rep = to_param_chain(e);
        for (auto& t : rep.terms) t.second.incidences.clear();
        ParamChain all = alt_expand(e);
        CHECK(all.terms.size() == (i == 0 ? 4u : 16u));
        Integral a = integrate(rep, phi), b = integrate(all, phi);
        CHECK(std::abs(a.total() - b.total()) < 1e-9);
    }
}

TEST_CASE("psi on ladders") {
    for (int p = 2; p <= 3; ++p) {
        auto ladder = polylog_ladder(p, 0.3);
        CHECK(ladder.size() == static_cast<size_t>(p + 1));
        CHECK(ladder[0].terms.empty());
        CHECK(ladder_holds(ladder));
        // both entry points give the same displayed sum
        Complex psi = psi_evaluate(ladder, LogForm::omega(p - 1, 0, p - 1));
        CHECK(rel(psi, aj_evaluate(p, {}, 0.3).raw_total) < 1e-8);
    }

    auto ladder = polylog_ladder(2, 0.3);
    LogForm w = LogForm::omega(1, 0, 1);
    Complex base = psi_evaluate(ladder, w);
    std::vector<PolyChain> scaled;
    for (const auto& g : ladder) scaled.push_back(g * Rational(-3, 7));
    CHECK(std::abs(psi_evaluate(scaled, w) - base * (-3.0 / 7)) < 1e-12);
    LogForm w2 = w * Complex(2, 1) + LogForm::dlog(1, {0});
    CHECK(std::abs(psi_evaluate(ladder, w2) - (base * Complex(2, 1) + base * tpi)) < 1e-10);

    std::vector<PolyChain> zero(3);
    for (auto& g : zero) g.y_dim = 1;
    CHECK(psi_evaluate(zero, w) == Complex(0));

    // a negated rung breaks the ladder
    std::vector<PolyChain> broken = ladder;
    broken[1] = broken[1] * Rational(-1);
    CHECK_THROWS_AS(psi_evaluate(broken, w), LadderBroken);
}
