#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "ajchains/analytic_chains.hpp"

using namespace ajchains;

namespace {

const Complex I2pi(0, 2 * std::numbers::pi);

double li_series(int k, double a) {
    double s = 0, p = 1;
    for (int n = 1; n < 400; ++n) {
        p *= a;
        s += p / std::pow(n, k);
    }
    return s;
}

using Coords = std::vector<Coordinate>;

ParamCell circle(double r) {
    ParamCell c;
    c.ambient = 1;
    c.domain = {{DomainFactor::interval, 1, 0, 2 * std::numbers::pi}};
    c.map = [r](const std::vector<Jet>& t) { return Coords{Coordinate::plain(r * exp(t[0] * Complex(0, 1)))}; };
    return c;
}

// z = 1 - t, t in [0, a]
ParamCell one_minus_segment(double a) {
    ParamCell c;
    c.ambient = 1;
    c.domain = {{DomainFactor::interval, 1, 0, a}};
    c.map = [](const std::vector<Jet>& t) { return Coords{Coordinate::plain(1.0 - t[0])}; };
    return c;
}

// (t_1, 1 - t_0) over 0 <= t_0 <= t_1 <= a
ParamCell li2_cell(double a) {
    ParamCell c;
    c.ambient = 2;
    c.domain = {{DomainFactor::simplex, 2, 0, a}};
    c.map = [](const std::vector<Jet>& t) { return Coords{Coordinate::plain(t[1]), Coordinate::plain(1.0 - t[0])}; };
    return c;
}

LogForm random_form(std::mt19937& rng, int ambient, std::vector<int> logs, int smooth_deg) {
    std::uniform_int_distribution<int> coef(-3, 3), ax(0, ambient - 1), pw(0, 2), bar(0, 1);
    LogForm f;
    f.ambient = ambient;
    f.log_axes = logs;
    for (int t = 0; t < 3; ++t) {
        Poly p = Poly::constant(ambient, Complex(coef(rng), coef(rng)));
        for (int m = 0; m < 2; ++m) {
            Poly mono = Poly::constant(ambient, 1);
            for (int j = 0; j < pw(rng); ++j) mono = mono * Poly::z(ambient, ax(rng), bar(rng));
            p = p + mono * Complex(coef(rng));
        }
        std::vector<std::pair<int, Diff>> d;
        for (int j = 0; j < smooth_deg; ++j) d.emplace_back(ax(rng), bar(rng) ? Diff::dzbar : Diff::dz);
        f.smooth.push_back({p, d});
    }
    return f;
}

}  // namespace

TEST_CASE("jets agree with finite differences") {
    auto f = [](const std::vector<Jet>& x) { return exp(x[0] * x[1]) / (1.0 + pow(x[0], 2)) - conj(x[1]) * Complex(0, 2); };
    std::vector<double> p{0.3, -0.7};
    Jet v = f({Jet::variable(p[0], 0, 2), Jet::variable(p[1], 1, 2)});
    for (int i = 0; i < 2; ++i) {
        double h = 1e-6;
        auto q = p;
        q[i] += h;
        Jet a = f({Jet::variable(q[0], 0, 2), Jet::variable(q[1], 1, 2)});
        q[i] -= 2 * h;
        Jet b = f({Jet::variable(q[0], 0, 2), Jet::variable(q[1], 1, 2)});
        CHECK(std::abs((a.v - b.v) / (2 * h) - v.d[i]) < 1e-7);
    }
    CHECK(std::abs(real_part(Jet::constant(Complex(2, 3), 0)).v - Complex(2)) < 1e-15);
    CHECK(std::abs(imag_part(Jet::constant(Complex(2, 3), 0)).v - Complex(3)) < 1e-15);
}

TEST_CASE("integrate: closed forms") {
    Integral c = integrate(circle(0.5), LogForm::dlog(1, {0}));
    CHECK(c.converged);
    CHECK(std::abs(c.total() - I2pi) < 1e-10);

    // dt/(1 - t) = -d(1 - t)/(1 - t)
    Integral s = integrate(one_minus_segment(0.3), LogForm::dlog(1, {0}) * -1.0);
    CHECK(s.converged);
    CHECK(std::abs(s.total() - 0.35667494393873244) < 1e-10);

    // (dt_1/t_1) ∧ (dt_0/(1 - t_0)) integrated with t_1 outermost
    ParamCell cell = li2_cell(0.3);
    cell.orientation = -1;
    Integral l = integrate(cell, LogForm::dlog(2, {0, 1}) * -1.0);
    CHECK(l.converged);
    CHECK(std::abs(l.total() - li_series(2, 0.3)) < 1e-10);
    CHECK(std::abs(l.total() - 0.32612951007547606) < 1e-10);
}

TEST_CASE("integrate: orientation, additivity, degree checks") {
    LogForm f = LogForm::dlog(1, {0});
    ParamCell a = circle(0.5);
    ParamCell b = a;
    b.orientation = -1;
    CHECK(std::abs(integrate(a, f).total() + integrate(b, f).total()) < 1e-12);

    ParamChain ch;
    ch.add(2, circle(0.5));
    ch.add(Rational(-1, 2), circle(0.25));
    CHECK(std::abs(integrate(ch, f).total() - 1.5 * I2pi) < 1e-10);
    CHECK(std::abs(integrate(-ch, f).total() + 1.5 * I2pi) < 1e-10);

    CHECK_THROWS_AS(integrate(a, LogForm::dlog(2, {0, 1})), DegreeMismatch);
    CHECK(integrate(a, LogForm{}).total() == Complex(0));
}

TEST_CASE("integrate: nested tolerances agree") {
    ParamCell cell = li2_cell(0.6);
    LogForm f = LogForm::dlog(2, {0, 1});
    QuadratureOptions loose, tight;
    loose.tol = 1e-6;
    tight.tol = 1e-11;
    Integral x = integrate(cell, f, loose), y = integrate(cell, f, tight);
    REQUIRE(x.converged);
    REQUIRE(y.converged);
    CHECK(std::abs(x.total() - y.total()) < 1e-6);
}

TEST_CASE("Poincaré residue") {
    LogForm r = poincare_residue(LogForm::dlog(1, {0}), 0);
    CHECK(r.degree() == 0);
    CHECK(same_form(r, LogForm::one(1)));

    LogForm r1 = poincare_residue(LogForm::dlog(2, {0, 1}), 0);
    CHECK(same_form(r1, LogForm::dlog(2, {1})));
    CHECK(r1.restricted == std::vector<int>{0});
    CHECK(same_form(poincare_residue(LogForm::dlog(2, {0, 1}), 1), LogForm::dlog(2, {0}) * -1.0));

    // iterated residue: res_0 after res_1
    CHECK(same_form(residue(LogForm::dlog(2, {0, 1}), {0, 1}), LogForm::one(2) * -1.0));

    // coefficient restricted to the face, differentials along the axis dropped
    LogForm g = LogForm::dlog(2, {0});
    g.smooth = {{Poly::constant(2, 2) + Poly::z(2, 0) + Poly::z(2, 1, true), {{1, Diff::dz}}},
                {Poly::constant(2, 5), {{0, Diff::dzbar}}}};
    LogForm rg = poincare_residue(g, 0);
    LogForm want = LogForm::smooth_form(2, Poly::constant(2, 2) + Poly::z(2, 1, true), {{1, Diff::dz}});
    CHECK(same_form(rg, want));

    CHECK_THROWS_AS(poincare_residue(LogForm::dlog(2, {1}), 0), NoLogPole);
}

TEST_CASE("residue sign under insertion of a face") {
    // res_{I'} = (-1)^i res_β ∘ res_I with β at position i of I'
    std::mt19937 rng(4);
    for (int trial = 0; trial < 10; ++trial) {
        LogForm phi = random_form(rng, 3, {2, 0, 1}, trial % 2);
        for (int beta = 0; beta < 3; ++beta)
            for (int other = 0; other < 3; ++other) {
                if (other == beta) continue;
                std::vector<int> i_set{other};
                std::vector<int> i_prime{other, beta};
                std::sort(i_prime.begin(), i_prime.end());
                int pos = static_cast<int>(std::find(i_prime.begin(), i_prime.end(), beta) - i_prime.begin());
                LogForm lhs = residue(phi, i_prime);
                LogForm rhs = poincare_residue(residue(phi, i_set), beta) * (pos % 2 ? -1.0 : 1.0);
                CHECK(same_form(lhs, rhs, 1e-9));
            }
    }
}

TEST_CASE("d commutes with residues up to (-1)^{#I}") {
    std::mt19937 rng(8);
    for (int trial = 0; trial < 12; ++trial) {
        LogForm phi = random_form(rng, 3, {0, 1, 2}, trial % 3);
        for (const std::vector<int>& face : {std::vector<int>{0}, {1, 2}, {0, 1, 2}}) {
            LogForm lhs = exterior_d(residue(phi, face));
            LogForm rhs = residue(exterior_d(phi), face) * (face.size() % 2 ? -1.0 : 1.0);
            CHECK(same_form(lhs, rhs, 1e-9));
        }
    }
    // d² = 0
    LogForm phi = random_form(rng, 2, {0}, 0);
    CHECK(exterior_d(exterior_d(phi)).is_zero());
}

TEST_CASE("pairing") {
    LogForm f = LogForm::dlog(1, {0});
    ParamChain c;
    c.add(1, circle(0.5));
    CHECK(std::abs(pairing(c, f).total() - integrate(c, f).total()) < 1e-14);

    // a segment on {z1 = 0}: 2πi ∫ ψ
    ParamCell seg;
    seg.ambient = 2;
    seg.face = {0};
    seg.domain = {{DomainFactor::interval, 1, 0, 0.3}};
    seg.map = [](const std::vector<Jet>& t) {
        return Coords{Coordinate::plain(Jet::constant(0, t[0].n)), Coordinate::plain(1.0 - t[0])};
    };
    ParamChain s;
    s.add(1, seg);
    LogForm g = LogForm::dlog(2, {0, 1});
    Complex want = I2pi * Complex(std::log(0.7));
    CHECK(std::abs(pairing(s, g).total() - want) < 1e-10);

    // #I = 2: a point on {z1 = z2 = 0}
    ParamCell pt;
    pt.ambient = 2;
    pt.face = {0, 1};
    pt.map = [](const std::vector<Jet>&) {
        return Coords{Coordinate::plain(Jet::constant(0, 0)), Coordinate::plain(Jet::constant(0, 0))};
    };
    ParamChain p;
    p.add(1, pt);
    CHECK(std::abs(pairing(p, g).total() + I2pi * I2pi) < 1e-12);
    CHECK(std::abs(pairing(p, LogForm::omega(2, 0, 2)).total() + 1.0) < 1e-12);
}

TEST_CASE("Cauchy–Stokes on the built-in suite") {
    auto cases = builtin_cauchy_stokes_cases();
    CHECK(cases.size() >= 7);
    for (const auto& c : cases) {
        CAPTURE(c.name);
        for (const auto& [q, cell] : c.gamma.terms) CHECK(cell.check_incidences());
        CauchyStokesReport r = verify_cauchy_stokes(c, 1e-6);
        CHECK(r.pass);
        if (c.name == "square-log") {
            CHECK(std::abs(r.lhs - I2pi) < 1e-9);
            CHECK(std::abs(r.rhs - I2pi) < 1e-9);
        }
        if (c.name == "zero") CHECK(r.lhs == Complex(0));
    }
}

TEST_CASE("Cauchy–Stokes fails on a wrong face multiplicity") {
    auto cases = builtin_cauchy_stokes_cases();
    auto c = cases.front();
    c.face_part = c.face_part * Rational(-1);
    CHECK_FALSE(verify_cauchy_stokes(c, 1e-6).pass);
}

TEST_CASE("divergence probe") {
    ParamCell w = diverging_wedge();
    CHECK(w.check_incidences());
    DivergenceReport d = divergence_probe(w, LogForm::dlog(2, {0, 1}));
    CHECK(d.diverged);
    CHECK_FALSE(d.converged);
    CHECK(std::abs(d.trace.back()) > std::abs(d.trace.front()));

    LogForm area = LogForm::smooth_form(2, Poly::constant(2, 1), {{0, Diff::dz}, {1, Diff::dz}});
    DivergenceReport e = divergence_probe(w, area);
    CHECK_FALSE(e.diverged);
    CHECK(e.converged);
    // E_1(1), mpmath
    CHECK(std::abs(e.last - 0.21938393439552027) < 1e-8);

    auto cases = builtin_cauchy_stokes_cases();
    const ParamCell& quadrant = cases.front().gamma.terms.front().second;
    LogForm smooth_log = LogForm::dlog(1, {0});
    smooth_log.smooth.front().coef = Poly::z(1, 0, true);
    LogForm two = exterior_d(smooth_log);
    DivergenceReport q = divergence_probe(quadrant, two);
    CHECK_FALSE(q.diverged);
}

TEST_CASE("declared incidences are checked against the map") {
    ParamCell w = diverging_wedge();
    w.incidences.front().axis = 0;
    CHECK_FALSE(w.check_incidences());
}
