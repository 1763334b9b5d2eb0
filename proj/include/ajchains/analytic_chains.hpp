#pragma once

#include <array>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ajchains/homology_engine.hpp"

namespace ajchains {

using Complex = std::complex<double>;

struct NoLogPole : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DegreeMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct NotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kMaxParams = 8;

// value and first derivatives in the real cell parameters
struct Jet {
    Complex v;
    std::array<Complex, kMaxParams> d{};
    int n = 0;

    static Jet constant(Complex c, int n);
    static Jet variable(double x, int index, int n);
};

Jet operator+(const Jet& a, const Jet& b);
Jet operator-(const Jet& a, const Jet& b);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);
Jet operator-(const Jet& a);
Jet operator+(const Jet& a, Complex c);
Jet operator+(Complex c, const Jet& a);
Jet operator-(const Jet& a, Complex c);
Jet operator-(Complex c, const Jet& a);
Jet operator*(const Jet& a, Complex c);
Jet operator*(Complex c, const Jet& a);
Jet operator/(const Jet& a, Complex c);
Jet operator/(Complex c, const Jet& a);
Jet exp(const Jet& a);
Jet pow(const Jet& a, int k);
Jet conj(const Jet& a);
Jet real_part(const Jet& a);
Jet imag_part(const Jet& a);

// A coordinate of the cell map. Coordinates that reach 0 faster than any
// power are carried through their logarithm so dz/z stays finite.
struct Coordinate {
    Jet z;
    bool has_log = false;
    Jet log;

    static Coordinate plain(const Jet& z) { return {z, false, {}}; }
    static Coordinate exp_of(const Jet& w) { return {exp(w), true, w}; }
    // derivatives of log z; the value slot is unused
    Jet dlog() const;
};

struct DomainFactor {
    enum Kind { interval, simplex } kind = interval;
    int dim = 1;  // simplex: lo <= t_0 <= ... <= t_{dim-1} <= hi
    double lo = 0, hi = 1;
};

// The closure of the cell meets {z_axis = 0 or ∞} where every listed cube
// parameter sits at the given end (false: 0, true: 1).
struct FaceIncidence {
    int axis = 0;
    bool at_infinity = false;
    std::vector<std::pair<int, bool>> locus;
};

struct ParamCell {
    std::string name;
    int ambient = 0;
    std::vector<DomainFactor> domain;
    // domain parameters (jets in the cube parameters) -> coordinates in ℂ^ambient
    std::function<std::vector<Coordinate>(const std::vector<Jet>&)> map;
    int orientation = 1;
    std::vector<FaceIncidence> incidences;
    std::vector<int> face;  // the cell lies on H_face, sorted axes

    int dim() const;
    // u in [0,1]^dim
    std::vector<Coordinate> eval(const std::vector<double>& u) const;
    // each declared incidence: |z_axis| < eps (or > 1/eps) at sampled points
    // next to the locus
    bool check_incidences(int samples = 16, unsigned seed = 1, double eps = 1e-6) const;
};

struct ParamChain {
    int dim = 0;
    std::vector<std::pair<Rational, ParamCell>> terms;

    void add(Rational c, ParamCell cell);
    bool empty() const { return terms.empty(); }
};
ParamChain operator-(const ParamChain& x);
ParamChain operator*(const ParamChain& x, const Rational& q);
ParamChain operator+(const ParamChain& a, const ParamChain& b);

enum class Diff { dz, dzbar };

// polynomial in z_j and z̄_j; the exponent vector holds z-powers then z̄-powers
struct Poly {
    int ambient = 0;
    std::map<std::vector<int>, Complex> terms;

    static Poly constant(int ambient, Complex c);
    static Poly z(int ambient, int axis, bool bar = false);
    Complex eval(const std::vector<Complex>& z) const;
    Poly diff(int axis, bool bar) const;
    Poly restrict_zero(int axis) const;
    bool is_zero() const;
};
Poly operator+(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, Complex c);

struct SmoothTerm {
    Poly coef;
    std::vector<std::pair<int, Diff>> diffs;  // wedged in this order
};

// scalar · (2πi)^two_pi_i · dz_{a1}/z_{a1} ∧ ... ∧ dz_{ar}/z_{ar} ∧ Σ coef · dz.. ∧ dz̄..
struct LogForm {
    int ambient = 0;
    std::vector<int> log_axes;
    std::vector<SmoothTerm> smooth;
    Complex scalar = 1;
    int two_pi_i = 0;
    std::vector<int> restricted;  // axes set to 0 by residues

    int degree() const;  // -1 for the zero form
    bool is_zero() const;
    // log axes sorted, differentials sorted, like terms merged, zero terms dropped
    LogForm normalized() const;

    static LogForm one(int ambient);
    // (2πi)^{-count} dz/z ∧ ... on axes offset .. offset + count - 1
    static LogForm omega(int ambient, int offset, int count);
    static LogForm dlog(int ambient, std::vector<int> axes);
    static LogForm smooth_form(int ambient, Poly coef, std::vector<std::pair<int, Diff>> diffs);
};
LogForm operator+(const LogForm& a, const LogForm& b);
LogForm operator*(const LogForm& a, Complex c);
LogForm wedge(const LogForm& a, const LogForm& b);
bool same_form(const LogForm& a, const LogForm& b, double eps = 1e-12);

// φ = dz_i/z_i ∧ ψ + η  ↦  ψ|_{z_i = 0}
LogForm poincare_residue(const LogForm& phi, int axis);
// res_{i1} ∘ ... ∘ res_{ik} for I = {i1 < ... < ik}
LogForm residue(const LogForm& phi, std::vector<int> axes);
LogForm exterior_d(const LogForm& phi);

// coefficient of du_1 ∧ ... ∧ du_k in the pullback, (2πi) power left out
Complex pullback_density(const LogForm& phi, const std::vector<Coordinate>& x, int k);

struct QuadratureOptions {
    double tol = 1e-9;
    int max_rounds = 14;
    long max_evals = 40'000'000;
    int threads = 0;  // 0: AJCHAINS_THREADS, else 1
};

struct Integral {
    Complex value;  // (2πi) power not applied
    int two_pi_i = 0;
    double abs_err = 0;
    bool converged = true;
    bool budget_exceeded = false;
    long evals = 0;
    std::vector<Complex> rounds;  // partial values per round, single cells only

    Complex total() const;
};

Integral integrate(const ParamCell& cell, const LogForm& phi, const QuadratureOptions& opt = {});
Integral integrate(const ParamChain& chain, const LogForm& phi, const QuadratureOptions& opt = {});
// (2πi)^{#I} ∫_γ res_I φ, I read off each cell's face
Integral pairing(const ParamChain& gamma, const LogForm& phi, const QuadratureOptions& opt = {});

struct CauchyStokesCase {
    std::string name;
    ParamChain gamma;      // on H_I
    ParamChain face_part;  // ∂_H γ with multiplicities
    ParamChain boundary;   // δγ
    LogForm phi;
    int face_count = 0;  // #I
};

struct CauchyStokesReport {
    std::string name;
    Complex lhs, rhs;
    Complex delta_term, d_term;
    double abs_err = 0, tol = 0;
    bool pass = false;
    bool converged = true;
    long evals = 0;
};

CauchyStokesReport verify_cauchy_stokes(const CauchyStokesCase& c, double tol = 1e-6);
std::vector<CauchyStokesCase> builtin_cauchy_stokes_cases();

struct DivergenceReport {
    bool diverged = false;
    bool converged = false;
    std::vector<Complex> trace;
    Complex last;
};
DivergenceReport divergence_probe(const ParamCell& cell, const LogForm& phi, int budget_rounds = 12);

// {1 <= x <= 2, e^{-1/(x-1)} <= y <= e^{-1}} in ℝ² ⊂ ℂ²
ParamCell diverging_wedge();

int thread_count(int requested = 0);

}  // namespace ajchains
