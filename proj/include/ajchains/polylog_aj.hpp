#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "ajchains/analytic_chains.hpp"

namespace ajchains {

struct BadParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct BadIndex : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct OutOfRadius : std::domain_error {
    using std::domain_error::domain_error;
};
struct LadderBroken : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// a cell meets a cube face in the wrong dimension
struct ImproperIntersection : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- symbolic cells

struct Atom {
    enum Kind { variable, constant, infinity } kind = constant;
    int var = -1;
    Complex value = 0;

    static Atom of(int v) { return {variable, v, 0}; }
    static Atom c(Complex z) { return {constant, -1, z}; }
    static Atom inf() { return {infinity, -1, 0}; }
    bool is_var() const { return kind == variable; }
};
bool operator==(const Atom& a, const Atom& b);

// the cube coordinate 1 - num/den
struct CubeCoord {
    Atom num, den;
};

// Variables are either complex (free on ℙ¹) or real; the real ones form a
// chain 0 <= s[chain[0]] <= ... <= s[chain.back()] <= upper. Orientation:
// complex variables in index order (re, im), then the chain in order.
struct PolyCell {
    std::string name;
    std::vector<char> is_complex;
    std::vector<char> alive;
    std::vector<int> chain;
    double upper = 1;
    std::vector<Atom> y;
    std::vector<CubeCoord> cube;

    int y_dim() const { return static_cast<int>(y.size()); }
    int cube_dim() const { return static_cast<int>(cube.size()); }
    int dim() const;
    int add_complex();
    int add_real();
    void substitute(int var, Atom by);
    // some cube coordinate is identically 1
    bool in_divisor() const;
    // real parameters (orientation order) -> coordinates, Y then cube;
    // ∞ is a value with an infinite real part
    std::vector<Jet> coordinates(const std::vector<double>& params) const;
};

struct PolyTerm {
    Rational coef = 1;
    PolyCell cell;
};

struct PolyChain {
    int y_dim = 0, cube_dim = 0;
    std::vector<PolyTerm> terms;
    bool alternating = true;  // stands for Alt_× of the listed representatives

    void add(Rational coef, PolyCell cell);
};
PolyChain operator-(const PolyChain& x);
PolyChain operator*(const PolyChain& x, const Rational& s);
PolyChain operator+(const PolyChain& a, const PolyChain& b);

// δ on the chain of real variables
PolyChain chain_boundary(const PolyChain& x);
// ∂_□ = Σ_j (-1)^j (∂_{j,0} - ∂_{j,∞})
PolyChain cube_boundary(const PolyChain& x);
// Σ_j (-1)^j (ι^j_a - ι^j_{1/a}), inserting a constant Y coordinate at j
PolyChain y_boundary(const PolyChain& x, double a);
// intersection with {y_axis = 0 or ∞}; the axis is kept, as a constant
PolyChain v_pullback(const PolyChain& x, int y_axis, bool at_infinity, bool keep_divisor = false);

ParamChain to_param_chain(const PolyChain& x);
// every g·cell for g in G_{k-1} × G_l with coefficient sign(g)/|G|
ParamChain alt_expand(const PolyChain& x);

// ---------------------------------------------------------------- the families

// ρ_k(a), k = p - c, with the sign (-1)^{p-k}
PolyChain rho_cells(int p, int c, double a);
// η_k(i); orientation 0 reads the frozen table
PolyChain eta_cells(int p, int c, int i, double a, int orientation = 0);

ParamChain rho_cycle(int p, int c, double a);
ParamChain eta_chain(int p, int c, int i, double a);

// the frozen orientation of η_{p-c}(i); 0 outside the table
int eta_orientation(int p, int c, int i);

// ---------------------------------------------------------------- sampled relations

struct SampledComparison {
    int samples = 0;   // points where the sampled side is nonzero after Alt
    int matched = 0;   // other side nonzero with the same sign
    int opposite = 0;  // other side nonzero with the opposite sign
    int null_points = 0;
    bool exact = true;  // Alt-multiplicities agree, not only signs
    bool pass() const { return matched == samples; }
};

// Alt(lhs) against Alt(rhs) at points sampled on both sides
SampledComparison compare_sampled(const PolyChain& lhs, const PolyChain& rhs, int n_samples, unsigned seed = 1);
// sampled points of x lie in D or have Alt-multiplicity 0 (matched counts those)
SampledComparison check_null(const PolyChain& x, int n_samples, unsigned seed = 1);

struct RelationCheck {
    std::string name;
    SampledComparison stats;
    bool pass = false;
};

struct BoundaryReport {
    int p = 0;
    double a = 0;
    std::vector<RelationCheck> relations;
    bool pass() const;
};

// a_rhs != a builds the right hand sides at a_rhs
BoundaryReport check_boundary_relations(int p, double a, int n_samples = 100, double a_rhs = 0);

// orientation of each η_{p-c}(i) forced by the relations, keyed by (c, i);
// 0 where the relations disagree
std::map<std::pair<int, int>, int> solve_eta_orientations(int p, double a, int n_samples = 40);

// ---------------------------------------------------------------- values

Complex li_oracle(int k, Complex a, double tol = 1e-15);

// sign fixing the final display's dt_0 convention, set from p = 2
inline constexpr int kPolylogConvention = -1;

// positions in (1,a) < (1,1/a) < (2,1/a) < (2,a) < (3,a) < ...
std::vector<std::pair<int, bool>> face_index_set(int p);

struct AJTerm {
    int i = 0;
    Integral integral;
    Complex value;  // (2πi) power applied, signs included
};

struct AJResult {
    int p = 0;
    std::vector<int> J;
    double a = 0;
    int weight = 0;  // p - #J
    std::vector<AJTerm> terms;
    Complex total, oracle;
    Complex raw_total;  // before kPolylogConvention
    int two_pi_i = 0;
    int s_sign = 1;  // sign of D_J in s, not part of the displayed sum
    double abs_err = 0, rel_err = 0;
    double tol = 0;
    bool type_vanishing = true;
    bool converged = true;
    bool pass = false;
};

// flip_eps negates (-1)^{ε(#J, i)}, for mutation checks
AJResult aj_evaluate(int p, std::vector<int> J, double a, double tol = 1e-6, bool flip_eps = false);

// γ_0 .. γ_n on Y × □^j, with ∂_□γ_{j+1} = δγ_j modulo D_Y
std::vector<PolyChain> polylog_ladder(int p, double a);
// ladder relations up to pieces with a constant Y coordinate
bool ladder_holds(const std::vector<PolyChain>& ladder, int n_samples = 40);

Complex psi_evaluate(const std::vector<PolyChain>& ladder, const LogForm& phi, double tol = 1e-8,
                     bool check = true);

}  // namespace ajchains
