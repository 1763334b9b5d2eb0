#include "ajchains/polylog_aj.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <optional>
#include <random>
#include <set>

#include "ajchains/cubical_alt.hpp"

namespace ajchains {

namespace {

const Complex kInf(std::numeric_limits<double>::infinity(), 0);
const Complex two_pi_i_value(0, 2 * std::numbers::pi);

bool is_inf(Complex z) { return std::isinf(z.real()) || std::isinf(z.imag()); }

int sgn(int e) { return e % 2 ? -1 : 1; }

// constant value of 1 - num/den, if the atoms force one
std::optional<Complex> constant_value(const CubeCoord& c) {
    const Atom &n = c.num, &d = c.den;
    if (n == d) return Complex(0);
    bool n0 = n.kind == Atom::constant && n.value == Complex(0);
    bool d0 = d.kind == Atom::constant && d.value == Complex(0);
    if (n0 && !d0) return Complex(1);
    if (d.kind == Atom::infinity && n.kind != Atom::infinity) return Complex(1);
    if (n.kind == Atom::infinity && d.kind != Atom::infinity) return kInf;
    if (d0 && !n0) return kInf;
    if (n.kind == Atom::constant && d.kind == Atom::constant) return 1.0 - n.value / d.value;
    return std::nullopt;
}

Jet invert(const Jet& z) {
    if (is_inf(z.v)) return Jet::constant(0, z.n);
    if (z.v == Complex(0)) return Jet::constant(kInf, z.n);
    return Complex(1) / z;
}

Jet atom_jet(const Atom& a, const std::vector<Jet>& vars, int n) {
    if (a.kind == Atom::variable) return vars[a.var];
    return Jet::constant(a.kind == Atom::infinity ? kInf : a.value, n);
}

std::vector<Jet> cell_coordinates(const PolyCell& cell, const std::vector<Jet>& vars, int n) {
    std::vector<Jet> out;
    for (const Atom& a : cell.y) out.push_back(atom_jet(a, vars, n));
    for (const CubeCoord& c : cell.cube) {
        if (auto v = constant_value(c)) {
            out.push_back(Jet::constant(*v, n));
            continue;
        }
        Jet num = atom_jet(c.num, vars, n), den = atom_jet(c.den, vars, n);
        if (is_inf(num.v) || den.v == Complex(0))
            out.push_back(Jet::constant(kInf, n));
        else if (is_inf(den.v))
            out.push_back(Jet::constant(1, n));
        else
            out.push_back(1.0 - num / den);
    }
    return out;
}

}  // namespace

bool operator==(const Atom& a, const Atom& b) {
    if (a.kind != b.kind) return false;
    if (a.kind == Atom::variable) return a.var == b.var;
    if (a.kind == Atom::constant) return a.value == b.value;
    return true;
}

// ---------------------------------------------------------------- cells

int PolyCell::dim() const {
    int d = 0;
    for (size_t v = 0; v < alive.size(); ++v)
        if (alive[v]) d += is_complex[v] ? 2 : 1;
    return d;
}

int PolyCell::add_complex() {
    is_complex.push_back(1);
    alive.push_back(1);
    return static_cast<int>(alive.size()) - 1;
}

int PolyCell::add_real() {
    is_complex.push_back(0);
    alive.push_back(1);
    chain.push_back(static_cast<int>(alive.size()) - 1);
    return chain.back();
}

void PolyCell::substitute(int var, Atom by) {
    auto fix = [&](Atom& x) {
        if (x.is_var() && x.var == var) x = by;
    };
    for (Atom& a : y) fix(a);
    for (CubeCoord& c : cube) {
        fix(c.num);
        fix(c.den);
    }
    alive[var] = 0;
    chain.erase(std::remove(chain.begin(), chain.end(), var), chain.end());
}

bool PolyCell::in_divisor() const {
    for (const CubeCoord& c : cube) {
        auto v = constant_value(c);
        if (v && *v == Complex(1)) return true;
    }
    return false;
}

std::vector<Jet> PolyCell::coordinates(const std::vector<double>& params) const {
    int n = dim();
    std::vector<Jet> vars(alive.size());
    int k = 0;
    for (size_t v = 0; v < alive.size(); ++v) {
        if (!alive[v] || !is_complex[v]) continue;
        vars[v] = Jet::variable(params[k], k, n) + Complex(0, 1) * Jet::variable(params[k + 1], k + 1, n);
        k += 2;
    }
    for (int v : chain) {
        vars[v] = Jet::variable(params[k], k, n);
        ++k;
    }
    return cell_coordinates(*this, vars, n);
}

void PolyChain::add(Rational coef, PolyCell cell) {
    if (coef == 0) return;
    if (terms.empty()) {
        y_dim = cell.y_dim();
        cube_dim = cell.cube_dim();
    }
    terms.push_back({coef, std::move(cell)});
}

PolyChain operator*(const PolyChain& x, const Rational& s) {
    PolyChain r = x;
    for (auto& t : r.terms) t.coef *= s;
    return r;
}

PolyChain operator-(const PolyChain& x) { return x * Rational(-1); }

PolyChain operator+(const PolyChain& a, const PolyChain& b) {
    PolyChain r = a;
    if (r.terms.empty()) {
        r.y_dim = b.y_dim;
        r.cube_dim = b.cube_dim;
    }
    for (const auto& t : b.terms) r.add(t.coef, t.cell);
    return r;
}

// ---------------------------------------------------------------- boundaries

namespace {

PolyChain shaped_like(const PolyChain& x, int dy, int dc) {
    PolyChain out;
    out.y_dim = x.y_dim + dy;
    out.cube_dim = x.cube_dim + dc;
    out.alternating = x.alternating;
    return out;
}

void add_piece(PolyChain& out, const Rational& coef, PolyCell cell) {
    if (!cell.in_divisor()) out.add(coef, std::move(cell));
}

bool complex_var(const PolyCell& cell, const Atom& a) { return a.is_var() && cell.is_complex[a.var]; }

// pieces of cell ∩ {cube_j = 0 or ∞}, coordinate j dropped, multiplicity +1
std::vector<PolyCell> cube_face(const PolyCell& cell, int j, bool at_infinity) {
    const CubeCoord& c = cell.cube[j];
    std::vector<PolyCell> out;
    auto take = [&](int var, Atom by) {
        PolyCell piece = cell;
        piece.substitute(var, by);
        piece.cube.erase(piece.cube.begin() + j);
        out.push_back(std::move(piece));
    };
    if (auto v = constant_value(c)) {
        if (at_infinity ? is_inf(*v) : *v == Complex(0))
            throw ImproperIntersection(cell.name + " lies in a cube face");
        return out;
    }
    if (at_infinity) {
        if (complex_var(cell, c.num)) take(c.num.var, Atom::inf());
        if (complex_var(cell, c.den)) take(c.den.var, Atom::c(0));
        return out;
    }
    if (complex_var(cell, c.num)) {
        take(c.num.var, c.den);
    } else if (complex_var(cell, c.den)) {
        take(c.den.var, c.num);
    } else {
        // a real variable against a constant: empty unless it cuts the interior
        if (c.num.is_var() && c.den.is_var()) throw ImproperIntersection(cell.name + ": real equation in a face");
        const Atom& k = c.num.is_var() ? c.den : c.num;
        if (k.kind == Atom::infinity) return out;
        Complex v = k.value;
        if (v.imag() == 0 && v.real() > 0 && v.real() < cell.upper)
            throw ImproperIntersection(cell.name + ": real equation in a face");
    }
    return out;
}

}  // namespace

PolyChain chain_boundary(const PolyChain& x) {
    PolyChain out = shaped_like(x, 0, 0);
    for (const auto& t : x.terms) {
        const auto& ch = t.cell.chain;
        int q = static_cast<int>(ch.size());
        if (q == 0) continue;
        PolyCell lo = t.cell;
        lo.substitute(ch[0], Atom::c(0));
        add_piece(out, -t.coef, std::move(lo));
        for (int j = 0; j + 1 < q; ++j) {
            PolyCell mid = t.cell;
            mid.substitute(ch[j], Atom::of(ch[j + 1]));
            add_piece(out, t.coef * sgn(j), std::move(mid));
        }
        PolyCell hi = t.cell;
        hi.substitute(ch[q - 1], Atom::c(t.cell.upper));
        add_piece(out, t.coef * sgn(q - 1), std::move(hi));
    }
    return out;
}

PolyChain cube_boundary(const PolyChain& x) {
    PolyChain out = shaped_like(x, 0, -1);
    for (const auto& t : x.terms)
        for (int j = 0; j < t.cell.cube_dim(); ++j)
            for (bool inf : {false, true})
                for (auto& piece : cube_face(t.cell, j, inf))
                    add_piece(out, t.coef * (sgn(j) * (inf ? -1 : 1)), std::move(piece));
    return out;
}

PolyChain y_boundary(const PolyChain& x, double a) {
    PolyChain out = shaped_like(x, 1, 0);
    for (const auto& t : x.terms)
        for (int pos = 0; pos <= t.cell.y_dim(); ++pos)
            for (bool inverse : {false, true}) {
                PolyCell c = t.cell;
                c.y.insert(c.y.begin() + pos, Atom::c(inverse ? 1 / a : a));
                add_piece(out, t.coef * (sgn(pos) * (inverse ? -1 : 1)), std::move(c));
            }
    return out;
}

PolyChain v_pullback(const PolyChain& x, int y_axis, bool at_infinity, bool keep_divisor) {
    PolyChain out = shaped_like(x, 0, 0);
    for (const auto& t : x.terms) {
        const Atom at = t.cell.y.at(y_axis);
        if (!at.is_var()) {
            bool hit = at_infinity ? at.kind == Atom::infinity : at.kind == Atom::constant && at.value == Complex(0);
            if (hit) throw ImproperIntersection(t.cell.name + " lies in V");
            continue;
        }
        PolyCell c = t.cell;
        if (c.is_complex[at.var]) {
            c.substitute(at.var, at_infinity ? Atom::inf() : Atom::c(0));
        } else {
            if (at_infinity) continue;
            // a chain variable at 0 pulls every smaller one down with it
            auto stop = std::find(c.chain.begin(), c.chain.end(), at.var);
            std::vector<int> lower(c.chain.begin(), stop + 1);
            for (int v : lower) c.substitute(v, Atom::c(0));
        }
        if (keep_divisor)
            out.add(t.coef, std::move(c));
        else
            add_piece(out, t.coef, std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------- parametrized cells

namespace {

Jet tan_half_pi(const Jet& u) {
    double t = std::tan(std::numbers::pi / 2 * u.v.real());
    Jet r = u;
    r.v = t;
    for (int i = 0; i < r.n; ++i) r.d[i] = u.d[i] * (std::numbers::pi / 2 * (1 + t * t));
    return r;
}

ParamCell param_cell(const PolyCell& cell, bool incidences) {
    ParamCell out;
    out.name = cell.name;
    out.ambient = cell.y_dim() + cell.cube_dim();
    std::vector<int> complex_vars;
    for (size_t v = 0; v < cell.alive.size(); ++v)
        if (cell.alive[v] && cell.is_complex[v]) complex_vars.push_back(static_cast<int>(v));
    // seams rotated per variable so tensor nodes stay off the diagonals x_m = x_n
    for (size_t m = 0; m < complex_vars.size(); ++m) {
        double seam = 0.7 * static_cast<double>(m);
        out.domain.push_back({DomainFactor::interval, 1, 0, 1});
        out.domain.push_back({DomainFactor::interval, 1, seam, seam + 2 * std::numbers::pi});
    }
    int q = static_cast<int>(cell.chain.size());
    if (q > 0) out.domain.push_back({DomainFactor::simplex, q, 0, cell.upper});
    out.map = [cell, complex_vars](const std::vector<Jet>& t) {
        int n = t.empty() ? 0 : t[0].n;
        std::vector<Jet> vars(cell.alive.size());
        size_t k = 0;
        for (int v : complex_vars) {
            vars[v] = tan_half_pi(t[k]) * exp(Complex(0, 1) * t[k + 1]);
            k += 2;
        }
        for (int v : cell.chain) vars[v] = t[k++];
        std::vector<Coordinate> z;
        for (const Jet& j : cell_coordinates(cell, vars, n)) z.push_back(Coordinate::plain(j));
        return z;
    };
    if (!incidences) return out;

    // an end of a domain parameter where a coordinate goes to 0 or ∞
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uni(0.1, 0.9);
    int d = out.dim();
    for (int p = 0; p < d; ++p)
        for (bool upper : {false, true})
            for (int axis = 0; axis < out.ambient; ++axis) {
                int zero = 0, inf = 0;
                const int trials = 6;
                for (int s = 0; s < trials; ++s) {
                    std::vector<double> u(d);
                    for (auto& x : u) x = uni(rng);
                    u[p] = upper ? 1 - 1e-12 : 1e-12;
                    double r = std::abs(out.eval(u)[axis].z.v);
                    zero += r < 1e-8;
                    inf += r > 1e8;
                }
                if (zero == trials || inf == trials)
                    out.incidences.push_back({axis, inf == trials, {{p, upper}}});
            }
    return out;
}

}  // namespace

ParamChain to_param_chain(const PolyChain& x) {
    ParamChain out;
    for (const auto& t : x.terms) out.add(t.coef, param_cell(t.cell, true));
    return out;
}

namespace {

ParamChain bare_param_chain(const PolyChain& x) {
    ParamChain out;
    for (const auto& t : x.terms) out.add(t.coef, param_cell(t.cell, false));
    return out;
}

}  // namespace

ParamChain alt_expand(const PolyChain& x) {
    auto gy = cube_group(x.y_dim), gc = cube_group(x.cube_dim);
    Rational order(static_cast<long>(gy.size() * gc.size()));
    int ny = x.y_dim;
    ParamChain out;
    for (const auto& t : x.terms) {
        ParamCell base = param_cell(t.cell, false);
        for (const auto& a : gy)
            for (const auto& b : gc) {
                ParamCell moved = base;
                moved.map = [inner = base.map, a, b, ny](const std::vector<Jet>& u) {
                    std::vector<Coordinate> z = inner(u), out(z.size());
                    for (int i = 0; i < a.n(); ++i)
                        out[a.perm[i]] = Coordinate::plain(a.eps[i] < 0 ? Complex(1) / z[i].z : z[i].z);
                    for (int i = 0; i < b.n(); ++i)
                        out[ny + b.perm[i]] = Coordinate::plain(b.eps[i] < 0 ? Complex(1) / z[ny + i].z : z[ny + i].z);
                    return out;
                };
                out.add(t.coef * Rational(a.sign() * b.sign()) / order, std::move(moved));
            }
    }
    return out;
}

// ---------------------------------------------------------------- families

namespace {

void check_a(double a) {
    if (!std::isfinite(a) || a == 0 || a == 1) throw BadParameter("a must avoid 0 and 1");
}

}  // namespace

PolyChain rho_cells(int p, int c, double a) {
    if (p < 1 || c < 0 || c > p - 1) throw BadParameter("rho needs 0 <= c <= p-1");
    check_a(a);
    int k = p - c;
    PolyCell cell;
    cell.name = "rho_" + std::to_string(k);
    cell.upper = a;
    std::vector<int> x;
    for (int m = 0; m + 1 < k; ++m) x.push_back(cell.add_complex());
    for (int v : x) cell.y.push_back(Atom::of(v));
    Atom prev = Atom::c(1);
    for (int v : x) {
        cell.cube.push_back({Atom::of(v), prev});
        prev = Atom::of(v);
    }
    cell.cube.push_back({Atom::c(a), prev});
    PolyChain out;
    out.add(sgn(p - k), std::move(cell));
    return out;
}

PolyChain eta_cells(int p, int c, int i, double a, int orientation) {
    if (p < 1 || c < 0 || c > p - 1) throw BadIndex("eta needs 0 <= c <= p-1");
    int k = p - c;
    if (i < 0 || i > k - 1) throw BadIndex("eta needs 0 <= i <= p-c-1");
    if (!(a > 0 && a < 1)) throw BadParameter("eta is built for real 0 < a < 1");
    if (orientation == 0) orientation = eta_orientation(p, c, i);
    if (orientation == 0) throw BadIndex("no orientation recorded for this weight");
    PolyCell cell;
    cell.name = "eta_" + std::to_string(k) + "(" + std::to_string(i) + ")";
    cell.upper = a;
    std::vector<int> x, t;
    for (int m = 0; m < i; ++m) x.push_back(cell.add_complex());
    for (int m = i; m < k; ++m) t.push_back(cell.add_real());  // t_i .. t_{k-1}
    for (int v : x) cell.y.push_back(Atom::of(v));
    for (size_t m = 1; m < t.size(); ++m) cell.y.push_back(Atom::of(t[m]));
    Atom prev = Atom::c(1);
    for (int v : x) {
        cell.cube.push_back({Atom::of(v), prev});
        prev = Atom::of(v);
    }
    cell.cube.push_back({Atom::of(t[0]), prev});
    PolyChain out;
    out.add(orientation, std::move(cell));
    return out;
}

ParamChain rho_cycle(int p, int c, double a) { return to_param_chain(rho_cells(p, c, a)); }

ParamChain eta_chain(int p, int c, int i, double a) {
    if (!(a > 0 && a < 1)) throw BadParameter("eta is built for real 0 < a < 1");
    return to_param_chain(eta_cells(p, c, i, a));
}

int eta_orientation(int p, int c, int i) {
    // solved by solve_eta_orientations, keyed (p, k = p - c, i)
    static const std::map<std::tuple<int, int, int>, int> table = {
        {{1, 1, 0}, 1},
        {{2, 1, 0}, -1}, {{2, 2, 1}, 1}, {{2, 2, 0}, 1},
        {{3, 1, 0}, 1}, {{3, 2, 1}, -1}, {{3, 2, 0}, -1}, {{3, 3, 2}, 1}, {{3, 3, 1}, -1}, {{3, 3, 0}, 1},
    };
    auto it = table.find({p, p - c, i});
    return it == table.end() ? 0 : it->second;
}

// ---------------------------------------------------------------- sampling

namespace {

struct Group {
    std::vector<CubeSymmetry> y, cube;
};

Group product_group(int ny, int nc) { return {cube_group(ny), cube_group(nc)}; }

std::vector<Jet> act(const CubeSymmetry& gy, const CubeSymmetry& gc, const std::vector<Jet>& x, int ny) {
    std::vector<Jet> out(x.size());
    for (int i = 0; i < gy.n(); ++i) out[gy.perm[i]] = gy.eps[i] < 0 ? invert(x[i]) : x[i];
    for (int i = 0; i < gc.n(); ++i) out[ny + gc.perm[i]] = gc.eps[i] < 0 ? invert(x[ny + i]) : x[ny + i];
    return out;
}

Eigen::MatrixXd real_jacobian(const std::vector<Jet>& z, int d) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(2 * static_cast<int>(z.size()), d);
    for (size_t r = 0; r < z.size(); ++r) {
        if (is_inf(z[r].v)) continue;
        for (int c = 0; c < d; ++c) {
            m(2 * r, c) = z[r].d[c].real();
            m(2 * r + 1, c) = z[r].d[c].imag();
        }
    }
    return m;
}

bool close(Complex a, Complex b) {
    if (is_inf(a) || is_inf(b)) return is_inf(a) && is_inf(b);
    return std::abs(a - b) <= 1e-7 * (1 + std::abs(b));
}

// parameters of cell hitting the target point, if it lies on the cell
std::optional<std::vector<double>> locate(const PolyCell& cell, const std::vector<Complex>& target) {
    int ny = cell.y_dim();
    std::vector<std::optional<Complex>> val(cell.alive.size());
    auto known = [&](const Atom& a) -> std::optional<Complex> {
        if (a.kind == Atom::variable) return val[a.var];
        if (a.kind == Atom::infinity) return kInf;
        return a.value;
    };
    for (int i = 0; i < ny; ++i)
        if (cell.y[i].is_var() && !val[cell.y[i].var]) {
            if (is_inf(target[i])) return std::nullopt;
            val[cell.y[i].var] = target[i];
        }
    for (bool progress = true; progress;) {
        progress = false;
        for (int j = 0; j < cell.cube_dim(); ++j) {
            Complex w = 1.0 - target[ny + j];
            if (is_inf(w)) continue;
            const CubeCoord& c = cell.cube[j];
            auto n = known(c.num), d = known(c.den);
            if (c.num.is_var() && !n && d && !is_inf(*d)) {
                val[c.num.var] = *d * w;
                progress = true;
            } else if (c.den.is_var() && !d && n && !is_inf(*n) && w != Complex(0)) {
                val[c.den.var] = *n / w;
                progress = true;
            }
        }
    }
    std::vector<double> params;
    for (size_t v = 0; v < cell.alive.size(); ++v) {
        if (!cell.alive[v] || !cell.is_complex[v]) continue;
        if (!val[v]) return std::nullopt;
        params.push_back(val[v]->real());
        params.push_back(val[v]->imag());
    }
    double prev = 0;
    for (int v : cell.chain) {
        if (!val[v]) return std::nullopt;
        Complex s = *val[v];
        if (std::abs(s.imag()) > 1e-9 * (1 + std::abs(s))) return std::nullopt;
        if (s.real() < prev - 1e-9) return std::nullopt;
        prev = s.real();
        params.push_back(s.real());
    }
    if (prev > cell.upper + 1e-9) return std::nullopt;
    auto z = cell.coordinates(params);
    for (size_t r = 0; r < z.size(); ++r)
        if (!close(z[r].v, target[r])) return std::nullopt;
    return params;
}

// sign of the frame change from the cell's parameters to the reference frame
int orientation_sign(const Eigen::MatrixXd& cell_jac, const Eigen::MatrixXd& frame) {
    int d = static_cast<int>(cell_jac.cols());
    if (d == 0) return 1;
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(cell_jac);
    if (qr.rank() < d) return 0;
    Eigen::MatrixXd m = qr.solve(frame);
    if ((cell_jac * m - frame).norm() > 1e-6 * (1 + frame.norm())) return 0;
    double det = m.determinant();
    if (std::abs(det) < 1e-12) return 0;
    return det > 0 ? 1 : -1;
}

struct Side {
    std::vector<const PolyTerm*> terms;
};

Side nonnull_terms(const PolyChain& x, int d) {
    Side s;
    for (const auto& t : x.terms) {
        if (t.cell.in_divisor()) continue;
        if (t.cell.dim() != d) throw DegreeMismatch(t.cell.name + " has the wrong dimension");
        s.terms.push_back(&t);
    }
    return s;
}

// Σ_g sign(g) · coef · [x ∈ g·cell] · orientation, i.e. |G| times the
// local multiplicity of Alt(side) at x
Rational multiplicity(const Side& side, const std::vector<Jet>& x, int ny, const Group& group, int d) {
    Rational m = 0;
    for (const auto& gy : group.y)
        for (const auto& gc : group.cube) {
            std::vector<Jet> gx = act(gy, gc, x, ny);
            std::vector<Complex> target;
            for (const Jet& j : gx) target.push_back(j.v);
            Eigen::MatrixXd frame = real_jacobian(gx, d);
            int s = gy.sign() * gc.sign();
            for (const PolyTerm* t : side.terms) {
                auto q = locate(t->cell, target);
                if (!q) continue;
                int o = orientation_sign(real_jacobian(t->cell.coordinates(*q), d), frame);
                if (o) m += t->coef * (s * o);
            }
        }
    return m;
}

// a generic point on the cell, or nothing if the cell is degenerate
std::optional<std::vector<Jet>> sample_point(const PolyCell& cell, std::mt19937& rng) {
    std::uniform_real_distribution<double> logr(std::log(0.25), std::log(4.0)), ang(0, 2 * std::numbers::pi),
        uni(0, 1);
    int d = cell.dim();
    for (int attempt = 0; attempt < 20; ++attempt) {
        std::vector<double> params;
        for (size_t v = 0; v < cell.alive.size(); ++v) {
            if (!cell.alive[v] || !cell.is_complex[v]) continue;
            Complex z = std::polar(std::exp(logr(rng)), ang(rng));
            params.push_back(z.real());
            params.push_back(z.imag());
        }
        std::vector<double> s(cell.chain.size());
        for (auto& v : s) v = cell.upper * uni(rng);
        std::sort(s.begin(), s.end());
        params.insert(params.end(), s.begin(), s.end());
        auto z = cell.coordinates(params);
        bool ok = true;
        for (const Jet& j : z) {
            bool constant = std::all_of(j.d.begin(), j.d.begin() + d, [](Complex c) { return c == Complex(0); });
            if (constant) continue;
            double r = std::abs(j.v);
            if (!std::isfinite(r) || r < 1e-6 || r > 1e6) ok = false;
        }
        if (!ok) continue;
        if (d > 0 && Eigen::FullPivLU<Eigen::MatrixXd>(real_jacobian(z, d)).rank() < d) return std::nullopt;
        return z;
    }
    return std::nullopt;
}

int common_dim(const PolyChain& a, const PolyChain& b) {
    for (const PolyChain* x : {&a, &b})
        for (const auto& t : x->terms)
            if (!t.cell.in_divisor()) return t.cell.dim();
    return -1;
}

}  // namespace

SampledComparison compare_sampled(const PolyChain& lhs, const PolyChain& rhs, int n_samples, unsigned seed) {
    SampledComparison out;
    int d = common_dim(lhs, rhs);
    if (d < 0) return out;
    int ny = std::max(lhs.y_dim, rhs.y_dim), nc = std::max(lhs.cube_dim, rhs.cube_dim);
    if ((!lhs.terms.empty() && (lhs.y_dim != ny || lhs.cube_dim != nc)) ||
        (!rhs.terms.empty() && (rhs.y_dim != ny || rhs.cube_dim != nc)))
        throw DegreeMismatch("compared chains live on different products");
    Group group = product_group(ny, nc);
    Side l = nonnull_terms(lhs, d), r = nonnull_terms(rhs, d);
    std::mt19937 rng(seed);
    for (int pass = 0; pass < 2; ++pass) {
        const Side& from = pass ? r : l;
        const Side& other = pass ? l : r;
        std::vector<const PolyTerm*> pool;
        for (const PolyTerm* t : from.terms) {
            std::mt19937 probe(seed + 17);
            if (sample_point(t->cell, probe)) pool.push_back(t);
        }
        if (pool.empty()) continue;
        for (int s = 0; s < n_samples; ++s) {
            const PolyTerm* t = pool[s % pool.size()];
            auto x = sample_point(t->cell, rng);
            if (!x) continue;
            Rational mf = multiplicity(from, *x, ny, group, d);
            if (mf == 0) {
                ++out.null_points;
                continue;
            }
            Rational mo = multiplicity(other, *x, ny, group, d);
            ++out.samples;
            if (mo != 0 && (mo > 0) == (mf > 0))
                ++out.matched;
            else if (mo != 0)
                ++out.opposite;
            if (mo != mf) out.exact = false;
        }
    }
    return out;
}

SampledComparison check_null(const PolyChain& x, int n_samples, unsigned seed) {
    SampledComparison out;
    if (x.terms.empty()) return out;
    int d = x.terms.front().cell.dim();
    Group group = product_group(x.y_dim, x.cube_dim);
    PolyChain proper = x;
    proper.terms.clear();
    for (const auto& t : x.terms)
        if (!t.cell.in_divisor()) proper.add(t.coef, t.cell);
    Side side = nonnull_terms(proper, d);
    std::mt19937 rng(seed);
    for (int s = 0; s < n_samples; ++s) {
        auto p = sample_point(x.terms[s % x.terms.size()].cell, rng);
        if (!p) continue;
        ++out.samples;
        bool in_d = false;
        for (int j = 0; j < x.cube_dim; ++j) in_d = in_d || close((*p)[x.y_dim + j].v, 1);
        if (in_d || multiplicity(side, *p, x.y_dim, group, d) == 0) ++out.matched;
    }
    return out;
}

// ---------------------------------------------------------------- relations

bool BoundaryReport::pass() const {
    return std::all_of(relations.begin(), relations.end(), [](const RelationCheck& r) { return r.pass; });
}

namespace {

using Orientations = std::map<std::pair<int, int>, int>;

PolyChain eta_with(int p, int c, int i, double a, const Orientations* o) {
    if (!o) return eta_cells(p, c, i, a);
    auto it = o->find({c, i});
    return eta_cells(p, c, i, a, it == o->end() ? 1 : it->second);
}

std::string eta_name(int k, int i) { return "eta_" + std::to_string(k) + "(" + std::to_string(i) + ")"; }

// left and right sides of the η relations, in solving order
struct Relation {
    std::string name;
    int c, i;
    PolyChain lhs, rhs;
};

Relation eta_relation(int p, int c, int i, double a, double ar, const Orientations* o) {
    int k = p - c;
    Relation r{"", c, i, chain_boundary(eta_with(p, c, i, a, o)), {}};
    if (i == k - 1) {
        r.name = "delta " + eta_name(k, i) + " = rho_" + std::to_string(k);
        r.rhs = rho_cells(p, c, ar);
    } else {
        r.name = "delta " + eta_name(k, i) + " = dY " + eta_name(k - 1, i) + " + dBox " + eta_name(k, i + 1);
        r.rhs = y_boundary(eta_with(p, c + 1, i, ar, o), ar) +
                cube_boundary(eta_with(p, c, i + 1, ar, o)) * Rational(sgn(k + i + 1));
    }
    return r;
}

}  // namespace

std::map<std::pair<int, int>, int> solve_eta_orientations(int p, double a, int n_samples) {
    Orientations o;
    for (int k = 1; k <= p; ++k) {
        int c = p - k;
        for (int i = k - 1; i >= 0; --i) {
            o[{c, i}] = 1;
            Relation r = eta_relation(p, c, i, a, a, &o);
            SampledComparison s = compare_sampled(r.lhs, r.rhs, n_samples);
            o[{c, i}] = s.samples > 0 && s.matched == s.samples ? 1 : s.samples > 0 && s.opposite == s.samples ? -1 : 0;
        }
    }
    return o;
}

BoundaryReport check_boundary_relations(int p, double a, int n_samples, double a_rhs) {
    double ar = a_rhs == 0 ? a : a_rhs;
    BoundaryReport rep;
    rep.p = p;
    rep.a = a;
    auto record = [&](std::string name, SampledComparison s) {
        bool ok = s.samples > 0 && s.pass();
        rep.relations.push_back({std::move(name), s, ok});
    };
    for (int k = 1; k <= p; ++k)
        for (int i = k - 1; i >= 0; --i) {
            Relation r = eta_relation(p, p - k, i, a, ar, nullptr);
            record(r.name, compare_sampled(r.lhs, r.rhs, n_samples));
        }
    for (int k = 2; k <= p; ++k) {
        int c = p - k;
        PolyChain box = cube_boundary(rho_cells(p, c, a)) * Rational(sgn(c * (c + 1) / 2) * sgn(c));
        PolyChain yb = y_boundary(rho_cells(p, c + 1, ar), ar) * Rational(sgn((c + 1) * (c + 2) / 2));
        record("dR level " + std::to_string(k), compare_sampled(box, -yb, n_samples));
    }
    // V faces: each pullback must vanish after Alt
    for (int k = 1; k <= p; ++k) {
        int c = p - k;
        std::vector<std::pair<std::string, PolyChain>> fams = {{"rho_" + std::to_string(k), rho_cells(p, c, a)}};
        for (int i = 0; i < k; ++i) fams.emplace_back(eta_name(k, i), eta_cells(p, c, i, a));
        for (const auto& [name, x] : fams) {
            SampledComparison total;
            for (int axis = 0; axis < k - 1; ++axis)
                for (bool inf : {false, true}) {
                    SampledComparison s = check_null(v_pullback(x, axis, inf, true), n_samples);
                    total.samples += s.samples;
                    total.matched += s.matched;
                }
            rep.relations.push_back({"V-face " + name, total, total.pass()});
        }
    }
    return rep;
}

// ---------------------------------------------------------------- values

Complex li_oracle(int k, Complex a, double tol) {
    if (k < 1) throw BadParameter("polylog weight must be >= 1");
    double r = std::abs(a);
    if (!(r < 1)) throw OutOfRadius("series needs |a| < 1");
    if (r == 0) return 0;
    Complex sum = 0, pw = 1;
    for (long n = 1;; ++n) {
        pw *= a;
        sum += pw / std::pow(static_cast<double>(n), k);
        double tail = std::pow(r, n + 1) / (std::pow(static_cast<double>(n + 1), k) * (1 - r));
        if (tail < tol) return sum;
    }
}

std::vector<std::pair<int, bool>> face_index_set(int p) {
    std::vector<std::pair<int, bool>> s;
    for (int j = 1; j <= p - 1; ++j) {
        // true: u = a
        if (j % 2) {
            s.emplace_back(j, true);
            s.emplace_back(j, false);
        } else {
            s.emplace_back(j, false);
            s.emplace_back(j, true);
        }
    }
    return s;
}

AJResult aj_evaluate(int p, std::vector<int> J, double a, double tol, bool flip_eps) {
    if (p != 2 && p != 3) throw BadParameter("built-in weights are 2 and 3");
    if (!(a > 0 && a < 1)) throw BadParameter("a must lie in (0, 1)");
    auto S = face_index_set(p);
    std::sort(J.begin(), J.end());
    std::set<int> axes;
    int pos_sum = 0;
    for (int q : J) {
        if (q < 0 || q >= static_cast<int>(S.size())) throw BadIndex("face index outside S");
        if (!axes.insert(S[q].first).second) throw BadIndex("D_J is empty: an axis is fixed twice");
        pos_sum += q;
    }
    AJResult out;
    out.p = p;
    out.J = J;
    out.a = a;
    out.tol = tol;
    int c = static_cast<int>(J.size());
    int k = p - c;
    out.weight = k;
    out.two_pi_i = -k;
    out.s_sign = sgn(pos_sum);

    QuadratureOptions opt;
    opt.tol = std::min(1e-10, tol * 1e-3);
    opt.threads = 1;
    std::vector<std::future<AJTerm>> jobs;
    int nthreads = thread_count();
    for (int i = 0; i < k; ++i) {
        auto job = [=] {
            int n = k + i;
            LogForm phi = wedge(LogForm::omega(n, 0, k - 1), LogForm::omega(n, k - 1, i + 1));
            AJTerm t;
            t.i = i;
            t.integral = integrate(bare_param_chain(eta_cells(p, c, i, a)), phi, opt);
            int e = signs::eps_ci(c, i, p) + (flip_eps ? 1 : 0);
            t.value = static_cast<double>(sgn(e)) * t.integral.total();
            return t;
        };
        jobs.push_back(std::async(nthreads > 1 ? std::launch::async : std::launch::deferred, job));
    }
    for (auto& j : jobs) {
        AJTerm t = j.get();
        out.raw_total += t.value;
        t.value *= static_cast<double>(kPolylogConvention);
        out.total += t.value;
        out.converged = out.converged && t.integral.converged;
        out.abs_err += t.integral.abs_err * std::pow(2 * std::numbers::pi, -k);
        if (t.i > 0 && std::abs(t.value) >= tol) out.type_vanishing = false;
        out.terms.push_back(std::move(t));
    }
    out.oracle = li_oracle(k, a) / std::pow(two_pi_i_value, k);
    out.rel_err = std::abs(out.total - out.oracle) / std::abs(out.oracle);
    out.pass = out.converged && out.type_vanishing && out.rel_err < tol;
    if (!out.converged) throw NotConverged("quadrature did not settle for an eta term");
    return out;
}

// ---------------------------------------------------------------- Ψ

std::vector<PolyChain> polylog_ladder(int p, double a) {
    std::vector<PolyChain> ladder(p + 1);
    ladder[0].y_dim = p - 1;
    int sigma = 1;
    for (int i = p - 1; i >= 0; --i) {
        if (i < p - 1) sigma *= sgn(p + i + 1);
        ladder[i + 1] = eta_cells(p, 0, i, a) * Rational(sigma);
    }
    return ladder;
}

namespace {

bool in_face_divisor(const PolyCell& cell, double a) {
    for (const Atom& y : cell.y)
        if (y.kind == Atom::constant && (close(y.value, a) || close(y.value, 1 / a))) return true;
    return false;
}

PolyChain modulo_face_divisor(const PolyChain& x) {
    PolyChain out = x;
    out.terms.clear();
    for (const auto& t : x.terms)
        if (!in_face_divisor(t.cell, t.cell.upper)) out.add(t.coef, t.cell);
    return out;
}

// φ on Y pulled back to Y × □^m
LogForm extend(const LogForm& phi, int ambient) {
    int m = phi.ambient;
    LogForm out = phi;
    out.ambient = ambient;
    for (auto& t : out.smooth) {
        Poly q;
        q.ambient = ambient;
        for (const auto& [e, v] : t.coef.terms) {
            std::vector<int> f(2 * ambient, 0);
            for (int j = 0; j < m; ++j) {
                f[j] = e[j];
                f[ambient + j] = e[m + j];
            }
            q.terms[f] = v;
        }
        t.coef = q;
    }
    return out;
}

}  // namespace

bool ladder_holds(const std::vector<PolyChain>& ladder, int n_samples) {
    for (size_t j = 0; j + 1 < ladder.size(); ++j) {
        PolyChain lhs = modulo_face_divisor(cube_boundary(ladder[j + 1]));
        PolyChain rhs = modulo_face_divisor(chain_boundary(ladder[j]));
        SampledComparison s = compare_sampled(lhs, rhs, n_samples, static_cast<unsigned>(j + 1));
        if (!s.pass()) return false;
    }
    return true;
}

Complex psi_evaluate(const std::vector<PolyChain>& ladder, const LogForm& phi, double tol, bool check) {
    if (ladder.empty()) return 0;
    if (check && !ladder_holds(ladder)) throw LadderBroken("dBox gamma_{j+1} != delta gamma_j at sampled points");
    int n = static_cast<int>(ladder.size()) - 1;
    int deg = phi.degree();
    if (deg < 0) return 0;
    QuadratureOptions opt;
    opt.tol = tol;
    Complex sum = 0;
    for (int j = 0; j <= n; ++j) {
        const PolyChain& g = ladder[n - j];
        if (g.terms.empty()) continue;
        if (g.y_dim != phi.ambient) throw DegreeMismatch("form and ladder live on different Y");
        int amb = g.y_dim + g.cube_dim;
        LogForm form = wedge(extend(phi, amb), LogForm::omega(amb, g.y_dim, n - j));
        Integral v = integrate(bare_param_chain(g), form, opt);
        if (!v.converged) throw NotConverged("psi term did not settle");
        int e = signs::eps3(deg, j) + j * (j - 1) / 2;
        sum += static_cast<double>(sgn(e)) * v.total();
    }
    return sum;
}

}  // namespace ajchains
