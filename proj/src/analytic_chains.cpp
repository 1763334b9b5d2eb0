#include "ajchains/analytic_chains.hpp"

#include <algorithm>
#include <boost/math/special_functions/legendre.hpp>
#include <cmath>
#include <cstdlib>
#include <future>
#include <mutex>
#include <numbers>
#include <random>

namespace ajchains {

namespace {

const Complex two_pi_i_value(0, 2 * std::numbers::pi);

}  // namespace

// ---------------------------------------------------------------- jets

Jet Jet::constant(Complex c, int n) {
    Jet j;
    j.v = c;
    j.n = n;
    return j;
}

Jet Jet::variable(double x, int index, int n) {
    Jet j = constant(x, n);
    j.d[index] = 1;
    return j;
}

Jet operator+(const Jet& a, const Jet& b) {
    Jet r;
    r.n = std::max(a.n, b.n);
    r.v = a.v + b.v;
    for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] + b.d[i];
    return r;
}

Jet operator-(const Jet& a) {
    Jet r = a;
    r.v = -r.v;
    for (int i = 0; i < r.n; ++i) r.d[i] = -r.d[i];
    return r;
}

Jet operator-(const Jet& a, const Jet& b) { return a + (-b); }

Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    r.n = std::max(a.n, b.n);
    r.v = a.v * b.v;
    for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
}

Jet operator/(const Jet& a, const Jet& b) {
    Jet r;
    r.n = std::max(a.n, b.n);
    r.v = a.v / b.v;
    Complex inv2 = 1.0 / (b.v * b.v);
    for (int i = 0; i < r.n; ++i) r.d[i] = (a.d[i] * b.v - a.v * b.d[i]) * inv2;
    return r;
}

Jet operator+(const Jet& a, Complex c) {
    Jet r = a;
    r.v += c;
    return r;
}
Jet operator+(Complex c, const Jet& a) { return a + c; }
Jet operator-(const Jet& a, Complex c) { return a + (-c); }
Jet operator-(Complex c, const Jet& a) { return (-a) + c; }

Jet operator*(const Jet& a, Complex c) {
    Jet r = a;
    r.v *= c;
    for (int i = 0; i < r.n; ++i) r.d[i] *= c;
    return r;
}
Jet operator*(Complex c, const Jet& a) { return a * c; }
Jet operator/(const Jet& a, Complex c) { return a * (1.0 / c); }
Jet operator/(Complex c, const Jet& a) { return Jet::constant(c, a.n) / a; }

Jet exp(const Jet& a) {
    Jet r = a;
    r.v = std::exp(a.v);
    for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] * r.v;
    return r;
}

Jet pow(const Jet& a, int k) {
    if (k < 0) return 1.0 / pow(a, -k);
    Jet r = Jet::constant(1, a.n);
    for (int i = 0; i < k; ++i) r = r * a;
    return r;
}

Jet conj(const Jet& a) {
    Jet r = a;
    r.v = std::conj(a.v);
    for (int i = 0; i < r.n; ++i) r.d[i] = std::conj(a.d[i]);
    return r;
}

Jet real_part(const Jet& a) { return (a + conj(a)) * 0.5; }
Jet imag_part(const Jet& a) { return (a - conj(a)) * Complex(0, -0.5); }

Jet Coordinate::dlog() const {
    if (has_log) return log;
    Jet r = z;
    for (int i = 0; i < r.n; ++i) r.d[i] = z.d[i] / z.v;
    return r;
}

// ---------------------------------------------------------------- cells

int ParamCell::dim() const {
    int d = 0;
    for (const auto& f : domain) d += f.dim;
    return d;
}

namespace {

std::vector<Jet> domain_params(const std::vector<DomainFactor>& domain, const std::vector<double>& u) {
    int n = static_cast<int>(u.size());
    std::vector<Jet> out;
    int at = 0;
    for (const auto& f : domain) {
        if (f.kind == DomainFactor::interval) {
            out.push_back(f.lo + Jet::variable(u[at], at, n) * (f.hi - f.lo));
            ++at;
            continue;
        }
        std::vector<Jet> t(f.dim);
        for (int m = f.dim - 1; m >= 0; --m) {
            Jet top = m == f.dim - 1 ? Jet::constant(f.hi, n) : t[m + 1];
            t[m] = f.lo + Jet::variable(u[at + m], at + m, n) * (top - f.lo);
        }
        out.insert(out.end(), t.begin(), t.end());
        at += f.dim;
    }
    return out;
}

}  // namespace

std::vector<Coordinate> ParamCell::eval(const std::vector<double>& u) const {
    return map(domain_params(domain, u));
}

bool ParamCell::check_incidences(int samples, unsigned seed, double eps) const {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> uni(0.05, 0.95);
    const double edge = 1e-10;
    for (const auto& inc : incidences) {
        for (int s = 0; s < samples; ++s) {
            std::vector<double> u(dim());
            for (auto& x : u) x = uni(rng);
            for (auto [p, upper] : inc.locus) u[p] = upper ? 1 - edge : edge;
            double r = std::abs(eval(u)[inc.axis].z.v);
            if (inc.at_infinity ? r < 1 / eps : r > eps) return false;
        }
    }
    return true;
}

void ParamChain::add(Rational c, ParamCell cell) {
    if (terms.empty()) dim = cell.dim();
    terms.emplace_back(std::move(c), std::move(cell));
}

ParamChain operator*(const ParamChain& x, const Rational& q) {
    ParamChain r = x;
    for (auto& t : r.terms) t.first *= q;
    return r;
}

ParamChain operator-(const ParamChain& x) { return x * Rational(-1); }

ParamChain operator+(const ParamChain& a, const ParamChain& b) {
    ParamChain r = a;
    for (const auto& t : b.terms) r.add(t.first, t.second);
    return r;
}

// ---------------------------------------------------------------- polynomials

Poly Poly::constant(int ambient, Complex c) {
    Poly p;
    p.ambient = ambient;
    if (c != Complex(0)) p.terms[std::vector<int>(2 * ambient, 0)] = c;
    return p;
}

Poly Poly::z(int ambient, int axis, bool bar) {
    Poly p;
    p.ambient = ambient;
    std::vector<int> e(2 * ambient, 0);
    e[axis + (bar ? ambient : 0)] = 1;
    p.terms[e] = 1;
    return p;
}

Complex Poly::eval(const std::vector<Complex>& z) const {
    Complex s = 0;
    for (const auto& [e, c] : terms) {
        Complex m = c;
        for (int j = 0; j < ambient; ++j) {
            for (int k = 0; k < e[j]; ++k) m *= z[j];
            for (int k = 0; k < e[ambient + j]; ++k) m *= std::conj(z[j]);
        }
        s += m;
    }
    return s;
}

Poly Poly::diff(int axis, bool bar) const {
    Poly p;
    p.ambient = ambient;
    int slot = axis + (bar ? ambient : 0);
    for (const auto& [e, c] : terms) {
        if (e[slot] == 0) continue;
        std::vector<int> f = e;
        --f[slot];
        p.terms[f] += c * static_cast<double>(e[slot]);
    }
    return p;
}

Poly Poly::restrict_zero(int axis) const {
    Poly p;
    p.ambient = ambient;
    for (const auto& [e, c] : terms)
        if (e[axis] == 0 && e[ambient + axis] == 0) p.terms[e] = c;
    return p;
}

bool Poly::is_zero() const {
    return std::all_of(terms.begin(), terms.end(), [](const auto& t) { return t.second == Complex(0); });
}

Poly operator+(const Poly& a, const Poly& b) {
    Poly p = a;
    p.ambient = std::max(a.ambient, b.ambient);
    for (const auto& [e, c] : b.terms) p.terms[e] += c;
    std::erase_if(p.terms, [](const auto& t) { return t.second == Complex(0); });
    return p;
}

Poly operator*(const Poly& a, const Poly& b) {
    Poly p;
    p.ambient = a.ambient;
    for (const auto& [e, c] : a.terms)
        for (const auto& [f, d] : b.terms) {
            std::vector<int> g = e;
            for (size_t i = 0; i < g.size(); ++i) g[i] += f[i];
            p.terms[g] += c * d;
        }
    std::erase_if(p.terms, [](const auto& t) { return t.second == Complex(0); });
    return p;
}

Poly operator*(const Poly& a, Complex c) {
    Poly p = a;
    for (auto& t : p.terms) t.second *= c;
    std::erase_if(p.terms, [](const auto& t) { return t.second == Complex(0); });
    return p;
}

// ---------------------------------------------------------------- log forms

namespace {

// sorts in place, returns the permutation sign, 0 on a repeat
template <class T>
int sort_with_sign(std::vector<T>& v) {
    int s = 1;
    for (size_t i = 1; i < v.size(); ++i)
        for (size_t j = i; j > 0 && v[j] < v[j - 1]; --j) {
            std::swap(v[j], v[j - 1]);
            s = -s;
        }
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] == v[i - 1]) return 0;
    return s;
}

bool contains(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

int LogForm::degree() const {
    LogForm n = normalized();
    if (n.smooth.empty()) return -1;
    return static_cast<int>(n.log_axes.size() + n.smooth.front().diffs.size());
}

bool LogForm::is_zero() const { return normalized().smooth.empty(); }

LogForm LogForm::normalized() const {
    LogForm out = *this;
    out.smooth.clear();
    if (scalar == Complex(0)) return out;
    std::vector<int> logs = log_axes;
    int ls = sort_with_sign(logs);
    if (ls == 0) return out;
    out.log_axes = logs;
    std::map<std::vector<std::pair<int, Diff>>, Poly> merged;
    for (const SmoothTerm& t : smooth) {
        std::vector<std::pair<int, Diff>> d = t.diffs;
        bool dead = false;
        for (auto [ax, kind] : d) {
            if (kind == Diff::dz && contains(logs, ax)) dead = true;
            if (contains(restricted, ax)) dead = true;
        }
        int s = sort_with_sign(d);
        if (dead || s == 0) continue;
        Poly c = t.coef * Complex(s * ls);
        auto it = merged.find(d);
        if (it == merged.end())
            merged.emplace(d, c);
        else
            it->second = it->second + c;
    }
    for (auto& [d, c] : merged)
        if (!c.is_zero()) out.smooth.push_back({c, d});
    return out;
}

LogForm LogForm::one(int ambient) {
    LogForm f;
    f.ambient = ambient;
    f.smooth.push_back({Poly::constant(ambient, 1), {}});
    return f;
}

LogForm LogForm::omega(int ambient, int offset, int count) {
    LogForm f = one(ambient);
    for (int i = 0; i < count; ++i) f.log_axes.push_back(offset + i);
    f.two_pi_i = -count;
    return f;
}

LogForm LogForm::dlog(int ambient, std::vector<int> axes) {
    LogForm f = one(ambient);
    f.log_axes = std::move(axes);
    return f;
}

LogForm LogForm::smooth_form(int ambient, Poly coef, std::vector<std::pair<int, Diff>> diffs) {
    LogForm f;
    f.ambient = ambient;
    f.smooth.push_back({std::move(coef), std::move(diffs)});
    return f;
}

LogForm operator*(const LogForm& a, Complex c) {
    LogForm r = a;
    r.scalar *= c;
    return r;
}

LogForm operator+(const LogForm& a, const LogForm& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    LogForm x = a.normalized(), y = b.normalized();
    if (x.log_axes != y.log_axes || x.restricted != y.restricted)
        throw DegreeMismatch("sum of log forms with different poles");
    LogForm r = x;
    Complex rel = y.scalar / x.scalar * std::pow(two_pi_i_value, y.two_pi_i - x.two_pi_i);
    for (const SmoothTerm& t : y.smooth) r.smooth.push_back({t.coef * rel, t.diffs});
    return r.normalized();
}

LogForm wedge(const LogForm& a, const LogForm& b) {
    LogForm r;
    r.ambient = std::max(a.ambient, b.ambient);
    r.scalar = a.scalar * b.scalar;
    r.two_pi_i = a.two_pi_i + b.two_pi_i;
    r.restricted = a.restricted;
    for (int x : b.restricted)
        if (!contains(r.restricted, x)) r.restricted.push_back(x);
    std::sort(r.restricted.begin(), r.restricted.end());
    for (int x : b.log_axes)
        if (contains(a.log_axes, x)) return r;  // zero
    r.log_axes = a.log_axes;
    r.log_axes.insert(r.log_axes.end(), b.log_axes.begin(), b.log_axes.end());
    for (const SmoothTerm& s : a.smooth)
        for (const SmoothTerm& t : b.smooth) {
            // ψ_a moves past the log factors of b
            int sign = (s.diffs.size() * b.log_axes.size()) % 2 ? -1 : 1;
            SmoothTerm u{s.coef * t.coef * Complex(sign), s.diffs};
            u.diffs.insert(u.diffs.end(), t.diffs.begin(), t.diffs.end());
            r.smooth.push_back(std::move(u));
        }
    return r.normalized();
}

bool same_form(const LogForm& a, const LogForm& b, double eps) {
    LogForm x = a.normalized(), y = b.normalized();
    if (x.smooth.empty() || y.smooth.empty()) return x.smooth.empty() && y.smooth.empty();
    if (x.log_axes != y.log_axes || x.smooth.size() != y.smooth.size()) return false;
    Complex sx = x.scalar * std::pow(two_pi_i_value, x.two_pi_i);
    Complex sy = y.scalar * std::pow(two_pi_i_value, y.two_pi_i);
    for (size_t i = 0; i < x.smooth.size(); ++i) {
        if (x.smooth[i].diffs != y.smooth[i].diffs) return false;
        Poly diff = x.smooth[i].coef * sx + y.smooth[i].coef * (-sy);
        for (const auto& [e, c] : diff.terms)
            if (std::abs(c) > eps) return false;
    }
    return true;
}

LogForm poincare_residue(const LogForm& phi, int axis) {
    LogForm f = phi.normalized();
    auto it = std::find(f.log_axes.begin(), f.log_axes.end(), axis);
    if (it == f.log_axes.end()) throw NoLogPole("form has no logarithmic pole on axis " + std::to_string(axis));
    int pos = static_cast<int>(it - f.log_axes.begin());
    f.log_axes.erase(it);
    if (pos % 2) f.scalar = -f.scalar;
    for (SmoothTerm& t : f.smooth) t.coef = t.coef.restrict_zero(axis);
    f.restricted.push_back(axis);
    std::sort(f.restricted.begin(), f.restricted.end());
    return f.normalized();
}

LogForm residue(const LogForm& phi, std::vector<int> axes) {
    std::sort(axes.begin(), axes.end());
    LogForm f = phi;
    for (auto it = axes.rbegin(); it != axes.rend(); ++it) f = poincare_residue(f, *it);
    return f;
}

LogForm exterior_d(const LogForm& phi) {
    LogForm f = phi.normalized();
    LogForm r = f;
    r.smooth.clear();
    int sign = f.log_axes.size() % 2 ? -1 : 1;
    for (const SmoothTerm& t : f.smooth)
        for (int j = 0; j < f.ambient; ++j) {
            if (contains(f.restricted, j)) continue;
            for (bool bar : {false, true}) {
                Poly c = t.coef.diff(j, bar);
                if (c.is_zero()) continue;
                SmoothTerm u{c * Complex(sign), {{j, bar ? Diff::dzbar : Diff::dz}}};
                u.diffs.insert(u.diffs.end(), t.diffs.begin(), t.diffs.end());
                r.smooth.push_back(std::move(u));
            }
        }
    return r.normalized();
}

// ---------------------------------------------------------------- pullback

namespace {

Complex determinant(std::vector<std::vector<Complex>> m) {
    int n = static_cast<int>(m.size());
    Complex det = 1;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (m[piv][c] == Complex(0)) return 0;
        if (piv != c) {
            std::swap(m[piv], m[c]);
            det = -det;
        }
        det *= m[c][c];
        for (int r = c + 1; r < n; ++r) {
            Complex f = m[r][c] / m[c][c];
            for (int k = c; k < n; ++k) m[r][k] -= f * m[c][k];
        }
    }
    return det;
}

}  // namespace

Complex pullback_density(const LogForm& phi, const std::vector<Coordinate>& x, int k) {
    if (phi.smooth.empty()) return 0;
    int deg = static_cast<int>(phi.log_axes.size() + phi.smooth.front().diffs.size());
    if (deg != k) throw DegreeMismatch("form of degree " + std::to_string(deg) + " on a " + std::to_string(k) + "-cell");
    std::vector<Complex> zv(x.size());
    for (size_t i = 0; i < x.size(); ++i) zv[i] = x[i].z.v;
    std::vector<std::vector<Complex>> rows;
    for (int a : phi.log_axes) {
        Jet dl = x[a].dlog();
        rows.emplace_back(dl.d.begin(), dl.d.begin() + k);
    }
    size_t nlog = rows.size();
    Complex total = 0;
    for (const SmoothTerm& t : phi.smooth) {
        rows.resize(nlog);
        for (auto [ax, kind] : t.diffs) {
            std::vector<Complex> row(k);
            for (int i = 0; i < k; ++i) row[i] = kind == Diff::dz ? x[ax].z.d[i] : std::conj(x[ax].z.d[i]);
            rows.push_back(std::move(row));
        }
        total += t.coef.eval(zv) * determinant(rows);
    }
    return phi.scalar * total;
}

// ---------------------------------------------------------------- quadrature

Complex Integral::total() const { return value * std::pow(two_pi_i_value, two_pi_i); }

int thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("AJCHAINS_THREADS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

namespace {

struct Rule {
    std::vector<double> x, w;  // on [0, 1]
};

const Rule& gauss_rule(int n) {
    static std::map<int, Rule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    Rule r;
    for (double z : boost::math::legendre_p_zeros<double>(n)) {
        double p = boost::math::legendre_p_prime(n, z);
        double w = 2 / ((1 - z * z) * p * p);
        r.x.push_back(0.5 * (1 + z));
        r.w.push_back(0.5 * w);
        if (z != 0) {
            r.x.push_back(0.5 * (1 - z));
            r.w.push_back(0.5 * w);
        }
    }
    return cache.emplace(n, std::move(r)).first->second;
}

std::vector<double> axis_breaks(bool sing_lo, bool sing_hi, int round) {
    int levels = 2 + 2 * round;
    int pieces = 1 << (round / 3);
    double a = sing_lo ? (sing_hi ? 0.25 : 0.5) : 0;
    double b = sing_hi ? (sing_lo ? 0.75 : 0.5) : 1;
    std::vector<double> br;
    if (sing_lo) {
        br.push_back(0);
        for (int l = levels; l >= 1; --l) br.push_back(std::ldexp(a, -l));
    }
    for (int i = 0; i < pieces; ++i) br.push_back(a + (b - a) * i / pieces);
    br.push_back(b);
    if (sing_hi) {
        for (int l = 1; l <= levels; ++l) br.push_back(1 - std::ldexp(1 - b, -l));
        br.push_back(1);
    }
    return br;
}

struct RoundResult {
    Complex value;
    long evals = 0;
};

RoundResult tensor_round(const ParamCell& cell, const LogForm& phi, int round, long budget) {
    int k = cell.dim();
    if (k == 0) return {pullback_density(phi, cell.eval({}), 0), 1};
    std::vector<bool> lo(k, false), hi(k, false);
    for (const auto& inc : cell.incidences)
        for (auto [p, upper] : inc.locus) (upper ? hi : lo)[p] = true;
    const Rule& rule = gauss_rule(std::min(8 + round, 30));
    std::vector<std::vector<double>> nodes(k), weights(k);
    long total = 1;
    for (int a = 0; a < k; ++a) {
        auto br = axis_breaks(lo[a], hi[a], round);
        for (size_t s = 0; s + 1 < br.size(); ++s) {
            double h = br[s + 1] - br[s];
            for (size_t q = 0; q < rule.x.size(); ++q) {
                nodes[a].push_back(br[s] + h * rule.x[q]);
                weights[a].push_back(h * rule.w[q]);
            }
        }
        total *= static_cast<long>(nodes[a].size());
    }
    if (total > budget) return {Complex(std::nan(""), 0), -1};
    std::vector<size_t> idx(k, 0);
    std::vector<double> u(k);
    Complex sum = 0;
    for (long e = 0; e < total; ++e) {
        double w = 1;
        for (int a = 0; a < k; ++a) {
            u[a] = nodes[a][idx[a]];
            w *= weights[a][idx[a]];
        }
        sum += w * pullback_density(phi, cell.eval(u), k);
        for (int a = 0; a < k; ++a) {
            if (++idx[a] < nodes[a].size()) break;
            idx[a] = 0;
        }
    }
    return {sum * static_cast<double>(cell.orientation), total};
}

Integral integrate_rounds(const ParamCell& cell, const LogForm& phi, const QuadratureOptions& opt, int max_rounds,
                          bool stop_on_convergence) {
    Integral out;
    out.two_pi_i = phi.two_pi_i;
    LogForm f = phi.normalized();
    f.two_pi_i = 0;
    if (f.smooth.empty()) return out;
    int deg = f.degree();
    if (deg != cell.dim())
        throw DegreeMismatch("form of degree " + std::to_string(deg) + " on a " + std::to_string(cell.dim()) + "-cell");
    if (cell.dim() == 0) {
        out.value = tensor_round(cell, f, 0, 1).value;
        out.evals = 1;
        out.rounds = {out.value};
        return out;
    }
    int agree = 0;
    out.converged = false;
    for (int r = 0; r < max_rounds; ++r) {
        RoundResult rr = tensor_round(cell, f, r, opt.max_evals - out.evals);
        if (rr.evals < 0) {
            out.budget_exceeded = true;
            break;
        }
        out.evals += rr.evals;
        out.rounds.push_back(rr.value);
        if (r > 0) {
            out.abs_err = std::abs(rr.value - out.value);
            agree = out.abs_err < opt.tol * std::max(1.0, std::abs(rr.value)) ? agree + 1 : 0;
        }
        out.value = rr.value;
        if (agree >= 2) {
            out.converged = true;
            if (stop_on_convergence) break;
        }
    }
    if (!out.converged && !out.budget_exceeded) out.budget_exceeded = true;
    return out;
}

}  // namespace

Integral integrate(const ParamCell& cell, const LogForm& phi, const QuadratureOptions& opt) {
    return integrate_rounds(cell, phi, opt, opt.max_rounds, true);
}

Integral integrate(const ParamChain& chain, const LogForm& phi, const QuadratureOptions& opt) {
    std::vector<Integral> parts(chain.terms.size());
    int nthreads = thread_count(opt.threads);
    for (size_t start = 0; start < parts.size(); start += nthreads) {
        std::vector<std::future<Integral>> jobs;
        size_t end = std::min(parts.size(), start + nthreads);
        for (size_t i = start; i < end; ++i)
            jobs.push_back(std::async(nthreads > 1 ? std::launch::async : std::launch::deferred,
                                      [&, i] { return integrate(chain.terms[i].second, phi, opt); }));
        for (size_t i = start; i < end; ++i) parts[i] = jobs[i - start].get();
    }
    Integral out;
    out.two_pi_i = phi.two_pi_i;
    for (size_t i = 0; i < parts.size(); ++i) {
        double c = chain.terms[i].first.get_d();
        out.value += c * parts[i].value;
        out.abs_err += std::abs(c) * parts[i].abs_err;
        out.converged = out.converged && parts[i].converged;
        out.budget_exceeded = out.budget_exceeded || parts[i].budget_exceeded;
        out.evals += parts[i].evals;
    }
    return out;
}

Integral pairing(const ParamChain& gamma, const LogForm& phi, const QuadratureOptions& opt) {
    // group cells by face so each residue is taken once
    std::map<std::vector<int>, ParamChain> by_face;
    for (const auto& [c, cell] : gamma.terms) by_face[cell.face].add(c, cell);
    Integral out;
    out.two_pi_i = 0;
    for (const auto& [face, chain] : by_face) {
        LogForm r = residue(phi, face);
        Integral part = integrate(chain, r, opt);
        out.value += part.total() * std::pow(two_pi_i_value, static_cast<int>(face.size()));
        out.abs_err += part.abs_err * std::pow(2 * std::numbers::pi, static_cast<int>(face.size()) + part.two_pi_i);
        out.converged = out.converged && part.converged;
        out.budget_exceeded = out.budget_exceeded || part.budget_exceeded;
        out.evals += part.evals;
    }
    return out;
}

// ---------------------------------------------------------------- Cauchy–Stokes

CauchyStokesReport verify_cauchy_stokes(const CauchyStokesCase& c, double tol) {
    CauchyStokesReport rep;
    rep.name = c.name;
    rep.tol = tol;
    QuadratureOptions opt;
    opt.tol = std::min(1e-9, tol * 1e-2);
    Integral lhs = pairing(c.face_part, c.phi, opt);
    Integral delta = pairing(c.boundary, c.phi, opt);
    LogForm dphi = exterior_d(c.phi);
    Integral dterm;
    if (!dphi.is_zero()) dterm = pairing(c.gamma, dphi, opt);
    rep.lhs = lhs.total();
    rep.delta_term = delta.total();
    rep.d_term = dterm.total();
    rep.rhs = rep.delta_term - (c.face_count % 2 ? -1.0 : 1.0) * rep.d_term;
    rep.abs_err = std::abs(rep.lhs - rep.rhs);
    rep.converged = lhs.converged && delta.converged && dterm.converged;
    rep.evals = lhs.evals + delta.evals + dterm.evals;
    rep.pass = rep.converged && rep.abs_err < tol * (1 + std::abs(rep.rhs));
    return rep;
}

namespace {

using Coords = std::vector<Coordinate>;

ParamCell segment_cell(std::string name, int ambient, std::function<Coords(const Jet&)> f) {
    ParamCell c;
    c.name = std::move(name);
    c.ambient = ambient;
    c.domain = {{DomainFactor::interval, 1, 0, 1}};
    c.map = [f](const std::vector<Jet>& t) { return f(t[0]); };
    return c;
}

ParamCell point_cell(std::string name, std::vector<Complex> z, std::vector<int> face) {
    ParamCell c;
    c.name = std::move(name);
    c.ambient = static_cast<int>(z.size());
    c.face = std::move(face);
    c.map = [z](const std::vector<Jet>&) {
        Coords out;
        for (Complex v : z) out.push_back(Coordinate::plain(Jet::constant(v, 0)));
        return out;
    };
    return c;
}

// the square [-1, 1]² ⊂ ℂ as four quadrants with the corner at 0; `embed`
// places the complex coordinate into the ambient space
ParamChain quadrants(int ambient, std::function<Coords(const Jet&)> embed, int axis, std::vector<int> face) {
    ParamChain ch;
    Complex rot = 1;
    for (int q = 0; q < 4; ++q, rot *= Complex(0, 1)) {
        ParamCell c;
        c.name = "quadrant" + std::to_string(q);
        c.ambient = ambient;
        c.domain = {{DomainFactor::interval, 1, 0, 1}, {DomainFactor::interval, 1, 0, 1}};
        c.map = [embed, rot](const std::vector<Jet>& t) { return embed(rot * (t[0] + t[1] * Complex(0, 1))); };
        c.incidences = {{axis, false, {{0, false}, {1, false}}}};
        c.face = face;
        ch.add(1, std::move(c));
    }
    return ch;
}

ParamChain square_loop(int ambient, std::function<Coords(const Jet&)> embed, Complex center, double half,
                       std::vector<int> face) {
    ParamChain ch;
    Complex corner = center + half * Complex(-1, -1);
    Complex step = 2 * half;
    for (int side = 0; side < 4; ++side) {
        Complex from = corner, dir = step;
        ParamCell c = segment_cell("side" + std::to_string(side), ambient,
                                   [embed, from, dir](const Jet& t) { return embed(from + t * dir); });
        c.face = face;
        ch.add(1, std::move(c));
        corner += step;
        step *= Complex(0, 1);
    }
    return ch;
}

}  // namespace

std::vector<CauchyStokesCase> builtin_cauchy_stokes_cases() {
    std::vector<CauchyStokesCase> out;
    auto line = [](const Jet& z) { return Coords{Coordinate::plain(z)}; };

    {
        CauchyStokesCase c;
        c.name = "square-log";
        c.gamma = quadrants(1, line, 0, {});
        c.face_part.add(1, point_cell("origin", {0}, {0}));
        c.boundary = square_loop(1, line, 0, 1, {});
        c.phi = LogForm::dlog(1, {0});
        out.push_back(std::move(c));
    }
    {
        CauchyStokesCase c;
        c.name = "disk-log";
        ParamCell disk;
        disk.name = "disk";
        disk.ambient = 1;
        disk.domain = {{DomainFactor::interval, 1, 0, 0.5}, {DomainFactor::interval, 1, 0, 2 * std::numbers::pi}};
        disk.map = [](const std::vector<Jet>& t) {
            return Coords{Coordinate::plain(t[0] * exp(t[1] * Complex(0, 1)))};
        };
        disk.incidences = {{0, false, {{0, false}}}};
        c.gamma.add(1, disk);
        c.face_part.add(1, point_cell("origin", {0}, {0}));
        ParamCell circle;
        circle.name = "circle";
        circle.ambient = 1;
        circle.domain = {{DomainFactor::interval, 1, 0, 2 * std::numbers::pi}};
        circle.map = [](const std::vector<Jet>& t) { return Coords{Coordinate::plain(0.5 * exp(t[0] * Complex(0, 1)))}; };
        c.boundary.add(1, circle);
        c.phi = LogForm::dlog(1, {0});
        out.push_back(std::move(c));
    }
    {
        // (1 + z z̄) dz/z: dφ is smooth and the boundary term picks up 2i·area
        CauchyStokesCase c;
        c.name = "square-log-smooth";
        c.gamma = quadrants(1, line, 0, {});
        c.face_part.add(1, point_cell("origin", {0}, {0}));
        c.boundary = square_loop(1, line, 0, 1, {});
        c.phi = LogForm::dlog(1, {0});
        c.phi.smooth.front().coef = Poly::constant(1, 1) + Poly::z(1, 0) * Poly::z(1, 0, true);
        out.push_back(std::move(c));
    }
    {
        CauchyStokesCase c;
        c.name = "offset-square";
        ParamCell sq;
        sq.name = "square";
        sq.ambient = 1;
        sq.domain = {{DomainFactor::interval, 1, 1.5, 2.5}, {DomainFactor::interval, 1, -0.5, 0.5}};
        sq.map = [](const std::vector<Jet>& t) { return Coords{Coordinate::plain(t[0] + t[1] * Complex(0, 1))}; };
        c.gamma.add(1, sq);
        c.boundary = square_loop(1, line, 2, 0.5, {});
        c.phi = LogForm::dlog(1, {0});
        c.phi.smooth.front().coef = Poly::z(1, 0, true);
        out.push_back(std::move(c));
    }
    {
        // γ on {z1 = 0} in ℂ²; ∂_H γ meets {z1 = z2 = 0} with sign (-1)^{position of the new axis}
        CauchyStokesCase c;
        c.name = "face-square";
        c.face_count = 1;
        auto on_face = [](const Jet& z) { return Coords{Coordinate::plain(Jet::constant(0, z.n)), Coordinate::plain(z)}; };
        c.gamma = quadrants(2, on_face, 1, {0});
        c.face_part.add(-1, point_cell("origin", {0, 0}, {0, 1}));
        c.boundary = square_loop(2, on_face, 0, 1, {0});
        c.phi = LogForm::dlog(2, {0, 1});
        out.push_back(std::move(c));
    }
    {
        CauchyStokesCase c;
        c.name = "smooth-triangle";
        auto embed = [](const Jet& s, const Jet& t) {
            return Coords{Coordinate::plain(1.0 + s + t * Complex(0, 1)),
                          Coordinate::plain(2.0 + t - s * t * Complex(0, 1))};
        };
        ParamCell tri;
        tri.name = "triangle";
        tri.ambient = 2;
        tri.domain = {{DomainFactor::simplex, 2, 0, 1}};
        tri.map = [embed](const std::vector<Jet>& t) { return embed(t[0], t[1]); };
        c.gamma.add(1, tri);
        // s <= t: (0,0) -> (1,1) -> (0,1) -> (0,0)
        c.boundary.add(1, segment_cell("diagonal", 2, [embed](const Jet& t) { return embed(t, t); }));
        c.boundary.add(1, segment_cell("top", 2, [embed](const Jet& t) { return embed(1.0 - t, Jet::constant(1, t.n)); }));
        c.boundary.add(1, segment_cell("left", 2, [embed](const Jet& t) { return embed(Jet::constant(0, t.n), 1.0 - t); }));
        Poly a = Poly::z(2, 0, true) * Poly::z(2, 1);
        c.phi = LogForm::smooth_form(2, a, {{0, Diff::dz}}) +
                LogForm::smooth_form(2, Poly::z(2, 0), {{1, Diff::dzbar}});
        out.push_back(std::move(c));
    }
    {
        CauchyStokesCase c;
        c.name = "segment";
        Complex from(0.2, 0), to(0.3, 0.1);
        c.gamma.add(1, segment_cell("segment", 1, [from, to](const Jet& t) {
                        return Coords{Coordinate::plain(from + t * (to - from))};
                    }));
        c.boundary.add(1, point_cell("end", {to}, {}));
        c.boundary.add(-1, point_cell("start", {from}, {}));
        c.phi = LogForm::smooth_form(1, Poly::z(1, 0) * Poly::z(1, 0) + Poly::z(1, 0, true), {});
        out.push_back(std::move(c));
    }
    {
        CauchyStokesCase c;
        c.name = "zero";
        c.phi = LogForm::dlog(1, {0});
        out.push_back(std::move(c));
    }
    return out;
}

// ---------------------------------------------------------------- divergence

ParamCell diverging_wedge() {
    ParamCell c;
    c.name = "wedge";
    c.ambient = 2;
    c.domain = {{DomainFactor::interval, 1, 0, 1}, {DomainFactor::interval, 1, 0, 1}};
    // y = exp(-1/v), x from 1 to 1 + v
    c.map = [](const std::vector<Jet>& t) {
        const Jet& w = t[0];
        const Jet& v = t[1];
        return Coords{Coordinate::plain(1.0 + w * v), Coordinate::exp_of(-1.0 / v)};
    };
    c.incidences = {{1, false, {{1, false}}}};
    return c;
}

DivergenceReport divergence_probe(const ParamCell& cell, const LogForm& phi, int budget_rounds) {
    QuadratureOptions opt;
    opt.tol = 1e-10;
    Integral it = integrate_rounds(cell, phi, opt, budget_rounds, false);
    DivergenceReport rep;
    rep.trace = it.rounds;
    rep.last = it.value;
    rep.converged = it.converged;
    // growth: the last four increments keep one direction and do not shrink
    const auto& t = rep.trace;
    if (t.size() >= 5 && !it.converged) {
        bool grows = true;
        size_t n = t.size();
        for (size_t i = n - 4; i < n; ++i) {
            Complex step = t[i] - t[i - 1];
            Complex prev = i >= 2 ? t[i - 1] - t[i - 2] : step;
            if (std::abs(step) < 0.9 * std::abs(prev) || std::real(step * std::conj(prev)) <= 0) grows = false;
        }
        rep.diverged = grows;
    }
    return rep;
}

}  // namespace ajchains
