#include "ajchains/simplicial_core.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <random>
#include <set>

namespace ajchains {

int sort_sign(std::vector<int>& v) {
    int sign = 1;
    // insertion sort counting swaps; tuples are short
    for (size_t i = 1; i < v.size(); ++i)
        for (size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
            std::swap(v[j - 1], v[j]);
            sign = -sign;
        }
    for (size_t i = 1; i < v.size(); ++i)
        if (v[i] == v[i - 1]) return 0;
    return sign;
}

SimplicialComplex SimplicialComplex::from_simplices(int num_vertices, const std::vector<Simplex>& gens) {
    SimplicialComplex k;
    k.nverts_ = num_vertices;
    std::vector<std::vector<Simplex>> sets;
    for (const auto& g : gens) {
        if (g.empty()) throw InvalidSimplex("empty simplex");
        for (size_t i = 0; i < g.size(); ++i) {
            if (g[i] < 0 || g[i] >= num_vertices) throw InvalidSimplex("vertex id out of range");
            if (i && g[i] <= g[i - 1]) throw InvalidSimplex("simplex vertices not strictly increasing");
        }
        size_t n = g.size();
        if (sets.size() < n) sets.resize(n);
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            Simplex f;
            f.reserve(n);
            for (size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) f.push_back(g[i]);
            sets[f.size() - 1].push_back(std::move(f));
        }
    }
    for (auto& v : sets) {
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
    }
    int top = static_cast<int>(sets.size());
    k.cells_.resize(top);
    k.index_.resize(top);
    for (int d = 0; d < top; ++d) {
        k.cells_[d] = std::move(sets[d]);
        k.index_[d].reserve(k.cells_[d].size() * 2);
        for (size_t i = 0; i < k.cells_[d].size(); ++i) k.index_[d][k.cells_[d][i]] = static_cast<int>(i);
    }
    k.faces_.resize(top);
    k.cofaces_.resize(top);
    for (int d = 0; d < top; ++d) {
        k.faces_[d].resize(k.cells_[d].size());
        k.cofaces_[d].resize(k.cells_[d].size());
    }
    for (int d = 1; d < top; ++d)
        for (size_t i = 0; i < k.cells_[d].size(); ++i) {
            const Simplex& s = k.cells_[d][i];
            auto& fs = k.faces_[d][i];
            for (int j = 0; j <= d; ++j) {
                Simplex f;
                f.reserve(d);
                for (int t = 0; t <= d; ++t)
                    if (t != j) f.push_back(s[t]);
                int fi = k.index_[d - 1].at(f);
                fs.push_back(fi);
                k.cofaces_[d - 1][fi].push_back({static_cast<int>(i), j});
            }
        }
    return k;
}

int SimplicialComplex::index(const Simplex& s) const {
    int d = static_cast<int>(s.size()) - 1;
    if (d < 0 || d > dim()) return -1;
    auto it = index_[d].find(s);
    return it == index_[d].end() ? -1 : it->second;
}

std::vector<Simplex> SimplicialComplex::top_simplices() const {
    std::vector<Simplex> out;
    for (int d = 0; d <= dim(); ++d)
        for (int i = 0; i < count(d); ++i)
            if (cofaces_[d][i].empty()) out.push_back(cells_[d][i]);
    return out;
}

bool SimplicialComplex::is_pure() const {
    for (int d = 0; d < dim(); ++d)
        for (int i = 0; i < count(d); ++i)
            if (cofaces_[d][i].empty()) return false;
    return true;
}

// ---------------------------------------------------------------- subcomplexes

Subcomplex::Subcomplex(const SimplicialComplex& k) : k_(&k), in_(k.dim() + 1) {
    for (int d = 0; d <= k.dim(); ++d) in_[d].assign(k.count(d), 0);
}

Subcomplex Subcomplex::closure(const SimplicialComplex& k, const std::vector<Simplex>& gens) {
    Subcomplex s(k);
    for (const auto& g : gens) {
        int i = k.index(g);
        if (i < 0) throw InvalidSimplex("simplex not in complex");
        s.insert(static_cast<int>(g.size()) - 1, i);
    }
    return s;
}

Subcomplex Subcomplex::full_on(const SimplicialComplex& k, const std::vector<int>& verts) {
    std::vector<char> mark(k.num_vertices(), 0);
    for (int v : verts) mark[v] = 1;
    Subcomplex s(k);
    for (int d = 0; d <= k.dim(); ++d)
        for (int i = 0; i < k.count(d); ++i) {
            bool all = true;
            for (int v : k.simplex(d, i)) all = all && mark[v];
            if (all) s.in_[d][i] = 1;
        }
    return s;
}

Subcomplex Subcomplex::whole(const SimplicialComplex& k) {
    Subcomplex s(k);
    for (auto& row : s.in_) std::fill(row.begin(), row.end(), 1);
    return s;
}

bool Subcomplex::contains(const Simplex& s) const {
    int i = k_->index(s);
    return i >= 0 && contains(static_cast<int>(s.size()) - 1, i);
}

void Subcomplex::insert(int dim, int i) {
    if (in_[dim][i]) return;
    in_[dim][i] = 1;
    if (dim == 0) return;
    for (int f : k_->faces(dim, i)) insert(dim - 1, f);
}

bool Subcomplex::empty() const {
    for (const auto& row : in_)
        for (char c : row)
            if (c) return false;
    return true;
}

int Subcomplex::count(int dim) const {
    if (dim < 0 || dim >= static_cast<int>(in_.size())) return 0;
    return static_cast<int>(std::count(in_[dim].begin(), in_[dim].end(), 1));
}

int Subcomplex::dim() const {
    for (int d = static_cast<int>(in_.size()) - 1; d >= 0; --d)
        if (count(d)) return d;
    return -1;
}

std::vector<int> Subcomplex::vertices() const {
    std::vector<int> out;
    if (in_.empty()) return out;
    for (int i = 0; i < k_->count(0); ++i)
        if (in_[0][i]) out.push_back(k_->simplex(0, i)[0]);
    return out;
}

Subcomplex Subcomplex::unite(const Subcomplex& o) const {
    Subcomplex s = *this;
    for (size_t d = 0; d < in_.size(); ++d)
        for (size_t i = 0; i < in_[d].size(); ++i) s.in_[d][i] = in_[d][i] | o.in_[d][i];
    return s;
}

Subcomplex Subcomplex::intersect(const Subcomplex& o) const {
    Subcomplex s = *this;
    for (size_t d = 0; d < in_.size(); ++d)
        for (size_t i = 0; i < in_[d].size(); ++i) s.in_[d][i] = in_[d][i] & o.in_[d][i];
    return s;
}

bool is_full(const Subcomplex& l) {
    const SimplicialComplex& k = l.complex();
    std::vector<char> mark(k.num_vertices(), 0);
    for (int v : l.vertices()) mark[v] = 1;
    for (int d = 1; d <= k.dim(); ++d)
        for (int i = 0; i < k.count(d); ++i) {
            bool all = true;
            for (int v : k.simplex(d, i)) all = all && mark[v];
            if (all && !l.contains(d, i)) return false;
        }
    return true;
}

Subcomplex simplicial_complement(const Subcomplex& l) {
    const SimplicialComplex& k = l.complex();
    std::vector<char> mark(k.num_vertices(), 0);
    for (int v : l.vertices()) mark[v] = 1;
    Subcomplex c(k);
    for (int d = 0; d <= k.dim(); ++d)
        for (int i = 0; i < k.count(d); ++i) {
            bool meets = false;
            for (int v : k.simplex(d, i)) meets = meets || mark[v];
            if (!meets) c.insert(d, i);
        }
    return c;
}

Subcomplex simplicial_neighborhood(const Subcomplex& l) {
    const SimplicialComplex& k = l.complex();
    std::vector<char> mark(k.num_vertices(), 0);
    for (int v : l.vertices()) mark[v] = 1;
    Subcomplex n(k);
    for (int d = 0; d <= k.dim(); ++d)
        for (int i = 0; i < k.count(d); ++i) {
            bool meets = false;
            for (int v : k.simplex(d, i)) meets = meets || mark[v];
            if (meets) n.insert(d, i);
        }
    return n;
}

// ---------------------------------------------------------------- chains

void Chain::add(int i, const Rational& v) {
    if (v == 0) return;
    auto [it, fresh] = c.try_emplace(i, 0);
    it->second += v;
    if (it->second == 0) c.erase(it);
}

Chain Chain::operator+(const Chain& o) const {
    Chain r = *this;
    for (const auto& [i, v] : o.c) r.add(i, v);
    return r;
}

Chain Chain::operator-(const Chain& o) const {
    Chain r = *this;
    for (const auto& [i, v] : o.c) r.add(i, -v);
    return r;
}

Chain Chain::operator*(const Rational& s) const {
    Chain r;
    r.degree = degree;
    if (s == 0) return r;
    for (const auto& [i, v] : c) r.c[i] = v * s;
    return r;
}

Chain boundary(const SimplicialComplex& k, const Chain& x) {
    Chain out;
    out.degree = x.degree - 1;
    if (x.degree == 0) return out;
    for (const auto& [i, v] : x.c) {
        const auto& fs = k.faces(x.degree, i);
        for (size_t j = 0; j < fs.size(); ++j) out.add(fs[j], j % 2 ? -v : v);
    }
    return out;
}

Chain coboundary(const SimplicialComplex& k, const Cochain& u) {
    Chain out;
    out.degree = u.degree + 1;
    if (u.degree >= k.dim()) return out;
    for (const auto& [i, v] : u.c)
        for (const auto& [s, j] : k.cofaces(u.degree, i)) out.add(s, j % 2 ? -v : v);
    return out;
}

Chain mod_out(const Chain& x, const Subcomplex& d) {
    Chain out;
    out.degree = x.degree;
    for (const auto& [i, v] : x.c)
        if (!d.contains(x.degree, i)) out.c[i] = v;
    return out;
}

bool supported_in(const Chain& x, const Subcomplex& l) {
    for (const auto& [i, v] : x.c)
        if (!l.contains(x.degree, i)) return false;
    return true;
}

Rational evaluate(const Cochain& u, const Chain& x) {
    if (u.degree != x.degree) return 0;
    Rational s = 0;
    auto a = u.c.begin();
    auto b = x.c.begin();
    while (a != u.c.end() && b != x.c.end()) {
        if (a->first < b->first) {
            ++a;
        } else if (b->first < a->first) {
            ++b;
        } else {
            s += a->second * b->second;
            ++a;
            ++b;
        }
    }
    return s;
}

SparseMatrix boundary_matrix(const SimplicialComplex& k, int deg) {
    SparseMatrix m(k.count(deg - 1), k.count(deg));
    if (deg <= 0) return m;
    for (int i = 0; i < k.count(deg); ++i) {
        const auto& fs = k.faces(deg, i);
        for (size_t j = 0; j < fs.size(); ++j) m.add(fs[j], i, j % 2 ? -1 : 1);
    }
    return m;
}

Subcomplex support(const SimplicialComplex& k, const Chain& x) {
    Subcomplex s(k);
    for (const auto& [i, v] : x.c) s.insert(x.degree, i);
    return s;
}

std::vector<int> relative_cells(const SimplicialComplex& k, const Subcomplex& d, int deg) {
    std::vector<int> out;
    for (int i = 0; i < k.count(deg); ++i)
        if (!d.contains(deg, i)) out.push_back(i);
    return out;
}

SparseMatrix relative_boundary_matrix(const SimplicialComplex& k, const Subcomplex& d, int deg) {
    auto src = relative_cells(k, d, deg);
    auto dst = relative_cells(k, d, deg - 1);
    std::vector<int> pos(k.count(deg - 1), -1);
    for (size_t i = 0; i < dst.size(); ++i) pos[dst[i]] = static_cast<int>(i);
    SparseMatrix m(static_cast<int>(dst.size()), static_cast<int>(src.size()));
    if (deg <= 0) return m;
    for (size_t c = 0; c < src.size(); ++c) {
        const auto& fs = k.faces(deg, src[c]);
        for (size_t j = 0; j < fs.size(); ++j)
            if (pos[fs[j]] >= 0) m.add(pos[fs[j]], static_cast<int>(c), j % 2 ? -1 : 1);
    }
    return m;
}

Chain fundamental_cycle(const SimplicialComplex& k, int seed_sign) {
    int n = k.dim();
    if (!k.is_pure()) throw NotPseudomanifold("complex is not pure");
    Chain eta;
    eta.degree = n;
    if (n == 0) {
        for (int i = 0; i < k.count(0); ++i) eta.c[i] = seed_sign;
        return eta;
    }
    for (int f = 0; f < k.count(n - 1); ++f)
        if (k.cofaces(n - 1, f).size() != 2) throw NotPseudomanifold("codimension-one face without exactly two cofaces");
    std::vector<int> sign(k.count(n), 0);
    for (int seed = 0; seed < k.count(n); ++seed) {
        if (sign[seed]) continue;
        sign[seed] = seed_sign;
        std::deque<int> queue{seed};
        while (!queue.empty()) {
            int s = queue.front();
            queue.pop_front();
            const auto& fs = k.faces(n, s);
            for (int j = 0; j <= n; ++j) {
                for (const auto& [t, jt] : k.cofaces(n - 1, fs[j])) {
                    if (t == s) continue;
                    // sign[t] (-1)^jt = -sign[s] (-1)^j
                    int want = -sign[s] * ((j + jt) % 2 ? -1 : 1);
                    if (!sign[t]) {
                        sign[t] = want;
                        queue.push_back(t);
                    } else if (sign[t] != want) {
                        throw NotOrientable("no coherent orientation");
                    }
                }
            }
        }
    }
    for (int i = 0; i < k.count(n); ++i) eta.c[i] = sign[i];
    return eta;
}

// ---------------------------------------------------------------- products

namespace {

// lattice paths from (0,0) to (p,q); each path is a list of moves, true = first factor
void lattice_paths(int p, int q, std::vector<bool>& cur, std::vector<std::vector<bool>>& out) {
    if (p == 0 && q == 0) {
        out.push_back(cur);
        return;
    }
    if (p > 0) {
        cur.push_back(true);
        lattice_paths(p - 1, q, cur, out);
        cur.pop_back();
    }
    if (q > 0) {
        cur.push_back(false);
        lattice_paths(p, q - 1, cur, out);
        cur.pop_back();
    }
}

const std::vector<std::vector<bool>>& paths_cached(int p, int q) {
    static std::map<std::pair<int, int>, std::vector<std::vector<bool>>> cache;
    auto it = cache.find({p, q});
    if (it != cache.end()) return it->second;
    std::vector<bool> cur;
    std::vector<std::vector<bool>> out;
    lattice_paths(p, q, cur, out);
    return cache.emplace(std::make_pair(p, q), std::move(out)).first->second;
}

Simplex walk(const ProductComplex& pc, const Simplex& s, const Simplex& t, const std::vector<bool>& path) {
    Simplex out;
    size_t i = 0, j = 0;
    out.push_back(pc.vertex(s[0], t[0]));
    for (bool first : path) {
        if (first) ++i;
        else ++j;
        out.push_back(pc.vertex(s[i], t[j]));
    }
    return out;
}

int shuffle_sign(const std::vector<bool>& path) {
    int inv = 0, seen_second = 0;
    for (bool first : path) {
        if (first) inv += seen_second;
        else ++seen_second;
    }
    return inv % 2 ? -1 : 1;
}

}  // namespace

ProductComplex product(const SimplicialComplex& a, const SimplicialComplex& b) {
    ProductComplex pc;
    pc.n1 = a.num_vertices();
    pc.n2 = b.num_vertices();
    std::vector<Simplex> gens;
    for (const auto& s : a.top_simplices())
        for (const auto& t : b.top_simplices()) {
            int p = static_cast<int>(s.size()) - 1, q = static_cast<int>(t.size()) - 1;
            for (const auto& path : paths_cached(p, q)) gens.push_back(walk(pc, s, t, path));
        }
    pc.complex = SimplicialComplex::from_simplices(pc.n1 * pc.n2, gens);
    pc.complex.labels.resize(pc.n1 * pc.n2);
    for (int v1 = 0; v1 < pc.n1; ++v1)
        for (int v2 = 0; v2 < pc.n2; ++v2) {
            std::vector<int> l = a.labels.empty() ? std::vector<int>{v1} : a.labels[v1];
            const std::vector<int> r = b.labels.empty() ? std::vector<int>{v2} : b.labels[v2];
            l.insert(l.end(), r.begin(), r.end());
            pc.complex.labels[pc.vertex(v1, v2)] = l;
        }
    return pc;
}

Chain cross_product(const ProductComplex& pc, const SimplicialComplex& a, const Chain& x, const SimplicialComplex& b,
                    const Chain& y) {
    Chain out;
    out.degree = x.degree + y.degree;
    for (const auto& [i, u] : x.c)
        for (const auto& [j, v] : y.c) {
            const Simplex& s = a.simplex(x.degree, i);
            const Simplex& t = b.simplex(y.degree, j);
            for (const auto& path : paths_cached(x.degree, y.degree)) {
                int idx = pc.complex.index(walk(pc, s, t, path));
                out.add(idx, u * v * shuffle_sign(path));
            }
        }
    return out;
}

Subcomplex product_subcomplex(const ProductComplex& pc, const Subcomplex& a, const Subcomplex& b) {
    const SimplicialComplex& k = pc.complex;
    Subcomplex s(k);
    for (int d = 0; d <= k.dim(); ++d)
        for (int i = 0; i < k.count(d); ++i) {
            Simplex pa, pb;
            for (int v : k.simplex(d, i)) {
                pa.push_back(v / pc.n2);
                pb.push_back(v % pc.n2);
            }
            pa.erase(std::unique(pa.begin(), pa.end()), pa.end());
            std::sort(pb.begin(), pb.end());
            pb.erase(std::unique(pb.begin(), pb.end()), pb.end());
            if (a.contains(pa) && b.contains(pb)) s.insert(d, i);
        }
    return s;
}

// ---------------------------------------------------------------- subdivision

Subdivision barycentric_subdivision_mod(const SimplicialComplex& k, const Subcomplex& s) {
    Subdivision sd;
    int next = k.num_vertices();
    for (int d = 1; d <= k.dim(); ++d)
        for (int i = 0; i < k.count(d); ++i)
            if (!s.contains(d, i)) {
                sd.barycenter[k.simplex(d, i)] = next++;
                sd.carrier.push_back(k.simplex(d, i));
            }
    auto bary = [&](int d, int i) { return d == 0 ? k.simplex(0, i)[0] : sd.barycenter.at(k.simplex(d, i)); };

    std::vector<Simplex> gens;
    for (int d = 0; d <= k.dim(); ++d)
        for (int i = 0; i < k.count(d); ++i)
            if (s.contains(d, i)) gens.push_back(k.simplex(d, i));

    // chains sigma_1 < ... < sigma_r of unstarred-free simplices, built top down
    std::vector<int> chain_verts;
    std::function<void(int, int)> descend = [&](int d, int i) {
        chain_verts.push_back(bary(d, i));
        // tau = proper face of sigma_1 lying in s, or empty
        {
            Simplex v = chain_verts;
            std::sort(v.begin(), v.end());
            gens.push_back(v);
            const Simplex& sig = k.simplex(d, i);
            int n = d + 1;
            for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
                Simplex tau;
                for (int t = 0; t < n; ++t)
                    if (mask & (1u << t)) tau.push_back(sig[t]);
                if (!s.contains(tau)) continue;
                Simplex w = chain_verts;
                w.insert(w.end(), tau.begin(), tau.end());
                std::sort(w.begin(), w.end());
                gens.push_back(w);
            }
        }
        if (d > 0) {
            // proper faces of every dimension not in s
            const Simplex& sig = k.simplex(d, i);
            int n = d + 1;
            for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
                Simplex f;
                for (int t = 0; t < n; ++t)
                    if (mask & (1u << t)) f.push_back(sig[t]);
                int fd = static_cast<int>(f.size()) - 1;
                int fi = k.index(f);
                if (!s.contains(fd, fi)) descend(fd, fi);
            }
        }
        chain_verts.pop_back();
    };
    for (int d = 0; d <= k.dim(); ++d)
        for (int i = 0; i < k.count(d); ++i)
            if (!s.contains(d, i) && k.cofaces(d, i).empty()) descend(d, i);
    // non-maximal unstarred simplices are reached as faces of maximal ones
    sd.complex = SimplicialComplex::from_simplices(next, gens);
    sd.complex.labels.assign(next, {});
    for (int v = 0; v < k.num_vertices() && !k.labels.empty(); ++v) sd.complex.labels[v] = k.labels[v];
    return sd;
}

Chain Subdivision::apply(const SimplicialComplex& old, const Chain& x) const {
    std::map<std::pair<int, int>, Chain> memo;
    std::function<const Chain&(int, int)> lambda = [&](int d, int i) -> const Chain& {
        auto key = std::make_pair(d, i);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        Chain out;
        out.degree = d;
        const Simplex& s = old.simplex(d, i);
        auto b = barycenter.find(s);
        if (d == 0 || b == barycenter.end()) {
            out.add(complex.index(s), 1);
        } else {
            int bv = b->second;
            const auto& fs = old.faces(d, i);
            for (int j = 0; j <= d; ++j) {
                const Chain& sub = lambda(d - 1, fs[j]);
                for (const auto& [t, v] : sub.c) {
                    std::vector<int> w{bv};
                    const Simplex& ts = complex.simplex(d - 1, t);
                    w.insert(w.end(), ts.begin(), ts.end());
                    int sg = sort_sign(w);
                    Rational coef = v * sg;
                    if (j % 2) coef = -coef;
                    out.add(complex.index(w), coef);
                }
            }
        }
        return memo.emplace(key, std::move(out)).first->second;
    };
    Chain out;
    out.degree = x.degree;
    for (const auto& [i, v] : x.c) {
        const Chain& l = lambda(x.degree, i);
        for (const auto& [t, w] : l.c) out.add(t, v * w);
    }
    return out;
}

Subcomplex Subdivision::image(const Subcomplex& s) const {
    Subcomplex out(complex);
    const SimplicialComplex& old = s.complex();
    for (int d = 0; d <= old.dim(); ++d)
        for (int i = 0; i < old.count(d); ++i)
            if (s.contains(d, i)) {
                int j = complex.index(old.simplex(d, i));
                if (j < 0) throw std::logic_error("subdivision changed a fixed simplex");
                out.insert(d, j);
            }
    return out;
}

std::vector<int> good_ordering(const SimplicialComplex& k, const Subcomplex& l, unsigned seed) {
    int n = k.num_vertices();
    std::vector<int> lower, upper;
    std::vector<char> inl(n, 0);
    for (int v : l.vertices()) inl[v] = 1;
    for (int i = 0; i < k.count(0); ++i) {
        int v = k.simplex(0, i)[0];
        (inl[v] ? upper : lower).push_back(v);
    }
    if (seed) {
        std::mt19937 rng(seed);
        std::shuffle(lower.begin(), lower.end(), rng);
        std::shuffle(upper.begin(), upper.end(), rng);
    }
    std::vector<int> rank(n, -1);
    int r = 0;
    for (int v : lower) rank[v] = r++;
    for (int v : upper) rank[v] = r++;
    return rank;
}

SimplicialComplex as_complex(const Subcomplex& s) {
    const SimplicialComplex& k = s.complex();
    std::vector<Simplex> gens;
    for (int d = 0; d <= k.dim(); ++d)
        for (int i = 0; i < k.count(d); ++i)
            if (s.contains(d, i)) gens.push_back(k.simplex(d, i));
    SimplicialComplex out = SimplicialComplex::from_simplices(k.num_vertices(), gens);
    out.labels = k.labels;
    return out;
}

}  // namespace ajchains
