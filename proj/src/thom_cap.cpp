#include "ajchains/thom_cap.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace ajchains {

namespace {

// sign taking the id-sorted simplex to its rank-sorted vertex sequence
int rank_order(const Simplex& s, const std::vector<int>& rank, std::vector<int>& ordered) {
    std::vector<int> r(s.size());
    for (size_t i = 0; i < s.size(); ++i) r[i] = rank[s[i]];
    std::vector<int> perm = r;
    int sg = sort_sign(perm);
    ordered = s;
    std::sort(ordered.begin(), ordered.end(), [&](int a, int b) { return rank[a] < rank[b]; });
    return sg;
}

int sorted_index(const SimplicialComplex& k, std::vector<int> verts, int& sign) {
    sign = sort_sign(verts);
    return k.index(verts);
}

}  // namespace

Chain cap_product(const SimplicialComplex& k, const Cochain& u, const Chain& x, const std::vector<int>& rank) {
    Chain out;
    int p = u.degree;
    out.degree = x.degree - p;
    if (out.degree < 0) return out;
    std::vector<int> w;
    for (const auto& [i, coef] : x.c) {
        int s0 = rank_order(k.simplex(x.degree, i), rank, w);
        int sf, sb;
        int fi = sorted_index(k, std::vector<int>(w.begin(), w.begin() + p + 1), sf);
        auto uv = u.c.find(fi);
        if (uv == u.c.end()) continue;
        int bi = sorted_index(k, std::vector<int>(w.begin() + p, w.end()), sb);
        out.add(bi, coef * uv->second * (s0 * sf * sb));
    }
    return out;
}

namespace {

// Relative cocycle T on (k, complement of l) with T ∩ eta = eta_l, where the
// cap uses `rank`. A top-dimensional cycle of l that bounds near l vanishes, so
// the correction term of the defining identity can be taken to be zero.
Cochain solve_thom(const SimplicialComplex& k, const Subcomplex& l, int codim, const std::vector<int>& rank,
                   const Chain& eta, const Chain& eta_l, unsigned unknown_seed) {
    Subcomplex away = simplicial_complement(l);
    int n = k.dim();
    int tp = 2 * codim;
    std::vector<int> tcol(k.count(tp), -1);
    int ncols = 0;
    for (int i = 0; i < k.count(tp); ++i)
        if (!away.contains(tp, i)) tcol[i] = ncols++;
    std::vector<int> crow(k.count(tp + 1), -1), erow(k.count(n - tp), -1);
    int nrows = 0;
    for (int i = 0; i < k.count(tp + 1); ++i)
        if (!away.contains(tp + 1, i)) crow[i] = nrows++;
    for (int i = 0; i < k.count(n - tp); ++i)
        if (l.contains(n - tp, i)) erow[i] = nrows++;

    SparseMatrix a(nrows, ncols);
    for (int i = 0; i < k.count(tp + 1); ++i) {
        if (crow[i] < 0) continue;
        const auto& fs = k.faces(tp + 1, i);
        for (size_t j = 0; j < fs.size(); ++j)
            if (tcol[fs[j]] >= 0) a.add(crow[i], tcol[fs[j]], j % 2 ? -1 : 1);
    }
    std::vector<int> w;
    for (const auto& [i, e] : eta.c) {
        int s0 = rank_order(k.simplex(n, i), rank, w);
        int sf, sb;
        int fi = sorted_index(k, std::vector<int>(w.begin(), w.begin() + tp + 1), sf);
        if (tcol[fi] < 0) continue;
        int bi = sorted_index(k, std::vector<int>(w.begin() + tp, w.end()), sb);
        if (erow[bi] < 0) throw std::logic_error("cap lands outside the face");
        a.add(erow[bi], tcol[fi], e * (s0 * sf * sb));
    }
    SparseVec rhs;
    for (const auto& [i, v] : eta_l.c) {
        if (erow[i] < 0) throw std::logic_error("face cycle not supported on the face");
        rhs.push_back({erow[i], v});
    }
    std::sort(rhs.begin(), rhs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    std::vector<int> priority(ncols);
    std::iota(priority.begin(), priority.end(), 0);
    if (unknown_seed) {
        std::mt19937 rng(unknown_seed);
        std::shuffle(priority.begin(), priority.end(), rng);
    }
    SparseVec x = solve(a, rhs, &priority);
    std::vector<int> tinv(ncols);
    for (int i = 0; i < k.count(tp); ++i)
        if (tcol[i] >= 0) tinv[tcol[i]] = i;
    Cochain t;
    t.degree = tp;
    for (const auto& [c, v] : x) t.add(tinv[c], v);
    return t;
}

}  // namespace

FaceMap::FaceMap(const SimplicialComplex& m, const Subcomplex& l, int codim, const Chain& eta_m,
                 const Chain& eta_l, ThomSolveOptions opt)
    : m_(&m), l_(l), codim_(codim) {
    if (!is_full(l)) throw NotFull("face subcomplex is not full");
    Subcomplex keep = l.unite(simplicial_complement(l));
    sd_ = barycentric_subdivision_mod(m, keep);
    const SimplicialComplex& k = sd_.complex;
    lsd_ = sd_.image(l);
    rank_ = good_ordering(k, lsd_, opt.ordering_seed);
    eta_sd_ = sd_.apply(m, eta_m);
    eta_l_sd_.degree = eta_l.degree;
    for (const auto& [i, v] : eta_l.c) eta_l_sd_.add(k.index(m.simplex(eta_l.degree, i)), v);
    beta_.degree = k.dim() - 2 * codim + 1;

    // Solve on the coarse complex and pull back along the vertex map sending
    // each barycenter to a vertex of its carrier off the face.
    std::vector<int> coarse_rank = good_ordering(m, l, opt.ordering_seed);
    Cochain coarse = solve_thom(m, l, codim, coarse_rank, eta_m, eta_l, opt.unknown_seed);
    std::vector<int> retract(k.num_vertices());
    for (int v = 0; v < m.num_vertices(); ++v) retract[v] = v;
    for (const auto& [sigma, b] : sd_.barycenter) {
        int best = -1;
        for (int v : sigma)
            if (!l.has_vertex(v) && (best < 0 || coarse_rank[v] < coarse_rank[best])) best = v;
        retract[b] = best;
    }
    thom_.degree = coarse.degree;
    for (int i = 0; i < k.count(coarse.degree); ++i) {
        std::vector<int> img;
        for (int v : k.simplex(coarse.degree, i)) img.push_back(retract[v]);
        int sg = sort_sign(img);
        if (!sg) continue;
        int j = m.index(img);
        auto it = coarse.c.find(j);
        if (it != coarse.c.end()) thom_.add(i, it->second * sg);
    }
    if (!verify()) thom_ = solve_thom(k, lsd_, codim, rank_, eta_sd_, eta_l_sd_, opt.unknown_seed);
}

Chain FaceMap::apply(const Chain& x) const {
    const SimplicialComplex& k = sd_.complex;
    Chain out;
    out.degree = x.degree - 2 * codim_;
    if (out.degree < 0) return out;
    for (const auto& [i, v] : x.c) {
        auto key = std::make_pair(x.degree, i);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            Chain one;
            one.degree = x.degree;
            one.add(i, 1);
            Chain capped = cap_product(k, thom_, sd_.apply(*m_, one), rank_);
            Chain back;
            back.degree = capped.degree;
            for (const auto& [j, w] : capped.c) {
                if (!lsd_.contains(capped.degree, j)) throw std::logic_error("face map left the face");
                back.add(m_->index(k.simplex(capped.degree, j)), w);
            }
            it = cache_.emplace(key, std::move(back)).first;
        }
        for (const auto& [j, w] : it->second.c) out.add(j, v * w);
    }
    return out;
}

bool FaceMap::verify() const {
    const SimplicialComplex& k = sd_.complex;
    Subcomplex away = simplicial_complement(lsd_);
    for (const auto& [i, v] : thom_.c)
        if (away.contains(thom_.degree, i)) return false;
    if (!coboundary(k, thom_).is_zero()) return false;
    Chain lhs = cap_product(k, thom_, eta_sd_, rank_) - boundary(k, beta_);
    return lhs == eta_l_sd_;
}

}  // namespace ajchains
