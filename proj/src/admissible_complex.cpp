#include "ajchains/admissible_complex.hpp"

#include <algorithm>
#include <bit>

#include "ajchains/projective_model.hpp"

namespace ajchains {

namespace {

int popcount(unsigned m) { return std::popcount(m); }

// transport a chain between complexes sharing vertex ids
Chain transport(const SimplicialComplex& from, const Chain& x, const SimplicialComplex& to) {
    Chain out;
    out.degree = x.degree;
    for (const auto& [i, v] : x.c) {
        int j = to.index(from.simplex(x.degree, i));
        if (j < 0) throw std::logic_error("chain does not live on the target complex");
        out.add(j, v);
    }
    return out;
}

}  // namespace

FaceConfiguration::FaceConfiguration(const SimplicialComplex& k, Subcomplex d, std::vector<Face> faces,
                                     CycleProvider cycles)
    : k_(&k), d_(std::move(d)), faces_(std::move(faces)) {
    if (faces_.size() > 20) throw std::invalid_argument("too many faces");
    int t = num_faces();
    std::vector<std::vector<char>> in_face(t, std::vector<char>(k.num_vertices(), 0));
    for (int i = 0; i < t; ++i)
        for (int v : faces_[i].cells.vertices()) in_face[i][v] = 1;

    for (unsigned mask = 0; mask < (1u << t); ++mask) {
        std::vector<int> verts;
        for (int i = 0; i < k.count(0); ++i) {
            int v = k.simplex(0, i)[0];
            bool all = true;
            for (int f = 0; f < t && all; ++f)
                if (mask >> f & 1) all = in_face[f][v];
            if (all) verts.push_back(v);
        }
        if (verts.empty()) continue;
        Stratum s;
        s.mask = mask;
        for (int f = 0; f < t; ++f)
            if (mask >> f & 1) s.codim += faces_[f].codim;
        Subcomplex cells = Subcomplex::whole(k);
        for (int f = 0; f < t; ++f)
            if (mask >> f & 1) cells = cells.intersect(faces_[f].cells);
        s.complex = std::make_unique<SimplicialComplex>(as_complex(cells));
        const SimplicialComplex& sc = *s.complex;
        s.divisor = Subcomplex(sc);
        for (int dd = 0; dd <= d_.dim(); ++dd)
            for (int i = 0; i < k.count(dd); ++i)
                if (d_.contains(dd, i)) {
                    int j = sc.index(k.simplex(dd, i));
                    if (j >= 0) s.divisor.insert(dd, j);
                }
        stratum_vertices_[mask] = std::move(verts);
        strata_.emplace(mask, std::move(s));
    }
    check_good();
    for (auto& [mask, s] : strata_) s.fundamental = cycles ? cycles(mask, *s.complex) : fundamental_cycle(*s.complex);
}

const Stratum* FaceConfiguration::stratum(unsigned mask) const {
    auto it = strata_.find(mask);
    return it == strata_.end() ? nullptr : &it->second;
}

std::vector<unsigned> FaceConfiguration::strata_masks() const {
    std::vector<unsigned> out;
    for (const auto& [m, s] : strata_) out.push_back(m);
    std::stable_sort(out.begin(), out.end(), [](unsigned a, unsigned b) { return popcount(a) < popcount(b); });
    return out;
}

Subcomplex FaceConfiguration::sub_stratum(unsigned within, unsigned mask) const {
    const Stratum* s = stratum(within);
    if (!s || (mask & within) != within) throw std::invalid_argument("sub_stratum: bad masks");
    auto it = stratum_vertices_.find(mask);
    if (it == stratum_vertices_.end()) return Subcomplex(*s->complex);
    return Subcomplex::full_on(*s->complex, it->second);
}

void FaceConfiguration::check_good() const {
    const SimplicialComplex& k = *k_;
    if (!is_full(d_)) throw NotGoodTriangulation("D is not a full subcomplex");
    int t = num_faces();
    for (int f = 0; f < t; ++f)
        if (faces_[f].codim < 1) throw NotGoodTriangulation("face " + faces_[f].name + " has codimension < 1");
    for (unsigned mask = 1; mask < (1u << t); ++mask) {
        Subcomplex u(k);
        for (int f = 0; f < t; ++f)
            if (mask >> f & 1) u = u.unite(faces_[f].cells);
        if (!is_full(u)) throw NotGoodTriangulation("a union of faces is not full");
    }
    int top = k.dim();
    for (const auto& [mask, s] : strata_) {
        if (!(Subcomplex::full_on(*s.complex, stratum_vertices_.at(mask)) == Subcomplex::whole(*s.complex)))
            throw NotGoodTriangulation("stratum is not full");
        if (s.complex->dim() != top - 2 * s.codim)
            throw NotGoodTriangulation("faces do not meet properly");
    }
}

// ---------------------------------------------------------------- admissibility

bool is_admissible_simplex(const FaceConfiguration& cfg, unsigned within, int dim_s, const Simplex& sigma) {
    const Stratum* base = cfg.stratum(within);
    if (!base) return false;
    for (unsigned mask : cfg.strata_masks()) {
        if ((mask & within) != within || mask == within) continue;
        const Stratum* s = cfg.stratum(mask);
        Simplex tau;
        for (int v : sigma)
            if (s->complex->contains(Simplex{v})) tau.push_back(v);
        if (tau.empty() || cfg.divisor().contains(tau)) continue;
        int rel = s->codim - base->codim;
        if (static_cast<int>(tau.size()) - 1 > dim_s - 2 * rel) return false;
    }
    return true;
}

bool is_admissible(const FaceConfiguration& cfg, const Subcomplex& s, unsigned within) {
    if (s.empty()) return true;
    const SimplicialComplex& k = s.complex();
    int ds = s.dim();
    for (int d = 0; d <= ds; ++d)
        for (int i = 0; i < k.count(d); ++i)
            if (s.contains(d, i) && !is_admissible_simplex(cfg, within, ds, k.simplex(d, i))) return false;
    return true;
}

bool is_delta_admissible(const FaceConfiguration& cfg, const Chain& x, unsigned within) {
    const Stratum* st = cfg.stratum(within);
    if (!st) return x.is_zero();
    const SimplicialComplex& k = *st->complex;
    auto ok = [&](const Chain& y) {
        Chain r = mod_out(y, st->divisor);
        if (r.is_zero()) return true;
        for (const auto& [i, v] : r.c)
            if (!is_admissible_simplex(cfg, within, r.degree, k.simplex(r.degree, i))) return false;
        return true;
    };
    return ok(x) && (x.degree == 0 || ok(boundary(k, x)));
}

SparseMatrix admissible_chain_basis(const FaceConfiguration& cfg, unsigned mask, int k) {
    const Stratum* st = cfg.stratum(mask);
    const SimplicialComplex& kc = *st->complex;
    auto cells = relative_cells(kc, st->divisor, k);
    std::vector<int> good;
    for (size_t c = 0; c < cells.size(); ++c)
        if (is_admissible_simplex(cfg, mask, k, kc.simplex(k, cells[c]))) good.push_back(static_cast<int>(c));
    // boundary components on non-admissible cells must vanish
    std::vector<int> bad_row(kc.count(k - 1), -1);
    int nbad = 0;
    if (k >= 1)
        for (int i = 0; i < kc.count(k - 1); ++i)
            if (!st->divisor.contains(k - 1, i) && !is_admissible_simplex(cfg, mask, k - 1, kc.simplex(k - 1, i)))
                bad_row[i] = nbad++;
    SparseMatrix b(nbad, static_cast<int>(good.size()));
    if (k >= 1)
        for (size_t g = 0; g < good.size(); ++g) {
            const auto& fs = kc.faces(k, cells[good[g]]);
            for (size_t j = 0; j < fs.size(); ++j)
                if (bad_row[fs[j]] >= 0) b.add(bad_row[fs[j]], static_cast<int>(g), j % 2 ? -1 : 1);
        }
    SparseMatrix ker = kernel_basis(b);
    SparseMatrix out(static_cast<int>(cells.size()), ker.cols);
    for (int c = 0; c < ker.cols; ++c)
        for (const auto& [r, v] : ker.col[c]) out.add(good[r], c, v);
    return out;
}

// ---------------------------------------------------------------- face maps

const FaceMap& FaceMapCache::get(unsigned mask, int alpha) {
    auto key = std::make_pair(mask, alpha);
    auto it = maps_.find(key);
    if (it != maps_.end()) return *it->second;
    const Stratum* src = cfg_->stratum(mask);
    const Stratum* dst = cfg_->stratum(mask | 1u << alpha);
    if (!src || !dst || (mask >> alpha & 1)) throw NotProper("face map to an empty or repeated face");
    Chain eta_l = transport(*dst->complex, dst->fundamental, *src->complex);
    auto f = std::make_unique<FaceMap>(*src->complex, cfg_->sub_stratum(mask, mask | 1u << alpha),
                                       cfg_->face(alpha).codim, src->fundamental, eta_l, opt_);
    return *maps_.emplace(key, std::move(f)).first->second;
}

Chain FaceMapCache::apply(unsigned mask, int alpha, const Chain& x) {
    const FaceMap& f = get(mask, alpha);
    return transport(*cfg_->stratum(mask)->complex, f.apply(x), *cfg_->stratum(mask | 1u << alpha)->complex);
}

CommutationReport face_map_commutation_check(const FaceConfiguration& cfg, int i, int j, const Chain& x,
                                             ThomSolveOptions opt) {
    FaceMapCache cache(cfg, opt);
    return face_map_commutation_check(cache, i, j, x);
}

CommutationReport face_map_commutation_check(FaceMapCache& cache, int i, int j, const Chain& x) {
    const FaceConfiguration& cfg = cache.configuration();
    if (i == j) throw NotProper("a face does not meet itself properly");
    unsigned both = 1u << i | 1u << j;
    if (!cfg.stratum(both)) throw NotProper("faces do not meet");
    if (!is_delta_admissible(cfg, x)) throw NotAdmissible("chain is not delta-admissible");
    CommutationReport r;
    r.first_then_second = cache.apply(1u << j, i, cache.apply(0, j, x));
    r.second_then_first = cache.apply(1u << i, j, cache.apply(0, i, x));
    r.equal = r.first_then_second == r.second_then_first;
    return r;
}

// ---------------------------------------------------------------- double complex

int ACDoubleComplex::coordinate(int j, unsigned mask, int cell) const {
    for (const Block& b : blocks[j - total.lo]) {
        if (b.mask != mask) continue;
        auto it = std::lower_bound(b.cells.begin(), b.cells.end(), cell);
        if (it == b.cells.end() || *it != cell) return -1;
        return b.offset + static_cast<int>(it - b.cells.begin());
    }
    return -1;
}

ACDoubleComplex build_ac_double_complex(const FaceConfiguration& cfg, TotalSign sign) {
    ACDoubleComplex dc;
    int top = cfg.ambient().dim();
    auto masks = cfg.strata_masks();
    dc.blocks.resize(top + 1);
    std::vector<int> dims(top + 1, 0);
    for (int j = 0; j <= top; ++j)
        for (unsigned mask : masks) {
            const Stratum* st = cfg.stratum(mask);
            int p = popcount(mask);
            int k = st->real_dim() - (j - p);
            if (k < 0 || k > st->real_dim()) continue;
            Block b{mask, p, k, dims[j], relative_cells(*st->complex, st->divisor, k)};
            dims[j] += static_cast<int>(b.cells.size());
            dc.blocks[j].push_back(std::move(b));
        }

    FaceMapCache cache(cfg);
    std::vector<SparseMatrix> d;
    for (int j = 0; j < top; ++j) {
        SparseMatrix m(dims[j + 1], dims[j]);
        for (const Block& b : dc.blocks[j]) {
            const Stratum* st = cfg.stratum(b.mask);
            const SimplicialComplex& kc = *st->complex;
            int dsign = (sign == TotalSign::column_parity && b.p % 2) ? -1 : 1;
            for (size_t c = 0; c < b.cells.size(); ++c) {
                int col = b.offset + static_cast<int>(c);
                Chain one;
                one.degree = b.chain_degree;
                one.add(b.cells[c], 1);
                for (const auto& [i, v] : mod_out(boundary(kc, one), st->divisor).c)
                    m.add(dc.coordinate(j + 1, b.mask, i), col, v * dsign);
                for (int alpha = 0; alpha < cfg.num_faces(); ++alpha) {
                    unsigned to = b.mask | 1u << alpha;
                    if (to == b.mask || !cfg.stratum(to)) continue;
                    if (b.chain_degree < 2 * cfg.face(alpha).codim) continue;
                    int fsign = popcount(b.mask & ((1u << alpha) - 1)) % 2 ? -1 : 1;
                    const Stratum* dst = cfg.stratum(to);
                    for (const auto& [i, v] : mod_out(cache.apply(b.mask, alpha, one), dst->divisor).c)
                        m.add(dc.coordinate(j + 1, to, i), col, v * fsign);
                }
            }
        }
        d.push_back(std::move(m));
    }

    dc.comparison = CochainComplex::plain(0, d, dims);
    dc.total = dc.comparison;
    dc.total.integral = false;
    for (int j = 0; j <= top; ++j) {
        SparseMatrix span(dims[j], 0);
        for (const Block& b : dc.blocks[j]) {
            SparseMatrix basis = admissible_chain_basis(cfg, b.mask, b.chain_degree);
            for (const auto& col : basis.col) {
                SparseVec shifted;
                for (const auto& [r, v] : col) shifted.emplace_back(r + b.offset, v);
                span.col.push_back(std::move(shifted));
                ++span.cols;
            }
        }
        dc.total.span[j] = std::move(span);
    }
    dc.comparison_is_complex = true;
    for (int j = 0; j + 1 < top; ++j)
        if (!multiply(d[j + 1], d[j]).is_zero()) dc.comparison_is_complex = false;
    return dc;
}

std::vector<ColumnComparison> compare_columns(const FaceConfiguration& cfg) {
    std::vector<ColumnComparison> out;
    for (unsigned mask : cfg.strata_masks()) {
        const Stratum* st = cfg.stratum(mask);
        const SimplicialComplex& kc = *st->complex;
        int top = st->real_dim();
        std::vector<int> dims;
        std::vector<SparseMatrix> d;
        for (int j = 0; j <= top; ++j) dims.push_back(static_cast<int>(relative_cells(kc, st->divisor, top - j).size()));
        for (int j = 0; j < top; ++j) d.push_back(relative_boundary_matrix(kc, st->divisor, top - j));
        ColumnComparison cc;
        cc.mask = mask;
        cc.full = CochainComplex::plain(0, d, dims);
        cc.ac = cc.full;
        cc.ac.integral = false;
        for (int j = 0; j <= top; ++j) cc.ac.span[j] = admissible_chain_basis(cfg, mask, top - j);
        ChainMap inc;
        for (int n : dims) inc.push_back(SparseMatrix::identity(n));
        cc.quasi_iso = is_quasi_iso(inc, cc.ac, cc.full);
        out.push_back(std::move(cc));
    }
    return out;
}

CochainComplex complement_pair_complex(const FaceConfiguration& cfg) {
    const SimplicialComplex& k = cfg.ambient();
    SimplicialComplex c = as_complex(simplicial_complement(cfg.divisor()));
    Subcomplex h(c);
    for (int f = 0; f < cfg.num_faces(); ++f) {
        const Subcomplex& face = cfg.face(f).cells;
        for (int dd = 0; dd <= c.dim(); ++dd)
            for (int i = 0; i < c.count(dd); ++i) {
                int a = k.index(c.simplex(dd, i));
                if (face.contains(dd, a)) h.insert(dd, i);
            }
    }
    std::vector<int> dims;
    std::vector<SparseMatrix> d;
    for (int j = 0; j <= c.dim(); ++j) dims.push_back(static_cast<int>(relative_cells(c, h, j).size()));
    for (int j = 0; j < c.dim(); ++j) d.push_back(relative_boundary_matrix(c, h, j + 1).transpose());
    return CochainComplex::plain(0, d, dims);
}

ComparisonReport compare_with_complement(const FaceConfiguration& cfg) {
    ComparisonReport r;
    ACDoubleComplex dc = build_ac_double_complex(cfg);
    r.ac = cohomology_all(dc.total);
    r.complement = cohomology_all(complement_pair_complex(cfg));
    r.columns = compare_columns(cfg);
    r.columns_quasi_iso = std::all_of(r.columns.begin(), r.columns.end(), [](const auto& c) { return c.quasi_iso; });
    size_t n = std::max(r.ac.size(), r.complement.size());
    r.ranks_match = true;
    for (size_t j = 0; j < n; ++j) {
        int a = j < r.ac.size() ? r.ac[j].rank : 0;
        int b = j < r.complement.size() ? r.complement[j].rank : 0;
        if (a != b) r.ranks_match = false;
    }
    r.comparison_is_complex = dc.comparison_is_complex;
    if (r.comparison_is_complex) {
        ChainMap inc;
        for (int dim : dc.total.ambient) inc.push_back(SparseMatrix::identity(dim));
        r.inclusion_quasi_iso = is_quasi_iso(inc, dc.total, dc.comparison);
    }
    return r;
}

// ---------------------------------------------------------------- models

FaceConfiguration projective_configuration(int k, std::vector<std::pair<int, bool>> order) {
    const ProjectiveModel& m = projective_model(k);
    if (order.empty())
        for (int axis = 0; axis < k; ++axis)
            for (bool inf : {false, true}) order.emplace_back(axis, inf);
    std::vector<Face> faces;
    for (const auto& [axis, inf] : order)
        faces.push_back({"z" + std::to_string(axis + 1) + (inf ? "=inf" : "=0"), 1, m.face(axis, inf)});
    auto cycles = [k, order](unsigned mask, const SimplicialComplex& stratum) {
        std::vector<int> value(k, -1);
        for (size_t f = 0; f < order.size(); ++f) {
            if (!(mask >> f & 1)) continue;
            auto [axis, inf] = order[f];
            int v = inf ? sphere::infinity : sphere::zero;
            if (value[axis] >= 0 && value[axis] != v) throw std::logic_error("empty stratum");
            value[axis] = v;
        }
        int level = 0;
        for (int v : value) level += v < 0;
        Chain x = projective_model(level).fundamental;
        for (int axis = 0; axis < k; ++axis) {
            if (value[axis] < 0) continue;
            x = insert_coordinate(projective_model(level), x, axis, value[axis], projective_model(level + 1));
            ++level;
        }
        return transport(projective_model(k).complex, x, stratum);
    };
    return FaceConfiguration(m.complex, m.divisor(), std::move(faces), cycles);
}

}  // namespace ajchains
