#include "ajchains/cubical_alt.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>

namespace ajchains {

CubeSymmetry CubeSymmetry::identity(int n) {
    CubeSymmetry g;
    g.eps.assign(n, 1);
    g.perm.resize(n);
    std::iota(g.perm.begin(), g.perm.end(), 0);
    return g;
}

int CubeSymmetry::sign() const {
    std::vector<int> p = perm;
    int s = sort_sign(p);
    for (int e : eps) s *= e;
    return s;
}

CubeSymmetry CubeSymmetry::operator*(const CubeSymmetry& h) const {
    if (n() != h.n()) throw AxisMismatch("composing symmetries of different cubes");
    CubeSymmetry out;
    out.eps.resize(n());
    out.perm.resize(n());
    for (int i = 0; i < n(); ++i) {
        out.eps[i] = h.eps[i] * eps[h.perm[i]];
        out.perm[i] = perm[h.perm[i]];
    }
    return out;
}

std::vector<CubeSymmetry> cube_group(int n) {
    std::vector<CubeSymmetry> out;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        for (unsigned m = 0; m < (1u << n); ++m) {
            CubeSymmetry g;
            g.perm = perm;
            for (int i = 0; i < n; ++i) g.eps.push_back(m >> i & 1 ? -1 : 1);
            out.push_back(std::move(g));
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

Chain act(const CubeSymmetry& g, const Chain& x, int n) {
    if (g.n() != n) throw AxisMismatch("symmetry and chain live on different cubes");
    const ProjectiveModel& m = projective_model(n);
    std::vector<int> inverted(n);
    for (int i = 0; i < n; ++i) inverted[i] = g.eps[i] < 0;
    return push_chain(m.complex, x, vertex_action(m, inverted, g.perm));
}

Chain alt_project(const Chain& x, int n) {
    auto group = cube_group(n);
    Chain out;
    out.degree = x.degree;
    for (const auto& g : group) out = out + act(g, x, n) * Rational(g.sign());
    return out * Rational(1, static_cast<long>(group.size()));
}

int FaceIndex::position() const { return 2 * axis + ((axis % 2 == 0) == at_infinity ? 1 : 0); }

FaceIndex FaceIndex::at(int position) {
    FaceIndex f;
    f.axis = position / 2;
    bool second = position % 2;
    f.at_infinity = (f.axis % 2 == 0) == second;
    return f;
}

namespace signs {
namespace {
int par(long v) { return static_cast<int>(((v % 2) + 2) % 2); }
}  // namespace
int eps1(int x, int y) { return par(static_cast<long>(x) * (x + 1) / 2 + static_cast<long>(x) * y); }
int eps2(int x, int y) { return par(static_cast<long>(x) * y + static_cast<long>(y) * (y + 1) / 2); }
int eps3(int j, int a) { return par(static_cast<long>(j) * (j + 1) / 2 + a); }
int eps_ci(int c, int i, int p) { return par(1 + static_cast<long>(i) * (c + 1 + p) + static_cast<long>(c) * (c - 1) / 2); }
}  // namespace signs

// ---------------------------------------------------------------- face maps on models

namespace {

std::mutex cache_mu;

}  // namespace

const FaceMap& model_face_map(int n, int axis, bool at_infinity) {
    static std::map<std::tuple<int, int, bool>, std::unique_ptr<FaceMap>> cache;
    std::lock_guard<std::mutex> lock(cache_mu);
    auto key = std::make_tuple(n, axis, at_infinity);
    auto it = cache.find(key);
    if (it == cache.end()) {
        const ProjectiveModel& m = projective_model(n);
        auto f = std::make_unique<FaceMap>(m.complex, m.face(axis, at_infinity), 1, m.fundamental,
                                           m.face_cycle(axis, at_infinity));
        it = cache.emplace(key, std::move(f)).first;
    }
    return *it->second;
}

const FaceConfiguration& coordinate_configuration(int n) {
    static std::map<int, std::unique_ptr<FaceConfiguration>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, std::make_unique<FaceConfiguration>(projective_configuration(n))).first;
    return *it->second;
}

Chain model_face(int n, int axis, bool at_infinity, const Chain& x) {
    const FaceMap& f = model_face_map(n, axis, at_infinity);
    Chain y;
    {
        // FaceMap::apply fills a per-simplex cache
        std::lock_guard<std::mutex> lock(cache_mu);
        y = f.apply(x);
    }
    return drop_coordinate(projective_model(n), y, axis, projective_model(n - 1));
}

Chain cubical_boundary(const Chain& x, int n) {
    if (n < 1) throw AxisMismatch("cubical boundary needs at least one axis");
    if (!is_delta_admissible(coordinate_configuration(n), x)) throw NotAdmissible("chain is not delta-admissible");
    Chain out;
    out.degree = x.degree - 2;
    for (int axis = 0; axis < n; ++axis) {
        Rational s(axis % 2 ? -1 : 1);
        out = out + (model_face(n, axis, false, x) - model_face(n, axis, true, x)) * s;
    }
    return out;
}

// ---------------------------------------------------------------- cubical complex

int CubicalComplex::coordinate(int j, int a, int cell) const {
    for (const CubicalBlock& b : blocks[j - total.lo]) {
        if (b.a != a) continue;
        auto it = std::lower_bound(b.cells.begin(), b.cells.end(), cell);
        if (it == b.cells.end() || *it != cell) return -1;
        return b.offset + static_cast<int>(it - b.cells.begin());
    }
    return -1;
}

namespace {

SparseVec relative_coords(const std::vector<int>& cells, const Chain& x) {
    SparseVec out;
    for (const auto& [i, v] : x.c) {
        auto it = std::lower_bound(cells.begin(), cells.end(), i);
        if (it != cells.end() && *it == i) out.emplace_back(static_cast<int>(it - cells.begin()), v);
    }
    return out;
}

}  // namespace

CubicalComplex build_cubical_ac_complex(int n) {
    CubicalComplex cc;
    cc.n = n;
    int top = 2 * n;
    cc.blocks.resize(top + 1);
    std::vector<int> dims(top + 1, 0);
    for (int j = 0; j <= top; ++j)
        for (int a = 0; a <= n; ++a) {
            int k = 2 * n - a - j;
            if (k < 0 || k > 2 * (n - a)) continue;
            const ProjectiveModel& m = projective_model(n - a);
            CubicalBlock b{a, k, dims[j], relative_cells(m.complex, m.divisor(), k)};
            dims[j] += static_cast<int>(b.cells.size());
            cc.blocks[j].push_back(std::move(b));
        }

    std::vector<SparseMatrix> d;
    for (int j = 0; j < top; ++j) {
        SparseMatrix mat(dims[j + 1], dims[j]);
        for (const CubicalBlock& b : cc.blocks[j]) {
            int level = n - b.a;
            const ProjectiveModel& m = projective_model(level);
            Subcomplex dm = m.divisor();
            Subcomplex dlo = level ? projective_model(level - 1).divisor() : Subcomplex();
            int dsign = b.a % 2 ? -1 : 1;
            for (size_t c = 0; c < b.cells.size(); ++c) {
                int col = b.offset + static_cast<int>(c);
                Chain one;
                one.degree = b.chain_degree;
                one.add(b.cells[c], 1);
                for (const auto& [i, v] : mod_out(boundary(m.complex, one), dm).c)
                    mat.add(cc.coordinate(j + 1, b.a, i), col, v * dsign);
                if (level == 0 || b.chain_degree < 2) continue;
                for (int axis = 0; axis < level; ++axis) {
                    Rational s(axis % 2 ? -1 : 1);
                    Chain y = (model_face(level, axis, false, one) - model_face(level, axis, true, one)) * s;
                    for (const auto& [i, v] : mod_out(y, dlo).c) mat.add(cc.coordinate(j + 1, b.a + 1, i), col, v);
                }
            }
        }
        d.push_back(std::move(mat));
    }
    cc.total = CochainComplex::plain(0, d, dims);
    cc.total.integral = false;

    for (int j = 0; j <= top; ++j) {
        SparseMatrix span(dims[j], 0);
        for (const CubicalBlock& b : cc.blocks[j]) {
            int level = n - b.a;
            const ProjectiveModel& m = projective_model(level);
            Subcomplex dm = m.divisor();
            SparseMatrix basis = admissible_chain_basis(coordinate_configuration(level), 0, b.chain_degree);
            Echelon seen;
            for (const auto& col : basis.col) {
                Chain x;
                x.degree = b.chain_degree;
                for (const auto& [r, v] : col) x.add(b.cells[r], v);
                SparseVec alt = relative_coords(b.cells, mod_out(alt_project(x, level), dm));
                if (!seen.insert(alt)) continue;
                SparseVec shifted;
                for (const auto& [r, v] : alt) shifted.emplace_back(r + b.offset, v);
                span.col.push_back(std::move(shifted));
                ++span.cols;
            }
        }
        cc.total.span[j] = std::move(span);
    }
    return cc;
}

FaceConfiguration cubical_configuration(int n) {
    std::vector<std::pair<int, bool>> order;
    for (int q = 0; q < 2 * n; ++q) {
        FaceIndex f = FaceIndex::at(q);
        order.emplace_back(f.axis, f.at_infinity);
    }
    return projective_configuration(n, order);
}

ChainMap sigma_map(const ACDoubleComplex& src, const FaceConfiguration& cfg, const CubicalComplex& dst) {
    int n = dst.n;
    const ProjectiveModel& top = projective_model(n);
    ChainMap f;
    for (int j = 0; j <= 2 * n; ++j) {
        SparseMatrix m(dst.total.ambient[j], src.total.ambient[j]);
        for (const Block& b : src.blocks[j]) {
            std::vector<int> fixed;
            int sgn = 0;
            for (int q = 0; q < cfg.num_faces(); ++q)
                if (b.mask >> q & 1) {
                    fixed.push_back(FaceIndex::at(q).axis);
                    sgn += q;
                }
            std::sort(fixed.begin(), fixed.end());
            int level = n - static_cast<int>(fixed.size());
            const ProjectiveModel& lo = projective_model(level);
            Subcomplex dlo = lo.divisor();
            const SimplicialComplex& sc = *cfg.stratum(b.mask)->complex;
            for (size_t c = 0; c < b.cells.size(); ++c) {
                Simplex s;
                for (int v : sc.simplex(b.chain_degree, b.cells[c])) {
                    std::vector<int> label = top.complex.labels[v];
                    for (auto it = fixed.rbegin(); it != fixed.rend(); ++it) label.erase(label.begin() + *it);
                    s.push_back(lo.vertex(label));
                }
                Chain x;
                x.degree = b.chain_degree;
                x.add(lo.complex.index(s), sgn % 2 ? -1 : 1);
                for (const auto& [i, v] : mod_out(alt_project(x, level), dlo).c)
                    m.add(dst.coordinate(j, static_cast<int>(fixed.size()), i), b.offset + static_cast<int>(c), v);
            }
        }
        f.push_back(std::move(m));
    }
    return f;
}

}  // namespace ajchains
