#include "ajchains/homology_engine.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace ajchains {

SparseMatrix SparseMatrix::identity(int n) {
    SparseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.col[i].push_back({i, Rational(1)});
    return m;
}

void SparseMatrix::add(int r, int c, const Rational& v) {
    if (v == 0) return;
    auto& cv = col[c];
    auto it = std::lower_bound(cv.begin(), cv.end(), r,
                               [](const auto& e, int key) { return e.first < key; });
    if (it != cv.end() && it->first == r) {
        it->second += v;
        if (it->second == 0) cv.erase(it);
    } else {
        cv.insert(it, {r, v});
    }
}

Rational SparseMatrix::at(int r, int c) const {
    for (const auto& [i, v] : col[c])
        if (i == r) return v;
    return 0;
}

SparseMatrix SparseMatrix::transpose() const {
    SparseMatrix t(cols, rows);
    for (int c = 0; c < cols; ++c)
        for (const auto& [r, v] : col[c]) t.col[r].push_back({c, v});
    return t;
}

bool SparseMatrix::is_zero() const {
    for (const auto& c : col)
        if (!c.empty()) return false;
    return true;
}

size_t SparseMatrix::nnz() const {
    size_t n = 0;
    for (const auto& c : col) n += c.size();
    return n;
}

SparseVec axpy(const SparseVec& x, const Rational& s, const SparseVec& y) {
    SparseVec out;
    out.reserve(x.size() + y.size());
    size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
        if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
            out.push_back(x[i++]);
        } else if (i == x.size() || y[j].first < x[i].first) {
            Rational v = s * y[j].second;
            if (v != 0) out.push_back({y[j].first, v});
            ++j;
        } else {
            Rational v = x[i].second + s * y[j].second;
            if (v != 0) out.push_back({x[i].first, v});
            ++i;
            ++j;
        }
    }
    return out;
}

SparseVec scaled(const SparseVec& x, const Rational& s) {
    if (s == 0) return {};
    SparseVec out = x;
    for (auto& e : out) e.second *= s;
    return out;
}

SparseVec mat_vec(const SparseMatrix& a, const SparseVec& x) {
    std::map<int, Rational> acc;
    for (const auto& [c, v] : x)
        for (const auto& [r, w] : a.col[c]) acc[r] += v * w;
    SparseVec out;
    for (auto& [r, v] : acc)
        if (v != 0) out.push_back({r, v});
    return out;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols != b.rows) throw std::invalid_argument("multiply: shape mismatch");
    SparseMatrix m(a.rows, b.cols);
    for (int c = 0; c < b.cols; ++c) m.col[c] = mat_vec(a, b.col[c]);
    return m;
}

SparseMatrix hconcat(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.rows != b.rows) throw std::invalid_argument("hconcat: row mismatch");
    SparseMatrix m(a.rows, a.cols + b.cols);
    std::copy(a.col.begin(), a.col.end(), m.col.begin());
    std::copy(b.col.begin(), b.col.end(), m.col.begin() + a.cols);
    return m;
}

namespace {

void sub_scaled(std::map<int, Rational>& w, const Rational& c, const SparseVec& p) {
    for (const auto& [i, v] : p) {
        auto [it, fresh] = w.try_emplace(i, 0);
        it->second -= c * v;
        if (it->second == 0) w.erase(it);
    }
}

SparseVec to_vec(const std::map<int, Rational>& w) {
    SparseVec out(w.begin(), w.end());
    return out;
}

}  // namespace

SparseVec Echelon::reduce(const SparseVec& v, SparseVec* tag) const {
    std::map<int, Rational> w(v.begin(), v.end());
    std::map<int, Rational> t;
    if (tag) t.insert(tag->begin(), tag->end());
    auto it = w.begin();
    while (it != w.end()) {
        auto p = pivot_.find(it->first);
        if (p == pivot_.end()) {
            ++it;
            continue;
        }
        int key = it->first;
        Rational c = it->second;
        sub_scaled(w, c, rows_[p->second]);
        if (tag) sub_scaled(t, c, tags_[p->second]);
        it = w.upper_bound(key);
    }
    if (tag) *tag = to_vec(t);
    return to_vec(w);
}

bool Echelon::insert(const SparseVec& v, const SparseVec& tag) {
    SparseVec t = tag;
    SparseVec r = reduce(v, &t);
    if (r.empty()) return false;
    Rational inv = 1 / r.front().second;
    for (auto& e : r) e.second *= inv;
    for (auto& e : t) e.second *= inv;
    pivot_[r.front().first] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(r));
    tags_.push_back(std::move(t));
    return true;
}

int rank_of_columns(const std::vector<SparseVec>& cols) {
    Echelon e;
    for (const auto& c : cols) e.insert(c);
    return e.rank();
}

int rank(const SparseMatrix& m) {
    // eliminate along the shorter side
    if (m.rows < m.cols) return rank_of_columns(m.transpose().col);
    return rank_of_columns(m.col);
}

namespace {

// fully reduced rows keyed by pivot column
std::map<int, SparseVec> rref_rows(const Echelon& e) {
    std::map<int, SparseVec> out;
    for (auto it = e.pivots().rbegin(); it != e.pivots().rend(); ++it) {
        std::map<int, Rational> w(e.row(it->second).begin(), e.row(it->second).end());
        for (auto jt = std::next(w.begin()); jt != w.end();) {
            auto done = out.find(jt->first);
            if (done == out.end()) {
                ++jt;
                continue;
            }
            int key = jt->first;
            Rational c = jt->second;
            sub_scaled(w, c, done->second);
            jt = w.upper_bound(key);
        }
        out[it->first] = to_vec(w);
    }
    return out;
}

}  // namespace

SparseMatrix kernel_basis(const SparseMatrix& m) {
    Echelon e;
    SparseMatrix t = m.transpose();
    for (const auto& row : t.col) e.insert(row);
    auto rows = rref_rows(e);
    std::vector<std::vector<std::pair<int, Rational>>> free_hits(m.cols);
    for (const auto& [p, row] : rows)
        for (const auto& [j, v] : row)
            if (j != p) free_hits[j].push_back({p, -v});
    SparseMatrix k(m.cols, 0);
    for (int j = 0; j < m.cols; ++j) {
        if (rows.count(j)) continue;
        SparseVec x = free_hits[j];
        x.push_back({j, Rational(1)});
        std::sort(x.begin(), x.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        k.col.push_back(std::move(x));
        ++k.cols;
    }
    return k;
}

SparseVec solve(const SparseMatrix& a, const SparseVec& b, const std::vector<int>* priority) {
    std::vector<int> pos(a.cols), unknown(a.cols);
    std::iota(pos.begin(), pos.end(), 0);
    if (priority) {
        for (int i = 0; i < a.cols; ++i) pos[(*priority)[i]] = i;
    }
    for (int j = 0; j < a.cols; ++j) unknown[pos[j]] = j;

    std::vector<SparseVec> rows(a.rows);
    for (int c = 0; c < a.cols; ++c)
        for (const auto& [r, v] : a.col[c]) rows[r].push_back({pos[c], v});
    std::vector<Rational> rhs(a.rows);
    for (const auto& [r, v] : b) rhs[r] = v;

    Echelon e(1);
    for (int r = 0; r < a.rows; ++r) {
        auto& row = rows[r];
        std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
        SparseVec tag;
        if (rhs[r] != 0) tag.push_back({0, rhs[r]});
        SparseVec t = tag;
        SparseVec red = e.reduce(row, &t);
        if (red.empty()) {
            if (!t.empty()) throw NoSolution();
            continue;
        }
        e.insert(row, tag);
    }
    const std::map<int, int>& idx = e.pivots();
    SparseVec x;
    // back substitution in decreasing pivot order with free unknowns at zero
    std::map<int, Rational> val;
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) {
        const SparseVec& row = e.row(it->second);
        const SparseVec& t = e.row_tag(it->second);
        Rational s = t.empty() ? Rational(0) : t.front().second;
        for (size_t k = 1; k < row.size(); ++k) {
            auto f = val.find(row[k].first);
            if (f != val.end()) s -= row[k].second * f->second;
        }
        if (s != 0) val[it->first] = s;
    }
    for (const auto& [p, v] : val) x.push_back({unknown[p], v});
    std::sort(x.begin(), x.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
    return x;
}

// ---------------------------------------------------------------- integers

IntMatrix IntMatrix::identity(int n) {
    IntMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    IntMatrix m(rows, o.cols);
    for (int i = 0; i < rows; ++i)
        for (int k = 0; k < cols; ++k) {
            if ((*this)(i, k) == 0) continue;
            for (int j = 0; j < o.cols; ++j) m(i, j) += (*this)(i, k) * o(k, j);
        }
    return m;
}

namespace {

struct SmithWork {
    IntMatrix& a;
    IntMatrix* u;
    IntMatrix* v;

    void swap_rows(int i, int j) {
        if (i == j) return;
        for (int c = 0; c < a.cols; ++c) std::swap(a(i, c), a(j, c));
        if (u)
            for (int c = 0; c < u->cols; ++c) std::swap((*u)(i, c), (*u)(j, c));
    }
    void swap_cols(int i, int j) {
        if (i == j) return;
        for (int r = 0; r < a.rows; ++r) std::swap(a(r, i), a(r, j));
        if (v)
            for (int r = 0; r < v->rows; ++r) std::swap((*v)(r, i), (*v)(r, j));
    }
    // row_i -= q row_j
    void row_sub(int i, int j, const Integer& q) {
        for (int c = 0; c < a.cols; ++c)
            if (a(j, c) != 0) a(i, c) -= q * a(j, c);
        if (u)
            for (int c = 0; c < u->cols; ++c)
                if ((*u)(j, c) != 0) (*u)(i, c) -= q * (*u)(j, c);
    }
    void col_sub(int i, int j, const Integer& q) {
        for (int r = 0; r < a.rows; ++r)
            if (a(r, j) != 0) a(r, i) -= q * a(r, j);
        if (v)
            for (int r = 0; r < v->rows; ++r)
                if ((*v)(r, j) != 0) (*v)(r, i) -= q * (*v)(r, j);
    }
    void negate_row(int i) {
        for (int c = 0; c < a.cols; ++c) a(i, c) = -a(i, c);
        if (u)
            for (int c = 0; c < u->cols; ++c) (*u)(i, c) = -(*u)(i, c);
    }
};

std::vector<Integer> smith_in_place(IntMatrix& a, IntMatrix* u, IntMatrix* v) {
    SmithWork w{a, u, v};
    std::vector<Integer> divs;
    int n = std::min(a.rows, a.cols);
    for (int t = 0; t < n; ++t) {
        // smallest nonzero in the trailing block
        int bi = -1, bj = -1;
        for (int i = t; i < a.rows; ++i)
            for (int j = t; j < a.cols; ++j)
                if (a(i, j) != 0 && (bi < 0 || abs(a(i, j)) < abs(a(bi, bj)))) bi = i, bj = j;
        if (bi < 0) break;
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        for (;;) {
            bool clean = true;
            for (int i = t + 1; i < a.rows; ++i) {
                if (a(i, t) == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a(i, t).get_mpz_t(), a(t, t).get_mpz_t());
                w.row_sub(i, t, q);
                if (a(i, t) != 0) clean = false;
            }
            for (int j = t + 1; j < a.cols; ++j) {
                if (a(t, j) == 0) continue;
                Integer q;
                mpz_fdiv_q(q.get_mpz_t(), a(t, j).get_mpz_t(), a(t, t).get_mpz_t());
                w.col_sub(j, t, q);
                if (a(t, j) != 0) clean = false;
            }
            if (!clean) {
                int si = t, sj = t;
                for (int i = t + 1; i < a.rows; ++i)
                    if (a(i, t) != 0 && abs(a(i, t)) < abs(a(si, sj))) si = i, sj = t;
                for (int j = t + 1; j < a.cols; ++j)
                    if (a(t, j) != 0 && abs(a(t, j)) < abs(a(si, sj))) si = t, sj = j;
                w.swap_rows(t, si);
                w.swap_cols(t, sj);
                continue;
            }
            int bad = -1;
            for (int i = t + 1; i < a.rows && bad < 0; ++i)
                for (int j = t + 1; j < a.cols; ++j)
                    if (a(i, j) % a(t, t) != 0) {
                        bad = i;
                        break;
                    }
            if (bad < 0) break;
            w.row_sub(t, bad, -1);
        }
        if (a(t, t) < 0) w.negate_row(t);
        divs.push_back(a(t, t));
    }
    return divs;
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
    SmithForm s;
    s.d = m;
    s.u = IntMatrix::identity(m.rows);
    s.v = IntMatrix::identity(m.cols);
    s.divisors = smith_in_place(s.d, &s.u, &s.v);
    return s;
}

std::vector<Integer> elementary_divisors(const SparseMatrix& m) {
    std::vector<std::map<int, Integer>> rows(m.rows);
    std::vector<std::set<int>> colrows(m.cols);
    for (int c = 0; c < m.cols; ++c)
        for (const auto& [r, v] : m.col[c]) {
            if (v.get_den() != 1) throw std::invalid_argument("elementary_divisors: non-integral entry");
            rows[r][c] = v.get_num();
            colrows[c].insert(r);
        }
    std::vector<char> row_alive(m.rows, 1), col_alive(m.cols, 1);
    std::vector<Integer> divs;
    for (;;) {
        int pr = -1, pc = -1;
        size_t best = 0;
        for (int c = 0; c < m.cols; ++c) {
            if (!col_alive[c]) continue;
            for (int r : colrows[c]) {
                const Integer& x = rows[r].at(c);
                if (x != 1 && x != -1) continue;
                size_t cost = rows[r].size() * colrows[c].size();
                if (pr < 0 || cost < best) pr = r, pc = c, best = cost;
            }
        }
        if (pr < 0) break;
        Integer piv = rows[pr].at(pc);
        std::vector<int> others(colrows[pc].begin(), colrows[pc].end());
        for (int r : others) {
            if (r == pr) continue;
            Integer q = rows[r].at(pc) * piv;  // piv is its own inverse
            for (const auto& [c, x] : rows[pr]) {
                Integer& y = rows[r][c];
                y -= q * x;
                if (y == 0) {
                    rows[r].erase(c);
                    colrows[c].erase(r);
                } else {
                    colrows[c].insert(r);
                }
            }
        }
        for (const auto& [c, x] : rows[pr]) colrows[c].erase(pr);
        rows[pr].clear();
        row_alive[pr] = 0;
        col_alive[pc] = 0;
        divs.push_back(1);
    }
    std::vector<int> ri, ci(m.cols, -1);
    int nc = 0;
    for (int c = 0; c < m.cols; ++c)
        if (col_alive[c] && !colrows[c].empty()) ci[c] = nc++;
    for (int r = 0; r < m.rows; ++r)
        if (row_alive[r] && !rows[r].empty()) ri.push_back(r);
    IntMatrix rest(static_cast<int>(ri.size()), nc);
    for (size_t i = 0; i < ri.size(); ++i)
        for (const auto& [c, x] : rows[ri[i]]) rest(static_cast<int>(i), ci[c]) = x;
    auto tail = smith_in_place(rest, nullptr, nullptr);
    divs.insert(divs.end(), tail.begin(), tail.end());
    return divs;
}

// ---------------------------------------------------------------- complexes

CochainComplex CochainComplex::plain(int lo, std::vector<SparseMatrix> d, std::vector<int> dims) {
    CochainComplex c;
    c.lo = lo;
    c.ambient = std::move(dims);
    c.d = std::move(d);
    for (int n : c.ambient) c.span.push_back(SparseMatrix::identity(n));
    c.integral = true;
    for (const auto& m : c.d)
        for (const auto& col : m.col)
            for (const auto& e : col)
                if (e.second.get_den() != 1) c.integral = false;
    return c;
}

namespace {

const SparseMatrix* diff(const CochainComplex& c, int j) {
    int k = j - c.lo;
    if (k < 0 || k >= static_cast<int>(c.d.size())) return nullptr;
    if (j + 1 > c.hi()) return nullptr;
    return &c.d[k];
}

const SparseMatrix& span_of(const CochainComplex& c, int j) { return c.span[j - c.lo]; }

std::vector<SparseVec> image_cols(const SparseMatrix* d, const SparseMatrix& span) {
    std::vector<SparseVec> out;
    if (!d) return out;
    for (const auto& s : span.col) {
        SparseVec y = mat_vec(*d, s);
        if (!y.empty()) out.push_back(std::move(y));
    }
    return out;
}

}  // namespace

void check_complex(const CochainComplex& c) {
    for (int j = c.lo; j < c.hi() - 1 + 1; ++j) {
        const SparseMatrix* d0 = diff(c, j);
        const SparseMatrix* d1 = diff(c, j + 1);
        if (!d0 || !d1) continue;
        for (const auto& s : span_of(c, j).col) {
            if (!mat_vec(*d1, mat_vec(*d0, s)).empty())
                throw NotAComplex("d^2 != 0 at degree " + std::to_string(j));
        }
    }
    // each differential must land in the next span
    for (int j = c.lo; j < c.hi(); ++j) {
        const SparseMatrix* d0 = diff(c, j);
        if (!d0) continue;
        Echelon e;
        for (const auto& s : span_of(c, j + 1).col) e.insert(s);
        for (const auto& y : image_cols(d0, span_of(c, j)))
            if (!e.reduce(y).empty())
                throw NotAComplex("differential leaves the subcomplex at degree " + std::to_string(j));
    }
}

int group_dimension(const CochainComplex& c, int j) {
    if (!c.has(j)) return 0;
    return rank_of_columns(span_of(c, j).col);
}

CohomologyGroup cohomology(const CochainComplex& c, int j) {
    CohomologyGroup g;
    g.degree = j;
    if (!c.has(j)) return g;
    int dim = group_dimension(c, j);
    int out = rank_of_columns(image_cols(diff(c, j), span_of(c, j)));
    int in = c.has(j - 1) ? rank_of_columns(image_cols(diff(c, j - 1), span_of(c, j - 1))) : 0;
    g.rank = dim - out - in;
    if (c.integral) {
        g.torsion_certified = true;
        if (c.has(j - 1) && diff(c, j - 1))
            for (const auto& x : elementary_divisors(*diff(c, j - 1)))
                if (x > 1) g.torsion.push_back(x);
    }
    return g;
}

std::vector<CohomologyGroup> cohomology_all(const CochainComplex& c) {
    std::vector<CohomologyGroup> out;
    for (int j = c.lo; j <= c.hi(); ++j) out.push_back(cohomology(c, j));
    return out;
}

CohomologyBasis cohomology_basis(const CochainComplex& c, int j) {
    CohomologyBasis b;
    if (!c.has(j)) return b;
    if (c.has(j - 1))
        for (const auto& y : image_cols(diff(c, j - 1), span_of(c, j - 1))) b.boundaries_and_reps.insert(y);
    const SparseMatrix& s = span_of(c, j);
    SparseMatrix z;
    if (const SparseMatrix* d = diff(c, j)) {
        z = kernel_basis(multiply(*d, s));
    } else {
        z = SparseMatrix::identity(s.cols);
    }
    for (const auto& coeffs : z.col) {
        SparseVec amb = mat_vec(s, coeffs);
        int n = static_cast<int>(b.reps.size());
        SparseVec tag;
        tag.emplace_back(n, Rational(1));
        if (b.boundaries_and_reps.insert(amb, tag)) b.reps.push_back(amb);
    }
    return b;
}

void check_chain_map(const ChainMap& f, const CochainComplex& src, const CochainComplex& dst) {
    if (src.lo != dst.lo || src.hi() != dst.hi() || static_cast<int>(f.size()) != static_cast<int>(src.ambient.size()))
        throw NotChainMap("degree ranges differ");
    for (int j = src.lo; j <= src.hi(); ++j) {
        const SparseMatrix& fj = f[j - src.lo];
        Echelon tgt;
        for (const auto& s : span_of(dst, j).col) tgt.insert(s);
        for (const auto& s : span_of(src, j).col) {
            SparseVec fs = mat_vec(fj, s);
            if (!tgt.reduce(fs).empty()) throw NotChainMap("image leaves target at degree " + std::to_string(j));
            const SparseMatrix* ds = diff(src, j);
            const SparseMatrix* dd = diff(dst, j);
            SparseVec lhs = dd ? mat_vec(*dd, fs) : SparseVec{};
            SparseVec rhs = ds ? mat_vec(f[j + 1 - src.lo], mat_vec(*ds, s)) : SparseVec{};
            if (lhs != rhs) throw NotChainMap("f d != d f at degree " + std::to_string(j));
        }
    }
}

std::vector<std::vector<Rational>> induced_map_on_cohomology(const ChainMap& f, const CochainComplex& src,
                                                              const CochainComplex& dst, int j) {
    check_chain_map(f, src, dst);
    CohomologyBasis a = cohomology_basis(src, j);
    CohomologyBasis b = cohomology_basis(dst, j);
    std::vector<std::vector<Rational>> m(b.reps.size(), std::vector<Rational>(a.reps.size()));
    for (size_t c = 0; c < a.reps.size(); ++c) {
        SparseVec y = mat_vec(f[j - src.lo], a.reps[c]);
        SparseVec t;
        SparseVec red = b.boundaries_and_reps.reduce(y, &t);
        if (!red.empty()) throw NotChainMap("image of a cocycle is not a cocycle");
        for (const auto& [r, v] : t) m[r][c] = -v;
    }
    return m;
}

bool is_quasi_iso(const ChainMap& f, const CochainComplex& src, const CochainComplex& dst) {
    check_complex(src);
    check_complex(dst);
    for (int j = src.lo; j <= src.hi(); ++j) {
        auto m = induced_map_on_cohomology(f, src, dst, j);
        size_t rows = m.size();
        size_t cols = rows ? m[0].size() : static_cast<size_t>(cohomology(src, j).rank);
        if (rows != cols) return false;
        SparseMatrix s(static_cast<int>(rows), static_cast<int>(cols));
        for (size_t r = 0; r < rows; ++r)
            for (size_t c = 0; c < cols; ++c) s.add(static_cast<int>(r), static_cast<int>(c), m[r][c]);
        if (rank(s) != static_cast<int>(rows)) return false;
    }
    return true;
}

std::string format_rational(const Rational& q) { return q.get_str(); }

}  // namespace ajchains
