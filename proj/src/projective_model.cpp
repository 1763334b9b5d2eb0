#include "ajchains/projective_model.hpp"

#include <deque>
#include <mutex>

namespace ajchains {

SimplicialComplex octahedron() {
    std::vector<Simplex> tri;
    for (int a : {sphere::one, sphere::minus_one})
        for (int b : {sphere::plus_i, sphere::minus_i})
            for (int c : {sphere::zero, sphere::infinity}) tri.push_back({a, b, c});
    SimplicialComplex k = SimplicialComplex::from_simplices(6, tri);
    k.labels.resize(6);
    for (int v = 0; v < 6; ++v) k.labels[v] = {v};
    return k;
}

namespace {

ProjectiveModel build(int k, const ProjectiveModel* prev) {
    ProjectiveModel m;
    m.k = k;
    if (k == 0) {
        m.complex = SimplicialComplex::from_simplices(1, {{0}});
        m.complex.labels = {{}};
        m.fundamental.degree = 0;
        m.fundamental.add(0, 1);
    } else {
        SimplicialComplex oct = octahedron();
        // [1, i, 0] is positively oriented in the complex chart
        Chain eta = fundamental_cycle(oct, 1);
        if (eta.c.at(oct.index({sphere::one, sphere::plus_i, sphere::zero})) < 0) eta = eta * Rational(-1);
        ProductComplex pc = product(prev->complex, oct);
        m.fundamental = cross_product(pc, prev->complex, prev->fundamental, oct, eta);
        m.complex = std::move(pc.complex);
    }
    for (int v = 0; v < m.complex.num_vertices(); ++v) m.vertex_of_label[m.complex.labels[v]] = v;
    return m;
}

}  // namespace

const ProjectiveModel& projective_model(int k) {
    static std::deque<ProjectiveModel> models;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    while (static_cast<int>(models.size()) <= k) {
        int next = static_cast<int>(models.size());
        models.push_back(build(next, next ? &models.back() : nullptr));
    }
    return models[k];
}

Subcomplex ProjectiveModel::face(int axis, bool at_infinity) const {
    std::vector<int> verts;
    int want = at_infinity ? sphere::infinity : sphere::zero;
    for (int v = 0; v < complex.num_vertices(); ++v)
        if (complex.labels[v][axis] == want) verts.push_back(v);
    return Subcomplex::full_on(complex, verts);
}

Subcomplex ProjectiveModel::divisor() const {
    Subcomplex d(complex);
    for (int axis = 0; axis < k; ++axis) {
        std::vector<int> verts;
        for (int v = 0; v < complex.num_vertices(); ++v)
            if (complex.labels[v][axis] == sphere::one) verts.push_back(v);
        d = d.unite(Subcomplex::full_on(complex, verts));
    }
    return d;
}

Chain ProjectiveModel::face_cycle(int axis, bool at_infinity) const {
    const ProjectiveModel& lo = projective_model(k - 1);
    return insert_coordinate(lo, lo.fundamental, axis, at_infinity ? sphere::infinity : sphere::zero, *this);
}

Chain drop_coordinate(const ProjectiveModel& hi, const Chain& x, int axis, const ProjectiveModel& lo) {
    Chain out;
    out.degree = x.degree;
    for (const auto& [i, v] : x.c) {
        Simplex s;
        for (int u : hi.complex.simplex(x.degree, i)) {
            std::vector<int> l = hi.complex.labels[u];
            l.erase(l.begin() + axis);
            s.push_back(lo.vertex(l));
        }
        int j = lo.complex.index(s);
        if (j < 0) throw std::logic_error("drop_coordinate: chain not supported on a coordinate face");
        out.add(j, v);
    }
    return out;
}

Chain insert_coordinate(const ProjectiveModel& lo, const Chain& x, int axis, int value, const ProjectiveModel& hi) {
    Chain out;
    out.degree = x.degree;
    for (const auto& [i, v] : x.c) {
        Simplex s;
        for (int u : lo.complex.simplex(x.degree, i)) {
            std::vector<int> l = lo.complex.labels[u];
            l.insert(l.begin() + axis, value);
            s.push_back(hi.vertex(l));
        }
        out.add(hi.complex.index(s), v);
    }
    return out;
}

std::vector<int> vertex_action(const ProjectiveModel& m, const std::vector<int>& inverted,
                               const std::vector<int>& perm) {
    std::vector<int> out(m.complex.num_vertices());
    for (int v = 0; v < m.complex.num_vertices(); ++v) {
        const auto& l = m.complex.labels[v];
        std::vector<int> img(l.size());
        for (size_t i = 0; i < l.size(); ++i) img[perm[i]] = inverted[i] ? sphere::inverse[l[i]] : l[i];
        out[v] = m.vertex(img);
    }
    return out;
}

Chain push_chain(const SimplicialComplex& k, const Chain& x, const std::vector<int>& vmap) {
    Chain out;
    out.degree = x.degree;
    for (const auto& [i, v] : x.c) {
        std::vector<int> s;
        for (int u : k.simplex(x.degree, i)) s.push_back(vmap[u]);
        int sg = sort_sign(s);
        int j = k.index(s);
        if (sg == 0 || j < 0) throw std::logic_error("push_chain: vertex map is not simplicial");
        out.add(j, v * sg);
    }
    return out;
}

}  // namespace ajchains
