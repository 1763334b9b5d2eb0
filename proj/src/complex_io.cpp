#include "ajchains/complex_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ajchains/cubical_alt.hpp"

namespace ajchains {

using nlohmann::json;

namespace {

Simplex read_simplex(const json& j, int nverts) {
    if (!j.is_array() || j.empty()) throw ParseError("simplex must be a nonempty array of vertex ids");
    Simplex s;
    for (const auto& v : j) {
        if (!v.is_number_integer()) throw ParseError("vertex id must be an integer");
        int id = v.get<int>();
        if (id < 0 || id >= nverts) throw ParseError("unknown vertex id " + std::to_string(id));
        s.push_back(id);
    }
    return s;
}

Subcomplex read_cells(const SimplicialComplex& k, const json& list, const std::string& what) {
    if (!list.is_array()) throw ParseError(what + " must be a list of simplices");
    std::vector<Simplex> gens;
    for (const auto& j : list) {
        Simplex s = read_simplex(j, k.num_vertices());
        std::sort(s.begin(), s.end());
        if (!k.contains(s)) throw ParseError(what + " names a simplex outside the complex");
        gens.push_back(s);
    }
    return Subcomplex::closure(k, gens);
}

json write_cells(const Subcomplex& s) {
    json out = json::array();
    for (const auto& g : generators(s)) out.push_back(g);
    return out;
}

}  // namespace

std::vector<Simplex> generators(const Subcomplex& s) {
    std::vector<Simplex> out;
    const SimplicialComplex& k = s.complex();
    for (int d = 0; d <= s.dim(); ++d)
        for (int i = 0; i < k.count(d); ++i) {
            if (!s.contains(d, i)) continue;
            bool maximal = true;
            for (const auto& [up, pos] : k.cofaces(d, i))
                if (s.contains(d + 1, up)) {
                    maximal = false;
                    break;
                }
            if (maximal) out.push_back(k.simplex(d, i));
        }
    return out;
}

ComplexData parse_complex(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("bad JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("complex must be a JSON object");
    for (const auto& [key, v] : j.items())
        if (key != "vertices" && key != "top_simplices" && key != "tags") throw ParseError("unknown key " + key);
    if (!j.contains("vertices") || !j.contains("top_simplices")) throw ParseError("need vertices and top_simplices");

    // ids are dense: 0 .. n-1 in any order
    std::set<int> ids;
    for (const auto& v : j["vertices"]) {
        if (!v.is_object() || !v.contains("id") || !v["id"].is_number_integer())
            throw ParseError("vertex entries are {\"id\": int}");
        if (!ids.insert(v["id"].get<int>()).second) throw ParseError("duplicate vertex id");
    }
    int n = static_cast<int>(ids.size());
    if (n == 0 || *ids.begin() != 0 || *ids.rbegin() != n - 1) throw ParseError("vertex ids must be 0 .. n-1");

    std::vector<Simplex> tops;
    std::vector<int> orient;
    for (const auto& t : j["top_simplices"]) {
        if (!t.is_object() || !t.contains("verts")) throw ParseError("top simplex entries are {\"verts\": [...]}");
        Simplex s = read_simplex(t["verts"], n);
        int o = t.value("orient", 1);
        if (o != 1 && o != -1) throw ParseError("orient must be 1 or -1");
        // orient is relative to the listed vertex order
        int sign = sort_sign(s);
        if (sign == 0) throw ParseError("repeated vertex in a simplex");
        tops.push_back(s);
        orient.push_back(o * sign);
    }
    if (tops.empty()) throw ParseError("no top simplices");

    ComplexData c;
    try {
        c.complex = std::make_unique<SimplicialComplex>(SimplicialComplex::from_simplices(n, tops));
    } catch (const InvalidSimplex& e) {
        throw ParseError(e.what());
    }
    const SimplicialComplex& k = *c.complex;
    for (size_t t = 0; t < tops.size(); ++t) {
        int d = static_cast<int>(tops[t].size()) - 1;
        if (d != k.dim()) continue;
        c.orientation.degree = d;
        c.orientation.add(k.index(tops[t]), orient[t]);
    }
    c.divisor = Subcomplex(k);

    if (j.contains("tags")) {
        const json& tags = j["tags"];
        if (!tags.is_object()) throw ParseError("tags must be an object");
        for (const auto& [key, v] : tags.items())
            if (key != "D" && key != "H") throw UnknownTag("unknown tag " + key);
        if (tags.contains("D")) c.divisor = read_cells(k, tags["D"], "D");
        if (tags.contains("H")) {
            std::set<std::string> names;
            for (const auto& h : tags["H"]) {
                if (!h.is_object() || !h.contains("simplices")) throw ParseError("H entries need simplices");
                Face f;
                f.name = h.value("name", "H" + std::to_string(c.faces.size()));
                f.codim = h.value("codim", 1);
                if (f.codim < 1) throw ParseError("codim must be positive");
                if (!names.insert(f.name).second) throw ParseError("duplicate face name " + f.name);
                f.cells = read_cells(k, h["simplices"], "face " + f.name);
                c.faces.push_back(std::move(f));
            }
        }
    }
    return c;
}

ComplexData load_complex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::ios_base::failure("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_complex(ss.str());
}

std::string dump_complex(const SimplicialComplex& k, const Chain& orientation, const Subcomplex& d,
                         const std::vector<Face>& faces, int indent) {
    json j;
    j["vertices"] = json::array();
    for (int v = 0; v < k.num_vertices(); ++v) j["vertices"].push_back({{"id", v}});
    j["top_simplices"] = json::array();
    for (const auto& s : k.top_simplices()) {
        int o = 1;
        if (static_cast<int>(s.size()) - 1 == orientation.degree) {
            auto it = orientation.c.find(k.index(s));
            if (it != orientation.c.end() && it->second < 0) o = -1;
        }
        j["top_simplices"].push_back({{"verts", s}, {"orient", o}});
    }
    j["tags"]["D"] = write_cells(d);
    j["tags"]["H"] = json::array();
    for (const auto& f : faces)
        j["tags"]["H"].push_back({{"name", f.name}, {"codim", f.codim}, {"simplices", write_cells(f.cells)}});
    return j.dump(indent);
}

std::string dump_complex(const ComplexData& c, int indent) {
    return dump_complex(*c.complex, c.orientation, c.divisor, c.faces, indent);
}

FaceConfiguration ComplexData::configuration() const { return FaceConfiguration(*complex, divisor, faces); }

FaceConfiguration ComplexData::configuration(const std::vector<std::string>& names) const {
    std::vector<Face> picked;
    for (const auto& name : names) {
        auto it = std::find_if(faces.begin(), faces.end(), [&](const Face& f) { return f.name == name; });
        if (it == faces.end()) throw ParseError("no face named " + name);
        picked.push_back(*it);
    }
    return FaceConfiguration(*complex, divisor, std::move(picked));
}

std::string builtin_complex(const std::string& name) {
    static const std::map<std::string, std::pair<int, bool>> models = {
        {"p1", {1, false}}, {"p1xp1", {2, false}}, {"box1", {1, true}}, {"box2", {2, true}}};
    auto it = models.find(name);
    if (it == models.end()) throw ParseError("unknown built-in complex " + name);
    auto [n, cubical] = it->second;
    FaceConfiguration cfg = cubical ? cubical_configuration(n) : projective_configuration(n);
    const ProjectiveModel& m = projective_model(n);
    std::vector<Face> faces;
    for (int f = 0; f < cfg.num_faces(); ++f) faces.push_back(cfg.face(f));
    return dump_complex(m.complex, m.fundamental, m.divisor(), faces);
}

}  // namespace ajchains
