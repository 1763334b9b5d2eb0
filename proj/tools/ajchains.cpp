#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>

#include "ajchains/analytic_chains.hpp"
#include "ajchains/complex_io.hpp"
#include "ajchains/cubical_alt.hpp"
#include "ajchains/polylog_aj.hpp"
#include "suites.hpp"

using namespace ajchains;
using json = nlohmann::ordered_json;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

std::string csv_complex(Complex z) {
    std::ostringstream out;
    out.precision(17);
    out << z.real() << "," << z.imag();
    return out.str();
}

// "j" or "lo:hi"
std::pair<int, int> degree_range(const std::string& s) {
    if (s.empty()) return {-1000, 1000};
    try {
        auto colon = s.find(':');
        if (colon == std::string::npos) return {std::stoi(s), std::stoi(s)};
        return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
    } catch (const std::logic_error&) {
        throw UsageError("bad degree range " + s);
    }
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    for (std::string item; std::getline(ss, item, ',');)
        if (!item.empty()) out.push_back(item);
    return out;
}

// ---------------------------------------------------------------- cohomology

struct CohomologyArgs {
    std::string input, relative, degree, format = "json";
    bool alt = false;
};

ComplexData read_input(const std::string& input) {
    const std::string prefix = "builtin:";
    if (input.rfind(prefix, 0) == 0) return parse_complex(builtin_complex(input.substr(prefix.size())));
    return load_complex(input);
}

// number of ℙ¹ factors if the complex is a cube model
int cube_model_dimension(const ComplexData& c) {
    for (int n = 1; n <= 2; ++n) {
        const SimplicialComplex& m = projective_model(n).complex;
        if (m.num_vertices() == c.complex->num_vertices() && m.top_simplices() == c.complex->top_simplices() &&
            c.divisor == Subcomplex::closure(*c.complex, generators(projective_model(n).divisor())))
            return n;
    }
    throw UsageError("--alt needs the (P1)^n model with D = {some z_i = 1}, n <= 2");
}

int cmd_cohomology(const CohomologyArgs& args) {
    ComplexData data = read_input(args.input);
    auto [lo, hi] = degree_range(args.degree);

    std::vector<std::pair<std::string, std::vector<CohomologyGroup>>> groups;
    bool verdict = false;
    std::string comparison;
    if (args.alt) {
        int n = cube_model_dimension(data);
        FaceConfiguration cfg = cubical_configuration(n);
        ACDoubleComplex dc = build_ac_double_complex(cfg);
        CubicalComplex cc = build_cubical_ac_complex(n);
        groups.emplace_back("AC", cohomology_all(dc.total));
        groups.emplace_back("Alt", cohomology_all(cc.total));
        verdict = is_quasi_iso(sigma_map(dc, cfg, cc), dc.total, cc.total);
        comparison = "sigma";
    } else {
        std::vector<std::string> names;
        if (args.relative == "H")
            for (const auto& f : data.faces) names.push_back(f.name);
        else if (!args.relative.empty() && args.relative != "none")
            names = split(args.relative);
        FaceConfiguration cfg = data.configuration(names);
        ComparisonReport r = compare_with_complement(cfg);
        groups.emplace_back("AC", r.ac);
        groups.emplace_back("C", r.complement);
        verdict = r.ok();
        comparison = "inclusion";
    }

    if (args.format == "csv") {
        std::cout << "source,degree,rank,torsion\n";
        for (const auto& [source, h] : groups)
            for (const auto& g : h) {
                if (g.degree < lo || g.degree > hi) continue;
                std::string t;
                for (const auto& d : g.torsion) t += (t.empty() ? "" : " ") + d.get_str();
                std::cout << source << "," << g.degree << "," << g.rank << "," << t << "\n";
            }
        std::cout << comparison << ",,," << (verdict ? "quasi-iso" : "not quasi-iso") << "\n";
    } else {
        json out;
        out["input"] = args.input;
        out["groups"] = json::array();
        for (const auto& [source, h] : groups)
            for (const auto& g : h) {
                if (g.degree < lo || g.degree > hi) continue;
                json t = json::array();
                for (const auto& d : g.torsion) t.push_back(d.get_str());
                out["groups"].push_back({{"degree", g.degree}, {"rank", g.rank}, {"torsion", t}, {"source", source}});
            }
        out["comparison"] = comparison;
        out["quasi_iso"] = verdict;
        std::cout << out.dump(1) << "\n";
    }
    return verdict ? ok : failed;
}

// ---------------------------------------------------------------- cauchy-stokes

int cmd_cauchy_stokes(const std::string& id, double tol, int budget, const std::string& format) {
    const std::string prefix = "builtin:";
    if (id.rfind(prefix, 0) != 0) throw UsageError("cases are builtin:<name>");
    std::string name = id.substr(prefix.size());

    json out;
    bool pass = false;
    if (name == "diverging-wedge") {
        DivergenceReport d = divergence_probe(diverging_wedge(), LogForm::dlog(2, {0, 1}), budget);
        json trace = json::array();
        for (Complex z : d.trace) trace.push_back(complex_json(z));
        out = {{"check", "divergence"}, {"case", name}, {"diverged", d.diverged}, {"trace", trace},
               {"admissible", false}};
        // flagged as expected: the cell is not admissible
        pass = d.diverged;
    } else {
        auto cases = builtin_cauchy_stokes_cases();
        auto it = std::find_if(cases.begin(), cases.end(), [&](const CauchyStokesCase& c) { return c.name == name; });
        if (it == cases.end()) throw UsageError("unknown case " + name);
        CauchyStokesReport r = verify_cauchy_stokes(*it, tol);
        pass = r.pass;
        out = {{"check", "cauchy-stokes"}, {"case", name},          {"lhs", complex_json(r.lhs)},
               {"rhs", complex_json(r.rhs)}, {"abs_err", r.abs_err}, {"tol", r.tol},
               {"pass", r.pass},            {"evals", r.evals}};
    }
    if (format == "csv") {
        std::cout << "check,case,result\n"
                  << out["check"].get<std::string>() << "," << name << ","
                  << (out.contains("diverged") ? (out["diverged"].get<bool>() ? "diverged" : "converged")
                                               : (pass ? "PASS" : "FAIL"))
                  << "\n";
    } else {
        std::cout << out.dump(1) << "\n";
    }
    return pass ? ok : failed;
}

// ---------------------------------------------------------------- polylog

int cmd_polylog(int p, double a, const std::string& jspec, double tol, const std::string& format) {
    if (p != 2 && p != 3) throw UsageError("--p must be 2 or 3");
    if (!(a > 0 && a < 1)) throw UsageError("--a must lie in (0, 1)");
    std::vector<int> J;
    for (const auto& s : split(jspec)) {
        try {
            J.push_back(std::stoi(s));
        } catch (const std::logic_error&) {
            throw UsageError("bad face index " + s);
        }
    }
    AJResult r;
    try {
        r = aj_evaluate(p, J, a, tol);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    if (format == "csv") {
        std::cout << "kind,i,re,im\n";
        for (const auto& t : r.terms) std::cout << "term," << t.i << "," << csv_complex(t.value) << "\n";
        std::cout << "total,," << csv_complex(r.total) << "\n";
        std::cout << "oracle,," << csv_complex(r.oracle) << "\n";
        std::cout << "rel_err,," << r.rel_err << ",0\n";
    } else {
        json terms = json::array();
        for (const auto& t : r.terms) terms.push_back({{"i", t.i}, {"value", complex_json(t.value)}});
        json out = {{"p", p},           {"J", J},
                    {"a", json::array({a, 0.0})}, {"terms", terms},
                    {"total", complex_json(r.total)}, {"oracle", complex_json(r.oracle)},
                    {"rel_err", r.rel_err}, {"pass", r.pass}};
        std::cout << out.dump(1) << "\n";
    }
    return r.pass ? ok : failed;
}

// ---------------------------------------------------------------- verify-all

int cmd_verify_all(suites::RunConfig cfg, const std::string& format) {
    cfg.validate();
    auto results = suites::run_all(cfg);
    bool all = true;
    for (const auto& r : results) {
        bool checks = true;
        for (const auto& c : r.checks) checks = checks && c.pass;
        all = all && checks;
    }
    if (format == "csv") {
        std::cout << "criterion,check,result,detail\n";
        for (const auto& r : results)
            for (const auto& c : r.checks)
                std::cout << c.criterion << ",\"" << c.name << "\"," << (c.pass ? "PASS" : "FAIL") << ",\"" << c.detail
                          << "\"\n";
    } else if (format == "json") {
        json out;
        out["config"] = {{"tol", cfg.tol},
                         {"budget", cfg.budget},
                         {"polylog_convention", cfg.polylog_convention},
                         {"flip_eps", cfg.flip_eps}};
        out["suites"] = json::array();
        for (const auto& r : results) {
            json checks = json::array();
            bool pass = true;
            for (const auto& c : r.checks) {
                checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
                pass = pass && c.pass;
            }
            out["suites"].push_back(
                {{"criterion", r.criterion.id}, {"title", r.criterion.title}, {"pass", pass}, {"checks", checks}});
        }
        out["pass"] = all;
        std::cout << out.dump(1) << "\n";
    } else {
        for (const auto& r : results) {
            int passed = 0;
            for (const auto& c : r.checks) passed += c.pass;
            std::printf("%d  %-45s %3d/%-3zu %s\n", r.criterion.id, r.criterion.title.c_str(), passed,
                        r.checks.size(), passed == static_cast<int>(r.checks.size()) ? "PASS" : "FAIL");
            for (const auto& c : r.checks)
                if (!c.pass) std::printf("     FAIL %s (%s)\n", c.name.c_str(), c.detail.c_str());
        }
        std::printf("%s\n", all ? "all suites pass" : "some suites fail");
    }
    return all ? ok : failed;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chains, face maps and Abel-Jacobi pairings"};
    app.require_subcommand(1);

    double tol = 1e-6;
    int budget = 12;
    std::string format = "json";
    auto add_common = [&](CLI::App* sub, bool with_format = true) {
        sub->add_option("--tol", tol, "tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--budget", budget, "refinement rounds for divergence probing")->check(CLI::PositiveNumber);
        if (with_format) sub->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
    };

    CohomologyArgs coh;
    auto* c1 = app.add_subcommand("cohomology", "cohomology of AC and comparison complexes");
    c1->add_option("--input", coh.input, "complex JSON file or builtin:p1|p1xp1|box1|box2")->required();
    c1->add_option("--relative", coh.relative, "H for all faces, or a comma list of face names");
    c1->add_flag("--alt", coh.alt, "alternating cubical complex of the model");
    c1->add_option("--degree", coh.degree, "degree j or range lo:hi");
    c1->add_option("--format", coh.format)->check(CLI::IsMember({"json", "csv"}));

    std::string case_id;
    auto* c2 = app.add_subcommand("cauchy-stokes", "check a built-in Cauchy-Stokes case");
    c2->add_option("--case", case_id, "builtin:<name>")->required();
    add_common(c2);

    int p = 2;
    double a = 0.3;
    std::string jspec;
    auto* c3 = app.add_subcommand("polylog", "Abel-Jacobi value of the polylog cycle");
    c3->add_option("--p", p)->required();
    c3->add_option("--a", a)->required();
    c3->add_option("--J", jspec, "comma separated face positions");
    add_common(c3);

    suites::RunConfig run;
    std::string vformat = "table";
    auto* c4 = app.add_subcommand("verify-all", "run every acceptance suite");
    c4->add_option("--tol", run.tol)->check(CLI::PositiveNumber);
    c4->add_option("--budget", run.budget)->check(CLI::PositiveNumber);
    c4->add_option("--format", vformat)->check(CLI::IsMember({"table", "json", "csv"}));
    c4->add_flag("--flip-eps", run.flip_eps, "negate the polylog term signs (mutation check)");

    std::string model;
    auto* c5 = app.add_subcommand("export-model", "print a built-in complex as JSON");
    c5->add_option("name", model, "p1|p1xp1|box1|box2")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (*c1) return cmd_cohomology(coh);
        if (*c2) return cmd_cauchy_stokes(case_id, tol, budget, format);
        if (*c3) return cmd_polylog(p, a, jspec, tol, format);
        if (*c4) return cmd_verify_all(run, vformat);
        if (*c5) {
            std::cout << builtin_complex(model) << "\n";
            return ok;
        }
    } catch (const NotConverged& e) {
        std::cerr << "not converged: " << e.what() << "\n";
        return failed;
    } catch (const UsageError& e) {
        std::cerr << e.what() << "\n";
        return usage;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return usage;
    } catch (const std::ios_base::failure& e) {
        std::cerr << e.what() << "\n";
        return usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << e.what() << "\n";
        return usage;
    } catch (const NotGoodTriangulation& e) {
        std::cerr << e.what() << "\n";
        return usage;
    } catch (const UnknownTag& e) {
        std::cerr << e.what() << "\n";
        return usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failed;
    }
    return usage;
}
