#include <doctest.h>

#include "ajchains/complex_io.hpp"
#include "ajchains/projective_model.hpp"

using namespace ajchains;

TEST_CASE("built-in models survive a round trip") {
    for (std::string name : {"p1", "p1xp1", "box1", "box2"}) {
        std::string text = builtin_complex(name);
        ComplexData c = parse_complex(text);
        CHECK(dump_complex(c) == text);
        int n = name == "p1" || name == "box1" ? 1 : 2;
        const ProjectiveModel& m = projective_model(n);
        CHECK(c.complex->top_simplices() == m.complex.top_simplices());
        CHECK(c.orientation == m.fundamental);
        CHECK(c.faces.size() == static_cast<size_t>(2 * n));
        CHECK(c.faces[0].name == "z1=0");
    }
    // the two orderings of the faces of the square differ
    CHECK(parse_complex(builtin_complex("box2")).faces[2].name == "z2=inf");
    CHECK(parse_complex(builtin_complex("p1xp1")).faces[2].name == "z2=0");
}

TEST_CASE("loaded sphere gives the same cohomology as the built model") {
    ComplexData c = parse_complex(builtin_complex("p1"));
    auto rel = compare_with_complement(c.configuration({"z1=0", "z1=inf"}));
    CHECK(rel.ok());
    CHECK(rel.ac[1].rank == 1);
    auto none = compare_with_complement(c.configuration());
    auto plain = compare_with_complement(c.configuration(std::vector<std::string>{}));
    CHECK(none.ac[1].rank == 1);
    CHECK(plain.ac[0].rank == 1);
    CHECK(plain.ac[1].rank == 0);
    CHECK_THROWS_AS(c.configuration({"z9=0"}), ParseError);
}

TEST_CASE("orient is relative to the listed vertex order") {
    std::string text = R"({"vertices":[{"id":0},{"id":1},{"id":2}],
        "top_simplices":[{"verts":[1,0,2],"orient":1}]})";
    ComplexData c = parse_complex(text);
    REQUIRE(c.orientation.c.size() == 1);
    CHECK(c.orientation.c.begin()->second == -1);
    CHECK(c.faces.empty());
    CHECK(c.divisor.empty());
}

TEST_CASE("malformed input") {
    CHECK_THROWS_AS(parse_complex("{"), ParseError);
    CHECK_THROWS_AS(parse_complex("[]"), ParseError);
    CHECK_THROWS_AS(parse_complex(R"({"vertices":[{"id":0},{"id":2}],"top_simplices":[{"verts":[0,2]}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_complex(R"({"vertices":[{"id":0},{"id":1}],"top_simplices":[{"verts":[0,0]}]})"),
                    ParseError);
    CHECK_THROWS_AS(parse_complex(R"({"vertices":[{"id":0},{"id":1}],"top_simplices":[{"verts":[0,1],"orient":2}]})"),
                    ParseError);
    CHECK_THROWS_AS(
        parse_complex(R"({"vertices":[{"id":0},{"id":1}],"top_simplices":[{"verts":[0,1]}],"tags":{"Q":[]}})"),
        UnknownTag);
    CHECK_THROWS_AS(
        parse_complex(R"({"vertices":[{"id":0},{"id":1},{"id":2}],"top_simplices":[{"verts":[0,1]},{"verts":[1,2]}],
                          "tags":{"D":[[0,2]]}})"),
        ParseError);
    CHECK_THROWS(load_complex("/nonexistent/complex.json"));
}
