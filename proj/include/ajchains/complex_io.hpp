#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ajchains/admissible_complex.hpp"

namespace ajchains {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a complex with its D and H tags, as read from or written to JSON
struct ComplexData {
    std::unique_ptr<SimplicialComplex> complex;
    Chain orientation;  // top simplices with their orient field
    Subcomplex divisor;
    std::vector<Face> faces;

    FaceConfiguration configuration() const;
    // keep only the named faces, in the given order
    FaceConfiguration configuration(const std::vector<std::string>& names) const;
};

ComplexData parse_complex(const std::string& text);
ComplexData load_complex(const std::string& path);
std::string dump_complex(const SimplicialComplex& k, const Chain& orientation, const Subcomplex& d,
                         const std::vector<Face>& faces, int indent = 1);
std::string dump_complex(const ComplexData& c, int indent = 1);

// maximal simplices of a subcomplex, by dimension then index
std::vector<Simplex> generators(const Subcomplex& s);

// "p1", "p1xp1", "box1", "box2"; throws ParseError for anything else
std::string builtin_complex(const std::string& name);

}  // namespace ajchains
