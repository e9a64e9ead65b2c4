/* specfile.hh -- parser for the textual system description format */

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "grammar.hh"
#include "systems.hh"

namespace pcs {

/// One conjunct of a query: a lower bound (cover) or exact count
/// (reach) on the tokens accumulated in `type`'s place `place`, either
/// across all vertices of that type (sigma empty) or pinned to the
/// vertex labeled `sigma`.
struct QueryAtom {
    std::string type;
    std::string sigma;  // empty unless pinned
    std::string place;
    Weight count = 0;
};

struct Query {
    std::string id;
    bool cover = true;  // false: reach (exact equality)
    std::vector<QueryAtom> atoms;
    std::string expect;  // optional expected verdict token
};

/// A parsed input file: process types, the topology grammar, queries.
struct SpecFile {
    TypeTable types;
    HrGrammar grammar;
    std::vector<Query> queries;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& where, int line, const std::string& what)
        : std::runtime_error(where + ":" + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

/// Parses the textual format:
///
///   # comment
///   process P { places a, b; init a; obs t: a -> b; int u: b -> a; }
///   source s1 : P
///   grammar { X -> restrict {s1} (edge (t,t) (s1,s2) + X)  axiom X }
///   query q1 cover { P.a >= 2 } expect SAFE
///   query q2 reach { P.a = 1, P*s1.b = 0 }
///
/// Terms: `edge (t1,t2) (s1,s2)`, `restrict {s,...} T`,
/// `rename (a<->b,...) T`, `T + T` (left-associative; the unary
/// operators bind tighter), parentheses. Throws ParseError.
SpecFile parse_spec(const std::string& text, const std::string& filename = "<string>");

/// parse_spec over a file's contents; throws std::runtime_error on I/O
/// failure.
SpecFile load_spec(const std::string& path);

}  // namespace pcs
