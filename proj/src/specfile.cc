/* specfile.cc -- parser for the textual system description format */

#include "specfile.hh"

#include <cctype>
#include <fstream>
#include <sstream>

namespace pcs {

namespace {

struct Token {
    enum Kind { Ident, Number, Punct, End };
    Kind kind;
    std::string text;
    int line;
};

std::vector<Token> tokenize(const std::string& text, const std::string& where) {
    std::vector<Token> out;
    int line = 1;
    std::size_t i = 0;
    auto peek2 = [&](const char* s) {
        return text.compare(i, std::char_traits<char>::length(s), s) == 0;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') {
            ++line, ++i;
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
        } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            out.push_back({Token::Ident, text.substr(i, j - i), line});
            i = j;
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
            out.push_back({Token::Number, text.substr(i, j - i), line});
            i = j;
        } else if (peek2("<->")) {
            out.push_back({Token::Punct, "<->", line});
            i += 3;
        } else if (peek2("->")) {
            out.push_back({Token::Punct, "->", line});
            i += 2;
        } else if (peek2(">=")) {
            out.push_back({Token::Punct, ">=", line});
            i += 2;
        } else if (std::string("{}(),;:+.*=").find(c) != std::string::npos) {
            out.push_back({Token::Punct, std::string(1, c), line});
            ++i;
        } else {
            throw ParseError(where, line, std::string("stray character '") + c + "'");
        }
    }
    out.push_back({Token::End, "", line});
    return out;
}

class Parser {
  public:
    Parser(std::vector<Token> toks, std::string where)
        : toks_(std::move(toks)), where_(std::move(where)) {}

    SpecFile parse() {
        SpecFile sf;
        bool have_grammar = false;
        while (!at_end()) {
            if (accept_ident("process")) {
                parse_process(sf);
            } else if (accept_ident("source")) {
                parse_source(sf);
            } else if (accept_ident("grammar")) {
                if (have_grammar) fail("more than one grammar block");
                have_grammar = true;
                sf.types.validate();
                parse_grammar(sf);
            } else if (accept_ident("query")) {
                parse_query(sf);
            } else {
                fail("expected 'process', 'source', 'grammar' or 'query', got '" + cur().text +
                     "'");
            }
        }
        if (!have_grammar) fail("missing grammar block");
        try {
            sf.types.validate();
            sf.grammar.validate();
        } catch (const std::invalid_argument& e) {
            throw ParseError(where_, cur().line, e.what());
        }
        validate_queries(sf);
        return sf;
    }

  private:
    std::vector<Token> toks_;
    std::string where_;
    std::size_t pos_ = 0;

    const Token& cur() const { return toks_[pos_]; }
    bool at_end() const { return cur().kind == Token::End; }
    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(where_, cur().line, msg);
    }

    bool accept_ident(const std::string& kw) {
        if (cur().kind == Token::Ident && cur().text == kw) {
            ++pos_;
            return true;
        }
        return false;
    }
    bool accept_punct(const std::string& p) {
        if (cur().kind == Token::Punct && cur().text == p) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) fail("expected '" + p + "', got '" + cur().text + "'");
    }
    std::string ident() {
        if (cur().kind != Token::Ident) fail("expected identifier, got '" + cur().text + "'");
        return toks_[pos_++].text;
    }
    Weight number() {
        if (cur().kind != Token::Number) fail("expected number, got '" + cur().text + "'");
        return static_cast<Weight>(std::stoll(toks_[pos_++].text));
    }

    void parse_process(SpecFile& sf) {
        ProcessType ty;
        ty.name = ident();
        expect_punct("{");
        std::string init_name;
        while (!accept_punct("}")) {
            if (accept_ident("places")) {
                do ty.places.push_back(ident());
                while (accept_punct(","));
                expect_punct(";");
            } else if (accept_ident("init")) {
                init_name = ident();
                expect_punct(";");
            } else if (cur().kind == Token::Ident &&
                       (cur().text == "obs" || cur().text == "int")) {
                bool obs = cur().text == "obs";
                ++pos_;
                ProcessType::Trans tr;
                tr.observable = obs;
                tr.name = ident();
                expect_punct(":");
                std::string from = ident();
                expect_punct("->");
                std::string to = ident();
                expect_punct(";");
                tr.pre = ty.place_idx(from);
                tr.post = ty.place_idx(to);
                if (tr.pre < 0) fail("unknown place " + from + " in type " + ty.name);
                if (tr.post < 0) fail("unknown place " + to + " in type " + ty.name);
                ty.transitions.push_back(std::move(tr));
            } else {
                fail("expected 'places', 'init', 'obs' or 'int' in process block");
            }
        }
        ty.initial_place = ty.place_idx(init_name);
        if (ty.initial_place < 0)
            fail("process " + ty.name + " needs 'init <place>' naming a declared place");
        sf.types.types.push_back(std::move(ty));
    }

    void parse_source(SpecFile& sf) {
        std::string sigma = ident();
        expect_punct(":");
        std::string ty = ident();
        int ti = sf.types.type_idx(ty);
        if (ti < 0) fail("source " + sigma + " names unknown type " + ty);
        if (!sf.types.source_type.emplace(sigma, ti).second)
            fail("source " + sigma + " declared twice");
    }

    void parse_grammar(SpecFile& sf) {
        expect_punct("{");
        bool have_axiom = false;
        while (!accept_punct("}")) {
            if (accept_ident("axiom")) {
                if (have_axiom) fail("more than one axiom");
                have_axiom = true;
                sf.grammar.axiom = ident();
            } else {
                std::string lhs = ident();
                expect_punct("->");
                sf.grammar.rules.push_back({std::move(lhs), parse_term(sf)});
            }
        }
        if (!have_axiom) fail("grammar block without axiom");
    }

    HrTerm parse_term(SpecFile& sf) {
        HrTerm t = parse_unary(sf);
        while (accept_punct("+")) t = HrTerm::compose(std::move(t), parse_unary(sf));
        return t;
    }

    HrTerm parse_unary(SpecFile& sf) {
        if (accept_ident("restrict")) {
            expect_punct("{");
            std::set<std::string> tau;
            if (!accept_punct("}")) {
                do tau.insert(source_ref(sf));
                while (accept_punct(","));
                expect_punct("}");
            }
            return HrTerm::restrict_(std::move(tau), parse_unary(sf));
        }
        if (accept_ident("rename")) {
            expect_punct("(");
            std::map<std::string, std::string> alpha;
            do {
                std::string a = source_ref(sf);
                expect_punct("<->");
                std::string b = source_ref(sf);
                if (a == b) fail("swap " + a + "<->" + b + " is trivial");
                if (!alpha.emplace(a, b).second || !alpha.emplace(b, a).second)
                    fail("source " + a + " or " + b + " swapped twice");
            } while (accept_punct(","));
            expect_punct(")");
            return HrTerm::rename(std::move(alpha), parse_unary(sf));
        }
        return parse_primary(sf);
    }

    HrTerm parse_primary(SpecFile& sf) {
        if (accept_ident("edge")) {
            expect_punct("(");
            std::string t1 = ident();
            expect_punct(",");
            std::string t2 = ident();
            expect_punct(")");
            expect_punct("(");
            std::string s1 = source_ref(sf);
            expect_punct(",");
            std::string s2 = source_ref(sf);
            expect_punct(")");
            return HrTerm::edge(std::move(t1), std::move(t2), std::move(s1), std::move(s2));
        }
        if (accept_punct("(")) {
            HrTerm t = parse_term(sf);
            expect_punct(")");
            return t;
        }
        return HrTerm::nonterm(ident());
    }

    std::string source_ref(SpecFile& sf) {
        std::string sigma = ident();
        if (!sf.types.source_type.count(sigma)) fail("undeclared source label " + sigma);
        return sigma;
    }

    void parse_query(SpecFile& sf) {
        Query q;
        q.id = ident();
        if (accept_ident("cover"))
            q.cover = true;
        else if (accept_ident("reach"))
            q.cover = false;
        else
            fail("query " + q.id + " must be 'cover' or 'reach'");
        expect_punct("{");
        do {
            QueryAtom a;
            a.type = ident();
            if (accept_punct("*")) a.sigma = ident();
            expect_punct(".");
            a.place = ident();
            if (q.cover)
                expect_punct(">=");
            else
                expect_punct("=");
            a.count = number();
            q.atoms.push_back(std::move(a));
        } while (accept_punct(","));
        expect_punct("}");
        if (accept_ident("expect")) q.expect = ident();
        sf.queries.push_back(std::move(q));
    }

    void validate_queries(SpecFile& sf) const {
        for (auto& q : sf.queries) {
            for (auto& a : q.atoms) {
                int ti = sf.types.type_idx(a.type);
                if (ti < 0)
                    throw ParseError(where_, 0, "query " + q.id + ": unknown type " + a.type);
                if (sf.types.types[ti].place_idx(a.place) < 0)
                    throw ParseError(where_, 0, "query " + q.id + ": type " + a.type +
                                                    " has no place " + a.place);
                if (!a.sigma.empty()) {
                    auto it = sf.types.source_type.find(a.sigma);
                    if (it == sf.types.source_type.end())
                        throw ParseError(where_, 0,
                                         "query " + q.id + ": unknown source " + a.sigma);
                    if (it->second != ti)
                        throw ParseError(where_, 0, "query " + q.id + ": source " + a.sigma +
                                                        " is not of type " + a.type);
                }
                if (a.count < 0)
                    throw ParseError(where_, 0, "query " + q.id + ": negative count");
            }
            static const std::set<std::string> verdicts{"SAFE", "UNKNOWN", "COVERABLE",
                                                        "UNCOVERABLE", "EXPORTED"};
            if (!q.expect.empty() && !verdicts.count(q.expect))
                throw ParseError(where_, 0,
                                 "query " + q.id + ": unknown expected verdict " + q.expect);
        }
    }
};

}  // namespace

SpecFile parse_spec(const std::string& text, const std::string& filename) {
    Parser p(tokenize(text, filename), filename);
    return p.parse();
}

SpecFile load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str(), path);
}

}  // namespace pcs
