/* netio.cc -- canonical net sorting, LoLA and PNML serialization */

#include "netio.hh"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pcs {

PetriNet canonical_sorted(const PetriNet& pn) {
    const Net& n = pn.net;
    std::vector<int> porder(n.places.size()), torder(n.transitions.size());
    std::iota(porder.begin(), porder.end(), 0);
    std::iota(torder.begin(), torder.end(), 0);
    std::sort(porder.begin(), porder.end(),
              [&](int a, int b) { return n.places[a] < n.places[b]; });
    std::sort(torder.begin(), torder.end(),
              [&](int a, int b) { return n.transitions[a] < n.transitions[b]; });

    std::vector<int> pnew(n.places.size());
    for (std::size_t i = 0; i < porder.size(); ++i) pnew[porder[i]] = static_cast<int>(i);

    PetriNet out;
    for (int p : porder) {
        out.net.add_place(n.places[p]);
        out.initial.push_back(pn.initial[p]);
    }
    for (int t : torder) {
        auto remap = [&](std::vector<std::pair<int, Weight>> v) {
            for (auto& [p, w] : v) p = pnew[p];
            return v;
        };
        out.net.add_transition(n.transitions[t], remap(n.arcs[t].pre), remap(n.arcs[t].post));
    }
    return out;
}

std::string to_lola(const PetriNet& pn) {
    const Net& n = pn.net;
    std::ostringstream os;
    os << "PLACE\n ";
    for (std::size_t p = 0; p < n.places.size(); ++p)
        os << (p ? ", " : " ") << n.places[p];
    os << ";\n\nMARKING\n ";
    bool first = true;
    for (std::size_t p = 0; p < n.places.size(); ++p) {
        if (pn.initial[p] == 0) continue;
        os << (first ? " " : ", ") << n.places[p] << ": " << pn.initial[p];
        first = false;
    }
    os << ";\n";
    for (std::size_t t = 0; t < n.transitions.size(); ++t) {
        os << "\nTRANSITION " << n.transitions[t] << "\nCONSUME\n ";
        for (std::size_t i = 0; i < n.arcs[t].pre.size(); ++i)
            os << (i ? ", " : " ") << n.places[n.arcs[t].pre[i].first] << ": "
               << n.arcs[t].pre[i].second;
        os << ";\nPRODUCE\n ";
        for (std::size_t i = 0; i < n.arcs[t].post.size(); ++i)
            os << (i ? ", " : " ") << n.places[n.arcs[t].post[i].first] << ": "
               << n.arcs[t].post[i].second;
        os << ";\n";
    }
    return os.str();
}

namespace {

struct LolaLexer {
    std::string text;
    std::size_t i = 0;

    void skip() {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    }
    bool eof() {
        skip();
        return i >= text.size();
    }
    std::string word() {
        skip();
        std::size_t j = i;
        while (j < text.size() && (std::isalnum(static_cast<unsigned char>(text[j])) ||
                                   text[j] == '_'))
            ++j;
        if (j == i) throw std::runtime_error("lola: expected a name near offset " +
                                             std::to_string(i));
        std::string w = text.substr(i, j - i);
        i = j;
        return w;
    }
    char punct() {
        skip();
        if (i >= text.size()) throw std::runtime_error("lola: unexpected end of input");
        return text[i++];
    }
    char peek() {
        skip();
        return i < text.size() ? text[i] : '\0';
    }
    Weight number() {
        skip();
        std::size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j == i) throw std::runtime_error("lola: expected a number near offset " +
                                             std::to_string(i));
        Weight w = std::stoll(text.substr(i, j - i));
        i = j;
        return w;
    }
};

std::vector<std::pair<int, Weight>> lola_weight_list(LolaLexer& lx, const Net& net) {
    std::vector<std::pair<int, Weight>> out;
    while (lx.peek() != ';') {
        std::string p = lx.word();
        if (lx.punct() != ':') throw std::runtime_error("lola: expected ':' after " + p);
        Weight w = lx.number();
        int id = net.place_id(p);
        if (id < 0) throw std::runtime_error("lola: unknown place " + p);
        out.emplace_back(id, w);
        if (lx.peek() == ',') lx.punct();
    }
    lx.punct();  // ';'
    return out;
}

}  // namespace

PetriNet from_lola(const std::string& text) {
    LolaLexer lx{text};
    PetriNet pn;
    if (lx.word() != "PLACE") throw std::runtime_error("lola: expected PLACE");
    while (true) {
        pn.net.add_place(lx.word());
        pn.initial.push_back(0);
        char c = lx.punct();
        if (c == ';') break;
        if (c != ',') throw std::runtime_error("lola: expected ',' or ';' in PLACE");
    }
    if (lx.word() != "MARKING") throw std::runtime_error("lola: expected MARKING");
    for (auto [p, w] : lola_weight_list(lx, pn.net)) pn.initial[p] = w;
    while (!lx.eof()) {
        if (lx.word() != "TRANSITION") throw std::runtime_error("lola: expected TRANSITION");
        std::string name = lx.word();
        if (lx.word() != "CONSUME") throw std::runtime_error("lola: expected CONSUME");
        auto pre = lola_weight_list(lx, pn.net);
        if (lx.word() != "PRODUCE") throw std::runtime_error("lola: expected PRODUCE");
        auto post = lola_weight_list(lx, pn.net);
        pn.net.add_transition(name, pre, post);
    }
    return pn;
}

namespace {

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else if (c == '"') out += "&quot;";
        else out += c;
    }
    return out;
}

}  // namespace

std::string to_pnml(const PetriNet& pn, const std::string& net_id) {
    const Net& n = pn.net;
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<pnml xmlns=\"http://www.pnml.org/version-2009/grammar/pnml\">\n";
    os << "  <net id=\"" << xml_escape(net_id)
       << "\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n";
    os << "    <page id=\"page0\">\n";
    for (std::size_t p = 0; p < n.places.size(); ++p) {
        os << "      <place id=\"" << xml_escape(n.places[p]) << "\">\n";
        os << "        <name><text>" << xml_escape(n.places[p]) << "</text></name>\n";
        if (pn.initial[p] != 0)
            os << "        <initialMarking><text>" << pn.initial[p]
               << "</text></initialMarking>\n";
        os << "      </place>\n";
    }
    for (std::size_t t = 0; t < n.transitions.size(); ++t) {
        os << "      <transition id=\"" << xml_escape(n.transitions[t]) << "\">\n";
        os << "        <name><text>" << xml_escape(n.transitions[t]) << "</text></name>\n";
        os << "      </transition>\n";
    }
    int arc = 0;
    for (std::size_t t = 0; t < n.transitions.size(); ++t) {
        for (const auto& [p, w] : n.arcs[t].pre) {
            os << "      <arc id=\"a" << arc++ << "\" source=\"" << xml_escape(n.places[p])
               << "\" target=\"" << xml_escape(n.transitions[t]) << "\">\n";
            os << "        <inscription><text>" << w << "</text></inscription>\n";
            os << "      </arc>\n";
        }
        for (const auto& [p, w] : n.arcs[t].post) {
            os << "      <arc id=\"a" << arc++ << "\" source=\"" << xml_escape(n.transitions[t])
               << "\" target=\"" << xml_escape(n.places[p]) << "\">\n";
            os << "        <inscription><text>" << w << "</text></inscription>\n";
            os << "      </arc>\n";
        }
    }
    os << "    </page>\n  </net>\n</pnml>\n";
    return os.str();
}

namespace {

/// Minimal scanner for the PNML subset to_pnml produces: enough XML to
/// read ids, attributes and <text> payloads back.
struct PnmlScanner {
    const std::string& text;
    std::size_t pos = 0;

    /// Next occurrence of `<tag ...` at or after pos; false when absent.
    bool find_tag(const std::string& tag, std::size_t end, std::size_t& at) {
        std::string needle = "<" + tag;
        std::size_t p = text.find(needle, pos);
        while (p != std::string::npos && p < end) {
            char after = text[p + needle.size()];
            if (after == ' ' || after == '>' || after == '/') {
                at = p;
                return true;
            }
            p = text.find(needle, p + 1);
        }
        return false;
    }

    static std::string attr(const std::string& text, std::size_t tag_at, const std::string& name) {
        std::size_t gt = text.find('>', tag_at);
        std::size_t a = text.find(name + "=\"", tag_at);
        if (a == std::string::npos || a > gt) return "";
        a += name.size() + 2;
        std::size_t b = text.find('"', a);
        return text.substr(a, b - a);
    }
};

std::string text_payload(const std::string& text, std::size_t from, std::size_t to,
                         const std::string& element) {
    std::size_t a = text.find("<" + element, from);
    if (a == std::string::npos || a > to) return "";
    a = text.find("<text>", a);
    if (a == std::string::npos || a > to) return "";
    a += 6;
    std::size_t b = text.find("</text>", a);
    return text.substr(a, b - a);
}

std::string xml_unescape(const std::string& s) {
    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        if (s.compare(i, 5, "&amp;") == 0) out += '&', i += 5;
        else if (s.compare(i, 4, "&lt;") == 0) out += '<', i += 4;
        else if (s.compare(i, 4, "&gt;") == 0) out += '>', i += 4;
        else if (s.compare(i, 6, "&quot;") == 0) out += '"', i += 6;
        else out += s[i++];
    }
    return out;
}

}  // namespace

PetriNet from_pnml(const std::string& text) {
    PetriNet pn;
    PnmlScanner sc{text};
    std::size_t at = 0;

    struct Elem {
        std::size_t start, end;
    };
    auto element_end = [&](const std::string& tag, std::size_t start) {
        std::size_t e = text.find("</" + tag + ">", start);
        if (e == std::string::npos) throw std::runtime_error("pnml: unterminated <" + tag + ">");
        return e;
    };

    // Places and transitions first, then arcs are accumulated per
    // transition and added in one go (the in-memory form is stoichiometric).
    std::vector<std::pair<std::string, Elem>> transitions;
    while (sc.find_tag("place", text.size(), at)) {
        std::size_t end = element_end("place", at);
        std::string id = xml_unescape(PnmlScanner::attr(text, at, "id"));
        if (id.empty()) throw std::runtime_error("pnml: place without id");
        pn.net.add_place(id);
        std::string mark = text_payload(text, at, end, "initialMarking");
        pn.initial.push_back(mark.empty() ? 0 : std::stoll(mark));
        sc.pos = end;
    }
    sc.pos = 0;
    while (sc.find_tag("transition", text.size(), at)) {
        std::size_t end = element_end("transition", at);
        transitions.push_back({xml_unescape(PnmlScanner::attr(text, at, "id")), {at, end}});
        sc.pos = end;
    }

    std::map<std::string, std::vector<std::pair<int, Weight>>> pre, post;
    sc.pos = 0;
    while (sc.find_tag("arc", text.size(), at)) {
        std::size_t end = element_end("arc", at);
        std::string src = xml_unescape(PnmlScanner::attr(text, at, "source"));
        std::string dst = xml_unescape(PnmlScanner::attr(text, at, "target"));
        std::string w = text_payload(text, at, end, "inscription");
        Weight weight = w.empty() ? 1 : std::stoll(w);
        if (pn.net.place_id(src) >= 0)
            pre[dst].emplace_back(pn.net.place_id(src), weight);
        else if (pn.net.place_id(dst) >= 0)
            post[src].emplace_back(pn.net.place_id(dst), weight);
        else
            throw std::runtime_error("pnml: arc between unknown nodes " + src + " -> " + dst);
        sc.pos = end;
    }
    for (const auto& [name, elem] : transitions)
        pn.net.add_transition(name, pre[name], post[name]);
    return pn;
}

std::string lola_formula(const TypeTable& tt, const CombinedNet& net, const Query& q) {
    const Net& n = net.pn.net;
    std::vector<std::string> conj;
    auto group_sum = [&](const std::vector<int>& g) {
        std::string s;
        for (std::size_t i = 0; i < g.size(); ++i) s += (i ? " + " : "") + n.places[g[i]];
        return s;
    };

    std::set<int> mentioned;
    bool possible = true;
    for (const auto& atom : q.atoms) {
        std::vector<int> g = query_places(tt, net, atom);
        if (g.empty()) {
            if (atom.count > 0) possible = false;
            continue;
        }
        mentioned.insert(g.begin(), g.end());
        if (q.cover && atom.count == 0) continue;  // trivially satisfied
        conj.push_back(group_sum(g) + (q.cover ? " >= " : " = ") + std::to_string(atom.count));
    }
    if (!possible) return "FORMULA EF FALSE";

    if (!q.cover) {
        conj.push_back(n.places[net.start_place] + " = 0");
        for (int p : net.nt_places) conj.push_back(n.places[p] + " = 0");
        for (int p : net.state_places)
            if (!mentioned.count(p)) conj.push_back(n.places[p] + " = 0");
    }
    std::string body;
    for (std::size_t i = 0; i < conj.size(); ++i) body += (i ? " AND " : "") + conj[i];
    if (body.empty()) body = "TRUE";
    return "FORMULA EF (" + body + ")";
}

}  // namespace pcs
