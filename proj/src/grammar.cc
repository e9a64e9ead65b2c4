/* grammar.cc -- graph grammars over the composition algebra, filtering, derivations */

#include "grammar.hh"

#include <algorithm>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace pcs {

HrTerm HrTerm::edge(std::string t1, std::string t2, std::string s1, std::string s2) {
    HrTerm t;
    t.kind = Edge;
    t.t1 = std::move(t1);
    t.t2 = std::move(t2);
    t.s1 = std::move(s1);
    t.s2 = std::move(s2);
    return t;
}

HrTerm HrTerm::restrict_(std::set<std::string> tau, HrTerm sub) {
    HrTerm t;
    t.kind = Restrict;
    t.tau = std::move(tau);
    t.children.push_back(std::move(sub));
    return t;
}

HrTerm HrTerm::rename(std::map<std::string, std::string> alpha, HrTerm sub) {
    HrTerm t;
    t.kind = Rename;
    t.alpha = std::move(alpha);
    t.children.push_back(std::move(sub));
    return t;
}

HrTerm HrTerm::compose(HrTerm a, HrTerm b) {
    HrTerm t;
    t.kind = Compose;
    t.children.push_back(std::move(a));
    t.children.push_back(std::move(b));
    return t;
}

HrTerm HrTerm::nonterm(std::string name) {
    HrTerm t;
    t.kind = NonTerm;
    t.nt = std::move(name);
    return t;
}

bool HrTerm::ground() const {
    if (kind == NonTerm) return false;
    for (const auto& c : children)
        if (!c.ground()) return false;
    return true;
}

std::string to_string(const HrTerm& t) {
    std::ostringstream os;
    switch (t.kind) {
        case HrTerm::Edge:
            os << "edge (" << t.t1 << "," << t.t2 << ") (" << t.s1 << "," << t.s2 << ")";
            break;
        case HrTerm::Restrict: {
            os << "restrict {";
            bool first = true;
            for (const auto& s : t.tau) os << (first ? "" : ",") << s, first = false;
            os << "} (" << to_string(t.children[0]) << ")";
            break;
        }
        case HrTerm::Rename: {
            os << "rename (";
            bool first = true;
            for (const auto& [a, b] : t.alpha) os << (first ? "" : ",") << a << "<->" << b, first = false;
            os << ") (" << to_string(t.children[0]) << ")";
            break;
        }
        case HrTerm::Compose:
            os << "(" << to_string(t.children[0]) << " + " << to_string(t.children[1]) << ")";
            break;
        case HrTerm::NonTerm:
            os << t.nt;
            break;
    }
    return os.str();
}

std::set<std::string> HrGrammar::nonterminals() const {
    std::set<std::string> nts;
    for (const auto& r : rules) nts.insert(r.lhs);
    return nts;
}

void HrGrammar::validate() const {
    std::set<std::string> nts = nonterminals();
    if (!nts.count(axiom)) throw std::invalid_argument("axiom " + axiom + " has no rule");
    auto walk = [&](auto&& self, const HrTerm& t) -> void {
        if (t.kind == HrTerm::NonTerm && !nts.count(t.nt))
            throw std::invalid_argument("nonterminal " + t.nt + " has no rule");
        for (const auto& c : t.children) self(self, c);
    };
    for (const auto& r : rules) walk(walk, r.rhs);
}

namespace {

/// Turns a term into a nonterminal reference, creating auxiliary rules
/// for anything that is not already one.
std::string hoist(const HrTerm& t, const std::string& prefix, int& counter,
                  std::vector<HrRule>& aux);

HrTerm shallow(const HrTerm& t, const std::string& prefix, int& counter,
               std::vector<HrRule>& aux) {
    switch (t.kind) {
        case HrTerm::Edge:
        case HrTerm::NonTerm:
            return t;
        case HrTerm::Restrict:
            return HrTerm::restrict_(t.tau,
                                     HrTerm::nonterm(hoist(t.children[0], prefix, counter, aux)));
        case HrTerm::Rename:
            return HrTerm::rename(t.alpha,
                                  HrTerm::nonterm(hoist(t.children[0], prefix, counter, aux)));
        case HrTerm::Compose:
            return HrTerm::compose(HrTerm::nonterm(hoist(t.children[0], prefix, counter, aux)),
                                   HrTerm::nonterm(hoist(t.children[1], prefix, counter, aux)));
    }
    throw std::logic_error("unreachable");
}

std::string hoist(const HrTerm& t, const std::string& prefix, int& counter,
                  std::vector<HrRule>& aux) {
    if (t.kind == HrTerm::NonTerm) return t.nt;
    std::string fresh = prefix + "." + std::to_string(++counter);
    aux.push_back({fresh, shallow(t, prefix, counter, aux)});
    return fresh;
}

}  // namespace

HrGrammar normalize(const HrGrammar& g) {
    HrGrammar out;
    out.axiom = g.axiom;
    for (int ri = 0; ri < static_cast<int>(g.rules.size()); ++ri) {
        const HrRule& r = g.rules[ri];
        std::string prefix = r.lhs + "#" + std::to_string(ri);
        int counter = 0;
        std::vector<HrRule> aux;
        HrTerm top = shallow(r.rhs, prefix, counter, aux);
        out.rules.push_back({r.lhs, std::move(top)});
        for (auto& a : aux) out.rules.push_back(std::move(a));
    }
    out.validate();
    return out;
}

OpenSystem eval_system_term(const TypeTable& tt, const HrTerm& t,
                            const std::map<std::string, OpenSystem>* binding) {
    switch (t.kind) {
        case HrTerm::Edge:
            return edge_const(tt, t.t1, t.t2, t.s1, t.s2);
        case HrTerm::Restrict:
            return restrict_sources(eval_system_term(tt, t.children[0], binding), t.tau);
        case HrTerm::Rename:
            return rename_sources(tt, eval_system_term(tt, t.children[0], binding), t.alpha);
        case HrTerm::Compose:
            return compose(tt, eval_system_term(tt, t.children[0], binding),
                           eval_system_term(tt, t.children[1], binding));
        case HrTerm::NonTerm: {
            if (binding) {
                auto it = binding->find(t.nt);
                if (it != binding->end()) return it->second;
            }
            throw std::invalid_argument("cannot evaluate open term at " + t.nt);
        }
    }
    throw std::logic_error("unreachable");
}

void require_normalized(const HrGrammar& g) {
    for (const auto& r : g.rules) {
        const HrTerm& t = r.rhs;
        bool ok = t.kind == HrTerm::Edge || t.kind == HrTerm::NonTerm;
        if (!ok) {
            ok = true;
            for (const auto& c : t.children) ok = ok && c.kind == HrTerm::NonTerm;
        }
        if (!ok)
            throw std::invalid_argument("rule for " + r.lhs +
                                        " is not depth-one; normalize the grammar first");
    }
}

std::vector<std::string> rhs_nonterminals(const HrTerm& rhs) {
    std::vector<std::string> occs;
    auto walk = [&](auto&& self, const HrTerm& t) -> void {
        if (t.kind == HrTerm::NonTerm) occs.push_back(t.nt);
        for (const auto& c : t.children) self(self, c);
    };
    walk(walk, rhs);
    return occs;
}

namespace {

/// Pointer to the leftmost nonterminal of a term, or null when ground.
const HrTerm* leftmost_nt(const HrTerm& t) {
    if (t.kind == HrTerm::NonTerm) return &t;
    for (const auto& c : t.children)
        if (const HrTerm* r = leftmost_nt(c)) return r;
    return nullptr;
}

/// Copy of `t` with the single occurrence at address `at` replaced.
HrTerm substitute(const HrTerm& t, const HrTerm* at, const HrTerm& repl) {
    if (&t == at) return repl;
    HrTerm out = t;
    for (std::size_t i = 0; i < t.children.size(); ++i)
        out.children[i] = substitute(t.children[i], at, repl);
    return out;
}

}  // namespace

DeriveResult derive_systems(const TypeTable& tt, const HrGrammar& g, const DeriveOptions& opt) {
    g.validate();
    std::size_t max_steps = opt.max_steps ? opt.max_steps
                                          : static_cast<std::size_t>(4 * opt.max_vertices + 16);

    // Vertex counts never shrink while a derivation completes, so a
    // sentential form whose empty-completion is already too big is dead.
    std::map<std::string, OpenSystem> empty_binding;
    for (const auto& nt : g.nonterminals()) empty_binding[nt] = OpenSystem{};
    auto lower_bound_ok = [&](const HrTerm& t) {
        return eval_system_term(tt, t, &empty_binding).vertex_count() <=
               static_cast<std::size_t>(opt.max_vertices);
    };

    DeriveResult res;
    std::deque<std::pair<HrTerm, std::size_t>> queue;  // (sentential form, steps)
    std::set<std::string> seen;
    queue.emplace_back(HrTerm::nonterm(g.axiom), 0);
    seen.insert(to_string(queue.front().first));

    while (!queue.empty()) {
        auto [term, steps] = std::move(queue.front());
        queue.pop_front();

        const HrTerm* at = leftmost_nt(term);
        if (!at) {
            OpenSystem sys = eval_system_term(tt, term);
            if (sys.vertex_count() <= static_cast<std::size_t>(opt.max_vertices)) {
                res.items.push_back({std::move(term), std::move(sys)});
                if (res.items.size() >= opt.max_terms) {
                    res.truncated = true;
                    break;
                }
            }
            continue;
        }
        if (steps >= max_steps) {
            res.truncated = true;
            continue;
        }
        for (const auto& r : g.rules) {
            if (r.lhs != at->nt) continue;
            HrTerm next = substitute(term, at, r.rhs);
            if (!lower_bound_ok(next)) continue;
            if (!seen.insert(to_string(next)).second) continue;
            if (queue.size() >= opt.max_queue) {
                res.truncated = true;
                break;
            }
            queue.emplace_back(std::move(next), steps + 1);
        }
    }
    return res;
}

AnnotatedGrammar annotate(const TypeTable& tt, const HrGrammar& normalized) {
    VisibleAlgebra alg{&tt};
    return filter_grammar(alg, normalized);
}

}  // namespace pcs
