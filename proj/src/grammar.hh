/* grammar.hh -- graph grammars over the composition algebra, filtering, derivations */

#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "behaviors.hh"
#include "systems.hh"

namespace pcs {

/// A term over the composition operations with nonterminal leaves.
struct HrTerm {
    enum Kind { Edge, Restrict, Rename, Compose, NonTerm };
    Kind kind = NonTerm;

    std::string t1, t2, s1, s2;               // Edge
    std::set<std::string> tau;                // Restrict
    std::map<std::string, std::string> alpha; // Rename (applied as old -> new)
    std::string nt;                           // NonTerm
    std::vector<HrTerm> children;             // 1 for Restrict/Rename, 2 for Compose

    static HrTerm edge(std::string t1, std::string t2, std::string s1, std::string s2);
    static HrTerm restrict_(std::set<std::string> tau, HrTerm sub);
    static HrTerm rename(std::map<std::string, std::string> alpha, HrTerm sub);
    static HrTerm compose(HrTerm a, HrTerm b);
    static HrTerm nonterm(std::string name);

    bool ground() const;
};

/// Deterministic rendering in the input syntax; doubles as a dedup key.
std::string to_string(const HrTerm& t);

struct HrRule {
    std::string lhs;
    HrTerm rhs;
};

struct HrGrammar {
    std::vector<HrRule> rules;
    std::string axiom;

    std::set<std::string> nonterminals() const;
    /// Throws std::invalid_argument when the axiom or a referenced
    /// nonterminal has no rule.
    void validate() const;
};

/// Rewrites every right-hand side to depth one: an edge constant, a
/// bare nonterminal, or one operation applied to nonterminals. Fresh
/// nonterminals are named <lhs>#<rule>.<k> and never clash with parsed
/// names. Languages are unchanged.
HrGrammar normalize(const HrGrammar& g);

/// Evaluates a ground term in the system algebra (throws on
/// nonterminals unless a binding supplies their value).
OpenSystem eval_system_term(const TypeTable& tt, const HrTerm& t,
                            const std::map<std::string, OpenSystem>* binding = nullptr);

/// Breadth-first enumeration of derivations: expands the leftmost
/// nonterminal, prunes sentential forms whose partial evaluation
/// (holes filled with the empty system) already exceeds max_vertices
/// -- completing a derivation never shrinks the vertex count -- and
/// deduplicates terms. Deterministic order.
struct DeriveOptions {
    int max_vertices = 8;
    std::size_t max_terms = 100000;   // cap on returned derivations
    std::size_t max_steps = 0;        // rule applications per derivation; 0 = auto
    std::size_t max_queue = 1000000;  // safety valve; exceeding it truncates
};

struct Derivation {
    HrTerm term;
    OpenSystem system;
};

struct DeriveResult {
    std::vector<Derivation> items;
    bool truncated = false;  // hit max_terms/max_steps/max_queue
};

DeriveResult derive_systems(const TypeTable& tt, const HrGrammar& g, const DeriveOptions& opt);

// --- generic bottom-up filtering -------------------------------------
//
// An algebra provides a totally ordered Value and the four operations,
// each returning the (possibly empty) set of results:
//
//   struct SomeAlgebra {
//     using Value = ...;                       // needs operator<
//     std::vector<Value> edge(t1,t2,s1,s2);
//     std::vector<Value> restrict_(tau, v);
//     std::vector<Value> rename(alpha, v);
//     std::vector<Value> compose(a, b);
//   };
//
// filter_grammar computes, by Kleene iteration, the set of values each
// nonterminal can take, together with every rule instantiation that is
// realizable -- the grammar refined by the finite abstraction.

template <class A>
std::vector<typename A::Value> apply_rule(const A& alg, const HrTerm& rhs,
                                          const std::vector<typename A::Value>& args) {
    switch (rhs.kind) {
        case HrTerm::Edge: return alg.edge(rhs.t1, rhs.t2, rhs.s1, rhs.s2);
        case HrTerm::NonTerm: return {args.at(0)};
        case HrTerm::Restrict: return alg.restrict_(rhs.tau, args.at(0));
        case HrTerm::Rename: return alg.rename(rhs.alpha, args.at(0));
        case HrTerm::Compose: return alg.compose(args.at(0), args.at(1));
    }
    return {};
}

/// Left-to-right nonterminal occurrences of a depth-one right-hand side.
std::vector<std::string> rhs_nonterminals(const HrTerm& rhs);

/// Throws std::invalid_argument unless every rule is in the depth-one
/// shape normalize() produces; filtering assumes it.
void require_normalized(const HrGrammar& g);

template <class A>
struct Filtered {
    using Value = typename A::Value;

    struct ARule {
        int rule;                  // index into the normalized grammar
        std::vector<Value> args;   // value per nonterminal occurrence
        Value result;
        auto operator<=>(const ARule&) const = default;
    };

    std::map<std::string, std::set<Value>> language;
    std::vector<ARule> rules;  // sorted, duplicate-free
    std::set<Value> axiom_values;
};

template <class A>
Filtered<A> filter_grammar(const A& alg, const HrGrammar& g) {
    using Value = typename A::Value;
    require_normalized(g);
    Filtered<A> out;
    auto& lang = out.language;
    for (const auto& r : g.rules) {
        lang[r.lhs];
        for (const auto& nt : rhs_nonterminals(r.rhs)) lang[nt];
    }

    auto for_each_instantiation = [&](const HrRule& r, auto&& fn) {
        std::vector<std::string> occs = rhs_nonterminals(r.rhs);
        std::vector<Value> args(occs.size());
        auto rec = [&](auto&& self, std::size_t i) -> void {
            if (i == occs.size()) {
                for (const Value& v : apply_rule(alg, r.rhs, args)) fn(args, v);
                return;
            }
            for (const Value& v : lang[occs[i]]) {
                args[i] = v;
                self(self, i + 1);
            }
        };
        rec(rec, 0);
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& r : g.rules)
            for_each_instantiation(r, [&](const std::vector<Value>&, const Value& v) {
                if (lang[r.lhs].insert(v).second) changed = true;
            });
    }

    std::set<typename Filtered<A>::ARule> rules;
    for (int ri = 0; ri < static_cast<int>(g.rules.size()); ++ri)
        for_each_instantiation(g.rules[ri], [&](const std::vector<Value>& args, const Value& v) {
            rules.insert({ri, args, v});
        });
    out.rules.assign(rules.begin(), rules.end());
    out.axiom_values = lang[g.axiom];
    return out;
}

/// All values of a ground term under an algebra (product semantics over
/// the set-valued operations).
template <class A>
std::vector<typename A::Value> eval_ground(const A& alg, const HrTerm& t) {
    using Value = typename A::Value;
    if (t.kind == HrTerm::Edge) return alg.edge(t.t1, t.t2, t.s1, t.s2);

    std::vector<std::vector<Value>> kid;
    for (const auto& c : t.children) kid.push_back(eval_ground(alg, c));
    std::set<Value> out;
    if (t.kind == HrTerm::Restrict)
        for (const Value& v : kid.at(0))
            for (Value& r : alg.restrict_(t.tau, v)) out.insert(std::move(r));
    else if (t.kind == HrTerm::Rename)
        for (const Value& v : kid.at(0))
            for (Value& r : alg.rename(t.alpha, v)) out.insert(std::move(r));
    else if (t.kind == HrTerm::Compose)
        for (const Value& a : kid.at(0))
            for (const Value& b : kid.at(1))
                for (Value& r : alg.compose(a, b)) out.insert(std::move(r));
    else
        throw std::invalid_argument("ground evaluation hit nonterminal " + t.nt);
    return {out.begin(), out.end()};
}

// --- the two deterministic algebras used throughout -------------------

/// Tracks only the set of visible source labels.
struct VisibleAlgebra {
    const TypeTable* tt;
    using Value = std::set<std::string>;

    std::vector<Value> edge(const std::string&, const std::string&, const std::string& s1,
                            const std::string& s2) const {
        return {Value{s1, s2}};
    }
    std::vector<Value> restrict_(const std::set<std::string>& tau, const Value& v) const {
        Value r;
        for (const auto& s : v)
            if (tau.count(s)) r.insert(s);
        return {r};
    }
    std::vector<Value> rename(const std::map<std::string, std::string>& alpha,
                              const Value& v) const {
        Value r;
        for (const auto& s : v) {
            auto it = alpha.find(s);
            r.insert(it == alpha.end() ? s : it->second);
        }
        return {r};
    }
    std::vector<Value> compose(const Value& a, const Value& b) const {
        Value r = a;
        r.insert(b.begin(), b.end());
        return {r};
    }
};

/// The folded-net abstraction (marking-free values).
struct FoldedAlgebra {
    const TypeTable* tt;
    using Value = FoldedNet;

    std::vector<Value> edge(const std::string& t1, const std::string& t2, const std::string& s1,
                            const std::string& s2) const {
        return {folded_edge_const(*tt, t1, t2, s1, s2)};
    }
    std::vector<Value> restrict_(const std::set<std::string>& tau, const Value& v) const {
        return {folded_restrict(*tt, v, tau)};
    }
    std::vector<Value> rename(const std::map<std::string, std::string>& alpha,
                              const Value& v) const {
        return {folded_rename(*tt, v, alpha)};
    }
    std::vector<Value> compose(const Value& a, const Value& b) const {
        return {folded_compose(*tt, a, b)};
    }
};

/// The grammar annotated with the possible visible-label sets of each
/// nonterminal.
using AnnotatedGrammar = Filtered<VisibleAlgebra>;
AnnotatedGrammar annotate(const TypeTable& tt, const HrGrammar& normalized);

}  // namespace pcs
