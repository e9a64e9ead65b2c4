/* netio.hh -- canonical net sorting, LoLA and PNML serialization */

#pragma once

#include <string>

#include "counting.hh"
#include "petri.hh"

namespace pcs {

/// Copy with places and transitions sorted by name and arcs reindexed;
/// serializing a canonically sorted net is deterministic and
/// re-reading its output reproduces it byte for byte.
PetriNet canonical_sorted(const PetriNet& pn);

/// Low-level net in the LoLA textual format:
///
///   PLACE p1, p2; MARKING p1: 1;
///   TRANSITION t CONSUME p1: 1; PRODUCE p2: 1;
std::string to_lola(const PetriNet& pn);

/// Reader for the subset to_lola emits. Throws std::runtime_error.
PetriNet from_lola(const std::string& text);

/// Standard place/transition PNML (one net, one page; place ids are
/// the place names).
std::string to_pnml(const PetriNet& pn, const std::string& net_id);

/// Reader for the subset to_pnml emits. Throws std::runtime_error.
PetriNet from_pnml(const std::string& text);

/// A LoLA reachability formula for the query against this family's
/// net: cover queries become lower bounds over each atom's place
/// group, reach queries an exact description (derivation places empty,
/// unmentioned state places zero).
std::string lola_formula(const TypeTable& tt, const CombinedNet& net, const Query& q);

}  // namespace pcs
