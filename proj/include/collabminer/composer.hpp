#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "collabminer/collab_discovery.hpp"
#include "collabminer/event_log.hpp"
#include "collabminer/inductive.hpp"
#include "collabminer/petri.hpp"

namespace cm {

// Reserved ids of the global wrapper.
inline constexpr const char* kSourceId = "__i__";
inline constexpr const char* kSinkId = "__o__";
inline constexpr const char* kStartId = "__ti__";
inline constexpr const char* kEndId = "__to__";

/// Where a transition of a composed net came from.
struct Provenance {
    IdSet concepts;   // owning concepts of all fused originals
    IdSet fused;      // original transition ids collapsed onto this one
    IdSet sends;      // message types produced
    IdSet receives;   // message types consumed
    IdSet resources;  // resource types used and released

    bool operator==(const Provenance&) const = default;
};

/// Composed net with global source/sink wrapper; initial and final markings
/// put `ra(p)` tokens on every resource place.
struct CollaborationPetriNet : AcceptingNet {
    std::map<std::string, Provenance> provenance;  // by transition id
    IdSet resource_places;
};

/// Throws CompositionError if `cp` references unknown or silent transitions or
/// clashes with member or reserved ids.
CollaborationPetriNet compose(const WorkflowCollection& wc, const CollaborationPattern& cp);

struct DiscoveryOptions {
    /// Projected logs keep empty traces (lets each member net be skipped).
    bool keep_empty_traces = true;
};

struct ConceptSummary {
    std::string concept_id;
    std::size_t places = 0;
    std::size_t transitions = 0;
    std::size_t traces = 0;        // with multiplicity
    std::size_t empty_traces = 0;  // with multiplicity
};

struct DiscoveryReport {
    CollabInfo info;
    CollaborationPattern pattern;
    std::vector<ConceptSummary> concepts;
    std::set<CollabType> types;
    std::vector<std::string> warnings;
};

struct DiscoveryResult {
    CollaborationPetriNet cpn;
    WorkflowCollection collection;
    DiscoveryReport report;
};

/// Full pipeline: extract attribute maps, project and discover per concept,
/// mine the collaboration pattern, compose. Throws DiscoveryError if an event
/// lacks an activity or a concept, or if `disc` returns a non-WF-net.
DiscoveryResult discover_cpn(const EventLog& log, const DiscoveryFn& disc = inductive_miner,
                             const DiscoveryOptions& options = {});

}  // namespace cm
