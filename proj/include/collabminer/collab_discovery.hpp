#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "collabminer/event_log.hpp"
#include "collabminer/petri.hpp"

namespace cm {

/// Per-concept WF-nets with node ids prefixed `<concept>::`, so that no two
/// members share a place or transition id.
struct WorkflowCollection {
    struct TransitionRef {
        std::string concept_id;
        PetriNet::Index index;
    };

    std::map<std::string, WorkflowNet> nets;
    std::map<std::string, TransitionRef> transitions;  // every transition of every member

    /// Label of a member transition; nullopt for tau. Throws for unknown ids.
    std::optional<std::string> label(std::string_view transition_id) const;
    const WorkflowNet& net_of(std::string_view transition_id) const;
    IdSet place_ids() const;
    IdSet transition_ids() const;
};

/// Prefixes every node id with its concept. Throws on duplicate concepts.
WorkflowCollection build_workflow_collection(std::vector<std::pair<std::string, WorkflowNet>> nets);

enum class ChannelKind { message, resource };

/// One (place, sending transitions, receiving transitions) entry of the
/// asynchronous relation. Resource channels have senders == receivers.
struct AsyncChannel {
    std::string place;
    std::string type;  // message or resource type as recorded in the log
    ChannelKind kind = ChannelKind::message;
    IdSet senders;
    IdSet receivers;

    bool operator==(const AsyncChannel&) const = default;
};

/// Equally-labelled transitions executed as one; `representative` is a member.
struct SyncFusion {
    std::string representative;
    std::string label;
    IdSet members;

    bool operator==(const SyncFusion&) const = default;
};

struct CollaborationPattern {
    IdSet async_places;     // every channel place
    IdSet resource_places;  // subset of async_places
    std::map<std::string, std::uint32_t> allocation;  // resource place -> tokens
    std::vector<AsyncChannel> channels;
    std::vector<SyncFusion> fusions;
    std::vector<std::string> warnings;
};

std::string message_place_id(std::string_view type);
std::string resource_place_id(std::string_view type);

/// Structural violations of the pattern against `wc`; empty when valid.
std::vector<std::string> check_pattern(const CollaborationPattern& cp, const WorkflowCollection& wc);

/// Mines channels, resource sharing, allocations and fusions from the
/// transitions of `wc` and the attribute maps of `info`.
CollaborationPattern cdisc(const WorkflowCollection& wc, const CollabInfo& info, const EventLog& log);

/// Groups all non-silent transitions of `wc` by label; one fusion per label
/// carried by at least two transitions.
std::vector<SyncFusion> equal_label_fusions(const WorkflowCollection& wc);

enum class CollabType { message, handover, resource, synchronous };

std::string to_string(CollabType type);
std::set<CollabType> classify_types(const CollaborationPattern& cp, const WorkflowCollection& wc);

}  // namespace cm
