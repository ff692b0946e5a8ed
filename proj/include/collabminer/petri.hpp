#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace cm {

struct Transition {
    std::string id;
    std::optional<std::string> label;  // nullopt is the silent label tau

    bool silent() const noexcept { return !label.has_value(); }
};

/// Labelled place/transition net. Nodes are addressed by dense indices in
/// insertion order; ids are opaque strings shared by places and transitions.
/// The flow relation is a set: adding an existing arc is a no-op.
class PetriNet {
public:
    using Index = std::size_t;

    Index add_place(std::string id);
    Index add_transition(std::string id, std::optional<std::string> label = std::nullopt);
    /// Arc between two existing nodes, one place and one transition.
    void add_arc(std::string_view from, std::string_view to);
    void add_input_arc(Index place, Index transition);   // place -> transition
    void add_output_arc(Index transition, Index place);  // transition -> place
    /// Removes an arc if present; returns whether it existed.
    bool remove_arc(std::string_view from, std::string_view to);

    std::size_t place_count() const noexcept { return places_.size(); }
    std::size_t transition_count() const noexcept { return transitions_.size(); }
    /// |P| + |T|
    std::size_t size() const noexcept { return places_.size() + transitions_.size(); }
    std::size_t arc_count() const noexcept;

    const std::vector<std::string>& places() const noexcept { return places_; }
    const std::vector<Transition>& transitions() const noexcept { return transitions_; }
    const std::string& place_id(Index p) const { return places_.at(p); }
    const Transition& transition(Index t) const { return transitions_.at(t); }

    std::optional<Index> find_place(std::string_view id) const;
    std::optional<Index> find_transition(std::string_view id) const;
    Index place(std::string_view id) const;       // throws if unknown
    Index transition_index(std::string_view id) const;  // throws if unknown
    bool has_node(std::string_view id) const;

    /// Input / output places of a transition, sorted ascending.
    const std::vector<Index>& preset(Index t) const { return pre_.at(t); }
    const std::vector<Index>& postset(Index t) const { return post_.at(t); }
    /// Transitions consuming from / producing into a place, sorted ascending.
    const std::vector<Index>& consumers(Index p) const { return consumers_.at(p); }
    const std::vector<Index>& producers(Index p) const { return producers_.at(p); }

    /// Transition indices ordered by id.
    std::vector<Index> transitions_by_id() const;

private:
    void check_fresh(const std::string& id) const;

    std::vector<std::string> places_;
    std::vector<Transition> transitions_;
    std::unordered_map<std::string, Index> place_index_;
    std::unordered_map<std::string, Index> transition_index_;
    std::vector<std::vector<Index>> pre_, post_, consumers_, producers_;
};

/// Token counts indexed by place index of the owning net.
struct Marking {
    std::vector<std::uint32_t> tokens;

    Marking() = default;
    explicit Marking(std::size_t places) : tokens(places, 0) {}

    std::uint32_t operator[](std::size_t p) const { return p < tokens.size() ? tokens[p] : 0; }
    std::uint64_t total() const noexcept;
    bool operator==(const Marking&) const = default;
};

struct MarkingHash {
    std::size_t operator()(const Marking& m) const noexcept;
};

Marking make_marking(const PetriNet& net, const std::vector<std::pair<std::string, std::uint32_t>>& counts);
/// Non-zero entries as (place id, count), sorted by place id.
std::vector<std::pair<std::string, std::uint32_t>> marking_pairs(const PetriNet& net, const Marking& m);
/// `[p:1, q:2]`, using the sorted pair encoding.
std::string to_string(const PetriNet& net, const Marking& m);

/// A net with initial and final marking.
struct AcceptingNet {
    PetriNet net;
    Marking initial;
    Marking final;
};

bool is_enabled(const PetriNet& net, const Marking& m, PetriNet::Index t);
std::vector<PetriNet::Index> enabled_transitions(const PetriNet& net, const Marking& m);
/// m - pre(t) + post(t). Throws EnablingError naming the places lacking a token.
Marking fire(const PetriNet& net, const Marking& m, PetriNet::Index t);
/// Same as `fire` on a marking the caller owns; no enabling check.
void fire_in_place(const PetriNet& net, Marking& m, PetriNet::Index t);

struct WorkflowCheck {
    bool ok = false;
    std::optional<PetriNet::Index> source;
    std::optional<PetriNet::Index> sink;
    std::vector<std::string> diagnostics;
};

/// Unique source place, unique sink place, every node on a path from source to sink.
WorkflowCheck check_workflow_net(const PetriNet& net);
inline bool is_workflow_net(const PetriNet& net) { return check_workflow_net(net).ok; }

class WorkflowNet {
public:
    /// Throws DiscoveryError listing the diagnostics if `net` is not a WF-net.
    explicit WorkflowNet(PetriNet net);

    const PetriNet& net() const noexcept { return net_; }
    PetriNet::Index source() const noexcept { return source_; }
    PetriNet::Index sink() const noexcept { return sink_; }
    /// The net with markings [source] and [sink].
    AcceptingNet accepting() const;

private:
    PetriNet net_;
    PetriNet::Index source_;
    PetriNet::Index sink_;
};

struct ReachabilityGraph {
    struct Edge {
        std::size_t from;
        std::size_t to;
        PetriNet::Index transition;

        bool operator==(const Edge&) const = default;
    };
    std::vector<Marking> states;  // states[0] is the initial marking
    std::vector<Edge> edges;
    bool truncated = false;
};

/// Breadth-first exploration from `initial`, transitions tried in id order.
/// Stops adding states once `cap` states exist and sets `truncated`.
ReachabilityGraph reachability_graph(const PetriNet& net, const Marking& initial, std::size_t cap);

}  // namespace cm
