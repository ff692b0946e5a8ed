#include "collabminer/collab_discovery.hpp"

#include <algorithm>

#include "collabminer/error.hpp"

namespace cm {

std::optional<std::string> WorkflowCollection::label(std::string_view transition_id) const {
    const auto& net = net_of(transition_id);
    return net.net().transition(transitions.at(std::string(transition_id)).index).label;
}

const WorkflowNet& WorkflowCollection::net_of(std::string_view transition_id) const {
    auto it = transitions.find(std::string(transition_id));
    if (it == transitions.end()) throw Error("unknown transition '" + std::string(transition_id) + "'");
    return nets.at(it->second.concept_id);
}

IdSet WorkflowCollection::place_ids() const {
    IdSet out;
    for (const auto& [c, wf] : nets) out.insert(wf.net().places().begin(), wf.net().places().end());
    return out;
}

IdSet WorkflowCollection::transition_ids() const {
    IdSet out;
    for (const auto& [id, ref] : transitions) out.insert(id);
    return out;
}

WorkflowCollection build_workflow_collection(std::vector<std::pair<std::string, WorkflowNet>> nets) {
    WorkflowCollection wc;
    for (auto& [concept_id, wf] : nets) {
        if (wc.nets.count(concept_id)) throw Error("duplicate concept '" + concept_id + "' in workflow collection");
        const std::string prefix = concept_id + "::";
        const auto& src = wf.net();
        PetriNet renamed;
        for (const auto& p : src.places()) renamed.add_place(prefix + p);
        for (const auto& t : src.transitions()) renamed.add_transition(prefix + t.id, t.label);
        for (PetriNet::Index t = 0; t < src.transition_count(); ++t) {
            for (auto p : src.preset(t)) renamed.add_input_arc(p, t);
            for (auto p : src.postset(t)) renamed.add_output_arc(t, p);
        }
        for (PetriNet::Index t = 0; t < renamed.transition_count(); ++t)
            wc.transitions.emplace(renamed.transition(t).id, WorkflowCollection::TransitionRef{concept_id, t});
        wc.nets.emplace(concept_id, WorkflowNet(std::move(renamed)));
    }
    return wc;
}

std::string message_place_id(std::string_view type) { return "msg::" + std::string(type); }
std::string resource_place_id(std::string_view type) { return "res::" + std::string(type); }

std::vector<SyncFusion> equal_label_fusions(const WorkflowCollection& wc) {
    std::map<std::string, IdSet> by_label;
    for (const auto& [id, ref] : wc.transitions) {
        const auto& label = wc.nets.at(ref.concept_id).net().transition(ref.index).label;
        if (label) by_label[*label].insert(id);
    }
    std::vector<SyncFusion> out;
    for (auto& [label, members] : by_label) {
        if (members.size() < 2) continue;
        out.push_back({*members.begin(), label, std::move(members)});
    }
    return out;
}

CollaborationPattern cdisc(const WorkflowCollection& wc, const CollabInfo& info, const EventLog& log) {
    CollaborationPattern cp;

    std::map<std::string, IdSet> by_label;
    for (const auto& [id, ref] : wc.transitions) {
        const auto& label = wc.nets.at(ref.concept_id).net().transition(ref.index).label;
        if (label) by_label[*label].insert(id);
    }
    auto transitions_for = [&](const std::map<std::string, IdSet>& activity_map, const std::string& key) {
        IdSet out;
        auto it = activity_map.find(key);
        if (it == activity_map.end()) return out;
        for (const auto& activity : it->second) {
            auto ts = by_label.find(activity);
            if (ts != by_label.end()) out.insert(ts->second.begin(), ts->second.end());
        }
        return out;
    };

    for (const auto& type : info.message_types) {
        auto senders = transitions_for(info.senders, type);
        auto receivers = transitions_for(info.receivers, type);
        if (senders.empty() || receivers.empty()) {
            cp.warnings.push_back("message type '" + type + "' dropped: no " +
                                  (senders.empty() ? std::string("sending") : std::string("receiving")) +
                                  " transition");
            continue;
        }
        auto place = message_place_id(type);
        cp.async_places.insert(place);
        cp.channels.push_back({place, type, ChannelKind::message, std::move(senders), std::move(receivers)});
    }

    const bool lifecycles = has_lifecycle(log);
    for (const auto& type : info.resource_types) {
        auto sharers = transitions_for(info.sharers, type);
        if (sharers.empty()) {
            cp.warnings.push_back("resource type '" + type + "' dropped: no sharing transition");
            continue;
        }
        auto place = resource_place_id(type);
        cp.async_places.insert(place);
        cp.resource_places.insert(place);
        std::uint32_t tokens = 1;
        if (lifecycles) {
            auto conc = max_concurrency(log, type);
            tokens = static_cast<std::uint32_t>(conc.value);
            for (auto& w : conc.warnings) cp.warnings.push_back("resource '" + type + "': " + w);
        }
        cp.allocation[place] = tokens;
        cp.channels.push_back({place, type, ChannelKind::resource, sharers, sharers});
    }

    cp.fusions = equal_label_fusions(wc);
    return cp;
}

std::vector<std::string> check_pattern(const CollaborationPattern& cp, const WorkflowCollection& wc) {
    std::vector<std::string> problems;
    auto places = wc.place_ids();
    for (const auto& p : cp.async_places) {
        if (places.count(p) || wc.transitions.count(p))
            problems.push_back("channel place '" + p + "' clashes with a member node");
    }
    for (const auto& p : cp.resource_places) {
        if (!cp.async_places.count(p)) problems.push_back("resource place '" + p + "' is not a channel place");
        auto a = cp.allocation.find(p);
        if (a == cp.allocation.end() || a->second == 0)
            problems.push_back("resource place '" + p + "' has no positive allocation");
        bool loop = std::any_of(cp.channels.begin(), cp.channels.end(), [&](const AsyncChannel& c) {
            return c.place == p && c.senders == c.receivers;
        });
        if (!loop) problems.push_back("resource place '" + p + "' has no use/release entry");
    }
    auto visible = [&](const std::string& t, const std::string& where) {
        if (!wc.transitions.count(t)) {
            problems.push_back(where + ": unknown transition '" + t + "'");
            return;
        }
        if (!wc.label(t)) problems.push_back(where + ": silent transition '" + t + "'");
    };
    for (const auto& c : cp.channels) {
        if (!cp.async_places.count(c.place)) problems.push_back("channel '" + c.place + "' is not a channel place");
        if (c.senders.empty() || c.receivers.empty()) problems.push_back("channel '" + c.place + "' is one-sided");
        for (const auto& t : c.senders) visible(t, "channel " + c.place);
        for (const auto& t : c.receivers) visible(t, "channel " + c.place);
    }
    std::set<std::string> fused;
    for (const auto& f : cp.fusions) {
        if (!f.members.count(f.representative))
            problems.push_back("fusion '" + f.representative + "' does not contain its representative");
        if (f.members.size() < 2) problems.push_back("fusion '" + f.representative + "' has fewer than two members");
        for (const auto& t : f.members) {
            visible(t, "fusion " + f.representative);
            if (wc.transitions.count(t) && wc.label(t) != std::optional<std::string>(f.label))
                problems.push_back("fusion '" + f.representative + "' mixes labels");
            if (!fused.insert(t).second) problems.push_back("transition '" + t + "' is in two fusions");
        }
    }
    return problems;
}

std::string to_string(CollabType type) {
    switch (type) {
        case CollabType::message: return "message";
        case CollabType::handover: return "handover";
        case CollabType::resource: return "resource";
        case CollabType::synchronous: return "synchronous";
    }
    return "unknown";
}

std::set<CollabType> classify_types(const CollaborationPattern& cp, const WorkflowCollection& wc) {
    std::set<CollabType> types;
    if (!cp.fusions.empty()) types.insert(CollabType::synchronous);
    if (!cp.resource_places.empty()) types.insert(CollabType::resource);
    for (const auto& c : cp.channels) {
        if (cp.resource_places.count(c.place)) continue;
        types.insert(CollabType::message);
        for (const auto& t : c.receivers) {
            auto it = wc.transitions.find(t);
            if (it == wc.transitions.end()) continue;
            const auto& wf = wc.nets.at(it->second.concept_id);
            const auto& initial = wf.net().consumers(wf.source());
            if (std::find(initial.begin(), initial.end(), it->second.index) != initial.end())
                types.insert(CollabType::handover);
        }
    }
    return types;
}

}  // namespace cm
