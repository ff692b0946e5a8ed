#include "collabminer/composer.hpp"

#include <algorithm>
#include <array>

#include "collabminer/error.hpp"

namespace cm {

CollaborationPetriNet compose(const WorkflowCollection& wc, const CollaborationPattern& cp) {
    const std::array<std::string, 4> reserved{kSourceId, kSinkId, kStartId, kEndId};
    for (const auto& id : reserved) {
        if (wc.transitions.count(id) || cp.async_places.count(id)) throw CompositionError("reserved id '" + id + "' in use");
        for (const auto& [c, wf] : wc.nets)
            if (wf.net().has_node(id)) throw CompositionError("reserved id '" + id + "' in use");
    }
    if (auto problems = check_pattern(cp, wc); !problems.empty()) {
        std::string msg = "invalid collaboration pattern:";
        for (const auto& p : problems) msg += " " + p + ";";
        throw CompositionError(msg);
    }

    // Renaming: every fusion member maps to its representative.
    std::map<std::string, std::string> rename;
    for (const auto& f : cp.fusions)
        for (const auto& t : f.members) rename[t] = f.representative;
    auto r = [&](const std::string& t) -> const std::string& {
        auto it = rename.find(t);
        return it == rename.end() ? t : it->second;
    };

    CollaborationPetriNet cpn;
    PetriNet& net = cpn.net;
    auto source = net.add_place(kSourceId);
    auto sink = net.add_place(kSinkId);
    for (const auto& [c, wf] : wc.nets)
        for (const auto& p : wf.net().places()) net.add_place(p);
    for (const auto& p : cp.async_places) net.add_place(p);

    auto start = net.add_transition(kStartId);
    auto end = net.add_transition(kEndId);
    cpn.provenance[kStartId];
    cpn.provenance[kEndId];
    for (const auto& [c, wf] : wc.nets) {
        for (const auto& t : wf.net().transitions()) {
            const auto& id = r(t.id);
            if (!net.find_transition(id)) net.add_transition(id, t.label);
            auto& prov = cpn.provenance[id];
            prov.concepts.insert(c);
            prov.fused.insert(t.id);
        }
    }

    net.add_input_arc(source, start);
    net.add_output_arc(end, sink);
    for (const auto& [c, wf] : wc.nets) {
        const auto& member = wf.net();
        net.add_output_arc(start, net.place(member.place_id(wf.source())));
        net.add_input_arc(net.place(member.place_id(wf.sink())), end);
        for (PetriNet::Index t = 0; t < member.transition_count(); ++t) {
            auto target = net.transition_index(r(member.transition(t).id));
            for (auto p : member.preset(t)) net.add_input_arc(net.place(member.place_id(p)), target);
            for (auto p : member.postset(t)) net.add_output_arc(target, net.place(member.place_id(p)));
        }
    }
    for (const auto& ch : cp.channels) {
        auto place = net.place(ch.place);
        for (const auto& t : ch.senders) {
            const auto& id = r(t);
            net.add_output_arc(net.transition_index(id), place);
            (ch.kind == ChannelKind::resource ? cpn.provenance[id].resources : cpn.provenance[id].sends).insert(ch.type);
        }
        for (const auto& t : ch.receivers) {
            const auto& id = r(t);
            net.add_input_arc(place, net.transition_index(id));
            if (ch.kind == ChannelKind::message) cpn.provenance[id].receives.insert(ch.type);
        }
    }

    cpn.initial = Marking(net.place_count());
    cpn.final = Marking(net.place_count());
    cpn.initial.tokens[source] = 1;
    cpn.final.tokens[sink] = 1;
    for (const auto& p : cp.resource_places) {
        auto idx = net.place(p);
        cpn.initial.tokens[idx] = cp.allocation.at(p);
        cpn.final.tokens[idx] = cp.allocation.at(p);
        cpn.resource_places.insert(p);
    }
    return cpn;
}

DiscoveryResult discover_cpn(const EventLog& log, const DiscoveryFn& disc, const DiscoveryOptions& options) {
    auto report = validate(log);
    if (!report.undefined_activity.empty()) {
        const auto& e = report.undefined_activity.front();
        throw DiscoveryError("case " + e.case_id + ", event " + std::to_string(e.position) +
                             ": activity undefined (" + std::to_string(report.undefined_activity.size()) +
                             " events violate R1)");
    }
    if (!report.empty_concepts.empty()) {
        const auto& e = report.empty_concepts.front();
        throw DiscoveryError("case " + e.case_id + ", event " + std::to_string(e.position) + " ('" + e.activity +
                             "') records no concept; per-concept projection is impossible");
    }

    DiscoveryResult result;
    auto& rep = result.report;
    rep.info = extract_collab_info(log);

    std::vector<std::pair<std::string, WorkflowNet>> nets;
    for (const auto& c : rep.info.concepts) {
        EventLog projected = project(log, c);
        ConceptSummary summary{c, 0, 0, 0, 0};
        if (!options.keep_empty_traces) {
            EventLog kept;
            for (const auto& entry : projected.entries())
                if (!entry.trace.events.empty()) kept.add(entry.trace, entry.multiplicity);
            projected = std::move(kept);
        }
        for (const auto& entry : projected.entries()) {
            summary.traces += entry.multiplicity;
            if (entry.trace.events.empty()) summary.empty_traces += entry.multiplicity;
        }
        auto wf = [&] {
            try {
                return disc(projected);
            } catch (const DiscoveryError& err) {
                throw DiscoveryError("concept '" + c + "': " + err.what());
            }
        }();
        auto check = check_workflow_net(wf.net());
        if (!check.ok) throw DiscoveryError("concept '" + c + "': discovered net is not a workflow net");
        summary.places = wf.net().place_count();
        summary.transitions = wf.net().transition_count();
        rep.concepts.push_back(summary);
        nets.emplace_back(c, std::move(wf));
    }

    result.collection = build_workflow_collection(std::move(nets));
    rep.pattern = cdisc(result.collection, rep.info, log);
    rep.types = classify_types(rep.pattern, result.collection);
    rep.warnings = rep.pattern.warnings;
    result.cpn = compose(result.collection, rep.pattern);
    return result;
}

}  // namespace cm
