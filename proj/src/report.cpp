#include "collabminer/report.hpp"

namespace cm {

using nlohmann::json;

namespace {

json refs(const std::vector<EventRef>& events) {
    json out = json::array();
    for (const auto& e : events)
        out.push_back({{"case", e.case_id}, {"position", e.position}, {"activity", e.activity}});
    return out;
}

json map_of_sets(const std::map<std::string, IdSet>& m) {
    json out = json::object();
    for (const auto& [k, v] : m) out[k] = v;
    return out;
}

}  // namespace

json to_json(const ValidationReport& report, const EventLog& log) {
    const auto& entries = log.entries();
    auto cases = [&](const std::vector<std::size_t>& idx) {
        json out = json::array();
        for (auto i : idx) out.push_back(entries.at(i).trace.case_id);
        return out;
    };
    json traces = json::array();
    for (const auto& t : report.traces) {
        traces.push_back({{"case", t.case_id},
                          {"multiplicity", entries.at(t.entry).multiplicity},
                          {"synchronous", t.synchronous},
                          {"shared_resource", t.shared_resource},
                          {"shared_message", t.shared_message},
                          {"ok", t.ok()}});
    }
    return {{"traces", log.trace_count()},
            {"variants", log.variant_count()},
            {"events", log.event_count()},
            {"r1_ok", report.r1_ok()},
            {"r2_ok", report.r2_ok()},
            {"undefined_activity", refs(report.undefined_activity)},
            {"empty_concepts", refs(report.empty_concepts)},
            {"r2_flagged", cases(report.r2_flagged())},
            {"r2_single_concept_only", cases(report.r2_literal_only())},
            {"collaboration", traces}};
}

json to_json(const CollabInfo& info) {
    return {{"concepts", info.concepts},
            {"message_types", info.message_types},
            {"resource_types", info.resource_types},
            {"activities", info.activities},
            {"senders", map_of_sets(info.senders)},
            {"receivers", map_of_sets(info.receivers)},
            {"sharers", map_of_sets(info.sharers)}};
}

json to_json(const CollaborationPattern& pattern) {
    json channels = json::array();
    for (const auto& c : pattern.channels) {
        channels.push_back({{"place", c.place},
                            {"type", c.type},
                            {"kind", c.kind == ChannelKind::resource ? "resource" : "message"},
                            {"senders", c.senders},
                            {"receivers", c.receivers}});
    }
    json fusions = json::array();
    for (const auto& f : pattern.fusions)
        fusions.push_back({{"representative", f.representative}, {"label", f.label}, {"members", f.members}});
    json allocation = json::object();
    for (const auto& [p, n] : pattern.allocation) allocation[p] = n;
    return {{"channels", channels},
            {"fusions", fusions},
            {"resource_allocation", allocation},
            {"warnings", pattern.warnings}};
}

json to_json(const DiscoveryReport& report) {
    json concepts = json::array();
    for (const auto& c : report.concepts) {
        concepts.push_back({{"concept", c.concept_id},
                            {"places", c.places},
                            {"transitions", c.transitions},
                            {"traces", c.traces},
                            {"empty_traces", c.empty_traces}});
    }
    json types = json::array();
    for (auto t : report.types) types.push_back(to_string(t));
    return {{"info", to_json(report.info)},
            {"pattern", to_json(report.pattern)},
            {"concepts", concepts},
            {"collaboration_types", types},
            {"warnings", report.warnings}};
}

json to_json(const ConformanceResult& result) {
    return {{"fitness", result.fitness},
            {"precision", result.precision},
            {"precision_reliable", result.precision_reliable},
            {"size", result.size},
            {"final_reachable", to_string(result.final_reachable)}};
}

json stats_json(const EventLog& log, const CollaborationPattern& pattern) {
    std::size_t messages = 0, resources = 0;
    for (const auto& c : pattern.channels) (c.kind == ChannelKind::resource ? resources : messages)++;
    return {{"log", {{"traces", log.trace_count()}, {"variants", log.variant_count()}, {"events", log.event_count()}}},
            {"info", to_json(extract_collab_info(log))},
            {"pattern",
             {{"message_channels", messages},
              {"resource_channels", resources},
              {"fusions", pattern.fusions.size()},
              {"warnings", pattern.warnings}}}};
}

}  // namespace cm
