#include "collabminer/generator.hpp"

#include <random>

#include "collabminer/error.hpp"

namespace cm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

const Timestamp kBase = std::chrono::sys_days{std::chrono::year{2020} / 1 / 1};

}  // namespace

EventLog playout(const CollaborationPetriNet& cpn, const PlayoutConfig& config) {
    if (config.trace_count == 0 || config.max_steps == 0) throw Error("playout: trace_count and max_steps must be >= 1");
    const auto& net = cpn.net;
    Marking final = cpn.final;
    final.tokens.resize(net.place_count(), 0);
    static const Provenance kNone;

    EventLog log;
    for (std::size_t k = 0; k < config.trace_count; ++k) {
        std::mt19937_64 rng(splitmix64(config.seed ^ splitmix64(k)));
        const std::string case_id = "c" + std::to_string(k);
        bool done = false;
        for (std::size_t attempt = 0; attempt <= config.max_retries && !done; ++attempt) {
            Trace trace;
            trace.case_id = case_id;
            Marking m = cpn.initial;
            m.tokens.resize(net.place_count(), 0);
            std::size_t steps = 0;
            while (!(m == final) && steps < config.max_steps) {
                auto enabled = enabled_transitions(net, m);
                if (enabled.empty()) break;
                std::uniform_int_distribution<std::size_t> pick(0, enabled.size() - 1);
                auto t = enabled[pick(rng)];
                fire_in_place(net, m, t);
                ++steps;
                const auto& tr = net.transition(t);
                if (!tr.label) continue;
                auto it = cpn.provenance.find(tr.id);
                const Provenance& prov = it == cpn.provenance.end() ? kNone : it->second;
                Event e;
                e.activity = *tr.label;
                e.timestamp = kBase + std::chrono::seconds(trace.events.size());
                e.concepts = prov.concepts;
                e.sends = prov.sends;
                e.receives = prov.receives;
                e.resources = prov.resources;
                e.case_id = case_id;
                trace.events.push_back(std::move(e));
            }
            if (m == final || config.stop_policy == StopPolicy::max_steps) {
                log.add(std::move(trace));
                done = true;
            }
        }
        if (!done)
            throw Error("playout: trace " + case_id + " did not reach the final marking after " +
                        std::to_string(config.max_retries + 1) + " attempts");
    }
    return log;
}

}  // namespace cm
