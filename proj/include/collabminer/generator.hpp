#pragma once

#include <cstddef>
#include <cstdint>

#include "collabminer/composer.hpp"
#include "collabminer/event_log.hpp"

namespace cm {

enum class StopPolicy {
    at_final_marking,  // only traces ending in the final marking are kept
    max_steps,         // a trace also ends on deadlock or after max_steps firings
};

struct PlayoutConfig {
    std::size_t trace_count = 100;
    std::size_t max_steps = 1000;
    std::uint64_t seed = 42;
    StopPolicy stop_policy = StopPolicy::at_final_marking;
    std::size_t max_retries = 100;  // per trace, at_final_marking only
};

/// Simulates `cpn` by firing uniformly among enabled transitions. Each
/// labelled firing becomes an event annotated from the transition's
/// provenance; timestamps advance one second per event. Trace k uses a seed
/// derived from (seed, k) and is named `c<k>`.
/// Throws Error if a trace fails to reach the final marking after
/// `max_retries` attempts under StopPolicy::at_final_marking.
EventLog playout(const CollaborationPetriNet& cpn, const PlayoutConfig& config);

}  // namespace cm
