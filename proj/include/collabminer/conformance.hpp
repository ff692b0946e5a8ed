#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "collabminer/event_log.hpp"
#include "collabminer/petri.hpp"

namespace cm {

struct TokenCounts {
    std::uint64_t produced = 0;
    std::uint64_t consumed = 0;
    std::uint64_t missing = 0;
    std::uint64_t remaining = 0;
};

struct TraceReplay {
    TokenCounts counts;
    bool fits = false;  // replayed to the final marking without missing or remaining tokens
};

struct ReplayOptions {
    /// States explored by the exact search for a perfectly fitting firing
    /// sequence before falling back to heuristic token replay.
    std::size_t search_budget = 200000;
    /// States explored per shortest-tau-path lookup in the heuristic replay.
    std::size_t tau_budget = 5000;
};

struct FitnessResult {
    double fitness = 1.0;
    TokenCounts totals;           // weighted by multiplicity
    std::size_t fitting_traces = 0;  // with multiplicity
    std::size_t traces = 0;          // with multiplicity
};

/// Replays one label sequence from the initial marking. First searches for a
/// firing sequence (silent steps allowed) that ends exactly in the final
/// marking; if none is found, falls back to token replay that fires the
/// shortest silent path enabling each label and inserts missing tokens.
TraceReplay replay_trace(const AcceptingNet& model, const std::vector<std::string>& labels,
                         const ReplayOptions& options = {});

/// f = 1/2 (1 - missing/consumed) + 1/2 (1 - remaining/produced), summed over
/// all traces with multiplicity. Labels unknown to the net count as one
/// missing and one consumed token each.
FitnessResult token_replay(const AcceptingNet& model, const EventLog& log, const ReplayOptions& options = {});
inline double replay_fitness(const AcceptingNet& model, const EventLog& log) { return token_replay(model, log).fitness; }

/// Minimal alignment cost of `labels` (log and visible model moves cost 1,
/// synchronous and silent moves 0). nullopt when `cap` states are exhausted
/// or no alignment exists.
std::optional<std::uint64_t> alignment_cost(const AcceptingNet& model, const std::vector<std::string>& labels,
                                            std::size_t cap);

struct AlignmentResult {
    std::optional<double> fitness;  // nullopt: unknown (cap reached or final marking unreachable)
    std::uint64_t cost = 0;
    std::uint64_t worst_case = 0;
};

/// 1 - sum(cost) / sum(|trace| + cheapest model run), weighted by multiplicity.
AlignmentResult alignment_fitness(const AcceptingNet& model, const EventLog& log, std::size_t cap);

struct PrecisionOptions {
    std::size_t state_cap = 20000;  // markings tracked per log prefix
};

struct PrecisionResult {
    double precision = 1.0;
    std::uint64_t escaping = 0;  // weighted
    std::uint64_t enabled = 0;   // weighted
    bool log_fits = true;        // every prefix was replayable
    bool approximated = false;   // a prefix hit the state cap
};

/// Escaping-edges precision over the prefix tree of the log: at every prefix,
/// compares the visible labels the model allows next with the labels observed
/// next in the log.
PrecisionResult escaping_edges_precision(const AcceptingNet& model, const EventLog& log,
                                         const PrecisionOptions& options = {});

enum class Reachability { yes, no, unknown };
std::string to_string(Reachability r);

/// Breadth-first search for the final marking, at most `cap` states.
Reachability final_marking_reachable(const AcceptingNet& model, std::size_t cap);

struct ConformanceResult {
    double fitness = 0;
    double precision = 0;
    std::size_t size = 0;  // |P| + |T|
    Reachability final_reachable = Reachability::unknown;
    bool precision_reliable = true;  // fitness was 1.0 and no state cap hit
};

ConformanceResult check_conformance(const AcceptingNet& model, const EventLog& log, std::size_t cap);

}  // namespace cm
