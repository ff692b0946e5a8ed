#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "collabminer/event_log.hpp"
#include "collabminer/petri.hpp"

namespace cm {

/// Block-structured process model. Leaves carry an activity label or tau;
/// loop(do, redo_1, ..., redo_n) executes `do`, then optionally one redo
/// child followed by `do` again, any number of times.
struct ProcessTree {
    enum class Op { leaf, xor_choice, sequence, parallel, loop };

    Op op = Op::leaf;
    std::optional<std::string> label;  // leaves only; nullopt is tau
    std::vector<ProcessTree> children;

    static ProcessTree activity(std::string label) { return {Op::leaf, std::move(label), {}}; }
    static ProcessTree tau() { return {Op::leaf, std::nullopt, {}}; }
    static ProcessTree make(Op op, std::vector<ProcessTree> children) { return {op, std::nullopt, std::move(children)}; }

    /// Operator arity and leaf-shape rules hold throughout the tree.
    bool valid() const;
    /// `seq(a, xor(tau, b))`
    std::string to_string() const;

    bool operator==(const ProcessTree&) const = default;
};

struct DirectlyFollowsGraph {
    std::vector<std::string> activities;  // sorted
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> edges;
    std::set<std::size_t> start;
    std::set<std::size_t> end;
};

DirectlyFollowsGraph directly_follows(const EventLog& log);

/// Basic (noise-free) Inductive Miner. Every trace of `log` fits the result.
ProcessTree discover_tree(const EventLog& log);

/// loop(tau, a_1, ..., a_n): accepts every sequence over `activities`.
ProcessTree flower_tree(const IdSet& activities);

/// Structural translation; the result is always a WF-net.
WorkflowNet tree_to_wfnet(const ProcessTree& tree);

/// A process discovery technique producing workflow nets.
using DiscoveryFn = std::function<WorkflowNet(const EventLog&)>;

WorkflowNet inductive_miner(const EventLog& log);
WorkflowNet flower_miner(const EventLog& log);

}  // namespace cm
