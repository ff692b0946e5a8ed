#include "collabminer/conformance.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace cm {

namespace {

using Index = PetriNet::Index;
using MarkingSet = std::unordered_set<Marking, MarkingHash>;

struct ModelIndex {
    std::map<std::string, std::vector<Index>> by_label;  // transitions in id order
    std::vector<Index> silent;                           // id order
    std::vector<Index> visible;                          // id order

    explicit ModelIndex(const PetriNet& net) {
        for (auto t : net.transitions_by_id()) {
            const auto& label = net.transition(t).label;
            if (label) {
                by_label[*label].push_back(t);
                visible.push_back(t);
            } else {
                silent.push_back(t);
            }
        }
    }

    const std::vector<Index>* find(const std::string& label) const {
        auto it = by_label.find(label);
        return it == by_label.end() ? nullptr : &it->second;
    }
};

Marking normalized(const PetriNet& net, Marking m) {
    m.tokens.resize(net.place_count(), 0);
    return m;
}

/// Shortest sequence of silent firings from `m` to a marking satisfying `goal`.
template <class Goal>
std::optional<std::vector<Index>> shortest_silent_path(const PetriNet& net, const ModelIndex& idx, const Marking& m,
                                                       Goal goal, std::size_t budget) {
    if (goal(m)) return std::vector<Index>{};
    struct Node {
        Marking marking;
        std::size_t parent;
        Index via;
    };
    std::vector<Node> nodes{{m, 0, 0}};
    MarkingSet seen{m};
    for (std::size_t cur = 0; cur < nodes.size() && nodes.size() < budget; ++cur) {
        for (auto t : idx.silent) {
            if (!is_enabled(net, nodes[cur].marking, t)) continue;
            Marking next = nodes[cur].marking;
            fire_in_place(net, next, t);
            if (!seen.insert(next).second) continue;
            nodes.push_back({std::move(next), cur, t});
            if (goal(nodes.back().marking)) {
                std::vector<Index> path;
                for (std::size_t n = nodes.size() - 1; n != 0; n = nodes[n].parent) path.push_back(nodes[n].via);
                std::reverse(path.begin(), path.end());
                return path;
            }
        }
    }
    return std::nullopt;
}

/// Depth-first search for a firing sequence replaying `labels` exactly.
std::optional<std::vector<Index>> perfect_run(const AcceptingNet& model, const ModelIndex& idx,
                                              const std::vector<std::string>& labels, std::size_t budget) {
    const auto& net = model.net;
    const Marking final = normalized(net, model.final);
    struct Node {
        std::size_t pos;
        Marking marking;
        std::size_t parent;
        Index via;
    };
    std::vector<Node> nodes;
    std::vector<MarkingSet> seen(labels.size() + 1);
    std::vector<std::size_t> stack;

    nodes.push_back({0, normalized(net, model.initial), 0, 0});
    seen[0].insert(nodes[0].marking);
    stack.push_back(0);

    while (!stack.empty()) {
        auto cur = stack.back();
        stack.pop_back();
        const std::size_t pos = nodes[cur].pos;
        if (pos == labels.size() && nodes[cur].marking == final) {
            std::vector<Index> path;
            for (std::size_t n = cur; n != 0; n = nodes[n].parent) path.push_back(nodes[n].via);
            std::reverse(path.begin(), path.end());
            return path;
        }
        if (nodes.size() >= budget) return std::nullopt;

        auto push = [&](std::size_t next_pos, Index t) {
            Marking next = nodes[cur].marking;
            fire_in_place(net, next, t);
            if (!seen[next_pos].insert(next).second) return;
            nodes.push_back({next_pos, std::move(next), cur, t});
            stack.push_back(nodes.size() - 1);
        };
        // Silent moves are pushed first so that labelled moves are tried first.
        for (auto it = idx.silent.rbegin(); it != idx.silent.rend(); ++it)
            if (is_enabled(net, nodes[cur].marking, *it)) push(pos, *it);
        if (pos < labels.size()) {
            if (const auto* ts = idx.find(labels[pos]))
                for (auto it = ts->rbegin(); it != ts->rend(); ++it)
                    if (is_enabled(net, nodes[cur].marking, *it)) push(pos + 1, *it);
        }
    }
    return std::nullopt;
}

void count_firing(const PetriNet& net, Index t, TokenCounts& c) {
    c.consumed += net.preset(t).size();
    c.produced += net.postset(t).size();
}

TraceReplay heuristic_replay(const AcceptingNet& model, const ModelIndex& idx, const std::vector<std::string>& labels,
                             const ReplayOptions& options) {
    const auto& net = model.net;
    TraceReplay r;
    Marking m = normalized(net, model.initial);
    const Marking final = normalized(net, model.final);
    r.counts.produced = m.total();

    auto fire_counted = [&](Index t) {
        for (auto p : net.preset(t)) {
            if (m.tokens[p] == 0) {
                ++r.counts.missing;
                ++m.tokens[p];
            }
        }
        count_firing(net, t, r.counts);
        fire_in_place(net, m, t);
    };

    for (const auto& label : labels) {
        const auto* ts = idx.find(label);
        if (!ts) {
            ++r.counts.missing;
            ++r.counts.consumed;
            continue;
        }
        auto enabled_one = [&](const Marking& x) {
            return std::any_of(ts->begin(), ts->end(), [&](Index t) { return is_enabled(net, x, t); });
        };
        if (auto path = shortest_silent_path(net, idx, m, enabled_one, options.tau_budget)) {
            for (auto t : *path) fire_counted(t);
            for (auto t : *ts)
                if (is_enabled(net, m, t)) {
                    fire_counted(t);
                    break;
                }
            continue;
        }
        // Force the transition with the fewest missing tokens.
        Index best = ts->front();
        std::size_t best_missing = SIZE_MAX;
        for (auto t : *ts) {
            std::size_t miss = 0;
            for (auto p : net.preset(t)) miss += m.tokens[p] == 0;
            if (miss < best_missing) {
                best_missing = miss;
                best = t;
            }
        }
        fire_counted(best);
    }

    if (auto path = shortest_silent_path(net, idx, m, [&](const Marking& x) { return x == final; }, options.tau_budget))
        for (auto t : *path) fire_counted(t);

    r.counts.consumed += final.total();
    for (std::size_t p = 0; p < m.tokens.size(); ++p) {
        if (m.tokens[p] < final.tokens[p]) r.counts.missing += final.tokens[p] - m.tokens[p];
        if (m.tokens[p] > final.tokens[p]) r.counts.remaining += m.tokens[p] - final.tokens[p];
    }
    r.fits = r.counts.missing == 0 && r.counts.remaining == 0;
    return r;
}

std::vector<std::string> labels_of(const Trace& trace) {
    std::vector<std::string> out;
    out.reserve(trace.events.size());
    for (const auto& e : trace.events) out.push_back(e.activity);
    return out;
}

TraceReplay replay_with_index(const AcceptingNet& model, const ModelIndex& idx, const std::vector<std::string>& labels,
                              const ReplayOptions& options) {
    if (auto run = perfect_run(model, idx, labels, options.search_budget)) {
        TraceReplay r;
        r.fits = true;
        r.counts.produced = model.initial.total();
        for (auto t : *run) count_firing(model.net, t, r.counts);
        r.counts.consumed += model.final.total();
        return r;
    }
    return heuristic_replay(model, idx, labels, options);
}

}  // namespace

TraceReplay replay_trace(const AcceptingNet& model, const std::vector<std::string>& labels,
                         const ReplayOptions& options) {
    ModelIndex idx(model.net);
    return replay_with_index(model, idx, labels, options);
}

FitnessResult token_replay(const AcceptingNet& model, const EventLog& log, const ReplayOptions& options) {
    ModelIndex idx(model.net);
    FitnessResult result;
    for (const auto& entry : log.entries()) {
        auto r = replay_with_index(model, idx, labels_of(entry.trace), options);
        const auto w = entry.multiplicity;
        result.totals.produced += w * r.counts.produced;
        result.totals.consumed += w * r.counts.consumed;
        result.totals.missing += w * r.counts.missing;
        result.totals.remaining += w * r.counts.remaining;
        result.traces += w;
        if (r.fits) result.fitting_traces += w;
    }
    const auto& t = result.totals;
    double missing_part = t.consumed ? static_cast<double>(t.missing) / static_cast<double>(t.consumed) : 0.0;
    double remaining_part = t.produced ? static_cast<double>(t.remaining) / static_cast<double>(t.produced) : 0.0;
    result.fitness = 0.5 * (1.0 - missing_part) + 0.5 * (1.0 - remaining_part);
    if (t.missing == 0 && t.remaining == 0) result.fitness = 1.0;
    return result;
}

// --- alignments ------------------------------------------------------------------

std::optional<std::uint64_t> alignment_cost(const AcceptingNet& model, const std::vector<std::string>& labels,
                                            std::size_t cap) {
    const auto& net = model.net;
    ModelIndex idx(net);
    const Marking final = normalized(net, model.final);

    // 0-1 breadth-first search over (trace position, marking).
    std::vector<std::unordered_map<Marking, std::uint64_t, MarkingHash>> dist(labels.size() + 1);
    std::vector<std::unordered_set<Marking, MarkingHash>> done(labels.size() + 1);
    struct Item {
        std::size_t pos;
        Marking marking;
        std::uint64_t cost;
    };
    std::deque<Item> queue;
    Marking start = normalized(net, model.initial);
    dist[0][start] = 0;
    queue.push_back({0, std::move(start), 0});
    std::size_t expanded = 0;

    auto relax = [&](std::size_t pos, Marking&& m, std::uint64_t cost, bool zero) {
        auto [it, inserted] = dist[pos].try_emplace(m, cost);
        if (!inserted) {
            if (it->second <= cost) return;
            it->second = cost;
        }
        if (zero)
            queue.push_front({pos, std::move(m), cost});
        else
            queue.push_back({pos, std::move(m), cost});
    };

    while (!queue.empty()) {
        Item cur = std::move(queue.front());
        queue.pop_front();
        if (dist[cur.pos][cur.marking] < cur.cost || done[cur.pos].count(cur.marking)) continue;
        done[cur.pos].insert(cur.marking);
        if (cur.pos == labels.size() && cur.marking == final) return cur.cost;
        if (++expanded > cap) return std::nullopt;

        if (cur.pos < labels.size()) {
            if (const auto* ts = idx.find(labels[cur.pos])) {
                for (auto t : *ts) {
                    if (!is_enabled(net, cur.marking, t)) continue;
                    Marking next = cur.marking;
                    fire_in_place(net, next, t);
                    relax(cur.pos + 1, std::move(next), cur.cost, true);
                }
            }
        }
        for (auto t : idx.silent) {
            if (!is_enabled(net, cur.marking, t)) continue;
            Marking next = cur.marking;
            fire_in_place(net, next, t);
            relax(cur.pos, std::move(next), cur.cost, true);
        }
        if (cur.pos < labels.size()) relax(cur.pos + 1, Marking(cur.marking), cur.cost + 1, false);
        for (auto t : idx.visible) {
            if (!is_enabled(net, cur.marking, t)) continue;
            Marking next = cur.marking;
            fire_in_place(net, next, t);
            relax(cur.pos, std::move(next), cur.cost + 1, false);
        }
    }
    return std::nullopt;
}

AlignmentResult alignment_fitness(const AcceptingNet& model, const EventLog& log, std::size_t cap) {
    AlignmentResult result;
    auto shortest = alignment_cost(model, {}, cap);
    if (!shortest) return result;
    for (const auto& entry : log.entries()) {
        auto labels = labels_of(entry.trace);
        auto cost = alignment_cost(model, labels, cap);
        if (!cost) return AlignmentResult{};
        result.cost += entry.multiplicity * *cost;
        result.worst_case += entry.multiplicity * (labels.size() + *shortest);
    }
    result.fitness = result.worst_case ? 1.0 - static_cast<double>(result.cost) / static_cast<double>(result.worst_case)
                                       : 1.0;
    return result;
}

// --- precision -------------------------------------------------------------------

namespace {

struct PrefixNode {
    std::map<std::string, std::size_t> children;
    std::uint64_t weight = 0;
};

class PrecisionWalker {
public:
    PrecisionWalker(const AcceptingNet& model, const std::vector<PrefixNode>& trie, const PrecisionOptions& options)
        : net_(model.net), idx_(model.net), trie_(trie), options_(options) {}

    PrecisionResult run(const Marking& initial) {
        std::vector<Marking> start{normalized(net_, initial)};
        visit(0, std::move(start));
        if (result_.enabled)
            result_.precision = 1.0 - static_cast<double>(result_.escaping) / static_cast<double>(result_.enabled);
        return result_;
    }

private:
    std::vector<Marking> closure(std::vector<Marking> set) {
        MarkingSet seen(set.begin(), set.end());
        for (std::size_t i = 0; i < set.size(); ++i) {
            for (auto t : idx_.silent) {
                if (!is_enabled(net_, set[i], t)) continue;
                Marking next = set[i];
                fire_in_place(net_, next, t);
                if (!seen.insert(next).second) continue;
                if (set.size() >= options_.state_cap) {
                    result_.approximated = true;
                    continue;
                }
                set.push_back(std::move(next));
            }
        }
        return set;
    }

    void visit(std::size_t node, std::vector<Marking> states) {
        states = closure(std::move(states));
        const auto& n = trie_[node];

        std::set<std::string> allowed;
        for (const auto& m : states)
            for (auto t : idx_.visible)
                if (is_enabled(net_, m, t)) allowed.insert(*net_.transition(t).label);
        std::uint64_t escaping = 0;
        for (const auto& label : allowed)
            if (!n.children.count(label)) ++escaping;
        result_.enabled += n.weight * allowed.size();
        result_.escaping += n.weight * escaping;

        for (const auto& [label, child] : n.children) {
            std::vector<Marking> next;
            MarkingSet seen;
            if (const auto* ts = idx_.find(label)) {
                for (const auto& m : states)
                    for (auto t : *ts) {
                        if (!is_enabled(net_, m, t)) continue;
                        Marking x = m;
                        fire_in_place(net_, x, t);
                        if (seen.insert(x).second) next.push_back(std::move(x));
                    }
            }
            if (next.empty()) {
                result_.log_fits = false;
                continue;
            }
            visit(child, std::move(next));
        }
    }

    const PetriNet& net_;
    ModelIndex idx_;
    const std::vector<PrefixNode>& trie_;
    PrecisionOptions options_;
    PrecisionResult result_;
};

}  // namespace

PrecisionResult escaping_edges_precision(const AcceptingNet& model, const EventLog& log,
                                         const PrecisionOptions& options) {
    std::vector<PrefixNode> trie(1);
    for (const auto& entry : log.entries()) {
        std::size_t node = 0;
        trie[0].weight += entry.multiplicity;
        for (const auto& e : entry.trace.events) {
            auto it = trie[node].children.find(e.activity);
            std::size_t next;
            if (it == trie[node].children.end()) {
                next = trie.size();
                trie[node].children.emplace(e.activity, next);
                trie.emplace_back();
            } else {
                next = it->second;
            }
            node = next;
            trie[node].weight += entry.multiplicity;
        }
    }
    if (log.empty()) return {};
    return PrecisionWalker(model, trie, options).run(model.initial);
}

// --- reachability ----------------------------------------------------------------

std::string to_string(Reachability r) {
    switch (r) {
        case Reachability::yes: return "yes";
        case Reachability::no: return "no";
        case Reachability::unknown: return "unknown";
    }
    return "unknown";
}

Reachability final_marking_reachable(const AcceptingNet& model, std::size_t cap) {
    const auto& net = model.net;
    const Marking final = normalized(net, model.final);
    std::vector<Marking> states{normalized(net, model.initial)};
    MarkingSet seen{states.front()};
    if (states.front() == final) return Reachability::yes;
    const auto order = net.transitions_by_id();
    bool truncated = false;
    for (std::size_t cur = 0; cur < states.size(); ++cur) {
        for (auto t : order) {
            if (!is_enabled(net, states[cur], t)) continue;
            Marking next = states[cur];
            fire_in_place(net, next, t);
            if (next == final) return Reachability::yes;
            if (seen.count(next)) continue;
            if (states.size() >= cap) {
                truncated = true;
                continue;
            }
            seen.insert(next);
            states.push_back(std::move(next));
        }
    }
    return truncated ? Reachability::unknown : Reachability::no;
}

ConformanceResult check_conformance(const AcceptingNet& model, const EventLog& log, std::size_t cap) {
    ConformanceResult r;
    r.fitness = token_replay(model, log).fitness;
    auto precision = escaping_edges_precision(model, log);
    r.precision = precision.precision;
    r.precision_reliable = r.fitness == 1.0 && precision.log_fits && !precision.approximated;
    r.size = model.net.size();
    r.final_reachable = final_marking_reachable(model, cap);
    return r;
}

}  // namespace cm
