#include "collabminer/petri.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <unordered_map>

#include "collabminer/error.hpp"

namespace cm {

namespace {

void insert_sorted(std::vector<std::size_t>& v, std::size_t x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
}

bool erase_sorted(std::vector<std::size_t>& v, std::size_t x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) return false;
    v.erase(it);
    return true;
}

}  // namespace

void PetriNet::check_fresh(const std::string& id) const {
    if (place_index_.count(id) || transition_index_.count(id)) throw Error("duplicate node id '" + id + "'");
}

PetriNet::Index PetriNet::add_place(std::string id) {
    check_fresh(id);
    Index p = places_.size();
    place_index_.emplace(id, p);
    places_.push_back(std::move(id));
    consumers_.emplace_back();
    producers_.emplace_back();
    return p;
}

PetriNet::Index PetriNet::add_transition(std::string id, std::optional<std::string> label) {
    check_fresh(id);
    Index t = transitions_.size();
    transition_index_.emplace(id, t);
    transitions_.push_back({std::move(id), std::move(label)});
    pre_.emplace_back();
    post_.emplace_back();
    return t;
}

void PetriNet::add_input_arc(Index p, Index t) {
    insert_sorted(pre_.at(t), p);
    insert_sorted(consumers_.at(p), t);
}

void PetriNet::add_output_arc(Index t, Index p) {
    insert_sorted(post_.at(t), p);
    insert_sorted(producers_.at(p), t);
}

void PetriNet::add_arc(std::string_view from, std::string_view to) {
    if (auto p = find_place(from)) {
        auto t = find_transition(to);
        if (!t) throw Error("arc " + std::string(from) + " -> " + std::string(to) + ": target is not a transition");
        add_input_arc(*p, *t);
    } else if (auto t = find_transition(from)) {
        auto q = find_place(to);
        if (!q) throw Error("arc " + std::string(from) + " -> " + std::string(to) + ": target is not a place");
        add_output_arc(*t, *q);
    } else {
        throw Error("arc source '" + std::string(from) + "' does not exist");
    }
}

bool PetriNet::remove_arc(std::string_view from, std::string_view to) {
    if (auto p = find_place(from)) {
        if (auto t = find_transition(to)) {
            bool had = erase_sorted(pre_[*t], *p);
            erase_sorted(consumers_[*p], *t);
            return had;
        }
    } else if (auto t = find_transition(from)) {
        if (auto q = find_place(to)) {
            bool had = erase_sorted(post_[*t], *q);
            erase_sorted(producers_[*q], *t);
            return had;
        }
    }
    return false;
}

std::size_t PetriNet::arc_count() const noexcept {
    std::size_t n = 0;
    for (std::size_t t = 0; t < transitions_.size(); ++t) n += pre_[t].size() + post_[t].size();
    return n;
}

std::optional<PetriNet::Index> PetriNet::find_place(std::string_view id) const {
    auto it = place_index_.find(std::string(id));
    if (it == place_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<PetriNet::Index> PetriNet::find_transition(std::string_view id) const {
    auto it = transition_index_.find(std::string(id));
    if (it == transition_index_.end()) return std::nullopt;
    return it->second;
}

PetriNet::Index PetriNet::place(std::string_view id) const {
    if (auto p = find_place(id)) return *p;
    throw Error("unknown place '" + std::string(id) + "'");
}

PetriNet::Index PetriNet::transition_index(std::string_view id) const {
    if (auto t = find_transition(id)) return *t;
    throw Error("unknown transition '" + std::string(id) + "'");
}

bool PetriNet::has_node(std::string_view id) const { return find_place(id) || find_transition(id); }

std::vector<PetriNet::Index> PetriNet::transitions_by_id() const {
    std::vector<Index> order(transitions_.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(),
              [&](Index a, Index b) { return transitions_[a].id < transitions_[b].id; });
    return order;
}

// --- markings ----------------------------------------------------------------

std::uint64_t Marking::total() const noexcept {
    return std::accumulate(tokens.begin(), tokens.end(), std::uint64_t{0});
}

std::size_t MarkingHash::operator()(const Marking& m) const noexcept {
    std::uint64_t h = 1469598103934665603ull;
    for (auto c : m.tokens) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h);
}

Marking make_marking(const PetriNet& net, const std::vector<std::pair<std::string, std::uint32_t>>& counts) {
    Marking m(net.place_count());
    for (const auto& [id, n] : counts) m.tokens[net.place(id)] += n;
    return m;
}

std::vector<std::pair<std::string, std::uint32_t>> marking_pairs(const PetriNet& net, const Marking& m) {
    std::vector<std::pair<std::string, std::uint32_t>> out;
    for (std::size_t p = 0; p < m.tokens.size(); ++p)
        if (m.tokens[p]) out.emplace_back(net.place_id(p), m.tokens[p]);
    std::sort(out.begin(), out.end());
    return out;
}

std::string to_string(const PetriNet& net, const Marking& m) {
    std::string s = "[";
    bool first = true;
    for (const auto& [id, n] : marking_pairs(net, m)) {
        if (!first) s += ", ";
        first = false;
        s += id + ":" + std::to_string(n);
    }
    return s + "]";
}

// --- firing ------------------------------------------------------------------

bool is_enabled(const PetriNet& net, const Marking& m, PetriNet::Index t) {
    for (auto p : net.preset(t))
        if (m[p] == 0) return false;
    return true;
}

std::vector<PetriNet::Index> enabled_transitions(const PetriNet& net, const Marking& m) {
    std::vector<PetriNet::Index> out;
    for (PetriNet::Index t = 0; t < net.transition_count(); ++t)
        if (is_enabled(net, m, t)) out.push_back(t);
    return out;
}

void fire_in_place(const PetriNet& net, Marking& m, PetriNet::Index t) {
    if (m.tokens.size() < net.place_count()) m.tokens.resize(net.place_count(), 0);
    for (auto p : net.preset(t)) --m.tokens[p];
    for (auto p : net.postset(t)) ++m.tokens[p];
}

Marking fire(const PetriNet& net, const Marking& m, PetriNet::Index t) {
    std::string missing;
    for (auto p : net.preset(t)) {
        if (m[p] == 0) {
            if (!missing.empty()) missing += ", ";
            missing += net.place_id(p);
        }
    }
    if (!missing.empty())
        throw EnablingError("transition '" + net.transition(t).id + "' is not enabled; no token in: " + missing);
    Marking next = m;
    fire_in_place(net, next, t);
    return next;
}

// --- workflow nets -----------------------------------------------------------

WorkflowCheck check_workflow_net(const PetriNet& net) {
    WorkflowCheck check;
    std::vector<PetriNet::Index> sources, sinks;
    for (PetriNet::Index p = 0; p < net.place_count(); ++p) {
        if (net.producers(p).empty()) sources.push_back(p);
        if (net.consumers(p).empty()) sinks.push_back(p);
    }
    auto names = [&](const std::vector<PetriNet::Index>& ps) {
        std::string s;
        for (auto p : ps) s += (s.empty() ? "" : ", ") + net.place_id(p);
        return s;
    };
    if (sources.size() == 1)
        check.source = sources.front();
    else
        check.diagnostics.push_back(sources.empty() ? "no source place" : "multiple source places: " + names(sources));
    if (sinks.size() == 1)
        check.sink = sinks.front();
    else
        check.diagnostics.push_back(sinks.empty() ? "no sink place" : "multiple sink places: " + names(sinks));

    if (check.source && check.sink) {
        // Node ids: places [0, P), transitions [P, P + T).
        const std::size_t P = net.place_count(), N = net.size();
        auto search = [&](std::size_t start, bool forward) {
            std::vector<char> seen(N, 0);
            std::vector<std::size_t> stack{start};
            seen[start] = 1;
            while (!stack.empty()) {
                auto n = stack.back();
                stack.pop_back();
                auto visit = [&](std::size_t m) {
                    if (!seen[m]) {
                        seen[m] = 1;
                        stack.push_back(m);
                    }
                };
                if (n < P) {
                    for (auto t : forward ? net.consumers(n) : net.producers(n)) visit(P + t);
                } else {
                    for (auto p : forward ? net.postset(n - P) : net.preset(n - P)) visit(p);
                }
            }
            return seen;
        };
        auto from_source = search(*check.source, true);
        auto to_sink = search(*check.sink, false);
        for (std::size_t n = 0; n < N; ++n) {
            if (from_source[n] && to_sink[n]) continue;
            const std::string& id = n < P ? net.place_id(n) : net.transition(n - P).id;
            check.diagnostics.push_back("node '" + id + "' is not on a path from source to sink");
        }
    }
    check.ok = check.diagnostics.empty();
    return check;
}

WorkflowNet::WorkflowNet(PetriNet net) : net_(std::move(net)) {
    auto check = check_workflow_net(net_);
    if (!check.ok) {
        std::string msg = "not a workflow net:";
        for (const auto& d : check.diagnostics) msg += " " + d + ";";
        throw DiscoveryError(msg);
    }
    source_ = *check.source;
    sink_ = *check.sink;
}

AcceptingNet WorkflowNet::accepting() const {
    AcceptingNet a{net_, Marking(net_.place_count()), Marking(net_.place_count())};
    a.initial.tokens[source_] = 1;
    a.final.tokens[sink_] = 1;
    return a;
}

// --- reachability ------------------------------------------------------------

ReachabilityGraph reachability_graph(const PetriNet& net, const Marking& initial, std::size_t cap) {
    ReachabilityGraph g;
    if (cap == 0) {
        g.truncated = true;
        return g;
    }
    const auto order = net.transitions_by_id();
    std::unordered_map<Marking, std::size_t, MarkingHash> index;
    Marking start = initial;
    start.tokens.resize(net.place_count(), 0);
    index.emplace(start, 0);
    g.states.push_back(start);

    for (std::size_t cur = 0; cur < g.states.size(); ++cur) {
        for (auto t : order) {
            if (!is_enabled(net, g.states[cur], t)) continue;
            Marking next = g.states[cur];
            fire_in_place(net, next, t);
            auto it = index.find(next);
            if (it == index.end()) {
                if (g.states.size() >= cap) {
                    g.truncated = true;
                    continue;
                }
                it = index.emplace(next, g.states.size()).first;
                g.states.push_back(std::move(next));
            }
            g.edges.push_back({cur, it->second, t});
        }
    }
    return g;
}

}  // namespace cm
