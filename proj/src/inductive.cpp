#include "collabminer/inductive.hpp"

#include <algorithm>
#include <numeric>

namespace cm {

namespace {

using Acts = std::vector<int>;             // activity ids
using SimpleLog = std::map<Acts, std::size_t>;  // trace -> multiplicity

struct Alphabet {
    std::vector<std::string> names;  // sorted, id = position
};

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

/// DFG over the local activity set of a sublog. Positions index `acts`.
struct LocalDfg {
    Acts acts;
    std::vector<std::vector<char>> edge;
    std::vector<char> start, end;

    int pos(int activity) const {
        return static_cast<int>(std::lower_bound(acts.begin(), acts.end(), activity) - acts.begin());
    }
};

LocalDfg build_dfg(const SimpleLog& log) {
    LocalDfg g;
    std::set<int> seen;
    for (const auto& [trace, n] : log) seen.insert(trace.begin(), trace.end());
    g.acts.assign(seen.begin(), seen.end());
    const std::size_t k = g.acts.size();
    g.edge.assign(k, std::vector<char>(k, 0));
    g.start.assign(k, 0);
    g.end.assign(k, 0);
    for (const auto& [trace, n] : log) {
        if (trace.empty()) continue;
        g.start[g.pos(trace.front())] = 1;
        g.end[g.pos(trace.back())] = 1;
        for (std::size_t i = 0; i + 1 < trace.size(); ++i) g.edge[g.pos(trace[i])][g.pos(trace[i + 1])] = 1;
    }
    return g;
}

/// Groups of local positions, each sorted; groups ordered by smallest member.
using Partition = std::vector<std::vector<int>>;

Partition groups_of(UnionFind& uf, std::size_t k) {
    std::map<int, std::vector<int>> by_root;
    for (std::size_t i = 0; i < k; ++i) by_root[uf.find(static_cast<int>(i))].push_back(static_cast<int>(i));
    Partition out;
    for (auto& [root, members] : by_root) out.push_back(std::move(members));
    std::sort(out.begin(), out.end());
    return out;
}

Partition xor_cut(const LocalDfg& g) {
    const std::size_t k = g.acts.size();
    UnionFind uf(k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b)
            if (g.edge[a][b]) uf.unite(static_cast<int>(a), static_cast<int>(b));
    return groups_of(uf, k);
}

std::vector<std::vector<char>> reachability(const LocalDfg& g) {
    const std::size_t k = g.acts.size();
    std::vector<std::vector<char>> reach(k, std::vector<char>(k, 0));
    for (std::size_t s = 0; s < k; ++s) {
        std::vector<std::size_t> stack{s};
        while (!stack.empty()) {
            auto a = stack.back();
            stack.pop_back();
            for (std::size_t b = 0; b < k; ++b) {
                if (g.edge[a][b] && !reach[s][b]) {
                    reach[s][b] = 1;
                    stack.push_back(b);
                }
            }
        }
    }
    return reach;
}

/// Groups in execution order, or empty if no valid sequence cut exists.
Partition sequence_cut(const LocalDfg& g) {
    const std::size_t k = g.acts.size();
    auto reach = reachability(g);
    UnionFind uf(k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (reach[a][b] == reach[b][a]) uf.unite(static_cast<int>(a), static_cast<int>(b));
    auto groups = groups_of(uf, k);
    if (groups.size() < 2) return {};

    // Between two groups, reachability must be one-directional and uniform.
    const std::size_t n = groups.size();
    std::vector<std::vector<char>> before(n, std::vector<char>(n, 0));
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = x + 1; y < n; ++y) {
            bool fwd = true, bwd = true;
            for (int a : groups[x])
                for (int b : groups[y]) {
                    fwd = fwd && reach[a][b] && !reach[b][a];
                    bwd = bwd && reach[b][a] && !reach[a][b];
                }
            if (!fwd && !bwd) return {};
            before[x][y] = fwd;
            before[y][x] = bwd;
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rank = [&](std::size_t x) { return std::count(before[x].begin(), before[x].end(), 1); };
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return rank(x) > rank(y); });
    Partition out;
    for (auto x : order) out.push_back(groups[x]);
    return out;
}

Partition parallel_cut(const LocalDfg& g) {
    const std::size_t k = g.acts.size();
    UnionFind uf(k);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            if (!(g.edge[a][b] && g.edge[b][a])) uf.unite(static_cast<int>(a), static_cast<int>(b));
    auto groups = groups_of(uf, k);
    // Every part needs a start and an end activity; merge parts that lack one.
    auto complete = [&](const std::vector<int>& grp) {
        bool s = false, e = false;
        for (int a : grp) {
            s = s || g.start[a];
            e = e || g.end[a];
        }
        return s && e;
    };
    bool changed = true;
    while (changed && groups.size() >= 2) {
        changed = false;
        for (std::size_t i = 0; i < groups.size(); ++i) {
            if (complete(groups[i])) continue;
            auto& target = groups[(i + 1) % groups.size()];
            target.insert(target.end(), groups[i].begin(), groups[i].end());
            std::sort(target.begin(), target.end());
            groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(i));
            changed = true;
            break;
        }
    }
    std::sort(groups.begin(), groups.end());
    if (groups.size() < 2) return {};
    return groups;
}

/// First group is the do-part, the rest are redo parts; empty if no loop cut.
Partition loop_cut(const LocalDfg& g) {
    const std::size_t k = g.acts.size();
    std::vector<char> in_body(k, 0);
    for (std::size_t a = 0; a < k; ++a) in_body[a] = g.start[a] || g.end[a];

    Partition redo;
    bool changed = true;
    while (changed) {
        changed = false;
        UnionFind uf(k);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                if (g.edge[a][b] && !in_body[a] && !in_body[b]) uf.unite(static_cast<int>(a), static_cast<int>(b));
        redo.clear();
        for (auto& grp : groups_of(uf, k)) {
            if (in_body[grp.front()]) continue;
            std::vector<char> member(k, 0);
            for (int a : grp) member[a] = 1;
            bool entered = false, left = false, ok = true;
            for (std::size_t a = 0; a < k && ok; ++a) {
                for (std::size_t b = 0; b < k && ok; ++b) {
                    if (!g.edge[a][b]) continue;
                    if (in_body[a] && member[b]) {
                        entered = true;
                        ok = g.end[a];
                    } else if (member[a] && in_body[b]) {
                        left = true;
                        ok = g.start[b];
                    }
                }
            }
            if (ok && entered && left) {
                redo.push_back(grp);
            } else {
                for (int a : grp) in_body[a] = 1;
                changed = true;
            }
        }
    }
    if (redo.empty()) return {};
    std::vector<int> body;
    for (std::size_t a = 0; a < k; ++a)
        if (in_body[a]) body.push_back(static_cast<int>(a));
    Partition out{body};
    out.insert(out.end(), redo.begin(), redo.end());
    return out;
}

class Miner {
public:
    explicit Miner(const Alphabet& alphabet) : alphabet_(alphabet) {}

    ProcessTree mine(const SimpleLog& log) const {
        if (log.empty()) return ProcessTree::tau();
        SimpleLog nonempty;
        bool has_empty = false;
        for (const auto& [trace, n] : log) {
            if (trace.empty())
                has_empty = true;
            else
                nonempty[trace] += n;
        }
        if (nonempty.empty()) return ProcessTree::tau();
        if (has_empty) return ProcessTree::make(ProcessTree::Op::xor_choice, {ProcessTree::tau(), mine(nonempty)});

        auto g = build_dfg(nonempty);
        if (g.acts.size() == 1) {
            auto leaf = ProcessTree::activity(alphabet_.names[g.acts.front()]);
            bool single = std::all_of(nonempty.begin(), nonempty.end(), [](const auto& kv) { return kv.first.size() == 1; });
            if (single) return leaf;
            return ProcessTree::make(ProcessTree::Op::loop, {leaf, ProcessTree::tau()});
        }

        if (auto cut = xor_cut(g); cut.size() >= 2) return split_xor(nonempty, g, cut);
        if (auto cut = sequence_cut(g); !cut.empty()) return split_projected(ProcessTree::Op::sequence, nonempty, g, cut);
        if (auto cut = parallel_cut(g); !cut.empty()) return split_projected(ProcessTree::Op::parallel, nonempty, g, cut);
        if (auto cut = loop_cut(g); !cut.empty()) return split_loop(nonempty, g, cut);
        if (auto pieces = tau_loop_split(nonempty, g))
            return ProcessTree::make(ProcessTree::Op::loop, {mine(*pieces), ProcessTree::tau()});

        IdSet names;
        for (int a : g.acts) names.insert(alphabet_.names[a]);
        return flower_tree(names);
    }

private:
    static std::vector<int> group_index(const LocalDfg& g, const Partition& cut) {
        std::vector<int> of(g.acts.size(), -1);
        for (std::size_t i = 0; i < cut.size(); ++i)
            for (int a : cut[i]) of[a] = static_cast<int>(i);
        return of;
    }

    // Cuts every trace between an end activity and a following start
    // activity; the pieces are repetitions of one body.
    static std::optional<SimpleLog> tau_loop_split(const SimpleLog& log, const LocalDfg& g) {
        SimpleLog pieces;
        bool split = false;
        for (const auto& [trace, n] : log) {
            Acts run;
            for (std::size_t i = 0; i < trace.size(); ++i) {
                if (i > 0 && g.end[g.pos(trace[i - 1])] && g.start[g.pos(trace[i])]) {
                    pieces[run] += n;
                    run.clear();
                    split = true;
                }
                run.push_back(trace[i]);
            }
            pieces[run] += n;
        }
        if (!split) return std::nullopt;
        return pieces;
    }

    ProcessTree split_xor(const SimpleLog& log, const LocalDfg& g, const Partition& cut) const {
        auto of = group_index(g, cut);
        std::vector<SimpleLog> parts(cut.size());
        for (const auto& [trace, n] : log) parts[of[g.pos(trace.front())]][trace] += n;
        return recurse(ProcessTree::Op::xor_choice, parts);
    }

    ProcessTree split_projected(ProcessTree::Op op, const SimpleLog& log, const LocalDfg& g,
                                const Partition& cut) const {
        auto of = group_index(g, cut);
        std::vector<SimpleLog> parts(cut.size());
        for (const auto& [trace, n] : log) {
            std::vector<Acts> projected(cut.size());
            for (int a : trace) projected[of[g.pos(a)]].push_back(a);
            for (std::size_t i = 0; i < cut.size(); ++i) parts[i][projected[i]] += n;
        }
        return recurse(op, parts);
    }

    ProcessTree split_loop(const SimpleLog& log, const LocalDfg& g, const Partition& cut) const {
        auto of = group_index(g, cut);
        std::vector<SimpleLog> parts(cut.size());
        for (const auto& [trace, n] : log) {
            Acts run;
            int current = -1;
            for (int a : trace) {
                int grp = of[g.pos(a)];
                if (grp != current && !run.empty()) {
                    parts[current][run] += n;
                    run.clear();
                }
                current = grp;
                run.push_back(a);
            }
            if (!run.empty()) parts[current][run] += n;
        }
        return recurse(ProcessTree::Op::loop, parts);
    }

    ProcessTree recurse(ProcessTree::Op op, const std::vector<SimpleLog>& parts) const {
        std::vector<ProcessTree> children;
        children.reserve(parts.size());
        for (const auto& p : parts) children.push_back(mine(p));
        return ProcessTree::make(op, std::move(children));
    }

    const Alphabet& alphabet_;
};

class NetBuilder {
public:
    WorkflowNet build(const ProcessTree& tree) {
        auto source = net_.add_place("source");
        auto sink = net_.add_place("sink");
        translate(tree, source, sink);
        return WorkflowNet(std::move(net_));
    }

private:
    PetriNet::Index place() { return net_.add_place("p" + std::to_string(++places_)); }

    PetriNet::Index transition(std::optional<std::string> label) {
        return net_.add_transition("t" + std::to_string(++transitions_), std::move(label));
    }

    void translate(const ProcessTree& node, PetriNet::Index in, PetriNet::Index out) {
        using Op = ProcessTree::Op;
        switch (node.op) {
            case Op::leaf: {
                auto t = transition(node.label);
                net_.add_input_arc(in, t);
                net_.add_output_arc(t, out);
                break;
            }
            case Op::xor_choice:
                for (const auto& c : node.children) translate(c, in, out);
                break;
            case Op::sequence: {
                auto from = in;
                for (std::size_t i = 0; i < node.children.size(); ++i) {
                    auto to = i + 1 == node.children.size() ? out : place();
                    translate(node.children[i], from, to);
                    from = to;
                }
                break;
            }
            case Op::parallel: {
                auto split = transition(std::nullopt);
                auto join = transition(std::nullopt);
                net_.add_input_arc(in, split);
                net_.add_output_arc(join, out);
                for (const auto& c : node.children) {
                    auto a = place();
                    auto b = place();
                    net_.add_output_arc(split, a);
                    net_.add_input_arc(b, join);
                    translate(c, a, b);
                }
                break;
            }
            case Op::loop: {
                auto enter = transition(std::nullopt);
                auto leave = transition(std::nullopt);
                auto a = place();
                auto b = place();
                net_.add_input_arc(in, enter);
                net_.add_output_arc(enter, a);
                net_.add_input_arc(b, leave);
                net_.add_output_arc(leave, out);
                translate(node.children.front(), a, b);
                for (std::size_t i = 1; i < node.children.size(); ++i) translate(node.children[i], b, a);
                break;
            }
        }
    }

    PetriNet net_;
    std::size_t places_ = 0;
    std::size_t transitions_ = 0;
};

}  // namespace

bool ProcessTree::valid() const {
    if (op == Op::leaf) return children.empty() && (!label || !label->empty());
    if (label || children.size() < 2) return false;
    return std::all_of(children.begin(), children.end(), [](const ProcessTree& c) { return c.valid(); });
}

std::string ProcessTree::to_string() const {
    if (op == Op::leaf) return label ? *label : "tau";
    static const char* names[] = {"", "xor", "seq", "and", "loop"};
    std::string s = names[static_cast<int>(op)];
    s += '(';
    for (std::size_t i = 0; i < children.size(); ++i) {
        if (i) s += ", ";
        s += children[i].to_string();
    }
    return s + ')';
}

DirectlyFollowsGraph directly_follows(const EventLog& log) {
    DirectlyFollowsGraph g;
    IdSet names;
    for (const auto& entry : log.entries())
        for (const auto& e : entry.trace.events) names.insert(e.activity);
    g.activities.assign(names.begin(), names.end());
    auto id = [&](const std::string& a) {
        return static_cast<std::size_t>(std::lower_bound(g.activities.begin(), g.activities.end(), a) -
                                        g.activities.begin());
    };
    for (const auto& entry : log.entries()) {
        const auto& ev = entry.trace.events;
        if (ev.empty()) continue;
        g.start.insert(id(ev.front().activity));
        g.end.insert(id(ev.back().activity));
        for (std::size_t i = 0; i + 1 < ev.size(); ++i)
            g.edges[{id(ev[i].activity), id(ev[i + 1].activity)}] += entry.multiplicity;
    }
    return g;
}

ProcessTree discover_tree(const EventLog& log) {
    Alphabet alphabet;
    IdSet names;
    for (const auto& entry : log.entries())
        for (const auto& e : entry.trace.events) names.insert(e.activity);
    alphabet.names.assign(names.begin(), names.end());

    SimpleLog simple;
    for (const auto& entry : log.entries()) {
        Acts trace;
        trace.reserve(entry.trace.events.size());
        for (const auto& e : entry.trace.events)
            trace.push_back(static_cast<int>(
                std::lower_bound(alphabet.names.begin(), alphabet.names.end(), e.activity) - alphabet.names.begin()));
        simple[trace] += entry.multiplicity;
    }
    return Miner(alphabet).mine(simple);
}

ProcessTree flower_tree(const IdSet& activities) {
    if (activities.empty()) return ProcessTree::tau();
    std::vector<ProcessTree> children{ProcessTree::tau()};
    for (const auto& a : activities) children.push_back(ProcessTree::activity(a));
    return ProcessTree::make(ProcessTree::Op::loop, std::move(children));
}

WorkflowNet tree_to_wfnet(const ProcessTree& tree) { return NetBuilder().build(tree); }

WorkflowNet inductive_miner(const EventLog& log) { return tree_to_wfnet(discover_tree(log)); }

WorkflowNet flower_miner(const EventLog& log) {
    IdSet names;
    for (const auto& entry : log.entries())
        for (const auto& e : entry.trace.events) names.insert(e.activity);
    return tree_to_wfnet(flower_tree(names));
}

}  // namespace cm
