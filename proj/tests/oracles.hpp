#pragma once

// Test-side reference implementations. Deliberately naive: they share no
// search code with the library and only read net structure through the
// public accessors.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "collabminer/event_log.hpp"
#include "collabminer/inductive.hpp"
#include "collabminer/petri.hpp"

namespace oracle {

using Seq = std::vector<std::string>;
using Tokens = std::map<std::string, int>;  // place id -> count, zero entries erased

inline Tokens tokens_of(const cm::PetriNet& net, const cm::Marking& m) {
    Tokens out;
    for (std::size_t p = 0; p < net.place_count(); ++p)
        if (m[p]) out[net.place_id(p)] = static_cast<int>(m[p]);
    return out;
}

inline bool enabled(const cm::PetriNet& net, const Tokens& m, std::size_t t) {
    for (auto p : net.preset(t)) {
        auto it = m.find(net.place_id(p));
        if (it == m.end() || it->second < 1) return false;
    }
    return true;
}

inline Tokens fire(const cm::PetriNet& net, Tokens m, std::size_t t) {
    for (auto p : net.preset(t))
        if (--m[net.place_id(p)] == 0) m.erase(net.place_id(p));
    for (auto p : net.postset(t)) ++m[net.place_id(p)];
    return m;
}

/// Visible sequences of length <= max_len that lead from the initial to the
/// final marking. nullopt when more than `cap` sequences or `state_cap`
/// search states are needed.
inline std::optional<std::set<Seq>> language(const cm::AcceptingNet& model, std::size_t max_len, std::size_t cap,
                                             std::size_t state_cap = 500000) {
    const auto& net = model.net;
    const Tokens final = tokens_of(net, model.final);
    std::set<std::pair<Tokens, Seq>> seen;
    std::vector<std::pair<Tokens, Seq>> stack{{tokens_of(net, model.initial), {}}};
    seen.insert(stack.front());
    std::set<Seq> out;
    while (!stack.empty()) {
        auto [m, prefix] = stack.back();
        stack.pop_back();
        if (m == final) {
            out.insert(prefix);
            if (out.size() > cap) return std::nullopt;
        }
        for (std::size_t t = 0; t < net.transition_count(); ++t) {
            if (!enabled(net, m, t)) continue;
            Seq next = prefix;
            if (const auto& label = net.transition(t).label) {
                if (prefix.size() >= max_len) continue;
                next.push_back(*label);
            }
            std::pair<Tokens, Seq> state{fire(net, m, t), std::move(next)};
            if (seen.insert(state).second) {
                if (seen.size() > state_cap) return std::nullopt;
                stack.push_back(std::move(state));
            }
        }
    }
    return out;
}

/// Visible prefixes of length <= max_len of all firing sequences, whether or
/// not they can be completed. nullopt past `state_cap` search states.
inline std::optional<std::set<Seq>> prefixes(const cm::AcceptingNet& model, std::size_t max_len,
                                             std::size_t state_cap = 500000) {
    const auto& net = model.net;
    std::set<std::pair<Tokens, Seq>> seen;
    std::vector<std::pair<Tokens, Seq>> stack{{tokens_of(net, model.initial), {}}};
    seen.insert(stack.front());
    std::set<Seq> out;
    while (!stack.empty()) {
        auto [m, prefix] = stack.back();
        stack.pop_back();
        out.insert(prefix);
        for (std::size_t t = 0; t < net.transition_count(); ++t) {
            if (!enabled(net, m, t)) continue;
            Seq next = prefix;
            if (const auto& label = net.transition(t).label) {
                if (prefix.size() >= max_len) continue;
                next.push_back(*label);
            }
            std::pair<Tokens, Seq> state{fire(net, m, t), std::move(next)};
            if (seen.insert(state).second) {
                if (seen.size() > state_cap) return std::nullopt;
                stack.push_back(std::move(state));
            }
        }
    }
    return out;
}

inline std::set<Seq> prefix_closure(const std::set<Seq>& words) {
    std::set<Seq> out;
    for (const auto& w : words)
        for (std::size_t n = 0; n <= w.size(); ++n) out.emplace(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(n));
    return out;
}

/// Whether some firing sequence labelled `word` leads to the final marking.
inline bool accepts(const cm::AcceptingNet& model, const Seq& word, std::size_t state_cap = 200000) {
    const auto& net = model.net;
    const Tokens final = tokens_of(net, model.final);
    std::set<std::pair<std::size_t, Tokens>> seen{{0, tokens_of(net, model.initial)}};
    std::vector<std::pair<std::size_t, Tokens>> queue{*seen.begin()};
    for (std::size_t i = 0; i < queue.size() && seen.size() < state_cap; ++i) {
        const auto [pos, m] = queue[i];
        if (pos == word.size() && m == final) return true;
        for (std::size_t t = 0; t < net.transition_count(); ++t) {
            if (!enabled(net, m, t)) continue;
            const auto& label = net.transition(t).label;
            if (label && (pos == word.size() || *label != word[pos])) continue;
            std::pair<std::size_t, Tokens> next{label ? pos + 1 : pos, fire(net, m, t)};
            if (seen.insert(next).second) queue.push_back(std::move(next));
        }
    }
    return false;
}

inline std::size_t lcs(const Seq& a, const Seq& b) {
    std::vector<std::vector<std::size_t>> d(a.size() + 1, std::vector<std::size_t>(b.size() + 1, 0));
    for (std::size_t i = 1; i <= a.size(); ++i)
        for (std::size_t j = 1; j <= b.size(); ++j)
            d[i][j] = a[i - 1] == b[j - 1] ? d[i - 1][j - 1] + 1 : std::max(d[i - 1][j], d[i][j - 1]);
    return d[a.size()][b.size()];
}

/// Insert/delete edit distance; equals the alignment cost against a fixed run.
inline std::size_t edit_cost(const Seq& a, const Seq& b) { return a.size() + b.size() - 2 * lcs(a, b); }

/// Minimal alignment cost by enumerating the model language. Sequences longer
/// than 2|t| + L_min cannot beat the shortest run and are not enumerated.
inline std::optional<std::uint64_t> brute_alignment_cost(const cm::AcceptingNet& model, const Seq& trace,
                                                         std::size_t cap = 10000) {
    std::optional<std::size_t> shortest;
    for (std::size_t len = 0; len <= 32 && !shortest; ++len) {
        auto lang = language(model, len, cap);
        if (!lang) return std::nullopt;
        for (const auto& s : *lang) shortest = std::min(shortest.value_or(s.size()), s.size());
    }
    if (!shortest) return std::nullopt;
    auto lang = language(model, 2 * trace.size() + *shortest, cap);
    if (!lang) return std::nullopt;
    std::uint64_t best = UINT64_MAX;
    for (const auto& s : *lang) best = std::min<std::uint64_t>(best, edit_cost(trace, s));
    return best;
}

namespace detail {

inline void shuffles(const Seq& a, std::size_t i, const Seq& b, std::size_t j, Seq& cur, std::set<Seq>& out) {
    if (i == a.size() && j == b.size()) {
        out.insert(cur);
        return;
    }
    if (i < a.size()) {
        cur.push_back(a[i]);
        shuffles(a, i + 1, b, j, cur, out);
        cur.pop_back();
    }
    if (j < b.size()) {
        cur.push_back(b[j]);
        shuffles(a, i, b, j + 1, cur, out);
        cur.pop_back();
    }
}

}  // namespace detail

/// Words of length <= max_len in the language of a process tree, computed
/// from the operator semantics.
inline std::set<Seq> tree_language(const cm::ProcessTree& t, std::size_t max_len) {
    using Op = cm::ProcessTree::Op;
    auto combine = [&](const std::set<Seq>& x, const std::set<Seq>& y, bool interleave) {
        std::set<Seq> out;
        for (const auto& u : x)
            for (const auto& v : y) {
                if (u.size() + v.size() > max_len) continue;
                if (interleave) {
                    Seq cur;
                    detail::shuffles(u, 0, v, 0, cur, out);
                } else {
                    Seq w = u;
                    w.insert(w.end(), v.begin(), v.end());
                    out.insert(std::move(w));
                }
            }
        return out;
    };
    switch (t.op) {
        case Op::leaf:
            if (!t.label) return {Seq{}};
            return max_len >= 1 ? std::set<Seq>{Seq{*t.label}} : std::set<Seq>{};
        case Op::xor_choice: {
            std::set<Seq> out;
            for (const auto& c : t.children) {
                auto l = tree_language(c, max_len);
                out.insert(l.begin(), l.end());
            }
            return out;
        }
        case Op::sequence:
        case Op::parallel: {
            std::set<Seq> out{Seq{}};
            for (const auto& c : t.children) out = combine(out, tree_language(c, max_len), t.op == Op::parallel);
            return out;
        }
        case Op::loop: {
            auto body = tree_language(t.children[0], max_len);
            std::set<Seq> redo;
            for (std::size_t k = 1; k < t.children.size(); ++k) {
                auto l = tree_language(t.children[k], max_len);
                redo.insert(l.begin(), l.end());
            }
            std::set<Seq> out = body, frontier = body;
            while (!frontier.empty()) {
                std::set<Seq> next;
                for (const auto& w : combine(combine(frontier, redo, false), body, false))
                    if (out.insert(w).second) next.insert(w);
                frontier = std::move(next);
            }
            return out;
        }
    }
    return {};
}

/// Breadth-first reachability on the map-based token game.
inline std::optional<bool> reaches_final(const cm::AcceptingNet& model, std::size_t cap) {
    const auto& net = model.net;
    const Tokens final = tokens_of(net, model.final);
    std::set<Tokens> seen{tokens_of(net, model.initial)};
    std::vector<Tokens> queue{*seen.begin()};
    for (std::size_t i = 0; i < queue.size(); ++i) {
        if (queue[i] == final) return true;
        for (std::size_t t = 0; t < net.transition_count(); ++t) {
            if (!enabled(net, queue[i], t)) continue;
            auto next = fire(net, queue[i], t);
            if (seen.insert(next).second) {
                if (seen.size() > cap) return std::nullopt;
                queue.push_back(std::move(next));
            }
        }
    }
    return false;
}

inline Seq labels(const cm::Trace& t) {
    Seq out;
    for (const auto& e : t.events) out.push_back(e.activity);
    return out;
}

inline cm::Event event(std::string activity, cm::IdSet concepts, int second = 0) {
    cm::Event e;
    e.activity = std::move(activity);
    e.concepts = std::move(concepts);
    e.timestamp = cm::Timestamp{} + std::chrono::seconds(second);
    return e;
}

/// A log of plain label sequences, every event in concept `c`.
inline cm::EventLog simple_log(const std::vector<Seq>& traces, const std::string& c = "A") {
    cm::EventLog log;
    std::size_t k = 0;
    for (const auto& t : traces) {
        cm::Trace trace;
        trace.case_id = "t" + std::to_string(k++);
        int s = 0;
        for (const auto& a : t) trace.events.push_back(event(a, {c}, s++));
        log.add(std::move(trace));
    }
    return log;
}

/// The five annotated events of case t1 from the emergency-medicine example.
inline cm::EventLog emergency_log() {
    auto at = [](const char* text) { return cm::parse_timestamp(text); };
    cm::Trace t;
    t.case_id = "t1";
    cm::Event e1;
    e1.activity = "register";
    e1.timestamp = at("2019-12-28T00:20:21");
    e1.concepts = {"Emergency"};
    cm::Event e2;
    e2.activity = "rescue";
    e2.timestamp = at("2019-12-28T01:20:21");
    e2.concepts = {"Emergency"};
    e2.resources = {"charging system"};
    cm::Event e3;
    e3.activity = "reserve";
    e3.timestamp = at("2019-12-28T10:20:21");
    e3.concepts = {"X_ray"};
    e3.resources = {"charging system"};
    e3.sends = {"acceptance notice"};
    e3.receives = {"reservation form"};
    cm::Event e4;
    e4.activity = "plan imaging";
    e4.timestamp = at("2019-12-28T11:20:21");
    e4.concepts = {"Surgical"};
    e4.sends = {"photo form"};
    e4.receives = {"acceptance notice"};
    cm::Event e5;
    e5.activity = "consult";
    e5.timestamp = at("2019-12-28T23:20:21");
    e5.concepts = {"Surgical", "Cardiovascular"};
    e5.resources = {"diagnosis room"};
    for (auto* e : {&e1, &e2, &e3, &e4, &e5}) {
        e->case_id = "t1";
        t.events.push_back(*e);
    }
    cm::EventLog log;
    log.add(t);
    return log;
}

/// Random block-structured tree over `alphabet`, each activity used at most
/// once so that leaves stay distinguishable.
class TreeGen {
public:
    explicit TreeGen(std::uint64_t seed) : rng_(seed) {}

    cm::ProcessTree tree(std::vector<std::string> alphabet, int max_depth = 3) {
        std::shuffle(alphabet.begin(), alphabet.end(), rng_);
        return build(alphabet, 0, alphabet.size(), max_depth);
    }

    std::size_t uniform(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
    std::mt19937_64& rng() { return rng_; }

private:
    cm::ProcessTree build(const std::vector<std::string>& a, std::size_t lo, std::size_t hi, int depth) {
        using Op = cm::ProcessTree::Op;
        const std::size_t n = hi - lo;
        if (n == 1 || depth == 0) {
            if (n == 1) return uniform(8) == 0 ? cm::ProcessTree::make(Op::xor_choice, {leaf(a[lo]), cm::ProcessTree::tau()})
                                               : leaf(a[lo]);
            std::vector<cm::ProcessTree> kids;
            for (std::size_t i = lo; i < hi; ++i) kids.push_back(leaf(a[i]));
            return cm::ProcessTree::make(Op::sequence, std::move(kids));
        }
        static const Op ops[] = {Op::sequence, Op::xor_choice, Op::parallel, Op::loop};
        Op op = ops[uniform(4)];
        std::size_t parts = op == Op::loop ? 2 : 2 + uniform(std::min<std::size_t>(n - 1, 2));
        parts = std::min(parts, n);
        std::vector<cm::ProcessTree> kids;
        std::size_t start = lo;
        for (std::size_t k = 0; k < parts; ++k) {
            std::size_t remaining = parts - k - 1;
            std::size_t take = k + 1 == parts ? hi - start : 1 + uniform(hi - start - remaining);
            kids.push_back(build(a, start, start + take, depth - 1));
            start += take;
        }
        return cm::ProcessTree::make(op, std::move(kids));
    }

    static cm::ProcessTree leaf(const std::string& s) { return cm::ProcessTree::activity(s); }

    std::mt19937_64 rng_;
};

}  // namespace oracle
