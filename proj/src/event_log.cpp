#include "collabminer/event_log.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <numeric>

#include "collabminer/error.hpp"

namespace cm {

namespace {

void append_set(std::string& key, const IdSet& set) {
    key += '{';
    for (const auto& item : set) {
        key += std::to_string(item.size());
        key += ':';
        key += item;
    }
    key += '}';
}

}  // namespace

std::string trace_identity(const Trace& trace) {
    std::string key;
    for (const auto& e : trace.events) {
        key += std::to_string(e.activity.size());
        key += ':';
        key += e.activity;
        append_set(key, e.concepts);
        append_set(key, e.resources);
        append_set(key, e.sends);
        append_set(key, e.receives);
        key += e.lifecycle ? (*e.lifecycle == Lifecycle::start ? 'S' : 'C') : '-';
        key += '|';
    }
    return key;
}

void EventLog::add(Trace trace, std::size_t multiplicity) {
    if (multiplicity == 0) return;
    auto key = trace_identity(trace);
    if (auto it = index_.find(key); it != index_.end()) {
        entries_[it->second].multiplicity += multiplicity;
        return;
    }
    index_.emplace(std::move(key), entries_.size());
    entries_.push_back({std::move(trace), multiplicity});
}

std::size_t EventLog::trace_count() const noexcept {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.multiplicity;
    return n;
}

std::size_t EventLog::event_count() const noexcept {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.multiplicity * e.trace.events.size();
    return n;
}

// --- timestamps ------------------------------------------------------------

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    auto fail = [&] { return ParseError("malformed timestamp '" + std::string(text) + "'"); };

    std::size_t pos = 0;
    auto digits = [&](std::size_t n) -> int {
        if (pos + n > text.size()) throw fail();
        int v = 0;
        for (std::size_t k = 0; k < n; ++k) {
            char c = text[pos + k];
            if (c < '0' || c > '9') throw fail();
            v = v * 10 + (c - '0');
        }
        pos += n;
        return v;
    };
    auto expect = [&](char c) {
        if (pos >= text.size() || text[pos] != c) throw fail();
        ++pos;
    };

    int y = digits(4);
    expect('-');
    int mo = digits(2);
    expect('-');
    int d = digits(2);
    const year_month_day date{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (pos == text.size()) {
        if (!date.ok()) throw fail();
        return Timestamp{sys_days{date}};
    }
    if (text[pos] != 'T' && text[pos] != ' ') throw fail();
    ++pos;
    int h = digits(2);
    expect(':');
    int mi = digits(2);
    expect(':');
    int s = digits(2);
    int ms = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t start = pos;
        int scale = 100;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            ms += (text[pos] - '0') * scale;
            scale /= 10;
            ++pos;
        }
        if (pos == start) throw fail();
    }
    int offset_minutes = 0;
    if (pos < text.size()) {
        char c = text[pos];
        if (c == 'Z') {
            ++pos;
        } else if (c == '+' || c == '-') {
            ++pos;
            int oh = digits(2);
            if (pos < text.size() && text[pos] == ':') ++pos;
            int om = digits(2);
            offset_minutes = (oh * 60 + om) * (c == '+' ? 1 : -1);
        } else {
            throw fail();
        }
    }
    if (pos != text.size()) throw fail();

    if (!date.ok() || h > 23 || mi > 59 || s > 60) throw fail();
    return sys_days{date} + hours{h} + minutes{mi} + seconds{s} + milliseconds{ms} - minutes{offset_minutes};
}

std::string format_timestamp(Timestamp ts) {
    using namespace std::chrono;
    auto day_point = floor<days>(ts);
    year_month_day ymd{day_point};
    auto rest = ts - day_point;
    auto h = duration_cast<hours>(rest);
    rest -= h;
    auto mi = duration_cast<minutes>(rest);
    rest -= mi;
    auto s = duration_cast<seconds>(rest);
    rest -= s;
    char buf[40];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03d+00:00", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), static_cast<int>(h.count()),
                  static_cast<int>(mi.count()), static_cast<int>(s.count()), static_cast<int>(rest.count()));
    return buf;
}

// --- validation ------------------------------------------------------------

bool ValidationReport::r2_ok() const noexcept {
    return std::all_of(traces.begin(), traces.end(), [](const auto& t) { return t.ok(); });
}

std::vector<std::size_t> ValidationReport::r2_flagged() const {
    std::vector<std::size_t> out;
    for (const auto& t : traces)
        if (!t.ok()) out.push_back(t.entry);
    return out;
}

std::vector<std::size_t> ValidationReport::r2_literal_only() const {
    std::vector<std::size_t> out;
    for (const auto& t : traces)
        if (!t.ok() && t.any_concept) out.push_back(t.entry);
    return out;
}

ValidationReport validate(const EventLog& log) {
    ValidationReport report;

    // Event instances per type, counted with multiplicity.
    std::map<std::string, std::size_t> resource_uses, send_count, receive_count;
    for (const auto& entry : log.entries()) {
        for (const auto& e : entry.trace.events) {
            for (const auto& r : e.resources) resource_uses[r] += entry.multiplicity;
            for (const auto& m : e.sends) send_count[m] += entry.multiplicity;
            for (const auto& m : e.receives) receive_count[m] += entry.multiplicity;
        }
    }
    auto count = [](const auto& map, const std::string& key) -> std::size_t {
        auto it = map.find(key);
        return it == map.end() ? 0 : it->second;
    };

    const auto& entries = log.entries();
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto& trace = entries[i].trace;
        TraceCollaboration tc;
        tc.entry = i;
        tc.case_id = trace.case_id;
        for (std::size_t k = 0; k < trace.events.size(); ++k) {
            const auto& e = trace.events[k];
            if (e.activity.empty()) report.undefined_activity.push_back({i, k, trace.case_id, e.activity});
            if (e.concepts.empty()) report.empty_concepts.push_back({i, k, trace.case_id, e.activity});
            if (!e.concepts.empty()) tc.any_concept = true;
            if (e.concepts.size() >= 2) tc.synchronous = true;
            // Another event instance must exist: subtract this one.
            for (const auto& r : e.resources)
                if (count(resource_uses, r) >= 2) tc.shared_resource = true;
            for (const auto& m : e.sends)
                if (count(receive_count, m) - (e.receives.count(m) ? 1 : 0) > 0) tc.shared_message = true;
            for (const auto& m : e.receives)
                if (count(send_count, m) - (e.sends.count(m) ? 1 : 0) > 0) tc.shared_message = true;
        }
        report.traces.push_back(std::move(tc));
    }
    return report;
}

// --- projection ------------------------------------------------------------

EventLog project(const EventLog& log, std::string_view concept_id) {
    EventLog out;
    const std::string key(concept_id);
    for (const auto& entry : log.entries()) {
        Trace t;
        t.case_id = entry.trace.case_id;
        t.extras = entry.trace.extras;
        for (const auto& e : entry.trace.events) {
            if (!e.concepts.count(key)) continue;
            t.events.push_back(e);
            t.events.back().concepts = {key};
        }
        out.add(std::move(t), entry.multiplicity);
    }
    return out;
}

CollabInfo extract_collab_info(const EventLog& log) {
    CollabInfo info;
    for (const auto& entry : log.entries()) {
        for (const auto& e : entry.trace.events) {
            info.concepts.insert(e.concepts.begin(), e.concepts.end());
            if (!e.activity.empty()) info.activities.insert(e.activity);
            for (const auto& m : e.sends) {
                info.message_types.insert(m);
                info.senders[m].insert(e.activity);
            }
            for (const auto& m : e.receives) {
                info.message_types.insert(m);
                info.receivers[m].insert(e.activity);
            }
            for (const auto& r : e.resources) {
                info.resource_types.insert(r);
                info.sharers[r].insert(e.activity);
            }
        }
    }
    return info;
}

bool has_lifecycle(const EventLog& log) {
    for (const auto& entry : log.entries())
        for (const auto& e : entry.trace.events)
            if (e.lifecycle) return true;
    return false;
}

ConcurrencyResult max_concurrency(const EventLog& log, std::string_view resource) {
    ConcurrencyResult result;
    if (!has_lifecycle(log)) return result;

    using namespace std::chrono;
    const std::string key(resource);
    // Sweep points: +1 at start, -1 at end. Zero-length instances last 1 ms.
    std::vector<std::pair<Timestamp, int>> points;
    auto add_interval = [&](Timestamp from, Timestamp to) {
        if (to <= from) to = from + milliseconds{1};
        points.emplace_back(from, +1);
        points.emplace_back(to, -1);
    };

    for (const auto& entry : log.entries()) {
        const auto& events = entry.trace.events;
        if (events.empty()) continue;
        const Timestamp trace_begin = events.front().timestamp;
        const Timestamp trace_end = events.back().timestamp;
        std::map<std::string, std::deque<Timestamp>> open;
        for (const auto& e : events) {
            if (!e.resources.count(key)) continue;
            if (!e.lifecycle) {
                add_interval(e.timestamp, e.timestamp);
            } else if (*e.lifecycle == Lifecycle::start) {
                open[e.activity].push_back(e.timestamp);
            } else {
                auto& queue = open[e.activity];
                if (queue.empty()) {
                    result.warnings.push_back("case " + entry.trace.case_id + ": complete of '" + e.activity +
                                              "' without start");
                    add_interval(trace_begin, e.timestamp);
                } else {
                    add_interval(queue.front(), e.timestamp);
                    queue.pop_front();
                }
            }
        }
        for (const auto& [activity, queue] : open) {
            for (auto started : queue) {
                result.warnings.push_back("case " + entry.trace.case_id + ": start of '" + activity +
                                          "' without complete");
                // Still running when the trace ends.
                add_interval(started, trace_end + milliseconds{1});
            }
        }
    }

    // Ends sort before starts at the same instant: touching intervals do not overlap.
    std::sort(points.begin(), points.end());
    long running = 0, best = 0;
    for (const auto& [ts, delta] : points) {
        running += delta;
        best = std::max(best, running);
    }
    result.value = std::max<long>(1, best);
    return result;
}

}  // namespace cm
