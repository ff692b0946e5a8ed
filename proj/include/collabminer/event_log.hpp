#pragma once

#include <chrono>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cm {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using IdSet = std::set<std::string>;

enum class Lifecycle { start, complete };

/// An attribute the library does not interpret. Kept so that a parse/write
/// cycle does not lose information. `children` holds nested values of
/// list/container attributes.
struct Attribute {
    std::string tag;  // XES element name: string, date, int, list, ...
    std::string key;
    std::string value;
    std::vector<Attribute> children;

    bool operator==(const Attribute&) const = default;
};

struct Event {
    std::string activity;  // empty means undefined
    Timestamp timestamp{};
    IdSet concepts;
    IdSet resources;
    IdSet sends;
    IdSet receives;
    std::optional<Lifecycle> lifecycle;
    std::string case_id;
    std::vector<Attribute> extras;

    bool operator==(const Event&) const = default;
};

struct Trace {
    std::string case_id;
    std::vector<Event> events;
    std::vector<Attribute> extras;

    bool operator==(const Trace&) const = default;
};

/// Key under which traces are merged into the multiset. Covers activity,
/// concepts, resources, sends, receives and lifecycle of every event, in order;
/// timestamps and case ids do not take part.
std::string trace_identity(const Trace& trace);

/// A multiset of traces. Entries keep the first trace seen for each identity
/// as the representative, in first-insertion order.
class EventLog {
public:
    struct Entry {
        Trace trace;
        std::size_t multiplicity = 1;

        bool operator==(const Entry&) const = default;
    };

    /// Adds `multiplicity` copies of `trace`; merges with an equal trace.
    void add(Trace trace, std::size_t multiplicity = 1);

    const std::vector<Entry>& entries() const noexcept { return entries_; }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t variant_count() const noexcept { return entries_.size(); }
    /// Number of traces counted with multiplicity.
    std::size_t trace_count() const noexcept;
    /// Number of events counted with multiplicity.
    std::size_t event_count() const noexcept;

    friend bool operator==(const EventLog& a, const EventLog& b) { return a.entries_ == b.entries_; }

private:
    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> index_;
};

Timestamp parse_timestamp(std::string_view text);
/// `YYYY-MM-DDTHH:MM:SS.mmm+00:00`
std::string format_timestamp(Timestamp ts);

// --- serialization -------------------------------------------------------

/// Reads `case,act,timestamp,c,rs,s,r[,lifecycle]` CSV. Set-valued cells are
/// `;`-separated. Extra columns become string extras on each event.
EventLog parse_csv(std::istream& in);
/// Writes one row per event; a trace with multiplicity k is written k times,
/// copies after the first get case ids `<case>#2`, `<case>#3`, ... Empty
/// traces have no rows and are therefore not representable in CSV.
void write_csv(const EventLog& log, std::ostream& out);

/// Parses XES. Events without `concept:name` get an empty activity and a
/// warning (R1 is checked by `validate`, not here).
EventLog parse_xes(std::istream& in, std::vector<std::string>* warnings = nullptr);
void write_xes(const EventLog& log, std::ostream& out);

enum class LogFormat { csv, xes };
LogFormat format_from_path(const std::filesystem::path& path);
EventLog read_log(const std::filesystem::path& path, std::optional<LogFormat> format = std::nullopt,
                  std::vector<std::string>* warnings = nullptr);
void write_log(const EventLog& log, const std::filesystem::path& path,
               std::optional<LogFormat> format = std::nullopt);

// --- validation ----------------------------------------------------------

struct EventRef {
    std::size_t entry = 0;     // index into EventLog::entries()
    std::size_t position = 0;  // index into the trace
    std::string case_id;
    std::string activity;
};

/// R2 evidence for one support trace.
struct TraceCollaboration {
    std::size_t entry = 0;
    std::string case_id;
    bool synchronous = false;      // some event records >= 2 concepts
    bool shared_resource = false;  // a resource type also used by another event instance
    bool shared_message = false;   // sends what another event instance receives, or vice versa
    bool any_concept = false;      // some event records >= 1 concept

    bool ok() const noexcept { return synchronous || shared_resource || shared_message; }
};

struct ValidationReport {
    std::vector<EventRef> undefined_activity;  // R1 violations
    std::vector<EventRef> empty_concepts;
    std::vector<TraceCollaboration> traces;

    bool r1_ok() const noexcept { return undefined_activity.empty(); }
    bool r2_ok() const noexcept;
    /// Entries without any collaboration evidence.
    std::vector<std::size_t> r2_flagged() const;
    /// Flagged entries that would pass if a single recorded concept counted as
    /// collaboration evidence.
    std::vector<std::size_t> r2_literal_only() const;
};

ValidationReport validate(const EventLog& log);

// --- projection and attribute extraction --------------------------------

/// Keeps the events whose concept set contains `concept` and narrows their
/// concept sets to it. Traces without such events become empty traces and
/// keep their multiplicity.
EventLog project(const EventLog& log, std::string_view concept_id);

struct CollabInfo {
    IdSet concepts;
    IdSet message_types;
    IdSet resource_types;
    IdSet activities;
    std::map<std::string, IdSet> senders;    // message type -> sending activities
    std::map<std::string, IdSet> receivers;  // message type -> receiving activities
    std::map<std::string, IdSet> sharers;    // resource type -> sharing activities

    bool operator==(const CollabInfo&) const = default;
};

CollabInfo extract_collab_info(const EventLog& log);

bool has_lifecycle(const EventLog& log);

struct ConcurrencyResult {
    std::size_t value = 1;
    std::vector<std::string> warnings;
};

/// Largest number of simultaneously running activity instances that use
/// `resource`, swept over all support traces. Start/complete events pair per
/// (case, activity) in FIFO order. Events without lifecycle count as instants.
/// Returns 1 when the log has no lifecycle information or the resource is
/// unused.
ConcurrencyResult max_concurrency(const EventLog& log, std::string_view resource);

}  // namespace cm
