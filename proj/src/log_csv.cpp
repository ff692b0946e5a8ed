#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <unordered_map>

#include "collabminer/error.hpp"
#include "collabminer/event_log.hpp"
#include "text_util.hpp"

namespace cm {

namespace {

constexpr std::array<std::string_view, 7> kMandatory{"case", "act", "timestamp", "c", "rs", "s", "r"};

std::vector<std::string> split_record(const std::string& line, std::size_t line_no) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    if (quoted) throw ParseError("unterminated quoted field", line_no);
    cells.push_back(std::move(cell));
    return cells;
}

IdSet split_set(std::string_view cell) {
    IdSet out;
    for (auto part : detail::split(cell, ';')) {
        auto item = detail::trim(part);
        if (!item.empty()) out.emplace(item);
    }
    return out;
}

std::string quote(std::string_view cell) {
    if (cell.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(cell);
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string join_set(const IdSet& set) {
    std::string out;
    for (const auto& item : set) {
        if (!out.empty()) out += ';';
        out += item;
    }
    return out;
}

}  // namespace

EventLog parse_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;

    // Header.
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.rfind("\xEF\xBB\xBF", 0) == 0) line.erase(0, 3);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!detail::trim(line).empty()) break;
    }
    if (detail::trim(line).empty()) throw SchemaError("missing header");

    std::vector<std::string> header;
    for (auto& cell : split_record(line, line_no)) header.emplace_back(detail::trim(cell));
    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (!column.emplace(header[i], i).second)
            throw SchemaError("duplicate column '" + header[i] + "' in header");
    }
    for (auto name : kMandatory) {
        if (!column.count(std::string(name))) throw SchemaError("missing column '" + std::string(name) + "'");
    }
    const auto lifecycle_col = column.count("lifecycle") ? std::optional<std::size_t>(column["lifecycle"]) : std::nullopt;
    std::vector<std::size_t> extra_cols;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (std::find(kMandatory.begin(), kMandatory.end(), header[i]) == kMandatory.end() && header[i] != "lifecycle")
            extra_cols.push_back(i);
    }

    std::vector<std::string> case_order;
    std::unordered_map<std::string, std::vector<Event>> cases;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::trim(line).empty()) continue;
        auto cells = split_record(line, line_no);
        if (cells.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " cells, found " +
                                 std::to_string(cells.size()),
                             line_no);
        Event e;
        e.case_id = detail::trim(cells[column["case"]]);
        e.activity = detail::trim(cells[column["act"]]);
        try {
            e.timestamp = parse_timestamp(detail::trim(cells[column["timestamp"]]));
        } catch (const ParseError& err) {
            throw ParseError(err.what(), line_no);
        }
        e.concepts = split_set(cells[column["c"]]);
        e.resources = split_set(cells[column["rs"]]);
        e.sends = split_set(cells[column["s"]]);
        e.receives = split_set(cells[column["r"]]);
        if (lifecycle_col) {
            auto lc = detail::lower(detail::trim(cells[*lifecycle_col]));
            if (lc == "start") {
                e.lifecycle = Lifecycle::start;
            } else if (lc == "complete") {
                e.lifecycle = Lifecycle::complete;
            } else if (!lc.empty()) {
                throw ParseError("unknown lifecycle '" + lc + "'", line_no);
            }
        }
        for (auto col : extra_cols) e.extras.push_back({"string", header[col], cells[col], {}});

        auto [it, inserted] = cases.try_emplace(e.case_id);
        if (inserted) case_order.push_back(e.case_id);
        it->second.push_back(std::move(e));
    }

    EventLog log;
    for (const auto& id : case_order) {
        auto& events = cases[id];
        std::stable_sort(events.begin(), events.end(),
                         [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
        log.add(Trace{id, std::move(events), {}});
    }
    return log;
}

void write_csv(const EventLog& log, std::ostream& out) {
    bool lifecycle = has_lifecycle(log);
    std::vector<std::string> extra_keys;
    for (const auto& entry : log.entries())
        for (const auto& e : entry.trace.events)
            for (const auto& a : e.extras)
                if (a.children.empty() && std::find(extra_keys.begin(), extra_keys.end(), a.key) == extra_keys.end() &&
                    a.key != "lifecycle")
                    extra_keys.push_back(a.key);
    auto is_reserved = [](const std::string& k) {
        return std::find(kMandatory.begin(), kMandatory.end(), k) != kMandatory.end();
    };
    extra_keys.erase(std::remove_if(extra_keys.begin(), extra_keys.end(), is_reserved), extra_keys.end());

    out << "case,act,timestamp,c,rs,s,r";
    if (lifecycle) out << ",lifecycle";
    for (const auto& k : extra_keys) out << ',' << quote(k);
    out << '\n';

    for (const auto& entry : log.entries()) {
        for (std::size_t copy = 0; copy < entry.multiplicity; ++copy) {
            std::string case_id = entry.trace.case_id;
            if (copy > 0) case_id += "#" + std::to_string(copy + 1);
            for (const auto& e : entry.trace.events) {
                out << quote(case_id) << ',' << quote(e.activity) << ',' << format_timestamp(e.timestamp) << ','
                    << quote(join_set(e.concepts)) << ',' << quote(join_set(e.resources)) << ','
                    << quote(join_set(e.sends)) << ',' << quote(join_set(e.receives));
                if (lifecycle) {
                    out << ',';
                    if (e.lifecycle) out << (*e.lifecycle == Lifecycle::start ? "start" : "complete");
                }
                for (const auto& k : extra_keys) {
                    out << ',';
                    for (const auto& a : e.extras)
                        if (a.key == k) {
                            out << quote(a.value);
                            break;
                        }
                }
                out << '\n';
            }
        }
    }
}

}  // namespace cm
