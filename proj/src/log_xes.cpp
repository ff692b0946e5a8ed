#include <fstream>
#include <istream>
#include <ostream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "collabminer/error.hpp"
#include "collabminer/event_log.hpp"
#include "text_util.hpp"

namespace cm {

namespace pt = boost::property_tree;

namespace {

constexpr std::string_view kConcepts = "collab:concepts";
constexpr std::string_view kResources = "collab:resources";
constexpr std::string_view kSends = "collab:send";
constexpr std::string_view kReceives = "collab:receive";

bool is_attribute_tag(const std::string& tag) {
    return tag == "string" || tag == "date" || tag == "int" || tag == "float" || tag == "boolean" || tag == "id" ||
           tag == "list" || tag == "container";
}

Attribute read_attribute(const std::string& tag, const pt::ptree& node) {
    Attribute a;
    a.tag = tag;
    a.key = node.get<std::string>("<xmlattr>.key", "");
    a.value = node.get<std::string>("<xmlattr>.value", "");
    for (const auto& [child_tag, child] : node) {
        if (child_tag == "values") {
            for (const auto& [vt, v] : child)
                if (is_attribute_tag(vt)) a.children.push_back(read_attribute(vt, v));
        } else if (is_attribute_tag(child_tag)) {
            a.children.push_back(read_attribute(child_tag, child));
        }
    }
    return a;
}

IdSet set_value(const Attribute& a) {
    IdSet out;
    if (a.tag == "list" || a.tag == "container") {
        for (const auto& c : a.children) {
            auto v = detail::trim(c.value);
            if (!v.empty()) out.insert(v);
        }
    } else {
        for (auto part : detail::split(a.value, ';')) {
            auto v = detail::trim(part);
            if (!v.empty()) out.insert(v);
        }
    }
    return out;
}

Event read_event(const pt::ptree& node, const std::string& case_id, std::size_t index,
                 std::vector<std::string>* warnings) {
    Event e;
    e.case_id = case_id;
    bool has_name = false;
    for (const auto& [tag, child] : node) {
        if (!is_attribute_tag(tag)) continue;
        Attribute a = read_attribute(tag, child);
        if (a.key == "concept:name") {
            e.activity = detail::trim(a.value);
            has_name = true;
        } else if (a.key == "time:timestamp") {
            e.timestamp = parse_timestamp(detail::trim(a.value));
        } else if (a.key == "lifecycle:transition") {
            auto lc = detail::lower(detail::trim(a.value));
            if (lc == "start") {
                e.lifecycle = Lifecycle::start;
            } else if (lc == "complete") {
                e.lifecycle = Lifecycle::complete;
            } else {
                if (warnings)
                    warnings->push_back("trace " + case_id + ", event " + std::to_string(index) +
                                        ": lifecycle '" + a.value + "' kept as plain attribute");
                e.extras.push_back(std::move(a));
            }
        } else if (a.key == kConcepts) {
            e.concepts = set_value(a);
        } else if (a.key == kResources) {
            e.resources = set_value(a);
        } else if (a.key == kSends) {
            e.sends = set_value(a);
        } else if (a.key == kReceives) {
            e.receives = set_value(a);
        } else {
            e.extras.push_back(std::move(a));
        }
    }
    if (!has_name && warnings)
        warnings->push_back("trace " + case_id + ", event " + std::to_string(index) +
                            ": missing concept:name (R1 violation)");
    return e;
}

pt::ptree& add_simple(pt::ptree& parent, const std::string& tag, const std::string& key, const std::string& value) {
    auto& node = parent.add_child(tag, pt::ptree{});
    node.put("<xmlattr>.key", key);
    node.put("<xmlattr>.value", value);
    return node;
}

void write_attribute(pt::ptree& parent, const Attribute& a) {
    auto& node = parent.add_child(a.tag, pt::ptree{});
    node.put("<xmlattr>.key", a.key);
    if (a.tag != "list" && a.tag != "container") node.put("<xmlattr>.value", a.value);
    if (a.children.empty()) return;
    auto& holder = a.tag == "list" ? node.add_child("values", pt::ptree{}) : node;
    for (const auto& c : a.children) write_attribute(holder, c);
}

void write_set(pt::ptree& parent, std::string_view key, const IdSet& set, const std::string& item_key) {
    if (set.empty()) return;
    auto& list = parent.add_child("list", pt::ptree{});
    list.put("<xmlattr>.key", std::string(key));
    auto& values = list.add_child("values", pt::ptree{});
    for (const auto& v : set) add_simple(values, "string", item_key, v);
}

}  // namespace

EventLog parse_xes(std::istream& in, std::vector<std::string>* warnings) {
    pt::ptree tree;
    try {
        pt::read_xml(in, tree, pt::xml_parser::no_comments);
    } catch (const pt::xml_parser_error& err) {
        throw ParseError(err.message(), err.line());
    }
    auto root = tree.get_child_optional("log");
    if (!root) throw SchemaError("XES document has no <log> root");

    EventLog log;
    std::size_t trace_index = 0;
    for (const auto& [tag, node] : *root) {
        if (tag != "trace") continue;
        Trace t;
        t.case_id = "trace_" + std::to_string(trace_index);
        std::vector<const pt::ptree*> events;
        for (const auto& [child_tag, child] : node) {
            if (child_tag == "event") {
                events.push_back(&child);
            } else if (is_attribute_tag(child_tag)) {
                Attribute a = read_attribute(child_tag, child);
                if (a.key == "concept:name")
                    t.case_id = detail::trim(a.value);
                else
                    t.extras.push_back(std::move(a));
            }
        }
        for (std::size_t k = 0; k < events.size(); ++k) {
            try {
                t.events.push_back(read_event(*events[k], t.case_id, k, warnings));
            } catch (const ParseError& err) {
                throw ParseError("trace " + t.case_id + ", event " + std::to_string(k) + ": " + err.what());
            }
        }
        log.add(std::move(t));
        ++trace_index;
    }
    return log;
}

void write_xes(const EventLog& log, std::ostream& out) {
    pt::ptree tree;
    auto& root = tree.add_child("log", pt::ptree{});
    root.put(pt::ptree::path_type("<xmlattr>/xes.version", '/'), "1.0");
    root.put(pt::ptree::path_type("<xmlattr>/xes.features", '/'), "nested-attributes");
    auto extension = [&](const char* name, const char* prefix, const char* uri) {
        auto& ext = root.add_child("extension", pt::ptree{});
        ext.put("<xmlattr>.name", name);
        ext.put("<xmlattr>.prefix", prefix);
        ext.put("<xmlattr>.uri", uri);
    };
    extension("Concept", "concept", "http://www.xes-standard.org/concept.xesext");
    extension("Time", "time", "http://www.xes-standard.org/time.xesext");
    extension("Lifecycle", "lifecycle", "http://www.xes-standard.org/lifecycle.xesext");

    for (const auto& entry : log.entries()) {
        for (std::size_t copy = 0; copy < entry.multiplicity; ++copy) {
            auto& trace = root.add_child("trace", pt::ptree{});
            std::string case_id = entry.trace.case_id;
            if (copy > 0) case_id += "#" + std::to_string(copy + 1);
            add_simple(trace, "string", "concept:name", case_id);
            for (const auto& a : entry.trace.extras) write_attribute(trace, a);
            for (const auto& e : entry.trace.events) {
                auto& ev = trace.add_child("event", pt::ptree{});
                add_simple(ev, "string", "concept:name", e.activity);
                add_simple(ev, "date", "time:timestamp", format_timestamp(e.timestamp));
                if (e.lifecycle)
                    add_simple(ev, "string", "lifecycle:transition",
                               *e.lifecycle == Lifecycle::start ? "start" : "complete");
                write_set(ev, kConcepts, e.concepts, "concept");
                write_set(ev, kResources, e.resources, "resource");
                write_set(ev, kSends, e.sends, "message");
                write_set(ev, kReceives, e.receives, "message");
                for (const auto& a : e.extras) write_attribute(ev, a);
            }
        }
    }
    pt::write_xml(out, tree, pt::xml_writer_make_settings<std::string>(' ', 2));
}

LogFormat format_from_path(const std::filesystem::path& path) {
    auto ext = detail::lower(path.extension().string());
    if (ext == ".csv") return LogFormat::csv;
    if (ext == ".xes") return LogFormat::xes;
    throw SchemaError("cannot infer log format from '" + path.string() + "' (expected .csv or .xes)");
}

EventLog read_log(const std::filesystem::path& path, std::optional<LogFormat> format,
                  std::vector<std::string>* warnings) {
    auto fmt = format ? *format : format_from_path(path);
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    try {
        return fmt == LogFormat::csv ? parse_csv(in) : parse_xes(in, warnings);
    } catch (const ParseError& err) {
        throw ParseError(path.string() + ": " + err.what());
    }
}

void write_log(const EventLog& log, const std::filesystem::path& path, std::optional<LogFormat> format) {
    auto fmt = format ? *format : format_from_path(path);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    if (fmt == LogFormat::csv)
        write_csv(log, out);
    else
        write_xes(log, out);
}

}  // namespace cm
