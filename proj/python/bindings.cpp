#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "collabminer/conformance.hpp"
#include "collabminer/error.hpp"
#include "collabminer/generator.hpp"
#include "collabminer/pnml.hpp"
#include "collabminer/report.hpp"
#include "collabminer/scenarios.hpp"

namespace py = pybind11;
using namespace cm;

namespace {

py::object to_python(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

std::optional<LogFormat> format_arg(const std::optional<std::string>& name) {
    if (!name) return std::nullopt;
    if (*name == "csv") return LogFormat::csv;
    if (*name == "xes") return LogFormat::xes;
    throw py::value_error("format must be 'csv' or 'xes'");
}

std::vector<std::vector<std::string>> traces(const EventLog& log) {
    std::vector<std::vector<std::string>> out;
    for (const auto& e : log.entries()) {
        std::vector<std::string> labels;
        for (const auto& ev : e.trace.events) labels.push_back(ev.activity);
        out.insert(out.end(), e.multiplicity, labels);
    }
    return out;
}

std::map<std::string, std::uint32_t> marking_dict(const PetriNet& net, const Marking& m) {
    std::map<std::string, std::uint32_t> out;
    for (const auto& [id, n] : marking_pairs(net, m)) out[id] = n;
    return out;
}

}  // namespace

PYBIND11_MODULE(_collabminer, m) {
    m.doc() = "Collaboration Petri net discovery from multi-concept event logs";

    auto base = py::register_exception<Error>(m, "CollabMinerError");
    py::register_exception<ParseError>(m, "ParseError", base);
    py::register_exception<SchemaError>(m, "SchemaError", base);
    py::register_exception<DiscoveryError>(m, "DiscoveryError", base);
    py::register_exception<CompositionError>(m, "CompositionError", base);

    py::class_<EventLog>(m, "EventLog")
        .def_static(
            "read", [](const std::filesystem::path& p, std::optional<std::string> format) {
                return read_log(p, format_arg(format));
            },
            py::arg("path"), py::arg("format") = std::nullopt)
        .def_static("from_csv", [](const std::string& text) {
            std::istringstream in(text);
            return parse_csv(in);
        })
        .def_static("from_xes", [](const std::string& text) {
            std::istringstream in(text);
            return parse_xes(in);
        })
        .def("to_csv", [](const EventLog& log) {
            std::ostringstream out;
            write_csv(log, out);
            return out.str();
        })
        .def("to_xes", [](const EventLog& log) {
            std::ostringstream out;
            write_xes(log, out);
            return out.str();
        })
        .def(
            "write", [](const EventLog& log, const std::filesystem::path& p, std::optional<std::string> format) {
                write_log(log, p, format_arg(format));
            },
            py::arg("path"), py::arg("format") = std::nullopt)
        .def_property_readonly("trace_count", &EventLog::trace_count)
        .def_property_readonly("event_count", &EventLog::event_count)
        .def_property_readonly("variant_count", &EventLog::variant_count)
        .def("traces", &traces, "activity sequences, one per trace")
        .def("validate", [](const EventLog& log) { return to_python(to_json(validate(log), log)); })
        .def("collab_info", [](const EventLog& log) { return to_python(to_json(extract_collab_info(log))); })
        .def("project", [](const EventLog& log, const std::string& c) { return project(log, c); })
        .def("__eq__", [](const EventLog& a, const EventLog& b) { return a == b; })
        .def("__len__", &EventLog::trace_count);

    py::class_<CollaborationPetriNet>(m, "Model")
        .def_static("read_pnml", &read_pnml)
        .def_static("from_pnml", [](const std::string& text) {
            std::istringstream in(text);
            return parse_pnml(in);
        })
        .def("to_pnml", &to_pnml, py::arg("name") = "cpn")
        .def("write_pnml", &write_pnml_file)
        .def("to_dot", &to_dot)
        .def_property_readonly("places",
                               [](const CollaborationPetriNet& c) {
                                   std::vector<std::string> out;
                                   for (PetriNet::Index p = 0; p < c.net.place_count(); ++p)
                                       out.push_back(c.net.place_id(p));
                                   return out;
                               })
        .def_property_readonly("transitions",
                               [](const CollaborationPetriNet& c) {
                                   std::vector<std::pair<std::string, std::optional<std::string>>> out;
                                   for (const auto& t : c.net.transitions()) out.emplace_back(t.id, t.label);
                                   return out;
                               })
        .def_property_readonly("arcs",
                               [](const CollaborationPetriNet& c) {
                                   std::vector<std::pair<std::string, std::string>> out;
                                   for (PetriNet::Index t = 0; t < c.net.transition_count(); ++t) {
                                       for (auto p : c.net.preset(t))
                                           out.emplace_back(c.net.place_id(p), c.net.transition(t).id);
                                       for (auto p : c.net.postset(t))
                                           out.emplace_back(c.net.transition(t).id, c.net.place_id(p));
                                   }
                                   return out;
                               })
        .def_property_readonly("initial_marking",
                               [](const CollaborationPetriNet& c) { return marking_dict(c.net, c.initial); })
        .def_property_readonly("final_marking",
                               [](const CollaborationPetriNet& c) { return marking_dict(c.net, c.final); })
        .def_property_readonly("resource_places", [](const CollaborationPetriNet& c) { return c.resource_places; })
        .def_property_readonly("size", [](const CollaborationPetriNet& c) { return c.net.size(); });

    m.def(
        "discover",
        [](const EventLog& log, bool drop_empty, const std::string& disc) {
            if (disc != "inductive" && disc != "flower") throw py::value_error("disc must be 'inductive' or 'flower'");
            DiscoveryOptions options;
            options.keep_empty_traces = !drop_empty;
            auto result = discover_cpn(log, disc == "flower" ? DiscoveryFn(flower_miner) : inductive_miner, options);
            return py::make_tuple(result.cpn, to_python(to_json(result.report)));
        },
        py::arg("log"), py::arg("drop_empty") = false, py::arg("disc") = "inductive",
        "Returns (model, report).");

    m.def(
        "conformance",
        [](const CollaborationPetriNet& model, const EventLog& log, std::size_t cap, bool alignment) {
            auto j = to_json(check_conformance(model, log, cap));
            if (alignment) {
                auto a = alignment_fitness(model, log, cap);
                j["alignment_fitness"] = a.fitness ? nlohmann::json(*a.fitness) : nlohmann::json("unknown");
            }
            return to_python(j);
        },
        py::arg("model"), py::arg("log"), py::arg("cap") = 100000, py::arg("alignment") = false);

    m.def("replay_fitness", [](const CollaborationPetriNet& model, const EventLog& log) {
        return replay_fitness(model, log);
    });

    m.def(
        "final_marking_reachable",
        [](const CollaborationPetriNet& model, std::size_t cap) { return to_string(final_marking_reachable(model, cap)); },
        py::arg("model"), py::arg("cap") = 100000);

    m.def(
        "playout",
        [](const CollaborationPetriNet& model, std::size_t traces, std::size_t max_steps, std::uint64_t seed,
           const std::string& stop) {
            if (stop != "final" && stop != "max-steps") throw py::value_error("stop must be 'final' or 'max-steps'");
            PlayoutConfig config;
            config.trace_count = traces;
            config.max_steps = max_steps;
            config.seed = seed;
            config.stop_policy = stop == "final" ? StopPolicy::at_final_marking : StopPolicy::max_steps;
            return playout(model, config);
        },
        py::arg("model"), py::arg("traces") = 100, py::arg("max_steps") = 1000, py::arg("seed") = 42,
        py::arg("stop") = "final");

    m.def("scenario", [](const std::string& name) { return scenario(name).build(); });
    m.def("scenario_names", [] {
        std::vector<std::string> out;
        for (const auto& s : scenarios()) out.push_back(s.name);
        return out;
    });
}
