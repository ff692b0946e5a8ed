#include "collabminer/pnml.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "collabminer/error.hpp"
#include "text_util.hpp"

namespace cm {

namespace {

namespace pt = boost::property_tree;

constexpr const char* kTool = "collabminer";

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string dot_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        if (c == '\n') {
            out += "\\n";
            continue;
        }
        out += c;
    }
    return out;
}

void write_marking_places(std::ostream& out, const PetriNet& net, const Marking& m, const char* indent) {
    for (const auto& [place, count] : marking_pairs(net, m))
        out << indent << "<place idref=\"" << xml_escape(place) << "\"><text>" << count << "</text></place>\n";
}

}  // namespace

void write_pnml(const CollaborationPetriNet& cpn, std::ostream& out, const std::string& name) {
    const auto& net = cpn.net;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<pnml>\n";
    out << "  <net id=\"" << xml_escape(name) << "\" type=\"http://www.pnml.org/version-2009/grammar/ptnet\">\n";
    out << "    <name><text>" << xml_escape(name) << "</text></name>\n";
    out << "    <page id=\"page1\">\n";
    for (PetriNet::Index p = 0; p < net.place_count(); ++p) {
        const auto id = xml_escape(net.place_id(p));
        out << "      <place id=\"" << id << "\">\n";
        out << "        <name><text>" << id << "</text></name>\n";
        if (cpn.initial[p] > 0)
            out << "        <initialMarking><text>" << cpn.initial[p] << "</text></initialMarking>\n";
        out << "      </place>\n";
    }
    for (PetriNet::Index t = 0; t < net.transition_count(); ++t) {
        const auto& tr = net.transition(t);
        const auto id = xml_escape(tr.id);
        out << "      <transition id=\"" << id << "\">\n";
        if (tr.label) {
            out << "        <name><text>" << xml_escape(*tr.label) << "</text></name>\n";
        } else {
            out << "        <name><text>" << id << "</text></name>\n";
            out << "        <toolspecific tool=\"ProM\" version=\"6.4\" activity=\"$invisible$\" localNodeID=\"" << id
                << "\"/>\n";
        }
        out << "      </transition>\n";
    }
    std::size_t arc = 0;
    for (PetriNet::Index t = 0; t < net.transition_count(); ++t) {
        const auto id = xml_escape(net.transition(t).id);
        for (auto p : net.preset(t))
            out << "      <arc id=\"a" << ++arc << "\" source=\"" << xml_escape(net.place_id(p)) << "\" target=\""
                << id << "\"/>\n";
        for (auto p : net.postset(t))
            out << "      <arc id=\"a" << ++arc << "\" source=\"" << id << "\" target=\""
                << xml_escape(net.place_id(p)) << "\"/>\n";
    }
    out << "    </page>\n";
    out << "    <finalmarkings>\n      <marking>\n";
    write_marking_places(out, net, cpn.final, "        ");
    out << "      </marking>\n    </finalmarkings>\n";

    out << "    <toolspecific tool=\"" << kTool << "\" version=\"1\">\n";
    out << "      <finalMarking>\n";
    write_marking_places(out, net, cpn.final, "        ");
    out << "      </finalMarking>\n";
    for (const auto& p : cpn.resource_places) out << "      <resourcePlace idref=\"" << xml_escape(p) << "\"/>\n";
    for (const auto& [t, prov] : cpn.provenance) {
        out << "      <provenance transition=\"" << xml_escape(t) << "\">\n";
        auto list = [&](const char* tag, const IdSet& values) {
            for (const auto& v : values) out << "        <" << tag << ">" << xml_escape(v) << "</" << tag << ">\n";
        };
        list("concept", prov.concepts);
        list("fused", prov.fused);
        list("send", prov.sends);
        list("receive", prov.receives);
        list("resource", prov.resources);
        out << "      </provenance>\n";
    }
    out << "    </toolspecific>\n";
    out << "  </net>\n</pnml>\n";
}

std::string to_pnml(const CollaborationPetriNet& cpn, const std::string& name) {
    std::ostringstream out;
    write_pnml(cpn, out, name);
    return out.str();
}

namespace {

std::string text_of(const pt::ptree& node, const char* child) {
    auto t = node.get_optional<std::string>(std::string(child) + ".text");
    return t ? detail::trim(*t) : std::string();
}

std::uint32_t parse_count(const std::string& s, const std::string& what) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size() || v < 0 || v > UINT32_MAX) throw std::invalid_argument(s);
        return static_cast<std::uint32_t>(v);
    } catch (const std::logic_error&) {
        throw ParseError(what + ": invalid token count '" + s + "'");
    }
}

struct RawNet {
    std::vector<std::pair<std::string, std::uint32_t>> places;
    std::vector<std::pair<std::string, std::optional<std::string>>> transitions;
    std::vector<std::pair<std::string, std::string>> arcs;
};

void collect_page(const pt::ptree& page, RawNet& raw) {
    for (const auto& [tag, node] : page) {
        if (tag == "place") {
            auto id = node.get<std::string>("<xmlattr>.id", "");
            if (id.empty()) throw ParseError("place without id");
            auto marking = text_of(node, "initialMarking");
            raw.places.emplace_back(id, marking.empty() ? 0 : parse_count(marking, "place " + id));
        } else if (tag == "transition") {
            auto id = node.get<std::string>("<xmlattr>.id", "");
            if (id.empty()) throw ParseError("transition without id");
            bool invisible = false;
            for (const auto& [ctag, child] : node)
                if (ctag == "toolspecific" && child.get<std::string>("<xmlattr>.activity", "") == "$invisible$")
                    invisible = true;
            auto name = text_of(node, "name");
            std::optional<std::string> label;
            if (!invisible && !name.empty()) label = name;
            raw.transitions.emplace_back(id, label);
        } else if (tag == "arc") {
            auto src = node.get<std::string>("<xmlattr>.source", "");
            auto dst = node.get<std::string>("<xmlattr>.target", "");
            if (src.empty() || dst.empty()) throw ParseError("arc without source or target");
            auto weight = text_of(node, "inscription");
            if (!weight.empty() && parse_count(weight, "arc " + src + "->" + dst) != 1)
                throw ParseError("arc " + src + "->" + dst + ": weighted arcs are not supported");
            raw.arcs.emplace_back(src, dst);
        } else if (tag == "page") {
            collect_page(node, raw);
        }
    }
}

std::vector<std::pair<std::string, std::uint32_t>> read_marking(const pt::ptree& node) {
    std::vector<std::pair<std::string, std::uint32_t>> out;
    for (const auto& [tag, place] : node) {
        if (tag != "place") continue;
        auto id = place.get<std::string>("<xmlattr>.idref", "");
        auto text = detail::trim(place.get<std::string>("text", ""));
        out.emplace_back(id, text.empty() ? 1 : parse_count(text, "final marking of " + id));
    }
    return out;
}

}  // namespace

CollaborationPetriNet parse_pnml(std::istream& in) {
    pt::ptree doc;
    try {
        pt::read_xml(in, doc, pt::xml_parser::trim_whitespace);
    } catch (const pt::xml_parser_error& e) {
        throw ParseError(e.message(), e.line());
    }
    auto pnml = doc.get_child_optional("pnml");
    if (!pnml) throw ParseError("missing <pnml> root element");
    auto net_node = pnml->get_child_optional("net");
    if (!net_node) throw ParseError("missing <net> element");

    RawNet raw;
    collect_page(*net_node, raw);

    CollaborationPetriNet cpn;
    auto& net = cpn.net;
    try {
        for (const auto& [id, tokens] : raw.places) net.add_place(id);
        for (const auto& [id, label] : raw.transitions) net.add_transition(id, label);
        for (const auto& [src, dst] : raw.arcs) net.add_arc(src, dst);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(e.what());
    }
    cpn.initial = Marking(net.place_count());
    for (std::size_t p = 0; p < raw.places.size(); ++p) cpn.initial.tokens[p] = raw.places[p].second;

    std::optional<std::vector<std::pair<std::string, std::uint32_t>>> final;
    for (const auto& [tag, node] : *net_node) {
        if (tag != "toolspecific" || node.get<std::string>("<xmlattr>.tool", "") != kTool) continue;
        for (const auto& [ctag, child] : node) {
            if (ctag == "finalMarking") {
                final = read_marking(child);
            } else if (ctag == "resourcePlace") {
                auto id = child.get<std::string>("<xmlattr>.idref", "");
                if (!net.find_place(id)) throw ParseError("resource place '" + id + "' is not a place");
                cpn.resource_places.insert(id);
            } else if (ctag == "provenance") {
                auto t = child.get<std::string>("<xmlattr>.transition", "");
                if (!net.find_transition(t)) throw ParseError("provenance for unknown transition '" + t + "'");
                auto& prov = cpn.provenance[t];
                for (const auto& [f, v] : child) {
                    auto value = v.get_value<std::string>();
                    if (f == "concept") prov.concepts.insert(value);
                    else if (f == "fused") prov.fused.insert(value);
                    else if (f == "send") prov.sends.insert(value);
                    else if (f == "receive") prov.receives.insert(value);
                    else if (f == "resource") prov.resources.insert(value);
                }
            }
        }
    }
    if (!final) {
        if (auto fm = net_node->get_child_optional("finalmarkings"))
            if (auto marking = fm->get_child_optional("marking")) final = read_marking(*marking);
    }
    if (!final) {
        std::optional<PetriNet::Index> sink;
        for (PetriNet::Index p = 0; p < net.place_count(); ++p) {
            if (!net.consumers(p).empty()) continue;
            if (sink) throw ParseError("no final marking given and the net has several sink places");
            sink = p;
        }
        if (!sink) throw ParseError("no final marking given and the net has no sink place");
        final = {{net.place_id(*sink), 1}};
    }
    for (const auto& [id, count] : *final)
        if (!net.find_place(id)) throw ParseError("final marking names unknown place '" + id + "'");
    cpn.final = make_marking(net, *final);
    return cpn;
}

CollaborationPetriNet read_pnml(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    try {
        return parse_pnml(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_pnml_file(const CollaborationPetriNet& cpn, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    write_pnml(cpn, out, path.stem().string());
}

void write_dot(const CollaborationPetriNet& cpn, std::ostream& out) {
    const auto& net = cpn.net;
    out << "digraph cpn {\n  rankdir=LR;\n  node [fontname=\"Helvetica\", fontsize=10];\n";
    for (PetriNet::Index p = 0; p < net.place_count(); ++p) {
        const auto id = dot_escape(net.place_id(p));
        out << "  \"" << id << "\" [shape=circle, label=\"" << (cpn.initial[p] ? std::to_string(cpn.initial[p]) : "")
            << "\", xlabel=\"" << id << "\"";
        if (cpn.final[p]) out << ", peripheries=2";
        out << "];\n";
    }
    for (PetriNet::Index t = 0; t < net.transition_count(); ++t) {
        const auto& tr = net.transition(t);
        const auto id = dot_escape(tr.id);
        if (tr.label)
            out << "  \"" << id << "\" [shape=box, label=\"" << dot_escape(*tr.label) << "\"];\n";
        else
            out << "  \"" << id << "\" [shape=box, style=filled, fillcolor=black, label=\"\", width=0.15];\n";
    }
    for (PetriNet::Index t = 0; t < net.transition_count(); ++t) {
        const auto id = dot_escape(net.transition(t).id);
        for (auto p : net.preset(t)) out << "  \"" << dot_escape(net.place_id(p)) << "\" -> \"" << id << "\";\n";
        for (auto p : net.postset(t)) out << "  \"" << id << "\" -> \"" << dot_escape(net.place_id(p)) << "\";\n";
    }
    out << "}\n";
}

std::string to_dot(const CollaborationPetriNet& cpn) {
    std::ostringstream out;
    write_dot(cpn, out);
    return out.str();
}

}  // namespace cm
