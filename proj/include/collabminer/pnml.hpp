#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "collabminer/composer.hpp"

namespace cm {

/// PNML (ptnet grammar). Silent transitions carry the ProM `$invisible$`
/// marker. The final marking is written twice: in the PM4Py
/// `<finalmarkings>` element and, with resource places and the provenance
/// annex, in a `<toolspecific tool="collabminer">` block.
void write_pnml(const CollaborationPetriNet& cpn, std::ostream& out, const std::string& name = "cpn");
std::string to_pnml(const CollaborationPetriNet& cpn, const std::string& name = "cpn");

/// Reads nets written by `write_pnml` and plain ptnet PNML from other tools.
/// Without any final marking, a unique place without outgoing arcs gets one
/// token. Throws ParseError on malformed input.
CollaborationPetriNet parse_pnml(std::istream& in);
CollaborationPetriNet read_pnml(const std::filesystem::path& path);
void write_pnml_file(const CollaborationPetriNet& cpn, const std::filesystem::path& path);

/// Graphviz rendering: places as circles with their initial tokens, labelled
/// transitions as boxes, silent transitions as small black boxes.
void write_dot(const CollaborationPetriNet& cpn, std::ostream& out);
std::string to_dot(const CollaborationPetriNet& cpn);

}  // namespace cm
