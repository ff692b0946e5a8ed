#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "collabminer/collab_discovery.hpp"
#include "collabminer/composer.hpp"
#include "collabminer/inductive.hpp"

namespace cm {

/// A channel given by activity labels; every transition carrying one of the
/// labels is connected. Resource channels list their sharing activities in
/// `senders` and leave `receivers` empty.
struct ChannelSpec {
    std::string type;
    ChannelKind kind = ChannelKind::message;
    std::vector<std::string> senders;
    std::vector<std::string> receivers;
};

/// A hand-made collaboration: one process tree per concept plus channels.
/// Equally-labelled transitions of different concepts are fused.
struct Scenario {
    std::string name;
    std::string description;
    std::vector<std::pair<std::string, ProcessTree>> concepts;
    std::vector<ChannelSpec> channels;

    CollaborationPetriNet build() const;
};

/// All preset scenarios, ordered by name.
const std::vector<Scenario>& scenarios();
/// Throws Error for unknown names.
const Scenario& scenario(std::string_view name);
/// The presets covering the interaction-pattern cells and the
/// synchronous, resource and handover variants.
std::vector<std::string> interaction_fixtures();

}  // namespace cm
