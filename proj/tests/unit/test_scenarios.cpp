#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "collabminer/conformance.hpp"
#include "collabminer/error.hpp"
#include "collabminer/generator.hpp"
#include "collabminer/scenarios.hpp"

using namespace cm;

TEST_CASE("preset catalogue") {
    const auto& all = scenarios();
    CHECK(all.size() == interaction_fixtures().size() + 2);
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1].name < all[i].name);
    for (const auto& name : interaction_fixtures()) CHECK(scenario(name).name == name);
    CHECK_THROWS_AS(scenario("nope"), Error);
}

TEST_CASE("every preset composes to a sound-looking net") {
    for (const auto& s : scenarios()) {
        INFO(s.name);
        auto cpn = s.build();
        CHECK(final_marking_reachable(cpn, 100000) == Reachability::yes);
        for (const auto& [concept_id, tree] : s.concepts) CHECK(tree.valid());
        for (const auto& ch : s.channels) {
            auto place = ch.kind == ChannelKind::message ? message_place_id(ch.type) : resource_place_id(ch.type);
            CHECK(cpn.net.find_place(place));
        }
    }
}

TEST_CASE("rediscovery recovers the collaboration types") {
    auto expect = [](const std::string& name, std::set<CollabType> types) {
        INFO(name);
        PlayoutConfig cfg;
        cfg.trace_count = 200;
        auto result = discover_cpn(playout(scenario(name).build(), cfg));
        CHECK(result.report.types == types);
    };
    expect("all_types", {CollabType::message, CollabType::handover, CollabType::resource, CollabType::synchronous});
    expect("sync_only", {CollabType::synchronous});
    expect("resource_only", {CollabType::resource});
    expect("one_way_single_1to1", {CollabType::message});
}
