#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "collabminer/error.hpp"
#include "collabminer/petri.hpp"

using namespace cm;

namespace {

// i -> a -> p -> b -> o, plus a silent skip p -> tau -> o
PetriNet chain() {
    PetriNet net;
    for (auto id : {"i", "p", "o"}) net.add_place(id);
    net.add_transition("a", "a");
    net.add_transition("b", "b");
    net.add_transition("skip");
    net.add_arc("i", "a");
    net.add_arc("a", "p");
    net.add_arc("p", "b");
    net.add_arc("b", "o");
    net.add_arc("p", "skip");
    net.add_arc("skip", "o");
    return net;
}

}  // namespace

TEST_CASE("construction and lookups") {
    PetriNet net = chain();
    CHECK(net.place_count() == 3);
    CHECK(net.transition_count() == 3);
    CHECK(net.size() == 6);
    CHECK(net.arc_count() == 6);
    CHECK(net.place("p") == 1);
    CHECK(net.transition_index("skip") == 2);
    CHECK(net.transition(2).silent());
    CHECK_FALSE(net.find_place("a"));
    CHECK(net.has_node("a"));
    CHECK_THROWS_AS(net.add_place("a"), Error);
    CHECK_THROWS_AS(net.add_transition("p"), Error);
    CHECK_THROWS_AS(net.add_arc("i", "p"), Error);
    CHECK_THROWS_AS(net.add_arc("x", "a"), Error);
    CHECK(net.consumers(net.place("p")) == std::vector<PetriNet::Index>{1, 2});

    net.add_arc("i", "a");  // already present
    CHECK(net.arc_count() == 6);
    CHECK(net.remove_arc("p", "skip"));
    CHECK_FALSE(net.remove_arc("p", "skip"));
    CHECK(net.consumers(net.place("p")) == std::vector<PetriNet::Index>{1});
}

TEST_CASE("transitions ordered by id") {
    PetriNet net;
    net.add_transition("t2");
    net.add_transition("t10");
    net.add_transition("t1");
    CHECK(net.transitions_by_id() == std::vector<PetriNet::Index>{2, 1, 0});
}

TEST_CASE("firing rule") {
    PetriNet net = chain();
    Marking m = make_marking(net, {{"i", 1}});
    CHECK(is_enabled(net, m, 0));
    CHECK_FALSE(is_enabled(net, m, 1));
    CHECK(enabled_transitions(net, m) == std::vector<PetriNet::Index>{0});
    Marking m1 = fire(net, m, 0);
    CHECK(to_string(net, m1) == "[p:1]");
    CHECK(enabled_transitions(net, m1) == std::vector<PetriNet::Index>{1, 2});
    try {
        fire(net, m, 1);
        FAIL("expected EnablingError");
    } catch (const EnablingError& e) {
        CHECK(std::string(e.what()).find("no token in: p") != std::string::npos);
    }
    Marking two = make_marking(net, {{"p", 2}, {"i", 1}});
    CHECK(marking_pairs(net, two) == std::vector<std::pair<std::string, std::uint32_t>>{{"i", 1}, {"p", 2}});
    CHECK(two.total() == 3);
    CHECK_THROWS(make_marking(net, {{"nope", 1}}));
}

TEST_CASE("workflow net check") {
    PetriNet net = chain();
    auto check = check_workflow_net(net);
    CHECK(check.ok);
    CHECK(*check.source == net.place("i"));
    CHECK(*check.sink == net.place("o"));
    WorkflowNet wf(net);
    auto acc = wf.accepting();
    CHECK(to_string(acc.net, acc.initial) == "[i:1]");
    CHECK(to_string(acc.net, acc.final) == "[o:1]");

    PetriNet two_sources = chain();
    two_sources.add_place("j");
    two_sources.add_arc("j", "b");
    CHECK_FALSE(is_workflow_net(two_sources));
    CHECK_THROWS_AS(WorkflowNet{two_sources}, DiscoveryError);

    PetriNet dangling = chain();
    dangling.add_transition("x", "x");
    CHECK_FALSE(check_workflow_net(dangling).ok);
    CHECK_FALSE(check_workflow_net(dangling).diagnostics.empty());

    PetriNet island = chain();
    island.add_place("q");
    island.add_transition("y", "y");
    island.add_arc("q", "y");
    island.add_arc("y", "q");
    CHECK_FALSE(is_workflow_net(island));
}

TEST_CASE("reachability graph") {
    PetriNet net = chain();
    auto g = reachability_graph(net, make_marking(net, {{"i", 1}}), 100);
    CHECK(g.states.size() == 3);
    CHECK(g.edges.size() == 3);
    CHECK_FALSE(g.truncated);

    // Unbounded producer: t puts a token back on p and one on q.
    PetriNet pump;
    pump.add_place("p");
    pump.add_place("q");
    pump.add_transition("t", "t");
    pump.add_arc("p", "t");
    pump.add_arc("t", "p");
    pump.add_arc("t", "q");
    auto capped = reachability_graph(pump, make_marking(pump, {{"p", 1}}), 10);
    CHECK(capped.truncated);
    CHECK(capped.states.size() == 10);
}
