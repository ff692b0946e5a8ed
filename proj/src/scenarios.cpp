#include "collabminer/scenarios.hpp"

#include <algorithm>
#include <map>

#include "collabminer/error.hpp"

namespace cm {

namespace {

using Op = ProcessTree::Op;

ProcessTree a(std::string label) { return ProcessTree::activity(std::move(label)); }
ProcessTree tau() { return ProcessTree::tau(); }
ProcessTree seq(std::vector<ProcessTree> c) { return ProcessTree::make(Op::sequence, std::move(c)); }
ProcessTree xor_(std::vector<ProcessTree> c) { return ProcessTree::make(Op::xor_choice, std::move(c)); }
ProcessTree and_(std::vector<ProcessTree> c) { return ProcessTree::make(Op::parallel, std::move(c)); }
ProcessTree loop(ProcessTree body, ProcessTree redo) { return ProcessTree::make(Op::loop, {std::move(body), std::move(redo)}); }
// Zero or more repetitions.
ProcessTree many(ProcessTree body) { return loop(tau(), std::move(body)); }
// One or more repetitions.
ProcessTree some(ProcessTree body) { return loop(std::move(body), tau()); }

ChannelSpec msg(std::string type, std::vector<std::string> senders, std::vector<std::string> receivers) {
    return {std::move(type), ChannelKind::message, std::move(senders), std::move(receivers)};
}
ChannelSpec res(std::string type, std::vector<std::string> sharers) {
    return {std::move(type), ChannelKind::resource, std::move(sharers), {}};
}

std::vector<Scenario> make_presets() {
    std::vector<Scenario> s;

    s.push_back({"one_way_single_1to1", "A sends one order to B",
                 {{"A", seq({a("prepare order"), a("send order"), a("archive order")})},
                  {"B", seq({a("open inbox"), a("receive order"), a("ship goods")})}},
                 {msg("order", {"send order"}, {"receive order"})}});

    s.push_back({"one_way_single_1ton", "A sends one offer, B accepts or rejects it",
                 {{"A", seq({a("prepare offer"), a("send offer"), a("archive offer")})},
                  {"B", seq({a("open inbox"), xor_({a("accept offer"), a("reject offer")}), a("close case")})}},
                 {msg("offer", {"send offer"}, {"accept offer", "reject offer"})}});

    s.push_back({"one_way_single_mton", "offer sent by mail or fax, accepted or rejected",
                 {{"A", seq({a("prepare offer"), xor_({a("mail offer"), a("fax offer")}), a("archive offer")})},
                  {"B", seq({a("open inbox"), xor_({a("accept offer"), a("reject offer")}), a("close case")})}},
                 {msg("offer", {"mail offer", "fax offer"}, {"accept offer", "reject offer"})}});

    s.push_back({"one_way_multi_1to1", "A streams items to B",
                 {{"A", seq({a("open batch"), some(a("send item")), a("close batch")})},
                  {"B", seq({a("open stock"), many(a("store item")), a("close stock")})}},
                 {msg("item", {"send item"}, {"store item"})}});

    s.push_back({"one_way_multi_1ton", "A streams items, B stores or discards each",
                 {{"A", seq({a("open batch"), some(a("send item")), a("close batch")})},
                  {"B", seq({a("open stock"), many(xor_({a("store item"), a("discard item")})), a("close stock")})}},
                 {msg("item", {"send item"}, {"store item", "discard item"})}});

    s.push_back({"one_way_multi_mton", "items of two kinds streamed to B",
                 {{"A", seq({a("open batch"), some(xor_({a("send small item"), a("send large item")})), a("close batch")})},
                  {"B", seq({a("open stock"), many(xor_({a("store item"), a("discard item")})), a("close stock")})}},
                 {msg("item", {"send small item", "send large item"}, {"store item", "discard item"})}});

    s.push_back({"two_way_single_1to1", "request and reply between A and B",
                 {{"A", seq({a("draft request"), a("send request"), a("receive reply"), a("close request")})},
                  {"B", seq({a("open desk"), a("receive request"), a("send reply"), a("close desk")})}},
                 {msg("request", {"send request"}, {"receive request"}),
                  msg("reply", {"send reply"}, {"receive reply"})}});

    s.push_back({"two_way_single_1ton", "request and reply, reply accepted or escalated",
                 {{"A", seq({a("draft request"), a("send request"), xor_({a("accept reply"), a("escalate reply")}),
                             a("close request")})},
                  {"B", seq({a("open desk"), a("receive request"), a("send reply"), a("close desk")})}},
                 {msg("request", {"send request"}, {"receive request"}),
                  msg("reply", {"send reply"}, {"accept reply", "escalate reply"})}});

    s.push_back({"two_way_single_mton", "request over two channels, reply handled two ways",
                 {{"A", seq({a("draft request"), xor_({a("post request"), a("email request")}),
                             xor_({a("accept reply"), a("escalate reply")}), a("close request")})},
                  {"B", seq({a("open desk"), xor_({a("clerk takes request"), a("manager takes request")}),
                             xor_({a("send short reply"), a("send long reply")}), a("close desk")})}},
                 {msg("request", {"post request", "email request"}, {"clerk takes request", "manager takes request"}),
                  msg("reply", {"send short reply", "send long reply"}, {"accept reply", "escalate reply"})}});

    s.push_back({"two_way_multi_mton", "repeated question and answer rounds",
                 {{"A", seq({a("open dialogue"), some(seq({xor_({a("ask by phone"), a("ask by mail")}),
                                                            xor_({a("read answer"), a("file answer")})})),
                             a("close dialogue")})},
                  {"B", seq({a("open helpdesk"), many(seq({a("take question"),
                                                            xor_({a("answer briefly"), a("answer in detail")})})),
                             a("close helpdesk")})}},
                 {msg("question", {"ask by phone", "ask by mail"}, {"take question"}),
                  msg("answer", {"answer briefly", "answer in detail"}, {"read answer", "file answer"})}});

    s.push_back({"multilateral_single_1ton", "A broadcasts a notice read by B or C",
                 {{"A", seq({a("prepare notice"), a("broadcast notice"), a("archive notice")})},
                  {"B", seq({a("B opens"), xor_({a("B reads notice"), a("B idles")}), a("B closes")})},
                  {"C", seq({a("C opens"), xor_({a("C reads notice"), a("C idles")}), a("C closes")})}},
                 {msg("notice", {"broadcast notice"}, {"B reads notice", "C reads notice"})}});

    s.push_back({"multilateral_multi_mton", "news posted repeatedly, read by B and C",
                 {{"A", seq({a("open desk"), some(xor_({a("post news online"), a("post news in print")})),
                             a("close desk")})},
                  {"B", seq({a("B subscribes"), many(a("B reads news")), a("B unsubscribes")})},
                  {"C", seq({a("C subscribes"), many(a("C reads news")), a("C unsubscribes")})}},
                 {msg("news", {"post news online", "post news in print"}, {"B reads news", "C reads news"})}});

    s.push_back({"sync_only", "A and B sign a contract together",
                 {{"A", seq({a("A prepares"), a("sign contract"), a("A files")})},
                  {"B", seq({a("B drafts"), xor_({a("B reviews"), tau()}), a("sign contract"), a("B files")})}},
                 {}});

    s.push_back({"resource_only", "A and B share a scanner",
                 {{"A", seq({a("A admits"), a("A scans"), a("A reports")})},
                  {"B", seq({a("B admits"), a("B scans"), a("B reports")})}},
                 {res("scanner", {"A scans", "B scans"})}});

    s.push_back({"handover", "A hands a case over to B",
                 {{"A", seq({a("register case"), a("assess case"), a("hand over case")})},
                  {"B", seq({a("take over case"), a("treat case"), a("close case")})}},
                 {msg("case file", {"hand over case"}, {"take over case"})}});

    s.push_back({"all_types", "message, handover, shared resource and synchronous task",
                 {{"Ward", seq({a("register"), a("send referral"), a("receive results"), a("joint consult"),
                                a("discharge")})},
                  {"Clinic", seq({a("receive referral"), a("scan at clinic"), a("joint consult"), a("write report")})},
                  {"Lab", seq({a("prepare sample"), a("scan at lab"), a("send results"), a("close lab case")})}},
                 {msg("referral", {"send referral"}, {"receive referral"}),
                  msg("results", {"send results"}, {"receive results"}),
                  res("ct scanner", {"scan at clinic", "scan at lab"})}});

    s.push_back({"parallel_block", "A checks and invoices in parallel, B pays",
                 {{"A", seq({a("open order"), and_({a("check stock"), a("send invoice")}), a("close order")})},
                  {"B", seq({a("open account"), a("receive invoice"), a("pay invoice")})}},
                 {msg("invoice", {"send invoice"}, {"receive invoice"})}});

    s.push_back({"optional_partner", "C takes part in some cases only",
                 {{"A", seq({a("open case"), a("send plan"),
                             xor_({a("solve alone"), seq({a("delegate task"), a("receive result")})}),
                             a("close case")})},
                  {"B", seq({a("receive plan"), a("approve plan")})},
                  {"C", xor_({tau(), seq({a("accept task"), a("work on task"), a("return result")})})}},
                 {msg("plan", {"send plan"}, {"receive plan"}),
                  msg("task", {"delegate task"}, {"accept task"}),
                  msg("result", {"return result"}, {"receive result"})}});

    s.push_back({"mixed_two_concepts", "rounds of requests, a shared printer and a joint review",
                 {{"A", seq({a("A opens"), some(seq({a("send request"), a("receive reply")})), a("A prints"),
                             a("joint review"), a("A closes")})},
                  {"B", seq({a("B opens"), many(seq({a("receive request"), xor_({a("reply now"), a("reply later")})})),
                             a("B prints"), a("joint review"), a("B closes")})}},
                 {msg("request", {"send request"}, {"receive request"}),
                  msg("reply", {"reply now", "reply later"}, {"receive reply"}),
                  res("printer", {"A prints", "B prints"})}});

    std::sort(s.begin(), s.end(), [](const Scenario& x, const Scenario& y) { return x.name < y.name; });
    return s;
}

}  // namespace

CollaborationPetriNet Scenario::build() const {
    std::vector<std::pair<std::string, WorkflowNet>> nets;
    for (const auto& [c, tree] : concepts) nets.emplace_back(c, tree_to_wfnet(tree));
    auto wc = build_workflow_collection(std::move(nets));

    std::map<std::string, IdSet> by_label;
    for (const auto& [id, ref] : wc.transitions)
        if (auto label = wc.label(id)) by_label[*label].insert(id);
    auto resolve = [&](const std::vector<std::string>& labels) {
        IdSet out;
        for (const auto& l : labels) {
            auto it = by_label.find(l);
            if (it == by_label.end()) throw Error("scenario " + name + ": no transition labelled '" + l + "'");
            out.insert(it->second.begin(), it->second.end());
        }
        return out;
    };

    CollaborationPattern cp;
    for (const auto& ch : channels) {
        if (ch.kind == ChannelKind::resource) {
            auto place = resource_place_id(ch.type);
            auto sharers = resolve(ch.senders);
            cp.async_places.insert(place);
            cp.resource_places.insert(place);
            cp.allocation[place] = 1;
            cp.channels.push_back({place, ch.type, ChannelKind::resource, sharers, sharers});
        } else {
            auto place = message_place_id(ch.type);
            cp.async_places.insert(place);
            cp.channels.push_back({place, ch.type, ChannelKind::message, resolve(ch.senders), resolve(ch.receivers)});
        }
    }
    cp.fusions = equal_label_fusions(wc);
    return compose(wc, cp);
}

const std::vector<Scenario>& scenarios() {
    static const std::vector<Scenario> presets = make_presets();
    return presets;
}

const Scenario& scenario(std::string_view name) {
    for (const auto& s : scenarios())
        if (s.name == name) return s;
    throw Error("unknown scenario '" + std::string(name) + "'");
}

std::vector<std::string> interaction_fixtures() {
    return {"all_types",           "handover",            "multilateral_multi_mton", "multilateral_single_1ton",
            "one_way_multi_1to1",  "one_way_multi_1ton",  "one_way_multi_mton",      "one_way_single_1to1",
            "one_way_single_1ton", "one_way_single_mton", "parallel_block",          "resource_only",
            "sync_only",           "two_way_multi_mton",  "two_way_single_1to1",     "two_way_single_1ton",
            "two_way_single_mton"};
}

}  // namespace cm
