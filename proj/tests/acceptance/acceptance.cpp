// Acceptance run: one PASS/FAIL line per criterion, exit code 1 on any FAIL.
#include <sys/resource.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "collabminer/cli.hpp"
#include "collabminer/conformance.hpp"
#include "collabminer/generator.hpp"
#include "collabminer/pnml.hpp"
#include "collabminer/scenarios.hpp"
#include "../oracles.hpp"

using namespace cm;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::cout << (ok ? "PASS" : "FAIL") << "  " << id << "  " << what << "  [" << detail << "]" << std::endl;
    if (!ok) ++failures;
}

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

struct FixtureRun {
    std::string name;
    EventLog log;
    DiscoveryResult found;
};

std::vector<FixtureRun> fixture_runs;

AcceptingNet flower_for(const EventLog& log) {
    std::set<std::string> labels;
    for (const auto& e : log.entries())
        for (const auto& ev : e.trace.events) labels.insert(ev.activity);
    return tree_to_wfnet(flower_tree({labels.begin(), labels.end()})).accepting();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// 1. Playout, rediscovery, exact fitness and reachable final marking per fixture.
void perfect_fitness() {
    const auto t0 = Clock::now();
    std::size_t fit = 0, reach = 0;
    std::string bad;
    const auto names = interaction_fixtures();
    for (const auto& name : names) {
        PlayoutConfig cfg;
        cfg.trace_count = 500;
        auto log = playout(scenario(name).build(), cfg);
        auto found = discover_cpn(log);
        const double f = replay_fitness(found.cpn, log);
        const auto r = final_marking_reachable(found.cpn, 100000);
        if (f == 1.0) ++fit;
        if (r == Reachability::yes) ++reach;
        if (f != 1.0 || r != Reachability::yes) bad += " " + name + "(f=" + fmt(f) + ", reach=" + to_string(r) + ")";
        fixture_runs.push_back({name, std::move(log), std::move(found)});
    }
    const double secs = seconds_since(t0);
    const bool ok = fit == names.size() && reach == names.size() && names.size() >= 12 && secs < 120;
    report(1, ok, "perfect fitness on rediscovered fixtures",
           std::to_string(names.size()) + " fixtures x 500 traces; fitness=1 exact: " + std::to_string(fit) +
               "; reachable: " + std::to_string(reach) + "; " + fmt(secs, 1) + " s (limit 120 s)" + bad);
}

// 2. Concept C absent from 40% of the traces.
void empty_projections() {
    const auto cpn = scenario("optional_partner").build();
    PlayoutConfig cfg;
    cfg.trace_count = 8000;
    cfg.seed = 2;
    auto pool = playout(cpn, cfg);
    std::vector<Trace> with_c, without_c;
    for (const auto& e : pool.entries())
        for (std::size_t k = 0; k < e.multiplicity; ++k) {
            const bool has_c = std::any_of(e.trace.events.begin(), e.trace.events.end(),
                                           [](const Event& ev) { return ev.concepts.count("C"); });
            auto& bucket = has_c ? with_c : without_c;
            Trace t = e.trace;
            t.case_id += "." + std::to_string(k);
            bucket.push_back(std::move(t));
        }
    if (with_c.size() < 300 || without_c.size() < 200) {
        report(2, false, "empty projections are skipped", "pool too small");
        return;
    }
    EventLog log;
    for (std::size_t i = 0; i < 300; ++i) log.add(with_c[i]);
    for (std::size_t i = 0; i < 200; ++i) log.add(without_c[i]);

    const double keep = replay_fitness(discover_cpn(log).cpn, log);
    DiscoveryOptions drop;
    drop.keep_empty_traces = false;
    const double dropped = replay_fitness(discover_cpn(log, inductive_miner, drop).cpn, log);
    report(2, keep == 1.0 && dropped < 1.0, "empty projections are skipped",
           "C absent from 200/500 traces; keep empty traces: fitness " + fmt(keep) + " (want 1); drop: " +
               fmt(dropped) + " (want < 1)");
}

// 3. Resource place without its release arcs.
void unreachable_final() {
    auto cpn = scenario("resource_only").build();
    const auto place = resource_place_id("scanner");
    std::size_t removed = 0;
    for (auto t : cpn.net.consumers(cpn.net.place(place)))
        removed += cpn.net.remove_arc(cpn.net.transition(t).id, place);
    const auto r = final_marking_reachable(cpn, 100000);
    report(3, removed > 0 && r == Reachability::no, "unreachable final marking detected",
           std::to_string(removed) + " release arcs removed; final_reachable=" + to_string(r) + " (cap 100000)");
}

// 4. Worked example.
void worked_example() {
    auto log = oracle::emergency_log();
    auto info = extract_collab_info(log);
    auto found = discover_cpn(log);
    const auto& cp = found.report.pattern;
    const auto& wc = found.collection;

    const bool senders = info.senders.count("photo form") && info.senders.at("photo form") == IdSet{"plan imaging"};
    const bool sharers =
        info.sharers.count("charging system") && info.sharers.at("charging system") == IdSet{"rescue", "reserve"};

    bool self_loop = false;
    for (const auto& c : cp.channels) {
        if (c.type != "charging system") continue;
        IdSet labels;
        for (const auto& t : c.senders) labels.insert(*wc.label(t));
        self_loop = c.kind == ChannelKind::resource && c.senders == c.receivers &&
                    labels == IdSet{"rescue", "reserve"};
        const auto& net = found.cpn.net;
        const auto p = net.place(c.place);
        for (const auto& t : c.senders) {
            const auto i = net.transition_index(t);
            const auto& pre = net.preset(i);
            const auto& post = net.postset(i);
            self_loop = self_loop && std::count(pre.begin(), pre.end(), p) && std::count(post.begin(), post.end(), p);
        }
    }
    bool unit = !cp.allocation.empty();
    for (const auto& [place, n] : cp.allocation) unit = unit && n == 1;
    report(4, senders && sharers && self_loop && unit, "worked example extraction and pattern",
           std::string("senders(photo form)={plan imaging}: ") + (senders ? "yes" : "no") +
               "; sharers(charging system)={rescue, reserve}: " + (sharers ? "yes" : "no") +
               "; charging system self-loop: " + (self_loop ? "yes" : "no") + "; ra=1: " + (unit ? "yes" : "no"));
}

// 5. Alignments agree with replay and with the brute-force oracle.
void metric_cross_check() {
    std::size_t pairs = 0, agree = 0;
    for (const auto& run : fixture_runs) {
        if (replay_fitness(run.found.cpn, run.log) != 1.0) continue;
        ++pairs;
        if (alignment_fitness(run.found.cpn, run.log, 100000).fitness == std::optional<double>(1.0)) ++agree;
    }

    oracle::TreeGen gen(2024);
    std::size_t random_pairs = 0, traces = 0, equal = 0;
    while (random_pairs < 20) {
        std::vector<std::string> letters;
        for (std::size_t i = 0, n = 2 + gen.uniform(7); i < n; ++i) letters.push_back(std::string(1, 'a' + i));
        auto model = tree_to_wfnet(gen.tree(letters, 3)).accepting();
        std::vector<oracle::Seq> log;
        for (std::size_t i = 0, n = 1 + gen.uniform(20); i < n; ++i) {
            oracle::Seq t(gen.uniform(7));
            for (auto& x : t) x = letters[gen.uniform(letters.size())];
            log.push_back(std::move(t));
        }
        std::vector<std::optional<std::uint64_t>> brute;
        bool enumerable = true;
        for (const auto& t : log) {
            brute.push_back(oracle::brute_alignment_cost(model, t, 10000));
            enumerable = enumerable && brute.back();
        }
        if (!enumerable) continue;
        ++random_pairs;
        for (std::size_t i = 0; i < log.size(); ++i, ++traces)
            if (alignment_cost(model, log[i], 100000) == brute[i]) ++equal;
    }
    report(5, pairs > 0 && agree == pairs && equal == traces, "alignment fitness cross-validation",
           "fitness-1 pairs with alignment fitness 1: " + std::to_string(agree) + "/" + std::to_string(pairs) +
               "; random pairs: " + std::to_string(random_pairs) + ", traces with cost equal to the oracle: " +
               std::to_string(equal) + "/" + std::to_string(traces));
}

// 6. Discovered models are more precise than the flower model; a model whose
// language is the log has precision 1.
void precision_order() {
    std::size_t better = 0;
    std::string worst;
    double min_gap = 1.0;
    for (const auto& run : fixture_runs) {
        const double p = escaping_edges_precision(run.found.cpn, run.log).precision;
        const double f = escaping_edges_precision(flower_for(run.log), run.log).precision;
        if (p > f) ++better;
        if (p - f < min_gap) {
            min_gap = p - f;
            worst = run.name + " " + fmt(p) + " vs " + fmt(f);
        }
    }

    // Models whose reachability-graph language is finite and has no dead-end
    // prefixes, with the log set to their whole language.
    using Op = ProcessTree::Op;
    auto A = [](const char* l) { return ProcessTree::activity(l); };
    std::vector<std::pair<AcceptingNet, std::set<oracle::Seq>>> models;
    std::size_t dead_ends = 0;
    auto consider = [&](const AcceptingNet& m) {
        auto l16 = oracle::language(m, 16, 20000, 50000);
        auto l24 = oracle::language(m, 24, 20000, 50000);
        if (!l16 || !l24 || *l16 != *l24) return;
        auto pre = oracle::prefixes(m, 24, 50000);
        if (!pre || *pre != oracle::prefix_closure(*l24)) {
            ++dead_ends;
            return;
        }
        models.emplace_back(m, *l24);
    };
    consider(tree_to_wfnet(ProcessTree::make(Op::sequence, {A("a"), ProcessTree::make(Op::xor_choice, {A("b"), A("c")}),
                                                            ProcessTree::make(Op::parallel, {A("d"), A("e")})}))
                 .accepting());
    for (const auto& run : fixture_runs) consider(run.found.cpn);
    std::size_t exact = 0;
    for (const auto& [m, lang] : models) {
        std::vector<oracle::Seq> words(lang.begin(), lang.end());
        if (escaping_edges_precision(m, oracle::simple_log(words)).precision == 1.0) ++exact;
    }
    report(6, better == fixture_runs.size() && !models.empty() && exact == models.size(), "precision above the flower model",
           "discovered > flower on " + std::to_string(better) + "/" + std::to_string(fixture_runs.size()) +
               " fixtures (smallest margin: " + worst + "); language = log gives precision 1 on " +
               std::to_string(exact) + "/" + std::to_string(models.size()) + " models (" + std::to_string(dead_ends) +
               " finite models skipped for dead-end prefixes)");
}

// 7. End-to-end discovery on a 100k-event log.
void performance(const fs::path& dir) {
    PlayoutConfig cfg;
    cfg.trace_count = 9000;
    cfg.seed = 7;
    const auto csv = dir / "large.csv";
    write_log(playout(scenario("mixed_two_concepts").build(), cfg), csv);

    const auto t0 = Clock::now();
    auto log = read_log(csv);
    auto found = discover_cpn(log);
    write_pnml_file(found.cpn, dir / "large.pnml");
    const double secs = seconds_since(t0);

    rusage usage{};
    getrusage(RUSAGE_SELF, &usage);
    const double peak_mb = usage.ru_maxrss / 1024.0;  // ru_maxrss is in KiB on Linux
    const auto events = log.event_count();
    const bool ok = events >= 100000 && found.collection.nets.size() == 2 && secs < 60 && peak_mb < 2048;
    report(7, ok, "discovery on a 100k-event log",
           std::to_string(events) + " events, " + std::to_string(found.collection.nets.size()) +
               " concepts; read+discover+write " + fmt(secs, 2) + " s (limit 60 s); peak RSS " + fmt(peak_mb, 1) +
               " MB (limit 2048 MB)");
}

// 8. Byte-identical repeated CLI runs.
void determinism(const fs::path& dir) {
    std::ostringstream sink;
    auto run = [&](std::vector<std::string> args) { return cli::run(args, sink, sink); };
    const auto model = (dir / "model.pnml").string();
    bool ok = run({"export", "--scenario", "all_types", "--out", model}) == 0;
    std::vector<std::string> compared;
    for (const char* k : {"1", "2"}) {
        fs::create_directories(dir / k);
        const auto sub = [&](const char* f) { return (dir / k / f).string(); };
        ok = ok && run({"playout", "--model", model, "--out", sub("log.csv"), "-n", "300", "--seed", "9"}) == 0;
        ok = ok && run({"playout", "--model", model, "--out", sub("log.xes"), "-n", "300", "--seed", "9"}) == 0;
        ok = ok && run({"discover", "--in", (dir / "1" / "log.csv").string(), "--out", sub("found.pnml")}) == 0;
    }
    std::size_t same = 0;
    const std::vector<std::string> files{"log.csv", "log.xes", "found.pnml", "found.dot", "found.report.json"};
    for (const auto& f : files) same += slurp(dir / "1" / f) == slurp(dir / "2" / f) && !slurp(dir / "1" / f).empty();
    report(8, ok && same == files.size(), "deterministic discover and playout",
           std::to_string(same) + "/" + std::to_string(files.size()) + " outputs byte-identical across two runs");
}

}  // namespace

int main() {
    const auto dir = fs::temp_directory_path() / "collabminer_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    try {
        perfect_fitness();
        empty_projections();
        unreachable_final();
        worked_example();
        metric_cross_check();
        precision_order();
        performance(dir);
        determinism(dir);
    } catch (const std::exception& e) {
        std::cout << "FAIL  acceptance run aborted: " << e.what() << std::endl;
        return 1;
    }
    std::cout << "SKIP  9  fitness on the original evaluation logs  [non-binding; the logs are not available offline]"
              << std::endl;
    std::cout << (failures ? "FAILED" : "ALL PASSED") << " (" << failures << " failing)" << std::endl;
    return failures ? 1 : 0;
}
