#include "collabminer/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "collabminer/conformance.hpp"
#include "collabminer/error.hpp"
#include "collabminer/generator.hpp"
#include "collabminer/pnml.hpp"
#include "collabminer/report.hpp"
#include "collabminer/scenarios.hpp"

namespace cm::cli {

namespace {

namespace fs = std::filesystem;

struct HardValidationError : Error {
    using Error::Error;
};

std::optional<LogFormat> parse_format(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return s == "xes" ? LogFormat::xes : LogFormat::csv;
}

void emit_json(const nlohmann::json& j, const std::string& path, std::ostream& out) {
    const std::string text = j.dump(2) + "\n";
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path);
    f << text;
}

void write_text(const std::string& text, const fs::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << text;
}

EventLog load_log(const std::string& path, const std::string& format, std::ostream& err) {
    std::vector<std::string> warnings;
    auto log = read_log(path, parse_format(format), &warnings);
    for (const auto& w : warnings) err << "warning: " << path << ": " << w << "\n";
    return log;
}

DiscoveryFn pick_disc(const std::string& name) { return name == "flower" ? DiscoveryFn(flower_miner) : inductive_miner; }

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Collaboration process discovery from multi-concept event logs", "collabminer"};
    app.require_subcommand(1);
    const std::vector<std::string> formats{"csv", "xes"};
    const std::vector<std::string> discs{"inductive", "flower"};

    std::string in, out_path, format, model, concept_name, dot, report_path, scenario_name, out_format;
    std::string disc = "inductive", stop = "final";
    std::size_t cap = 100000, traces = 100, max_steps = 1000;
    std::uint64_t seed = 42;
    bool drop_empty = false, with_alignment = false, list_scenarios = false;

    auto add_in = [&](CLI::App* sub, bool required) {
        auto* o = sub->add_option("--in,-i", in, "event log (.csv or .xes)")->check(CLI::ExistingFile);
        if (required) o->required();
        sub->add_option("--format", format, "input log format; inferred from the extension by default")
            ->check(CLI::IsMember(formats));
    };

    auto* validate_cmd = app.add_subcommand("validate", "check R1/R2 and print the validation report");
    add_in(validate_cmd, true);
    validate_cmd->add_option("--out,-o", out_path, "report file (default: stdout)");

    auto* project_cmd = app.add_subcommand("project", "keep the events of one concept");
    add_in(project_cmd, true);
    project_cmd->add_option("--concept,-c", concept_name, "collaboration concept")->required();
    project_cmd->add_option("--out,-o", out_path, "output log")->required();
    project_cmd->add_option("--out-format", out_format)->check(CLI::IsMember(formats));

    auto* discover_cmd = app.add_subcommand("discover", "discover a collaboration Petri net");
    add_in(discover_cmd, true);
    discover_cmd->add_option("--out,-o", out_path, "output PNML")->required();
    discover_cmd->add_option("--dot", dot, "DOT output (default: <out>.dot)");
    discover_cmd->add_option("--report", report_path, "JSON report (default: <out>.report.json)");
    discover_cmd->add_option("--disc", disc, "per-concept discovery algorithm")->check(CLI::IsMember(discs));
    discover_cmd->add_flag("--drop-empty", drop_empty, "drop empty traces from projected logs");

    auto* conform_cmd = app.add_subcommand("conform", "fitness, precision, size and reachability");
    add_in(conform_cmd, true);
    conform_cmd->add_option("--model,-m", model, "PNML model")->required()->check(CLI::ExistingFile);
    conform_cmd->add_option("--cap", cap, "state cap for reachability and alignments");
    conform_cmd->add_option("--out,-o", out_path, "report file (default: stdout)");
    conform_cmd->add_flag("--alignment", with_alignment, "also compute alignment-based fitness");

    auto* playout_cmd = app.add_subcommand("playout", "simulate a model into an event log");
    playout_cmd->add_option("--model,-m", model, "PNML model")->required()->check(CLI::ExistingFile);
    playout_cmd->add_option("--out,-o", out_path, "output log")->required();
    playout_cmd->add_option("--format", out_format, "output format")->check(CLI::IsMember(formats));
    playout_cmd->add_option("--traces,-n", traces, "number of traces")->check(CLI::PositiveNumber);
    playout_cmd->add_option("--max-steps", max_steps, "firings per trace")->check(CLI::PositiveNumber);
    playout_cmd->add_option("--seed", seed, "random seed");
    playout_cmd->add_option("--stop", stop, "final: traces must reach the final marking; max-steps: any end")
        ->check(CLI::IsMember({"final", "max-steps"}));

    auto* export_cmd = app.add_subcommand("export", "convert models and logs, or write preset scenarios");
    export_cmd->add_option("--model,-m", model, "PNML model to convert")->check(CLI::ExistingFile);
    add_in(export_cmd, false);
    export_cmd->add_option("--scenario", scenario_name, "preset scenario name");
    export_cmd->add_flag("--list-scenarios", list_scenarios, "print the preset names");
    export_cmd->add_option("--out,-o", out_path, "output file (.pnml, .dot, .csv, .xes)");
    export_cmd->add_option("--out-format", out_format)->check(CLI::IsMember(formats));

    auto* stats_cmd = app.add_subcommand("stats", "collaboration attributes and pattern summary");
    add_in(stats_cmd, true);
    stats_cmd->add_option("--disc", disc)->check(CLI::IsMember(discs));
    stats_cmd->add_option("--out,-o", out_path, "report file (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (validate_cmd->parsed()) {
            auto log = load_log(in, format, err);
            auto report = validate(log);
            emit_json(to_json(report, log), out_path, out);
            for (const auto& e : report.undefined_activity)
                err << "error: " << in << ": case " << e.case_id << ", event " << e.position << ": no activity\n";
            for (const auto& e : report.empty_concepts)
                err << "error: " << in << ": case " << e.case_id << ", event " << e.position << " ('" << e.activity
                    << "'): no concept\n";
            for (auto i : report.r2_flagged())
                err << "warning: case " << log.entries()[i].trace.case_id << " shows no collaboration\n";
            return report.r1_ok() && report.empty_concepts.empty() ? 0 : 1;
        }
        if (project_cmd->parsed()) {
            auto log = load_log(in, format, err);
            write_log(project(log, concept_name), out_path, parse_format(out_format));
            return 0;
        }
        if (discover_cmd->parsed()) {
            auto log = load_log(in, format, err);
            DiscoveryOptions options;
            options.keep_empty_traces = !drop_empty;
            DiscoveryResult result;
            try {
                result = discover_cpn(log, pick_disc(disc), options);
            } catch (const DiscoveryError& e) {
                throw HardValidationError(in + ": " + e.what());
            }
            const fs::path pnml_path(out_path);
            write_pnml_file(result.cpn, pnml_path);
            fs::path dot_path = dot.empty() ? fs::path(pnml_path).replace_extension(".dot") : fs::path(dot);
            write_text(to_dot(result.cpn), dot_path);
            fs::path rep = report_path.empty() ? fs::path(pnml_path).replace_extension(".report.json")
                                               : fs::path(report_path);
            emit_json(to_json(result.report), rep.string(), out);
            for (const auto& w : result.report.warnings) err << "warning: " << w << "\n";
            return 0;
        }
        if (conform_cmd->parsed()) {
            auto log = load_log(in, format, err);
            auto net = read_pnml(model);
            auto result = check_conformance(net, log, cap);
            auto j = to_json(result);
            if (with_alignment) {
                auto a = alignment_fitness(net, log, cap);
                j["alignment_fitness"] = a.fitness ? nlohmann::json(*a.fitness) : nlohmann::json("unknown");
            }
            emit_json(j, out_path, out);
            return 0;
        }
        if (playout_cmd->parsed()) {
            auto net = read_pnml(model);
            PlayoutConfig config;
            config.trace_count = traces;
            config.max_steps = max_steps;
            config.seed = seed;
            config.stop_policy = stop == "final" ? StopPolicy::at_final_marking : StopPolicy::max_steps;
            write_log(playout(net, config), out_path, parse_format(out_format));
            return 0;
        }
        if (export_cmd->parsed()) {
            if (list_scenarios) {
                for (const auto& s : scenarios()) out << s.name << "\t" << s.description << "\n";
                return 0;
            }
            const int sources = !model.empty() + !in.empty() + !scenario_name.empty();
            if (sources != 1) throw CLI::ValidationError("export", "give exactly one of --model, --in, --scenario");
            if (out_path.empty()) throw CLI::ValidationError("export", "--out is required");
            const fs::path target(out_path);
            if (!in.empty()) {
                write_log(load_log(in, format, err), target, parse_format(out_format));
                return 0;
            }
            auto net = model.empty() ? scenario(scenario_name).build() : read_pnml(model);
            if (target.extension() == ".dot")
                write_text(to_dot(net), target);
            else
                write_pnml_file(net, target);
            return 0;
        }
        if (stats_cmd->parsed()) {
            auto log = load_log(in, format, err);
            CollaborationPattern pattern;
            try {
                pattern = discover_cpn(log, pick_disc(disc)).report.pattern;
            } catch (const DiscoveryError& e) {
                throw HardValidationError(in + ": " + e.what());
            }
            emit_json(stats_json(log, pattern), out_path, out);
            return 0;
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const HardValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

}  // namespace cm::cli
