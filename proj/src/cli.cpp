#include "remixgraph/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "remixgraph/errors.hpp"
#include "remixgraph/ingest.hpp"
#include "remixgraph/metrics.hpp"
#include "remixgraph/recommend.hpp"
#include "remixgraph/render.hpp"
#include "remixgraph/synth.hpp"

namespace remixgraph::cli {

namespace {

// Raised inside a command to leave with a specific exit code.
struct Exit {
    int code;
    std::string message;
};

struct InputOptions {
    std::vector<std::string> paths;
    std::string format = "auto";
    bool strict = false;
};

void add_input_options(CLI::App* cmd, InputOptions& opts) {
    cmd->add_option("inputs", opts.paths, "JSONL file, or nodes and edges CSV files ('-' = stdin)")
        ->required()
        ->expected(1, 2);
    cmd->add_option("--format", opts.format, "Input format")
        ->check(CLI::IsMember({"auto", "jsonl", "csv"}))
        ->capture_default_str();
    cmd->add_flag("--strict", opts.strict, "Fail with exit code 2 on any rejected record or edge");
}

std::unique_ptr<std::istream> open_input(const std::string& path) {
    auto file = std::make_unique<std::ifstream>(path, std::ios::binary);
    if (!*file) throw Exit{IoFailure, "cannot open '" + path + "'"};
    return file;
}

struct Loaded {
    LineageGraph graph;
    ingest::IngestReport report;
};

Loaded load(const InputOptions& opts, Context& ctx) {
    std::string format = opts.format;
    if (format == "auto") format = opts.paths.size() == 2 ? "csv" : "jsonl";
    if (format == "jsonl" && opts.paths.size() != 1) throw Exit{Usage, "jsonl input takes exactly one path"};
    if (format == "csv" && opts.paths.size() != 2) throw Exit{Usage, "csv input takes a nodes and an edges path"};
    if (opts.paths.size() == 2 && opts.paths[0] == "-" && opts.paths[1] == "-") {
        throw Exit{Usage, "only one input may be read from stdin"};
    }

    std::vector<std::unique_ptr<std::istream>> owned;
    auto stream = [&](const std::string& path) -> std::istream& {
        if (path == "-") return ctx.in;
        owned.push_back(open_input(path));
        return *owned.back();
    };

    ingest::ParseResult parsed;
    try {
        if (format == "jsonl") {
            parsed = ingest::parse_jsonl(stream(opts.paths[0]));
        } else {
            auto& nodes = stream(opts.paths[0]);
            auto& edges = stream(opts.paths[1]);
            parsed = ingest::parse_csv(nodes, edges);
        }
    } catch (const HeaderMismatch& e) {
        throw Exit{DataError, e.what()};
    } catch (const IoError& e) {
        throw Exit{IoFailure, e.what()};
    }

    auto built = ingest::build_graph(parsed);
    built.graph.freeze();
    if (opts.strict && !built.report.clean()) {
        ingest::write_report(built.report, ctx.err);
        throw Exit{DataError, "rejected input under --strict"};
    }
    return {std::move(built.graph), std::move(built.report)};
}

// Writes through `fn` to `path` ("-" = stdout). The file is only created
// once the content is complete.
template <typename Fn>
void emit(const std::string& path, Context& ctx, Fn&& fn) {
    if (path == "-") {
        fn(ctx.out);
        ctx.out.flush();
        return;
    }
    std::ostringstream buffer;
    fn(buffer);
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw Exit{IoFailure, "cannot write '" + path + "'"};
    file << buffer.str();
    file.close();
    if (!file) throw Exit{IoFailure, "failed writing '" + path + "'"};
}

std::size_t parse_workers(const std::optional<std::string>& env) {
    if (!env) return 0;
    std::size_t value = 0;
    const auto& s = *env;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || value == 0) {
        throw Exit{Usage, "REMIXGRAPH_THREADS must be a positive integer"};
    }
    return value;
}

std::string default_snapshot_path(const std::string& input) {
    std::filesystem::path p(input);
    return (p.parent_path() / (p.stem().string() + ".canonical.jsonl")).string();
}

std::optional<metrics::Thresholds> thresholds_from(const std::optional<double>& b, const std::optional<double>& i) {
    if (b.has_value() != i.has_value()) {
        throw Exit{Usage, "--betweenness-threshold and --independence-threshold must be given together"};
    }
    if (!b) return std::nullopt;
    return metrics::Thresholds{*b, *i};
}

metrics::Classification classify(const LineageGraph& graph, metrics::Orientation orientation,
                                  std::size_t workers, std::optional<metrics::Thresholds> thresholds) {
    auto table = metrics::score_table(graph, orientation, workers);
    if (table.empty()) throw Exit{EmptyPopulation, "no multi-parent designs to classify"};
    try {
        return metrics::classify_quadrants(std::move(table), thresholds);
    } catch (const EmptyTable& e) {
        throw Exit{EmptyPopulation, e.what()};
    }
}

} // namespace

int run(const std::vector<std::string>& args, Context& ctx) {
    CLI::App app{"Remix lineage network analysis", "remixgraph"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "remixgraph 0.1.0");

    InputOptions input;
    std::string output = "-";
    std::string orientation_name = "undirected";
    std::optional<double> threshold_b, threshold_i;

    auto add_orientation = [&](CLI::App* cmd) {
        cmd->add_option("--orientation", orientation_name, "Betweenness path orientation")
            ->check(CLI::IsMember({"undirected", "directed"}))
            ->capture_default_str();
    };
    auto add_thresholds = [&](CLI::App* cmd) {
        cmd->add_option("--betweenness-threshold", threshold_b, "Override the median betweenness split");
        cmd->add_option("--independence-threshold", threshold_i, "Override the median independence split");
    };

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "Validate input and write a canonical JSONL snapshot");
    add_input_options(ingest_cmd, input);
    std::string snapshot;
    ingest_cmd->add_option("-o,--output", snapshot, "Snapshot path (default: <input>.canonical.jsonl)");

    // stats
    auto* stats_cmd = app.add_subcommand("stats", "Print summary statistics");
    add_input_options(stats_cmd, input);
    bool as_json = false;
    stats_cmd->add_flag("--json", as_json, "Emit JSON instead of aligned text");
    stats_cmd->add_option("-o,--output", output, "Output path")->capture_default_str();

    // score
    auto* score_cmd = app.add_subcommand("score", "Score multi-parent designs (CSV)");
    add_input_options(score_cmd, input);
    add_orientation(score_cmd);
    score_cmd->add_option("-o,--output", output, "Output path")->capture_default_str();

    // quadrants
    auto* quad_cmd = app.add_subcommand("quadrants", "Score and classify multi-parent designs (CSV)");
    add_input_options(quad_cmd, input);
    add_orientation(quad_cmd);
    add_thresholds(quad_cmd);
    quad_cmd->add_option("-o,--output", output, "Output path")->capture_default_str();

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "Render the quadrant scatter as SVG");
    add_input_options(plot_cmd, input);
    add_orientation(plot_cmd);
    add_thresholds(plot_cmd);
    plot_cmd->add_option("-o,--output", output, "SVG path")->capture_default_str();

    // recommend
    auto* rec_cmd = app.add_subcommand("recommend", "Rank candidate design pairs (CSV)");
    add_input_options(rec_cmd, input);
    std::size_t k = 10;
    std::string strategy = "exhaustive";
    std::size_t samples = 10000;
    std::uint64_t seed = 0;
    std::optional<std::size_t> cap;
    rec_cmd->add_option("-k", k, "Number of pairs")->capture_default_str();
    rec_cmd->add_option("--strategy", strategy, "Pair enumeration strategy")
        ->check(CLI::IsMember({"exhaustive", "sampled"}))
        ->capture_default_str();
    rec_cmd->add_option("--samples", samples, "Pairs to draw with --strategy sampled")->capture_default_str();
    rec_cmd->add_option("--seed", seed, "Sampling seed")->capture_default_str();
    rec_cmd->add_option("--cap", cap, "Distance cap (default: diameter of the largest component)");
    rec_cmd->add_option("-o,--output", output, "Output path")->capture_default_str();

    // export-dot
    auto* dot_cmd = app.add_subcommand("export-dot", "Write the lineage graph as Graphviz DOT");
    add_input_options(dot_cmd, input);
    dot_cmd->add_option("-o,--output", output, "Output path")->capture_default_str();

    // synth
    auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic remix network (JSONL)");
    synth::SynthConfig config;
    std::optional<std::uint64_t> synth_seed;
    synth_cmd->add_option("-n,--designs", config.n, "Number of designs")->capture_default_str();
    synth_cmd->add_option("--p-multi", config.p_multi, "Probability of two parents")->capture_default_str();
    synth_cmd->add_option("--tag-pool", config.tag_pool, "Distinct tags available")->capture_default_str();
    synth_cmd->add_option("--tags-per-design", config.tags_per_design, "Target tags per design")
        ->capture_default_str();
    synth_cmd->add_option("--p-inherit", config.p_inherit, "Probability each parent tag is inherited")
        ->capture_default_str();
    synth_cmd->add_option("--seed", synth_seed, "Generator seed")->required();
    synth_cmd->add_option("-o,--output", output, "Output path")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, ctx.out, ctx.err);
        return code == 0 ? Ok : Usage;
    }

    try {
        const std::size_t workers = parse_workers(ctx.threads_env);
        const auto orientation = *metrics::parse_orientation(orientation_name);

        if (ingest_cmd->parsed()) {
            auto loaded = load(input, ctx);
            if (snapshot.empty()) {
                if (input.paths[0] == "-") throw Exit{Usage, "--output is required when reading stdin"};
                snapshot = default_snapshot_path(input.paths[0]);
            }
            emit(snapshot, ctx, [&](std::ostream& os) { ingest::write_jsonl(loaded.graph, os); });
            if (snapshot != "-") ingest::write_report(loaded.report, ctx.out);
            else ingest::write_report(loaded.report, ctx.err);
        } else if (stats_cmd->parsed()) {
            auto loaded = load(input, ctx);
            const auto summary = metrics::summarize(loaded.graph);
            emit(output, ctx, [&](std::ostream& os) {
                if (as_json) {
                    render::write_summary_json(summary, os);
                } else {
                    render::write_summary_text(summary, os);
                }
            });
        } else if (score_cmd->parsed()) {
            auto loaded = load(input, ctx);
            const auto table = metrics::score_table(loaded.graph, orientation, workers);
            if (table.empty()) throw Exit{EmptyPopulation, "no multi-parent designs to score"};
            emit(output, ctx, [&](std::ostream& os) { render::write_score_csv(table, os); });
        } else if (quad_cmd->parsed()) {
            const auto thresholds = thresholds_from(threshold_b, threshold_i);
            auto loaded = load(input, ctx);
            const auto result = classify(loaded.graph, orientation, workers, thresholds);
            emit(output, ctx, [&](std::ostream& os) { render::write_score_csv(result.rows, os); });
        } else if (plot_cmd->parsed()) {
            const auto thresholds = thresholds_from(threshold_b, threshold_i);
            auto loaded = load(input, ctx);
            const auto result = classify(loaded.graph, orientation, workers, thresholds);
            const bool any = std::any_of(result.rows.begin(), result.rows.end(),
                                         [](const auto& r) { return r.quadrant.has_value(); });
            if (!any) throw Exit{EmptyPopulation, "no rows with defined scores to plot"};
            emit(output, ctx, [&](std::ostream& os) { render::write_plot_svg(result, os); });
        } else if (rec_cmd->parsed()) {
            if (k == 0) throw Exit{Usage, "-k must be positive"};
            if (cap && *cap == 0) throw Exit{Usage, "--cap must be positive"};
            auto loaded = load(input, ctx);
            recommend::Options opts{k, cap, workers};
            const auto pairs = strategy == "sampled"
                                   ? recommend::recommend(loaded.graph, opts, recommend::Sampled{samples, seed})
                                   : recommend::recommend(loaded.graph, opts, recommend::Exhaustive{});
            emit(output, ctx, [&](std::ostream& os) { render::write_pairs_csv(pairs, os); });
        } else if (dot_cmd->parsed()) {
            auto loaded = load(input, ctx);
            emit(output, ctx, [&](std::ostream& os) { render::write_dot(loaded.graph, os); });
        } else if (synth_cmd->parsed()) {
            config.seed = *synth_seed;
            LineageGraph graph;
            try {
                graph = synth::generate(config);
            } catch (const InvalidConfig& e) {
                throw Exit{Usage, e.what()};
            }
            emit(output, ctx, [&](std::ostream& os) { ingest::write_jsonl(graph, os); });
        }
    } catch (const Exit& e) {
        if (!e.message.empty()) ctx.err << "remixgraph: " << e.message << '\n';
        return e.code;
    } catch (const Error& e) {
        ctx.err << "remixgraph: " << e.what() << '\n';
        return DataError;
    }
    return Ok;
}

} // namespace remixgraph::cli
