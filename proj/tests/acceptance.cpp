// Acceptance suite: one PASS/FAIL line per primary criterion.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "remixgraph/cli.hpp"
#include "remixgraph/ingest.hpp"
#include "remixgraph/metrics.hpp"
#include "remixgraph/recommend.hpp"
#include "remixgraph/synth.hpp"

using namespace remixgraph;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Check {
    bool ok = true;
    std::string why;
    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            why = what;
        }
    }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Design make(const std::string& id, std::vector<std::string> parents = {}, std::vector<std::string> tags = {}) {
    Design d{DesignId(id)};
    for (auto& p : parents) d.parent_ids.emplace_back(p);
    d.tags = TagSet::from_normalized(std::move(tags));
    return d;
}

struct CliRun {
    int code;
    std::string out;
};

CliRun cli_run(const std::vector<std::string>& args, std::optional<std::string> threads = std::nullopt) {
    std::istringstream in;
    std::ostringstream out, err;
    cli::Context ctx{in, out, err, std::move(threads)};
    const int code = cli::run(args, ctx);
    return {code, out.str()};
}

// ---------------------------------------------------------------------------

Check independence_oracle() {
    Check c;
    const auto t0 = Clock::now();

    const std::vector<std::pair<std::vector<std::vector<std::string>>, double>> worked = {
        {{{"a", "b"}, {"c", "d"}}, 1.0},
        {{{"a", "b", "c"}, {"b", "c", "d"}}, 0.5},
        {{{"a", "b"}, {"b", "c"}, {"b", "d"}}, 0.75},
        {{{"a", "b"}, {"a", "b"}}, 0.0},
    };
    for (const auto& [family, expected] : worked) {
        LineageGraph g;
        std::vector<std::string> parents;
        for (std::size_t i = 0; i < family.size(); ++i) {
            parents.push_back("p" + std::to_string(i));
            g.add_design(make(parents.back(), {}, family[i]));
        }
        g.add_design(make("child", parents));
        const auto r = metrics::independence_score(DesignId("child"), g);
        c.require(r.value && *r.value == expected, "worked example " + std::to_string(expected));
    }

    std::vector<std::string> pool;
    for (int i = 0; i < 20; ++i) pool.push_back("s" + std::to_string(i));
    std::mt19937_64 rng(1000);
    int families = 0;
    for (; families < 2000; ++families) {
        const int k = 2 + static_cast<int>(rng() % 4);
        LineageGraph g;
        std::vector<std::set<std::string>> sets;
        std::vector<std::string> parents;
        for (int i = 0; i < k; ++i) {
            std::set<std::string> s;
            const int size = static_cast<int>(rng() % 8);
            for (int j = 0; j < size; ++j) s.insert(pool[rng() % pool.size()]);
            sets.push_back(s);
            parents.push_back("p" + std::to_string(i));
            g.add_design(make(parents.back(), {}, {s.begin(), s.end()}));
        }
        g.add_design(make("child", parents));
        const auto got = metrics::independence_score(DesignId("child"), g).value;
        const auto want = oracle::independence(sets, pool);
        c.require(got.has_value() == want.has_value(), "definedness mismatch");
        if (got && want) c.require(std::abs(*got - *want) < 1e-12, "value mismatch");
    }
    const double elapsed = seconds_since(t0);
    c.require(families >= 1000, "too few families");
    c.require(elapsed < 1.0, "took " + std::to_string(elapsed) + " s");
    return c;
}

Check betweenness_oracle() {
    Check c;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(200);
    int graphs = 0;
    for (; graphs < 240; ++graphs) {
        const int n = 1 + static_cast<int>(rng() % 50);
        const double p = std::uniform_real_distribution<double>(0.02, 0.3)(rng);
        const auto g = oracle::random_dag(rng, n, p, 0, true);
        for (auto o : {metrics::Orientation::Undirected, metrics::Orientation::Directed}) {
            const auto got = metrics::betweenness(g, o, 2);
            const auto want = oracle::betweenness(g, o);
            const double f = metrics::normalization_factor(g.node_count(), o);
            for (std::size_t v = 0; v < g.node_count(); ++v) {
                c.require(std::abs(got.raw[v] - want[v]) < 1e-9, "raw mismatch");
                const double norm = f > 0 ? want[v] / f : 0.0;
                c.require(std::abs(got.normalized[v] - norm) < 1e-9, "normalized mismatch");
                c.require(got.normalized[v] >= 0.0 && got.normalized[v] <= 1.0 + 1e-12, "out of [0,1]");
            }
        }
    }
    const double elapsed = seconds_since(t0);
    c.require(elapsed < 30.0, "took " + std::to_string(elapsed) + " s");
    return c;
}

Check population_scale(const fs::path& work) {
    Check c;
    const auto t0 = Clock::now();
    const auto data = (work / "synth.jsonl").string();
    const auto snap = (work / "snapshot.jsonl").string();
    const std::string threads = "4";
    c.require(cli_run({"synth", "-n", "20000", "--p-multi", "0.0143", "--seed", "20120601", "-o", data}, threads)
                      .code == 0,
              "synth failed");
    c.require(cli_run({"ingest", data, "-o", snap, "--strict"}, threads).code == 0, "ingest failed");
    c.require(cli_run({"score", snap, "-o", (work / "score.csv").string()}, threads).code == 0, "score failed");
    c.require(cli_run({"quadrants", snap, "-o", (work / "quadrants.csv").string()}, threads).code == 0,
              "quadrants failed");
    c.require(cli_run({"plot", snap, "-o", (work / "plot.svg").string()}, threads).code == 0, "plot failed");
    const double pipeline = seconds_since(t0);
    c.require(pipeline < 60.0, "pipeline took " + std::to_string(pipeline) + " s");

    const auto g = synth::generate({.n = 20000, .p_multi = 0.0143, .seed = 20120601});
    const auto s = metrics::summarize(g);
    c.require(std::abs(s.multi_parent_ratio - 0.0143) <= 0.005, "ratio " + std::to_string(s.multi_parent_ratio));

    const auto t1 = Clock::now();
    metrics::betweenness(g, metrics::Orientation::Undirected, 4);
    const double bt = seconds_since(t1);
    c.require(bt < 10.0, "betweenness took " + std::to_string(bt) + " s");
    return c;
}

Check determinism(const fs::path& work) {
    Check c;
    const auto s = (work / "det.jsonl").string();
    c.require(cli_run({"synth", "-n", "600", "--p-multi", "0.2", "--seed", "8", "-o", s}).code == 0, "synth");
    const std::vector<std::vector<std::string>> commands = {
        {"synth", "-n", "600", "--p-multi", "0.2", "--seed", "8"},
        {"ingest", s, "-o", "-"},
        {"stats", s},
        {"stats", s, "--json"},
        {"score", s},
        {"quadrants", s},
        {"plot", s},
        {"recommend", s},
        {"recommend", s, "--strategy", "sampled", "--samples", "2000", "--seed", "3"},
        {"export-dot", s},
    };
    for (const auto& args : commands) {
        const auto a = cli_run(args, std::string("1"));
        const auto b = cli_run(args, std::string("8"));
        c.require(a.code == 0 && b.code == 0, args[0] + " failed");
        c.require(!a.out.empty() && a.out == b.out, args[0] + " output differs");
    }

    const auto g = synth::generate({.n = 3000, .p_multi = 0.1, .seed = 2});
    for (auto o : {metrics::Orientation::Undirected, metrics::Orientation::Directed}) {
        const auto one = metrics::betweenness(g, o, 1);
        for (std::size_t w : {2u, 8u}) {
            const auto other = metrics::betweenness(g, o, w);
            for (std::size_t v = 0; v < g.node_count(); ++v) {
                c.require(std::abs(one.normalized[v] - other.normalized[v]) < 1e-9, "worker disagreement");
            }
        }
    }
    return c;
}

Check quadrant_semantics() {
    Check c;
    auto row = [](std::string id, double b, double i) {
        metrics::DesignScore r{DesignId(id)};
        r.betweenness = b;
        r.independence = i;
        return r;
    };
    const auto out = metrics::classify_quadrants(
        {row("a", 0.1, 0.1), row("b", 0.9, 0.1), row("c", 0.1, 0.9), row("d", 0.9, 0.9)},
        metrics::Thresholds{0.5, 0.5});
    const metrics::Quadrant expected[] = {metrics::Quadrant::Q1, metrics::Quadrant::Q2, metrics::Quadrant::Q3,
                                          metrics::Quadrant::Q4};
    for (int i = 0; i < 4; ++i) c.require(out.rows[i].quadrant == expected[i], "four-corner label");

    const std::vector<std::function<double(double)>> transforms = {
        [](double x) { return std::exp(x) * 3.0 + 1.0; },
        [](double x) { return x * x * x; },
        [](double x) { return std::log1p(x) - 7.0; },
    };
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<metrics::DesignScore> rows;
        const int n = 1 + static_cast<int>(rng() % 40);
        for (int i = 0; i < n; ++i) rows.push_back(row("r" + std::to_string(i), unit(rng), unit(rng)));
        const metrics::Thresholds t{rows[rng() % rows.size()].betweenness, unit(rng)};
        const auto base = metrics::classify_quadrants(rows, t);
        for (const auto& f : transforms) {
            auto moved = rows;
            for (auto& r : moved) r.betweenness = f(r.betweenness);
            const auto again = metrics::classify_quadrants(moved, metrics::Thresholds{f(t.betweenness), t.independence});
            for (int i = 0; i < n; ++i) c.require(base.rows[i].quadrant == again.rows[i].quadrant, "label moved");
        }
    }
    return c;
}

Check recommendation_soundness() {
    Check c;
    LineageGraph g;
    g.add_design(make("r", {}, {"toy"}));
    g.add_design(make("s1", {"r"}, {"toy", "robot"}));
    g.add_design(make("s2", {"r"}, {"toy", "robot", "arm"}));
    g.add_design(make("q", {}, {"robot", "lamp"}));
    const auto top = recommend::recommend(g, recommend::Options{1}, recommend::Exhaustive{});
    c.require(top.size() == 1 && top[0].id_a.value() == "q" && top[0].id_b.value() == "r" &&
                  top[0].combined_score == 1.0,
              "crafted top pair");

    std::mt19937_64 rng(30);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 29);
        const auto dag = oracle::random_dag(rng, n, 0.15, 6, true);
        const auto pairs = recommend::recommend(dag, recommend::Options{1000}, recommend::Exhaustive{});
        const auto sampled = recommend::recommend(dag, recommend::Options{1000}, recommend::Sampled{50, rng()});
        for (const auto* list : {&pairs, &sampled}) {
            for (const auto& p : *list) {
                const int a = static_cast<int>(dag.index_of(p.id_a));
                const int b = static_cast<int>(dag.index_of(p.id_b));
                c.require(!oracle::reaches_upward(dag, a, b) && !oracle::reaches_upward(dag, b, a),
                          "ancestor pair recommended");
            }
        }
    }
    return c;
}

// same ids, same edge set, same tag sets
bool isomorphic(const LineageGraph& x, const LineageGraph& y) {
    if (x.node_count() != y.node_count() || x.edge_count() != y.edge_count()) return false;
    for (const auto& d : x.nodes()) {
        const auto at = y.find(d.id);
        if (!at) return false;
        const Design* other = &y.node(*at);
        if (other->is_stub != d.is_stub || !(other->tags == d.tags)) return false;
        std::set<DesignId> px(d.parent_ids.begin(), d.parent_ids.end());
        std::set<DesignId> py(other->parent_ids.begin(), other->parent_ids.end());
        if (px != py) return false;
    }
    return true;
}

Check ingest_robustness() {
    Check c;
    const std::vector<std::string> fixtures = {
        // cyclic
        "{\"id\":\"a\",\"parents\":[\"c\"]}\n{\"id\":\"b\",\"parents\":[\"a\"]}\n{\"id\":\"c\",\"parents\":[\"b\"]}\n"
        "{\"id\":\"d\",\"parents\":[\"d\"]}\n",
        // duplicated
        "{\"id\":\"a\",\"tags\":[\"x\"]}\n{\"id\":\"a\",\"tags\":[\"y\"]}\n{\"id\":\"b\",\"parents\":[\"a\",\"a\"]}\n",
        // dangling parents, malformed lines
        "{\"id\":\"a\",\"parents\":[\"ghost\",\"phantom\"],\"tags\":[\"q\"]}\nnot json\n{\"title\":\"no id\"}\n"
        "{\"id\":\"b\",\"parents\":[\"ghost\"]}\n",
    };
    for (const auto& text : fixtures) {
        std::istringstream in(text);
        const auto built = ingest::build_graph(ingest::parse_jsonl(in));
        bool acyclic = true;
        try {
            built.graph.topological_order();
        } catch (const std::exception&) {
            acyclic = false;
        }
        c.require(acyclic, "graph has a cycle");
        c.require(built.report.balanced(), "report totals do not balance");
        c.require(!built.report.clean(), "fixture produced no diagnostics");

        std::ostringstream snapshot;
        ingest::write_jsonl(built.graph, snapshot);
        std::istringstream back(snapshot.str());
        const auto again = ingest::build_graph(ingest::parse_jsonl(back));
        c.require(isomorphic(built.graph, again.graph), "round trip changed the graph");
    }

    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = oracle::random_dag(rng, 1 + static_cast<int>(rng() % 40), 0.1, 8, true);
        std::ostringstream snapshot;
        ingest::write_jsonl(g, snapshot);
        std::istringstream back(snapshot.str());
        const auto again = ingest::build_graph(ingest::parse_jsonl(back));
        c.require(again.report.clean() && isomorphic(g, again.graph), "random round trip");
    }
    return c;
}

} // namespace

int main() {
    const fs::path work = fs::temp_directory_path() / "remixgraph_acceptance";
    fs::remove_all(work);
    fs::create_directories(work);

    const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
        {"independence score matches brute-force enumeration", independence_oracle},
        {"betweenness matches all-pairs path-counting oracle", betweenness_oracle},
        {"20k synthetic population and pipeline timing", [&] { return population_scale(work); }},
        {"determinism across runs and worker counts", [&] { return determinism(work); }},
        {"quadrant semantics and monotone invariance", quadrant_semantics},
        {"recommendation soundness", recommendation_soundness},
        {"ingest robustness and round trip", ingest_robustness},
    };

    int failed = 0;
    for (const auto& [name, fn] : criteria) {
        const auto t0 = Clock::now();
        Check result;
        try {
            result = fn();
        } catch (const std::exception& e) {
            result.ok = false;
            result.why = std::string("exception: ") + e.what();
        }
        char timing[32];
        std::snprintf(timing, sizeof timing, "%.2fs", seconds_since(t0));
        std::cout << (result.ok ? "[PASS] " : "[FAIL] ") << name << " (" << timing << ")";
        if (!result.ok) std::cout << ": " << result.why;
        std::cout << '\n';
        if (!result.ok) ++failed;
    }
    fs::remove_all(work);
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}
