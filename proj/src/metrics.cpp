#include "remixgraph/metrics.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include "remixgraph/errors.hpp"

namespace remixgraph::metrics {

namespace {

// Compressed adjacency for one traversal orientation. `out` is followed
// forward from the source, `in` is scanned during dependency accumulation.
struct Csr {
    std::vector<std::size_t> out_offsets, in_offsets;
    std::vector<NodeIndex> out_targets, in_targets;

    std::span<const NodeIndex> out(NodeIndex v) const {
        return {out_targets.data() + out_offsets[v], out_offsets[v + 1] - out_offsets[v]};
    }
    std::span<const NodeIndex> in(NodeIndex v) const {
        return {in_targets.data() + in_offsets[v], in_offsets[v + 1] - in_offsets[v]};
    }
};

void append(std::vector<std::size_t>& offsets, std::vector<NodeIndex>& targets,
            std::span<const NodeIndex> a, std::span<const NodeIndex> b) {
    targets.insert(targets.end(), a.begin(), a.end());
    targets.insert(targets.end(), b.begin(), b.end());
    offsets.push_back(targets.size());
}

Csr build_csr(const LineageGraph& graph, Orientation orientation) {
    const std::size_t n = graph.node_count();
    Csr csr;
    csr.out_offsets.reserve(n + 1);
    csr.out_offsets.push_back(0);
    for (NodeIndex v = 0; v < n; ++v) {
        if (orientation == Orientation::Directed) {
            append(csr.out_offsets, csr.out_targets, graph.child_indices(v), {});
        } else {
            append(csr.out_offsets, csr.out_targets, graph.parent_indices(v), graph.child_indices(v));
        }
    }
    if (orientation == Orientation::Directed) {
        csr.in_offsets.reserve(n + 1);
        csr.in_offsets.push_back(0);
        for (NodeIndex v = 0; v < n; ++v) {
            append(csr.in_offsets, csr.in_targets, graph.parent_indices(v), {});
        }
    } else {
        csr.in_offsets = csr.out_offsets;
        csr.in_targets = csr.out_targets;
    }
    return csr;
}

// Single-source shortest-path counting and dependency accumulation. With
// `weight`, every node stands for weight[v] collapsed endpoints.
class BrandesWorker {
public:
    BrandesWorker(const Csr& csr, std::size_t n, const std::vector<double>* weight)
        : csr_(csr), weight_(weight), dist_(n, -1), sigma_(n, 0.0), delta_(n, 0.0) {
        order_.reserve(n);
    }

    void accumulate(NodeIndex source, std::vector<double>& scores) {
        order_.clear();
        dist_[source] = 0;
        sigma_[source] = 1.0;
        order_.push_back(source);
        for (std::size_t head = 0; head < order_.size(); ++head) {
            const NodeIndex v = order_[head];
            const std::int32_t next = dist_[v] + 1;
            for (NodeIndex w : csr_.out(v)) {
                if (dist_[w] < 0) {
                    dist_[w] = next;
                    order_.push_back(w);
                }
                if (dist_[w] == next) sigma_[w] += sigma_[v];
            }
        }
        const double source_weight = weight_ ? (*weight_)[source] : 1.0;
        for (std::size_t k = order_.size(); k-- > 1;) {
            const NodeIndex w = order_[k];
            const double own = weight_ ? (*weight_)[w] : 1.0;
            const double coeff = (own + delta_[w]) / sigma_[w];
            const std::int32_t prev = dist_[w] - 1;
            for (NodeIndex v : csr_.in(w)) {
                if (dist_[v] == prev) delta_[v] += sigma_[v] * coeff;
            }
            scores[w] += source_weight * delta_[w];
        }
        for (NodeIndex v : order_) {
            dist_[v] = -1;
            sigma_[v] = 0.0;
            delta_[v] = 0.0;
        }
    }

private:
    const Csr& csr_;
    const std::vector<double>* weight_;
    std::vector<std::int32_t> dist_;
    std::vector<double> sigma_;
    std::vector<double> delta_;
    std::vector<NodeIndex> order_;
};

constexpr std::size_t max_blocks = 256;

// Runs Brandes from every node of `csr` and adds the dependencies to `raw`.
// The block layout depends only on the node count; partial sums are folded
// into the total strictly in block order.
void accumulate_all(const Csr& csr, const std::vector<double>* weight, std::size_t workers,
                    std::vector<double>& raw) {
    const std::size_t n = csr.out_offsets.size() - 1;
    if (n == 0) return;
    const std::size_t blocks = std::min(n, max_blocks);
    auto block_begin = [&](std::size_t b) { return static_cast<NodeIndex>(b * n / blocks); };

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, blocks);

    std::atomic<std::size_t> next_block{0};
    std::mutex merge_mutex;
    std::vector<std::vector<double>> finished(blocks);
    std::vector<char> ready(blocks, 0);
    std::size_t next_merge = 0;

    auto run = [&] {
        BrandesWorker worker(csr, n, weight);
        for (;;) {
            const std::size_t b = next_block.fetch_add(1);
            if (b >= blocks) return;
            std::vector<double> partial(n, 0.0);
            for (NodeIndex s = block_begin(b); s < block_begin(b + 1); ++s) {
                worker.accumulate(s, partial);
            }
            std::lock_guard lock(merge_mutex);
            finished[b] = std::move(partial);
            ready[b] = 1;
            while (next_merge < blocks && ready[next_merge]) {
                auto& part = finished[next_merge];
                for (std::size_t v = 0; v < n; ++v) raw[v] += part[v];
                std::vector<double>().swap(part);
                ++next_merge;
            }
        }
    };

    if (workers == 1) {
        run();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(run);
    }
}

// Undirected betweenness with degree-1 peeling: a pendant vertex u hanging
// off v is folded into v, and v is credited with every pair joining u's
// folded subtree to a node outside both subtrees. Weighted Brandes then runs on whatever is left, which for
// lineage graphs (mostly trees) is a small fraction of the nodes.
void undirected_raw(const Csr& csr, std::size_t workers, std::vector<double>& raw) {
    const std::size_t n = raw.size();

    std::vector<double> comp_size(n, 0.0);
    {
        std::vector<NodeIndex> members;
        std::vector<char> seen(n, 0);
        for (NodeIndex s = 0; s < n; ++s) {
            if (seen[s]) continue;
            members.assign(1, s);
            seen[s] = 1;
            for (std::size_t h = 0; h < members.size(); ++h) {
                for (NodeIndex w : csr.out(members[h])) {
                    if (!seen[w]) {
                        seen[w] = 1;
                        members.push_back(w);
                    }
                }
            }
            for (NodeIndex v : members) comp_size[v] = static_cast<double>(members.size());
        }
    }

    std::vector<double> weight(n, 1.0);
    std::vector<std::size_t> degree(n);
    std::vector<char> removed(n, 0);
    std::vector<NodeIndex> queue;
    for (NodeIndex v = 0; v < n; ++v) {
        degree[v] = csr.out(v).size();
        if (degree[v] == 1) queue.push_back(v);
    }
    std::vector<double> pendant(n, 0.0);
    for (std::size_t h = 0; h < queue.size(); ++h) {
        const NodeIndex u = queue[h];
        if (removed[u] || degree[u] != 1) continue;
        NodeIndex v = u;
        for (NodeIndex w : csr.out(u)) {
            if (!removed[w]) v = w;
        }
        pendant[v] += weight[u] * (comp_size[u] - weight[u] - weight[v]);
        weight[v] += weight[u];
        removed[u] = 1;
        if (--degree[v] == 1) queue.push_back(v);
    }

    std::vector<NodeIndex> core_of(n, 0), original;
    for (NodeIndex v = 0; v < n; ++v) {
        if (!removed[v]) {
            core_of[v] = static_cast<NodeIndex>(original.size());
            original.push_back(v);
        }
    }
    Csr core;
    core.out_offsets.reserve(original.size() + 1);
    core.out_offsets.push_back(0);
    std::vector<double> core_weight;
    core_weight.reserve(original.size());
    for (NodeIndex v : original) {
        for (NodeIndex w : csr.out(v)) {
            if (!removed[w]) core.out_targets.push_back(core_of[w]);
        }
        core.out_offsets.push_back(core.out_targets.size());
        core_weight.push_back(weight[v]);
    }
    core.in_offsets = core.out_offsets;
    core.in_targets = core.out_targets;

    std::vector<double> core_raw(original.size(), 0.0);
    accumulate_all(core, &core_weight, workers, core_raw);
    for (std::size_t i = 0; i < original.size(); ++i) raw[original[i]] += core_raw[i] / 2.0;
    for (std::size_t v = 0; v < n; ++v) raw[v] += pendant[v];
}

} // namespace

const char* to_string(Orientation o) noexcept {
    return o == Orientation::Directed ? "directed" : "undirected";
}

std::optional<Orientation> parse_orientation(std::string_view text) noexcept {
    if (text == "directed") return Orientation::Directed;
    if (text == "undirected") return Orientation::Undirected;
    return std::nullopt;
}

double normalization_factor(std::size_t n, Orientation orientation) noexcept {
    if (n <= 2) return 0.0;
    const double pairs = static_cast<double>(n - 1) * static_cast<double>(n - 2);
    return orientation == Orientation::Directed ? pairs : pairs / 2.0;
}

CentralityResult betweenness(const LineageGraph& graph, Orientation orientation, std::size_t workers) {
    const std::size_t n = graph.node_count();
    CentralityResult result;
    result.orientation = orientation;
    result.raw.assign(n, 0.0);
    result.normalized.assign(n, 0.0);
    if (n == 0) return result;

    if (orientation == Orientation::Directed) {
        const Csr csr = build_csr(graph, orientation);
        accumulate_all(csr, nullptr, workers, result.raw);
    } else {
        undirected_raw(build_csr(graph, orientation), workers, result.raw);
    }
    const double factor = normalization_factor(n, orientation);
    if (factor > 0.0) {
        for (std::size_t v = 0; v < n; ++v) result.normalized[v] = result.raw[v] / factor;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Independence

std::optional<double> collective_jaccard_distance(std::span<const TagSet* const> sets) {
    if (sets.size() < 2) return std::nullopt;

    std::vector<std::string_view> all;
    for (const TagSet* s : sets) all.insert(all.end(), s->begin(), s->end());
    std::sort(all.begin(), all.end());

    // each set is duplicate-free, so a tag is in every set iff it appears sets.size() times
    std::size_t union_size = 0;
    std::size_t intersection_size = 0;
    for (std::size_t i = 0; i < all.size();) {
        std::size_t j = i;
        while (j < all.size() && all[j] == all[i]) ++j;
        ++union_size;
        if (j - i == sets.size()) ++intersection_size;
        i = j;
    }
    if (union_size == 0) return std::nullopt;
    return 1.0 - static_cast<double>(intersection_size) / static_cast<double>(union_size);
}

IndependenceResult independence_score(const DesignId& id, const LineageGraph& graph) {
    const NodeIndex v = graph.index_of(id);
    IndependenceResult out;
    std::vector<const TagSet*> sets;
    for (NodeIndex p : graph.parent_indices(v)) {
        const auto& parent = graph.node(p);
        out.has_stub_parent = out.has_stub_parent || parent.is_stub;
        sets.push_back(&parent.tags);
    }
    out.parent_count = sets.size();
    if (!out.has_stub_parent) out.value = collective_jaccard_distance(sets);
    return out;
}

// ---------------------------------------------------------------------------
// Quadrants

const char* to_string(Quadrant q) noexcept {
    switch (q) {
    case Quadrant::Q1: return "Q1";
    case Quadrant::Q2: return "Q2";
    case Quadrant::Q3: return "Q3";
    case Quadrant::Q4: return "Q4";
    }
    return "?";
}

Quadrant quadrant_of(double betweenness, double independence, const Thresholds& t) noexcept {
    const bool high_b = betweenness > t.betweenness;
    const bool high_i = independence > t.independence;
    if (high_b) return high_i ? Quadrant::Q4 : Quadrant::Q2;
    return high_i ? Quadrant::Q3 : Quadrant::Q1;
}

std::vector<DesignScore> score_table(const LineageGraph& graph, const CentralityResult& centrality) {
    std::vector<DesignScore> rows;
    for (const auto& id : multi_parent_designs(graph)) {
        rows.push_back(DesignScore{.id = id,
                                   .betweenness = centrality.normalized.at(graph.index_of(id)),
                                   .independence = independence_score(id, graph).value,
                                   .quadrant = std::nullopt});
    }
    return rows;
}

std::vector<DesignScore> score_table(const LineageGraph& graph, Orientation orientation,
                                     std::size_t workers) {
    return score_table(graph, betweenness(graph, orientation, workers));
}

namespace {

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    if (values.size() % 2 == 1) return values[mid];
    return (values[mid - 1] + values[mid]) / 2.0;
}

} // namespace

Classification classify_quadrants(std::vector<DesignScore> table, std::optional<Thresholds> thresholds) {
    Classification out;
    if (thresholds) {
        out.thresholds = *thresholds;
    } else {
        std::vector<double> bs, is;
        for (const auto& row : table) {
            if (!row.independence) continue;
            bs.push_back(row.betweenness);
            is.push_back(*row.independence);
        }
        if (bs.empty()) throw EmptyTable();
        out.thresholds = {median(std::move(bs)), median(std::move(is))};
    }
    for (auto& row : table) {
        row.quadrant = row.independence
                           ? std::optional(quadrant_of(row.betweenness, *row.independence, out.thresholds))
                           : std::nullopt;
    }
    out.rows = std::move(table);
    return out;
}

Summary summarize(const LineageGraph& graph) {
    Summary s;
    s.stubs = graph.stub_count();
    s.total_designs = graph.node_count() - s.stubs;
    s.edges = graph.edge_count();
    for (NodeIndex v = 0; v < graph.node_count(); ++v) {
        if (graph.node(v).is_stub) continue;
        const auto parents = graph.parent_indices(v);
        if (parents.size() < 2) continue;
        ++s.multi_parent;
        const auto resolved = std::count_if(parents.begin(), parents.end(),
                                            [&](NodeIndex p) { return !graph.node(p).is_stub; });
        if (resolved >= 2) ++s.multi_parent_resolved;
    }
    s.multi_parent_ratio =
        s.total_designs == 0 ? 0.0 : static_cast<double>(s.multi_parent) / static_cast<double>(s.total_designs);
    s.components = graph.weak_components().count;
    s.timestamp_violations = graph.timestamp_violations();
    return s;
}

} // namespace remixgraph::metrics
