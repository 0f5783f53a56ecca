#include "remixgraph/recommend.hpp"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <queue>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "remixgraph/errors.hpp"
#include "remixgraph/random.hpp"

namespace remixgraph::recommend {

namespace {

constexpr std::uint32_t unreached = static_cast<std::uint32_t>(-1);

std::optional<double> jaccard_distance(const std::vector<std::uint32_t>& a,
                                       const std::vector<std::uint32_t>& b) {
    std::size_t common = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++common;
            ++i;
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - common;
    if (uni == 0) return std::nullopt;
    return 1.0 - static_cast<double>(common) / static_cast<double>(uni);
}

double separation_from(std::uint32_t distance, std::size_t cap) {
    if (distance == unreached) return 1.0;
    return static_cast<double>(std::min<std::size_t>(distance, cap)) / static_cast<double>(cap);
}

// Candidate addressed by positions in the id-sorted eligible list.
struct Scored {
    double combined;
    double tag_distance;
    double separation;
    std::uint32_t a;
    std::uint32_t b;
};

bool scored_before(const Scored& x, const Scored& y) {
    if (x.combined != y.combined) return x.combined > y.combined;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
}

struct ScoredOrder {
    bool operator()(const Scored& x, const Scored& y) const { return scored_before(x, y); }
};

using TopK = std::priority_queue<Scored, std::vector<Scored>, ScoredOrder>;

void offer(TopK& heap, std::size_t k, const Scored& s) {
    if (heap.size() < k) {
        heap.push(s);
    } else if (scored_before(s, heap.top())) {
        heap.pop();
        heap.push(s);
    }
}

// Precomputed state shared by all anchors: eligible (non-stub) designs in id
// order and their tags interned as sorted integers.
struct PairSpace {
    const LineageGraph& graph;
    std::vector<NodeIndex> eligible;
    std::vector<std::vector<std::uint32_t>> tags; // per eligible position
    std::size_t cap = 1;

    PairSpace(const LineageGraph& g, std::size_t cap_) : graph(g), cap(cap_) {
        for (NodeIndex v = 0; v < g.node_count(); ++v) {
            if (!g.node(v).is_stub) eligible.push_back(v);
        }
        std::sort(eligible.begin(), eligible.end(),
                  [&](NodeIndex x, NodeIndex y) { return g.node(x).id < g.node(y).id; });

        std::unordered_map<std::string_view, std::uint32_t> interned;
        tags.reserve(eligible.size());
        for (NodeIndex v : eligible) {
            std::vector<std::uint32_t> ids;
            for (const auto& t : g.node(v).tags) {
                auto [it, _] = interned.emplace(t, static_cast<std::uint32_t>(interned.size()));
                ids.push_back(it->second);
            }
            std::sort(ids.begin(), ids.end());
            tags.push_back(std::move(ids));
        }
    }

    std::uint64_t pair_count() const {
        const std::uint64_t e = eligible.size();
        return e < 2 ? 0 : e * (e - 1) / 2;
    }
};

// Per-thread scratch: undirected distances and lineage membership from one anchor.
class AnchorScan {
public:
    explicit AnchorScan(const PairSpace& space)
        : space_(space), dist_(space.graph.node_count(), unreached), related_(space.graph.node_count(), 0) {}

    void load(std::uint32_t anchor_pos) {
        for (NodeIndex v : touched_) {
            dist_[v] = unreached;
            related_[v] = 0;
        }
        touched_.clear();
        const auto& g = space_.graph;
        const NodeIndex src = space_.eligible[anchor_pos];

        dist_[src] = 0;
        touched_.push_back(src);
        for (std::size_t head = 0; head < touched_.size(); ++head) {
            const NodeIndex v = touched_[head];
            for (auto adj : {g.parent_indices(v), g.child_indices(v)}) {
                for (NodeIndex w : adj) {
                    if (dist_[w] == unreached) {
                        dist_[w] = dist_[v] + 1;
                        touched_.push_back(w);
                    }
                }
            }
        }
        // ancestors and descendants all lie inside the component just visited
        mark(src, true);
        mark(src, false);
    }

    std::optional<Scored> score(std::uint32_t anchor_pos, std::uint32_t other_pos) const {
        const NodeIndex other = space_.eligible[other_pos];
        if (related_[other]) return std::nullopt;
        auto tag = jaccard_distance(space_.tags[anchor_pos], space_.tags[other_pos]);
        if (!tag) return std::nullopt;
        const double sep = separation_from(dist_[other], space_.cap);
        auto [a, b] = std::minmax(anchor_pos, other_pos);
        return Scored{*tag * sep, *tag, sep, a, b};
    }

private:
    void mark(NodeIndex src, bool upward) {
        const auto& g = space_.graph;
        stack_.assign(1, src);
        while (!stack_.empty()) {
            const NodeIndex v = stack_.back();
            stack_.pop_back();
            for (NodeIndex w : upward ? g.parent_indices(v) : g.child_indices(v)) {
                if (!(related_[w] & (upward ? 1 : 2))) {
                    related_[w] |= upward ? 1 : 2;
                    stack_.push_back(w);
                }
            }
        }
    }

    const PairSpace& space_;
    std::vector<std::uint32_t> dist_;
    std::vector<std::uint8_t> related_;
    std::vector<NodeIndex> touched_;
    std::vector<NodeIndex> stack_;
};

// A unit of work: one anchor and the partner positions to score against it.
struct AnchorTask {
    std::uint32_t anchor;
    std::vector<std::uint32_t> partners; // empty + all_after => every later position
    bool all_after = false;
};

std::vector<PairCandidate> run(const PairSpace& space, const std::vector<AnchorTask>& tasks,
                               std::size_t k, std::size_t workers) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::max<std::size_t>(1, std::min(workers, tasks.size()));

    std::atomic<std::size_t> next{0};
    std::mutex merge_mutex;
    std::vector<Scored> merged;

    auto work = [&] {
        AnchorScan scan(space);
        TopK heap;
        for (;;) {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks.size()) break;
            const auto& task = tasks[t];
            scan.load(task.anchor);
            auto consider = [&](std::uint32_t other) {
                if (auto s = scan.score(task.anchor, other)) offer(heap, k, *s);
            };
            if (task.all_after) {
                for (auto p = task.anchor + 1; p < space.eligible.size(); ++p) consider(p);
            } else {
                for (auto p : task.partners) consider(p);
            }
        }
        std::lock_guard lock(merge_mutex);
        while (!heap.empty()) {
            merged.push_back(heap.top());
            heap.pop();
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    }

    std::sort(merged.begin(), merged.end(), scored_before);
    if (merged.size() > k) merged.resize(k);

    std::vector<PairCandidate> out;
    out.reserve(merged.size());
    for (const auto& s : merged) {
        out.push_back({space.graph.node(space.eligible[s.a]).id, space.graph.node(space.eligible[s.b]).id,
                       s.tag_distance, s.separation, s.combined});
    }
    return out;
}

// Decodes a pair index in [0, E(E-1)/2) into positions (i, j), i < j, in
// row-major order over the upper triangle.
std::pair<std::uint32_t, std::uint32_t> decode_pair(std::uint64_t index, std::uint64_t e) {
    auto row_start = [e](std::uint64_t i) { return i * (2 * e - i - 1) / 2; };
    std::uint64_t lo = 0, hi = e - 1;
    while (hi - lo > 1) {
        const std::uint64_t mid = (lo + hi) / 2;
        if (row_start(mid) <= index) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const std::uint64_t j = lo + 1 + (index - row_start(lo));
    return {static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(j)};
}

std::size_t resolve_cap(const LineageGraph& graph, const Options& options) {
    if (options.k == 0) throw InvalidArgument("k must be positive");
    if (options.cap) {
        if (*options.cap == 0) throw InvalidArgument("separation cap must be positive");
        return *options.cap;
    }
    return default_separation_cap(graph, options.workers);
}

} // namespace

bool ranks_before(const PairCandidate& x, const PairCandidate& y) noexcept {
    if (x.combined_score != y.combined_score) return x.combined_score > y.combined_score;
    if (x.id_a != y.id_a) return x.id_a < y.id_a;
    return x.id_b < y.id_b;
}

std::optional<double> pair_tag_distance(const DesignId& a, const DesignId& b, const LineageGraph& graph) {
    const auto& da = graph.design(a);
    const auto& db = graph.design(b);
    if (da.is_stub) throw StubDesign(a.value());
    if (db.is_stub) throw StubDesign(b.value());

    std::size_t common = 0;
    for (const auto& t : da.tags) common += db.tags.contains(t) ? 1 : 0;
    const std::size_t uni = da.tags.size() + db.tags.size() - common;
    if (uni == 0) return std::nullopt;
    return 1.0 - static_cast<double>(common) / static_cast<double>(uni);
}

std::size_t default_separation_cap(const LineageGraph& graph, std::size_t workers) {
    const std::size_t n = graph.node_count();
    if (n == 0) return 1;
    const auto comps = graph.weak_components();
    std::vector<std::size_t> sizes(comps.count, 0);
    for (auto label : comps.label) ++sizes[label];
    const std::size_t largest =
        static_cast<std::size_t>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());

    std::vector<NodeIndex> members;
    for (NodeIndex v = 0; v < n; ++v) {
        if (comps.label[v] == largest) members.push_back(v);
    }

    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = std::max<std::size_t>(1, std::min(workers, members.size()));

    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> diameter{0};
    auto work = [&] {
        std::vector<std::uint32_t> dist(n, unreached);
        std::vector<NodeIndex> queue;
        std::size_t local = 0;
        for (;;) {
            const std::size_t m = next.fetch_add(1);
            if (m >= members.size()) break;
            for (NodeIndex v : queue) dist[v] = unreached;
            queue.assign(1, members[m]);
            dist[members[m]] = 0;
            for (std::size_t head = 0; head < queue.size(); ++head) {
                const NodeIndex v = queue[head];
                for (auto adj : {graph.parent_indices(v), graph.child_indices(v)}) {
                    for (NodeIndex w : adj) {
                        if (dist[w] == unreached) {
                            dist[w] = dist[v] + 1;
                            queue.push_back(w);
                        }
                    }
                }
            }
            local = std::max<std::size_t>(local, dist[queue.back()]);
        }
        std::size_t seen = diameter.load();
        while (local > seen && !diameter.compare_exchange_weak(seen, local)) {
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    }
    return std::max<std::size_t>(1, diameter.load());
}

double structural_separation(const DesignId& a, const DesignId& b, const LineageGraph& graph,
                             std::size_t cap) {
    if (cap == 0) throw InvalidArgument("separation cap must be positive");
    const auto d = graph.undirected_distance(a, b);
    if (!d) return 1.0;
    return static_cast<double>(std::min(*d, cap)) / static_cast<double>(cap);
}

std::vector<PairCandidate> recommend(const LineageGraph& graph, const Options& options, Exhaustive) {
    const std::size_t cap = resolve_cap(graph, options);
    PairSpace space(graph, cap);
    std::vector<AnchorTask> tasks;
    for (std::uint32_t i = 0; i + 1 < space.eligible.size(); ++i) {
        tasks.push_back({i, {}, true});
    }
    return run(space, tasks, options.k, options.workers);
}

std::vector<PairCandidate> recommend(const LineageGraph& graph, const Options& options,
                                     const Sampled& strategy) {
    const std::size_t cap = resolve_cap(graph, options);
    PairSpace space(graph, cap);
    const std::uint64_t total = space.pair_count();
    if (strategy.samples >= total) return recommend(graph, options, Exhaustive{});

    // Floyd's algorithm: m distinct indices from [0, total)
    Rng rng(strategy.seed);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(strategy.samples);
    for (std::uint64_t j = total - strategy.samples; j < total; ++j) {
        const std::uint64_t t = rng.below(j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::uint64_t> indices(chosen.begin(), chosen.end());
    std::sort(indices.begin(), indices.end());

    std::vector<AnchorTask> tasks;
    for (auto index : indices) {
        auto [i, j] = decode_pair(index, space.eligible.size());
        if (tasks.empty() || tasks.back().anchor != i) tasks.push_back({i, {}, false});
        tasks.back().partners.push_back(j);
    }
    return run(space, tasks, options.k, options.workers);
}

} // namespace remixgraph::recommend
