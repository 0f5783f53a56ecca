#pragma once

// Brute-force reference implementations used only by the tests. None of
// these share code paths with the library algorithms they check.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "remixgraph/metrics.hpp"
#include "remixgraph/model.hpp"

namespace oracle {

/// Independence by enumerating every symbol of the universe and testing
/// membership in each set.
inline std::optional<double> independence(const std::vector<std::set<std::string>>& sets,
                                          const std::vector<std::string>& universe) {
    if (sets.size() < 2) return std::nullopt;
    int in_all = 0, in_any = 0;
    for (const auto& sym : universe) {
        int hits = 0;
        for (const auto& s : sets) hits += s.count(sym) ? 1 : 0;
        if (hits == static_cast<int>(sets.size())) ++in_all;
        if (hits > 0) ++in_any;
    }
    if (in_any == 0) return std::nullopt;
    return 1.0 - static_cast<double>(in_all) / static_cast<double>(in_any);
}

/// Plain adjacency lists for a small graph. `out[v]` are the nodes reachable
/// in one hop under the chosen orientation.
using Adjacency = std::vector<std::vector<int>>;

inline Adjacency adjacency(const remixgraph::LineageGraph& g, remixgraph::metrics::Orientation o) {
    Adjacency out(g.node_count());
    for (remixgraph::NodeIndex v = 0; v < g.node_count(); ++v) {
        for (auto c : g.child_indices(v)) out[v].push_back(static_cast<int>(c));
        if (o == remixgraph::metrics::Orientation::Undirected) {
            for (auto p : g.parent_indices(v)) out[v].push_back(static_cast<int>(p));
        }
    }
    return out;
}

/// BFS from s: distances (-1 unreachable) and shortest-path counts.
inline void bfs_counts(const Adjacency& adj, int s, std::vector<int>& dist, std::vector<double>& sigma) {
    const int n = static_cast<int>(adj.size());
    dist.assign(n, -1);
    sigma.assign(n, 0.0);
    std::deque<int> q{s};
    dist[s] = 0;
    sigma[s] = 1.0;
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int w : adj[v]) {
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push_back(w);
            }
            if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
        }
    }
}

/// Raw betweenness by explicit pair enumeration:
/// sum over ordered (s, t), s != v != t, of sigma_sv * sigma_vt / sigma_st
/// whenever v lies on a shortest s-t path. Undirected totals are halved.
inline std::vector<double> betweenness(const remixgraph::LineageGraph& g, remixgraph::metrics::Orientation o) {
    const auto adj = adjacency(g, o);
    const int n = static_cast<int>(adj.size());
    std::vector<std::vector<int>> dist(n);
    std::vector<std::vector<double>> sigma(n);
    for (int s = 0; s < n; ++s) bfs_counts(adj, s, dist[s], sigma[s]);

    std::vector<double> raw(n, 0.0);
    for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) {
            if (s == t || dist[s][t] < 0) continue;
            for (int v = 0; v < n; ++v) {
                if (v == s || v == t || dist[s][v] < 0 || dist[v][t] < 0) continue;
                if (dist[s][v] + dist[v][t] == dist[s][t]) {
                    raw[v] += sigma[s][v] * sigma[v][t] / sigma[s][t];
                }
            }
        }
    }
    if (o == remixgraph::metrics::Orientation::Undirected) {
        for (auto& x : raw) x /= 2.0;
    }
    return raw;
}

/// Undirected hop distance, -1 when disconnected.
inline int distance(const remixgraph::LineageGraph& g, int a, int b) {
    std::vector<int> dist;
    std::vector<double> sigma;
    bfs_counts(adjacency(g, remixgraph::metrics::Orientation::Undirected), a, dist, sigma);
    return dist[b];
}

/// True if `to` is reachable from `from` following child -> parent edges.
inline bool reaches_upward(const remixgraph::LineageGraph& g, int from, int to) {
    std::vector<char> seen(g.node_count(), 0);
    std::vector<int> stack{from};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto p : g.parent_indices(v)) {
            if (static_cast<int>(p) == to) return true;
            if (!seen[p]) {
                seen[p] = 1;
                stack.push_back(static_cast<int>(p));
            }
        }
    }
    return false;
}

/// Random DAG on ids "n00".."nXX": each node may link to earlier nodes as
/// parents, so the result is acyclic by construction.
inline remixgraph::LineageGraph random_dag(std::mt19937_64& rng, int n, double edge_p, int tag_pool = 0,
                                           bool shuffle_ids = false) {
    std::vector<int> labels(n);
    for (int i = 0; i < n; ++i) labels[i] = i;
    if (shuffle_ids) std::shuffle(labels.begin(), labels.end(), rng);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    remixgraph::LineageGraph g;
    for (int i = 0; i < n; ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "n%02d", labels[i]);
        remixgraph::Design d{remixgraph::DesignId(id)};
        for (int j = 0; j < i; ++j) {
            if (unit(rng) < edge_p) {
                char pid[16];
                std::snprintf(pid, sizeof pid, "n%02d", labels[j]);
                d.parent_ids.emplace_back(pid);
            }
        }
        if (tag_pool > 0) {
            std::vector<std::string> tags;
            for (int t = 0; t < tag_pool; ++t) {
                if (unit(rng) < 0.3) tags.push_back("t" + std::to_string(t));
            }
            d.tags = remixgraph::TagSet::from_normalized(tags);
        }
        g.add_design(std::move(d));
    }
    return g;
}

} // namespace oracle
