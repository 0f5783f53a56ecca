#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "remixgraph/model.hpp"

namespace remixgraph::recommend {

/// A pair of designs proposed for combination; id_a < id_b.
struct PairCandidate {
    DesignId id_a;
    DesignId id_b;
    double tag_distance = 0.0;
    double structural_separation = 0.0;
    double combined_score = 0.0; // tag_distance * structural_separation
};

/// Jaccard distance between the two designs' own tags; nullopt when both
/// are untagged. Throws UnknownDesign or StubDesign.
std::optional<double> pair_tag_distance(const DesignId& a, const DesignId& b, const LineageGraph& graph);

/// Diameter of the largest weakly connected component (ties go to the
/// component containing the lowest node index), at least 1.
std::size_t default_separation_cap(const LineageGraph& graph, std::size_t workers = 0);

/// min(distance, cap) / cap; disconnected pairs score 1.
double structural_separation(const DesignId& a, const DesignId& b, const LineageGraph& graph,
                             std::size_t cap);

struct Exhaustive {};

/// Scores `samples` distinct unordered pairs drawn uniformly (without
/// replacement) from the non-stub designs. With samples >= the number of
/// pairs every pair is scored.
struct Sampled {
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

struct Options {
    std::size_t k = 10;
    std::optional<std::size_t> cap; // defaults to default_separation_cap
    std::size_t workers = 0;
};

/// Top-k pairs by combined score, ties broken by (id_a, id_b). Stubs,
/// ancestor/descendant pairs and pairs with undefined tag distance are
/// skipped.
std::vector<PairCandidate> recommend(const LineageGraph& graph, const Options& options, Exhaustive);
std::vector<PairCandidate> recommend(const LineageGraph& graph, const Options& options,
                                     const Sampled& strategy);

/// Strict ordering used for ranking: higher combined score first.
bool ranks_before(const PairCandidate& x, const PairCandidate& y) noexcept;

} // namespace remixgraph::recommend
