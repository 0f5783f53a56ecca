#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "remixgraph/model.hpp"

namespace remixgraph::metrics {

enum class Orientation {
    Directed,   // shortest paths follow parent -> child (direction of influence)
    Undirected,
};

const char* to_string(Orientation o) noexcept;
std::optional<Orientation> parse_orientation(std::string_view text) noexcept;

/// Per-node betweenness, indexed by NodeIndex.
struct CentralityResult {
    Orientation orientation = Orientation::Undirected;
    std::vector<double> raw;
    std::vector<double> normalized;
};

/// Maximum possible raw betweenness for a node: (n-1)(n-2), halved for
/// undirected graphs. Zero for n <= 2.
double normalization_factor(std::size_t n, Orientation orientation) noexcept;

/// Exact Brandes betweenness over unweighted shortest paths.
///
/// Sources are split into a fixed set of blocks whose partial sums are
/// added in block order, so the result is bit-identical for any `workers`
/// value. `workers == 0` uses the hardware concurrency.
CentralityResult betweenness(const LineageGraph& graph, Orientation orientation,
                             std::size_t workers = 0);

struct IndependenceResult {
    std::optional<double> value; // nullopt = undefined
    std::size_t parent_count = 0;
    bool has_stub_parent = false;
};

/// 1 - |P1 ∩ ... ∩ Pn| / |P1 ∪ ... ∪ Pn| over a family of tag sets.
/// nullopt when fewer than two sets are given or the union is empty.
std::optional<double> collective_jaccard_distance(std::span<const TagSet* const> sets);

/// Independence of a design's parents. Undefined with fewer than two
/// parents, any stub parent, or an empty union of parent tags.
IndependenceResult independence_score(const DesignId& id, const LineageGraph& graph);

enum class Quadrant { Q1, Q2, Q3, Q4 };

/// Q1 = (low, low), Q2 = (high betweenness, low independence),
/// Q3 = (low betweenness, high independence), Q4 = (high, high).
/// "High" is strictly above the threshold.
const char* to_string(Quadrant q) noexcept;

struct Thresholds {
    double betweenness = 0.0;
    double independence = 0.0;
};

Quadrant quadrant_of(double betweenness, double independence, const Thresholds& t) noexcept;

struct DesignScore {
    DesignId id;
    double betweenness = 0.0; // normalized
    std::optional<double> independence;
    std::optional<Quadrant> quadrant;
};

/// One row per non-stub multi-parent design, sorted by id.
std::vector<DesignScore> score_table(const LineageGraph& graph, const CentralityResult& centrality);
std::vector<DesignScore> score_table(const LineageGraph& graph,
                                     Orientation orientation = Orientation::Undirected,
                                     std::size_t workers = 0);

struct Classification {
    std::vector<DesignScore> rows;
    Thresholds thresholds; // the thresholds actually applied
};

/// Labels rows with defined independence; undefined rows pass through
/// unlabeled. Without explicit thresholds the per-dimension medians over
/// defined rows are used (mean of the two middle values for even counts).
/// Throws EmptyTable if thresholds must be derived and no row is defined.
Classification classify_quadrants(std::vector<DesignScore> table,
                                  std::optional<Thresholds> thresholds = std::nullopt);

struct Summary {
    std::size_t total_designs = 0; // excluding stubs
    std::size_t stubs = 0;
    std::size_t edges = 0;
    std::size_t multi_parent = 0;          // stub parents count as references
    std::size_t multi_parent_resolved = 0; // at least two parents that are not stubs
    double multi_parent_ratio = 0.0;       // multi_parent / total_designs, 0 when empty
    std::size_t components = 0;            // weakly connected, stubs included
    std::size_t timestamp_violations = 0;
};

Summary summarize(const LineageGraph& graph);

} // namespace remixgraph::metrics
