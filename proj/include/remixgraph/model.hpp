#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace remixgraph {

/// Opaque design identifier. Surrounding whitespace is trimmed on
/// construction and the remainder must be non-empty.
class DesignId {
public:
    DesignId() = delete;
    explicit DesignId(std::string_view value);

    const std::string& value() const noexcept { return value_; }
    const char* c_str() const noexcept { return value_.c_str(); }

    friend bool operator==(const DesignId&, const DesignId&) = default;
    friend auto operator<=>(const DesignId&, const DesignId&) = default;

private:
    std::string value_;
};

/// Sorted, duplicate-free set of normalized tags (lowercase, trimmed,
/// single internal spaces, non-empty). Construct from raw strings via
/// ingest::normalize_tags or from already-normalized tags via from_normalized.
class TagSet {
public:
    TagSet() = default;

    /// Throws InvalidArgument if any tag is not in normalized form.
    static TagSet from_normalized(std::vector<std::string> tags);

    static bool is_normalized(std::string_view tag) noexcept;

    std::size_t size() const noexcept { return tags_.size(); }
    bool empty() const noexcept { return tags_.empty(); }
    bool contains(std::string_view tag) const noexcept;

    auto begin() const noexcept { return tags_.begin(); }
    auto end() const noexcept { return tags_.end(); }
    const std::vector<std::string>& values() const noexcept { return tags_; }

    friend bool operator==(const TagSet&, const TagSet&) = default;

private:
    std::vector<std::string> tags_;
};

using Timestamp = std::chrono::sys_seconds;

struct Design {
    explicit Design(DesignId id_) : id(std::move(id_)) {}

    DesignId id;
    std::string title;
    std::string author;
    std::optional<Timestamp> created_at;
    TagSet tags;
    std::vector<DesignId> parent_ids;
    bool is_stub = false;

    static Design stub(DesignId id) {
        Design d(std::move(id));
        d.is_stub = true;
        return d;
    }
};

using NodeIndex = std::uint32_t;

/// Acyclic remix network. Edges are stored child -> parent; a mirrored
/// parent -> children index is kept in sync. Node indices are dense and
/// follow first-insertion order.
class LineageGraph {
public:
    /// Inserts a design, or fills in a stub with the same id (the stub's
    /// children are kept). Unknown parents become stubs. All checks run
    /// before anything is mutated.
    void add_design(Design design);

    /// Adds child -> parent. Re-adding an existing edge is a no-op.
    void add_edge(const DesignId& child, const DesignId& parent);

    /// Creates a stub for `id` unless a node already exists. Returns true
    /// when a stub was created.
    bool ensure_stub(const DesignId& id);

    /// Disallows further mutation; the graph may then be shared across threads.
    void freeze() noexcept { frozen_ = true; }
    bool frozen() const noexcept { return frozen_; }

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }
    std::size_t stub_count() const noexcept;
    bool empty() const noexcept { return nodes_.empty(); }

    bool contains(const DesignId& id) const noexcept { return index_.contains(id.value()); }
    std::optional<NodeIndex> find(const DesignId& id) const noexcept;
    NodeIndex index_of(const DesignId& id) const;

    const Design& design(const DesignId& id) const { return nodes_[index_of(id)]; }
    const Design& node(NodeIndex i) const { return nodes_.at(i); }
    std::span<const Design> nodes() const noexcept { return nodes_; }

    /// Parents in the order they were listed.
    std::vector<DesignId> parents_of(const DesignId& id) const;
    /// Children sorted by id.
    std::vector<DesignId> children_of(const DesignId& id) const;

    std::span<const NodeIndex> parent_indices(NodeIndex i) const { return parents_.at(i); }
    std::span<const NodeIndex> child_indices(NodeIndex i) const { return children_.at(i); }

    /// True when `ancestor` is reachable from `descendant` along child -> parent
    /// edges (a node is not its own ancestor).
    bool is_ancestor(NodeIndex ancestor, NodeIndex descendant) const;

    /// Hop count ignoring edge direction; nullopt when disconnected.
    std::optional<std::size_t> undirected_distance(const DesignId& a, const DesignId& b) const;

    /// Parents before children (Kahn). Throws Error if a cycle is found.
    std::vector<NodeIndex> topological_order() const;

    struct Components {
        std::vector<std::size_t> label; // per node, dense from 0 by smallest member index
        std::size_t count = 0;
    };
    Components weak_components() const;

    /// Edges whose endpoints both carry timestamps and whose child predates
    /// its parent.
    std::size_t timestamp_violations() const;

private:
    void require_mutable() const;
    NodeIndex insert_node(Design design);
    void link(NodeIndex child, NodeIndex parent);
    bool has_edge(NodeIndex child, NodeIndex parent) const;

    std::vector<Design> nodes_;
    std::unordered_map<std::string, NodeIndex> index_;
    std::vector<std::vector<NodeIndex>> parents_;
    std::vector<std::vector<NodeIndex>> children_;
    std::size_t edge_count_ = 0;
    bool frozen_ = false;
};

/// Non-stub designs listing at least two parents (stub parents included),
/// sorted by id.
std::vector<DesignId> multi_parent_designs(const LineageGraph& graph);

} // namespace remixgraph

template <>
struct std::hash<remixgraph::DesignId> {
    std::size_t operator()(const remixgraph::DesignId& id) const noexcept {
        return std::hash<std::string>{}(id.value());
    }
};
