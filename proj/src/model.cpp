#include "remixgraph/model.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "remixgraph/errors.hpp"

namespace remixgraph {

namespace {

bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

} // namespace

DesignId::DesignId(std::string_view value) : value_(trim(value)) {
    if (value_.empty()) {
        throw InvalidArgument("design id must be non-empty");
    }
}

// ---------------------------------------------------------------------------
// TagSet

bool TagSet::is_normalized(std::string_view tag) noexcept {
    if (tag.empty() || tag.front() == ' ' || tag.back() == ' ') return false;
    char prev = '\0';
    for (char c : tag) {
        if (c >= 'A' && c <= 'Z') return false;
        if (is_space(c) && c != ' ') return false;
        if (c == ' ' && prev == ' ') return false;
        prev = c;
    }
    return true;
}

TagSet TagSet::from_normalized(std::vector<std::string> tags) {
    for (const auto& t : tags) {
        if (!is_normalized(t)) {
            throw InvalidArgument("tag '" + t + "' is not normalized");
        }
    }
    std::sort(tags.begin(), tags.end());
    tags.erase(std::unique(tags.begin(), tags.end()), tags.end());
    TagSet out;
    out.tags_ = std::move(tags);
    return out;
}

bool TagSet::contains(std::string_view tag) const noexcept {
    return std::binary_search(tags_.begin(), tags_.end(), tag);
}

// ---------------------------------------------------------------------------
// LineageGraph

void LineageGraph::require_mutable() const {
    if (frozen_) throw FrozenGraph();
}

std::optional<NodeIndex> LineageGraph::find(const DesignId& id) const noexcept {
    auto it = index_.find(id.value());
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

NodeIndex LineageGraph::index_of(const DesignId& id) const {
    auto it = index_.find(id.value());
    if (it == index_.end()) throw UnknownDesign(id.value());
    return it->second;
}

std::size_t LineageGraph::stub_count() const noexcept {
    return static_cast<std::size_t>(
        std::count_if(nodes_.begin(), nodes_.end(), [](const Design& d) { return d.is_stub; }));
}

NodeIndex LineageGraph::insert_node(Design design) {
    const auto idx = static_cast<NodeIndex>(nodes_.size());
    index_.emplace(design.id.value(), idx);
    design.parent_ids.clear();
    nodes_.push_back(std::move(design));
    parents_.emplace_back();
    children_.emplace_back();
    return idx;
}

bool LineageGraph::has_edge(NodeIndex child, NodeIndex parent) const {
    const auto& ps = parents_[child];
    return std::find(ps.begin(), ps.end(), parent) != ps.end();
}

void LineageGraph::link(NodeIndex child, NodeIndex parent) {
    parents_[child].push_back(parent);
    nodes_[child].parent_ids.push_back(nodes_[parent].id);
    auto& kids = children_[parent];
    auto pos = std::lower_bound(kids.begin(), kids.end(), child, [this](NodeIndex a, NodeIndex b) {
        return nodes_[a].id < nodes_[b].id;
    });
    kids.insert(pos, child);
    ++edge_count_;
}

bool LineageGraph::is_ancestor(NodeIndex ancestor, NodeIndex descendant) const {
    if (ancestor == descendant) return false;
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<NodeIndex> stack{descendant};
    seen[descendant] = 1;
    while (!stack.empty()) {
        NodeIndex v = stack.back();
        stack.pop_back();
        for (NodeIndex p : parents_[v]) {
            if (p == ancestor) return true;
            if (!seen[p]) {
                seen[p] = 1;
                stack.push_back(p);
            }
        }
    }
    return false;
}

void LineageGraph::add_design(Design design) {
    require_mutable();
    if (design.is_stub && (!design.tags.empty() || !design.title.empty() || !design.author.empty())) {
        throw InvalidArgument("stub design '" + design.id.value() + "' must not carry metadata");
    }

    auto existing = find(design.id);
    if (existing && !nodes_[*existing].is_stub) {
        throw DuplicateDesign(design.id.value());
    }

    std::unordered_set<std::string_view> listed;
    for (const auto& p : design.parent_ids) {
        if (p == design.id) throw SelfLoop(design.id.value());
        if (!listed.insert(p.value()).second) {
            throw InvalidArgument("design '" + design.id.value() + "' lists parent '" + p.value() +
                                  "' more than once");
        }
    }

    // Only a stub that already has children can close a cycle.
    if (existing && !children_[*existing].empty()) {
        for (const auto& p : design.parent_ids) {
            if (auto pi = find(p); pi && (*pi == *existing || is_ancestor(*existing, *pi))) {
                throw CycleError(design.id.value(), p.value());
            }
        }
    }

    auto parent_ids = std::move(design.parent_ids);
    NodeIndex child;
    if (existing) {
        child = *existing;
        auto& slot = nodes_[child];
        slot.title = std::move(design.title);
        slot.author = std::move(design.author);
        slot.created_at = design.created_at;
        slot.tags = std::move(design.tags);
        slot.is_stub = design.is_stub;
    } else {
        child = insert_node(std::move(design));
    }

    for (const auto& p : parent_ids) {
        auto pi = find(p);
        NodeIndex parent = pi ? *pi : insert_node(Design::stub(p));
        if (!has_edge(child, parent)) link(child, parent);
    }
}

void LineageGraph::add_edge(const DesignId& child, const DesignId& parent) {
    require_mutable();
    const NodeIndex c = index_of(child);
    const NodeIndex p = index_of(parent);
    if (c == p) throw SelfLoop(child.value());
    if (has_edge(c, p)) return;
    if (!children_[c].empty() && is_ancestor(c, p)) {
        throw CycleError(child.value(), parent.value());
    }
    link(c, p);
}

bool LineageGraph::ensure_stub(const DesignId& id) {
    require_mutable();
    if (contains(id)) return false;
    insert_node(Design::stub(id));
    return true;
}

std::vector<DesignId> LineageGraph::parents_of(const DesignId& id) const {
    std::vector<DesignId> out;
    for (NodeIndex p : parents_[index_of(id)]) out.push_back(nodes_[p].id);
    return out;
}

std::vector<DesignId> LineageGraph::children_of(const DesignId& id) const {
    std::vector<DesignId> out;
    for (NodeIndex c : children_[index_of(id)]) out.push_back(nodes_[c].id);
    return out;
}

std::optional<std::size_t> LineageGraph::undirected_distance(const DesignId& a, const DesignId& b) const {
    const NodeIndex src = index_of(a);
    const NodeIndex dst = index_of(b);
    if (src == dst) return 0;

    constexpr std::size_t unseen = static_cast<std::size_t>(-1);
    std::vector<std::size_t> dist(nodes_.size(), unseen);
    std::deque<NodeIndex> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
        NodeIndex v = queue.front();
        queue.pop_front();
        auto visit = [&](NodeIndex w) {
            if (dist[w] != unseen) return false;
            dist[w] = dist[v] + 1;
            queue.push_back(w);
            return w == dst;
        };
        for (NodeIndex w : parents_[v]) {
            if (visit(w)) return dist[w];
        }
        for (NodeIndex w : children_[v]) {
            if (visit(w)) return dist[w];
        }
    }
    return std::nullopt;
}

std::vector<NodeIndex> LineageGraph::topological_order() const {
    const std::size_t n = nodes_.size();
    std::vector<std::size_t> pending(n);
    std::vector<NodeIndex> order;
    order.reserve(n);
    for (NodeIndex v = 0; v < n; ++v) {
        pending[v] = parents_[v].size();
        if (pending[v] == 0) order.push_back(v);
    }
    for (std::size_t head = 0; head < order.size(); ++head) {
        for (NodeIndex c : children_[order[head]]) {
            if (--pending[c] == 0) order.push_back(c);
        }
    }
    if (order.size() != n) throw Error("lineage graph contains a cycle");
    return order;
}

LineageGraph::Components LineageGraph::weak_components() const {
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    Components out;
    out.label.assign(nodes_.size(), unset);
    std::vector<NodeIndex> stack;
    for (NodeIndex s = 0; s < nodes_.size(); ++s) {
        if (out.label[s] != unset) continue;
        const std::size_t label = out.count++;
        out.label[s] = label;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeIndex v = stack.back();
            stack.pop_back();
            for (const auto* adj : {&parents_[v], &children_[v]}) {
                for (NodeIndex w : *adj) {
                    if (out.label[w] == unset) {
                        out.label[w] = label;
                        stack.push_back(w);
                    }
                }
            }
        }
    }
    return out;
}

std::size_t LineageGraph::timestamp_violations() const {
    std::size_t count = 0;
    for (NodeIndex c = 0; c < nodes_.size(); ++c) {
        const auto& child_ts = nodes_[c].created_at;
        if (!child_ts) continue;
        for (NodeIndex p : parents_[c]) {
            const auto& parent_ts = nodes_[p].created_at;
            if (parent_ts && *child_ts < *parent_ts) ++count;
        }
    }
    return count;
}

std::vector<DesignId> multi_parent_designs(const LineageGraph& graph) {
    std::vector<DesignId> out;
    for (NodeIndex i = 0; i < graph.node_count(); ++i) {
        const auto& d = graph.node(i);
        if (!d.is_stub && graph.parent_indices(i).size() >= 2) out.push_back(d.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace remixgraph
